"""
Recovering from a lost qudit
============================

State-vector runs of the small recovery circuits.  An erasure is modelled as
a secret Z measurement of the lost qudit; every hidden outcome is a separate
branch and recovery has to work on all of them.
"""

import numpy as np

from qpyc.codes import four_qubit_code, three_qutrit_code
from qpyc.simulator import encode_four_qubit, encode_qpyc, erase, fidelity
from qpyc.simulator import logical_measurement_under_erasure, recover_four_qubit, recover_three_qutrit
from qpyc.simulator.recovery import recovered_logical_state
from qpyc.simulator.state import outcome_probabilities

rng = np.random.default_rng(1)
amps = rng.normal(size=3) + 1j * rng.normal(size=3)
amps /= np.linalg.norm(amps)

code = three_qutrit_code()
enc = encode_qpyc(code, amps)
for e in range(3):
    for o in np.flatnonzero(outcome_probabilities(enc, e) > 1e-12):
        out = recover_three_qutrit(erase(enc, e, outcome=int(o)), e)
        f = fidelity(recovered_logical_state(out, code, e), amps)
        print(f"[[3,1,2]]_3 erased {e}, hidden outcome {o}: fidelity {f:.12f}")

# Two logical qubits in four physical ones.  Here a helper qubit is also
# measured; its outcome is drawn at random and fixed up afterwards.
amps4 = rng.normal(size=4) + 1j * rng.normal(size=4)
amps4 /= np.linalg.norm(amps4)
enc4 = encode_four_qubit(amps4)
for o in (0, 1):
    out = recover_four_qubit(erase(enc4, 2, outcome=o), 2, rng=rng)
    print(f"[[4,2,2]] erased 2, hidden outcome {o}: fidelity "
          f"{fidelity(recovered_logical_state(out, four_qubit_code(), 2), amps4):.12f}")

###############################################################################
# Measuring instead of recovering: pick logical operators that avoid the hole.
print("qutrit code, qudit 0 lost:")
print("  X_L =", logical_measurement_under_erasure(code, {0}, "X"))
print("  Z_L =", logical_measurement_under_erasure(code, {0}, "Z"))
print("[[4,2,2]], qubit 0 lost:", logical_measurement_under_erasure(four_qubit_code(), {0}, "X"))
