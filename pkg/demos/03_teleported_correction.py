"""
One teleportation-based correction cycle
========================================

The input block is teleported through an encoded Bell pair.  Only logical X
and Z readouts are needed, and both are decoded from whichever qudits
arrived.
"""

import numpy as np

from qpyc.codes import three_qutrit_code
from qpyc.simulator import encode_qpyc, tec_cycle
from qpyc.simulator.tec import TecNoise

code = three_qutrit_code()
rng = np.random.default_rng(3)
amps = rng.normal(size=3) + 1j * rng.normal(size=3)
amps /= np.linalg.norm(amps)

for erased in [(), (0,), (1,), (0, 2)]:
    res = tec_cycle(encode_qpyc(code, amps), code, TecNoise(erased=erased), rng=rng)
    print(f"erased {erased!s:7s} -> {res.status:17s} fidelity {res.fidelity:.6f}")

###############################################################################
# A distance-2 code notices a single unheralded Weyl error but cannot tell
# where it is, so the cycle reports failure instead of handing back garbage.
counts = {}
for q in range(3):
    for a in range(3):
        for b in range(3):
            res = tec_cycle(encode_qpyc(code, amps), code, TecNoise(weyl={q: (a, b)}), rng=rng)
            counts[res.status] = counts.get(res.status, 0) + 1
print("single-qudit Weyl errors:", counts)
