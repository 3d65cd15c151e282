"""
What a secret bit costs
=======================

Resources times time, per km, per secret bit per second, minimized over
code size and station spacing.  The baseline is a parity code with photon
loss as its only imperfection.
"""

from qpyc.costopt import CostQuery, LossOnlyQpc, compare_ratio, cost_m, cost_q

q = CostQuery(10_000.0)
base = LossOnlyQpc()
for label, fn, metric in (("qubits", cost_q, "qubits"), ("modes", cost_m, "modes")):
    ours = fn(q)
    theirs = base.cost(CostQuery(10_000.0, metric))
    print(f"{label}: polynomial code {ours.cost:.3e} (k={ours.k}, d={ours.d}, L0={ours.L0})  "
          f"parity code {theirs.cost:.3e} (n={theirs.n}, m={theirs.m})  "
          f"ratio {theirs.cost / ours.cost:.2f}")

###############################################################################
# Gate errors scale like d^4 here, so larger codes lose their edge quickly.
for row in compare_ratio([10_000.0], [0.0, 1e-10, 1e-9, 1e-8], "gate", baseline=base):
    print(f"eps_g~ = {row['eps_tilde']:.0e}: ratio {row['ratio']:.2f} at d={row['opt_d']}")
