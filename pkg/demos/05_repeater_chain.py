"""
Key rates along a one-way repeater chain
========================================

Each station decodes and re-encodes.  A hop fails (heralded) when more than
k qudits are lost, and decodes wrongly when losses and readout errors
together exceed the code's reach.
"""

import numpy as np

from qpyc.codes import qpyc_code
from qpyc.repeater import RepeaterConfig, key_rate, l_tot_max, q_max

for d in (2, 3, 5, 7):
    print(f"d={d}: key fraction vanishes at Q = {q_max(d):.4f}")

for k in (1, 2, 3):
    print(f"k={k}: range at eps=1e-4, L0=1 km: {l_tot_max(qpyc_code(k), 1e-4, 1.0):7.1f} km")

###############################################################################
# Rate against distance for a lossless-gate chain with 1 km spacing.
for k in (1, 2, 3):
    rates = [key_rate(RepeaterConfig(L, 1.0, qpyc_code(k)))[0] for L in (100, 1000, 5000, 10_000)]
    print(f"k={k}:", "  ".join(f"{r:10.3e}" for r in rates), "1/s")

# With operation errors the rate drops off a cliff once Q passes Q_max.
for L in np.arange(200, 1401, 200):
    R, rt0 = key_rate(RepeaterConfig(float(L), 1.0, qpyc_code(2), 1e-4, 1e-4, 1e-4))
    print(f"{L:5d} km  R t0 = {rt0:.4f}")
