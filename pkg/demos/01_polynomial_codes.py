"""
Polynomial codes on qudits
==========================

A logical digit ``s`` is the top coefficient of a degree-k polynomial over
Z_d, and the 2k+1 physical qudits hold its values at 2k+1 points.  Any k+1
surviving values pin the polynomial down, so any k losses are harmless.
"""

import numpy as np

from qpyc.codes import qpyc_code, qpyc_logical_state, qpyc_success_prob, three_qutrit_code
from qpyc.field import PrimeModulus, lagrange_interpolate

# The smallest member: three qutrits, one logical qutrit.
code = three_qutrit_code()
for s in range(3):
    print(f"|{s}>_L =", " + ".join("|" + "".join(map(str, t)) + ">"
                                   for t in qpyc_logical_state(code, s).terms))

# Decoding classically is interpolation.  Lose qudit 0 of the codeword for
# the polynomial 2 + t (logical value 1), keep points 1 and 2.
F = PrimeModulus(3)
word = code.encode_digits([2, 1])
print("codeword", word)
poly = lagrange_interpolate([(F(1), F(word[1])), (F(2), F(word[2]))], 1)
print("recovered coefficients", poly.coefficients)

###############################################################################
# Larger codes need a larger prime, since 2k+1 distinct points must exist.
for k in (1, 2, 3, 6, 9):
    c = qpyc_code(k)
    print(f"k={k:2d}  {c.name:16s}  success at 20% loss: {qpyc_success_prob(k, 0.2):.6f}")

# At exactly 50% loss every code size gives 1/2.
print("at p=0.5:", np.round([qpyc_success_prob(k, 0.5) for k in (1, 5, 25)], 12))
