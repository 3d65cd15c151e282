"""
Surface codes under erasure
===========================

An erasure pattern on the surface code is fatal exactly when the erased
edges (or their duals) contain a non-trivial cycle.  That is a bond
percolation question, answered here with union-find.
"""

from qpyc.codes import qpyc_failure_prob
from qpyc.percolation import mc_success_prob, surface_lattice

for geometry in ("toric", "planar"):
    print(geometry, "edges at D=3:", surface_lattice(3, geometry).n_edges)

# Similar Hilbert-space size, 20% loss.  Fewer runs than the acceptance
# suite, so the error bars are wider.
for D, k in ((5, 6), (7, 9), (9, 15)):
    r = mc_success_prob(D, 0.2, runs=200_000, seed=D, geometry="planar")
    print(f"D={D}: surface failure {1 - r.estimate:.2e} +- {r.std_error:.0e}   "
          f"k={k}: polynomial code failure {qpyc_failure_prob(k, 0.2):.2e}")

###############################################################################
# Near 50% loss the finite-size toric and planar lattices behave differently.
for geometry in ("toric", "planar"):
    r = mc_success_prob(11, 0.5, runs=50_000, seed=0, geometry=geometry)
    print(f"D=11 at p=0.5, {geometry}: success {r.estimate:.3f}")
