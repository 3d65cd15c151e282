import numpy as np
import pytest

from qpyc.percolation import (
    CSV_COLUMNS,
    decodable,
    decodable_bruteforce,
    failure_modes,
    mc_success_prob,
    sample_erasure,
    surface_lattice,
    sweep_rows,
    threshold_crossing,
)


def test_edge_counts():
    for D in (3, 5, 7):
        assert surface_lattice(D, "toric").n_edges == 2 * D * D
        assert surface_lattice(D, "planar").n_edges == D * D + (D - 1) ** 2
    with pytest.raises(ValueError):
        surface_lattice(3, "hexagonal")


def test_trivial_patterns():
    for geometry in ("toric", "planar"):
        lat = surface_lattice(3, geometry)
        assert decodable(lat, np.zeros(lat.n_edges, bool))
        assert not decodable(lat, np.ones(lat.n_edges, bool))


def test_wrapping_row_fails_primal():
    lat = surface_lattice(4, "toric")
    G = lat.primal
    row = (G.dx != 0) & (G.u // 4 == 0)
    assert row.sum() == 4
    assert failure_modes(lat, row) == (True, False)
    # drop one edge and the loop is broken
    row[np.flatnonzero(row)[0]] = False
    assert decodable(lat, row)


@pytest.mark.parametrize("geometry", ["toric", "planar"])
def test_union_find_vs_bruteforce(geometry):
    lat = surface_lattice(3, geometry)
    rng = np.random.default_rng(12)
    for p in (0.2, 0.4, 0.6):
        for _ in range(300):
            s = sample_erasure(lat, p, rng)
            assert decodable(lat, s) == decodable_bruteforce(lat, s)


def test_bruteforce_limit():
    lat = surface_lattice(5, "toric")
    with pytest.raises(ValueError):
        decodable_bruteforce(lat, np.ones(lat.n_edges, bool))


def test_self_duality_toric():
    # at p = 1/2 primal and dual failures are equally likely on the self-dual torus
    r = mc_success_prob(5, 0.5, runs=200_000, seed=1, geometry="toric")
    a, b = r.meta["primal_failures"], r.meta["dual_failures"]
    assert abs(a - b) < 4 * np.sqrt(a + b)


def test_monotone_and_endpoints():
    vals = [mc_success_prob(5, p, runs=20_000, seed=2).estimate for p in (0.0, 0.2, 0.4, 0.6, 1.0)]
    assert vals[0] == 1.0 and vals[-1] == 0.0
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_reproducible_across_threads():
    a = mc_success_prob(5, 0.3, runs=50_000, seed=9, threads=1, block_size=5_000)
    b = mc_success_prob(5, 0.3, runs=50_000, seed=9, threads=4, block_size=5_000)
    assert a == b


def test_threshold_crossing_d3():
    t = threshold_crossing(3, np.linspace(0.3, 0.5, 5), runs=50_000, seed=0)
    assert 0.3 < t < 0.5
    with pytest.raises(ValueError):
        threshold_crossing(3, [0.01, 0.02], runs=5_000)


def test_sweep_rows_columns():
    rows = sweep_rows([3], [0.1, 0.2], runs=2_000)
    assert len(rows) == 2 and set(rows[0]) == set(CSV_COLUMNS)


def test_sample_validation():
    with pytest.raises(ValueError):
        sample_erasure(surface_lattice(3), 1.5)
    with pytest.raises(ValueError):
        mc_success_prob(3, 0.1, runs=10)
