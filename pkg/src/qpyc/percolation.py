"""Surface-code erasure decoding as bond percolation on the square lattice.

An erasure pattern is undecodable when the erased edges carry a logical
operator: a non-contractible cycle on the torus, or a boundary-to-boundary
path on the planar patch, in either the primal or the dual lattice.  The
check is a union-find pass per lattice (numba); toric edges carry their
displacement so that closing a loop with nonzero net winding is noticed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numba
import numpy as np

from .montecarlo import MonteCarloResult, run_blocks

GEOMETRIES = ("toric", "planar")


@dataclass(frozen=True)
class GraphView:
    """One of the two lattices: vertices, edge endpoints and per-edge data.

    Toric: ``dx, dy`` are edge displacements.  Planar: ``source``/``sink`` are
    the two virtual boundary vertices.
    """

    n_vertices: int
    u: np.ndarray
    v: np.ndarray
    dx: np.ndarray | None = None
    dy: np.ndarray | None = None
    source: int = -1
    sink: int = -1


@dataclass(frozen=True, eq=False)
class SurfaceLattice:
    D: int
    geometry: str
    primal: GraphView
    dual: GraphView

    @property
    def n_edges(self) -> int:
        return len(self.primal.u)

    def metadata(self) -> dict:
        return {"D": self.D, "geometry": self.geometry, "edges": self.n_edges}


def _arr(x):
    return np.array(x, dtype=np.int64)


def _toric(D: int) -> SurfaceLattice:
    def idx(x, y):
        return (y % D) * D + x % D

    P = {k: [] for k in "uvxy"}
    Q = {k: [] for k in "uvxy"}

    def add(G, a, b, dx, dy):
        G["u"].append(a)
        G["v"].append(b)
        G["x"].append(dx)
        G["y"].append(dy)

    # edges 0..D^2-1 horizontal, D^2..2D^2-1 vertical; edge (x, y) sits at row y
    for y in range(D):
        for x in range(D):
            add(P, idx(x, y), idx(x + 1, y), 1, 0)
            add(Q, idx(x, y - 1), idx(x, y), 0, 1)
    for y in range(D):
        for x in range(D):
            add(P, idx(x, y), idx(x, y + 1), 0, 1)
            add(Q, idx(x - 1, y), idx(x, y), 1, 0)
    mk = lambda G: GraphView(D * D, _arr(G["u"]), _arr(G["v"]), _arr(G["x"]), _arr(G["y"]))
    return SurfaceLattice(D, "toric", mk(P), mk(Q))


def _planar(D: int) -> SurfaceLattice:
    # primal vertices (r, c), r < D, c < D-1, plus left/right boundary nodes;
    # dual faces (fr, fc), fr < D-1, fc < D, plus top/bottom boundary nodes
    n_in = D * (D - 1)
    left, right = n_in, n_in + 1
    n_f = (D - 1) * D
    top, bottom = n_f, n_f + 1

    def vid(r, c):
        return left if c < 0 else right if c >= D - 1 else r * (D - 1) + c

    def fid(fr, fc):
        return top if fr < 0 else bottom if fr >= D - 1 else fr * D + fc

    pu, pv, du, dv = [], [], [], []
    for r in range(D):
        for c in range(D):
            pu.append(vid(r, c - 1))
            pv.append(vid(r, c))
            du.append(fid(r - 1, c))
            dv.append(fid(r, c))
    for r in range(D - 1):
        for c in range(D - 1):
            pu.append(vid(r, c))
            pv.append(vid(r + 1, c))
            du.append(fid(r, c))
            dv.append(fid(r, c + 1))
    return SurfaceLattice(
        D, "planar",
        GraphView(n_in + 2, _arr(pu), _arr(pv), source=left, sink=right),
        GraphView(n_f + 2, _arr(du), _arr(dv), source=top, sink=bottom),
    )


@lru_cache(maxsize=None)
def surface_lattice(D: int, geometry: str = "toric") -> SurfaceLattice:
    """Toric: ``2 D^2`` edges.  Planar: ``D^2 + (D-1)^2`` edges."""
    if D < 2:
        raise ValueError("D must be >= 2")
    if geometry == "toric":
        return _toric(D)
    if geometry == "planar":
        return _planar(D)
    raise ValueError(f"geometry must be one of {GEOMETRIES}")


# --------------------------------------------------------------------------
# union-find kernels


@numba.njit(cache=True, nogil=True)
def _find_off(parent, off, u):
    dx = 0
    dy = 0
    r = u
    while parent[r] != r:
        dx += off[r, 0]
        dy += off[r, 1]
        r = parent[r]
    cx = dx
    cy = dy
    w = u
    while parent[w] != w:
        nxt = parent[w]
        ox = off[w, 0]
        oy = off[w, 1]
        parent[w] = r
        off[w, 0] = cx
        off[w, 1] = cy
        cx -= ox
        cy -= oy
        w = nxt
    return r, dx, dy


@numba.njit(cache=True, nogil=True)
def _wraps(nv, eu, ev, edx, edy, mask):
    parent = np.arange(nv)
    off = np.zeros((nv, 2), np.int64)
    for e in range(eu.shape[0]):
        if not mask[e]:
            continue
        ru, ux, uy = _find_off(parent, off, eu[e])
        rv, vx, vy = _find_off(parent, off, ev[e])
        if ru == rv:
            if ux + edx[e] != vx or uy + edy[e] != vy:
                return True
        else:
            parent[rv] = ru
            off[rv, 0] = ux + edx[e] - vx
            off[rv, 1] = uy + edy[e] - vy
    return False


@numba.njit(cache=True, nogil=True)
def _find(parent, u):
    r = u
    while parent[r] != r:
        r = parent[r]
    while parent[u] != r:
        nxt = parent[u]
        parent[u] = r
        u = nxt
    return r


@numba.njit(cache=True, nogil=True)
def _connects(nv, eu, ev, a, b, mask):
    parent = np.arange(nv)
    for e in range(eu.shape[0]):
        if mask[e]:
            ru = _find(parent, eu[e])
            rv = _find(parent, ev[e])
            if ru != rv:
                parent[ru] = rv
    return _find(parent, a) == _find(parent, b)


@numba.njit(cache=True, nogil=True)
def _count_toric(masks, pn, pu, pv, pdx, pdy, qn, qu, qv, qdx, qdy):
    out = np.zeros(3, np.int64)  # primal, dual, either
    for i in range(masks.shape[0]):
        a = _wraps(pn, pu, pv, pdx, pdy, masks[i])
        b = _wraps(qn, qu, qv, qdx, qdy, masks[i])
        out[0] += a
        out[1] += b
        out[2] += a or b
    return out


@numba.njit(cache=True, nogil=True)
def _count_planar(masks, pn, pu, pv, ps, pt, qn, qu, qv, qs, qt):
    out = np.zeros(3, np.int64)
    for i in range(masks.shape[0]):
        a = _connects(pn, pu, pv, ps, pt, masks[i])
        b = _connects(qn, qu, qv, qs, qt, masks[i])
        out[0] += a
        out[1] += b
        out[2] += a or b
    return out


def _count(lattice: SurfaceLattice, masks: np.ndarray) -> np.ndarray:
    P, Q = lattice.primal, lattice.dual
    masks = np.ascontiguousarray(masks, dtype=np.bool_)
    if lattice.geometry == "toric":
        return _count_toric(masks, P.n_vertices, P.u, P.v, P.dx, P.dy,
                            Q.n_vertices, Q.u, Q.v, Q.dx, Q.dy)
    return _count_planar(masks, P.n_vertices, P.u, P.v, P.source, P.sink,
                         Q.n_vertices, Q.u, Q.v, Q.source, Q.sink)


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ErasureSample:
    erased: np.ndarray  # bool per edge
    seed: int | None = None

    def edges(self) -> list[int]:
        return [int(e) for e in np.flatnonzero(self.erased)]


def sample_erasure(lattice: SurfaceLattice, p_l: float, rng=None) -> ErasureSample:
    if not 0.0 <= p_l <= 1.0:
        raise ValueError("p_l must be a probability")
    seed = rng if isinstance(rng, (int, np.integer)) else None
    rng = np.random.default_rng(rng)
    return ErasureSample(rng.random(lattice.n_edges) < p_l, seed)


def failure_modes(lattice: SurfaceLattice, sample: ErasureSample | np.ndarray) -> tuple[bool, bool]:
    """(primal logical erased, dual logical erased)."""
    mask = sample.erased if isinstance(sample, ErasureSample) else np.asarray(sample, bool)
    a, b, _ = _count(lattice, mask[None, :])
    return bool(a), bool(b)


def decodable(lattice: SurfaceLattice, sample: ErasureSample | np.ndarray) -> bool:
    return not any(failure_modes(lattice, sample))


def _edge_vectors(lattice: SurfaceLattice, G: GraphView) -> list[int]:
    """Each edge as a bit vector: vertex boundary, then two homology bits."""
    nv, D = G.n_vertices, lattice.D
    vecs = []
    for e in range(len(G.u)):
        u, v = int(G.u[e]), int(G.v[e])
        if lattice.geometry == "toric":
            bits = (1 << u) ^ (1 << v)
            # crossing the seam at x = D-1 -> 0 (or y likewise) flips a homology bit
            ux, uy = u % D, u // D
            if G.dx[e] and ux == D - 1:
                bits ^= 1 << nv
            if G.dy[e] and uy == D - 1:
                bits ^= 1 << (nv + 1)
        else:
            bits = 0
            for w in (u, v):
                if w == G.source:
                    bits ^= 1 << nv
                elif w != G.sink:
                    bits ^= 1 << w
        vecs.append(bits)
    return vecs


def decodable_bruteforce(lattice: SurfaceLattice, sample: ErasureSample | np.ndarray,
                         max_edges: int = 18) -> bool:
    """Exhaustive homology check over every subset of erased edges.

    Collects all XOR sums of erased edge vectors and looks for one whose vertex
    boundary vanishes while its homology (or boundary-crossing) bit is set.
    """
    mask = sample.erased if isinstance(sample, ErasureSample) else np.asarray(sample, bool)
    erased = np.flatnonzero(mask)
    if len(erased) > max_edges:
        raise ValueError(f"{len(erased)} erased edges exceed the brute-force limit {max_edges}")
    for G in (lattice.primal, lattice.dual):
        vecs = _edge_vectors(lattice, G)
        nv = G.n_vertices
        boundary = (1 << nv) - 1
        if lattice.geometry == "planar":
            boundary &= ~(1 << G.source)  # boundary vertices absorb endpoints
        sums = {0}
        for e in erased:
            sums |= {s ^ vecs[e] for s in sums}
        for s in sums:
            if s & boundary == 0 and s >> nv:
                return False
    return True


def mc_success_prob(D: int, p_l: float, runs: int = 1_000_000, seed: int = 0,
                    geometry: str = "toric", threads: int | None = None,
                    block_size: int = 20_000) -> MonteCarloResult:
    """Fraction of decodable erasure patterns, with its binomial standard error."""
    if runs < 1000:
        raise ValueError("need at least 10^3 runs")
    lattice = surface_lattice(D, geometry)
    ne = lattice.n_edges

    def work(rng, size):
        return _count(lattice, rng.random((size, ne)) < p_l)

    c = np.sum(run_blocks(work, runs, seed, threads, block_size), axis=0)
    return MonteCarloResult.from_counts(
        runs - int(c[2]), runs, seed, D=D, p_l=p_l, geometry=geometry,
        primal_failures=int(c[0]), dual_failures=int(c[1]))


def threshold_crossing(D: int, grid, runs: int = 100_000, seed: int = 0,
                       geometry: str = "toric", threads: int | None = None) -> float:
    """Loss rate where the success probability crosses 1/2 (linear interpolation)."""
    grid = sorted(grid)
    vals = [mc_success_prob(D, p, runs, seed, geometry, threads).estimate for p in grid]
    for (p0, s0), (p1, s1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
        if s0 >= 0.5 >= s1:
            return p0 if s0 == s1 else p0 + (s0 - 0.5) * (p1 - p0) / (s0 - s1)
    raise ValueError("success probability does not cross 1/2 on the grid")


CSV_COLUMNS = ("D", "p_l", "runs", "success", "std_error", "geometry", "seed")


def sweep_rows(Ds, ps, runs: int, seed: int = 0, geometry: str = "toric",
               threads: int | None = None) -> list[dict]:
    rows = []
    for D in Ds:
        for p in ps:
            r = mc_success_prob(D, p, runs, seed, geometry, threads)
            rows.append({"D": D, "p_l": p, "runs": runs, "success": r.estimate,
                         "std_error": r.std_error, "geometry": geometry, "seed": seed})
    return rows
