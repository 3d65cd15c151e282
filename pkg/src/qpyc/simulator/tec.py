"""Teleportation-based error correction of one QPyC block, simulated exactly.

Register layout is ``[input | zero | plus]``, each block ``n = 2k+1`` qudits.
The ``plus`` and ``zero`` blocks start as ``|+>_L`` and ``|0>_L`` and are
turned into an encoded Bell pair by a transversal SUM.  The input block then
interacts through transversal inverse SUMs, is read out in the X basis, the
zero block in the Z basis, and the logical corrections land on the plus block.

Three blocks of ``d**n`` amplitudes each only fit for ``[[3,1,2]]_3``
(``3**9``); larger codes go through the frame simulation in :mod:`qpyc.noise`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..codes import QpycCode, decode_readout, decoding_weights
from .recovery import logical_amplitudes, logical_basis_vectors
from .state import (
    DEFAULT_MAX_AMPLITUDES,
    SUM,
    GateOp,
    QuditState,
    SimulationError,
    Trajectory,
    apply_gate,
    erase,
    measure,
    reduce_to,
)

CORRECTED = "corrected"
HERALDED_FAILURE = "heralded-failure"
SILENT_ERROR = "silent-logical-error"


@dataclass
class TecNoise:
    """What goes wrong during one cycle.

    ``erased`` are input-block coordinates lost in transit.  ``weyl`` maps a
    register index (0..3n-1) to an ``(a, b)`` pair: ``X^a Z^b`` hits that qudit
    right before the readout interaction.
    """

    erased: frozenset = frozenset()
    weyl: dict = field(default_factory=dict)

    def __post_init__(self):
        self.erased = frozenset(int(e) for e in self.erased)


@dataclass
class TecResult:
    state: QuditState
    status: str
    x_outcome: int | None
    z_outcome: int | None
    fidelity: float
    output_logical: np.ndarray
    trajectory: Trajectory


def logical_x(code: QpycCode, block_offset: int, power: int = 1) -> list[GateOp]:
    """``X_L^power`` as X^g with g the evaluation vector of ``t^k``."""
    d = code.dim
    g = code.encode_digits([0] * code.k + [1])
    return [GateOp("X", (block_offset + j,), (power * gj) % d)
            for j, gj in enumerate(g) if (power * gj) % d]


def logical_z(code: QpycCode, block_offset: int, power: int = 1) -> list[GateOp]:
    """``Z_L^power`` from top-coefficient weights on the first k+1 coordinates."""
    d = code.dim
    w = decoding_weights(code, list(range(code.k + 1)))
    return [GateOp("Z", (block_offset + j,), (power * wj) % d)
            for j, wj in enumerate(w) if (power * wj) % d]


def _bell_resource(code: QpycCode) -> np.ndarray:
    basis = logical_basis_vectors(code)
    zero = basis[0]
    plus = basis.sum(axis=0) / np.sqrt(code.dim)
    return np.kron(zero, plus)


def tec_cycle(input_state: QuditState, code: QpycCode, noise: TecNoise | None = None,
              rng=None, reference: np.ndarray | None = None,
              max_amplitudes: int | None = None) -> TecResult:
    """Run one TEC cycle on an encoded input block.

    ``reference`` is the logical vector the output is compared against; by
    default it is the projection of ``input_state`` onto the code space.
    """
    noise = noise or TecNoise()
    rng = np.random.default_rng(rng)
    n, d = code.n, code.dim
    if input_state.n != n or input_state.d != d:
        raise ValueError(f"input must be one {code.name} block")
    if reference is None:
        reference = logical_amplitudes(code, input_state.amplitudes)
    reference = np.asarray(reference, dtype=complex)

    cap = DEFAULT_MAX_AMPLITUDES if max_amplitudes is None else max_amplitudes
    if d ** (3 * n) > cap:
        # check before np.kron tries to allocate it
        raise SimulationError(f"{d}^{3 * n} amplitudes exceed the cap of {cap}")
    vec = np.kron(input_state.amplitudes, _bell_resource(code))
    state = QuditState(3 * n, d, vec, max_amplitudes=cap)
    traj = Trajectory()
    zero, plus = n, 2 * n

    def gate(g):
        nonlocal state
        state = apply_gate(state, g)
        traj.gate(g)

    for j in range(n):
        gate(SUM(plus + j, zero + j))
    for j in sorted(noise.erased):
        state = erase(state, j, rng)
        traj.erasure(j)
    for q, (a, b) in sorted(noise.weyl.items()):
        if state.erased[q]:
            continue
        if b % d:
            gate(GateOp("Z", (q,), b % d))
        if a % d:
            gate(GateOp("X", (q,), a % d))

    for j in range(n):
        if j not in noise.erased:
            gate(SUM(j, zero + j, power=-1))

    x_read, z_read = {}, {}
    for j in range(n):
        if j in noise.erased:
            continue
        rec, state = measure(state, j, "X", rng=rng)
        traj.measurement(rec)
        x_read[j] = rec.outcome
    for j in range(n):
        rec, state = measure(state, zero + j, "Z", rng=rng)
        traj.measurement(rec)
        if j not in noise.erased:
            z_read[j] = rec.outcome

    x_val = decode_readout(code, x_read, "X")
    m_val = decode_readout(code, z_read, "Z")
    if x_val is not None and m_val is not None:
        for g in logical_x(code, plus, -m_val):
            gate(g)
        for g in logical_z(code, plus, x_val):
            gate(g)

    out_block = reduce_to(state, list(range(plus, plus + n)))
    out_logical = logical_amplitudes(code, out_block)
    fid = float(abs(np.vdot(reference / np.linalg.norm(reference), out_logical)) ** 2)
    if x_val is None or m_val is None:
        status = HERALDED_FAILURE
    elif fid > 1 - 1e-9:
        status = CORRECTED
    else:
        status = SILENT_ERROR
    traj.note(x=x_val, m=m_val, status=status)
    final = QuditState.from_vector(out_block, d)
    return TecResult(final, status, x_val, m_val, fid, out_logical, traj)
