"""Encoders, single-erasure recovery circuits and logical-operator choice under erasure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..codes import (
    FourQubitCode,
    QpcCode,
    QpycCode,
    _as_erased,
    decoding_weights,
    erasure_correctable,
    qpyc_logical_state,
    vanishing_codeword,
)
from .state import (
    SUM,
    GateOp,
    QuditState,
    Trajectory,
    UncorrectableError,
    apply_gate,
    measure,
    reduce_to,
)


def logical_basis_vectors(code: QpycCode) -> np.ndarray:
    """Rows are the dense vectors of ``|0>_L ... |d-1>_L``."""
    return np.array([qpyc_logical_state(code, s).vector() for s in range(code.dim)])


def encode_qpyc(code: QpycCode, amplitudes: Sequence[complex]) -> QuditState:
    amps = np.asarray(amplitudes, dtype=complex)
    if amps.shape != (code.dim,):
        raise ValueError(f"need {code.dim} logical amplitudes")
    vec = amps @ logical_basis_vectors(code)
    return QuditState.from_vector(vec, code.dim)


def logical_amplitudes(code: QpycCode, vec: np.ndarray) -> np.ndarray:
    """Projection of an n-qudit vector onto the logical basis."""
    return logical_basis_vectors(code).conj() @ np.asarray(vec).reshape(-1)


def encode_four_qubit(amplitudes: Sequence[complex]) -> QuditState:
    """Encode ``sum a_{xy} |xy>`` (ordered 00, 01, 10, 11) into ``[[4,2,2]]``."""
    amps = np.asarray(amplitudes, dtype=complex)
    code = FourQubitCode()
    vec = sum(amps[2 * a + b] * code.logical_state(a, b) for a in (0, 1) for b in (0, 1))
    return QuditState.from_vector(vec, 2)


def _single_erasure(state: QuditState, erased_index: int, n: int):
    if state.n != n:
        raise ValueError(f"expected {n} qudits, got {state.n}")
    flagged = [i for i, e in enumerate(state.erased) if e]
    if len(flagged) > 1:
        raise UncorrectableError(f"{len(flagged)} erasures exceed the code's capacity")
    if flagged and flagged != [erased_index]:
        raise ValueError(f"state has qudit {flagged[0]} erased, not {erased_index}")
    if not flagged:
        raise ValueError(f"qudit {erased_index} is not flagged as erased")


def recover_three_qutrit(state: QuditState, erased_index: int,
                         trajectory: Trajectory | None = None) -> QuditState:
    """Undo one erasure of the ``[[3,1,2]]_3`` code with two SUM gates.

    With ``a, b`` the survivors following ``erased_index`` cyclically, apply
    ``SUM(a -> b)`` then ``SUM(b -> a)``.  The logical qutrit ends up on qudit
    ``a`` (see :func:`three_qutrit_output_qudit`) and ``b`` is left in a basis
    state, for every branch of the hidden erasure outcome.
    """
    _single_erasure(state, erased_index, 3)
    a, b = (erased_index + 1) % 3, (erased_index + 2) % 3
    for g in (SUM(a, b), SUM(b, a)):
        state = apply_gate(state, g)
        if trajectory is not None:
            trajectory.gate(g)
    return state


def three_qutrit_output_qudit(erased_index: int) -> int:
    return (erased_index + 1) % 3


# code automorphisms of [[4,2,2]] taking the erased qubit to position 0;
# roles[i] is the physical qubit playing the part of qubit i+1
_FOUR_QUBIT_ROLES = {0: (0, 1, 2, 3), 1: (1, 0, 3, 2), 2: (2, 3, 0, 1), 3: (3, 2, 1, 0)}


def recover_four_qubit(state: QuditState, erased_index: int, rng=None,
                       outcome: int | None = None,
                       trajectory: Trajectory | None = None) -> QuditState:
    """Undo one erasure of ``[[4,2,2]]``.

    For erased qubit 1: CNOTs 3->2 and 4->2, Z-measure qubit 2, then a decoding
    Clifford (CNOT 3->4, Hadamard on 3) and a ``Z^m`` fix on qubit 3 leave logical
    qubit 1 on qubit 4 and logical qubit 2 on qubit 3.  Other erasure positions
    are relabelled through a code automorphism.  Use
    :func:`four_qubit_output_qudits` to locate the logical qubits.
    """
    _single_erasure(state, erased_index, 4)
    _, r2, r3, r4 = _FOUR_QUBIT_ROLES[erased_index]

    def gate(g):
        nonlocal state
        state = apply_gate(state, g)
        if trajectory is not None:
            trajectory.gate(g)

    gate(SUM(r3, r2))
    gate(SUM(r4, r2))
    rec, state = measure(state, r2, "Z", rng=rng, outcome=outcome)
    if trajectory is not None:
        trajectory.measurement(rec)
    gate(SUM(r3, r4))
    gate(GateOp("F", (r3,)))
    if rec.outcome:
        gate(GateOp("Z", (r3,)))
    return state


def four_qubit_output_qudits(erased_index: int) -> tuple[int, int]:
    """Physical qubits holding (logical 1, logical 2) after recovery."""
    roles = _FOUR_QUBIT_ROLES[erased_index]
    return roles[3], roles[2]


def recovered_logical_state(state: QuditState, code, erased_index: int) -> np.ndarray:
    """Extract the decoded logical vector after a recovery circuit."""
    if isinstance(code, QpycCode):
        return reduce_to(state, [three_qutrit_output_qudit(erased_index)])
    if isinstance(code, FourQubitCode):
        return reduce_to(state, list(four_qubit_output_qudits(erased_index)))
    raise TypeError(f"no recovery circuit for {code!r}")


# --------------------------------------------------------------------------
# logical operators supported on surviving qudits


@dataclass(frozen=True)
class LogicalOperator:
    """``kind`` (``X`` or ``Z``) raised to ``exponents[j]`` on qudit ``j``."""

    kind: str
    exponents: tuple[int, ...]

    @property
    def support(self) -> frozenset:
        return frozenset(j for j, e in enumerate(self.exponents) if e)

    def __str__(self) -> str:
        parts = []
        for e in self.exponents:
            parts.append("I" if e == 0 else self.kind if e == 1 else f"{self.kind}^{e}")
        return " ".join(parts)

    def gates(self) -> list[GateOp]:
        return [GateOp(self.kind, (j,), e) for j, e in enumerate(self.exponents) if e]


def logical_measurement_under_erasure(code, pattern, basis: str):
    """Logical operator(s) to measure in ``basis`` that avoid every erased qudit.

    QPyC returns one :class:`LogicalOperator`.  ``basis='Z'`` gives ``Z^w`` with
    top-coefficient interpolation weights on ``k+1`` survivors; ``basis='X'``
    gives ``X^g`` with ``g`` a monic degree-k codeword vanishing on the erased
    set.  ``[[4,2,2]]`` returns a dict with the two logical qubits' operators
    as Pauli strings; QPC returns the operator for its single logical qubit.
    """
    if basis not in ("X", "Z"):
        raise ValueError(f"unknown basis {basis!r}")
    erased = _as_erased(pattern, code.n)
    if not erasure_correctable(code, erased):
        raise UncorrectableError(f"no logical representative avoids erasures {sorted(erased)}")
    if isinstance(code, QpycCode):
        if basis == "Z":
            survivors = [j for j in range(code.n) if j not in erased][: code.k + 1]
            w = decoding_weights(code, survivors)
            exps = [0] * code.n
            for j, wj in zip(survivors, w):
                exps[j] = wj
            return LogicalOperator("Z", tuple(exps))
        return LogicalOperator("X", vanishing_codeword(code, erased))
    if isinstance(code, FourQubitCode):
        names = ("X1", "X2") if basis == "X" else ("Z1", "Z2")
        out = {}
        for name in names:
            for rep in code.logical_operators[name]:
                if not any(rep[i] != "I" for i in erased):
                    out[name] = rep
                    break
        return out
    if isinstance(code, QpcCode):
        m = code.m_per_block
        ops = ["I"] * code.n
        if basis == "Z":
            block = next(b for b in range(code.n_blocks)
                         if not any(q in erased for q in range(b * m, (b + 1) * m)))
            for q in range(block * m, (block + 1) * m):
                ops[q] = "X"
        else:
            for b in range(code.n_blocks):
                q = next(q for q in range(b * m, (b + 1) * m) if q not in erased)
                ops[q] = "Z"
        return "".join(ops)
    raise TypeError(f"unsupported code {code!r}")
