"""Dense state vectors over ``n`` qudits of prime dimension ``d``."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

DEFAULT_MAX_AMPLITUDES = 2_000_000
NORM_TOL = 1e-10


class SimulationError(RuntimeError):
    pass


class ErasedTargetError(SimulationError):
    """A gate or measurement touched an erased qudit."""


class UncorrectableError(SimulationError):
    pass


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def shift_matrix(d: int, power: int = 1) -> np.ndarray:
    """``X^l |j> = |j + l>``."""
    return np.roll(np.eye(d, dtype=complex), power % d, axis=0)


def phase_matrix(d: int, power: int = 1) -> np.ndarray:
    """``Z^l |j> = w^{lj} |j>``."""
    return np.diag(omega(d) ** (power * np.arange(d)))


def fourier_matrix(d: int) -> np.ndarray:
    """``F[j, m] = w^{jm} / sqrt(d)``; for d=2 this is the Hadamard gate."""
    j = np.arange(d)
    return omega(d) ** np.outer(j, j) / np.sqrt(d)


def weyl_matrix(d: int, a: int, b: int) -> np.ndarray:
    return shift_matrix(d, a) @ phase_matrix(d, b)


@dataclass(frozen=True)
class GateOp:
    """A gate acting on ``targets``.

    ``kind`` is one of ``X, Z, F, SUM, CZ, CPHASE``.  ``power`` raises the gate
    to an integer power (``F`` with power -1 is the inverse Fourier gate).
    ``SUM`` and ``CZ`` take ``(control, target)``; ``CPHASE`` applies the
    diagonal phase table ``phases[i][j]`` (radians) to the pair.
    """

    kind: str
    targets: tuple[int, ...]
    power: int = 1
    phases: Optional[tuple[tuple[float, ...], ...]] = None

    _ARITY = {"X": 1, "Z": 1, "F": 1, "SUM": 2, "CZ": 2, "CPHASE": 2}

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if self.kind not in self._ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.targets) != self._ARITY[self.kind]:
            raise ValueError(f"{self.kind} acts on {self._ARITY[self.kind]} qudit(s)")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("gate targets must be distinct")
        if self.kind == "CPHASE" and self.phases is None:
            raise ValueError("CPHASE needs a phase table")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["targets"] = list(self.targets)
        if self.phases is None:
            del out["phases"]
        else:
            out["phases"] = [list(row) for row in self.phases]
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> GateOp:
        phases = doc.get("phases")
        return cls(doc["kind"], tuple(doc["targets"]), doc.get("power", 1),
                   None if phases is None else tuple(tuple(r) for r in phases))


def X(q, power=1):
    return GateOp("X", (q,), power)


def Z(q, power=1):
    return GateOp("Z", (q,), power)


def F(q, power=1):
    return GateOp("F", (q,), power)


def SUM(control, target, power=1):
    return GateOp("SUM", (control, target), power)


def CZ(control, target, power=1):
    return GateOp("CZ", (control, target), power)


@dataclass(frozen=True)
class MeasurementRecord:
    qudit: int
    basis: str
    outcome: int
    probability: float = 1.0


@dataclass
class QuditState:
    """Amplitudes over ``d**n`` basis states, qudit 0 most significant."""

    n: int
    d: int
    amplitudes: np.ndarray
    erased: tuple[bool, ...] = None
    max_amplitudes: int = field(default=DEFAULT_MAX_AMPLITUDES, repr=False)

    def __post_init__(self):
        if self.d ** self.n > self.max_amplitudes:
            raise SimulationError(
                f"{self.d}^{self.n} amplitudes exceed the cap of {self.max_amplitudes}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != self.d ** self.n:
            raise ValueError(f"expected {self.d ** self.n} amplitudes, got {self.amplitudes.size}")
        if self.erased is None:
            self.erased = (False,) * self.n
        self.erased = tuple(bool(e) for e in self.erased)
        if abs(np.linalg.norm(self.amplitudes) - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized (norm {np.linalg.norm(self.amplitudes)})")

    @classmethod
    def basis(cls, digits: Sequence[int], d: int) -> QuditState:
        n = len(digits)
        vec = np.zeros(d ** n, dtype=complex)
        vec[np.ravel_multi_index(tuple(int(x) for x in digits), (d,) * n)] = 1.0
        return cls(n, d, vec)

    @classmethod
    def from_vector(cls, vec: np.ndarray, d: int, normalize: bool = True) -> QuditState:
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        n = int(round(np.log(vec.size) / np.log(d)))
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(n, d, vec)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.d,) * self.n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def kron(self, other: QuditState) -> QuditState:
        if other.d != self.d:
            raise ValueError("dimension mismatch")
        return QuditState(self.n + other.n, self.d, np.kron(self.amplitudes, other.amplitudes),
                          self.erased + other.erased, self.max_amplitudes)

    def with_amplitudes(self, amps: np.ndarray, erased=None) -> QuditState:
        return replace(self, amplitudes=amps, erased=self.erased if erased is None else erased)


def _check_targets(state: QuditState, targets: Sequence[int]):
    for t in targets:
        if not 0 <= t < state.n:
            raise ValueError(f"qudit {t} out of range for {state.n} qudits")
        if state.erased[t]:
            raise ErasedTargetError(f"qudit {t} is erased")


def _apply_single(psi: np.ndarray, U: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(U, psi, axes=([1], [axis])), 0, axis)


def apply_gate(state: QuditState, gate: GateOp) -> QuditState:
    _check_targets(state, gate.targets)
    d = state.d
    psi = state.tensor()
    if gate.kind == "X":
        out = np.roll(psi, gate.power % d, axis=gate.targets[0])
    elif gate.kind == "Z":
        out = _apply_single(psi, phase_matrix(d, gate.power), gate.targets[0])
    elif gate.kind == "F":
        U = np.linalg.matrix_power(fourier_matrix(d), gate.power % 4) if gate.power >= 0 \
            else np.linalg.matrix_power(fourier_matrix(d).conj().T, -gate.power)
        out = _apply_single(psi, U, gate.targets[0])
    elif gate.kind == "SUM":
        c, t = gate.targets
        out = np.empty_like(psi)
        for i in range(d):
            idx = [slice(None)] * state.n
            idx[c] = i
            idx = tuple(idx)
            # after removing axis c, the target axis shifts down if it came after c
            out[idx] = np.roll(psi[idx], (i * gate.power) % d, axis=t - (t > c))
    elif gate.kind in ("CZ", "CPHASE"):
        c, t = gate.targets
        if gate.kind == "CZ":
            table = omega(d) ** (gate.power * np.outer(np.arange(d), np.arange(d)))
        else:
            table = np.exp(1j * gate.power * np.asarray(gate.phases, dtype=float))
        shape = [1] * state.n
        shape[c], shape[t] = d, d
        if c > t:
            table = table.T
        out = psi * table.reshape(shape)
    else:  # pragma: no cover - guarded by GateOp
        raise ValueError(gate.kind)
    return state.with_amplitudes(out.reshape(-1))


def apply_circuit(state: QuditState, gates: Sequence[GateOp]) -> QuditState:
    for g in gates:
        state = apply_gate(state, g)
    return state


def outcome_probabilities(state: QuditState, qudit: int, basis: str = "Z") -> np.ndarray:
    _check_targets(state, [qudit])
    psi = state.tensor()
    if basis == "X":
        psi = _apply_single(psi, fourier_matrix(state.d).conj().T, qudit)
    elif basis != "Z":
        raise ValueError(f"unknown basis {basis!r}")
    probs = np.sum(np.abs(np.moveaxis(psi, qudit, 0).reshape(state.d, -1)) ** 2, axis=1)
    return probs / probs.sum()


def measure(state: QuditState, qudit: int, basis: str = "Z", rng=None,
            outcome: int | None = None) -> tuple[MeasurementRecord, QuditState]:
    """Projective measurement in the Z or X (Fourier) basis.

    X-basis outcome ``j`` projects onto ``F|j>``.  Pass ``outcome`` to force a
    branch (raises if the branch has zero probability); otherwise it is drawn
    from ``rng``.
    """
    probs = outcome_probabilities(state, qudit, basis)
    if outcome is None:
        rng = np.random.default_rng(rng)
        outcome = int(rng.choice(state.d, p=probs))
    elif probs[outcome] < 1e-14:
        raise SimulationError(f"forced outcome {outcome} has zero probability")
    psi = state.tensor()
    Fm = fourier_matrix(state.d)
    if basis == "X":
        psi = _apply_single(psi, Fm.conj().T, qudit)
    mask = np.zeros(state.d)
    mask[outcome] = 1.0
    shape = [1] * state.n
    shape[qudit] = state.d
    psi = psi * mask.reshape(shape)
    if basis == "X":
        psi = _apply_single(psi, Fm, qudit)
    psi = psi / np.sqrt(probs[outcome])
    record = MeasurementRecord(qudit, basis, int(outcome), float(probs[outcome]))
    return record, state.with_amplitudes(psi.reshape(-1))


def erase(state: QuditState, qudit: int, rng=None, outcome: int | None = None) -> QuditState:
    """Heralded loss: the qudit is Z-measured in secret and flagged as erased.

    The hidden outcome picks one pure branch of the mixed state left on the
    remaining qudits; recovery has to work for every branch.
    """
    if not 0 <= qudit < state.n:
        raise ValueError(f"qudit {qudit} out of range")
    if state.erased[qudit]:
        raise ValueError(f"qudit {qudit} is already erased")
    _, post = measure(state, qudit, "Z", rng=rng, outcome=outcome)
    flags = list(post.erased)
    flags[qudit] = True
    return post.with_amplitudes(post.amplitudes, erased=tuple(flags))


def reduce_to(state: QuditState, keep: Sequence[int]) -> np.ndarray:
    """Pure state on ``keep``, valid when the rest is in a product with it.

    Raises if the discarded qudits are still entangled with the kept ones.
    """
    keep = list(keep)
    drop = [q for q in range(state.n) if q not in keep]
    psi = np.transpose(state.tensor(), keep + drop).reshape(state.d ** len(keep), -1)
    j = int(np.argmax(np.linalg.norm(psi, axis=0)))
    u = psi[:, j] / np.linalg.norm(psi[:, j])
    residual = psi - np.outer(u, u.conj() @ psi)
    if np.linalg.norm(residual) > 1e-9:
        raise SimulationError("kept qudits are entangled with the discarded ones")
    return u


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Global-phase-insensitive overlap ``|<a|b>|^2`` of normalized vectors."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    return float(abs(np.vdot(a / np.linalg.norm(a), b / np.linalg.norm(b))) ** 2)


class Trajectory:
    """Ordered log of gates, measurements and erasures for one simulated run."""

    def __init__(self):
        self.events: list[dict] = []

    def gate(self, g: GateOp):
        self.events.append({"type": "gate", **g.to_dict()})

    def measurement(self, rec: MeasurementRecord):
        self.events.append({"type": "measure", **asdict(rec)})

    def erasure(self, qudit: int):
        self.events.append({"type": "erase", "qudit": qudit})

    def note(self, **info):
        self.events.append({"type": "note", **info})

    def to_json(self) -> str:
        return json.dumps(self.events, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> Trajectory:
        t = cls()
        t.events = json.loads(text)
        return t

    def gates(self) -> list[GateOp]:
        return [GateOp.from_dict({k: v for k, v in e.items() if k != "type"})
                for e in self.events if e["type"] == "gate"]
