"""Qutrit CZ between two photons mediated by a cavity-coupled atom.

Each photon reflects off the cavity and imprints a photon-dependent diagonal
phase ``U_{a,m}`` on the atom.  Interleaving two such interactions with
Fourier gates on the atom yields a photon-photon CZ.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .state import GateOp, QuditState, apply_gate, fourier_matrix, omega


def reflectivity(eta: float, delta: float, gamma: float) -> complex:
    """Cavity reflection coefficient for cooperativity ``eta`` and detuning ``delta``."""
    if gamma == 0:
        raise ValueError("linewidth gamma must be nonzero")
    x = 2j * delta / gamma
    return (eta - 1 + x) / (eta + 1 - x)


def reflection_phase(eta: float, delta: float, gamma: float) -> float:
    """Large-cooperativity phase ``2 atan(2 delta / (eta gamma))``."""
    if gamma == 0:
        raise ValueError("linewidth gamma must be nonzero")
    return 2 * np.arctan(2 * delta / (eta * gamma))


def ideal_phase_schedule(d: int = 3) -> np.ndarray:
    """``phases[m, j]`` of ``U_{a,m} = diag(w^{m(1-j)})`` in radians."""
    m = np.arange(d)[:, None]
    j = np.arange(d)[None, :]
    return 2 * np.pi / d * ((m * (1 - j)) % d)


def detuning_schedule(eta: float, gamma: float = 1.0) -> np.ndarray:
    """Per-pulse detunings ``delta[m, j]`` of the three magnetic-field settings (d=3)."""
    big = np.sqrt(3) * gamma * eta / 2
    return np.array([[0.0, 0.0, 0.0], [big, 0.0, -big], [-big, 0.0, big]])


def reflectivity_schedule(eta: float, gamma: float = 1.0) -> np.ndarray:
    """Complex ``U_{a,m}`` diagonals from the reflection coefficient.

    The phase of the resonant value is divided out so that step 1 is the
    identity up to loss.  Moduli are below 1 at finite ``eta``.
    """
    deltas = detuning_schedule(eta, gamma)
    r = np.vectorize(lambda dl: reflectivity(eta, dl, gamma))(deltas)
    r0 = reflectivity(eta, 0.0, gamma)
    return r * np.conj(r0) / abs(r0)


@dataclass
class CzReport:
    photon_unitary: np.ndarray
    distance: float
    local_f: np.ndarray
    local_s: np.ndarray
    global_phase: complex
    atom_purity: float
    atom_overlap: float

    def residual_exponents(self, d: int = 3) -> tuple[list[int], list[int]]:
        """Residual local phases written as powers of ``w`` (when they are)."""
        def exps(v):
            return [int(np.rint(np.angle(z) / (2 * np.pi / d))) % d for z in v]
        return exps(self.local_f), exps(self.local_s)


def _controlled(photon: int, atom: int, schedule: np.ndarray, inverse: bool = False):
    if np.allclose(np.abs(schedule), 1):
        return GateOp("CPHASE", (photon, atom), -1 if inverse else 1,
                      tuple(tuple(row) for row in np.angle(schedule)))
    raise ValueError("non-unitary schedule")


def _sequence_matrix(d: int, schedule: np.ndarray) -> np.ndarray:
    """27x27 matrix of ``C_f^-1 F^-1 C_s^-1 F C_f`` on (photon f, photon s, atom)."""
    Fm = fourier_matrix(d)
    C_f = np.zeros((d ** 3,) * 2, dtype=complex)
    C_s = np.zeros_like(C_f)
    for i in range(d):
        for j in range(d):
            for a in range(d):
                idx = (i * d + j) * d + a
                C_f[idx, idx] = schedule[i, a]
                C_s[idx, idx] = schedule[j, a]
    F_a = np.kron(np.eye(d * d), Fm)
    # an inverted interaction is the reversed field setting: conjugate phases,
    # same (possibly lossy) modulus
    return C_f.conj() @ F_a.conj().T @ C_s.conj() @ F_a @ C_f


def cz_from_atom_sequence(d: int = 3, schedule: np.ndarray | None = None) -> CzReport:
    """Compose the sequence with the atom in ``F|0>`` and compare against CZ.

    The photon-photon action is read off by projecting the atom back onto its
    initial state.  The best fit ``(A x B) CZ g`` with diagonal local phases
    ``A, B`` and global phase ``g`` is subtracted; ``distance`` is the spectral
    norm of what is left.  ``atom_purity`` is the worst purity of the atom's
    reduced state over the photon basis inputs.
    """
    if schedule is None:
        schedule = np.exp(1j * ideal_phase_schedule(d))
    schedule = np.asarray(schedule, dtype=complex)
    if schedule.shape != (d, d):
        raise ValueError(f"schedule must be {d}x{d}")
    U = _sequence_matrix(d, schedule)
    atom0 = fourier_matrix(d)[:, 0]

    M = np.zeros((d * d, d * d), dtype=complex)
    purity, overlap = 1.0, np.inf
    for col in range(d * d):
        inp = np.zeros(d * d, dtype=complex)
        inp[col] = 1
        out = (U @ np.kron(inp, atom0)).reshape(d * d, d)
        M[:, col] = out @ atom0.conj()
        rho = out.T @ out.conj()
        purity = min(purity, float(np.real(np.trace(rho @ rho))) / max(np.real(np.trace(rho)) ** 2, 1e-300))
        overlap = min(overlap, float(np.linalg.norm(M[:, col]) ** 2))

    cz = np.diag(omega(d) ** np.outer(np.arange(d), np.arange(d)).reshape(-1))
    R = np.diag(M) / np.diag(cz)
    R = R.reshape(d, d)
    g = R[0, 0]
    local_f = R[:, 0] / g
    local_s = R[0, :] / g
    fit = np.kron(np.diag(local_f), np.diag(local_s)) @ cz * g
    distance = float(np.linalg.norm(M - fit, 2))
    return CzReport(M, distance, local_f, local_s, g, purity, overlap)


def cz_via_simulator(photons: np.ndarray, d: int = 3) -> QuditState:
    """Run the ideal sequence gate by gate on a 2-photon input and an atom in ``F|0>``.

    Returns the full three-qudit state (photon f, photon s, atom).
    """
    atom0 = fourier_matrix(d)[:, 0]
    state = QuditState.from_vector(np.kron(np.asarray(photons, dtype=complex), atom0), d)
    sched = np.exp(1j * ideal_phase_schedule(d))
    seq = [
        _controlled(0, 2, sched),
        GateOp("F", (2,)),
        _controlled(1, 2, sched, inverse=True),
        GateOp("F", (2,), -1),
        _controlled(0, 2, sched, inverse=True),
    ]
    for g in seq:
        state = apply_gate(state, g)
    return state
