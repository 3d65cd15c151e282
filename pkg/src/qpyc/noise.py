"""Photon loss, depolarization, dephasing and faulty SUM gates as Weyl-frame channels.

A frame stores the ``X^a Z^b`` error sitting on each qudit (phases dropped)
plus a loss flag.  All uniform Weyl mixtures include the identity term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .codes import QpycCode
from .field import PrimeModulus
from .montecarlo import MonteCarloResult, run_blocks


@dataclass(frozen=True)
class ChannelParams:
    p_l: float
    eps_d: float = 0.0
    eps_p: float = 0.0
    eps_g: float = 0.0
    d: int = 3

    def __post_init__(self):
        d = self.d.d if isinstance(self.d, PrimeModulus) else int(self.d)
        PrimeModulus(d)
        object.__setattr__(self, "d", d)
        for name in ("p_l", "eps_d", "eps_p", "eps_g"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability")
        if self.eps_d + self.eps_p > 1.0:
            raise ValueError("eps_d + eps_p must not exceed 1")

    @classmethod
    def from_lengths(cls, L0: float, L_att: float = 20.0, **kw) -> ChannelParams:
        if L0 <= 0 or L_att <= 0:
            raise ValueError("lengths must be positive")
        return cls(p_l=-math.expm1(-L0 / L_att), **kw)


@dataclass
class WeylFrame:
    d: int
    a: np.ndarray
    b: np.ndarray
    lost: np.ndarray = field(default=None)

    @classmethod
    def identity(cls, n: int, d: int) -> WeylFrame:
        return cls(d, np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64),
                   np.zeros(n, dtype=bool))

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=np.int64) % self.d
        self.b = np.asarray(self.b, dtype=np.int64) % self.d
        if self.lost is None:
            self.lost = np.zeros(self.a.shape, dtype=bool)

    @property
    def n(self) -> int:
        return len(self.a)

    def apply(self, qudit: int, a: int, b: int) -> WeylFrame:
        """Compose ``X^a Z^b`` onto the qudit (exponents add mod d)."""
        self.a[qudit] = (self.a[qudit] + a) % self.d
        self.b[qudit] = (self.b[qudit] + b) % self.d
        return self

    def copy(self) -> WeylFrame:
        return WeylFrame(self.d, self.a.copy(), self.b.copy(), self.lost.copy())

    def is_trivial(self) -> bool:
        return not (self.a.any() or self.b.any())


def sum_propagate(frame: WeylFrame, control: int, target: int, power: int = 1) -> WeylFrame:
    """Conjugate the frame by ``SUM^power``: X_c -> X_c X_t, Z_t -> Z_c^-1 Z_t."""
    d = frame.d
    ac, bc = frame.a[control], frame.b[control]
    at, bt = frame.a[target], frame.b[target]
    frame.a[target] = (at + power * ac) % d
    frame.b[control] = (bc - power * bt) % d
    return frame


def _check_present(frame: WeylFrame, *qudits):
    for q in qudits:
        if frame.lost[q]:
            raise ValueError(f"qudit {q} is lost")


def sample_transmission(frame: WeylFrame, qudit: int, params: ChannelParams, rng) -> WeylFrame:
    """Loss, then uniform depolarization or uniform dephasing, else nothing."""
    _check_present(frame, qudit)
    d = params.d
    u = rng.random()
    if u < params.p_l:
        frame.lost[qudit] = True
        return frame
    u = (u - params.p_l) / (1 - params.p_l) if params.p_l < 1 else 0.0
    if u < params.eps_d:
        frame.apply(qudit, int(rng.integers(d)), int(rng.integers(d)))
    elif u < params.eps_d + params.eps_p:
        frame.apply(qudit, 0, int(rng.integers(d)))
    return frame


def sample_gate_error(frame: WeylFrame, control: int, target: int, params: ChannelParams,
                      rng) -> WeylFrame:
    """Ideal SUM on the frame; on failure both qudits get a fresh uniform Weyl pair."""
    _check_present(frame, control, target)
    sum_propagate(frame, control, target)
    if rng.random() < params.eps_g:
        d = params.d
        a = rng.integers(d, size=4)
        frame.a[control], frame.b[control], frame.a[target], frame.b[target] = a
    return frame


def sample_prep_error(frame: WeylFrame, qudit: int, params: ChannelParams, rng) -> WeylFrame:
    if rng.random() < params.eps_d:
        d = params.d
        frame.apply(qudit, int(rng.integers(d)), int(rng.integers(d)))
    return frame


def transmission_branches(params: ChannelParams, size: int, rng) -> dict[str, np.ndarray]:
    """Vectorized transmission channel: loss mask plus sampled exponents."""
    d = params.d
    u = rng.random(size)
    lost = u < params.p_l
    v = rng.random(size)
    dep = ~lost & (v < params.eps_d)
    deph = ~lost & ~dep & (v < params.eps_d + params.eps_p)
    a = np.where(dep, rng.integers(d, size=size), 0)
    b = np.where(dep | deph, rng.integers(d, size=size), 0)
    return {"lost": lost, "depolarized": dep, "dephased": deph, "a": a, "b": b}


def epsilon_xz(params: ChannelParams) -> tuple[float, float]:
    """First-order per-qudit readout error rates for the X and Z logical measurements."""
    d = params.d
    eps_x = 3 * params.eps_g * (d ** 4 - d ** 3) / d ** 4 + 4 * params.eps_d * (d ** 2 - d) / d ** 2
    eps_z = eps_x + params.eps_p * (d - 1) / d
    return eps_x, eps_z


def classify_hop(n_lost: np.ndarray, n_err: np.ndarray, k: int) -> np.ndarray:
    """0 = heralded failure, 1 = correct, 2 = incorrect."""
    out = np.where(n_lost + 2 * n_err <= k, 1, 2)
    return np.where(n_lost > k, 0, out)


@dataclass(frozen=True)
class HopEstimate:
    fail: MonteCarloResult
    correct_x: MonteCarloResult
    correct_z: MonteCarloResult
    incorrect_x: MonteCarloResult
    incorrect_z: MonteCarloResult

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("fail", "correct_x", "correct_z",
                                                "incorrect_x", "incorrect_z")}


def mc_validate_pcorrect(code: QpycCode, params: ChannelParams, runs: int = 100_000,
                         seed: int = 0, eps: tuple[float, float] | None = None,
                         threads: int | None = None) -> HopEstimate:
    """Sample one TEC hop per run at the readout level.

    Every qudit is lost with probability ``p_l``; a surviving qudit's X (Z)
    readout is wrong with probability ``eps_X`` (``eps_Z``), independently.
    A run counts as correct when ``n_lost + 2 n_err <= k``.
    """
    if runs < 10_000:
        raise ValueError("need at least 10^4 runs")
    n, k = code.n, code.k
    eps_x, eps_z = eps if eps is not None else epsilon_xz(params)

    def work(rng, size):
        lost = rng.random((size, n)) < params.p_l
        n_lost = lost.sum(axis=1)
        counts = np.zeros(5, dtype=np.int64)
        counts[0] = np.count_nonzero(n_lost > k)
        for i, e in enumerate((eps_x, eps_z)):
            err = (rng.random((size, n)) < e) & ~lost
            cls = classify_hop(n_lost, err.sum(axis=1), k)
            counts[1 + i] = np.count_nonzero(cls == 1)
            counts[3 + i] = np.count_nonzero(cls == 2)
        return counts

    total = np.sum(run_blocks(work, runs, seed, threads), axis=0)
    names = ("fail", "correct_x", "correct_z", "incorrect_x", "incorrect_z")
    return HopEstimate(*(MonteCarloResult.from_counts(int(c), runs, seed, quantity=nm)
                         for nm, c in zip(names, total)))
