"""One-way repeater chain with QPyC blocks: per-hop statistics, logical error and key rate."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable

from scipy.optimize import bisect

from .codes import (
    InfeasibleError,
    QpycCode,
    binomial_range_sum,
    parse_code,
    qpyc_code,
)
from .noise import ChannelParams, epsilon_xz

DEFAULT_L_ATT = 20.0


def loss_per_segment(L0: float, L_att: float = DEFAULT_L_ATT) -> float:
    if L0 <= 0 or L_att <= 0:
        raise ValueError("lengths must be positive")
    return -math.expm1(-L0 / L_att)


@dataclass(frozen=True)
class HopStats:
    P_fail: float
    P_correct_X: float
    P_correct_Z: float
    P_incorrect_X: float
    P_incorrect_Z: float

    @property
    def P_success(self) -> float:
        return 1.0 - self.P_fail


def _hop_sums(n: int, k: int, p: float, eps: float) -> tuple[float, float]:
    correct, incorrect = [], []
    for n1 in range(k + 1):
        base = math.comb(n, n1) * p ** n1 * (1 - p) ** (n - n1)
        m = n - n1
        for n2 in range(m + 1):
            term = base * math.comb(m, n2) * eps ** n2 * (1 - eps) ** (m - n2)
            (correct if n1 + 2 * n2 <= k else incorrect).append(term)
    return math.fsum(correct), math.fsum(incorrect)


def hop_stats(code: QpycCode | int, p_l: float, eps_x: float, eps_z: float) -> HopStats:
    """Fail / correct / incorrect probabilities for one TEC hop.

    A hop fails when more than ``k`` qudits are lost; otherwise ``n1`` losses and
    ``n2`` readout errors decode correctly iff ``n1 + 2 n2 <= k``.
    """
    k = code.k if isinstance(code, QpycCode) else int(code)
    n = 2 * k + 1
    for v in (p_l, eps_x, eps_z):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{v} is not a probability")
    p_fail = binomial_range_sum(n, p_l, k + 1, n)
    cx, ix = _hop_sums(n, k, p_l, eps_x)
    cz, iz = _hop_sums(n, k, p_l, eps_z)
    return HopStats(p_fail, cx, cz, ix, iz)


def p_incorrect_leading(k: int, p_l: float, eps: float) -> float:
    """Lowest-order incorrect-decoding probability: k-1 losses and one readout error."""
    n = 2 * k + 1
    return math.comb(n, k - 1) * (k + 2) * p_l ** (k - 1) * eps * (1 - p_l) ** (k + 2)


@dataclass(frozen=True)
class RepeaterConfig:
    L_tot: float
    L0: float
    code: QpycCode = field(default_factory=lambda: qpyc_code(1))
    eps_g: float = 0.0
    eps_d: float = 0.0
    eps_p: float = 0.0
    t0: float = 1e-6
    L_att: float = DEFAULT_L_ATT

    def __post_init__(self):
        if self.L_tot < 0 or self.L0 <= 0 or self.L_att <= 0 or self.t0 <= 0:
            raise ValueError("L_tot must be >= 0; L0, L_att and t0 positive")

    @property
    def p_l(self) -> float:
        return loss_per_segment(self.L0, self.L_att)

    @property
    def channel(self) -> ChannelParams:
        return ChannelParams(self.p_l, self.eps_d, self.eps_p, self.eps_g, self.code.dim)

    @property
    def stations(self) -> int:
        ratio = self.L_tot / self.L0
        r = round(ratio)
        if abs(ratio - r) > 1e-9:
            warnings.warn(f"L_tot/L0 = {ratio:g} is not an integer; using {r} hops",
                          stacklevel=2)
        return r

    def to_dict(self) -> dict:
        out = asdict(self)
        out["code"] = f"qpyc:{self.code.k}"
        return out


@dataclass(frozen=True)
class ChainResult:
    Q_X: float
    Q_Z: float
    Q: float
    P_chain: float
    hops: int


def _chain(stats: HopStats, r: int) -> ChainResult:
    if r == 0:
        return ChainResult(0.0, 0.0, 0.0, 1.0, 0)
    ps = stats.P_success
    if ps <= 0:
        return ChainResult(1.0, 1.0, 1.0, 0.0, r)
    log_ps = math.log(ps)

    def q(pc):
        if pc <= 0:
            return 1.0
        # pc can exceed ps by rounding when eps = 0
        return min(1.0, max(0.0, -math.expm1(r * (math.log(pc) - log_ps))))

    qx, qz = q(stats.P_correct_X), q(stats.P_correct_Z)
    return ChainResult(qx, qz, (qx + qz) / 2, math.exp(r * log_ps), r)


def end_to_end(config: RepeaterConfig) -> ChainResult:
    ex, ez = epsilon_xz(config.channel)
    return _chain(hop_stats(config.code, config.p_l, ex, ez), config.stations)


def entropy_h(Q: float, d: int) -> float:
    """``-Q log2(Q/(d-1)) - (1-Q) log2(1-Q)``, continuous at the endpoints."""
    if not 0.0 <= Q <= 1.0:
        raise ValueError("Q must be in [0, 1]")
    out = 0.0
    if Q > 0:
        out -= Q * math.log2(Q / (d - 1))
    if Q < 1:
        out -= (1 - Q) * math.log2(1 - Q)
    return out


def secret_fraction(Q: float, d: int) -> float:
    return max(0.0, math.log2(d) - 2 * entropy_h(Q, d))


def key_rate(config: RepeaterConfig) -> tuple[float, float]:
    """(R in 1/s, R t0)."""
    res = end_to_end(config)
    rt0 = res.P_chain * secret_fraction(res.Q, config.code.dim)
    return rt0 / config.t0, rt0


def q_max(d: int, xtol: float = 1e-12) -> float:
    """Largest Q with ``log2 d - 2 h(Q) >= 0``."""
    if d < 2:
        raise InfeasibleError("no positive key fraction for d < 2")
    f = lambda Q: math.log2(d) - 2 * entropy_h(Q, d)
    return bisect(f, 0.0, (d - 1) / d, xtol=xtol)


def l_tot_max(code: QpycCode, params: ChannelParams | float, L0: float,
              L_att: float = DEFAULT_L_ATT) -> float:
    """Range at which Q reaches Q_max, to leading order in the operation errors.

    A bare float ``params`` sets eps_g = eps_d = eps_p to that value.
    """
    p = loss_per_segment(L0, L_att)
    if not isinstance(params, ChannelParams):
        e = float(params)
        params = ChannelParams(p, e, e, e, code.dim)
    ex, ez = epsilon_xz(params)
    denom = p_incorrect_leading(code.k, p, ex) + p_incorrect_leading(code.k, p, ez)
    if denom == 0:
        return math.inf
    return 2 * q_max(code.dim) * L0 / denom


SWEEP_COLUMNS = ("code", "eps", "L_tot_km", "R_t0", "Q", "P_chain", "R_t0_approx")


def sweep_rate_vs_distance(codes: Iterable[QpycCode], eps_values: Iterable[float], L0: float,
                           grid: Iterable[float], t0: float = 1e-6,
                           L_att: float = DEFAULT_L_ATT) -> list[dict]:
    """R t0 along a distance grid, exact and with leading-order P_incorrect."""
    rows = []
    grid = list(grid)
    for code in codes:
        p = loss_per_segment(L0, L_att)
        for eps in eps_values:
            params = ChannelParams(p, eps, eps, eps, code.dim)
            ex, ez = epsilon_xz(params)
            stats = hop_stats(code, p, ex, ez)
            ps = stats.P_success
            approx = HopStats(stats.P_fail,
                              ps - p_incorrect_leading(code.k, p, ex),
                              ps - p_incorrect_leading(code.k, p, ez),
                              p_incorrect_leading(code.k, p, ex),
                              p_incorrect_leading(code.k, p, ez))
            for L in grid:
                r = round(L / L0)
                res = _chain(stats, r)
                app = _chain(approx, r)
                rows.append({
                    "code": code.name, "eps": eps, "L_tot_km": L,
                    "R_t0": res.P_chain * secret_fraction(res.Q, code.dim),
                    "Q": res.Q, "P_chain": res.P_chain,
                    "R_t0_approx": app.P_chain * secret_fraction(app.Q, code.dim),
                })
    return rows


def load_document(path: str | Path) -> dict:
    """Read a JSON or (by suffix) TOML document."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".toml":
        try:
            import tomllib
        except ImportError:  # Python < 3.11
            import tomli as tomllib
        return tomllib.loads(text)
    return json.loads(text)


def config_from_dict(doc: dict) -> RepeaterConfig:
    doc = dict(doc)
    code = doc.pop("code", "qpyc:1")
    if isinstance(code, str):
        code = parse_code(code)
    if not isinstance(code, QpycCode):
        raise ValueError("repeater chains use QPyC codes")
    known = {"L_tot", "L0", "eps_g", "eps_d", "eps_p", "t0", "L_att"}
    extra = set(doc) - known
    if extra:
        raise ValueError(f"unknown config keys: {sorted(extra)}")
    return RepeaterConfig(code=code, **{k: float(v) for k, v in doc.items()})


def load_config(path: str | Path) -> RepeaterConfig:
    return config_from_dict(load_document(path))
