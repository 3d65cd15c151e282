"""Code constructions, erasure-correctability predicates and success probabilities.

Three code families are covered:

* :class:`QpycCode` -- the ``[[2k+1, 1, k+1]]_d`` quantum polynomial code, whose
  logical basis states are uniform superpositions of evaluation vectors of
  degree-``k`` polynomials with fixed top coefficient.
* :class:`FourQubitCode` -- the ``[[4, 2, 2]]`` qubit code.
* :class:`QpcCode` -- the quantum parity code with ``n_blocks`` blocks of
  ``m_per_block`` qubits each.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar, Iterable, Sequence, Union

import numpy as np

from .field import (
    FieldElement,
    PrimeModulus,
    eval_int,
    first_prime_geq,
    interpolate_int,
    top_coefficient_weights,
)


class InfeasibleError(ValueError):
    """Raised when no parameter choice can meet a requested target."""


@dataclass(frozen=True)
class QpycCode:
    """``[[2k+1, 1, k+1]]_d`` quantum polynomial code.

    ``eval_points`` defaults to ``(0, 1, ..., 2k)`` and ``d`` to the first prime
    no smaller than ``2k+1``.
    """

    k: int
    d: PrimeModulus = None
    eval_points: tuple[int, ...] = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        d = self.d
        if d is None:
            d = first_prime_geq(2 * self.k + 1)
        elif isinstance(d, int):
            d = PrimeModulus(d)
        object.__setattr__(self, "d", d)
        pts = self.eval_points
        if pts is None:
            pts = tuple(range(2 * self.k + 1))
        pts = tuple(int(x) for x in pts)
        object.__setattr__(self, "eval_points", pts)
        if len(pts) != 2 * self.k + 1:
            raise ValueError(f"need {2 * self.k + 1} evaluation points, got {len(pts)}")
        if any(not 0 <= x < d.d for x in pts) or len(set(pts)) != len(pts):
            raise ValueError(f"evaluation points must be distinct elements of Z_{d.d}")

    @property
    def n(self) -> int:
        return 2 * self.k + 1

    @property
    def dim(self) -> int:
        return self.d.d

    @property
    def name(self) -> str:
        return f"[[{self.n},1,{self.k + 1}]]_{self.dim}"

    def encode_digits(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        """Evaluation vector of the polynomial with coefficients ``coeffs``."""
        return tuple(eval_int(coeffs, x, self.dim) for x in self.eval_points)

    @cached_property
    def dual_multipliers(self) -> tuple[int, ...]:
        """Column multipliers ``v_j = 1 / prod_{i != j}(x_j - x_i)``.

        X-basis readouts of the code are the vectors ``(v_j q(x_j))_j`` with
        ``deg q <= k``, and the logical X value is the top coefficient of ``q``.
        """
        return tuple(top_coefficient_weights(self.eval_points, self.dim))


def qpyc_code(k: int, d: int | None = None, eval_points: Sequence[int] | None = None) -> QpycCode:
    return QpycCode(k, None if d is None else PrimeModulus(d),
                    None if eval_points is None else tuple(eval_points))


def three_qutrit_code() -> QpycCode:
    """The ``[[3,1,2]]_3`` code (k=1, d=3, evaluation points 0, 1, 2)."""
    return QpycCode(1, PrimeModulus(3), (0, 1, 2))


@dataclass(frozen=True)
class LogicalBasisState:
    """A logical basis state as an equal-weight list of computational terms."""

    label: int
    d: int
    terms: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.terms[0])

    @property
    def amplitude(self) -> float:
        return 1.0 / math.sqrt(len(self.terms))

    def vector(self) -> np.ndarray:
        """Dense amplitude vector of length ``d**n`` (qudit 0 most significant)."""
        vec = np.zeros(self.d ** self.n, dtype=complex)
        weights = self.d ** np.arange(self.n - 1, -1, -1)
        idx = np.asarray(self.terms) @ weights
        vec[idx] = self.amplitude
        return vec


def qpyc_logical_state(code: QpycCode, s: int | FieldElement) -> LogicalBasisState:
    """Enumerate the codeword terms of ``|s>_L``: all ``c`` in F^{k+1} with ``c_k = s``."""
    s = int(s) % code.dim
    terms = []
    for low in itertools.product(range(code.dim), repeat=code.k):
        terms.append(code.encode_digits(low + (s,)))
    return LogicalBasisState(s, code.dim, tuple(terms))


# --------------------------------------------------------------------------
# [[4,2,2]]


@dataclass(frozen=True)
class FourQubitCode:
    """The ``[[4,2,2]]`` code; Pauli strings are read qubit 1..4 left to right."""

    n: ClassVar[int] = 4
    dim: ClassVar[int] = 2
    name: ClassVar[str] = "[[4,2,2]]"
    stabilizers: ClassVar[tuple[str, ...]] = ("XXXX", "ZZZZ")
    # each logical lists its two equivalent representatives
    logical_operators: ClassVar[dict[str, tuple[str, str]]] = {
        "X1": ("IXIX", "XIXI"),
        "X2": ("IZIZ", "ZIZI"),
        "Z1": ("IIZZ", "ZZII"),
        "Z2": ("IIXX", "XXII"),
    }

    def logical_state(self, a: int, b: int) -> np.ndarray:
        """``|ab>_L``: ``a`` selects the odd-parity pairs, ``b`` the relative sign."""
        sign = -1.0 if b else 1.0
        pair = np.zeros(4, dtype=complex)
        if a == 0:
            pair[0b00], pair[0b11] = 1.0, sign
        else:
            pair[0b01], pair[0b10] = 1.0, sign
        return np.kron(pair, pair) / 2.0


def four_qubit_code() -> FourQubitCode:
    return FourQubitCode()


@dataclass(frozen=True)
class QpcCode:
    """Quantum parity code with ``n_blocks`` blocks of ``m_per_block`` qubits.

    Qubit ``i`` belongs to block ``i // m_per_block``.  Logical Z is ``X^{(x)m}``
    on any single block and logical X is one ``Z`` in every block.
    """

    n_blocks: int
    m_per_block: int

    def __post_init__(self):
        if self.n_blocks < 1 or self.m_per_block < 1:
            raise ValueError("QPC dimensions must be positive")

    @property
    def n(self) -> int:
        return self.n_blocks * self.m_per_block

    @property
    def dim(self) -> int:
        return 2

    @property
    def name(self) -> str:
        return f"QPC({self.n_blocks},{self.m_per_block})"


CodeSpec = Union[QpycCode, FourQubitCode, QpcCode]


@dataclass(frozen=True)
class ErasurePattern:
    erased: frozenset

    def __init__(self, erased: Iterable[int] = ()):
        object.__setattr__(self, "erased", frozenset(int(i) for i in erased))

    def __len__(self):
        return len(self.erased)

    def __iter__(self):
        return iter(sorted(self.erased))


def _as_erased(pattern, n: int) -> frozenset:
    erased = pattern.erased if isinstance(pattern, ErasurePattern) else frozenset(pattern)
    if any(not 0 <= i < n for i in erased):
        raise ValueError(f"erasure pattern {sorted(erased)} outside code coordinates [0, {n})")
    return erased


def erasure_correctable(code: CodeSpec, pattern) -> bool:
    erased = _as_erased(pattern, code.n)
    if isinstance(code, QpycCode):
        return len(erased) <= code.k
    if isinstance(code, FourQubitCode):
        return len(erased) <= 1
    if isinstance(code, QpcCode):
        m = code.m_per_block
        lost = [sum(1 for q in range(b * m, (b + 1) * m) if q in erased)
                for b in range(code.n_blocks)]
        return any(c == 0 for c in lost) and all(c < m for c in lost)
    raise TypeError(f"unsupported code {code!r}")


# --------------------------------------------------------------------------
# success probabilities


def _log_binom_pmf(n: int, j: int, p: float) -> float:
    if p == 0.0:
        return 0.0 if j == 0 else -math.inf
    if p == 1.0:
        return 0.0 if j == n else -math.inf
    return (math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)
            + j * math.log(p) + (n - j) * math.log1p(-p))


def binomial_range_sum(n: int, p: float, lo: int, hi: int) -> float:
    """``sum_{j=lo}^{hi} C(n,j) p^j (1-p)^{n-j}`` with log-space terms and fsum."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    lo, hi = max(lo, 0), min(hi, n)
    return math.fsum(math.exp(_log_binom_pmf(n, j, p)) for j in range(lo, hi + 1))


def qpyc_success_prob(k: int, p_l: float) -> float:
    """Probability that at most ``k`` of ``2k+1`` qudits are erased."""
    return binomial_range_sum(2 * k + 1, p_l, 0, k)


def qpyc_failure_prob(k: int, p_l: float) -> float:
    """``1 - qpyc_success_prob``, summed directly over the upper tail."""
    return binomial_range_sum(2 * k + 1, p_l, k + 1, 2 * k + 1)


def qpyc_asymptotic_success(k: int, p_l: float) -> float:
    """Linearization around ``p_l = 1/2`` for large ``k``, clamped to [0, 1]."""
    val = 0.5 + 2.0 * math.sqrt(k / math.pi) * (0.5 - p_l)
    return min(1.0, max(0.0, val))


def qpyc_required_k(target_P: float, p_l: float) -> int:
    """Code size estimate from the inverted linearization (at least 1)."""
    if target_P <= 0.5:
        return 1
    if p_l >= 0.5:
        raise InfeasibleError(f"success {target_P} > 1/2 is unreachable at p_l={p_l} >= 1/2")
    k = math.pi / 4.0 * ((target_P - 0.5) / (0.5 - p_l)) ** 2
    return max(1, math.ceil(k - 1e-12))


def qpc_success_prob(code: QpcCode, p_l: float) -> float:
    """Closed form: every block keeps a qubit, and at least one block is intact."""
    n, m = code.n_blocks, code.m_per_block
    survive = -math.expm1(m * math.log(p_l)) if p_l > 0 else 1.0  # 1 - p^m
    intact = (1.0 - p_l) ** m
    return survive ** n - (survive - intact) ** n


def four_qubit_success_prob(p_l: float) -> float:
    return binomial_range_sum(4, p_l, 0, 1)


def success_prob(code: CodeSpec, p_l: float) -> float:
    if isinstance(code, QpycCode):
        return qpyc_success_prob(code.k, p_l)
    if isinstance(code, FourQubitCode):
        return four_qubit_success_prob(p_l)
    if isinstance(code, QpcCode):
        return qpc_success_prob(code, p_l)
    raise TypeError(f"unsupported code {code!r}")


def pattern_success_prob(code: CodeSpec, p_l: float) -> float:
    """Success probability by enumerating every erasure pattern (small codes only)."""
    n = code.n
    if n > 20:
        raise ValueError(f"enumeration over 2^{n} patterns refused")
    total = []
    for mask in range(1 << n):
        erased = [i for i in range(n) if mask >> i & 1]
        if erasure_correctable(code, erased):
            total.append(p_l ** len(erased) * (1 - p_l) ** (n - len(erased)))
    return math.fsum(total)


# --------------------------------------------------------------------------
# brute-force oracle for qubit stabilizer codes


def _pauli_to_bits(s: str) -> tuple[int, int]:
    x = z = 0
    for i, ch in enumerate(s):
        if ch in "XY":
            x |= 1 << i
        if ch in "ZY":
            z |= 1 << i
    return x, z


def qpc_generators(code: QpcCode) -> tuple[list[str], list[str]]:
    """Stabilizer generators and (X_L, Z_L) of a QPC as Pauli strings."""
    n, m = code.n_blocks, code.m_per_block
    N = n * m

    def op(assign):
        s = ["I"] * N
        for q, ch in assign:
            s[q] = ch
        return "".join(s)

    stabs = []
    for b in range(n):
        for j in range(m - 1):
            stabs.append(op([(b * m + j, "Z"), (b * m + j + 1, "Z")]))
    for b in range(n - 1):
        stabs.append(op([(q, "X") for q in range(b * m, (b + 2) * m)]))
    x_l = op([(b * m, "Z") for b in range(n)])
    z_l = op([(q, "X") for q in range(m)])
    return stabs, [x_l, z_l]


def uncorrectable_mask_table(n: int, stabilizers: Sequence[str], logicals: Sequence[str]) -> np.ndarray:
    """Boolean table over all ``2^n`` erasure masks: True if the erased set carries a
    nontrivial logical operator (so the erasure is not correctable).

    Enumerates the full group generated by stabilizers and logicals, keeps the
    elements with a nontrivial logical component, and closes their supports
    under supersets.
    """
    if n > 20:
        raise ValueError("brute-force table limited to n <= 20")
    stab_bits = [_pauli_to_bits(s) for s in stabilizers]
    log_bits = [_pauli_to_bits(s) for s in logicals]

    def span(bits):
        xs = np.zeros(1, dtype=np.int64)
        zs = np.zeros(1, dtype=np.int64)
        for x, z in bits:
            xs = np.concatenate([xs, xs ^ x])
            zs = np.concatenate([zs, zs ^ z])
        return xs, zs

    sx, sz = span(stab_bits)
    bad = np.zeros(1 << n, dtype=bool)
    # all nontrivial combinations of the logical generators
    for combo in itertools.product([0, 1], repeat=len(log_bits)):
        if not any(combo):
            continue
        lx = lz = 0
        for c, (x, z) in zip(combo, log_bits):
            if c:
                lx ^= x
                lz ^= z
        support = (sx ^ lx) | (sz ^ lz)
        bad[support] = True
    full = np.arange(1 << n)
    for i in range(n):
        bit = 1 << i
        lo = full[(full & bit) == 0]
        bad[lo | bit] |= bad[lo]
    return bad


def qpc_success_prob_bruteforce(code: QpcCode, p_l: float) -> float:
    """Enumeration oracle for :func:`qpc_success_prob` (``n*m <= 16``)."""
    n = code.n
    stabs, logs = qpc_generators(code)
    bad = uncorrectable_mask_table(n, stabs, logs)
    weights = np.array([bin(m).count("1") for m in range(1 << n)])
    probs = p_l ** weights * (1 - p_l) ** (n - weights)
    return math.fsum(probs[~bad])


# --------------------------------------------------------------------------
# resource efficiency


def code_resources(code: CodeSpec) -> tuple[float, int, int]:
    """(logical bits carried, photons, modes) per code block."""
    if isinstance(code, QpycCode):
        return math.log2(code.dim), code.n, code.n * code.dim
    if isinstance(code, FourQubitCode):
        return 2.0, 4, 8
    if isinstance(code, QpcCode):
        return 1.0, code.n, 2 * code.n
    raise TypeError(f"unsupported code {code!r}")


def bits_per_photon(code: CodeSpec, p_l: float) -> float:
    bits, photons, _ = code_resources(code)
    return bits * success_prob(code, p_l) / photons


def bits_per_mode(code: CodeSpec, p_l: float) -> float:
    bits, _, modes = code_resources(code)
    return bits * success_prob(code, p_l) / modes


def bits_per_mode_crossover(code_a: CodeSpec, code_b: CodeSpec, lo=1e-6, hi=1 - 1e-6) -> float:
    """Loss rate where the bits/mode curves of two codes cross (bisection)."""
    from scipy.optimize import brentq

    return brentq(lambda p: bits_per_mode(code_a, p) - bits_per_mode(code_b, p), lo, hi, xtol=1e-12)


# fixed pairings of surface-code distance and QPyC size at similar Hilbert dimension
HILBERT_PAIRS = {5: 6, 7: 9, 9: 15, 11: 21}


def hilbert_match_k(D: int, explicit_pairs: bool = True, k_max: int = 200) -> int:
    """QPyC size whose ``(2k+1) log2(2k+1)`` is nearest ``2 D^2`` (ties to smaller k).

    The nearest-dimension rule disagrees with three of the four fixed
    pairings, so by default the pairs in :data:`HILBERT_PAIRS` win.
    """
    if D < 2:
        raise ValueError("D must be >= 2")
    if explicit_pairs and D in HILBERT_PAIRS:
        return HILBERT_PAIRS[D]
    target = 2.0 * D * D
    best = min(range(1, k_max + 1),
               key=lambda k: (abs((2 * k + 1) * math.log2(2 * k + 1) - target), k))
    if explicit_pairs:
        # keep the sequence monotone around the fixed pairs
        below = [v for key, v in HILBERT_PAIRS.items() if key < D]
        above = [v for key, v in HILBERT_PAIRS.items() if key > D]
        if below:
            best = max(best, max(below))
        if above:
            best = min(best, min(above))
    return best


# --------------------------------------------------------------------------
# serialization


def code_to_dict(code: CodeSpec) -> dict:
    if isinstance(code, QpycCode):
        return {"family": "qpyc", "k": code.k, "d": code.dim, "eval_points": list(code.eval_points)}
    if isinstance(code, FourQubitCode):
        return {"family": "4qubit", "d": 2}
    if isinstance(code, QpcCode):
        return {"family": "qpc", "n": code.n_blocks, "m": code.m_per_block, "d": 2}
    raise TypeError(f"unsupported code {code!r}")


def code_from_dict(doc: dict) -> CodeSpec:
    family = doc.get("family")
    if family == "qpyc":
        return qpyc_code(doc["k"], doc.get("d"), doc.get("eval_points"))
    if family == "3qutrit":
        return three_qutrit_code()
    if family == "4qubit":
        return four_qubit_code()
    if family == "qpc":
        return QpcCode(int(doc["n"]), int(doc["m"]))
    raise ValueError(f"unknown code family {family!r}")


def code_to_json(code: CodeSpec) -> str:
    return json.dumps(code_to_dict(code), sort_keys=True)


def code_from_json(text: str) -> CodeSpec:
    return code_from_dict(json.loads(text))


def parse_code(text: str) -> CodeSpec:
    """Parse ``qpyc:k``, ``qpc:n,m``, ``3qutrit`` or ``4qubit``."""
    text = text.strip().lower()
    if text == "3qutrit":
        return three_qutrit_code()
    if text == "4qubit":
        return four_qubit_code()
    fam, _, arg = text.partition(":")
    if fam == "qpyc" and arg:
        return qpyc_code(int(arg))
    if fam == "qpc" and arg:
        n, m = (int(v) for v in arg.split(","))
        return QpcCode(n, m)
    raise ValueError(f"cannot parse code {text!r}; expected qpyc:k, qpc:n,m, 3qutrit or 4qubit")


def decoding_weights(code: QpycCode, survivors: Sequence[int]) -> list[int]:
    """Weights on ``k+1`` surviving coordinates that extract the top coefficient."""
    xs = [code.eval_points[j] for j in survivors]
    return top_coefficient_weights(xs, code.dim)


def vanishing_codeword(code: QpycCode, erased: Iterable[int]) -> tuple[int, ...]:
    """Evaluation vector of a monic degree-k polynomial that vanishes on ``erased``.

    Used as the exponent vector of an X_L representative avoiding the erased set.
    """
    erased = sorted(erased)
    if len(erased) > code.k:
        raise ValueError("more than k erasures: no representative exists")
    d = code.dim
    poly = [1]
    for e in erased:
        root = code.eval_points[e]
        poly = [(-root * poly[0]) % d] + [
            (poly[q - 1] - root * poly[q]) % d for q in range(1, len(poly))
        ] + [poly[-1]]
    poly = [0] * (code.k - len(erased)) + poly  # multiply by t^(k - |E|)
    return code.encode_digits(poly)



def decode_readout(code: QpycCode, readout: dict[int, int], basis: str = "Z") -> int | None:
    """Logical value from per-qudit readouts of the surviving coordinates.

    ``readout`` maps coordinate -> measured digit.  Z readouts are evaluations
    of a degree-k polynomial; X readouts are the same after dividing by
    :attr:`QpycCode.dual_multipliers`.  Decoding is bounded-distance: a
    polynomial disagreeing with at most ``(|S| - k - 1) // 2`` of the ``|S|``
    survivors is accepted and its top coefficient returned.  ``None`` means
    the readout could not be decoded (too many erasures, or an error pattern
    outside the decoding radius was detected).
    """
    d, k = code.dim, code.k
    coords = sorted(readout)
    if len(coords) < k + 1:
        return None
    xs = [code.eval_points[j] for j in coords]
    ys = [readout[j] % d for j in coords]
    if basis == "X":
        v = code.dual_multipliers
        ys = [y * pow(v[j], d - 2, d) % d for y, j in zip(ys, coords)]
    elif basis != "Z":
        raise ValueError(f"unknown basis {basis!r}")
    radius = (len(coords) - k - 1) // 2
    need = len(coords) - radius
    for subset in itertools.combinations(range(len(coords)), k + 1):
        coeffs = interpolate_int([xs[i] for i in subset], [ys[i] for i in subset], d)
        agree = sum(eval_int(coeffs, x, d) == y for x, y in zip(xs, ys))
        if agree >= need:
            return coeffs[k]
    return None
