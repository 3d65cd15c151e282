"""Prime-field arithmetic over Z_d, polynomial evaluation and Lagrange interpolation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class FieldError(ValueError):
    """Raised on invalid field arguments (non-prime modulus, mismatched moduli, ...)."""


class InsufficientDataError(FieldError):
    """Raised when interpolation is asked for with too few points."""


def is_prime(n: int) -> bool:
    """Deterministic trial division; fine for the small dimensions used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """The modulus ``d`` of the field Z_d."""

    d: int

    def __post_init__(self):
        if not isinstance(self.d, (int,)) or isinstance(self.d, bool):
            raise FieldError(f"modulus must be an integer, got {self.d!r}")
        if not is_prime(self.d):
            raise FieldError(f"modulus {self.d} is not prime")

    def __int__(self) -> int:
        return self.d

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.d, self)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(v, self) for v in range(self.d)]


def first_prime_geq(n: int) -> PrimeModulus:
    """Smallest prime ``>= n``.

    >>> first_prime_geq(9).d
    11
    """
    if n < 2:
        raise FieldError(f"n must be >= 2, got {n}")
    m = n
    while not is_prime(m):
        m += 1
    return PrimeModulus(m)


def inv_mod(a: int, d: int) -> int:
    a %= d
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse modulo {d}")
    return pow(a, d - 2, d)


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.d:
            raise FieldError(f"value {self.value} outside [0, {self.modulus.d})")

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise FieldError(f"modulus mismatch: {self.modulus.d} vs {other.modulus.d}")
            return other
        if isinstance(other, int):
            return self.modulus(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.modulus(self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.modulus(self.value - o.value)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.modulus(o.value - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.modulus(self.value * o.value)

    __rmul__ = __mul__

    def __neg__(self):
        return self.modulus(-self.value)

    def inverse(self) -> FieldElement:
        return self.modulus(inv_mod(self.value, self.modulus.d))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return self.modulus(pow(self.value, exponent, self.modulus.d))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus.d})"


def field_arith(a: FieldElement, b: FieldElement | int | None, op: str) -> FieldElement:
    """Apply one of ``add, sub, mul, inv, pow`` (``b`` is the exponent for ``pow``)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise FieldError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class Polynomial:
    """Polynomial ``sum_j c_j t^j`` over Z_d; ``coefficients[j]`` is ``c_j``."""

    coefficients: tuple[int, ...]
    modulus: PrimeModulus

    def __post_init__(self):
        d = self.modulus.d
        object.__setattr__(self, "coefficients", tuple(int(c) % d for c in self.coefficients))
        if not self.coefficients:
            raise FieldError("polynomial needs at least one coefficient")

    @classmethod
    def from_elements(cls, coeffs: Sequence[FieldElement]) -> Polynomial:
        mods = {c.modulus for c in coeffs}
        if len(mods) != 1:
            raise FieldError("coefficients must share one modulus")
        return cls(tuple(c.value for c in coeffs), mods.pop())

    @property
    def degree_bound(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, t) -> FieldElement:
        return poly_eval(self, t)


def eval_int(coeffs: Sequence[int], t: int, d: int) -> int:
    """Horner evaluation on plain integers."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * t + c) % d
    return acc


def poly_eval(p: Polynomial, t: FieldElement | int) -> FieldElement:
    if isinstance(t, FieldElement):
        if t.modulus != p.modulus:
            raise FieldError(f"modulus mismatch: {p.modulus.d} vs {t.modulus.d}")
        t = t.value
    return p.modulus(eval_int(p.coefficients, int(t), p.modulus.d))


def interpolate_int(xs: Sequence[int], ys: Sequence[int], d: int) -> list[int]:
    """Coefficients (low to high, length ``len(xs)``) of the Lagrange interpolant."""
    m = len(xs)
    coeffs = [0] * m
    for j in range(m):
        # basis numerator prod_{i != j} (t - x_i), built low-to-high
        basis = [1]
        denom = 1
        for i in range(m):
            if i == j:
                continue
            basis = [(-xs[i] * basis[0]) % d] + [
                (basis[q - 1] - xs[i] * basis[q]) % d for q in range(1, len(basis))
            ] + [basis[-1]]
            denom = denom * (xs[j] - xs[i]) % d
        scale = ys[j] * inv_mod(denom, d) % d
        for q in range(m):
            coeffs[q] = (coeffs[q] + scale * basis[q]) % d
    return coeffs


def lagrange_interpolate(
    points: Iterable[tuple[FieldElement, FieldElement]], degree_bound: int
) -> Polynomial:
    """Unique polynomial of degree ``<= degree_bound`` through ``points``.

    Only the first ``degree_bound + 1`` points are used to build the interpolant;
    any further points must lie on it, otherwise a :class:`FieldError` is raised.
    """
    points = list(points)
    if not points:
        raise InsufficientDataError("no points given")
    mod = points[0][0].modulus
    for x, y in points:
        if x.modulus != mod or y.modulus != mod:
            raise FieldError("all points must share one modulus")
    xs = [x.value for x, _ in points]
    if len(set(xs)) != len(xs):
        raise FieldError("duplicate x coordinates")
    if len(points) < degree_bound + 1:
        raise InsufficientDataError(
            f"need {degree_bound + 1} points for degree {degree_bound}, got {len(points)}"
        )
    ys = [y.value for _, y in points]
    m = degree_bound + 1
    coeffs = interpolate_int(xs[:m], ys[:m], mod.d)
    for x, y in zip(xs[m:], ys[m:]):
        if eval_int(coeffs, x, mod.d) != y:
            raise FieldError(f"points are not consistent with degree <= {degree_bound}")
    return Polynomial(tuple(coeffs), mod)


def top_coefficient_weights(xs: Sequence[int], d: int) -> list[int]:
    """Weights ``w`` with ``sum_j w_j p(x_j) = c_top`` for every p of degree < len(xs)."""
    w = []
    for j, xj in enumerate(xs):
        denom = 1
        for i, xi in enumerate(xs):
            if i != j:
                denom = denom * (xj - xi) % d
        w.append(inv_mod(denom, d))
    return w
