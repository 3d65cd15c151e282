import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qpyc.field import (
    FieldElement,
    FieldError,
    InsufficientDataError,
    Polynomial,
    PrimeModulus,
    field_arith,
    first_prime_geq,
    inv_mod,
    is_prime,
    lagrange_interpolate,
    poly_eval,
)

PRIMES = [2, 3, 5, 7, 11]


def test_is_prime_agrees_with_sympy():
    assert [n for n in range(200) if is_prime(n)] == list(sympy.primerange(0, 200))


@pytest.mark.parametrize("n,expected", [(2, 2), (3, 3), (4, 5), (7, 7), (9, 11), (14, 17), (43, 43)])
def test_first_prime_geq(n, expected):
    assert first_prime_geq(n).d == expected
    assert expected == sympy.nextprime(n - 1)


def test_first_prime_geq_rejects_small():
    with pytest.raises(FieldError):
        first_prime_geq(1)


def test_modulus_must_be_prime():
    with pytest.raises(FieldError):
        PrimeModulus(9)
    with pytest.raises(FieldError):
        PrimeModulus(1)


def test_arith_examples():
    F3, F5 = PrimeModulus(3), PrimeModulus(5)
    assert field_arith(F3(2), F3(2), "add").value == 1
    assert field_arith(F5(2), None, "inv").value == 3
    a = F5(4)
    assert field_arith(a, F5(1), "mul") == a
    assert field_arith(F5(3), 4, "pow").value == 81 % 5
    with pytest.raises(ZeroDivisionError):
        field_arith(F5(0), None, "inv")
    with pytest.raises(FieldError):
        field_arith(F5(1), F5(1), "mod")


def test_mixed_moduli_rejected():
    with pytest.raises(FieldError):
        PrimeModulus(3)(1) + PrimeModulus(5)(1)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        inv_mod(0, 7)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_field_axioms(d, x, y, z):
    F = PrimeModulus(d)
    a, b, c = F(x), F(y), F(z)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == F(0)
    if a.value:
        assert a * a.inverse() == F(1)
        assert (b / a) * a == b


def test_poly_eval_examples():
    assert poly_eval(Polynomial((0, 1), PrimeModulus(3)), 2).value == 2
    assert poly_eval(Polynomial((1, 1, 1), PrimeModulus(5)), 2).value == 2
    P = Polynomial((4,), PrimeModulus(7))
    assert all(poly_eval(P, t).value == 4 for t in range(7))
    with pytest.raises(FieldError):
        poly_eval(P, PrimeModulus(5)(1))


def test_interpolate_examples():
    F = PrimeModulus(3)
    for s in range(3):
        p = lagrange_interpolate([(F(0), F(s)), (F(1), F(s))], 0)
        assert p.coefficients == (s,)
    p = lagrange_interpolate([(F(0), F(0)), (F(1), F(1))], 1)
    assert p.coefficients == (0, 1)


def test_interpolate_errors():
    F = PrimeModulus(5)
    with pytest.raises(FieldError):
        lagrange_interpolate([(F(1), F(0)), (F(1), F(2))], 1)
    with pytest.raises(InsufficientDataError):
        lagrange_interpolate([(F(1), F(0))], 1)
    with pytest.raises(FieldError):
        # third point off the line through the first two
        lagrange_interpolate([(F(0), F(0)), (F(1), F(1)), (F(2), F(3))], 1)


def test_interpolate_matches_sympy():
    # independent oracle: sympy's rational interpolation reduced mod d
    t = sympy.symbols("t")
    rng = random.Random(3)
    for d in (5, 7, 11):
        F = PrimeModulus(d)
        xs = rng.sample(range(d), 4)
        ys = [rng.randrange(d) for _ in xs]
        ours = lagrange_interpolate([(F(x), F(y)) for x, y in zip(xs, ys)], 3).coefficients
        poly = sympy.Poly(sympy.interpolate(list(zip(xs, ys)), t), t)
        theirs = [int(c.p) * pow(int(c.q), -1, d) % d for c in reversed(poly.all_coeffs())]
        theirs += [0] * (4 - len(theirs))
        assert list(ours) == theirs


@pytest.mark.parametrize("d", [3, 5, 7, 11])
def test_round_trip(d):
    rng = random.Random(d)
    F = PrimeModulus(d)
    for _ in range(1000):
        k = rng.randrange(0, (d - 1) // 2 + 1)
        coeffs = tuple(rng.randrange(d) for _ in range(k + 1))
        xs = rng.sample(range(d), k + 1)
        pts = [(F(x), poly_eval(Polynomial(coeffs, F), x)) for x in xs]
        assert lagrange_interpolate(pts, k).coefficients == coeffs


def test_elements_are_immutable():
    e = PrimeModulus(3)(2)
    with pytest.raises(Exception):
        e.value = 1
    with pytest.raises(FieldError):
        FieldElement(5, PrimeModulus(3))
