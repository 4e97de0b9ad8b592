import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import skew_mul, smith_diagonal
from workbench.rings import (
    GF,
    Integers,
    Localized,
    RingError,
    diagonal_normal_form,
    euclidean_divide,
    f4_skew,
    identity,
    localization_map,
    mat_eq,
    matmul,
    twist_phi,
)

ZZ = Integers(2)
F4 = f4_skew()
ALPHA = F4.F.generator

ints = st.integers(-50, 50)
f4_elems = st.lists(st.integers(0, 3), max_size=5).map(F4.elem)


def small_matrices(max_dim=4, lo=-9, hi=9):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)))


# ---------------------------------------------------------------------------
# finite fields


def test_f4_field_axioms_exhaustive():
    F = F4.F
    for a in range(4):
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in range(4):
            assert F.mul(a, b) == F.mul(b, a)
            for c in range(4):
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
                assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_frobenius_is_an_automorphism_of_order_m():
    F = GF(2, 3, (1, 1, 0, 1))
    images = {F.frob(a) for a in range(F.q)}
    assert images == set(range(F.q))
    assert all(F.frob(a, 3) == a for a in range(F.q))


def test_non_prime_characteristic_rejected():
    with pytest.raises(RingError):
        GF(4)


# ---------------------------------------------------------------------------
# euclidean division


def test_integer_division_example():
    assert euclidean_divide(ZZ, 7, 2) == (3, 1)


def test_skew_monomial_division():
    q, r = euclidean_divide(F4, F4.monomial(1, 2), F4.s)
    assert q == F4.s and r == ()


def test_skew_twisted_left_division():
    a = F4.monomial(ALPHA, 2)
    q, r = euclidean_divide(F4, a, F4.s, "left")
    assert r == ()
    assert skew_mul(F4.F, F4.k, q, F4.s) == a


@given(ints, ints.filter(lambda b: b != 0))
def test_integer_reconstruction(a, b):
    for side in ("left", "right"):
        q, r = euclidean_divide(ZZ, a, b, side)
        assert q * b + r == a
        assert abs(r) < abs(b)


@given(f4_elems, f4_elems.filter(lambda b: b != ()))
def test_skew_reconstruction_both_sides(a, b):
    q, r = euclidean_divide(F4, a, b, "left")
    assert F4.add(skew_mul(F4.F, F4.k, q, b), r) == a
    assert len(r) < len(b)
    q, r = euclidean_divide(F4, a, b, "right")
    assert F4.add(skew_mul(F4.F, F4.k, b, q), r) == a
    assert len(r) < len(b)


def test_division_by_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        euclidean_divide(ZZ, 3, 0)
    with pytest.raises(ZeroDivisionError):
        euclidean_divide(F4, F4.one, ())


# ---------------------------------------------------------------------------
# skew multiplication, normality and the twist


@given(f4_elems, f4_elems)
def test_skew_product_matches_coefficient_expansion(a, b):
    assert F4.mul(a, b) == skew_mul(F4.F, F4.k, a, b)


@given(f4_elems, f4_elems, f4_elems)
def test_skew_associativity(a, b, c):
    assert F4.mul(F4.mul(a, b), c) == F4.mul(a, F4.mul(b, c))


@given(f4_elems)
def test_twist_relation(a):
    # a s = s phi(a), and phi is invertible
    assert F4.mul(a, F4.s) == F4.mul(F4.s, twist_phi(F4, a, 1))
    assert twist_phi(F4, twist_phi(F4, a, 1), -1) == a


@given(f4_elems.filter(lambda a: a != ()))
def test_s_is_regular(a):
    assert F4.mul(a, F4.s) != () and F4.mul(F4.s, a) != ()


def test_twist_on_constant_of_f4():
    # phi = sigma^-1 and sigma has order 2 on F_4, so phi(alpha) = alpha^2
    a = F4.const(ALPHA)
    assert twist_phi(F4, a) == F4.const(F4.F.mul(ALPHA, ALPHA))


def test_twist_fixes_s_and_is_trivial_over_integers():
    assert twist_phi(F4, F4.s) == F4.s
    assert all(twist_phi(ZZ, a, k) == a for a in range(-5, 6) for k in (-2, 1, 3))


# ---------------------------------------------------------------------------
# localisation


def _frac(x):
    a, k = x
    return Fraction(a, 2 ** k)


def test_localisation_examples():
    L = Localized(ZZ)
    assert localization_map(L, 6) == (6, 0)
    total = L.add(L.mul((3, 0), (1, 1)), L.mul((5, 0), (1, 2)))
    assert _frac(total) == Fraction(11, 4)
    assert total == (11, 2)


def test_skew_localisation_inverts_x():
    L = Localized(F4)
    x = localization_map(L, F4.s)
    assert x[1] == 0
    assert L.eq(L.mul(x, L.unit_inverse(x)), L.one)
    assert L.eq(L.mul(L.unit_inverse(x), x), L.one)


@given(st.integers(-40, 40), st.integers(0, 4), st.integers(-40, 40), st.integers(0, 4))
def test_localisation_matches_rationals(a, j, b, k):
    L = Localized(ZZ)
    x, y = L.reduce((a, j)), L.reduce((b, k))
    assert _frac(L.add(x, y)) == _frac(x) + _frac(y)
    assert _frac(L.mul(x, y)) == _frac(x) * _frac(y)
    # minimal denominators
    z = L.add(x, y)
    assert z[1] == 0 or z[0] % 2 != 0


@given(f4_elems, f4_elems)
def test_localisation_map_is_multiplicative(a, b):
    L = Localized(F4)
    assert L.eq(L.mul(localization_map(L, a), localization_map(L, b)), localization_map(L, F4.mul(a, b)))


# ---------------------------------------------------------------------------
# diagonal normal form


def _check_form(R, A, F):
    m, n = len(A), len(A[0])
    assert mat_eq(R, matmul(R, matmul(R, F.U, A), F.V), F.D)
    assert mat_eq(R, matmul(R, F.U, F.Uinv), identity(R, m))
    assert mat_eq(R, matmul(R, F.Uinv, F.U), identity(R, m))
    assert mat_eq(R, matmul(R, F.V, F.Vinv), identity(R, n))
    assert mat_eq(R, matmul(R, F.Vinv, F.V), identity(R, n))
    for i in range(m):
        for j in range(n):
            if i != j:
                assert R.is_zero(F.D[i][j])


def test_identity_is_its_own_form():
    F = diagonal_normal_form(ZZ, [[1, 0], [0, 1]])
    assert [F.D[i][i] for i in range(2)] == [1, 1]


def test_known_smith_form():
    A = [[2, 4], [6, 8]]
    F = diagonal_normal_form(ZZ, A)
    _check_form(ZZ, A, F)
    assert [abs(d) for d in F.diagonal(ZZ)] == [2, 4] == smith_diagonal(A)


def test_skew_diagonal_unchanged():
    A = [[F4.s, ()], [(), F4.s_power(2)]]
    F = diagonal_normal_form(F4, A)
    _check_form(F4, A, F)
    assert [len(F.D[i][i]) - 1 for i in range(2)] == [1, 2]


@given(small_matrices())
def test_smith_form_against_minor_oracle(A):
    F = diagonal_normal_form(ZZ, A, len(A[0]))
    _check_form(ZZ, A, F)
    diag = [abs(d) for d in F.diagonal(ZZ)]
    assert diag == smith_diagonal(A)
    assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1))


@given(st.integers(1, 3), st.integers(1, 3), st.randoms(use_true_random=False))
def test_skew_form_reconstruction(m, n, rnd):
    A = [[F4.random_element(rnd, 2) for _ in range(n)] for _ in range(m)]
    F = diagonal_normal_form(F4, A, n)
    _check_form(F4, A, F)


def test_normal_form_is_deterministic():
    rng = random.Random(3)
    A = [[F4.random_element(rng, 3) for _ in range(3)] for _ in range(3)]
    a, b = diagonal_normal_form(F4, A, 3), diagonal_normal_form(F4, A, 3)
    assert a.D == b.D and a.U == b.U and a.V == b.V


def test_localized_ring_rejects_division():
    with pytest.raises(RingError):
        euclidean_divide(Localized(ZZ), (1, 0), (1, 0))


def test_five_hundred_seeded_skew_divisions():
    rng = random.Random(20)
    for _ in range(500):
        a = F4.random_element(rng, 5)
        b = F4.random_element(rng, 3)
        if b == ():
            continue
        for side in ("left", "right"):
            q, r = euclidean_divide(F4, a, b, side)
            prod = F4.mul(q, b) if side == "left" else F4.mul(b, q)
            assert F4.add(prod, r) == a and len(r) < len(b)
