import random
from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given, settings, strategies as st

from qsha.errors import StructuralError, ValidationError
from qsha.poly import MPoly, RatExpr, is_symmetric, specialize_twisted, symmetrize
from qsha.quiver import CARTAN_EXAMPLES, QuiverWithSymmetrizer, WeightFunction, default_weights
from qsha.shuffle import (
    GENERIC,
    TWISTED,
    KernelConfig,
    ShuffleElement,
    check_associativity,
    fac1,
    fac2,
    integrand,
    random_symmetric,
    shuffle_mul,
    star_power,
    twist_exponent,
    unit_vector,
)

hbar = MPoly.param("hbar")
QUIVERS = ["A2", "B2", "G2", "A1^(1)"]


def cfg(name, mode=TWISTED):
    return KernelConfig.from_cartan(CARTAN_EXAMPLES[name], mode)


def el(grade, value):
    return ShuffleElement(grade, value)


def oracle_product(f1, f2, c):
    """Full symmetrization over S_{v1+v2}, divided by |S_v1| |S_v2|."""
    v = tuple(a + b for a, b in zip(f1.grade, f2.grade))
    total = symmetrize(integrand(f1, f2, c), v)
    order = prod(factorial(x) for x in f1.grade) * prod(factorial(x) for x in f2.grade)
    if c.corrupt_sign and twist_exponent(f1.grade, f2.grade, c.quiver) % 2:
        total = -total
    return total.to_poly().scale(Fraction(1, order))


def test_fac1_diagonal_twisted():
    c = cfg("B2")
    x1, x2 = MPoly.lam(0, 1), MPoly.lam(0, 2)
    # d_0 = 2, t3 = -hbar
    assert fac1((1, 0), (1, 0), c) == RatExpr(x1 - x2 + hbar * 2, x1 - x2)
    assert fac1((0, 0), (1, 0), c) == RatExpr(MPoly.const(1))


def test_fac1_generic_equals_flipped_form():
    c = cfg("A2", GENERIC)
    x1, x2, t3 = MPoly.lam(1, 1), MPoly.lam(1, 2), MPoly.param("t3")
    assert fac1((0, 1), (0, 1), c) == RatExpr(x1 - x2 - t3, x1 - x2)


def test_fac2_b2_single_factor():
    c = cfg("B2")
    assert fac2((1, 0), (0, 1), c) == MPoly.lam(1, 1) - MPoly.lam(0, 1) + hbar
    empty = QuiverWithSymmetrizer(2, (), {})
    c0 = KernelConfig(empty, WeightFunction(empty, (1, 1), (), ()), TWISTED)
    assert fac2((1, 1), (2, 1), c0) == MPoly.const(1)


@pytest.mark.parametrize("name", QUIVERS)
def test_fac2_sign_law(name):
    tw, gen = cfg(name), cfg(name, GENERIC)
    for v1 in [(1, 0), (0, 1), (1, 1), (2, 1)]:
        for v2 in [(1, 0), (0, 1), (1, 1), (1, 2)]:
            e = twist_exponent(v1, v2, tw.quiver)
            assert fac2(v1, v2, tw) == specialize_twisted(fac2(v1, v2, gen)) * (-1) ** e


def test_unit_law():
    c = cfg("B2")
    f = random_symmetric((2, 1), random.Random(0))
    u = ShuffleElement.unit(2)
    assert shuffle_mul(u, f, c) == f
    assert shuffle_mul(f, u, c) == f


def test_x0_squared_and_cubed():
    c = cfg("A2")
    x = el((1, 0), 1)
    assert star_power(x, 1, c) == x
    assert star_power(x, 2, c).value == MPoly.const(2)
    assert star_power(x, 3, c).value == MPoly.const(6)


@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (2, 1), (1, 3)])
def test_a2_mode_monomials(p, q):
    c = cfg("A2")
    lk, ll = MPoly.lam(0, 1), MPoly.lam(1, 1)
    got = shuffle_mul(el((1, 0), lk ** p), el((0, 1), ll ** q), c).value
    assert got == lk ** p * ll ** q * (ll - lk + hbar * Fraction(1, 2))


def test_a2_small_products():
    c = cfg("A2")
    x0, x1 = el((1, 0), 1), el((0, 1), 1)
    l0, l1 = MPoly.lam(0, 1), MPoly.lam(1, 1)
    assert shuffle_mul(x0, x1, c).value == hbar * Fraction(1, 2) - l0 + l1
    assert shuffle_mul(x1, x0, c).value == -hbar * Fraction(1, 2) - l0 + l1


@pytest.mark.parametrize("name", QUIVERS)
@pytest.mark.parametrize("mode", [TWISTED, GENERIC])
def test_matches_full_symmetrization(name, mode):
    c = cfg(name, mode)
    rng = random.Random(11)
    params = ("hbar",) if mode == TWISTED else ("t1", "t3")
    for v1, v2 in [((1, 0), (1, 1)), ((0, 2), (1, 0)), ((1, 1), (1, 1)), ((2, 0), (0, 2))]:
        f1 = random_symmetric(v1, rng, params=params)
        f2 = random_symmetric(v2, rng, params=params)
        assert shuffle_mul(f1, f2, c).value == oracle_product(f1, f2, c)


@pytest.mark.parametrize("name", QUIVERS)
def test_twisted_is_signed_specialization(name):
    tw, gen = cfg(name), cfg(name, GENERIC)
    rng = random.Random(12)
    for v1, v2 in [((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (1, 0)), ((1, 1), (0, 2))]:
        f1, f2 = random_symmetric(v1, rng), random_symmetric(v2, rng)
        e = twist_exponent(v1, v2, tw.quiver)
        expected = specialize_twisted(shuffle_mul(f1, f2, gen).value) * (-1) ** e
        assert shuffle_mul(f1, f2, tw).value == expected


def test_associativity_examples():
    assert check_associativity(cfg("A2"), [(1, 0)] * 3, trials=5).ok
    assert check_associativity(cfg("B2"), [(1, 0), (0, 1), (1, 0)], trials=5).ok
    assert check_associativity(cfg("G2"), [(0, 0), (0, 1), (1, 0)], trials=2).ok
    assert check_associativity(cfg("A2", GENERIC), [(1, 0), (0, 1), (1, 0)], trials=3).ok


def test_grade_checks():
    with pytest.raises(StructuralError):
        ShuffleElement.from_json({"grade": [1, 0], "poly": MPoly.lam(0, 2).to_json()})
    with pytest.raises(StructuralError):
        ShuffleElement((-1, 0), 1)
    with pytest.raises(StructuralError):
        shuffle_mul(el((1,), 1), el((1, 0), 1), cfg("A2"))
    f = el((1, 1), MPoly.lam(0, 1) * MPoly.lam(1, 1) - 3)
    assert ShuffleElement.from_json(f.to_json()) == f


def test_twisted_mode_rejects_bad_weights():
    q = cfg("B2").quiver
    w = default_weights(q, (2, 1))
    bad = WeightFunction(q, w.m_vertex, (1,), (1,))
    with pytest.raises(ValidationError):
        KernelConfig(q, bad, TWISTED)
    KernelConfig(q, bad, GENERIC)


grades = st.tuples(st.integers(0, 2), st.integers(0, 1))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(QUIVERS), grades, grades, st.integers(0, 10**6))
def test_products_are_symmetric(name, v1, v2, seed):
    rng = random.Random(seed)
    c = cfg(name)
    f1, f2 = random_symmetric(v1, rng, params=("hbar",)), random_symmetric(v2, rng)
    out = shuffle_mul(f1, f2, c)
    assert out.grade == tuple(a + b for a, b in zip(v1, v2))
    assert is_symmetric(out.value, out.grade)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(QUIVERS), st.integers(0, 10**6))
def test_bilinearity(name, seed):
    rng = random.Random(seed)
    c = cfg(name)
    f, g = random_symmetric((1, 1), rng), random_symmetric((1, 1), rng)
    h = random_symmetric((1, 0), rng)
    assert shuffle_mul(f + g, h, c) == shuffle_mul(f, h, c) + shuffle_mul(g, h, c)
    assert shuffle_mul(h, f * 3, c) == shuffle_mul(h, f, c) * 3


def test_unit_vector():
    assert unit_vector(1, 3) == (0, 1, 0)
