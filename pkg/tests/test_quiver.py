import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qsha.errors import StructuralError, UnsupportedInputError, ValidationError, WeightConditionError
from qsha.quiver import (
    CARTAN_EXAMPLES,
    CartanData,
    QuiverWithSymmetrizer,
    cartan_to_quiver,
    check_specialization,
    default_weights,
    extend_quiver,
    require_valid,
    validate_cartan,
)

HALF = Fraction(1, 2)


def test_validate_cartan():
    assert validate_cartan(CartanData([[2, -1], [-2, 2]], [2, 1])) == []
    bad = validate_cartan(CartanData([[2, -1], [-2, 2]], [1, 1]))
    assert len(bad) == 1 and "-1 != " in bad[0]
    assert validate_cartan(CartanData([[2]], [1])) == []
    with pytest.raises(ValidationError):
        require_valid(CartanData([[2, -1], [-2, 2]], [1, 1]))
    with pytest.raises(StructuralError):
        validate_cartan(CartanData([[2, -1]], [1]))


@pytest.mark.parametrize("name,l12,l21", [("A2", 1, 1), ("B2", 1, 2), ("G2", 1, 3)])
def test_rank_two_quivers(name, l12, l21):
    q = cartan_to_quiver(CARTAN_EXAMPLES[name])
    assert [(a.source, a.target) for a in q.arrows] == [(0, 1)]
    assert q.l(0, 1) == l12 and q.l(1, 0) == l21


def test_gcd_two_matrix():
    q = cartan_to_quiver(CARTAN_EXAMPLES["A1^(1)"])
    assert len(q.arrows) == 2 and q.l(0, 1) == q.l(1, 0) == 1


def test_a1_has_no_arrows():
    assert cartan_to_quiver(CARTAN_EXAMPLES["A1"]).arrows == ()


def test_extended_quiver_generators():
    eq = extend_quiver(cartan_to_quiver(CARTAN_EXAMPLES["B2"]))
    assert sorted(g.name for g in eq.generators()) == ["B:0", "B:1", "h:0", "hs:0"]
    empty = extend_quiver(QuiverWithSymmetrizer(2, (), {}))
    assert [g.name for g in empty.generators()] == ["B:0", "B:1"]
    a2 = extend_quiver(cartan_to_quiver(CARTAN_EXAMPLES["A2"]))
    assert len(a2.generators()) - len(a2.base.arrows) == 3


def test_default_weight_examples():
    w = default_weights(cartan_to_quiver(CARTAN_EXAMPLES["B2"]), (2, 1))
    assert (w.m_arrow, w.m_reversed) == ((2,), (2,))
    w = default_weights(cartan_to_quiver(CARTAN_EXAMPLES["G2"]), (3, 1))
    assert (w.m_arrow, w.m_reversed) == ((3,), (3,))
    # two parallel arrows with d = 1
    q = QuiverWithSymmetrizer(2, ((0, 1), (0, 1)), {(0, 1): 1, (1, 0): 1})
    w = default_weights(q, (1, 1))
    assert w.m_arrow == (2, 0) and w.m_reversed == (0, 2)


def test_weight_errors():
    q = cartan_to_quiver(CARTAN_EXAMPLES["B2"])
    with pytest.raises(WeightConditionError):
        default_weights(q, (1, 1))
    cyc = QuiverWithSymmetrizer(2, ((0, 1), (1, 0)), {(0, 1): 1, (1, 0): 1})
    with pytest.raises(UnsupportedInputError):
        default_weights(cyc, (1, 1))
    with pytest.raises(UnsupportedInputError):
        QuiverWithSymmetrizer(1, ((0, 0),), {(0, 0): 1})
    with pytest.raises(StructuralError):
        QuiverWithSymmetrizer(2, ((0, 1),), {(0, 1): 1})


def test_specialization():
    w = default_weights(cartan_to_quiver(CARTAN_EXAMPLES["B2"]), (2, 1))
    assert check_specialization(w, HALF, HALF, -1)
    assert check_specialization(w, 0, 0, 0)
    assert not check_specialization(w, 1, 1, 1)


def test_quiver_json_roundtrip():
    q = cartan_to_quiver(CARTAN_EXAMPLES["G2"])
    assert QuiverWithSymmetrizer.from_json(q.to_json()) == q


@st.composite
def symmetrizable_cartan(draw):
    """Random valid rank-2 or rank-3 data, built as A = D^{-1} S with S symmetric."""
    n = draw(st.integers(2, 3))
    D = [draw(st.integers(1, 3)) for _ in range(n)]
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                # d_i a_ij = d_j a_ji = -s with s a common multiple of d_i and d_j
                s = math.lcm(D[i], D[j]) * draw(st.integers(1, 2))
                A[i][j], A[j][i] = -s // D[i], -s // D[j]
    return CartanData(A, D)


@settings(max_examples=50, deadline=None)
@given(symmetrizable_cartan())
def test_weights_from_cartan_always_specialize(cartan):
    q = cartan_to_quiver(cartan)
    for i, j in q.adjacent_pairs():
        g = math.gcd(cartan.A[i][j], cartan.A[j][i])
        assert len(q.arrows_between(i, j)) == g
        assert q.l(i, j) * g == -cartan.A[i][j]
    w = default_weights(q, cartan.D)
    assert w.violations() == []
    assert check_specialization(w, HALF, HALF, -1)
