import random
from fractions import Fraction

import pytest

from qsha.errors import StructuralError
from qsha.paths import build_potential
from qsha.quiver import CARTAN_EXAMPLES, cartan_to_quiver, extend_quiver
from qsha.reps import (
    QuiverRep,
    as_matrix,
    check_euler_trace_identity,
    check_lemma_ZJ,
    conjugate,
    directional_derivative,
    evaluate_derivative,
    identity,
    in_J,
    is_critical,
    pairing,
    random_rep,
    trace_potential,
    zero_rep,
    zeros,
)


def setup(name):
    eq = extend_quiver(cartan_to_quiver(CARTAN_EXAMPLES[name]))
    return eq, build_potential(eq)


def scalar_rep(eq, **vals):
    mats = {name.replace("_", ":"): as_matrix([[v]]) for name, v in vals.items()}
    return QuiverRep(eq, (1,) * eq.n_vertices, mats)


def test_zero_rep():
    eq, w = setup("B2")
    rep = zero_rep(eq, (2, 1))
    assert trace_potential(rep, w) == 0
    assert is_critical(rep, w)
    assert not any(evaluate_derivative(rep, w, eq.generator("h:0")).flat)


def test_scalar_trace_a2():
    eq, w = setup("A2")
    rep = scalar_rep(eq, h_0=1, hs_0=1, B_0=3, B_1=Fraction(7, 2))
    assert trace_potential(rep, w) == Fraction(7, 2) - 3


def test_identity_loops_cancel():
    eq, w = setup("A2")
    rng = random.Random(1)
    rep = random_rep(eq, (2, 3), rng)
    rep = rep.with_matrices({"B:0": identity(2), "B:1": identity(3)})
    assert trace_potential(rep, w) == 0


def test_scalar_derivative_b2():
    eq, w = setup("B2")
    rep = scalar_rep(eq, h_0=5, hs_0=7, B_0=2, B_1=3)
    # dW/dhs = B_1^2 h - h B_0
    d = evaluate_derivative(rep, w, eq.generator("hs:0"))
    assert d.tolist() == [[9 * 5 - 5 * 2]]
    rep0 = rep.with_matrices({"hs:0": as_matrix([[0]])})
    assert evaluate_derivative(rep0, w, eq.generator("h:0")).tolist() == [[0]]


def test_critical_locus():
    eq, w = setup("A2")
    rep = scalar_rep(eq, h_0=1, hs_0=1, B_0=0, B_1=0)
    assert evaluate_derivative(rep, w, eq.generator("B:0")).tolist() == [[-1]]
    assert not is_critical(rep, w)
    rng = random.Random(2)
    rep = random_rep(eq, (2, 2), rng)
    rep = rep.with_matrices({n: m * 0 for n, m in rep.matrices.items() if not n.startswith("B")})
    assert is_critical(rep, w)


@pytest.mark.parametrize("name,dim", [("B2", (2, 1)), ("G2", (1, 2)), ("A1^(1)", (2, 2))])
def test_euler_identity(name, dim):
    eq, w = setup(name)
    rng = random.Random(3)
    assert check_euler_trace_identity(zero_rep(eq, dim), w, eq.H)
    for _ in range(20):
        assert check_euler_trace_identity(random_rep(eq, dim, rng), w, eq.H)


def test_directional_derivative_is_trace_pairing():
    eq, w = setup("G2")
    rng = random.Random(4)
    for _ in range(10):
        rep = random_rep(eq, (2, 2), rng)
        for g in eq.generators():
            e = random_rep(eq, (2, 2), rng, gens=[g]).matrices[g.name]
            assert directional_derivative(rep, w, {g.name: e}) == pairing(evaluate_derivative(rep, w, g), e)


def test_conjugation_invariance():
    eq, w = setup("B2")
    rng = random.Random(5)
    g = {0: as_matrix([[1, 2], [0, 1]]), 1: as_matrix([[3]])}
    for _ in range(10):
        rep = random_rep(eq, (2, 1), rng)
        assert trace_potential(conjugate(rep, g), w) == trace_potential(rep, w)


def non_cut_rep(eq, **vals):
    rep = scalar_rep(eq, **vals)
    return QuiverRep(eq, rep.dim, {n: m for n, m in rep.matrices.items() if not n.startswith("h:")})


def test_lemma_member():
    eq, w = setup("B2")
    # dW/dh = hs B_1^2 - B_0 hs vanishes at B_0 = 4, B_1 = 2, hs = 1
    rep = non_cut_rep(eq, hs_0=1, B_0=4, B_1=2)
    res = check_lemma_ZJ(rep, w, eq.H, trials=20, seed=0)
    assert res.in_J and res.holds and len(res.samples) == 20
    res = check_lemma_ZJ(non_cut_rep(eq, hs_0=0, B_0=5, B_1=-1), w, eq.H)
    assert res.in_J and res.holds


def test_lemma_non_member():
    eq, w = setup("B2")
    rep = non_cut_rep(eq, hs_0=1, B_0=3, B_1=1)
    res = check_lemma_ZJ(rep, w, eq.H)
    assert not res.in_J and res.holds
    assert res.witness["h:0"].tolist() == [[-2]]
    assert res.witness_trace == 4


def test_lemma_matrix_sizes():
    eq, w = setup("G2")
    rng = random.Random(6)
    for _ in range(5):
        rep = random_rep(eq, (2, 3), rng, gens=eq.H_op + eq.B)
        res = check_lemma_ZJ(rep, w, eq.H, trials=5)
        assert res.holds
        probe = rep.with_matrices({a.name: zeros(*rep.shape(a)) for a in eq.H})
        assert res.in_J == in_J(probe, w, eq.H)


def test_shape_errors():
    eq, _ = setup("A2")
    with pytest.raises(StructuralError):
        QuiverRep(eq, (1, 2), {"h:0": as_matrix([[1, 2]])})
    rep = QuiverRep.from_json({"dim": [1, 2], "matrices": {"h:0": [[1], ["1/2"]]}}, eq)
    assert rep.matrices["h:0"][1, 0] == Fraction(1, 2)
    assert QuiverRep.from_json(rep.to_json(), eq).to_json() == rep.to_json()
