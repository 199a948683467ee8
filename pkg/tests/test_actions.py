from fractions import Fraction

import pytest

from toricqh import examples
from toricqh.actions import (
    FIXED,
    action_invariant,
    extrema,
    fixed_components,
    global_isotropy_bound,
    isotropy_components,
    isotropy_order,
    q_pair,
    superlevel_isotropy_bound,
    weights,
)
from toricqh.errors import ZeroVector

F = Fraction
EPS = F(7, 20)  # blowup at mu = 1/2


@pytest.fixture(scope="module")
def blow():
    return examples.blowup_cp2(F(1, 2))


@pytest.fixture(scope="module")
def square():
    return examples.s2xs2(F(2))


@pytest.fixture(scope="module")
def hirz():
    return examples.hirzebruch2(F(2))


@pytest.fixture(scope="module")
def cp2():
    return examples.cp2()


def test_fixed_components_blowup_facet_circle(blow):
    comps = fixed_components(blow, (-1, 0))
    by_face = {tuple(sorted(c.facets)): c for c in comps}
    assert set(by_face) == {(0,), (1, 2), (1, 3)}
    assert by_face[(0,)].K == EPS
    assert by_face[(1, 2)].K == EPS - 1
    assert by_face[(1, 3)].K == EPS - F(1, 4)
    fmax, fmin = extrema(blow, (-1, 0))
    assert tuple(sorted(fmax.facets)) == (0,)
    assert tuple(sorted(fmin.facets)) == (1, 2)


def test_fixed_components_square_diagonal(square):
    comps = fixed_components(square, (1, 1))
    assert len(comps) == 4
    assert all(c.face.dim == 0 for c in comps)


def test_fixed_components_cp2(cp2):
    comps = fixed_components(cp2, (2, 1))
    ks = sorted(c.K for c in comps)
    assert ks == [F(-1), F(0), F(1)]


def test_zero_vector_rejected(square):
    with pytest.raises(ZeroVector):
        fixed_components(square, (0, 0))


def test_weights_blowup_saddles(blow):
    f13 = blow.face(frozenset({0, 2}))
    w = weights(blow, (-2, -1), f13)
    assert sorted(w.values()) == [-1, 1]
    f24 = blow.face(frozenset({1, 3}))
    w = weights(blow, (-2, -1), f24)
    assert sorted(w.values()) == [-2, 1]


def test_weights_square_vertex(square):
    v = square.face(frozenset({0, 2}))
    w = weights(square, (1, 2), v)
    assert w == {0: -1, 2: -2}
    comps = fixed_components(square, (1, 2))
    saddle = next(c for c in comps if tuple(sorted(c.facets)) == (0, 3))
    assert saddle.m == -1 + 2 or saddle.m == 1  # weights (-1, +2)


def test_weight_zero_on_facets_off_the_face(blow):
    comps = fixed_components(blow, (-1, 0))
    for c in comps:
        assert set(c.weights) <= set(c.facets)


def test_extrema_weight_signs(blow, square, cp2):
    for poly, xi in ((blow, (-2, -1)), (square, (1, 1)), (cp2, (2, 1)),
                     (blow, (3, 1)), (square, (-1, -2))):
        fmax, fmin = extrema(poly, xi)
        if fmax.face.dim == 0:
            assert all(w < 0 for w in fmax.weights.values())
            assert fmax.m <= 0
        if fmin.face.dim == 0:
            assert all(w > 0 for w in fmin.weights.values())
            assert fmin.m >= 0


def test_isotropy_order_examples(blow, square, hirz):
    edge = hirz.face(frozenset({2}))  # normal (1, -1)
    assert isotropy_order(hirz, (1, 2), edge) == 3
    edge = blow.face(frozenset({2}))  # normal (1, 1)
    assert isotropy_order(blow, (1, -1), edge) == 2
    for i in range(4):
        assert isotropy_order(square, (1, 1), square.face(frozenset({i}))) == 1


def test_isotropy_order_fixed_faces(blow):
    assert isotropy_order(blow, (-1, 0), blow.face(frozenset({0}))) is FIXED


def test_isotropy_divisibility_along_containment(blow, square, hirz, cp2):
    for poly, xi in ((blow, (1, -1)), (square, (1, 2)), (hirz, (1, 2)),
                     (cp2, (2, 1))):
        for key, face in poly.faces.items():
            q = isotropy_order(poly, xi, face)
            if q is FIXED:
                continue
            for key2, face2 in poly.faces.items():
                if key < key2:  # face2 is a subface
                    q2 = isotropy_order(poly, xi, face2)
                    assert q2 is FIXED or q2 % q == 0


def test_isotropy_components_q1_single_component(blow, square):
    for poly, xi in ((blow, (1, -1)), (square, (1, 1))):
        stratum = isotropy_components(poly, xi, 1)
        assert len(stratum.components) == 1
        assert stratum.faces == frozenset(poly.faces)


def test_q_pair_cp2(cp2):
    comps = fixed_components(cp2, (2, 1))
    vmax = next(c for c in comps if c.K == 1)
    vmin = next(c for c in comps if c.K == -1)
    assert q_pair(cp2, (2, 1), vmax.face, vmin.face) == 2


def test_q_pair_square_opposite_vertices(square):
    comps = fixed_components(square, (1, 1))
    vmax, vmin = extrema(square, (1, 1))
    assert q_pair(square, (1, 1), vmax.face, vmin.face) == 1


def test_superlevel_isotropy_bound(blow, square):
    f13 = blow.face(frozenset({0, 2}))
    c = F(3) * EPS - 1
    assert superlevel_isotropy_bound(blow, (-2, -1), c) == 2
    assert superlevel_isotropy_bound(square, (1, 1), F(-10)) == 1
    assert superlevel_isotropy_bound(square, (1, 2), F(-10)) == 2


def test_global_isotropy_bound(square, cp2):
    assert global_isotropy_bound(square, (1, 1)) == 1
    assert global_isotropy_bound(cp2, (2, 1)) == 2


def test_action_invariant_blowup(blow):
    # F_max of eta_1 is the facet D_1 with K = eps, m = -1
    assert action_invariant(blow, (-1, 0)) == (EPS, 1)


def test_action_invariant_square_diagonal(square):
    K, minus_m = action_invariant(square, (1, 1))
    assert K == F(3, 2)  # (1 + mu)/2 at mu = 2
    assert minus_m == 2


def test_action_invariant_antisymmetry(blow, square):
    # the invariants of xi and -xi are negatives modulo the (omega, c1)
    # lattice of spherical classes
    from toricqh.linalg import in_rational_lattice
    from toricqh.polytope import h2_lattice
    for poly, xi in ((blow, (-2, -1)), (square, (1, 2))):
        k1, mm1 = action_invariant(poly, xi)
        k2, mm2 = action_invariant(poly, tuple(-x for x in xi))
        rows = [(b.omega(poly), F(b.c1())) for b in h2_lattice(poly)]
        assert in_rational_lattice(rows, (k1 + k2, mm1 + mm2))


def test_weight_multiset_vertex_independent(blow, hirz):
    for poly, xi in ((blow, (-1, 0)), (hirz, (0, 1)), (hirz, (1, 0))):
        for comp in fixed_components(poly, xi):
            weights(poly, xi, comp.face)  # raises on inconsistency
