import numpy as np
import pytest

from hdxwalk import (
    Cochain,
    ComplexError,
    balanced_check,
    coboundary,
    inner_product,
    k_level_check,
    local_minimality_residuals,
    minimal_representative,
    norm_sq,
)
from hdxwalk.level_decomp import level_constraint_matrix, level_projector
from hdxwalk.oriented_topology import OrientedCochain, perm_sign

TOL = 1e-12
RES_TOL = 1e-10


def _cyclic_flow(t3):
    return OrientedCochain.from_dict(t3, 1, {(0, 1): 1.0, (1, 2): 1.0, (0, 2): -1.0})


def test_perm_sign():
    assert perm_sign((0, 1, 2)) == 1
    assert perm_sign((1, 0, 2)) == -1
    assert perm_sign((2, 0, 1)) == 1
    assert perm_sign((5,)) == 1


def test_oriented_evaluation(t3):
    f = _cyclic_flow(t3)
    assert f.evaluate((0, 1)) == 1.0
    assert f.evaluate((1, 0)) == -1.0
    assert f.evaluate((2, 0)) == 1.0


def test_coboundary_vertex_example(t3):
    d0 = coboundary(t3, 0)
    out = d0.matrix @ np.array([1.0, 0.0, 0.0])
    # edges (01),(02),(12): df(u,v) = f(v) - f(u)
    assert np.allclose(out, [-1.0, -1.0, 0.0], atol=TOL)
    consts = d0.matrix @ np.ones(3)
    assert np.allclose(consts, 0.0, atol=TOL)


def test_coboundary_minus_one_lifts_constants(t3):
    dm1 = coboundary(t3, -1)
    assert np.allclose(dm1.matrix @ np.array([2.0]), 2.0, atol=TOL)


def test_delta_delta_zero(all_fixtures):
    for _, X in all_fixtures:
        for i in range(-1, X.top_dim - 1):
            prod = coboundary(X, i + 1).matrix @ coboundary(X, i).matrix
            assert np.max(np.abs(prod)) <= TOL


def test_minimal_representative_examples(t3):
    f = OrientedCochain(t3, 0, np.array([1.0, 0.0, 0.0]))
    fmin = minimal_representative(t3, f)
    assert np.allclose(fmin.values, [2 / 3, -1 / 3, -1 / 3], atol=TOL)

    flow = _cyclic_flow(t3)
    fmin2 = minimal_representative(t3, flow)
    assert np.allclose(fmin2.values, flow.values, atol=TOL)  # already minimal

    g = np.array([0.3, -1.2, 0.7])
    fb = OrientedCochain(t3, 1, coboundary(t3, 0).matrix @ g)
    assert np.allclose(minimal_representative(t3, fb).values, 0.0, atol=TOL)


def test_minimal_representative_is_projection(all_fixtures):
    rng = np.random.default_rng(30)
    for _, X in all_fixtures:
        for k in range(0, X.top_dim + 1):
            f = OrientedCochain(X, k, rng.standard_normal(X.n_faces(k)))
            fmin = minimal_representative(X, f)
            again = minimal_representative(X, fmin)
            assert np.allclose(again.values, fmin.values, atol=RES_TOL)
            diff_part = Cochain(X, k, f.values - fmin.values)
            assert abs(inner_product(X, diff_part, fmin.as_cochain())) <= RES_TOL
            # certified against a basis of corrections
            B = coboundary(X, k - 1).matrix
            w = np.array([X.weight[s] for s in X.faces(k)])
            assert np.max(np.abs(B.T @ (w * fmin.values))) <= RES_TOL


def test_norm_reduction_by_constant_shift(all_fixtures):
    # shifting by any a strictly between 0 and twice the mean shrinks the
    # weighted norm; spot-checked at a = m and a = 1.5 m
    rng = np.random.default_rng(31)
    for _, X in all_fixtures:
        f = rng.standard_normal(X.n_faces(0)) + 2.0
        fc = Cochain(X, 0, f)
        m = inner_product(X, fc, Cochain.ones(X, 0))
        assert abs(m) > 1e-6
        for a in (m, 1.5 * m):
            shifted = Cochain(X, 0, f - a)
            assert norm_sq(X, shifted) < norm_sq(X, fc)


def test_local_minimality_cyclic_flow(t3):
    flow = _cyclic_flow(t3)
    res = local_minimality_residuals(t3, flow)
    assert set(res) == {(0,), (1,), (2,)}
    assert max(res.values()) <= TOL
    assert k_level_check(t3, flow) <= TOL


def test_coboundary_usually_not_locally_minimal(c42):
    g = np.zeros(4)
    g[0] = 1.0
    f = OrientedCochain(c42, 1, coboundary(c42, 0).matrix @ g)
    res = local_minimality_residuals(c42, f)
    assert max(res.values()) > 0.1


def test_constant_ones_fail_k_level(t3):
    ones = OrientedCochain(t3, 1, np.ones(3))
    res = local_minimality_residuals(t3, ones)
    # each localization is [-1, 1]-signed; residual depends on the signs
    assert max(res.values()) > 0.0
    f0 = OrientedCochain.from_dict(t3, 1, {(0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0})
    assert max(local_minimality_residuals(t3, f0).values()) == pytest.approx(1.0)


def test_minimal_implies_locally_minimal_implies_k_level(all_fixtures):
    rng = np.random.default_rng(32)
    for _, X in all_fixtures:
        for k in range(1, X.top_dim + 1):
            for _ in range(50):
                raw = OrientedCochain(X, k, rng.standard_normal(X.n_faces(k)))
                fmin = minimal_representative(X, raw)
                res = local_minimality_residuals(X, fmin)
                assert max(res.values()) <= RES_TOL
                assert k_level_check(X, fmin) <= RES_TOL


def test_k_level_matches_residuals(all_fixtures):
    # two independent code paths for the same quantity
    rng = np.random.default_rng(33)
    for _, X in all_fixtures:
        k = X.top_dim
        f = OrientedCochain(X, k, rng.standard_normal(X.n_faces(k)))
        res = max(local_minimality_residuals(X, f).values())
        assert abs(res - k_level_check(X, f)) <= TOL


def test_balanced_matching(c42):
    rep = balanced_check(c42, [(0, 1), (2, 3)], 0)
    assert rep.balanced
    assert rep.defect <= 1e-12
    # total weight 1/3 equals each vertex's local S-mass
    assert sum(c42.weight[t] for t in rep.faces) == pytest.approx(1 / 3, abs=TOL)


def test_balanced_single_edge_fails(c42):
    rep = balanced_check(c42, [(0, 1)], 0)
    assert not rep.balanced
    assert rep.per_face[(2,)] == pytest.approx(1 / 6, abs=TOL)


def test_balanced_full_set(all_fixtures):
    for _, X in all_fixtures:
        k = X.top_dim
        for i in range(-1, k):
            rep = balanced_check(X, X.faces(k), i)
            assert rep.defect <= 1e-12


def test_balanced_rejections(c42):
    with pytest.raises(ComplexError):
        balanced_check(c42, [(0, 5)], 0)
    with pytest.raises(ComplexError):
        balanced_check(c42, [(0, 1), (0, 1, 2)], 0)
    with pytest.raises(ComplexError):
        balanced_check(c42, [(0, 1)], 1)


def test_balanced_centered_indicator_is_level(c42):
    # balance over vertex links makes the centered indicator average to zero
    # in every vertex link, hence it sits inside the 0-level space (and in
    # fact one level higher)
    S = [(0, 1), (2, 3)]
    rep = balanced_check(c42, S, 0)
    assert rep.balanced
    assert rep.companion_residual <= 1e-12
    ind = np.zeros(6)
    for t in S:
        ind[c42.face_index[t]] = 1.0
    total = sum(c42.weight[t] for t in S)
    centered = ind - total
    # zero localization mean at every vertex, via the constraint rows
    C1 = level_constraint_matrix(c42, 1, 1)
    assert np.max(np.abs(C1 @ centered)) <= 1e-12
    # membership in the 0-level space (projection residual)
    P0 = level_projector(c42, 1, 0)
    assert np.max(np.abs(P0 @ centered - centered)) <= RES_TOL
    P1 = level_projector(c42, 1, 1)
    assert np.max(np.abs(P1 @ centered - centered)) <= RES_TOL
