"""Tests for exact polynomial algebra, Jacobi moments, and density bridges."""
import math
from fractions import Fraction

import numpy as np
import pytest

from freespec.errors import InsufficientBaseMomentsError
from freespec.freeprod import regular_tree_ball
from freespec.graphs import bfs_distances, vacuum_moment
from freespec.polymoments import (
    JacobiParams,
    MomentSequence,
    Poly,
    chebyshev_classical,
    chebyshev_monic,
    integrate_poly,
    jacobi_moments,
    kesten_mckay_moments,
    km_density,
    km_density_max,
    km_support,
    pushforward_moments,
    scaled_limit_poly,
    semicircle_density,
    semicircle_moments,
    tree_poly_chebyshev_identity,
    tree_distance_k_law_moments,
    tree_distance_poly,
)
from oracles import km_moment_quad, semicircle_moment_quad, weighted_path_moment

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]


def test_poly_arithmetic():
    p = Poly([1, 2]) * Poly([1, 1])  # (1 + 2x)(1 + x)
    assert p == Poly([1, 3, 2])
    assert (Poly([0, 1]) ** 3) == Poly([0, 0, 0, 1])
    assert Poly([1, 1]) - Poly([1, 1]) == Poly()
    assert Poly([Fraction(1, 2), 1])(2) == Fraction(5, 2)
    assert Poly([0, 0, 4]).scale_arg(Fraction(1, 2)) == Poly([0, 0, 1])


def test_chebyshev_monic():
    assert chebyshev_monic(0) == Poly([1])
    assert chebyshev_monic(2) == Poly([-1, 0, 1])
    assert chebyshev_monic(3) == Poly([0, -2, 0, 1])


def test_chebyshev_classical():
    assert chebyshev_classical(-1) == Poly()
    assert chebyshev_classical(2) == Poly([-1, 0, 4])
    for k in range(9):
        assert chebyshev_classical(k).scale_arg(Fraction(1, 2)) == chebyshev_monic(k)


def test_tree_distance_poly():
    assert tree_distance_poly(3, 2) == Poly([-3, 0, 1])
    for d in (2, 3, 4, 7):
        assert tree_distance_poly(d, 3) == Poly([0, -(2 * d - 1), 0, 1])
        assert tree_distance_poly(d, 0) == Poly([1])
        assert tree_distance_poly(d, 1) == Poly([0, 1])


def _tree_poly_rows(d, k, radius):
    """Q_k(A) rows for interior sources of a tree ball, via repeated A-apply."""
    bg = regular_tree_ball(d, radius)
    g = bg.graph
    n = g.vertex_count
    sources = bg.interior_indices(k)
    src = np.array(sources)
    edges_from = np.fromiter(
        (u for u in range(n) for _ in g.neighbors[u]), dtype=np.int64
    )
    edges_to = np.fromiter(
        (v for u in range(n) for v in g.neighbors[u]), dtype=np.int64
    )
    x = np.zeros((n, len(sources)), dtype=np.int64)
    x[src, np.arange(len(sources))] = 1
    coeffs = [int(c) for c in tree_distance_poly(d, k).coeffs]
    acc = coeffs[0] * x.copy()
    power = x
    for c in coeffs[1:]:
        nxt = np.zeros_like(power)
        np.add.at(nxt, edges_to, power[edges_from])
        power = nxt
        if c:
            acc += c * power
    return bg, sources, acc


@pytest.mark.slow
@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_tree_poly_equals_distance_adjacency(d, k):
    # Q_k(A) rows match the distance-k indicator on interior sources
    bg, sources, rows = _tree_poly_rows(d, k, k + 4)
    g = bg.graph
    for col, i in enumerate(sources):
        dist = bfs_distances(g, i)
        indicator = np.array([1 if dv == k else 0 for dv in dist], dtype=np.int64)
        assert np.array_equal(rows[:, col], indicator)


def test_tree_poly_matrix_identity_small_dense():
    # pure-Python dense-matrix complement of the vectorized row check
    from freespec import intmat

    for d, k in [(2, 3), (3, 2)]:
        bg = regular_tree_ball(d, k + 4)
        a = intmat.adjacency_matrix(bg.graph)
        coeffs = [int(c) for c in tree_distance_poly(d, k).coeffs]
        q_of_a = intmat.poly_of_matrix(coeffs, a)
        for i in bg.interior_indices(k):
            dist = bfs_distances(bg.graph, i)
            for j in range(len(bg.words)):
                assert q_of_a[i][j] == (1 if dist[j] == k else 0)


def test_tree_law_identity_bridge():
    for d in (2, 3, 4, 7):
        for k in range(1, 7):
            assert tree_poly_chebyshev_identity(d, k)


def test_scaled_limit_poly():
    for d in (2, 5, 100):
        assert scaled_limit_poly(d, 2) == chebyshev_monic(2)
        diff = scaled_limit_poly(d, 3) - chebyshev_monic(3)
        assert diff == Poly([0, Fraction(1, d)])
    # exact worst coefficient deviations (symbolic expansion oracle):
    # k=4: 2/d, k=5: 4/d - 1/d^2, k=6: 9/d - 3/d^2; all O(1/d)
    d = 10**6
    exact_worst = {
        1: Fraction(0),
        2: Fraction(0),
        3: Fraction(1, d),
        4: Fraction(2, d),
        5: Fraction(4, d) - Fraction(1, d * d),
        6: Fraction(9, d) - Fraction(3, d * d),
    }
    for k in range(1, 7):
        diff = scaled_limit_poly(d, k) - chebyshev_monic(k)
        worst = max((abs(c) for c in diff.coeffs), default=Fraction(0))
        assert worst == exact_worst[k]
        assert worst <= Fraction(9, d)


def test_jacobi_moments_semicircle_catalan():
    ms = semicircle_moments(16)
    for i, cat in enumerate(CATALAN):
        assert ms[2 * i] == cat
        if 2 * i + 1 <= 16:
            assert ms[2 * i + 1] == 0


def test_jacobi_moments_against_path_enumeration():
    cases = [
        ((0,), (1,)),            # semicircle
        ((0,), (3, 2)),          # Kesten-McKay d = 3
        ((Fraction(1, 2),), (Fraction(2, 3),)),
        ((1, 0), (2, 1)),
    ]
    for beta, gamma in cases:
        ms = jacobi_moments(JacobiParams(beta=beta, gamma=gamma), 8)
        for m in range(9):
            assert ms[m] == weighted_path_moment(beta, gamma, m)


def test_jacobi_moments_first_moment_is_beta0():
    ms = jacobi_moments(JacobiParams(beta=(Fraction(5, 7),), gamma=(1,)), 3)
    assert ms[1] == Fraction(5, 7)


def test_jacobi_params_validation():
    with pytest.raises(ValueError):
        JacobiParams(beta=(0,), gamma=(0,))
    with pytest.raises(ValueError):
        JacobiParams(beta=(), gamma=(1,))


def test_kesten_mckay_moments_small():
    for d in (2, 3, 4, 5):
        ms = kesten_mckay_moments(d, 4)
        assert ms[2] == d
        assert ms[4] == 2 * d * d - d
        assert ms[1] == 0 and ms[3] == 0
    assert kesten_mckay_moments(2, 4)[4] == 6  # arcsine law


def test_kesten_mckay_moments_match_tree_walks():
    # mu_d moments are closed-walk counts at the root of the d-regular tree
    for d in (2, 3, 4, 5):
        bg = regular_tree_ball(d, 4)
        ms = kesten_mckay_moments(d, 6)
        for m in range(7):
            assert ms[m] == vacuum_moment(bg.graph, m)


def test_moments_match_quadrature():
    sc = semicircle_moments(10)
    for m in range(11):
        assert abs(float(sc[m]) - semicircle_moment_quad(m)) < 1e-10
    # tolerance 1e-8 scaled by magnitude: high moments reach ~1e5, where an
    # f64 quadrature cannot hit 1e-8 absolutely but easily hits it relatively
    for d in (2, 3, 4, 6):
        ms = kesten_mckay_moments(d, 10)
        for m in range(11):
            tol = 1e-8 * max(1.0, abs(float(ms[m])))
            assert abs(float(ms[m]) - km_moment_quad(d, m)) < tol


def test_km_density_values():
    assert km_density(2, 0.0) == pytest.approx(1 / (2 * math.pi), abs=1e-12)
    assert km_density(3, 0.0) == pytest.approx(math.sqrt(8) / (6 * math.pi), abs=1e-12)
    for d in (3, 4, 6):
        edge = km_support(d)
        assert km_density(d, edge) == 0.0
        assert km_density(d, edge + 0.5) == 0.0
        assert km_density(d, -edge) == 0.0


def test_km_density_max_dominates():
    for d in (3, 4, 6, 7, 10):
        peak = km_density_max(d)
        w = km_support(d)
        assert all(
            km_density(d, -w + 2 * w * i / 400) <= peak + 1e-12 for i in range(401)
        )
    with pytest.raises(ValueError):
        km_density_max(2)


def test_semicircle_density():
    assert semicircle_density(0.0) == pytest.approx(1 / math.pi)
    assert semicircle_density(2.0) == 0.0
    assert semicircle_density(-3.0) == 0.0


def test_pushforward_identity():
    base = semicircle_moments(6)
    assert pushforward_moments(Poly([0, 1]), base, 6) == base


def test_pushforward_square_minus_one():
    pf = pushforward_moments(Poly([-1, 0, 1]), semicircle_moments(8), 4)
    assert list(pf) == [1, 0, 1, 1, 3]


def test_pushforward_tree_poly():
    pf = pushforward_moments(tree_distance_poly(3, 2), kesten_mckay_moments(3, 4), 2)
    assert pf[2] == 6  # d(d-1) distance-2 vertices


def test_pushforward_needs_enough_moments():
    with pytest.raises(InsufficientBaseMomentsError):
        pushforward_moments(Poly([-1, 0, 1]), semicircle_moments(4), 4)


def test_orthogonality_chebyshev_semicircle():
    base = semicircle_moments(14)
    for i in range(7):
        for j in range(7):
            pairing = integrate_poly(chebyshev_monic(i) * chebyshev_monic(j), base)
            if i == j:
                assert pairing == 1
            else:
                assert pairing == 0


def test_orthogonality_tree_polys_kesten_mckay():
    for d in (2, 3, 4, 5):
        base = kesten_mckay_moments(d, 14)
        for i in range(7):
            for j in range(7):
                pairing = integrate_poly(
                    tree_distance_poly(d, i) * tree_distance_poly(d, j), base
                )
                if i != j:
                    assert pairing == 0
                elif i == 0:
                    assert pairing == 1
                else:
                    assert pairing == d * (d - 1) ** (i - 1)


def test_chebyshev_mean_and_variance_under_semicircle():
    base = semicircle_moments(14)
    for k in range(1, 7):
        assert integrate_poly(chebyshev_monic(k), base) == 0
        assert integrate_poly(chebyshev_monic(k) ** 2, base) == 1


def test_hankel_positivity():
    assert semicircle_moments(12).hankel_positive()
    assert kesten_mckay_moments(3, 12).hankel_positive()
    assert tree_distance_k_law_moments(3, 2, 8).hankel_positive()
    bad = MomentSequence([1, 0, -1])  # negative variance
    assert not bad.hankel_positive()


def test_moment_sequence_validation():
    with pytest.raises(ValueError):
        MomentSequence([2, 0])
    ms = MomentSequence([1, 0, 1])
    assert len(ms) == 3 and ms[2] == 1
