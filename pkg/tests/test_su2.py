"""SU(2): quaternions, irreps, gaps, covers, and the approximate identity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hwalk import measures, su2

unit_quaternions = st.tuples(
    *(st.floats(-1, 1) for _ in range(4))
).filter(lambda q: sum(x * x for x in q) > 1e-4).map(
    lambda q: su2.SU2Element(np.array(q) / np.linalg.norm(q))
)


# ---------------------------------------------------------------------------
# quaternions and the metric


def test_quaternion_matrix_correspondence():
    g = su2.SU2Element(0.5, 0.5, 0.5, 0.5)
    h = su2.SU2Element(0.0, 1.0, 0.0, 0.0)
    np.testing.assert_allclose(
        (g * h).matrix(), g.matrix() @ h.matrix(), atol=1e-12
    )


@given(unit_quaternions, unit_quaternions)
@settings(max_examples=50, deadline=None)
def test_quaternion_product_matches_matrix_product(g, h):
    np.testing.assert_allclose((g * h).matrix(), g.matrix() @ h.matrix(), atol=1e-9)


@given(unit_quaternions)
@settings(max_examples=50, deadline=None)
def test_inverse_and_distance(g):
    assert su2.dist(g, g) == 0.0
    assert su2.dist(g * g.inv(), su2.SU2Element.identity()) < 1e-9
    assert 0.0 <= g.angle() <= math.pi


@given(unit_quaternions, unit_quaternions, unit_quaternions)
@settings(max_examples=30, deadline=None)
def test_distance_bi_invariance(g, h, k):
    d0 = su2.dist(g, h)
    assert abs(su2.dist(k * g, k * h) - d0) < 1e-9
    assert abs(su2.dist(g * k, h * k) - d0) < 1e-9


def test_rejects_non_unit_quaternion():
    with pytest.raises(ValueError):
        su2.SU2Element(2.0, 0.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# irreps


@pytest.mark.parametrize("m", [0, 1, 2, 5, 20, 200])
def test_rep_matrix_unitary(m):
    g = su2.SU2Element(np.array([0.3, -0.5, 0.7, 0.4]) / math.sqrt(0.99))
    U = su2.rep_matrix(m, g)
    np.testing.assert_allclose(U @ U.conj().T, np.eye(m + 1), atol=1e-9)


@pytest.mark.parametrize("m", [1, 2, 7])
def test_rep_matrix_homomorphism(m):
    rng = np.random.default_rng(0)
    for _ in range(5):
        g = su2.SU2Element(su2.qnormalize(rng.standard_normal(4)))
        h = su2.SU2Element(su2.qnormalize(rng.standard_normal(4)))
        np.testing.assert_allclose(
            su2.rep_matrix(m, g * h),
            su2.rep_matrix(m, g) @ su2.rep_matrix(m, h),
            atol=1e-10,
        )


def test_rep_matrix_m1_is_defining():
    g = su2.SU2Element(su2.qnormalize(np.array([0.1, 0.2, 0.3, 0.4])))
    np.testing.assert_allclose(su2.rep_matrix(1, g), g.matrix(), atol=1e-12)


@pytest.mark.parametrize("m", [0, 1, 2, 3, 10, 50, 200])
def test_character_closed_form_matches_trace(m):
    rng = np.random.default_rng(m)
    g = su2.SU2Element(su2.qnormalize(rng.standard_normal(4)))
    tr = float(np.trace(su2.rep_matrix(m, g)).real)
    assert math.isclose(su2.character(m, g), tr, abs_tol=1e-9)


def test_character_at_center():
    e = su2.SU2Element.identity()
    minus = su2.SU2Element(-1.0, 0.0, 0.0, 0.0)
    for m in range(6):
        assert su2.character(m, e) == m + 1
        assert math.isclose(su2.character(m, minus), (-1) ** m * (m + 1), abs_tol=1e-9)


def test_weight_norms():
    assert math.isclose(su2.weight_norm(1), 1 / math.sqrt(2))
    assert su2.max_weight_in_ball(1.0) == 1
    assert su2.max_weight_in_ball(1.0 / math.sqrt(2)) == 1  # boundary included
    assert su2.max_weight_in_ball(0.5) == 0


# ---------------------------------------------------------------------------
# Clebsch-Gordan bookkeeping


@pytest.mark.parametrize("a,b", [(0, 0), (1, 1), (3, 2), (40, 40), (40, 7)])
def test_tensor_support_dimensions(a, b):
    rep = su2.tensor_support_check(a, b)
    assert rep["passed"]
    assert rep["support"][0] == abs(a - b)
    assert rep["support"][-1] == a + b


def test_tensor_product_character_identity():
    # chi_a * chi_b = sum of chi_c over the support, pointwise
    g = su2.SU2Element(su2.qnormalize(np.array([0.6, 0.1, -0.7, 0.2])))
    for a, b in [(2, 2), (3, 1), (5, 4)]:
        lhs = su2.character(a, g) * su2.character(b, g)
        rhs = sum(su2.character(c, g) for c in su2.tensor_support(a, b))
        assert math.isclose(lhs, rhs, abs_tol=1e-9)


def test_character_square_multiplicities_total():
    M = 5
    mult = su2.character_square_multiplicities(M)
    # total dimension: (sum_{m<=M} (m+1))^2
    assert int(np.sum(mult * (np.arange(2 * M + 1) + 1))) == sum(
        m + 1 for m in range(M + 1)
    ) ** 2


# ---------------------------------------------------------------------------
# gaps


def test_gap_r_closed_form_single_axis():
    s = 1 / math.sqrt(5)
    q = su2.SU2Element(s, 2 * s, 0, 0)
    mu = su2.CompactMeasure.uniform([su2.SU2Element.identity(), q, q.inv()])
    got = su2.gap_r(mu, 0.75)  # admits only m = 1
    want = 1.0 - (1.0 + 2.0 / math.sqrt(5.0)) / 3.0
    assert abs(got - want) < 1e-12


def test_gap_r_empty_range_is_one():
    mu = su2.CompactMeasure.delta(su2.SU2Element.identity())
    assert su2.gap_r(mu, 0.5) == 1.0


def test_gap_r_delta_is_zero():
    mu = su2.CompactMeasure.delta(su2.SU2Element.identity())
    assert su2.gap_r(mu, 2.0) == 0.0


def test_gap_r_nonincreasing(su2_gates):
    mu = su2.CompactMeasure.uniform(su2_gates)
    vals = [su2.gap_r(mu, r) for r in (0.5, 1.0, 2.0, 4.0, 8.0)]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_generating_gates_have_positive_gap(su2_gates):
    mu = su2.CompactMeasure.uniform(su2_gates)
    assert su2.gap_r(mu, 6.0) > 0.05


# ---------------------------------------------------------------------------
# chi_r and positivity


def test_chi_r_decays_for_generating_gates(su2_gates):
    mu = su2.CompactMeasure.uniform(su2_gates)
    sched = measures.WalkSchedule(C0=2.0, A=7.0 / 6.0, mode="compact")
    res = su2.chi_r_trace(mu, 8.0, sched, E=10.0)
    assert res.passed
    assert res.walk_length % 2 == 0
    # with an even schedule and symmetric mu the functional is nonnegative
    assert res.value >= -1e-9


def test_chi_r_weight_cap():
    mu = su2.CompactMeasure.delta(su2.SU2Element.identity())
    sched = measures.WalkSchedule(C0=1.0, A=1.0, mode="compact")
    with pytest.raises(ValueError):
        su2.chi_r_trace(mu, 1000.0, sched)


def test_positivity_check(su2_gates):
    mu = su2.CompactMeasure.uniform(su2_gates)
    rep = su2.positivity_check(mu, [1, 2, 3, 5, 10])
    assert rep["passed"]


def test_symmetrized_measure(su2_gates):
    mu = su2.CompactMeasure.uniform(su2_gates[1:3])  # q and q^{-1} on one axis
    sym = mu.symmetrized()
    assert sym.is_symmetric()
    assert math.isclose(float(sym.weights.sum()), 1.0, abs_tol=1e-12)


# ---------------------------------------------------------------------------
# approximate identity


def test_haar_sample_moments():
    rng = np.random.default_rng(0)
    q = su2.haar_sample(200_000, rng)
    np.testing.assert_allclose(np.linalg.norm(q, axis=1), 1.0, atol=1e-12)
    # E[a] = 0, E[a^2] = 1/4 on S^3
    assert abs(float(np.mean(q[:, 0]))) < 0.005
    assert abs(float(np.mean(q[:, 0] ** 2)) - 0.25) < 0.005


def test_approx_identity_normalizes():
    res = su2.approx_identity_check(16.0, samples=200_000, seed=1)
    assert abs(res.integral - 1.0) <= 3.0 * res.integral_se
    assert res.power == math.floor(16.0 * math.sqrt(2.0))


def test_approx_identity_concentrates():
    lo = su2.approx_identity_check(16.0, samples=100_000, seed=2)
    hi = su2.approx_identity_check(64.0, samples=100_000, seed=2)
    # mass concentrates at 1: the distance integral shrinks, the L2 norm grows
    assert hi.dist_integral < lo.dist_integral
    assert hi.l2_norm > lo.l2_norm


def test_approx_identity_rejects_tiny_r():
    with pytest.raises(ValueError):
        su2.approx_identity_check(0.1, samples=100)


def test_loglog_slope_exact_powerlaw():
    xs = [1.0, 2.0, 4.0, 8.0]
    ys = [3.0 * x**-0.5 for x in xs]
    assert math.isclose(su2.loglog_slope(xs, ys), -0.5, abs_tol=1e-12)


# ---------------------------------------------------------------------------
# covers and the Solovay-Kitaev fit


def test_diam_eps_above_pi_is_zero(su2_gates):
    assert su2.diam_eps(su2_gates, math.pi + 0.01).diameter == 0


def test_diam_eps_small_grid(su2_gates):
    res = su2.diam_eps(su2_gates, 0.8)
    assert not res.capped
    assert res.certified_radius == 0.8
    # the word count at the certified level must beat the covering bound
    n_words = len(su2_gates) ** res.diameter
    assert n_words >= su2.covering_number_lower_bound(0.8)


def test_diam_eps_monotone(su2_gates):
    d1 = su2.diam_eps(su2_gates, 0.8).diameter
    d2 = su2.diam_eps(su2_gates, 0.4).diameter
    assert d2 >= d1 >= 2


def test_diam_eps_brute_force_cross_check(su2_gates):
    """A probe-based estimate never exceeds the certified level."""
    eps = 1.2
    certified = su2.diam_eps(su2_gates, eps).diameter
    # exact product enumeration, coverage tested on random probes only:
    # gives a lower estimate of the true diameter
    rng = np.random.default_rng(3)
    probes = su2.haar_sample(2000, rng)
    words = np.array([[1.0, 0.0, 0.0, 0.0]])
    l = 0
    while True:
        cosdist = (probes @ words.T).max(axis=1)  # <g, h> = Re(g h^{-1}) on S^3
        if np.arccos(np.clip(cosdist.min(), -1, 1)) <= eps:
            break
        prods = [su2.qnormalize(su2.qmul(words, g.q)) for g in su2_gates]
        words = np.unique(np.round(np.concatenate(prods), 9), axis=0)
        l += 1
    assert l <= certified


def test_diam_eps_requires_identity():
    s = 1 / math.sqrt(5)
    with pytest.raises(ValueError):
        su2.diam_eps([su2.SU2Element(s, 2 * s, 0, 0)], 0.5)


def test_covering_number_lower_bound_values():
    # whole group at eps = pi: bound is exactly 1
    assert math.isclose(su2.covering_number_lower_bound(math.pi), 1.0, abs_tol=1e-12)
    assert su2.covering_number_lower_bound(0.4) > su2.covering_number_lower_bound(0.8)


def test_sk_fit_requires_decreasing_grid(su2_gates):
    with pytest.raises(ValueError):
        su2.solovay_kitaev_fit(su2_gates, [0.4, 0.8, 0.2, 0.1])
    with pytest.raises(ValueError):
        su2.solovay_kitaev_fit(su2_gates, [0.8, 0.4])


def test_sk_fit_coarse_grid(su2_gates):
    res = su2.solovay_kitaev_fit(su2_gates, [1.6, 1.2, 0.8, 0.6, 0.4])
    assert res.monotone
    assert res.lower_bounds_ok
    if not res.degenerate:
        assert res.exponent <= 3.5
