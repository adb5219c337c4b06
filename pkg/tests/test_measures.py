"""Convolution against the double-sum oracle; walk schedules against mpmath."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hwalk import groups, measures


def convolve_oracle(table, mu_w, nu_w):
    """(mu*nu)(g) = sum_h mu(g h^{-1}) nu(h), as a literal double sum."""
    n = table.order
    out = np.zeros(n)
    for g in range(n):
        for h in range(n):
            gh_inv = table.multiply(g, table.invert(h))
            out[g] += mu_w[gh_inv] * nu_w[h]
    return out


@pytest.fixture(scope="module")
def small_table():
    return groups.symmetric_group(3)


def test_convolve_matches_double_sum(small_table):
    rng = np.random.default_rng(0)
    for _ in range(5):
        mu = measures.random_measure(small_table, rng)
        nu = measures.random_measure(small_table, rng)
        got = measures.convolve(mu, nu).weights
        want = convolve_oracle(small_table, mu.weights, nu.weights)
        np.testing.assert_allclose(got, want, atol=1e-14)


def test_convolve_on_nonabelian_is_noncommutative(small_table):
    rng = np.random.default_rng(1)
    mu = measures.random_measure(small_table, rng)
    nu = measures.random_measure(small_table, rng)
    ab = measures.convolve(mu, nu).weights
    ba = measures.convolve(nu, mu).weights
    assert np.max(np.abs(ab - ba)) > 1e-6


def test_delta_is_convolution_identity(small_table):
    rng = np.random.default_rng(2)
    mu = measures.random_measure(small_table, rng)
    e = measures.delta(small_table)
    np.testing.assert_allclose(measures.convolve(mu, e).weights, mu.weights, atol=1e-14)
    np.testing.assert_allclose(measures.convolve(e, mu).weights, mu.weights, atol=1e-14)


def test_uniform_is_absorbing(small_table):
    rng = np.random.default_rng(3)
    mu = measures.random_measure(small_table, rng)
    u = measures.uniform(small_table)
    np.testing.assert_allclose(measures.convolve(mu, u).weights, u.weights, atol=1e-14)


def test_convolution_power_matches_repeated_convolve(small_table):
    rng = np.random.default_rng(4)
    mu = measures.random_measure(small_table, rng)
    acc = measures.delta(small_table)
    for l in range(5):
        np.testing.assert_allclose(
            measures.convolution_power(mu, l).weights, acc.weights, atol=1e-13
        )
        acc = measures.convolve(mu, acc)


def test_measure_validation(small_table):
    with pytest.raises(ValueError):
        measures.Measure(small_table, np.full(small_table.order, 1.0))
    with pytest.raises(ValueError):
        measures.Measure(small_table, np.zeros(3))
    bad = np.zeros(small_table.order)
    bad[0], bad[1] = 1.5, -0.5
    with pytest.raises(ValueError):
        measures.Measure(small_table, bad)


def test_tilde_and_symmetry(small_table):
    rng = np.random.default_rng(5)
    mu = measures.random_measure(small_table, rng)
    tt = mu.tilde().tilde()
    np.testing.assert_allclose(tt.weights, mu.weights)
    sym = measures.symmetrize(mu)
    assert sym.is_symmetric(tol=0)
    assert not mu.is_symmetric(tol=1e-6)
    musym = measures.random_measure(small_table, rng, symmetric=True)
    assert musym.is_symmetric(tol=1e-15)


def test_pushforward_commutes_with_convolution():
    fine = groups.build_slq(2, 4)
    coarse = groups.build_slq(2, 2)
    qmap = groups.quotient_map(fine, coarse)
    rng = np.random.default_rng(6)
    mu = measures.random_measure(fine, rng)
    nu = measures.random_measure(fine, rng)
    down_then_conv = measures.convolve(
        measures.pushforward(mu, qmap, coarse), measures.pushforward(nu, qmap, coarse)
    ).weights
    conv_then_down = measures.pushforward(
        measures.convolve(mu, nu), qmap, coarse
    ).weights
    np.testing.assert_allclose(down_then_conv, conv_then_down, atol=1e-12)


# ---------------------------------------------------------------------------
# schedules


def schedule_oracle(C0, A, x):
    """High-precision evaluation of 2*floor(C0*(10 - log(x)^{-1/10})*log(x)^{A+1})."""
    with mpmath.workdps(50):
        lx = mpmath.log(x)
        val = C0 * (10 - lx ** mpmath.mpf("-0.1")) * lx ** (A + 1)
        return 2 * int(mpmath.floor(val))


@given(
    st.floats(0.01, 5.0),
    st.floats(0.5, 3.0),
    st.floats(3.0, 1e7),
)
@settings(max_examples=100)
def test_schedule_against_mpmath(C0, A, x):
    sched = measures.WalkSchedule(C0=C0, A=A)
    got = sched.length(x)
    want = schedule_oracle(C0, A, x)
    # the two floors can disagree only on a knife-edge argument
    assert abs(got - want) <= 2


def test_schedule_is_even_and_monotonicity():
    sched = measures.WalkSchedule(C0=1.0, A=2.0)
    values = [sched.length(x) for x in [3, 10, 100, 1000, 10**6]]
    assert all(v % 2 == 0 for v in values)
    assert values == sorted(values)


def test_schedule_rejects_small_arguments():
    sched = measures.WalkSchedule(C0=1.0, A=2.0)
    with pytest.raises(ValueError):
        sched.length(1.5)


def test_calibrate_C0_roundtrip():
    # at the calibration point, C0 * log^A x = 1/gap
    gap, x, A = 0.25, 100.0, 2.0
    C0 = measures.calibrate_C0(gap, x, A)
    assert math.isclose(C0 * math.log(x) ** A, 1.0 / gap, rel_tol=1e-12)
    with pytest.raises(ValueError):
        measures.calibrate_C0(0.0, x, A)


# ---------------------------------------------------------------------------
# quotient chains


def test_quotient_chain():
    chain = measures.QuotientChain.from_moduli(2, [2, 4, 8])
    assert [lvl.table.order for lvl in chain.levels] == [6, 48, 384]
    assert chain.consecutive_indices() == [8, 8]
    assert [lvl.omega_class for lvl in chain.levels] == [2, 1, 1]
    rng = np.random.default_rng(7)
    mu = measures.random_measure(chain.finest, rng)
    for lvl in chain.levels:
        down = measures.pushforward(mu, lvl.map_from_finest, lvl.table)
        assert math.isclose(float(down.weights.sum()), 1.0, abs_tol=1e-12)


def test_quotient_chain_rejects_non_divisor():
    with pytest.raises(ValueError):
        measures.QuotientChain.from_moduli(2, [2, 3])
