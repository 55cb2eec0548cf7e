import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convpow.combinatorics import binomial
from convpow.series import (
    LogSeries,
    PowerSeriesInvX,
    backward_diff,
    harmonic_h,
    harmonic_h_power,
    li1_power,
    logseries_eval,
    nabla_ln,
    series_eval,
    series_mul,
    shift_s,
)

F = Fraction


def li2_series(order):
    """Dilogarithm of 1/x: coefficients 1/k^2."""
    return PowerSeriesInvX([F(0)] + [F(1, k * k) for k in range(1, order + 1)])


def cauchy_brute(a, b):
    """Reference Cauchy product, no cleverness."""
    n = len(a) - 1
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)]


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=12)


# ---------------------------------------------------------------------------
# multiplication


def test_mul_identity_on_constants():
    one = PowerSeriesInvX.constant(1, 8)
    assert series_mul(one, one) == one


def test_mul_li1_squared_matches_brute_force():
    li1 = li1_power(1, 4)
    got = series_mul(li1, li1)
    assert got.coeffs == tuple(cauchy_brute(list(li1.coeffs), list(li1.coeffs)))
    # 2 * s(k,2)/k!: a_2 = 1, a_3 = 1, a_4 = 11/12
    assert got.coeffs[2:] == (F(1), F(1), F(11, 12))


def test_mul_truncates_cross_terms():
    n = 6
    e1 = PowerSeriesInvX([F(1) if k == 1 else F(0) for k in range(n + 1)])
    en = PowerSeriesInvX([F(1) if k == n else F(0) for k in range(n + 1)])
    assert series_mul(e1, en) == PowerSeriesInvX.zero(n)


def test_mul_order_mismatch_rejected():
    with pytest.raises(ValueError):
        series_mul(PowerSeriesInvX.zero(4), PowerSeriesInvX.zero(5))
    with pytest.raises(ValueError):
        PowerSeriesInvX.zero(4) + PowerSeriesInvX.zero(5)


@given(
    st.lists(small_fractions, min_size=7, max_size=7),
    st.lists(small_fractions, min_size=7, max_size=7),
)
def test_mul_matches_brute_force(a, b):
    f = PowerSeriesInvX(a)
    g = PowerSeriesInvX(b)
    assert list(series_mul(f, g).coeffs) == cauchy_brute(a, b)


# ---------------------------------------------------------------------------
# the H operator


def test_h_of_one_is_ln():
    n = 6
    got = harmonic_h(PowerSeriesInvX.constant(1, n))
    assert got == LogSeries([PowerSeriesInvX.zero(n), PowerSeriesInvX.constant(1, n)])


def test_h_of_inverse_x():
    n = 5
    g = PowerSeriesInvX([F(0), F(1)] + [F(0)] * (n - 1))
    got = harmonic_h(g)
    assert got.part(1) == PowerSeriesInvX.zero(n)
    assert got.part(0) == PowerSeriesInvX([F(0), F(-1)] + [F(0)] * (n - 1))


def test_h_of_li1_is_minus_li2():
    n = 12
    got = harmonic_h(li1_power(1, n))
    assert got.part(0) == -li2_series(n)
    assert got.part(1) == PowerSeriesInvX.zero(n)


@given(
    st.lists(small_fractions, min_size=6, max_size=6),
    st.lists(small_fractions, min_size=6, max_size=6),
    small_fractions,
    small_fractions,
)
def test_h_linearity(a, b, alpha, beta):
    f = PowerSeriesInvX(a)
    g = PowerSeriesInvX(b)
    lhs = harmonic_h(f * alpha + g * beta)
    hf, hg = harmonic_h(f), harmonic_h(g)
    assert lhs.part(0) == hf.part(0) * alpha + hg.part(0) * beta
    assert lhs.part(1) == hf.part(1) * alpha + hg.part(1) * beta


# ---------------------------------------------------------------------------
# iterated H


def test_h_power_zero_is_identity():
    g = li1_power(2, 9)
    assert harmonic_h_power(g, 0) == LogSeries([g])


def test_h_power_of_one_gives_log_powers():
    n = 7
    got = harmonic_h_power(PowerSeriesInvX.constant(1, n), 2)
    assert got.degree == 2
    assert got.part(0) == PowerSeriesInvX.zero(n)
    assert got.part(1) == PowerSeriesInvX.zero(n)
    assert got.part(2) == PowerSeriesInvX.constant(F(1, 2), n)


def test_h_power_on_single_term():
    n = 6
    g = PowerSeriesInvX([F(1) if k == 2 else F(0) for k in range(n + 1)])
    got = harmonic_h_power(g, 3)
    assert got.part(0).coeffs[2] == F(-1, 8)
    assert sum(1 for c in got.part(0).coeffs if c) == 1


def test_h_power_matches_iterated_h():
    """m-fold application of H, tracking only the pure part, for m <= 5.

    Starting from a series with a_0 = 0 the iteration stays pure, so the
    closed form must reproduce it exactly.
    """
    n = 10
    g = li1_power(1, n) + li1_power(2, n) * F(3, 7)
    for m in range(1, 6):
        pure = g
        for _ in range(m):
            pure = harmonic_h(pure).part(0)
        assert harmonic_h_power(g, m).part(0) == pure


def test_h_power_constant_term_bookkeeping():
    n = 5
    g = PowerSeriesInvX.constant(F(3), n) + li1_power(1, n)
    got = harmonic_h_power(g, 4)
    assert got.part(4) == PowerSeriesInvX.constant(F(3, 24), n)
    assert got.part(1) == PowerSeriesInvX.zero(n)
    assert got.part(2) == PowerSeriesInvX.zero(n)
    assert got.part(3) == PowerSeriesInvX.zero(n)


def test_h_power_negative_rejected():
    with pytest.raises(ValueError):
        harmonic_h_power(PowerSeriesInvX.zero(4), -1)


# ---------------------------------------------------------------------------
# backward difference


def test_nabla_kills_constants():
    assert backward_diff(PowerSeriesInvX.constant(F(7, 3), 8)) == PowerSeriesInvX.zero(8)


def test_nabla_of_inverse_x_is_geometric():
    n = 7
    g = PowerSeriesInvX([F(0), F(1)] + [F(0)] * (n - 1))
    # 1/x - 1/(x-1) = -sum_{k>=2} x^{-k}
    assert list(backward_diff(g).coeffs) == [F(0), F(0)] + [F(-1)] * (n - 1)


def test_nabla_of_li2_frozen_oracle_values():
    """Coefficients of Li_2(1/x) - Li_2(1/(x-1)) at k = 2, 3, 4.

    Two independent derivations agree:

      * the defining sum  -sum_{r=1}^{k-1} C(k-1,r)/(k-r)^2, and
      * re-expanding Li_2(1/(x-1)) via (x-1)^{-j} = sum_m C(m-1,j-1) x^{-m},
        giving 1/m^2 - sum_j C(m-1,j-1)/j^2.

    Both yield -1, -3/2, -25/12.
    """
    got = backward_diff(li2_series(4))
    direct = [
        -sum(binomial(k - 1, r) * F(1, (k - r) ** 2) for r in range(1, k))
        for k in (2, 3, 4)
    ]
    composed = [
        F(1, m * m) - sum(binomial(m - 1, j - 1) * F(1, j * j) for j in range(1, m + 1))
        for m in (2, 3, 4)
    ]
    assert direct == composed == [F(-1), F(-3, 2), F(-25, 12)]
    assert list(got.coeffs) == [F(0), F(0), F(-1), F(-3, 2), F(-25, 12)]


def test_nabla_of_li2_numeric_cross_check():
    # partial sums of the series against mpmath's polylog at a point far
    # inside the convergence region
    got = backward_diff(li2_series(40))
    x = 10.0
    want = mpmath.polylog(2, 1 / x) - mpmath.polylog(2, 1 / (x - 1))
    have = sum(float(c) * x**-k for k, c in enumerate(got.coeffs))
    assert abs(have - float(want)) < 1e-14


@given(st.lists(small_fractions, min_size=8, max_size=8))
def test_nabla_leading_coefficients_vanish(a):
    d = backward_diff(PowerSeriesInvX(a))
    assert d.coeffs[0] == 0
    assert d.coeffs[1] == 0


def test_nabla_shifts_abscissa():
    g = PowerSeriesInvX([F(0), F(1), F(1)], conv_abscissa=1)
    assert backward_diff(g).conv_abscissa == 2


# ---------------------------------------------------------------------------
# Li_1 and its powers


def test_nabla_ln_coefficients():
    assert list(nabla_ln(3).coeffs) == [F(0), F(1), F(1, 2), F(1, 3)]
    assert nabla_ln(9) == li1_power(1, 9)


def test_li1_power_basics():
    assert li1_power(0, 5) == PowerSeriesInvX.constant(1, 5)
    assert li1_power(2, 5).coeffs[3] == F(1, 2)
    with pytest.raises(ValueError):
        li1_power(-1, 5)


def test_li1_power_leading_zeros():
    for n in range(6):
        s = li1_power(n, 12)
        assert all(s.coeffs[k] == 0 for k in range(n)), f"nonzero below k={n}"


def test_li1_power_two_matches_cauchy_square():
    n = 14
    li1 = li1_power(1, n)
    assert li1_power(2, n) == series_mul(li1, li1) * F(1, 2)


# ---------------------------------------------------------------------------
# the shift S


def test_shift_of_constant():
    one = PowerSeriesInvX.constant(1, 6)
    assert shift_s(one) == one
    assert shift_s(LogSeries([one])) == LogSeries([shift_s(one)])


def test_shift_of_ln():
    n = 6
    lnx = LogSeries([PowerSeriesInvX.zero(n), PowerSeriesInvX.constant(1, n)])
    got = shift_s(lnx)
    assert got.part(1) == PowerSeriesInvX.constant(1, n)
    assert got.part(0) == -li1_power(1, n)


def test_shift_of_inverse_x_is_geometric():
    n = 7
    g = PowerSeriesInvX([F(0), F(1)] + [F(0)] * (n - 1))
    # 1/(x-1) = sum_{k>=1} x^{-k}
    assert list(shift_s(g).coeffs) == [F(0)] + [F(1)] * n


def test_shift_rejects_high_log_degree():
    n = 4
    quadratic = LogSeries([PowerSeriesInvX.zero(n)] * 3)
    with pytest.raises(ValueError):
        shift_s(quadratic)
    with pytest.raises(TypeError):
        shift_s("not a series")


# ---------------------------------------------------------------------------
# evaluation


def test_eval_constant():
    r = series_eval(PowerSeriesInvX.constant(1, 16), 5)
    assert float(r) == 1.0
    assert float(r.tail_estimate) == 0.0
    assert r.tail_reliable


def test_eval_li2_at_two():
    # Li_2(1/2) = pi^2/12 - ln(2)^2 / 2
    r = series_eval(li2_series(64), 2)
    with mpmath.workprec(128):
        want = mpmath.pi**2 / 12 - mpmath.log(2) ** 2 / 2
        assert abs(r.value - want) < 1e-15


def test_eval_li1_at_two():
    r = series_eval(li1_power(1, 64), 2)
    with mpmath.workprec(128):
        assert abs(r.value - mpmath.log(2)) < 1e-15


def test_eval_below_abscissa_rejected():
    with pytest.raises(ValueError):
        series_eval(li1_power(1, 16), F(1, 2))
    with pytest.raises(ValueError):
        series_eval(backward_diff(li2_series(16)), F(3, 2))  # abscissa moved to 2


def test_eval_tail_unreliable_on_boundary():
    r = series_eval(li1_power(1, 32), 1)
    assert not r.tail_reliable
    assert math.isfinite(float(r))


@pytest.mark.parametrize("order", [16, 32, 64])
def test_eval_tail_bounds_doubling_error(order):
    at_n = series_eval(li2_series(order), 3)
    at_2n = series_eval(li2_series(2 * order), 3)
    assert abs(at_n.value - at_2n.value) <= at_n.tail_estimate


@given(
    st.lists(small_fractions, min_size=9, max_size=9),
    st.fractions(min_value=F(3, 2), max_value=9, max_denominator=16),
)
def test_eval_matches_exact_rational_sum(a, x):
    g = PowerSeriesInvX(a)
    exact = sum(c * x**-k for k, c in enumerate(a))
    r = series_eval(g, x)
    with mpmath.workprec(128):
        want = mpmath.mpf(exact.numerator) / mpmath.mpf(exact.denominator)
        assert abs(r.value - want) <= abs(want) * mpmath.mpf(2) ** -100 + mpmath.mpf(2) ** -100


def test_logseries_eval_degree_zero_is_plain():
    g = LogSeries([PowerSeriesInvX.constant(1, 8)])
    assert float(logseries_eval(g, 17.5)) == 1.0


def test_logseries_eval_ln_vanishes_at_one():
    n = 8
    j1 = LogSeries([PowerSeriesInvX.zero(n), PowerSeriesInvX.constant(1, n)])
    assert float(logseries_eval(j1, 1)) == 0.0


def test_logseries_eval_dilog_identity():
    # ln(2)^2/2 + Li_2(1/2) = pi^2/12
    n = 64
    g = LogSeries([li2_series(n), PowerSeriesInvX.zero(n), PowerSeriesInvX.constant(F(1, 2), n)])
    r = logseries_eval(g, 2)
    with mpmath.workprec(128):
        assert abs(r.value - mpmath.pi**2 / 12) < 1e-15


def test_logseries_eval_rejects_nonpositive():
    n = 4
    g = LogSeries([PowerSeriesInvX.zero(n), PowerSeriesInvX.constant(1, n)])
    with pytest.raises(ValueError):
        logseries_eval(g, 0)
