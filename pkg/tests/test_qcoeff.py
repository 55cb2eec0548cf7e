import math
from fractions import Fraction

import pytest

from convpow.combinatorics import binomial, stirling1_unsigned
from convpow.qcoeff import (
    QSeries,
    _neg_h_pure,
    log_expansion_q_list,
    q_closed_form,
    q_table,
    q_via_recurrence,
)
from convpow.series import PowerSeriesInvX, li1_power, shift_s

F = Fraction


def test_initial_data():
    assert q_via_recurrence(0, 6).series == PowerSeriesInvX.constant(1, 6)
    assert q_via_recurrence(1, 6).series == PowerSeriesInvX.zero(6)


def test_q2_is_dilogarithm():
    q2 = q_via_recurrence(2, 20).series
    assert q2.coeffs[0] == 0
    assert all(q2.coeffs[k] == F(1, k * k) for k in range(1, 21))


def q3_bracket(k):
    """Direct evaluation of the level-3 coefficient.

    One integration step applied to li1_power(2) - nabla[Li_2]:
    q_{3,k} = ( s(k,2)/k! + sum_{r=1}^{k-1} C(k-1,r)/(k-r)^2 ) / k.
    """
    acc = F(stirling1_unsigned(k, 2), math.factorial(k))
    acc += sum(binomial(k - 1, r) * F(1, (k - r) ** 2) for r in range(1, k))
    return acc / k


def test_q3_against_bracket_oracle():
    q3 = q_via_recurrence(3, 20).series
    for k in range(2, 21):
        assert q3.coeffs[k] == q3_bracket(k)
    # the first few, frozen: note the repeated 2/3 at k=3 and k=5
    assert q3.coeffs[2:7] == (F(3, 4), F(2, 3), F(61, 96), F(2, 3), F(137, 180))


def test_recurrence_input_validation():
    with pytest.raises(ValueError):
        q_via_recurrence(-1)
    with pytest.raises(ValueError):
        q_via_recurrence(2, 0)


def test_returns_tagged_series():
    q = q_via_recurrence(4, 10)
    assert isinstance(q, QSeries)
    assert q.n == 4
    assert q.series.order == 10


def test_neg_h_rejects_constant_term():
    with pytest.raises(ArithmeticError):
        _neg_h_pure(PowerSeriesInvX.constant(1, 4))


# ---------------------------------------------------------------------------
# closed form


def test_closed_form_level_two_is_inverse_squares():
    for s in range(1, 5):
        assert q_closed_form(2, s) == F(1, s * s)


def test_closed_form_level_three():
    assert q_closed_form(3, 2) == F(3, 4)
    assert q_closed_form(3, 1) == 0


def test_closed_form_zero_pattern():
    for n_plus_1 in range(2, 7):
        for s in range(n_plus_1 - 1):
            assert q_closed_form(n_plus_1, s) == 0


def test_closed_form_input_validation():
    with pytest.raises(ValueError):
        q_closed_form(1, 3)
    with pytest.raises(ValueError):
        q_closed_form(3, -1)


def test_dual_paths_agree_exactly():
    order = 24
    for n in range(2, 6):
        rec = q_via_recurrence(n, order).series
        for s in range(order + 1):
            assert rec.coeffs[s] == q_closed_form(n, s), (n, s)


def test_q_table_entries():
    table = q_table(4, 6)
    assert table[2][2] == F(1, 4)
    assert table[3][2] == F(3, 4)
    assert table[4][2] == 0
    assert sorted(table) == [2, 3, 4]
    assert all(len(row) == 7 for row in table.values())


def test_q_table_input_validation():
    with pytest.raises(ValueError):
        q_table(1, 5)
    with pytest.raises(ValueError):
        q_table(3, 0)


# ---------------------------------------------------------------------------
# the log-expansion family


def test_families_coincide_through_level_three():
    full = log_expansion_q_list(3, 16)
    for n in range(4):
        assert full[n] == q_via_recurrence(n, 16).series


def test_families_split_at_level_four():
    full = log_expansion_q_list(5, 8)
    assert full[4].coeffs[:6] == (0, 0, F(1, 2), F(41, 36), F(509, 288), F(1937, 720))
    assert full[5].coeffs[:6] == (0, 0, 0, F(3, 4), F(69, 32), F(771, 160))
    short4 = q_via_recurrence(4, 8).series
    assert short4.coeffs[:6] == (0, 0, 0, F(5, 9), F(9, 8), F(59, 30))
    assert full[4] != short4


def test_level_four_cross_term_by_hand():
    # level 4 of the full recurrence = short bracket + S[Q_2] * Li_1
    order = 12
    full = log_expansion_q_list(4, order)
    q2, q3 = full[2], full[3]
    from convpow.series import backward_diff

    bracket = li1_power(3, order) + shift_s(q2) * li1_power(1, order) - backward_diff(q3)
    assert full[4] == _neg_h_pure(bracket)


def test_log_expansion_input_validation():
    with pytest.raises(ValueError):
        log_expansion_q_list(-1, 8)
    with pytest.raises(ValueError):
        log_expansion_q_list(3, 0)


# ---------------------------------------------------------------------------
# symbolic consistency of the iterated operator
#
# J^n[1](x) = sum_i P_i(x) ln(x)^i with P_i = (-1)^(n-i) Q_(n-i) / i!, and the
# operator satisfies (J^n[1])'(x) = J^(n-1)[1](x-1) / x.  Every step below
# (derivative, shift by one, division by x, truncated products) only ever
# reads coefficients of lower index, so the identity can be checked exactly,
# coefficient by coefficient, in the truncated ring.  This is the test that
# separates the two Q families.


def _j_parts(qs, n):
    return [qs[n - i] * F((-1) ** (n - i), math.factorial(i)) for i in range(n + 1)]


def _deriv(p):
    out = [F(0), F(0)]
    out.extend(-(m - 1) * p.coeffs[m - 1] for m in range(2, p.order + 1))
    return PowerSeriesInvX(out)


def _div_x(p):
    return PowerSeriesInvX([F(0)] + list(p.coeffs[:-1]))


def _at_x_minus_one(parts):
    """Re-expand sum_i R_i(x) ln(x)^i at x-1, using ln(x-1) = ln x - Li_1."""
    order = parts[0].order
    deg = len(parts) - 1
    out = [PowerSeriesInvX.zero(order) for _ in range(deg + 1)]
    for i, part in enumerate(parts):
        shifted = shift_s(part)
        for m in range(i + 1):
            li_pow = li1_power(i - m, order) * F(math.factorial(i - m))
            sign = F((-1) ** (i - m))
            out[m] = out[m] + shifted * (sign * binomial(i, m)) * li_pow
    return out


def _chain_rule_parts(qs, n):
    """Both sides of (J^n)' = J^(n-1)(x-1)/x as lists of ln-coefficients."""
    lhs_parts = _j_parts(qs, n)
    lhs = [
        _deriv(lhs_parts[i]) + (_div_x(lhs_parts[i + 1]) * F(i + 1) if i + 1 <= n else PowerSeriesInvX.zero(lhs_parts[0].order))
        for i in range(n)
    ]
    top = _deriv(lhs_parts[n])
    rhs = [_div_x(p) for p in _at_x_minus_one(_j_parts(qs, n - 1))]
    return lhs, top, rhs


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_log_expansion_family_satisfies_chain_rule(n):
    qs = log_expansion_q_list(n, 16)
    lhs, top, rhs = _chain_rule_parts(qs, n)
    assert top == PowerSeriesInvX.zero(16)
    for i in range(n):
        assert lhs[i] == rhs[i], f"ln^{i} coefficient differs at level {n}"


def test_short_family_satisfies_chain_rule_only_below_four():
    from convpow.qcoeff import _q_list

    qs = _q_list(4, 16)
    lhs, _, rhs = _chain_rule_parts(qs, 3)
    assert all(lhs[i] == rhs[i] for i in range(3))
    lhs, _, rhs = _chain_rule_parts(qs, 4)
    assert any(lhs[i] != rhs[i] for i in range(4))
