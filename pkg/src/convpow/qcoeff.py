"""The log-free coefficient series Q_n and their computation paths.

Iterating J = H o S on the constant 1 produces, at each level n, a
polynomial in ln(x) whose coefficients involve a family of pure
1/x-series Q_n (Q_0 = 1, Q_1 = 0).  This module computes coefficient
series by three routes:

* ``q_via_recurrence`` pushes the short operator recurrence
      Q_{n+1} = -H[ li1_power(n) - backward_diff(Q_n) ]       (n >= 1)
  through the exact series layer.  Q_1 = 0 is initial data: the n = 0
  instance of the recurrence is excluded by construction, since it would
  produce a stray ln(x) (a nonzero constant term under H).
* ``q_closed_form`` evaluates each coefficient directly from a double sum
  over Stirling numbers, binomials and triangular-matrix entries.  It is
  the exact solution of the short recurrence: agreement of these two
  paths over a rectangle of (n, s) is one of the main correctness gates
  for the package.
* ``log_expansion_q_list`` generates the series that actually appear as
  ln-power coefficients of the iterated operator (see below).  These
  coincide with the other two paths up to level 3 and diverge from
  level 4 on.

Why two families?  Matching powers of ln(x) in the derivative identity
(J^{n+1}[1])'(x) = J^n[1](x-1)/x forces the full recurrence

    Q_{k+1} = -H[ sum_{j=0}^{k-1} S[Q_j] * li1_power(k-j)  -  nabla[Q_k] ],

whose j >= 1 cross terms the short recurrence drops.  Because Q_1 = 0,
the first surviving cross term is S[Q_2] * Li_1 inside Q_4, so the two
families agree exactly for n <= 3 and nothing smaller can expose the
difference.  The short pair is kept (it is internally consistent and
cross-validates exactly); the full family is what the decomposition
layer consumes, since only it satisfies the defining differential,
reflection and convolution identities from level 4 upward.  The
``log-expansion-consistency`` tests pin both facts down symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .amatrix import compute_a_matrix
from .combinatorics import binomial, stirling1_unsigned
from .series import DEFAULT_ORDER, PowerSeriesInvX, backward_diff, li1_power


@dataclass(frozen=True)
class QSeries:
    """Level n together with its truncated coefficient series."""

    n: int
    series: PowerSeriesInvX


def _neg_h_pure(arg: PowerSeriesInvX) -> PowerSeriesInvX:
    """-H[arg] for a series with no constant term (so no ln appears).

    A nonzero constant term would integrate to a logarithm, which cannot
    be represented in the pure-series return type; that happening means
    the recurrence invariants were violated upstream.
    """
    if arg.coeffs[0] != 0:
        raise ArithmeticError(
            f"nonzero constant term {arg.coeffs[0]} would put a ln(x) into a pure series"
        )
    out = [Fraction(0)]
    out.extend(arg.coeffs[k] / k for k in range(1, arg.order + 1))
    return PowerSeriesInvX(out, arg.conv_abscissa)


@lru_cache(maxsize=None)
def _q_list(n_max: int, order: int) -> tuple[PowerSeriesInvX, ...]:
    """Q_0..Q_{n_max} at the given truncation order, via the recurrence."""
    qs = [
        PowerSeriesInvX.constant(1, order),  # Q_0
        PowerSeriesInvX.zero(order),         # Q_1 (initial data, see module docstring)
    ]
    for n in range(1, n_max):
        arg = li1_power(n, order) - backward_diff(qs[n])
        qs.append(_neg_h_pure(arg))
    return tuple(qs[: n_max + 1])


def q_via_recurrence(n: int, order: int = DEFAULT_ORDER) -> QSeries:
    """Q_n as a truncated series, computed through the operator recurrence."""
    if n < 0:
        raise ValueError(f"q_via_recurrence requires n >= 0, got n={n}")
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    return QSeries(n, _q_list(max(n, 1), order)[n])


def q_closed_form(n_plus_1: int, s: int) -> Fraction:
    """Single coefficient q_{n+1, s} from the closed-form double sum.

    For s < n the value is 0 (the series for Q_{n+1} starts at x^{-n});
    otherwise

        q_{n+1,s} = (1/s) (1/s!) sum_{nu=0}^{n-1} sum_{sigma=nu}^{nu+s-n}
                    s1(s - sigma, n - nu) C(s, sigma) A^s_{sigma, nu}.

    The closed form covers levels n+1 >= 2; Q_0 and Q_1 are known data,
    not instances of this formula.
    """
    if n_plus_1 < 2:
        raise ValueError(f"closed form applies to levels >= 2, got {n_plus_1}")
    if s < 0:
        raise ValueError(f"coefficient index must be >= 0, got s={s}")
    n = n_plus_1 - 1
    if s < n:
        return Fraction(0)
    a = compute_a_matrix(s)
    total = 0
    for nu in range(n):
        for sigma in range(nu, nu + s - n + 1):
            entry = a.entry(sigma, nu)
            if entry:
                total += stirling1_unsigned(s - sigma, n - nu) * binomial(s, sigma) * entry
    return Fraction(total, s * math.factorial(s))


def q_table(n_max: int, s_max: int) -> dict[int, list[Fraction]]:
    """Coefficients q_{n,s} for 2 <= n <= n_max, 0 <= s <= s_max.

    Rows are keyed by the level n and computed by the closed form; the
    dual-path verification suite asserts equality with the recurrence.
    """
    if n_max < 2:
        raise ValueError(f"q_table requires n_max >= 2, got {n_max}")
    if s_max < 1:
        raise ValueError(f"q_table requires s_max >= 1, got {s_max}")
    return {n: [q_closed_form(n, s) for s in range(s_max + 1)] for n in range(2, n_max + 1)}


@lru_cache(maxsize=None)
def log_expansion_q_list(n_max: int, order: int = DEFAULT_ORDER) -> tuple[PowerSeriesInvX, ...]:
    """Q_0..Q_{n_max} of the *log expansion*, via the full recurrence.

    This is the family satisfying the derivative identity of the iterated
    operator (see the module docstring): each level adds the shifted
    lower series against Li_1 powers before integrating,

        Q_{k+1} = -H[ sum_{j=0}^{k-1} S[Q_j] * li1_power(k-j) - nabla[Q_k] ].

    The j = 0 term is just li1_power(k) (S[1] = 1), which is the whole
    bracket of the short recurrence; the series therefore match
    ``q_via_recurrence`` exactly for levels <= 3.  From level 4 on the
    cross terms contribute and the leading coefficient moves down to
    x^{-2} (e.g. the level-4 series starts 1/2 * x^{-2} where the short
    family starts 5/9 * x^{-3}).
    """
    if n_max < 0:
        raise ValueError(f"log_expansion_q_list requires n_max >= 0, got {n_max}")
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    qs = [
        PowerSeriesInvX.constant(1, order),
        PowerSeriesInvX.zero(order),
    ]
    for k in range(1, n_max):
        bracket = li1_power(k, order)
        for j in range(1, k):
            shifted = qs[j] - backward_diff(qs[j])
            bracket = bracket + shifted * li1_power(k - j, order)
        bracket = bracket - backward_diff(qs[k])
        qs.append(_neg_h_pure(bracket))
    return tuple(qs[: n_max + 1])
