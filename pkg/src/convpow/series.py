"""Truncated power series in 1/x over exact rationals, and the operator
calculus acting on them.

A :class:`PowerSeriesInvX` is sum_{k=0}^{N} a_k x^{-k} with Fraction
coefficients and a fixed truncation order N.  A :class:`LogSeries` is a
polynomial in ln(x) whose coefficients are such series; it is what the
harmonic integration operator H produces, since H picks up a ln(x) from
the constant term.

The operators implemented here:

* ``harmonic_h``       H[g](x) = integral of g(x)/x, constant pinned so
                       that the 1/x-part vanishes at infinity,
* ``harmonic_h_power`` the m-fold iterate of H in closed form,
* ``backward_diff``    the difference g(x) - g(x-1) re-expanded in 1/x,
* ``shift_s``          the shift g(x) -> g(x-1) on log-degree <= 1,
* ``li1_power``        (1/n!) * Li_1(1/x)^n, whose 1/x-coefficients are
                       unsigned Stirling numbers over factorials.

Evaluation keeps partial sums as exact integers (Horner on a common
denominator) and converts to an mpmath float once, at the end.  Each
evaluation carries a geometric-ratio tail estimate for the truncated
remainder, flagged unreliable when the last coefficient ratio does not
support a geometric model at the requested point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import mpmath

from .combinatorics import binomial, stirling1_unsigned

#: Default truncation order (highest retained power of 1/x).
DEFAULT_ORDER = 64
#: Default evaluation precision, in bits of mantissa.
DEFAULT_PREC = 128

Rational = Union[int, Fraction]

# Stand-in ratio when the geometric model fails; keeps the tail estimate
# finite (and visibly large) rather than dividing by ~0.
_TAIL_RATIO_CAP = Fraction(255, 256)


def _exact(x) -> Fraction:
    """Coerce an int/float/Fraction evaluation point to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    raise TypeError(f"evaluation point must be int, float or Fraction, got {type(x).__name__}")


def _to_mpf(q: Fraction) -> mpmath.mpf:
    """Fraction -> mpf at the *current* mpmath working precision."""
    return mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator)


class PowerSeriesInvX:
    """Truncated series sum_{k=0}^{N} a_k x^{-k} with rational coefficients.

    Instances are treated as immutable.  ``conv_abscissa`` records the
    smallest evaluation point the series is trusted at (propagated by the
    operators: the backward difference shifts it up by one, products and
    sums take the max).  Equality compares coefficients only.
    """

    __slots__ = ("coeffs", "conv_abscissa", "_scaled")

    def __init__(self, coeffs: Iterable[Rational], conv_abscissa: Rational = 1):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        if not self.coeffs:
            raise ValueError("a series needs at least its constant coefficient")
        self.conv_abscissa = Fraction(conv_abscissa)
        if self.conv_abscissa < 1:
            raise ValueError(f"conv_abscissa must be >= 1, got {self.conv_abscissa}")
        self._scaled = None  # lazy (common_denominator, scaled_int_coeffs)

    @classmethod
    def zero(cls, order: int, conv_abscissa: Rational = 1) -> "PowerSeriesInvX":
        return cls([0] * (order + 1), conv_abscissa)

    @classmethod
    def constant(cls, value: Rational, order: int, conv_abscissa: Rational = 1) -> "PowerSeriesInvX":
        return cls([value] + [0] * order, conv_abscissa)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_constant(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k]

    def _require_same_order(self, other: "PowerSeriesInvX") -> None:
        if self.order != other.order:
            raise ValueError(
                f"truncation orders differ: {self.order} vs {other.order}; "
                "re-expand to a common order first"
            )

    def _scaled_coeffs(self) -> tuple[int, tuple[int, ...]]:
        """Common denominator D and integer coefficients D*a_k, cached."""
        if self._scaled is None:
            den = 1
            for c in self.coeffs:
                den = den * c.denominator // math.gcd(den, c.denominator)
            self._scaled = (den, tuple(int(c * den) for c in self.coeffs))
        return self._scaled

    def __add__(self, other: "PowerSeriesInvX") -> "PowerSeriesInvX":
        if not isinstance(other, PowerSeriesInvX):
            return NotImplemented
        self._require_same_order(other)
        return PowerSeriesInvX(
            (a + b for a, b in zip(self.coeffs, other.coeffs)),
            max(self.conv_abscissa, other.conv_abscissa),
        )

    def __sub__(self, other: "PowerSeriesInvX") -> "PowerSeriesInvX":
        if not isinstance(other, PowerSeriesInvX):
            return NotImplemented
        self._require_same_order(other)
        return PowerSeriesInvX(
            (a - b for a, b in zip(self.coeffs, other.coeffs)),
            max(self.conv_abscissa, other.conv_abscissa),
        )

    def __neg__(self) -> "PowerSeriesInvX":
        return PowerSeriesInvX((-c for c in self.coeffs), self.conv_abscissa)

    def __mul__(self, other) -> "PowerSeriesInvX":
        if isinstance(other, PowerSeriesInvX):
            self._require_same_order(other)
            n = self.order
            prod = [Fraction(0)] * (n + 1)
            for i, ai in enumerate(self.coeffs):
                if not ai:
                    continue
                for j in range(n - i + 1):
                    bj = other.coeffs[j]
                    if bj:
                        prod[i + j] += ai * bj
            return PowerSeriesInvX(prod, max(self.conv_abscissa, other.conv_abscissa))
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return PowerSeriesInvX((c * a for a in self.coeffs), self.conv_abscissa)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeriesInvX):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None  # mutable-looking cache slot; not meant for dict keys

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:4])
        tail = ", ..." if self.order >= 4 else ""
        return f"PowerSeriesInvX([{head}{tail}], order={self.order}, abscissa={self.conv_abscissa})"


class LogSeries:
    """Polynomial in ln(x) with PowerSeriesInvX coefficients.

    ``parts[j]`` multiplies ln(x)**j.  All parts share one truncation
    order.  Equality compares the parts tuples.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[PowerSeriesInvX]):
        self.parts = tuple(parts)
        if not self.parts:
            raise ValueError("a LogSeries needs at least the ln-degree-0 part")
        if len({p.order for p in self.parts}) != 1:
            raise ValueError("all parts of a LogSeries must share one truncation order")

    @property
    def degree(self) -> int:
        return len(self.parts) - 1

    @property
    def order(self) -> int:
        return self.parts[0].order

    def part(self, j: int) -> PowerSeriesInvX:
        return self.parts[j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.parts == other.parts

    __hash__ = None

    def __repr__(self) -> str:
        return f"LogSeries(degree={self.degree}, order={self.order})"


@dataclass(frozen=True)
class EvalResult:
    """A float evaluation plus a heuristic bound on the truncation tail.

    The tail model is geometric: the dropped terms are assumed to decay
    at least as fast as the last retained coefficient ratio suggests.
    ``tail_reliable`` is False when that ratio does not decay at the
    evaluation point, in which case ``tail_estimate`` is a floor, not a
    bound.
    """

    value: mpmath.mpf
    tail_estimate: mpmath.mpf
    tail_reliable: bool = True

    def __float__(self) -> float:
        return float(self.value)


def series_mul(f: PowerSeriesInvX, g: PowerSeriesInvX) -> PowerSeriesInvX:
    """Cauchy product truncated at the shared order of f and g."""
    return f * g


def harmonic_h(g: PowerSeriesInvX) -> LogSeries:
    """Antiderivative of g(x)/x, re-expanded around infinity.

    The constant term of g integrates to a_0 * ln(x); every other term
    integrates to -(a_k/k) x^{-k}, with the integration constant pinned
    so the 1/x-part vanishes at infinity.
    """
    n = g.order
    pure = [Fraction(0)]
    pure.extend(-g.coeffs[k] / k for k in range(1, n + 1))
    return LogSeries([
        PowerSeriesInvX(pure, g.conv_abscissa),
        PowerSeriesInvX.constant(g.coeffs[0], n, g.conv_abscissa),
    ])


def harmonic_h_power(g: PowerSeriesInvX, m: int) -> LogSeries:
    """m-fold iterate of ``harmonic_h`` in closed form.

    The x^{-k} coefficient picks up (-1)^m / k^m and the constant term
    becomes a_0 * ln(x)^m / m!; no mixed ln-powers appear when starting
    from a pure series.
    """
    if m < 0:
        raise ValueError(f"harmonic_h_power requires m >= 0, got m={m}")
    if m == 0:
        return LogSeries([g])
    n = g.order
    sign = -1 if m % 2 else 1
    pure = [Fraction(0)]
    pure.extend(sign * g.coeffs[k] / k**m for k in range(1, n + 1))
    parts = [PowerSeriesInvX(pure, g.conv_abscissa)]
    parts.extend(PowerSeriesInvX.zero(n, g.conv_abscissa) for _ in range(m - 1))
    parts.append(PowerSeriesInvX.constant(Fraction(g.coeffs[0], math.factorial(m)), n, g.conv_abscissa))
    return LogSeries(parts)


def backward_diff(g: PowerSeriesInvX) -> PowerSeriesInvX:
    """g(x) - g(x-1), re-expanded as a series in 1/x.

    Constants are annihilated and the x^{-1} coefficient is always 0; the
    coefficient at x^{-k} for k >= 2 is -sum_{r=1}^{k-1} C(k-1, r) a_{k-r}.
    The expansion of 1/(x-1)^j around infinity converges only for x > 1
    over what g needed, hence the abscissa shift.
    """
    n = g.order
    out = [Fraction(0)] * (n + 1)
    for k in range(2, n + 1):
        acc = Fraction(0)
        for r in range(1, k):
            a = g.coeffs[k - r]
            if a:
                acc += binomial(k - 1, r) * a
        out[k] = -acc
    return PowerSeriesInvX(out, g.conv_abscissa + 1)


def nabla_ln(order: int = DEFAULT_ORDER) -> PowerSeriesInvX:
    """Backward difference of ln(x) itself: ln(x) - ln(x-1) = Li_1(1/x)."""
    return li1_power(1, order)


def li1_power(n: int, order: int = DEFAULT_ORDER) -> PowerSeriesInvX:
    """(1/n!) * Li_1(1/x)^n, exactly: the x^{-k} coefficient is s(k, n)/k!.

    s(k, n) is the unsigned Stirling number of the first kind; the n = 0
    case is the constant series 1 and the n = 1 case is Li_1 itself.
    """
    if n < 0:
        raise ValueError(f"li1_power requires n >= 0, got n={n}")
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    coeffs = []
    kfact = 1
    for k in range(order + 1):
        if k:
            kfact *= k
        coeffs.append(Fraction(stirling1_unsigned(k, n), kfact))
    return PowerSeriesInvX(coeffs, 1)


def shift_s(g):
    """The shift g(x) -> g(x-1), i.e. identity minus backward difference.

    Accepts a plain series or a LogSeries of degree <= 1.  On degree 1
    the shifted logarithm contributes ln(x-1) = ln(x) - Li_1(1/x), which
    folds into the pure part; higher degrees would need powers of Li_1
    mixed across parts and are not supported here.
    """
    if isinstance(g, PowerSeriesInvX):
        return g - backward_diff(g)
    if not isinstance(g, LogSeries):
        raise TypeError(f"shift_s expects PowerSeriesInvX or LogSeries, got {type(g).__name__}")
    if g.degree == 0:
        return LogSeries([shift_s(g.parts[0])])
    if g.degree > 1:
        raise ValueError(f"shift_s supports log-degree <= 1, got degree {g.degree}")
    p0, p1 = g.parts
    s0 = p0 - backward_diff(p0)
    s1 = p1 - backward_diff(p1)
    return LogSeries([s0 - s1 * li1_power(1, g.order), s1])


def series_eval(g: PowerSeriesInvX, x, prec: int = DEFAULT_PREC) -> EvalResult:
    """Evaluate g at x >= conv_abscissa.

    The partial sum is accumulated exactly: with D the common denominator
    of the coefficients and x = p/q in lowest terms, Horner's rule runs on
    integers and the single division happens at float precision ``prec``.
    Constant series evaluate anywhere (the point is not even range-checked,
    matching the convention that degree-0 data has no singularity).
    """
    xf = _exact(x)
    if g.is_constant:
        with mpmath.workprec(prec):
            return EvalResult(_to_mpf(g.coeffs[0]), mpmath.mpf(0), True)
    if xf < g.conv_abscissa:
        raise ValueError(
            f"evaluation point {xf} is below the convergence abscissa {g.conv_abscissa}"
        )
    den, ints = g._scaled_coeffs()
    p, q = xf.numerator, xf.denominator
    n = g.order
    ppow = [1] * (n + 1)
    for i in range(1, n + 1):
        ppow[i] = ppow[i - 1] * p
    acc = ints[n]
    for k in range(n - 1, -1, -1):
        acc = acc * q + ints[k] * ppow[n - k]
    a_last = g.coeffs[n]
    a_prev = g.coeffs[n - 1]
    with mpmath.workprec(prec):
        value = mpmath.mpf(acc) / (mpmath.mpf(den) * mpmath.mpf(ppow[n]))
        if a_last == 0:
            tail = mpmath.mpf(0)
            reliable = True
        else:
            ratio = abs(a_last / a_prev) if a_prev else Fraction(1)
            rho = max(ratio, Fraction(1)) / xf
            reliable = rho < 1
            rho = min(rho, _TAIL_RATIO_CAP)
            tail = _to_mpf(abs(a_last)) * _to_mpf(xf) ** (-n) / _to_mpf(1 - rho)
    return EvalResult(value, tail, reliable)


def logseries_eval(g: LogSeries, x, prec: int = DEFAULT_PREC) -> EvalResult:
    """Evaluate a LogSeries; tails of the parts combine with |ln x|^j weights."""
    xf = _exact(x)
    if g.degree >= 1 and xf <= 0:
        raise ValueError(f"ln(x) requires x > 0, got {xf}")
    with mpmath.workprec(prec):
        value = mpmath.mpf(0)
        tail = mpmath.mpf(0)
        reliable = True
        lnx = mpmath.log(_to_mpf(xf)) if g.degree >= 1 else mpmath.mpf(0)
        weight = mpmath.mpf(1)
        for part in g.parts:
            r = series_eval(part, xf, prec)
            value += r.value * weight
            tail += r.tail_estimate * abs(weight)
            reliable = reliable and r.tail_reliable
            weight *= lnx
    return EvalResult(value, tail, reliable)
