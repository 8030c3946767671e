"""Theta functions, the normalized Dedekind eta function, Eisenstein
series, and infinite-product builders, all as exact truncated series.

Conventions:
  theta3(x, y) = sum_{n in Z}       x^(n^2) y^n
  theta2(x, y) = sum_{n in Z + 1/2} x^(n^2) y^n
  eta_bar(x)   = prod_{n >= 1} (1 - x^n)           (no x^(1/24) prefactor)
  G2(q)        = -1/24 + sum_{d >= 1} sigma_1(d) q^d
  G2_bar(q)    = G2(q) + 1/24
  Dq           = q d/dq
"""

from __future__ import annotations

from fractions import Fraction

from .errors import GridError
from .rational import YCoeff
from .series import TruncatedSeries

_F1 = Fraction(1)


def _grid(order, denom, x_scale, value):
    """Stored exponent of x^(value * x_scale) on a 1/denom grid."""
    e = Fraction(value) * Fraction(x_scale) * denom
    if e.denominator != 1:
        raise GridError("exponent %s*%s not on the 1/%d grid" % (value, x_scale, denom))
    return e.numerator


def theta3(order, var="x", denom=1, x_scale=1, u_step=2):
    """theta3(x^x_scale, y^(u_step/2)) truncated above x^order."""
    window = ((0, int(Fraction(order) * denom)),)
    hi = window[0][1]
    terms = {}
    n = 0
    while True:
        e = _grid(order, denom, x_scale, n * n)
        if e > hi:
            break
        c = YCoeff.y_pow(n * u_step)
        if n:
            c = c + YCoeff.y_pow(-n * u_step)
        terms[(e,)] = terms.get((e,), YCoeff.zero()) + c
        n += 1
    return TruncatedSeries((var,), (denom,), window, terms)


def theta2(order, var="x", denom=4, x_scale=1, u_step=2):
    """theta2(x^x_scale, y^(u_step/2)) truncated above x^order; the
    x-exponents lie on the quarter-integer grid (times x_scale)."""
    window = ((0, int(Fraction(order) * denom)),)
    hi = window[0][1]
    terms = {}
    k = 0
    while True:
        n = Fraction(2 * k + 1, 2)
        e = _grid(order, denom, x_scale, n * n)
        if e > hi:
            break
        # y^(n*u_step/2) with n = k + 1/2 is u^(n*u_step)
        h = Fraction(2 * k + 1, 2) * u_step
        if h.denominator != 1:
            raise GridError("theta2 needs an even u_step to stay in Q(y^(1/2))")
        c = YCoeff.y_pow(h.numerator) + YCoeff.y_pow(-h.numerator)
        terms[(e,)] = terms.get((e,), YCoeff.zero()) + c
        k += 1
    return TruncatedSeries((var,), (denom,), window, terms)


def eta_bar(order, var="x", denom=1, x_scale=1):
    """prod_{n>=1}(1 - x^(n*x_scale)) truncated above x^order."""
    factors = []
    n = 1
    while Fraction(n) * x_scale <= order:
        factors.append((1, YCoeff.one(), Fraction(n) * x_scale))
        n += 1
    return qproduct(order, factors, var=var, denom=denom)


def sigma1(d):
    s = 0
    i = 1
    while i * i <= d:
        if d % i == 0:
            s += i
            if i * i != d:
                s += d // i
        i += 1
    return s


def G2(order, var="q", denom=1, x_scale=1):
    return G2_bar(order, var, denom, x_scale) + Fraction(-1, 24)


def G2_bar(order, var="q", denom=1, x_scale=1):
    window = ((0, int(Fraction(order) * denom)),)
    hi = window[0][1]
    terms = {}
    d = 1
    while True:
        e = _grid(order, denom, x_scale, d)
        if e > hi:
            break
        terms[(e,)] = YCoeff.from_fraction(sigma1(d))
        d += 1
    return TruncatedSeries((var,), (denom,), window, terms)


def Dq(series, var):
    """q d/dq acting on the named variable (actual exponents)."""
    idx = series.variables.index(var)
    d = series.denoms[idx]
    terms = {}
    for e, c in series.terms.items():
        k = Fraction(e[idx], d)
        if k:
            terms[e] = c * k
    return TruncatedSeries(series.variables, series.denoms, series.window, terms, check=False)


def qlog(order, factors, var="q", denom=1):
    """log of prod over (m, c, a) of (1 - c*x^a)^m, truncated above
    x^order.

    m is a rational exponent, c a scalar (int, Fraction or YCoeff), and
    a > 0 the actual x-exponent of the monomial.  Accumulates
    -m * sum_k c^k x^(a*k) / k per factor."""
    window = ((0, int(Fraction(order) * denom)),)
    hi = window[0][1]
    log_terms = {}
    for m, c, a in factors:
        m = Fraction(m)
        if not m:
            continue
        a = Fraction(a)
        if a <= 0:
            raise GridError("product monomial exponent must be positive")
        c = c if isinstance(c, YCoeff) else YCoeff.from_fraction(c)
        k = 1
        ck = c
        while True:
            e = _grid(order, denom, 1, a * k)
            if e > hi:
                break
            # log(1 - z) = -sum z^k / k
            add = ck * (-m / k)
            prev = log_terms.get((e,))
            tot = add if prev is None else prev + add
            if tot:
                log_terms[(e,)] = tot
            else:
                log_terms.pop((e,), None)
            k += 1
            ck = ck * c
    return TruncatedSeries((var,), (denom,), window, log_terms, check=False)


def qproduct(order, factors, var="q", denom=1):
    """prod over (m, c, a) of (1 - c*x^a)^m, truncated above x^order.

    Built through one exp of the accumulated logarithm, which keeps
    rational m exact."""
    return qlog(order, factors, var=var, denom=denom).exp()
