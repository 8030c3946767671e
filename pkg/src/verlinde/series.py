"""Sparse multivariate truncated Laurent series with exact windows.

A TruncatedSeries tracks finitely many terms of a Laurent series in the
named variables, with coefficients in Q(y^(1/2)) (see rational.YCoeff).
Each variable carries an exponent denominator d: stored exponents are
integers k representing the actual exponent k/d, so fractional grids like
quarter powers of x are exact.

Every variable also carries a window [lo, hi] (inclusive, in stored
units) with two guarantees:

  * the underlying mathematical object has no support below lo in that
    variable (lo is a valuation bound), and
  * coefficients with exponents inside the window are exactly correct.

Arithmetic propagates windows soundly: products cap at
min(hi1+lo2, lo1+hi2) per variable, sums intersect windows, and Laurent
division widens the required input window by the divisor's valuation.
Coefficients outside the window are never reported.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import (
    GridError,
    IncompatibleSeriesError,
    NonMonomialError,
    RootError,
    SupportBoundaryError,
    WindowError,
)
from .rational import YCoeff

_F0 = Fraction(0)
_F1 = Fraction(1)


def _as_ycoeff(c):
    if isinstance(c, YCoeff):
        return c
    if isinstance(c, (int, Fraction)):
        return YCoeff.from_fraction(c)
    raise TypeError("cannot use %r as a coefficient" % (c,))


class TruncatedSeries:
    __slots__ = ("variables", "denoms", "window", "terms")

    def __init__(self, variables, denoms, window, terms, check=True):
        self.variables = tuple(variables)
        self.denoms = tuple(int(d) for d in denoms)
        self.window = tuple((int(lo), int(hi)) for lo, hi in window)
        if len(self.denoms) != len(self.variables) or len(self.window) != len(
            self.variables
        ):
            raise IncompatibleSeriesError("variables/denoms/window lengths differ")
        for d in self.denoms:
            if d <= 0:
                raise GridError("exponent denominators must be positive")
        for lo, hi in self.window:
            if lo > hi:
                raise WindowError("empty window [%d, %d]" % (lo, hi))
        self.terms = {}
        for e, c in terms.items():
            c = _as_ycoeff(c)
            if not c:
                continue
            e = tuple(int(x) for x in e)
            if check and not self._inside(e):
                raise WindowError(
                    "term %s lies outside window %s" % (e, self.window)
                )
            self.terms[e] = c

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, variables, denoms, window):
        return cls(variables, denoms, window, {})

    @classmethod
    def const(cls, c, variables, denoms, window):
        e = (0,) * len(tuple(variables))
        return cls(variables, denoms, window, {e: _as_ycoeff(c)})

    @classmethod
    def monomial(cls, c, exponents, variables, denoms, window):
        return cls(variables, denoms, window, {tuple(exponents): _as_ycoeff(c)})

    # -- helpers ----------------------------------------------------------

    def _inside(self, e):
        return all(lo <= x <= hi for x, (lo, hi) in zip(e, self.window))

    def _support_floor(self):
        """Window with the floor raised to the actual support minimum (a
        truthful tightening of the valuation bound; empty series keep
        their declared floor)."""
        if not self.terms:
            return self.window
        mins = [min(e[i] for e in self.terms) for i in range(len(self.variables))]
        return tuple(
            (max(lo, m), hi) for (lo, hi), m in zip(self.window, mins)
        )

    def _index(self, var):
        try:
            return self.variables.index(var)
        except ValueError:
            raise IncompatibleSeriesError(
                "no variable %r in %s" % (var, self.variables)
            ) from None

    def _compat(self, other):
        if self.variables != other.variables or self.denoms != other.denoms:
            raise IncompatibleSeriesError(
                "incompatible series: %s/%s vs %s/%s"
                % (self.variables, self.denoms, other.variables, other.denoms)
            )

    def is_zero(self):
        return not self.terms

    def support_min(self):
        """Componentwise minimum exponent over the support (None if zero)."""
        if not self.terms:
            return None
        n = len(self.variables)
        out = [min(e[i] for e in self.terms) for i in range(n)]
        return tuple(out)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, YCoeff)):
            other = TruncatedSeries.const(
                other, self.variables, self.denoms, self.window
            )
        self._compat(other)
        # Below a summand's floor its coefficient is exactly zero, so the
        # sum stays exact down to the smaller floor.
        window = tuple(
            (min(l1, l2), min(h1, h2))
            for (l1, h1), (l2, h2) in zip(self.window, other.window)
        )
        terms = {}
        for e, c in self.terms.items():
            if all(lo <= x <= hi for x, (lo, hi) in zip(e, window)):
                terms[e] = c
        for e, c in other.terms.items():
            if all(lo <= x <= hi for x, (lo, hi) in zip(e, window)):
                w = terms.get(e)
                w = c if w is None else w + c
                if w:
                    terms[e] = w
                else:
                    terms.pop(e, None)
        return TruncatedSeries(self.variables, self.denoms, window, terms, check=False)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(
            self.variables,
            self.denoms,
            self.window,
            {e: -c for e, c in self.terms.items()},
            check=False,
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, YCoeff)):
            other = TruncatedSeries.const(
                other, self.variables, self.denoms, self.window
            )
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, YCoeff)):
            return self.scale(other)
        self._compat(other)
        # valuation floors may be tightened to the actual support minima:
        # exactness caps then use the best truthful bound
        lo1 = self._support_floor()
        lo2 = other._support_floor()
        window = tuple(
            (l1 + l2, min(h1 + l2, l1 + h2))
            for (l1, h1), (l2, h2) in zip(lo1, lo2)
        )
        for lo, hi in window:
            if lo > hi:
                raise WindowError("product has empty window")
        terms = {}
        if self.terms and other.terms:
            a, b = self.terms, other.terms
            if len(a) > len(b):
                a, b = b, a
            for ea, ca in a.items():
                for eb, cb in b.items():
                    e = tuple(x + y for x, y in zip(ea, eb))
                    if not all(lo <= x <= hi for x, (lo, hi) in zip(e, window)):
                        continue
                    w = terms.get(e)
                    prod = ca * cb
                    w = prod if w is None else w + prod
                    if w:
                        terms[e] = w
                    else:
                        terms.pop(e, None)
        return TruncatedSeries(self.variables, self.denoms, window, terms, check=False)

    __rmul__ = __mul__

    def scale(self, c):
        c = _as_ycoeff(c)
        if not c:
            return TruncatedSeries.zero(self.variables, self.denoms, self.window)
        return TruncatedSeries(
            self.variables,
            self.denoms,
            self.window,
            {e: c * v for e, v in self.terms.items()},
            check=False,
        )

    def mul_monomial(self, c, exponents):
        """Multiply by c * prod(var^e) with stored-unit exponents e."""
        c = _as_ycoeff(c)
        exponents = tuple(int(x) for x in exponents)
        window = tuple(
            (lo + s, hi + s) for (lo, hi), s in zip(self.window, exponents)
        )
        terms = {
            tuple(x + s for x, s in zip(e, exponents)): c * v
            for e, v in self.terms.items()
        }
        return TruncatedSeries(self.variables, self.denoms, window, terms, check=False)

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.invert() ** (-k)
        out = None
        base = self
        if k == 0:
            window = tuple((min(lo, 0), hi) for lo, hi in self.window)
            return TruncatedSeries.const(1, self.variables, self.denoms, window)
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- unit decomposition ------------------------------------------------

    def _split_unit(self):
        """Write self = c * monomial(m) * (1 + r) with r supported in
        exponents >= 0 componentwise and != 0.  Returns (c, m, r)."""
        if not self.terms:
            raise NonMonomialError("zero series has no leading monomial")
        m = self.support_min()
        c = self.terms.get(m)
        if c is None:
            raise NonMonomialError(
                "lowest-order stratum is not a single monomial (corner %s absent)"
                % (m,)
            )
        inv_c = c.inv()
        window = tuple((lo - s, hi - s) for (lo, hi), s in zip(self.window, m))
        zero = (0,) * len(self.variables)
        terms = {}
        for e, v in self.terms.items():
            e2 = tuple(x - s for x, s in zip(e, m))
            if e2 == zero:
                continue
            terms[e2] = inv_c * v
        r = TruncatedSeries(self.variables, self.denoms, window, terms, check=False)
        return c, m, r

    def invert(self):
        """Multiplicative inverse.  The lowest-order stratum must be a
        single monomial; the window narrows by twice its exponent."""
        c, m, r = self._split_unit()
        geom = _neumann(r)
        out = geom.mul_monomial(c.inv(), tuple(-x for x in m))
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, YCoeff)):
            return self.scale(_as_ycoeff(other).inv())
        return self * other.invert()

    def __rtruediv__(self, other):
        return self.invert().scale(other)

    def exp(self):
        """exp of a series with no constant term and support >= 0."""
        self._require_positive_support("exp")
        window = tuple((0, hi) for lo, hi in self.window)
        if len(self.variables) == 1:
            # E' = A'E gives m*E_m = sum_j j*A_j*E_{m-j}, one pass per cell
            hi = window[0][1]
            ja = sorted(
                (e[0], c * e[0]) for e, c in self.terms.items() if e[0] <= hi
            )
            out = {0: YCoeff.one()}
            for m in range(1, hi + 1):
                acc = None
                for j, cj in ja:
                    if j > m:
                        break
                    prev = out.get(m - j)
                    if prev is None:
                        continue
                    p = cj * prev
                    acc = p if acc is None else acc + p
                if acc is not None and acc:
                    out[m] = acc * Fraction(1, m)
            terms = {(m,): c for m, c in out.items()}
            return TruncatedSeries(
                self.variables, self.denoms, window, terms, check=False
            )
        one = (0,) * len(self.variables)
        acc = TruncatedSeries(
            self.variables, self.denoms, window, {one: YCoeff.one()}, check=False
        )
        body = TruncatedSeries(
            self.variables,
            self.denoms,
            window,
            {e: c for e, c in self.terms.items() if all(x <= hi for x, (lo, hi) in zip(e, window))},
            check=False,
        )
        term = body
        k = 1
        while not term.is_zero():
            acc = acc + term.scale(Fraction(1, 1))
            k += 1
            term = (term * body / k).restrict(window)
        return acc

    def log(self):
        """log of a series with constant term exactly 1 and support >= 0."""
        self._require_unit_one("log")
        one = (0,) * len(self.variables)
        window = tuple((0, hi) for lo, hi in self.window)
        if len(self.variables) == 1:
            # S' = L'S gives L_m = S_m - (1/m) sum_i S_i * (m-i)L_{m-i}
            hi = window[0][1]
            s_items = sorted(
                (e[0], c) for e, c in self.terms.items() if 0 < e[0] <= hi
            )
            out = {}
            weighted = {}
            for m in range(1, hi + 1):
                acc = None
                for i, si in s_items:
                    if i >= m:
                        break
                    lw = weighted.get(m - i)
                    if lw is None:
                        continue
                    p = si * lw
                    acc = p if acc is None else acc + p
                val = self.terms.get((m,))
                if acc is not None:
                    acc = acc * Fraction(-1, m)
                    val = acc if val is None else val + acc
                if val is not None and val:
                    out[m] = val
                    weighted[m] = val * m
            terms = {(m,): c for m, c in out.items()}
            return TruncatedSeries(
                self.variables, self.denoms, window, terms, check=False
            )
        terms = {
            e: c
            for e, c in self.terms.items()
            if e != one and all(x <= hi for x, (lo, hi) in zip(e, window))
        }
        r = TruncatedSeries(self.variables, self.denoms, window, terms, check=False)
        acc = TruncatedSeries.zero(self.variables, self.denoms, window)
        term = r
        k = 1
        sign = 1
        while not term.is_zero():
            acc = acc + term.scale(Fraction(sign, k))
            k += 1
            sign = -sign
            term = (term * r).restrict(window)
        return acc

    def pow_rational(self, r):
        """self ** r for rational r.

        The lowest-order stratum must be a single monomial; its exponent
        times r must land on the exponent grid, and its coefficient must
        be a perfect power for the denominator of r (positive real root
        convention)."""
        r = Fraction(r)
        if r.denominator == 1:
            return self ** r.numerator
        c, m, rest = self._split_unit()
        new_m = []
        for x in m:
            e = x * r
            if e.denominator != 1:
                raise GridError(
                    "exponent %s * %s leaves the exponent grid" % (x, r)
                )
            new_m.append(e.numerator)
        try:
            croot = c.nth_root(r.denominator) ** r.numerator
        except RootError:
            raise
        one = (0,) * len(self.variables)
        unit_terms = dict(rest.terms)
        unit_terms[one] = YCoeff.one()
        unit = TruncatedSeries(
            self.variables, self.denoms, rest.window, unit_terms, check=False
        )
        body = unit.log().scale(r).exp()
        return body.mul_monomial(croot, new_m)

    def _require_positive_support(self, opname):
        zero = (0,) * len(self.variables)
        for e in self.terms:
            if e == zero or any(x < 0 for x in e):
                raise NonMonomialError(
                    "%s needs support in strictly positive exponents; found %s"
                    % (opname, e)
                )

    def _require_unit_one(self, opname):
        zero = (0,) * len(self.variables)
        c = self.terms.get(zero)
        if c is None or not c.is_one():
            raise NonMonomialError("%s needs constant term exactly 1" % opname)
        for e in self.terms:
            if e != zero and any(x < 0 for x in e):
                raise NonMonomialError(
                    "%s needs support in nonnegative exponents; found %s"
                    % (opname, e)
                )
        if not self._inside(zero):
            raise WindowError("%s needs the constant cell inside the window" % opname)

    # -- substitutions -------------------------------------------------------

    def substitute_monomial(self, var, coeff, exponents, new_denoms=None):
        """Substitute var -> coeff * prod(w^exponents[w]).

        exponents maps target variable names to rational actual exponents.
        Target variables may be existing ones or fresh; `var` disappears
        unless it is itself a target.  coeff is a scalar (it may involve
        y); it is raised to the actual exponent of var in each term, which
        must be an integer power unless that power of coeff exists in
        Q(y^(1/2))."""
        idx = self._index(var)
        coeff = _as_ycoeff(coeff)
        exponents = {w: Fraction(e) for w, e in exponents.items() if Fraction(e)}
        new_denoms = dict(new_denoms or {})

        keep = [v for v in self.variables if v != var or v in exponents]
        fresh = [w for w in exponents if w not in self.variables]
        out_vars = keep + fresh
        out_denoms = []
        for w in out_vars:
            if w in self.variables:
                out_denoms.append(self.denoms[self.variables.index(w)])
            else:
                out_denoms.append(int(new_denoms.get(w, 1)))

        d_var = self.denoms[idx]
        var_lo, var_hi = self.window[idx]

        # decide whether the exponent map is injective on cells
        targets = list(exponents)
        injective = len(targets) <= 1 and all(
            (w == var) or (w in fresh) for w in targets
        )

        out_window = []
        for w, dw in zip(out_vars, out_denoms):
            ew = exponents.get(w, _F0)
            # contribution interval of the image, in stored units of w
            cands = [ew * Fraction(var_lo, d_var) * dw, ew * Fraction(var_hi, d_var) * dw]
            img_lo, img_hi = min(cands), max(cands)
            if w in self.variables and w != var:
                lo_w, hi_w = self.window[self.variables.index(w)]
                if ew == 0:
                    out_window.append((lo_w, hi_w))
                else:
                    lo = Fraction(lo_w) + img_hi
                    hi = Fraction(hi_w) + img_lo
                    out_window.append((_ceil_f(lo), _floor_f(hi)))
            else:
                out_window.append((_floor_f(img_lo), _ceil_f(img_hi)))
        for lo, hi in out_window:
            if lo > hi:
                raise WindowError(
                    "substitution produced an empty window; widen the input"
                )
        if injective and var in exponents:
            # var maps to a power of itself: keep its window image exactly
            pass

        terms = {}
        pos = {w: i for i, w in enumerate(out_vars)}
        for e, c in self.terms.items():
            k_actual = Fraction(e[idx], d_var)
            if coeff.is_one():
                c2 = c
            else:
                if k_actual.denominator == 1:
                    c2 = c * coeff ** k_actual.numerator
                else:
                    try:
                        c2 = c * (
                            coeff.nth_root(k_actual.denominator)
                            ** k_actual.numerator
                        )
                    except RootError as exc:
                        raise GridError(
                            "cannot raise substitution coefficient to power %s: %s"
                            % (k_actual, exc)
                        ) from None
            e2 = [0] * len(out_vars)
            for i, v in enumerate(self.variables):
                if v != var:
                    e2[pos[v]] += e[i]
            for w, ew in exponents.items():
                add = k_actual * ew * out_denoms[pos[w]]
                if add.denominator != 1:
                    raise GridError(
                        "substitution exponent %s not on the grid of %r" % (add, w)
                    )
                e2[pos[w]] += add.numerator
            e2 = tuple(e2)
            if not all(lo <= x <= hi for x, (lo, hi) in zip(e2, out_window)):
                continue
            w0 = terms.get(e2)
            w0 = c2 if w0 is None else w0 + c2
            if w0:
                terms[e2] = w0
            else:
                terms.pop(e2, None)
        return TruncatedSeries(out_vars, out_denoms, out_window, terms, check=False)

    def extract_progression(self, var, modulus, residue):
        """Sub-series of terms whose actual var-exponent is congruent to
        residue modulo modulus.  The window is unchanged."""
        idx = self._index(var)
        d = self.denoms[idx]
        m = Fraction(modulus) * d
        r = Fraction(residue) * d
        if m.denominator != 1 or m <= 0:
            raise GridError("modulus %s not a positive multiple of the grid" % modulus)
        if r.denominator != 1:
            raise GridError("residue %s not on the grid" % residue)
        m = m.numerator
        r = r.numerator % m
        terms = {e: c for e, c in self.terms.items() if e[idx] % m == r}
        return TruncatedSeries(self.variables, self.denoms, self.window, terms, check=False)

    def map_coefficients(self, f):
        return TruncatedSeries(
            self.variables,
            self.denoms,
            self.window,
            {e: f(c) for e, c in self.terms.items()},
            check=False,
        )

    def y_invert(self):
        """Apply y -> 1/y to every coefficient."""
        return self.map_coefficients(lambda c: c.y_invert())

    # -- access ----------------------------------------------------------------

    def coeff(self, **exponents):
        """Coefficient at the given actual exponents (all variables).

        Below the window floor the series provably has no support, so the
        coefficient is an exact zero; above the cap it is unknown and
        raises WindowError."""
        e = []
        for v, d in zip(self.variables, self.denoms):
            k = Fraction(exponents.pop(v, 0)) * d
            if k.denominator != 1:
                raise GridError("exponent %s not on grid of %r" % (k, v))
            e.append(k.numerator)
        if exponents:
            raise IncompatibleSeriesError("unknown variables %s" % list(exponents))
        e = tuple(e)
        if any(x < lo for x, (lo, hi) in zip(e, self.window)):
            return YCoeff.zero()
        if not self._inside(e):
            raise WindowError(
                "coefficient at %s lies outside the exact window %s"
                % (e, self.window)
            )
        return self.terms.get(e, YCoeff.zero())

    def slice(self, var, exponent):
        """Coefficient of var^exponent as a series in the other variables."""
        idx = self._index(var)
        d = self.denoms[idx]
        k = Fraction(exponent) * d
        if k.denominator != 1:
            raise GridError("exponent %s not on grid of %r" % (exponent, var))
        k = k.numerator
        lo, hi = self.window[idx]
        if not lo <= k <= hi:
            raise WindowError(
                "slice at %s**%s lies outside the exact window" % (var, exponent)
            )
        out_vars = tuple(v for i, v in enumerate(self.variables) if i != idx)
        out_denoms = tuple(d for i, d in enumerate(self.denoms) if i != idx)
        out_window = tuple(w for i, w in enumerate(self.window) if i != idx)
        terms = {}
        for e, c in self.terms.items():
            if e[idx] == k:
                terms[tuple(x for i, x in enumerate(e) if i != idx)] = c
        return TruncatedSeries(out_vars, out_denoms, out_window, terms, check=False)

    def embed(self, variables, denoms, window):
        """View this series inside a larger variable set.  Existing
        variables keep their exponents (grids must agree and windows must
        not claim more than this series knows); new variables get exponent
        zero."""
        variables = tuple(variables)
        denoms = tuple(int(d) for d in denoms)
        window = tuple((int(a), int(b)) for a, b in window)
        pos = {}
        for i, v in enumerate(self.variables):
            if v not in variables:
                raise IncompatibleSeriesError("embed drops variable %r" % v)
            j = variables.index(v)
            if denoms[j] != self.denoms[i]:
                raise GridError("grid mismatch for %r" % v)
            lo, hi = window[j]
            slo, shi = self.window[i]
            if lo < slo or hi > shi:
                raise WindowError(
                    "embed window for %r exceeds known window" % v
                )
            pos[i] = j
        terms = {}
        for e, c in self.terms.items():
            e2 = [0] * len(variables)
            for i, x in enumerate(e):
                e2[pos[i]] = x
            e2 = tuple(e2)
            if all(lo <= x <= hi for x, (lo, hi) in zip(e2, window)):
                terms[e2] = c
        return TruncatedSeries(variables, denoms, window, terms, check=False)

    def restrict(self, window):
        """Shrink the window.  Terms outside the new hi are dropped; terms
        below the new lo would falsify the valuation claim and raise."""
        window = tuple((int(a), int(b)) for a, b in window)
        terms = {}
        for e, c in self.terms.items():
            for x, (lo, hi), (olo, ohi) in zip(e, window, self.window):
                if x < lo:
                    raise WindowError(
                        "restrict would drop term %s below the new window" % (e,)
                    )
            if all(lo <= x <= hi for x, (lo, hi) in zip(e, window)):
                terms[e] = c
        for (lo, hi), (olo, ohi) in zip(window, self.window):
            if hi > ohi:
                raise WindowError("restrict cannot extend exactness above %d" % ohi)
        return TruncatedSeries(self.variables, self.denoms, window, terms, check=False)

    def change_denom(self, var, new_denom):
        """Re-express the series on a finer or coarser exponent grid for
        one variable.  Every stored exponent and window bound must land on
        an integer of the new grid."""
        idx = self._index(var)
        new_denom = int(new_denom)
        if new_denom <= 0:
            raise GridError("exponent denominators must be positive")
        ratio = Fraction(new_denom, self.denoms[idx])
        denoms = list(self.denoms)
        denoms[idx] = new_denom
        lo, hi = self.window[idx]
        nlo, nhi = Fraction(lo) * ratio, Fraction(hi) * ratio
        window = list(self.window)
        window[idx] = (_ceil_f(nlo), _floor_f(nhi))
        terms = {}
        for e, c in self.terms.items():
            k = e[idx] * ratio
            if k.denominator != 1:
                raise GridError(
                    "exponent %s does not lie on the 1/%d grid"
                    % (Fraction(e[idx], self.denoms[idx]), new_denom)
                )
            e2 = list(e)
            e2[idx] = k.numerator
            terms[tuple(e2)] = c
        return TruncatedSeries(self.variables, denoms, window, terms, check=False)

    def assert_interior(self, var):
        """Certify that the support in var is strictly inside the window,
        so the series is a genuine Laurent polynomial there."""
        idx = self._index(var)
        lo, hi = self.window[idx]
        for e in self.terms:
            if e[idx] in (lo, hi):
                raise SupportBoundaryError(
                    "support of %r touches the window boundary %s"
                    % (var, (lo, hi))
                )
        return self

    # -- structure ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.denoms == other.denoms
            and self.window == other.window
            and self.terms == other.terms
        )

    def __repr__(self):
        return "TruncatedSeries(%s)" % self

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mon = []
            for v, d, k in zip(self.variables, self.denoms, e):
                if k == 0:
                    continue
                exp = Fraction(k, d)
                mon.append(v if exp == 1 else "%s^(%s)" % (v, exp))
            cs = str(c)
            if ("+" in cs[1:]) or ("-" in cs[1:]) or ("/" in cs):
                cs = "(%s)" % cs
            parts.append("*".join([cs] + mon) if mon else cs)
        return " + ".join(parts)

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        """Canonical JSON text.  Coefficient integers and exponents are
        decimal strings so round-trips are bit exact."""
        terms = []
        for e in sorted(self.terms):
            c = self.terms[e]
            num = [
                [str(k), str(v.numerator), str(v.denominator)]
                for k, v in sorted(c.num.items())
            ]
            den = [
                [str(k), str(v.numerator), str(v.denominator)]
                for k, v in sorted(c.den.items())
            ]
            terms.append([[str(x) for x in e], num, den])
        doc = {
            "variables": list(self.variables),
            "denominators": list(self.denoms),
            "window": [[lo, hi] for lo, hi in self.window],
            "terms": terms,
        }
        return json.dumps(doc, separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        variables = tuple(doc["variables"])
        denoms = tuple(int(d) for d in doc["denominators"])
        window = tuple((int(lo), int(hi)) for lo, hi in doc["window"])
        terms = {}
        for evec, num, den in doc["terms"]:
            e = tuple(int(x) for x in evec)
            n = {int(k): Fraction(int(p), int(q)) for k, p, q in num}
            d = {int(k): Fraction(int(p), int(q)) for k, p, q in den}
            terms[e] = YCoeff(n, d)
        return cls(variables, denoms, window, terms)


def _neumann(r):
    """(1 + r)^(-1) for r with support >= 0 componentwise and != 0."""
    r._require_positive_support("inversion remainder")
    one = (0,) * len(r.variables)
    window = tuple((0, hi) for lo, hi in r.window)
    if len(r.variables) == 1:
        # (1 + r)B = 1 gives B_m = -sum_i r_i B_{m-i}
        hi = window[0][1]
        items = sorted((e[0], c) for e, c in r.terms.items() if e[0] <= hi)
        out = {0: YCoeff.one()}
        for m in range(1, hi + 1):
            acc = None
            for i, ci in items:
                if i > m:
                    break
                prev = out.get(m - i)
                if prev is None:
                    continue
                p = ci * prev
                acc = p if acc is None else acc + p
            if acc is not None and acc:
                out[m] = -acc
        terms = {(m,): c for m, c in out.items()}
        return TruncatedSeries(r.variables, r.denoms, window, terms, check=False)
    acc = TruncatedSeries(
        r.variables, r.denoms, window, {one: YCoeff.one()}, check=False
    )
    term = TruncatedSeries(
        r.variables,
        r.denoms,
        window,
        {
            e: c
            for e, c in r.terms.items()
            if all(x <= hi for x, (lo, hi) in zip(e, window))
        },
        check=False,
    )
    sign = -1
    body = term
    while not term.is_zero():
        acc = acc + term.scale(sign)
        term = (term * body).restrict(window)
        sign = -sign
    return acc


def _floor_f(x):
    x = Fraction(x)
    return x.numerator // x.denominator


def _ceil_f(x):
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)
