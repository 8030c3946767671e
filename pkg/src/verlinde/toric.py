"""Equivariant fixed-point data on toric surfaces.

A ToricSurfaceModel carries the chart data of a smooth complete toric
surface: for each torus-fixed point the two tangent weights in Z^2, and
the linearization character of each basis divisor in that chart.  Torus
fixed points of the Hilbert scheme of n points are tuples of partitions,
one per chart, of total size n; the box (i, j) of the partition in chart
sigma carries the character i*u + j*v of the chart weights, with the box
(0, 0) at the fixed point carrying the trivial character.

Characters live in the representation ring of the two-torus times the
extra one-parameter group 's': sparse maps (e1, e2, s2) -> multiplicity,
with the s-exponent stored doubled so half-integer powers stay integral.
Cohomology characters of line bundles are assembled from the chart data
by exact division of Laurent polynomials, and virtual Hom characters
between fixed points come from the per-chart vertex formula; both reduce
to the four-term Euler-pairing decomposition

    chi(I_Z, I_W(D)) = chi(O, O(D)) - chi(O_Z, O(D))
                       - chi(O, O_W(D)) + chi(O_Z, O_W(D))

so the same primitives serve the rank-2 instanton and monopole sums.

The canonical class is linearized by the intrinsic character u + v per
chart (the character of the form dx ^ dy); basis divisors use the
tabulated homogeneous-coordinate linearization.  Every divisor class is
a pair (basis coefficients, multiple of K) so that combinations such as
2K - B keep a consistent equivariant structure.
"""

from __future__ import annotations

import sys
from fractions import Fraction

from .errors import (
    DegenerateWeightError,
    GridError,
    IncompatibleSeriesError,
    NonMonomialError,
    VerlindeError,
)
from .rational import YCoeff
from .series import TruncatedSeries

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml


# -- partitions and fixed points -------------------------------------------


def partitions(n):
    """All partitions of n as weakly decreasing tuples, in descending
    lexicographic order: partitions(4)[0] == (4,), last is all ones."""
    n = int(n)
    if n < 0:
        raise VerlindeError("cannot partition a negative integer")
    out = []

    def rec(rest, cap, prefix):
        if rest == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(rest, cap), 0, -1):
            prefix.append(part)
            rec(rest - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def boxes(lam):
    """Boxes (i, j) of a partition: j indexes the part, i runs along it."""
    return [(i, j) for j, part in enumerate(lam) for i in range(part)]


def fixed_points(model, n):
    """Torus fixed points of Hilb^n: tuples of partitions, one per chart,
    of total size n, in a deterministic order."""
    n = int(n)
    charts = len(model.charts)
    out = []

    def rec(idx, rest, prefix):
        if idx == charts - 1:
            for lam in partitions(rest):
                out.append(tuple(prefix) + (lam,))
            return
        for size in range(rest + 1):
            for lam in partitions(size):
                prefix.append(lam)
                rec(idx + 1, rest - size, prefix)
                prefix.pop()

    if charts == 0:
        raise VerlindeError("surface model has no charts")
    rec(0, n, [])
    return out


def colength(point):
    """Total number of boxes of a chart-partition tuple."""
    return sum(sum(lam) for lam in point)


# -- characters --------------------------------------------------------------


class EquivChar:
    """Sparse virtual character: dict (e1, e2, s2) -> integer multiplicity,
    with the exponent of 's' stored doubled."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for e, m in terms.items():
                m = int(m)
                if not m:
                    continue
                e1, e2, s2 = e
                self.terms[(int(e1), int(e2), int(s2))] = m

    @classmethod
    def monomial(cls, e1, e2, s2=0, mult=1):
        return cls({(e1, e2, s2): mult})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, mult=1):
        return cls({(0, 0, 0): mult})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, EquivChar) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def items(self):
        return self.terms.items()

    def rank(self):
        """Coefficient sum: the non-equivariant virtual dimension."""
        return sum(self.terms.values())

    def __add__(self, other):
        out = dict(self.terms)
        for e, m in other.terms.items():
            c = out.get(e, 0) + m
            if c:
                out[e] = c
            else:
                out.pop(e, None)
        res = EquivChar.zero()
        res.terms = out
        return res

    def __neg__(self):
        res = EquivChar.zero()
        res.terms = {e: -m for e, m in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        out = {}
        for (a1, a2, a3), m in self.terms.items():
            for (b1, b2, b3), k in other.terms.items():
                e = (a1 + b1, a2 + b2, a3 + b3)
                c = out.get(e, 0) + m * k
                if c:
                    out[e] = c
                else:
                    out.pop(e, None)
        res = EquivChar.zero()
        res.terms = out
        return res

    __rmul__ = __mul__

    def scale(self, k):
        k = int(k)
        res = EquivChar.zero()
        if k:
            res.terms = {e: k * m for e, m in self.terms.items()}
        return res

    def conj(self):
        """Dual character: every exponent negated."""
        res = EquivChar.zero()
        res.terms = {(-a, -b, -c): m for (a, b, c), m in self.terms.items()}
        return res

    def twist(self, e1, e2, s2=0):
        """Multiply by the monomial t1^e1 t2^e2 s^(s2/2)."""
        res = EquivChar.zero()
        res.terms = {
            (a + e1, b + e2, c + s2): m for (a, b, c), m in self.terms.items()
        }
        return res

    def s_free(self):
        return all(e[2] == 0 for e in self.terms)

    def __repr__(self):
        if not self.terms:
            return "EquivChar(0)"
        bits = []
        for e in sorted(self.terms):
            bits.append("%+d*t^%s" % (self.terms[e], (e,)))
        return "EquivChar(%s)" % " ".join(bits)


# -- surface models ----------------------------------------------------------


class Divisor:
    """Divisor class c1*B1 + ... + cr*Br + k*K on a toric surface model,
    kept as (basis coefficients, K multiple) so each summand retains its
    own linearization convention."""

    __slots__ = ("coeffs", "k")

    def __init__(self, coeffs, k=0):
        self.coeffs = tuple(int(c) for c in coeffs)
        self.k = int(k)

    def __add__(self, other):
        if len(self.coeffs) != len(other.coeffs):
            raise IncompatibleSeriesError("divisors on different surfaces")
        return Divisor(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
            self.k + other.k,
        )

    def __neg__(self):
        return Divisor(tuple(-a for a in self.coeffs), -self.k)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, m):
        m = int(m)
        return Divisor(tuple(m * a for a in self.coeffs), m * self.k)

    __mul__ = __rmul__

    def __eq__(self, other):
        return (
            isinstance(other, Divisor)
            and self.coeffs == other.coeffs
            and self.k == other.k
        )

    def __hash__(self):
        return hash((self.coeffs, self.k))

    def __repr__(self):
        return "Divisor(%r, k=%d)" % (self.coeffs, self.k)


class Chart:
    """One torus-fixed point: tangent weights u, v and the linearization
    character of each basis divisor."""

    __slots__ = ("u", "v", "a")

    def __init__(self, u, v, a):
        self.u = (int(u[0]), int(u[1]))
        self.v = (int(v[0]), int(v[1]))
        self.a = tuple((int(x[0]), int(x[1])) for x in a)
        if self.u[0] * self.v[1] - self.u[1] * self.v[0] not in (1, -1):
            raise VerlindeError(
                "chart weights %s, %s are not a lattice basis" % (u, v)
            )


class ToricSurfaceModel:
    """Immutable chart-level model of a smooth complete toric surface."""

    def __init__(self, name, chiO, basis, gram, K, charts):
        self.name = str(name)
        self.chiO = int(chiO)
        self.basis = tuple(str(b) for b in basis)
        self.gram = tuple(tuple(int(x) for x in row) for row in gram)
        self.K_basis = tuple(int(x) for x in K)
        self.charts = tuple(charts)
        r = len(self.basis)
        if len(self.gram) != r or any(len(row) != r for row in self.gram):
            raise VerlindeError("intersection form does not match basis")
        if len(self.K_basis) != r:
            raise VerlindeError("canonical class does not match basis")
        for ch in self.charts:
            if len(ch.a) != r:
                raise VerlindeError("chart linearizations do not match basis")
        got = rgamma_char(self, self.divisor()).rank()
        if got != self.chiO:
            raise VerlindeError(
                "chart data gives chi(O) = %d, expected %d" % (got, self.chiO)
            )

    @classmethod
    def from_toml(cls, path):
        with open(path, "rb") as fh:
            data = _toml.load(fh)
        charts = [Chart(c["u"], c["v"], c["a"]) for c in data["charts"]]
        return cls(
            data["name"],
            data["chiO"],
            data["basis"],
            data["gram"],
            data["K"],
            charts,
        )

    # -- divisor bookkeeping ------------------------------------------------

    def divisor(self, *coeffs, k=0):
        if not coeffs:
            coeffs = (0,) * len(self.basis)
        if len(coeffs) != len(self.basis):
            raise VerlindeError(
                "expected %d divisor coordinates, got %d"
                % (len(self.basis), len(coeffs))
            )
        return Divisor(coeffs, k)

    def canonical(self):
        return Divisor((0,) * len(self.basis), 1)

    def full_coords(self, D):
        """Coordinates of D in the divisor basis with K expanded."""
        return tuple(
            c + D.k * kb for c, kb in zip(D.coeffs, self.K_basis)
        )

    def dot(self, D1, D2):
        a = self.full_coords(D1)
        b = self.full_coords(D2)
        return sum(
            a[i] * self.gram[i][j] * b[j]
            for i in range(len(a))
            for j in range(len(b))
        )

    def chi(self, D):
        """Riemann-Roch Euler characteristic (D^2 - D.K)/2 + chi(O)."""
        num = self.dot(D, D) - self.dot(D, self.canonical())
        if num % 2:
            raise VerlindeError("divisor class violates adjunction parity")
        return num // 2 + self.chiO

    def a_sigma(self, idx, D):
        """Linearization character of O(D) in chart idx."""
        ch = self.charts[idx]
        e1 = sum(c * w[0] for c, w in zip(D.coeffs, ch.a))
        e2 = sum(c * w[1] for c, w in zip(D.coeffs, ch.a))
        e1 += D.k * (ch.u[0] + ch.v[0])
        e2 += D.k * (ch.u[1] + ch.v[1])
        return (e1, e2)


# -- Laurent-polynomial division in two variables ----------------------------

_XI_CANDIDATES = ((3, 2), (2, 3), (1, 4), (4, 1), (5, 2), (7, 3))
_DIV_CAP = 4_000_000


def _div_binomial(f, w):
    """Exact quotient of the Laurent polynomial f (dict (e1,e2) -> int)
    by 1 - t^w.  Raises GridError when the division is not exact."""
    w = (int(w[0]), int(w[1]))
    if w == (0, 0):
        raise GridError("cannot divide by the zero binomial")
    for xi in _XI_CANDIDATES:
        d = xi[0] * w[0] + xi[1] * w[1]
        if d:
            break
    if d < 0:
        # 1/(1 - t^w) = -t^(-w)/(1 - t^(-w))
        g = _div_binomial(f, (-w[0], -w[1]))
        return {(e[0] - w[0], e[1] - w[1]): -c for e, c in g.items()}
    x0, x1 = xi
    rem = dict(f)
    out = {}
    steps = 0
    while rem:
        steps += 1
        if steps > _DIV_CAP:
            raise GridError("binomial division does not terminate (inexact)")
        m = min(rem, key=lambda e: (e[0] * x0 + e[1] * x1, e))
        c = rem.pop(m)
        out[m] = out.get(m, 0) + c
        n = (m[0] + w[0], m[1] + w[1])
        nc = rem.get(n, 0) + c
        if nc:
            rem[n] = nc
        else:
            rem.pop(n, None)
    return {e: c for e, c in out.items() if c}


def _mul2(f, g):
    out = {}
    for (a1, a2), c in f.items():
        for (b1, b2), d in g.items():
            e = (a1 + b1, a2 + b2)
            v = out.get(e, 0) + c * d
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _binom2(w):
    """1 - t^w as a Laurent-polynomial dict."""
    if w == (0, 0):
        raise GridError("cannot form 1 - t^0")
    return {(0, 0): 1, (int(w[0]), int(w[1])): -1}


# -- cohomology and Hom characters -------------------------------------------


def rgamma_char(model, D):
    """Virtual character of the line-bundle cohomology H0 - H1 + H2 of
    O(D), assembled by summing the chart rational functions
    t^a_sigma / ((1 - t^u)(1 - t^v)) exactly (the chart weights are the
    characters of the local coordinates, so the local section ring of a
    chart is the full positive cone on u, v)."""
    charts = model.charts
    total = {}
    for idx in range(len(charts)):
        a = model.a_sigma(idx, D)
        term = {a: 1}
        for jdx, other in enumerate(charts):
            if jdx == idx:
                continue
            term = _mul2(term, _binom2(other.u))
            term = _mul2(term, _binom2(other.v))
        for e, c in term.items():
            v = total.get(e, 0) + c
            if v:
                total[e] = v
            else:
                total.pop(e, None)
    for ch in charts:
        total = _div_binomial(total, ch.u)
        total = _div_binomial(total, ch.v)
    return EquivChar({(e1, e2, 0): c for (e1, e2), c in total.items()})


def _chart_char(lam, u, v):
    """Character of O_Z restricted to one chart: the boxes of lam."""
    out = EquivChar.zero()
    terms = {}
    for i, j in boxes(lam):
        e = (i * u[0] + j * v[0], i * u[1] + j * v[1], 0)
        terms[e] = terms.get(e, 0) + 1
    out.terms = terms
    return out


def struct_sheaf_char(Z, model):
    """Character of H0(O_Z): each box (i, j) in chart sigma contributes
    t^(i*u + j*v); the coefficient sum is the length n."""
    total = EquivChar.zero()
    for lam, ch in zip(Z, model.charts):
        total = total + _chart_char(lam, ch.u, ch.v)
    return total


def ext_pair_char(Z, W, D, model):
    """Virtual character of RHom(O_Z, O_W(D)), with an empty tuple in
    either slot standing for the structure sheaf O_S, so the four-term
    Euler-pairing decomposition of chi(I_Z, I_W(D)) can be assembled
    from this one primitive:

      both empty      -> RGamma(O(D))
      Z empty         -> per-chart sections of O_W(D)
      W empty         -> Serre-dual pattern conj(Z) * t^(-u-v)
      both nonempty   -> vertex formula, rank 0 in every chart
    """
    z_empty = colength(Z) == 0
    w_empty = colength(W) == 0
    if z_empty and w_empty:
        return rgamma_char(model, D)
    total = EquivChar.zero()
    for idx, ch in enumerate(model.charts):
        u, v = ch.u, ch.v
        a = model.a_sigma(idx, D)
        if z_empty:
            block = _chart_char(W[idx], u, v)
        elif w_empty:
            zc = _chart_char(Z[idx], u, v).conj()
            block = zc.twist(-u[0] - v[0], -u[1] - v[1])
        else:
            zc = _chart_char(Z[idx], u, v).conj()
            wc = _chart_char(W[idx], u, v)
            koszul = EquivChar.const(1)
            koszul = koszul - EquivChar.monomial(u[0], u[1])
            koszul2 = EquivChar.const(1) - EquivChar.monomial(v[0], v[1])
            block = zc * wc * koszul * koszul2
            block = block.twist(-u[0] - v[0], -u[1] - v[1])
        total = total + block.twist(a[0], a[1])
    return total


def ideal_pair_char(Z, W, D, model):
    """Euler pairing chi(I_Z, I_W(D)) of ideal sheaves, via the four-term
    decomposition through ext_pair_char.  An empty subscheme contributes
    zero correction terms (its structure sheaf is the zero sheaf here,
    unlike the O_S convention of ext_pair_char's empty slots)."""
    empty = tuple(() for _ in model.charts)
    nz = colength(Z) > 0
    nw = colength(W) > 0
    out = rgamma_char(model, D)
    if nz:
        out = out - ext_pair_char(Z, empty, D, model)
    if nw:
        out = out - ext_pair_char(empty, W, D, model)
    if nz and nw:
        out = out + ext_pair_char(Z, W, D, model)
    return out


def hilb_tangent_char(Z, model):
    """Tangent character of Hilb^n at a fixed point: chi(O, O) minus
    chi(I_Z, I_Z), a sum of exactly 2n weights with multiplicity one."""
    O = model.divisor()
    return rgamma_char(model, O) - ideal_pair_char(Z, Z, O, model)


# -- weight specialization ----------------------------------------------------


def weight_forms(c, eps_spec):
    """Specialize a character at eps1 = p*eps, eps2 = r*eps: each weight
    t1^a t2^b s^(s2/2) becomes the linear form c0*eps + (s2/2)*s with
    c0 = a*p + b*r.  Returns a sorted list of (c0, s2, multiplicity).

    A weight with (a, b) != (0, 0) that lands on c0 = 0 with s2 = 0 is an
    accidental degeneracy of the specialization and raises
    DegenerateWeightError so the caller can redraw (p, r); honest trivial
    weights (a = b = s2 = 0) pass through with form 0.
    """
    p, r = Fraction(eps_spec[0]), Fraction(eps_spec[1])
    agg = {}
    for (a, b, s2), m in c.items():
        c0 = a * p + b * r
        if c0 == 0 and s2 == 0 and (a, b) != (0, 0):
            raise DegenerateWeightError(
                "weight t1^%d t2^%d degenerates at (p, r) = (%s, %s)"
                % (a, b, p, r)
            )
        key = (c0, s2)
        agg[key] = agg.get(key, 0) + m
    out = [
        (c0, s2, m)
        for (c0, s2), m in agg.items()
        if m
    ]
    out.sort(key=lambda t: (t[0], t[1], t[2]))
    return out


_EPS_S = ("eps", "s")


def _monomial_es(coeff, e_eps, e_s):
    window = ((min(e_eps, 0), max(e_eps, 0)), (min(e_s, 0), max(e_s, 0)))
    return TruncatedSeries.monomial(
        coeff, (e_eps, e_s), _EPS_S, (1, 1), window
    )


def equiv_euler(c, eps_spec):
    """Equivariant Euler class of a specialized character: the product of
    the positive-part weight forms over the negative-part ones.  Each
    form must be a pure multiple of eps or of s, so the result is an
    exact Laurent monomial in (eps, s); a trivial weight upstairs gives
    0, one downstairs is an error."""
    forms = weight_forms(c, eps_spec)
    coeff = Fraction(1)
    e_eps = 0
    e_s = 0
    for c0, s2, mult in forms:
        if c0 == 0 and s2 == 0:
            if mult > 0:
                return TruncatedSeries.zero(_EPS_S, (1, 1), ((0, 0), (0, 0)))
            raise DegenerateWeightError("zero weight in an Euler denominator")
        if c0 != 0 and s2 != 0:
            raise NonMonomialError(
                "mixed weight form %s*eps + %s*s in an Euler class"
                % (c0, Fraction(s2, 2))
            )
        if c0 != 0:
            coeff *= c0**mult
            e_eps += mult
        else:
            coeff *= Fraction(s2, 2) ** mult
            e_s += mult
    return _monomial_es(coeff, e_eps, e_s)


def _form_pow(c0, s2, k, order):
    """(c0*eps + (s2/2)*s)^k as exponent/coefficient pairs, truncated to
    total degree <= order."""
    if k > order:
        return []
    half = Fraction(s2, 2)
    out = []
    binom = 1
    for j in range(k + 1):
        coef = binom * c0 ** (k - j) * half**j
        if coef:
            out.append(((k - j, j), Fraction(coef)))
        binom = binom * (k - j) // (j + 1)
    return out


def _subst_form(g, c0, s2, order):
    """Substitute the linear form c0*eps + (s2/2)*s for the variable of a
    univariate series g, truncating at total degree order."""
    terms = {}
    for (k,), cf in g.terms.items():
        for e, scal in _form_pow(c0, s2, k, order):
            prev = terms.get(e)
            add = cf * scal
            terms[e] = add if prev is None else prev + add
    return TruncatedSeries(
        _EPS_S, (1, 1), ((0, order), (0, order)), terms, check=False
    )


_GCACHE = {}


def _univariate_factor(kind, order, y_sign=1):
    """Universal one-weight series in the variable t, window (0, order):
    'td' is t/(1 - e^(-t)), 'xy' is t(1 + y_sign*y*e^(-t))/(1 - e^(-t))."""
    key = (kind, order, y_sign)
    cached = _GCACHE.get(key)
    if cached is not None:
        return cached
    pad = order + 4
    t = TruncatedSeries.monomial(1, (1,), ("t",), (1,), ((0, pad),))
    one = TruncatedSeries.const(1, ("t",), (1,), ((0, pad),))
    em = (-t).exp()
    inv = (one - em).invert()
    if kind == "td":
        out = (t * inv).restrict(((0, order),))
    elif kind == "xy":
        y = YCoeff.y_pow(2)
        if y_sign < 0:
            y = -y
        num = one + em.scale(y)
        out = (num * t * inv).restrict(((0, order),))
    else:
        raise VerlindeError("unknown universal factor %r" % (kind,))
    _GCACHE[key] = out
    return out


def equiv_td(c, eps_spec, order):
    """Equivariant Todd class of a specialized character as a truncated
    series in (eps, s): the product over weights of w/(1 - e^(-w))."""
    g = _univariate_factor("td", order)
    return _factor_product(c, eps_spec, order, lambda c0, s2: _subst_form(g, c0, s2, order))


def equiv_ch(c, eps_spec, order):
    """Equivariant Chern character: the sum over weights of e^w."""
    out = TruncatedSeries.zero(_EPS_S, (1, 1), ((0, order), (0, order)))
    fact = [Fraction(1)]
    for k in range(1, order + 1):
        fact.append(fact[-1] / k)
    for c0, s2, mult in weight_forms(c, eps_spec):
        terms = {}
        for k in range(order + 1):
            for e, scal in _form_pow(c0, s2, k, order):
                prev = terms.get(e)
                add = fact[k] * scal * mult
                terms[e] = add if prev is None else prev + add
        out = out + TruncatedSeries(
            _EPS_S, (1, 1), ((0, order), (0, order)), terms, check=False
        )
    return out


def equiv_xy(c, y_sign, eps_spec, order):
    """Hirzebruch-genus factor of a specialized character: the product
    over weights w of w(1 + y_sign*y*e^(-w))/(1 - e^(-w)), expanded as a
    truncated series in (eps, s) with coefficients in Q[y]."""
    g = _univariate_factor("xy", order, 1 if y_sign >= 0 else -1)
    return _factor_product(c, eps_spec, order, lambda c0, s2: _subst_form(g, c0, s2, order))


def _factor_product(c, eps_spec, order, factor):
    out = TruncatedSeries.const(1, _EPS_S, (1, 1), ((0, order), (0, order)))
    for c0, s2, mult in weight_forms(c, eps_spec):
        f = factor(c0, s2)
        if mult < 0:
            f = f.invert()
            mult = -mult
        for _ in range(mult):
            out = out * f
        out = out.restrict(((0, order), (0, order)))
    return out


def equiv_chern_class(c, k, eps_spec):
    """Degree-k part of prod(1 + w_i)^(+-1) over the specialized weight
    forms, each form counting as degree one: the k-th Chern class of the
    virtual character, a polynomial in (eps, s)."""
    k = int(k)
    if k < 0:
        raise VerlindeError("negative Chern degree")
    poly = {(0, 0): Fraction(1)}

    def mul_form(p, c0, s2, negate):
        half = Fraction(s2, 2)
        out = {}
        sign = -1 if negate else 1
        for (i, j), cf in p.items():
            out[(i, j)] = out.get((i, j), Fraction(0)) + cf
            if i + j < k:
                if c0:
                    e = (i + 1, j)
                    out[e] = out.get(e, Fraction(0)) + sign * cf * c0
                if half:
                    e = (i, j + 1)
                    out[e] = out.get(e, Fraction(0)) + sign * cf * half
        return {e: v for e, v in out.items() if v}

    for c0, s2, mult in weight_forms(c, eps_spec):
        if mult > 0:
            for _ in range(mult):
                poly = mul_form(poly, c0, s2, False)
        else:
            # (1 + w)^(-1) = sum (-w)^m, truncated at total degree k
            inv = {(0, 0): Fraction(1)}
            half = Fraction(s2, 2)
            powm = {(0, 0): Fraction(1)}
            for _ in range(k):
                nxt = {}
                for (i, j), cf in powm.items():
                    if i + j >= k:
                        continue
                    if c0:
                        e = (i + 1, j)
                        nxt[e] = nxt.get(e, Fraction(0)) - cf * c0
                    if half:
                        e = (i, j + 1)
                        nxt[e] = nxt.get(e, Fraction(0)) - cf * half
                powm = {e: v for e, v in nxt.items() if v}
                if not powm:
                    break
                for e, v in powm.items():
                    inv[e] = inv.get(e, Fraction(0)) + v
            for _ in range(-mult):
                nxt = {}
                for (i, j), cf in poly.items():
                    for (a, b), dv in inv.items():
                        if i + a + j + b > k:
                            continue
                        e = (i + a, j + b)
                        nxt[e] = nxt.get(e, Fraction(0)) + cf * dv
                poly = {e: v for e, v in nxt.items() if v}
    terms = {e: v for e, v in poly.items() if e[0] + e[1] == k}
    return TruncatedSeries(
        _EPS_S, (1, 1), ((0, k), (0, k)), terms, check=False
    )
