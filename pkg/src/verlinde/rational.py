"""Exact scalars: rational functions of a square root of y.

Coefficients of all user-facing series live in the field Q(u) with
u = y^(1/2).  Exponents of u are integers, so half-integer powers of y are
represented exactly.  A value is stored in the integer normal form

    u^shift * N(u) / (d * D(u))

  * N is a trimmed integer coefficient tuple with N[0] != 0 (the whole
    u-valuation lives in shift); empty N means zero;
  * d is a positive integer with gcd(content(N), d) = 1;
  * D is a primitive integer polynomial with D[0] != 0, positive leading
    coefficient, and no common factor with N over Q.

This normal form is unique, so equality and hashing are structural.
Polynomial products run through Kronecker substitution (one big-integer
multiply per product), which keeps dense u-polynomials cheap.
"""

from __future__ import annotations

import sys
from array import array
from fractions import Fraction
from math import gcd

from .errors import RootError

_F0 = Fraction(0)
_F1 = Fraction(1)


# -- integer polynomial kernel ------------------------------------------------


def _content(a):
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            return 1
    return g


# slot widths the array module can cast at C speed (little-endian hosts)
_SIGNED = {}
if sys.byteorder == "little":
    for _tc in "hilq":
        _SIGNED.setdefault(array(_tc).itemsize, _tc)


def _stride(a):
    """gcd of the support positions (a[0] is nonzero, so this is the
    lattice step of the exponents present)."""
    g = 0
    for i, c in enumerate(a):
        if c and i:
            g = gcd(g, i)
            if g == 1:
                return 1
    return g if g else 1


def _pack_nonneg(a, w):
    buf = bytearray(len(a) * w)
    for i, c in enumerate(a):
        if c:
            buf[i * w : (i + 1) * w] = c.to_bytes(w, "little")
    return int.from_bytes(buf, "little")


def _iconv(a, b):
    """Convolution of integer coefficient tuples via Kronecker packing:
    one big-integer multiply, slots wide enough that digits never carry."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return ()
    if la == 1:
        c = a[0]
        return tuple(c * x for x in b)
    if lb == 1:
        c = b[0]
        return tuple(c * x for x in a)
    if la * lb <= 64:
        out = [0] * (la + lb - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return tuple(out)
    ga = _stride(a)
    if ga > 1:
        g = gcd(ga, _stride(b))
        if g > 1:
            # both supports live on a common stride: convolve decimated
            c = _iconv(a[::g], b[::g])
            out = [0] * ((len(c) - 1) * g + 1)
            out[::g] = c
            return tuple(out)
    loa, hia = min(a), max(a)
    lob, hib = min(b), max(b)
    amax = max(hia, -loa)
    bmax = max(hib, -lob)
    bound = amax * bmax * min(la, lb)
    w = ((2 * bound + 2).bit_length() + 7) >> 3
    n = la + lb - 1
    for width, tc in _SIGNED.items():
        if width >= w:
            w, typecode = width, tc
            break
    else:
        # coefficients too wide for machine slots: generic byte path
        pa = _pack_split(a, loa, w)
        pb = _pack_split(b, lob, w)
        v = pa * pb
        half = 1 << (8 * w - 1)
        bias = int.from_bytes((bytes(w - 1) + b"\x80") * n, "little")
        raw = (v + bias).to_bytes(n * w, "little")
        return tuple(
            int.from_bytes(raw[i * w : (i + 1) * w], "little") - half
            for i in range(n)
        )
    pa = _pack_array(a, loa, typecode)
    pb = _pack_array(b, lob, typecode)
    v = pa * pb
    if loa >= 0 and lob >= 0:
        # every digit is a plain value below 2^(8w-1)
        raw = v.to_bytes(n * w, "little")
        return tuple(array(typecode, raw))
    # digit d of v is a signed value x with |x| < 2^(8w-1); adding the
    # per-slot bias then xoring it back flips each slot's top bit, which
    # turns the biased digit into x's two's-complement slot image
    bias = int.from_bytes((bytes(w - 1) + b"\x80") * n, "little")
    raw = ((v + bias) ^ bias).to_bytes(n * w, "little")
    return tuple(array(typecode, raw))


def _pack_array(a, lo, typecode):
    """Signed coefficient tuple -> packed integer, machine-slot width."""
    if lo >= 0:
        return int.from_bytes(array(typecode, a).tobytes(), "little")
    pos = array(typecode, [c if c > 0 else 0 for c in a])
    neg = array(typecode, [-c if c < 0 else 0 for c in a])
    return int.from_bytes(pos.tobytes(), "little") - int.from_bytes(
        neg.tobytes(), "little"
    )


def _pack_split(a, lo, w):
    if lo >= 0:
        return _pack_nonneg(a, w)
    return _pack_nonneg([c if c > 0 else 0 for c in a], w) - _pack_nonneg(
        [-c if c < 0 else 0 for c in a], w
    )


def _shift_add(sa, a, sb, b):
    """(shift, coeffs) sum of two shifted integer polys, untrimmed."""
    if not a:
        return sb, list(b)
    if not b:
        return sa, list(a)
    s = min(sa, sb)
    hi = max(sa + len(a), sb + len(b))
    out = [0] * (hi - s)
    for i, c in enumerate(a):
        out[sa - s + i] += c
    for i, c in enumerate(b):
        out[sb - s + i] += c
    return s, out


# -- dense Fraction helpers (general fallback and limits) ----------------------


def _dense_trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _dense_divmod(a, b):
    """Polynomial division over Q; returns (quotient, remainder)."""
    a = list(a)
    _dense_trim(a)
    db = len(b) - 1
    lb = b[-1]
    q = [_F0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        c = a[-1] / lb
        d = len(a) - 1 - db
        q[d] = c
        for i in range(db + 1):
            a[d + i] -= c * b[i]
        _dense_trim(a)
    return q, a


def _dense_gcd(a, b):
    """Monic gcd of dense polynomials over Q (Euclid, monic remainders)."""
    a = _dense_trim(list(a))
    b = _dense_trim(list(b))
    while b:
        _, r = _dense_divmod(a, b)
        a, b = b, r
        if b:
            lc = b[-1]
            b = [c / lc for c in b]
    if a:
        lc = a[-1]
        a = [c / lc for c in a]
    return a


def _frac_list(n_int, d):
    return [Fraction(c, d) for c in n_int]


def _int_list(fracs):
    """Clear denominators: (integer list, common denominator)."""
    d = 1
    for c in fracs:
        d = d * c.denominator // gcd(d, c.denominator)
    return [int(c * d) for c in fracs], d


class YCoeff:
    """A rational function in u = y^(1/2) over Q, in canonical form."""

    __slots__ = ("_d", "_s", "_n", "_D", "_hash")

    def __init__(self, num, den=None, _normalized=False):
        if den is None:
            den = {0: _F1}
        v = _from_dicts(num, den)
        self._d = v._d
        self._s = v._s
        self._n = v._n
        self._D = v._D
        self._hash = None

    @classmethod
    def _raw(cls, d, s, n, D):
        out = object.__new__(cls)
        out._d = d
        out._s = s
        out._n = n
        out._D = D
        out._hash = None
        return out

    # -- constructors -------------------------------------------------

    @classmethod
    def from_fraction(cls, c):
        c = Fraction(c)
        if not c:
            return _ZERO
        return cls._raw(c.denominator, 0, (c.numerator,), _D1)

    @classmethod
    def y_pow(cls, half_exponents):
        """u^k, i.e. y^(k/2)."""
        return cls._raw(1, int(half_exponents), (1,), _D1)

    @classmethod
    def zero(cls):
        return _ZERO

    @classmethod
    def one(cls):
        return _ONE

    # -- predicates ----------------------------------------------------

    def __bool__(self):
        return bool(self._n)

    def is_one(self):
        return self._n == (1,) and self._d == 1 and self._s == 0 and self._D == _D1

    def is_fraction(self):
        return self._D == _D1 and self._s == 0 and len(self._n) <= 1

    def as_fraction(self):
        if not self.is_fraction():
            raise RootError("value is not a plain rational: %s" % (self,))
        if not self._n:
            return _F0
        return Fraction(self._n[0], self._d)

    def is_polynomial(self):
        return self._D == _D1

    # -- ring ops --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._n:
            return other
        if not other._n:
            return self
        if self._D == other._D:
            da, db = self._d, other._d
            g = gcd(da, db)
            ma, mb = db // g, da // g
            s, out = _shift_add(
                self._s,
                [c * ma for c in self._n],
                other._s,
                [c * mb for c in other._n],
            )
            return _canon(da // g * db, s, out, self._D)
        # distinct denominator polynomials: cross-multiply
        na = _iconv(self._n, other._D)
        nb = _iconv(other._n, self._D)
        s, out = _shift_add(
            self._s, [c * other._d for c in na], other._s, [c * self._d for c in nb]
        )
        return _canon(self._d * other._d, s, out, _iconv(self._D, other._D))

    __radd__ = __add__

    def __neg__(self):
        if not self._n:
            return self
        return YCoeff._raw(self._d, self._s, tuple(-c for c in self._n), self._D)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._n or not other._n:
            return _ZERO
        n = _iconv(self._n, other._n)
        s = self._s + other._s
        d = self._d * other._d
        if self._D == _D1 and other._D == _D1:
            # products of primitives are primitive, so only the content
            # of the scalar pair needs reducing
            g = gcd(_content(n), d)
            if g > 1:
                n = tuple(c // g for c in n)
                d //= g
            return YCoeff._raw(d, s, n, _D1)
        if self._D == _D1:
            D = other._D
        elif other._D == _D1:
            D = self._D
        else:
            D = _iconv(self._D, other._D)
        return _canon(d, s, list(n), D)

    __rmul__ = __mul__

    def inv(self):
        if not self._n:
            raise ZeroDivisionError("inverse of zero coefficient")
        c = _content(self._n)
        if self._n[-1] < 0:
            c = -c
        num = tuple(x * self._d for x in self._D)
        g = gcd(_content(num), abs(c))
        if g > 1:
            num = tuple(x // g for x in num)
        den = tuple(x // c for x in self._n)
        return _canon(abs(c) // g, -self._s, [x * (1 if c > 0 else -1) for x in num], den)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inv() ** (-k)
        out = _ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure -------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (
            self._n == other._n
            and self._d == other._d
            and self._s == other._s
            and self._D == other._D
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._d, self._s, self._n, self._D))
        return self._hash

    def y_invert(self):
        """The involution y -> 1/y, i.e. u -> 1/u."""
        if not self._n:
            return self
        n = list(self._n[::-1])
        D = list(self._D[::-1])
        s = -(self._s + len(self._n) - 1) + (len(self._D) - 1)
        return _canon(self._d, s, n, tuple(D))

    def valuation(self):
        """u-adic valuation (den has nonzero constant term)."""
        if not self._n:
            raise ZeroDivisionError("valuation of zero")
        return self._s

    def evaluate(self, u_value):
        """Evaluate at a rational u.  The denominator must not vanish."""
        u_value = Fraction(u_value)
        num = _F0
        for c in reversed(self._n):
            num = num * u_value + c
        den = _F0
        for c in reversed(self._D):
            den = den * u_value + c
        if not self._n:
            return _F0
        return num * u_value**self._s / (self._d * den)

    def limit_u0(self):
        """Limit u -> 0 (i.e. y -> 0).  Finite iff the u-valuation is >= 0."""
        if not self._n:
            return _F0
        if self._s < 0:
            raise ZeroDivisionError("pole at y = 0 (valuation %d)" % self._s)
        if self._s > 0:
            return _F0
        return Fraction(self._n[0], self._d * self._D[0])

    def limit_u1(self):
        """Limit u -> 1 (i.e. y -> 1), cancelling common (u - 1) factors."""
        num = _frac_list(self._n, self._d)
        den = _frac_list(self._D, 1)
        lin = [-_F1, _F1]
        while True:
            dval = sum(den)
            if dval:
                return sum(num) / dval
            if sum(num):
                raise ZeroDivisionError("pole at y = 1: %s" % (self,))
            num, rn = _dense_divmod(num, lin)
            den, rd = _dense_divmod(den, lin)
            if rn or rd:
                raise ArithmeticError("inexact division by (u - 1)")

    def substitute_u_power(self, k):
        """u -> u^k for a nonzero integer k (e.g. y -> y^r)."""
        k = int(k)
        if k == 0:
            raise ValueError("u -> u^0 is not a substitution")
        if not self._n:
            return self
        if k < 0:
            return self.y_invert().substitute_u_power(-k)
        n = [0] * ((len(self._n) - 1) * k + 1)
        for i, c in enumerate(self._n):
            n[i * k] = c
        D = [0] * ((len(self._D) - 1) * k + 1)
        for i, c in enumerate(self._D):
            D[i * k] = c
        return _canon(self._d, self._s * k, n, tuple(D))

    def nth_root(self, d):
        """Exact d-th root of a monomial c*u^k.

        Convention: the root whose u-exponent is k/d and whose rational
        coefficient is the positive real root (sign preserved for odd d).
        """
        d = int(d)
        if d <= 0:
            raise RootError("root index must be positive")
        if d == 1:
            return self
        if self._D != _D1 or len(self._n) != 1:
            raise RootError(
                "rational root of a non-monomial coefficient: %s" % (self,)
            )
        k = self._s
        c = Fraction(self._n[0], self._d)
        if k % d:
            raise RootError("u-exponent %d is not divisible by %d" % (k, d))
        if c < 0 and d % 2 == 0:
            raise RootError("even root of a negative coefficient %s" % (c,))
        sign = 1
        if c < 0:
            sign = -1
            c = -c
        p = _int_nth_root(c.numerator, d)
        q = _int_nth_root(c.denominator, d)
        if p is None or q is None:
            raise RootError("%s is not a perfect %d-th power" % (sign * c, d))
        return YCoeff._raw(q, k // d, (sign * p,), _D1)

    # -- legacy dict views (serialization and display) ----------------------

    @property
    def num(self):
        """Sparse Fraction dict of the numerator, monic-denominator form."""
        lead = self._D[-1]
        scale = self._d * lead
        return {
            i + self._s: Fraction(c, scale) for i, c in enumerate(self._n) if c
        }

    @property
    def den(self):
        """Sparse Fraction dict of the monic denominator polynomial."""
        lead = self._D[-1]
        return {i: Fraction(c, lead) for i, c in enumerate(self._D) if c}

    # -- display -----------------------------------------------------------

    def __repr__(self):
        return "YCoeff(%s)" % (self,)

    def __str__(self):
        if not self._n:
            return "0"
        num = _lp_str(self.num)
        if self._D == _D1:
            return num
        return "(%s)/(%s)" % (num, _lp_str(self.den))


def _lp_str(a):
    parts = []
    for k in sorted(a):
        c = a[k]
        if k == 0:
            parts.append(str(c))
        else:
            e = Fraction(k, 2)
            mon = "y" if e == 1 else "y^(%s)" % e
            if c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append("%s*%s" % (c, mon))
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _int_nth_root(n, d):
    """Exact integer d-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    x = int(round(n ** (1.0 / d)))
    for cand in range(max(1, x - 2), x + 3):
        if cand**d == n:
            return cand
    # float seed can be off for very large n; fall back to Newton
    x = 1 << ((n.bit_length() + d - 1) // d)
    while True:
        y = ((d - 1) * x + n // x ** (d - 1)) // d
        if y >= x:
            break
        x = y
    return x if x**d == n else None


def _canon(d, s, n, D):
    """Canonical form from raw pieces: n is a mutable list, D a tuple with
    any valuation already nonzero or reducible here."""
    # trim numerator and absorb its valuation into the shift
    lo = 0
    while lo < len(n) and not n[lo]:
        lo += 1
    hi = len(n)
    while hi > lo and not n[hi - 1]:
        hi -= 1
    if lo == hi:
        return _ZERO
    n = n[lo:hi]
    s += lo
    D = list(D)
    dlo = 0
    while dlo < len(D) and not D[dlo]:
        dlo += 1
    dhi = len(D)
    while dhi > dlo and not D[dhi - 1]:
        dhi -= 1
    D = D[dlo:dhi]
    s -= dlo
    if len(D) > 1:
        # cancel any common polynomial factor over Q
        g = _dense_gcd(_frac_list(n, 1), _frac_list(D, 1))
        if len(g) > 1:
            qn, rn = _dense_divmod(_frac_list(n, 1), g)
            qd, rd = _dense_divmod(_frac_list(D, 1), g)
            if rn or rd:
                raise ArithmeticError("gcd division left a remainder")
            n, dn = _int_list(qn)
            D, dd = _int_list(qd)
            # value = (n/dn) / (D/dd) = (n*dd) / (dn*D)
            n = [c * dd for c in n]
            d *= dn
    cD = _content(D)
    if D[-1] < 0:
        cD = -cD
    if cD != 1:
        D = [c // cD for c in D]
        if cD < 0:
            n = [-c for c in n]
        d *= abs(cD)
    g = gcd(_content(n), d)
    if g > 1:
        n = [c // g for c in n]
        d //= g
    return YCoeff._raw(d, s, tuple(n), tuple(D))


def _from_dicts(num, den):
    """Build canonical form from sparse Fraction dicts."""
    num = {int(k): Fraction(v) for k, v in num.items() if v}
    den = {int(k): Fraction(v) for k, v in den.items() if v}
    if not den:
        raise ZeroDivisionError("zero denominator polynomial")
    if not num:
        return _ZERO
    nlo = min(num)
    dlo = min(den)
    nf = [_F0] * (max(num) - nlo + 1)
    for k, v in num.items():
        nf[k - nlo] = v
    df = [_F0] * (max(den) - dlo + 1)
    for k, v in den.items():
        df[k - dlo] = v
    n, dn = _int_list(nf)
    D, dd = _int_list(df)
    # value = u^(nlo-dlo) * (n/dn) / (D/dd)
    n = [c * dd for c in n]
    return _canon(dn, nlo - dlo, n, tuple(D))


def _coerce(x):
    if isinstance(x, YCoeff):
        return x
    if isinstance(x, (int, Fraction)):
        return YCoeff.from_fraction(x)
    return NotImplemented


_D1 = (1,)
_ZERO = YCoeff._raw(1, 0, (), _D1)
_ONE = YCoeff._raw(1, 0, (1,), _D1)
