"""Surface intersection lattices and Seiberg-Witten data.

A SurfaceLattice carries the numerical data of an algebraic surface used
by every generating-function formula: a free lattice modeling H^2(S,Z)
with its intersection form, the canonical class K, chi(O_S), an optional
polarization H, and the table of Seiberg-Witten basic classes a with
their invariants SW(a) (Mochizuki's convention SW(a) = SW~(2a - K)).

H^2 is modeled as a free Z-module in a fixed basis; the counting factors
delta are computed by divisibility in coordinates, so lattices with
2-torsion (or r-torsion in higher rank) are not supported.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from math import comb

from .errors import VerlindeError

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml


class SurfaceLattice:
    def __init__(self, name, gram, K, chiO, sw_table, H=None):
        self.name = str(name)
        self.gram = tuple(tuple(int(x) for x in row) for row in gram)
        self.rank = len(self.gram)
        for row in self.gram:
            if len(row) != self.rank:
                raise VerlindeError("gram matrix is not square")
        for i in range(self.rank):
            for j in range(self.rank):
                if self.gram[i][j] != self.gram[j][i]:
                    raise VerlindeError("gram matrix is not symmetric")
        self.K = tuple(int(x) for x in K)
        if len(self.K) != self.rank:
            raise VerlindeError("canonical class has wrong length")
        self.chiO = int(chiO)
        self.H = None if H is None else tuple(int(x) for x in H)
        self.sw_table = [
            (tuple(int(x) for x in a), int(v)) for a, v in sw_table
        ]
        for a, _ in self.sw_table:
            if self.dot(a, a) != self.dot(a, self.K):
                raise VerlindeError(
                    "Seiberg-Witten class %s violates a.a = a.K in %s"
                    % (a, self.name)
                )

    # -- numerical intersection data ------------------------------------

    def dot(self, a, b):
        return sum(
            int(a[i]) * self.gram[i][j] * int(b[j])
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def K2(self):
        return self.dot(self.K, self.K)

    def chi_line(self, D):
        """chi(O_S(D)) = D(D - K)/2 + chi(O_S)."""
        v = Fraction(self.dot(D, D) - self.dot(D, self.K), 2) + self.chiO
        if v.denominator != 1:
            raise VerlindeError("chi(O(D)) is not an integer for D = %s" % (D,))
        return v.numerator

    def vd(self, c1, c2):
        """Virtual dimension 4c2 - c1^2 - 3chi(O_S) of the rank-2 moduli."""
        return 4 * int(c2) - self.dot(c1, c1) - 3 * self.chiO

    def zero(self):
        return (0,) * self.rank

    def sub(self, a, b):
        return tuple(int(x) - int(y) for x, y in zip(a, b))

    def add(self, a, b):
        return tuple(int(x) + int(y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-int(x) for x in a)

    def scale(self, m, a):
        return tuple(int(m) * int(x) for x in a)

    # -- counting factors --------------------------------------------------

    def delta(self, a, b):
        """#{gamma : a - b = 2 gamma} on a free lattice: 1 or 0."""
        return self.delta_r(a, [b], 2)

    def delta_r(self, a, bs, r):
        """#{gamma : a - sum_i i*b_i = r gamma} with bs = [b_1, ..]."""
        v = list(a)
        for i, b in enumerate(bs, start=1):
            for j in range(self.rank):
                v[j] -= i * int(b[j])
        return 1 if all(x % int(r) == 0 for x in v) else 0

    # -- transforms ---------------------------------------------------------

    def blow_up(self):
        """The blow-up at a point: lattice gains an exceptional class E
        with E^2 = -1, K gains +E, and every SW class a is replaced by
        the pair a, a+E with the same invariant."""
        gram = [list(row) + [0] for row in self.gram]
        gram.append([0] * self.rank + [-1])
        K = list(self.K) + [1]
        sw = []
        for a, v in self.sw_table:
            sw.append((tuple(list(a) + [0]), v))
            sw.append((tuple(list(a) + [1]), v))
        H = None if self.H is None else tuple(list(self.H) + [0])
        return SurfaceLattice(self.name + "-blowup", gram, K, self.chiO, sw, H)

    # -- builders ---------------------------------------------------------

    @classmethod
    def minimal_general_type(cls, name, gram, K, chiO, H=None):
        """Only SW basic classes are 0 and K, with SW(0) = 1 and
        SW(K) = (-1)^chi(O_S)."""
        rank = len(gram)
        zero = (0,) * rank
        sw = [(zero, 1), (tuple(K), (-1) ** int(chiO))]
        return cls(name, gram, K, chiO, sw, H)

    @classmethod
    def disconnected_canonical(cls, name, gram, curves, chiO, h0_normal, H=None):
        """K = C_1 + ... + C_m with disjoint irreducible curves C_i given
        as lattice vectors; SW classes are the sums C_I over subsets I
        with SW(C_I) = prod_{i in I} (-1)^(h0 of the normal bundle).
        Linear equivalence is equality in the lattice, so the class
        multiplicities #[I] arise by accumulating equal sums."""
        rank = len(gram)
        m = len(curves)
        K = [0] * rank
        for c in curves:
            for j in range(rank):
                K[j] += int(c[j])
        acc = {}
        for mask in range(1 << m):
            v = [0] * rank
            sign = 1
            for i in range(m):
                if mask >> i & 1:
                    for j in range(rank):
                        v[j] += int(curves[i][j])
                    sign *= (-1) ** int(h0_normal[i])
            key = tuple(v)
            acc[key] = acc.get(key, 0) + sign
        sw = [(a, v) for a, v in sorted(acc.items()) if v]
        return cls(name, gram, K, chiO, sw, H)

    @classmethod
    def from_toml(cls, path):
        with open(path, "rb") as fh:
            doc = _toml.load(fh)
        name = doc.get("name", "lattice")
        gram = doc["gram"]
        K = doc["K"]
        chiO = doc["chiO"]
        H = doc.get("H")
        builder = doc.get("sw_builder", "table")
        if builder == "general_type":
            return cls.minimal_general_type(name, gram, K, chiO, H)
        if builder == "table":
            entries = doc.get("sw", [])
            sw = [(tuple(e["class"]), int(e["value"])) for e in entries]
            return cls(name, gram, K, chiO, sw, H)
        raise VerlindeError("unknown sw_builder %r in %s" % (builder, path))

    def __repr__(self):
        return "SurfaceLattice(%r, rank=%d, K2=%d, chiO=%d, #SW=%d)" % (
            self.name,
            self.rank,
            self.K2(),
            self.chiO,
            len(self.sw_table),
        )


def binom2(n):
    """binom(n+1, 2) as used by the blow-up relation."""
    return comb(n + 1, 2)
