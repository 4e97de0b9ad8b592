"""Exact arithmetic in the base rings.

Four rings are supported, all sharing one small duck-typed interface
(``zero``, ``one``, ``add``, ``sub``, ``neg``, ``mul``, ``is_zero``, ``size``,
``divmod``, ``is_unit``, ``unit_inverse``, ``normalize``, ``phi``):

* :class:`Integers` -- Z with a designated element ``s`` (``|s| >= 2``).
* :class:`SkewPoly` -- F_{p^m}[x; sigma] with sigma a power of Frobenius, s = x.
* :class:`Localized` -- the localisation of either of the above at powers of s.
* :class:`PrimeField` -- F_p, used internally for vector-space bookkeeping.

Elements are plain immutable Python values (ints, tuples), so they can be
shared freely.  Matrices are lists of rows.

Multiplication convention for modules: elements of free modules are row
vectors, module maps act by right multiplication ``v -> v @ F``.  This keeps
every map left-linear over a noncommutative ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import linalg


class RingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# finite fields


class GF:
    """The field F_{p^m} relative to an explicit monic irreducible modulus.

    Elements are encoded as integers in ``range(q)`` whose base-p digits are
    the coefficients of a polynomial in the generator ``g`` (lowest first).
    """

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise RingError(f"characteristic {p} is not prime")
        if m < 1:
            raise RingError("extension degree must be >= 1")
        if modulus is None:
            if m == 1:
                modulus = (0, 1)
            else:
                raise RingError("an explicit modulus is required for m > 1")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise RingError(f"modulus must be monic of degree {m}: {modulus}")
        self.p, self.m, self.modulus = p, m, modulus
        self.q = p ** m
        self._build_tables()

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, digits: Sequence[int]) -> int:
        v = 0
        for d in reversed(digits):
            v = v * self.p + (d % self.p)
        return v

    def _polymul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k]
            if c:
                for t in range(m + 1):
                    prod[k - m + t] = (prod[k - m + t] - c * self.modulus[t]) % p
        return self._encode(prod[:m])

    def _build_tables(self) -> None:
        q = self.q
        self.add_t = [[self._encode([x + y for x, y in zip(self._digits(a), self._digits(b))])
                       for b in range(q)] for a in range(q)]
        self.neg_t = [self._encode([-x for x in self._digits(a)]) for a in range(q)]
        self.mul_t = [[self._polymul(a, b) for b in range(q)] for a in range(q)]
        self.inv_t = [0] * q
        for a in range(1, q):
            inv = [b for b in range(1, q) if self.mul_t[a][b] == 1]
            if len(inv) != 1:
                raise RingError(f"modulus {self.modulus} is reducible over F_{self.p}")
            self.inv_t[a] = inv[0]
        # Frobenius a -> a^p
        self.frob_t = []
        for a in range(q):
            r = 1
            for _ in range(self.p):
                r = self.mul_t[r][a]
            self.frob_t.append(r)

    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_t[a][self.neg_t[b]]

    def neg(self, a: int) -> int:
        return self.neg_t[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.inv_t[a]

    def frob(self, a: int, k: int = 1) -> int:
        k %= self.m
        for _ in range(k):
            a = self.frob_t[a]
        return a

    @property
    def generator(self) -> int:
        """The class of the root g of the modulus (equals 1 when m = 1)."""
        return self.p if self.m > 1 else 1

    def fmt(self, a: int) -> str:
        if self.m == 1:
            return str(a)
        terms = []
        for i, d in enumerate(self._digits(a)):
            if not d:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if not mono:
                terms.append(str(d))
            else:
                terms.append(mono if d == 1 else f"{d}{mono}")
        return "+".join(reversed(terms)) or "0"

    def describe(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF) and (self.p, self.m, self.modulus) == (
            other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})"


# ---------------------------------------------------------------------------
# rings


class Ring:
    """Shared helpers; concrete rings override the arithmetic."""

    commutative = False
    localized = False
    name = "ring"

    def is_zero(self, a) -> bool:
        return a == self.zero

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def pow(self, a, n: int):
        r = self.one
        for _ in range(n):
            r = self.mul(r, a)
        return r

    def s_power(self, n: int):
        return self.pow(self.s, n)

    def sum(self, items):
        r = self.zero
        for x in items:
            r = self.add(r, x)
        return r

    def __repr__(self) -> str:
        return self.name


class Integers(Ring):
    """Z with a designated normal regular element ``s``; the twist is trivial."""

    commutative = True

    def __init__(self, s: int = 2):
        if abs(s) < 2:
            raise RingError("the designated element must satisfy |s| >= 2")
        self.s = int(s)
        self.zero, self.one = 0, 1
        self.name = f"Z(s={self.s})"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def size(self, a) -> int:
        return abs(a)

    def divmod(self, a, b, side: str = "left"):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        q, r = divmod(a, b)
        # prefer the remainder of least absolute value; keeps |r| < |b|
        if abs(r) * 2 > abs(b):
            q, r = q + 1, r - b
        return q, r

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def unit_inverse(self, a):
        if a not in (1, -1):
            raise RingError(f"{a} is not a unit")
        return a

    def normalize(self, a):
        """Return ``(u, u*a)`` with ``u`` a unit and ``u*a`` the canonical associate."""
        return (-1, -a) if a < 0 else (1, a)

    def phi(self, a, power: int = 1):
        return a

    def strip_s(self, a):
        """Write ``a = s^k * b`` with ``s`` not dividing ``b``; return ``(k, b)``."""
        if a == 0:
            raise RingError("cannot strip s from zero")
        k = 0
        while a % self.s == 0:
            a //= self.s
            k += 1
        return k, a

    def s_saturation(self, a):
        """Split ``a = c * u`` where c divides a power of s and u is coprime to s.

        Returns ``(k, u)`` with ``c | s^k``; u is the part that survives in
        the localisation up to units.
        """
        from math import gcd

        if a == 0:
            raise RingError("cannot saturate zero")
        k, g = 0, gcd(a, self.s)
        while g > 1:
            a //= g
            k += 1
            g = gcd(a, self.s)
        return k, a

    def random_element(self, rng: random.Random, bound: int = 9):
        return rng.randint(-bound, bound)

    def fmt(self, a) -> str:
        return str(a)

    def to_json(self, a):
        return a

    def from_json(self, x):
        return int(x)

    def describe(self) -> dict:
        return {"kind": "integers", "s": self.s}

    def __eq__(self, other):
        return isinstance(other, Integers) and other.s == self.s

    def __hash__(self):
        return hash(("Z", self.s))


class PrimeField(Ring):
    """F_p as a (trivially Euclidean) ring, for vector-space computations."""

    commutative = True

    def __init__(self, p: int):
        GF(p)  # primality check
        self.p = p
        self.zero, self.one = 0, 1
        self.name = f"F_{p}"
        self.s = None

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def size(self, a) -> int:
        return -1 if a % self.p == 0 else 0

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def divmod(self, a, b, side: str = "left"):
        if b % self.p == 0:
            raise ZeroDivisionError("division by zero")
        return (a * pow(b, -1, self.p)) % self.p, 0

    def is_unit(self, a) -> bool:
        return a % self.p != 0

    def unit_inverse(self, a):
        return pow(a, -1, self.p)

    def normalize(self, a):
        a %= self.p
        return (1, 0) if a == 0 else (pow(a, -1, self.p), 1)

    def phi(self, a, power: int = 1):
        return a

    def random_element(self, rng: random.Random, **_):
        return rng.randrange(self.p)

    def fmt(self, a) -> str:
        return str(a % self.p)

    def to_json(self, a):
        return a % self.p

    def from_json(self, x):
        return int(x) % self.p

    def describe(self) -> dict:
        return {"kind": "prime_field", "p": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


class SkewPoly(Ring):
    """The skew polynomial ring F_{p^m}[x; sigma], sigma = Frobenius^k.

    Elements are tuples of field codes indexed by x-degree with no trailing
    zeros; ``()`` is zero.  The rule ``x * c = sigma(c) * x`` drives every
    product.  The designated normal element is ``s = x`` and its twist is
    ``phi = sigma^{-1}`` (from ``a x = x phi(a)``).
    """

    def __init__(self, field: GF, sigma_power: int = 1):
        self.F = field
        self.k = sigma_power % field.m if field.m > 1 else 0
        self.zero, self.one = (), (1,)
        self.s = (0, 1)
        self.name = f"F_{field.q}[x;Frob^{self.k}]"

    # sigma^j on coefficients, j may be negative
    def sigma(self, c: int, j: int = 1) -> int:
        return self.F.frob(c, (self.k * j) % self.F.m)

    @staticmethod
    def _trim(c):
        c = list(c)
        while c and c[-1] == 0:
            c.pop()
        return tuple(c)

    def elem(self, coeffs) -> tuple:
        return self._trim(int(x) for x in coeffs)

    def const(self, c: int) -> tuple:
        return self._trim([c])

    def monomial(self, c: int, deg: int) -> tuple:
        return self._trim([0] * deg + [c])

    def add(self, a, b):
        F = self.F
        n = max(len(a), len(b))
        return self._trim(F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)
                          for i in range(n))

    def neg(self, a):
        return tuple(self.F.neg(c) for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        F = self.F
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = F.add(out[i + j], F.mul(ai, self.sigma(bj, i)))
        return self._trim(out)

    def is_zero(self, a) -> bool:
        return not a

    def size(self, a) -> int:
        return len(a) - 1

    def degree(self, a) -> int:
        return len(a) - 1

    def divmod(self, a, b, side: str = "left"):
        """``side='left'``: a = q*b + r; ``side='right'``: a = b*q + r; deg r < deg b."""
        if not b:
            raise ZeroDivisionError("division by the zero polynomial")
        F = self.F
        d, lead = len(b) - 1, b[-1]
        q, r = (), a
        while r and len(r) - 1 >= d:
            k = len(r) - 1 - d
            if side == "left":
                c = F.mul(r[-1], F.inv(self.sigma(lead, k)))
                term = self.monomial(c, k)
                r = self.sub(r, self.mul(term, b))
            elif side == "right":
                c = self.sigma(F.mul(F.inv(lead), r[-1]), -d)
                term = self.monomial(c, k)
                r = self.sub(r, self.mul(b, term))
            else:
                raise ValueError(f"unknown division side {side!r}")
            q = self.add(q, term)
        return q, r

    def is_unit(self, a) -> bool:
        return len(a) == 1

    def unit_inverse(self, a):
        if len(a) != 1:
            raise RingError("not a unit")
        return (self.F.inv(a[0]),)

    def normalize(self, a):
        if not a:
            return self.one, a
        u = (self.F.inv(a[-1]),)
        return u, self.mul(u, a)

    def phi(self, a, power: int = 1):
        # a*x = x*phi(a) forces phi = sigma^{-1} coefficientwise
        return self._trim(self.sigma(c, -power) for c in a)

    def strip_s(self, a):
        """Write ``a = x^k * b`` with x not dividing b on the left; return ``(k, b)``."""
        if not a:
            raise RingError("cannot strip s from zero")
        k = 0
        while a[0] == 0:
            k += 1
            a = a[1:]
        # a = x^k * a' means coefficients of a' are sigma^{-k} of the shifted ones
        return k, self._trim(self.sigma(c, -k) for c in a)

    def s_saturation(self, a):
        return self.strip_s(a)

    def random_element(self, rng: random.Random, max_degree: int = 3):
        n = rng.randint(0, max_degree + 1)
        return self._trim(rng.randrange(self.F.q) for _ in range(n))

    def fmt(self, a) -> str:
        if not a:
            return "0"
        terms = []
        for i in range(len(a) - 1, -1, -1):
            c = a[i]
            if not c:
                continue
            cs = self.F.fmt(c)
            if "+" in cs:
                cs = f"({cs})"
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms)

    def to_json(self, a):
        return list(a)

    def from_json(self, x):
        if isinstance(x, int):
            return self.const(x)
        return self.elem(x)

    def describe(self) -> dict:
        d = {"kind": "skew"}
        d.update(self.F.describe())
        d["sigma_power"] = self.k
        return d

    def __eq__(self, other):
        return isinstance(other, SkewPoly) and other.F == self.F and other.k == self.k

    def __hash__(self):
        return hash(("skew", self.F, self.k))


class Localized(Ring):
    """The localisation of ``base`` at the powers of its normal element s.

    An element is a pair ``(a, k)`` standing for ``a * s^{-k}``; the exponent
    is kept minimal.  Products use ``s^{-k} b = phi^k(b) s^{-k}``.
    """

    localized = True

    def __init__(self, base: Ring):
        if base.localized or isinstance(base, PrimeField):
            raise RingError("can only localise Z or a skew polynomial ring")
        self.base = base
        self.zero = (base.zero, 0)
        self.one = (base.one, 0)
        self.s = (base.s, 0)
        self.commutative = base.commutative
        self.name = f"{base.name}[s^-1]"

    def reduce(self, a):
        b, k = a
        B = self.base
        if B.is_zero(b):
            return (B.zero, 0)
        while k > 0:
            q, r = B.divmod(b, B.s, "left")  # b = q*s + r
            if not B.is_zero(r):
                break
            b, k = q, k - 1
        return (b, k)

    def _lift(self, a, k):
        """Rewrite a*s^{-j} with exponent k >= j."""
        b, j = a
        return self.base.mul(b, self.base.s_power(k - j))

    def add(self, a, b):
        k = max(a[1], b[1])
        return self.reduce((self.base.add(self._lift(a, k), self._lift(b, k)), k))

    def neg(self, a):
        return (self.base.neg(a[0]), a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        B = self.base
        return self.reduce((B.mul(a[0], B.phi(b[0], a[1])), a[1] + b[1]))

    def is_zero(self, a) -> bool:
        return self.base.is_zero(a[0])

    def eq(self, a, b) -> bool:
        # cross-multiplication through the common exponent
        k = max(a[1], b[1])
        return self.base.eq(self._lift(a, k), self._lift(b, k))

    def is_unit(self, a) -> bool:
        if self.is_zero(a):
            return False
        _, rest = self.base.s_saturation(a[0])
        return self.base.is_unit(rest)

    def unit_inverse(self, a):
        B = self.base
        if not self.is_unit(a):
            raise RingError("not a unit in the localisation")
        if isinstance(B, Integers):
            j, u = B.s_saturation(a[0])
            # a[0] divides s^j, so (a s^-k)^-1 = s^k (s^j / a) s^-j
            return self.reduce((B.s ** a[1] * (B.s ** j // a[0]), j))
        j, u = B.strip_s(a[0])  # a = s^j u s^{-k}
        # (s^j u s^{-k})^{-1} = s^k u^{-1} s^{-j} = phi^{-k}(u^{-1}) s^{k-j}
        core = B.phi(B.unit_inverse(u), -a[1])
        e = a[1] - j
        if e >= 0:
            return self.reduce((B.mul(core, B.s_power(e)), 0))
        return self.reduce((core, -e))

    def clear(self, a, k: int):
        """The base element ``s^k * a``; requires k at least the denominator exponent."""
        b = self.mul((self.base.s_power(k), 0), a)
        if b[1] != 0:
            raise RingError("denominator not cleared")
        return b[0]

    def s_inverse(self):
        return (self.base.one, 1)

    def phi(self, a, power: int = 1):
        return (self.base.phi(a[0], power), a[1])

    def fmt(self, a) -> str:
        b, k = self.reduce(a)
        s = self.base.fmt(b)
        return s if k == 0 else f"({s})*s^-{k}"

    def to_json(self, a):
        b, k = self.reduce(a)
        return {"num": self.base.to_json(b), "den_exp": k}

    def from_json(self, x):
        if isinstance(x, dict):
            return self.reduce((self.base.from_json(x["num"]), int(x.get("den_exp", 0))))
        return (self.base.from_json(x), 0)

    def describe(self) -> dict:
        return {"kind": "localized", "base": self.base.describe()}

    def __eq__(self, other):
        return isinstance(other, Localized) and other.base == self.base

    def __hash__(self):
        return hash(("loc", self.base))


# ---------------------------------------------------------------------------
# element-level operations


def euclidean_divide(ring: Ring, a, b, side: str = "left"):
    """Division with remainder; ``left`` gives ``a = q*b + r``, ``right`` gives ``a = b*q + r``."""
    if ring.localized:
        raise RingError("euclidean division is only provided on non-localised rings")
    if ring.is_zero(b):
        raise ZeroDivisionError("division by zero")
    return ring.divmod(a, b, side)


def localization_map(loc: Localized, a):
    return (a, 0)


def twist_phi(ring: Ring, a, power: int = 1):
    """phi^power(a), where ``a*s = s*phi(a)``."""
    return ring.phi(a, power)


# ---------------------------------------------------------------------------
# matrices


def zeros(ring: Ring, r: int, c: int):
    return [[ring.zero] * c for _ in range(r)]


def identity(ring: Ring, n: int):
    m = zeros(ring, n, n)
    for i in range(n):
        m[i][i] = ring.one
    return m


def scalar_matrix(ring: Ring, n: int, a):
    m = zeros(ring, n, n)
    for i in range(n):
        m[i][i] = a
    return m


def matmul(ring: Ring, A, B, inner: int | None = None):
    if not A:
        return []
    n = len(B) if inner is None else inner
    cols = len(B[0]) if B else 0
    if n == 0:
        return zeros(ring, len(A), cols)
    if isinstance(ring, PrimeField):
        if cols == 0:
            return [[] for _ in A]
        M = (np.array(A, dtype=np.int64) @ np.array(B, dtype=np.int64)) % ring.p
        return M.tolist()
    out = []
    for row in A:
        acc = [ring.zero] * cols
        for k, a in enumerate(row):
            if ring.is_zero(a):
                continue
            for j, b in enumerate(B[k]):
                if not ring.is_zero(b):
                    acc[j] = ring.add(acc[j], ring.mul(a, b))
        out.append(acc)
    return out


def vecmat(ring: Ring, v, B, ncols: int | None = None):
    if ncols is None:
        ncols = len(B[0]) if B else 0
    if not B:
        return [ring.zero] * ncols
    return matmul(ring, [list(v)], B)[0]


def mat_eq(ring: Ring, A, B) -> bool:
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        if any(not ring.eq(x, y) for x, y in zip(ra, rb)):
            return False
    return True


def is_zero_matrix(ring: Ring, A) -> bool:
    return all(ring.is_zero(x) for row in A for x in row)


def transpose(A, ncols: int = 0):
    if not A:
        return [[] for _ in range(ncols)]
    return [list(c) for c in zip(*A)]


def map_entries(f, A):
    return [[f(x) for x in row] for row in A]


def block_diag(ring: Ring, blocks):
    """Block diagonal matrix; each block is ``(matrix, nrows, ncols)``."""
    R = sum(b[1] for b in blocks)
    C = sum(b[2] for b in blocks)
    out = zeros(ring, R, C)
    r0 = c0 = 0
    for M, nr, nc in blocks:
        for i in range(nr):
            for j in range(nc):
                out[r0 + i][c0 + j] = M[i][j]
        r0 += nr
        c0 += nc
    return out


def stack(*mats):
    out = []
    for M in mats:
        out.extend([list(r) for r in M])
    return out


def hcat(ring: Ring, nrows: int, *mats):
    out = [[] for _ in range(nrows)]
    for M in mats:
        for i in range(nrows):
            out[i].extend(M[i])
    return out


def twist_matrix(ring: Ring, A, power: int):
    return [[ring.phi(x, power) for x in row] for row in A]


# ---------------------------------------------------------------------------
# diagonal normal form


@dataclass(frozen=True)
class DiagonalForm:
    """``U @ A @ V = D`` with U, V invertible; inverses are carried along."""

    U: list
    D: list
    V: list
    Uinv: list
    Vinv: list
    rank: int

    def diagonal(self, ring: Ring):
        return [self.D[i][i] for i in range(self.rank)]


def diagonal_normal_form(ring: Ring, A, ncols: int | None = None) -> DiagonalForm:
    """Diagonalise A by invertible row and column operations.

    Pivot = an entry of minimal size, ties broken by lowest row then column.
    Over Z the result is the Smith normal form with positive entries; over a
    skew polynomial ring the diagonal entries are monic but divisibility is
    not enforced.
    """
    if ring.localized:
        raise RingError("diagonal normal form requires a non-localised ring")
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if isinstance(ring, PrimeField):
        return _field_form(ring, A, m, n)
    M = [list(r) for r in A]
    U, Uinv = identity(ring, m), identity(ring, m)
    V, Vinv = identity(ring, n), identity(ring, n)
    size, is_zero = ring.size, ring.is_zero

    def row_addmul(i, j, q):  # row_i -= q * row_j
        if is_zero(q):
            return
        for X in (M, U):
            X[i] = [ring.sub(x, ring.mul(q, y)) for x, y in zip(X[i], X[j])]
        for row in Uinv:  # col_j += col_i * q
            row[j] = ring.add(row[j], ring.mul(row[i], q))

    def col_addmul(i, j, q):  # col_j -= col_i * q
        if is_zero(q):
            return
        for X in (M, V):
            for row in X:
                row[j] = ring.sub(row[j], ring.mul(row[i], q))
        Vinv[i] = [ring.add(x, ring.mul(q, y)) for x, y in zip(Vinv[i], Vinv[j])]

    def swap_rows(i, j):
        if i != j:
            M[i], M[j] = M[j], M[i]
            U[i], U[j] = U[j], U[i]
            for row in Uinv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for X in (M, V):
                for row in X:
                    row[i], row[j] = row[j], row[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def scale_row(i, u):  # row_i <- u * row_i, u a unit
        uinv = ring.unit_inverse(u)
        for X in (M, U):
            X[i] = [ring.mul(u, x) for x in X[i]]
        for row in Uinv:
            row[i] = ring.mul(row[i], uinv)

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if not is_zero(M[i][j]):
                    key = (size(M[i][j]), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if not is_zero(M[i][t]):
                    q, r = ring.divmod(M[i][t], M[t][t], "left")
                    row_addmul(i, t, q)
                    if not is_zero(r):
                        dirty = True
            for j in range(t + 1, n):
                if not is_zero(M[t][j]):
                    q, r = ring.divmod(M[t][j], M[t][t], "right")
                    col_addmul(t, j, q)
                    if not is_zero(r):
                        dirty = True
            if dirty:
                # move a smallest nonzero entry of row/col t to the pivot
                cand = [(size(M[i][t]), i, t) for i in range(t, m) if not is_zero(M[i][t])]
                cand += [(size(M[t][j]), t, j) for j in range(t, n) if not is_zero(M[t][j])]
                _, pi, pj = min(cand)
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            if isinstance(ring, Integers):
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if M[i][j] % M[t][t] != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is not None:
                    # row_t += row_bad, then re-clear
                    row_addmul(t, bad, ring.neg(ring.one))
                    continue
            break
        u, _ = ring.normalize(M[t][t])
        if u != ring.one:
            scale_row(t, u)
        t += 1
    return DiagonalForm(U, M, V, Uinv, Vinv, t)


def _field_form(ring: PrimeField, A, m: int, n: int) -> DiagonalForm:
    p = ring.p
    Ar = np.array(A, dtype=np.int64).reshape(m, n) % p
    U, R, pivots = linalg.rref_with_transform(Ar, p)
    r = len(pivots)
    nonpiv = [j for j in range(n) if j not in pivots]
    perm = list(pivots) + nonpiv
    P = np.zeros((n, n), dtype=np.int64)
    for newj, oldj in enumerate(perm):
        P[oldj, newj] = 1
    X = (R[:r] @ P)[:, r:] % p if r else np.zeros((0, n - r), dtype=np.int64)
    E = np.eye(n, dtype=np.int64)
    E[:r, r:] = (-X) % p
    Einv = np.eye(n, dtype=np.int64)
    Einv[:r, r:] = X
    V = (P @ E) % p
    Vinv = (Einv @ P.T) % p
    Uinv = linalg.inverse(U, p)
    D = (U @ Ar @ V) % p
    return DiagonalForm(U.tolist(), D.tolist(), V.tolist(), Uinv.tolist(),
                        Vinv.tolist(), r)


def ring_from_description(d: dict) -> Ring:
    kind = d.get("kind")
    if kind == "integers":
        return Integers(int(d.get("s", 2)))
    if kind == "skew":
        F = GF(int(d["p"]), int(d.get("m", 1)), d.get("modulus"))
        return SkewPoly(F, int(d.get("sigma_power", 1)))
    if kind == "localized":
        return Localized(ring_from_description(d["base"]))
    if kind == "prime_field":
        return PrimeField(int(d["p"]))
    raise RingError(f"unknown ring kind {kind!r}")


F4_MODULUS = (1, 1, 1)  # g^2 + g + 1


def f4_skew(sigma_power: int = 1) -> SkewPoly:
    """F_4[x; Frobenius], the default skew setting."""
    return SkewPoly(GF(2, 2, F4_MODULUS), sigma_power)


def as_elements(ring: Ring, values: Any):
    return [[ring.from_json(x) for x in row] for row in values]
