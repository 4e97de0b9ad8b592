"""Bounded cochain complexes of presented modules.

Conventions (fixed here and printed in every report header):

* ``(C[1])^i = C^{i+1}`` and the shifted differential is ``-d``.
* ``cone(f)^i = Y^i + X^{i+1}`` with ``d(y, x) = (d y + f x, -d x)``.
* Maps act on row vectors from the right, so a differential ``C^i -> C^{i+1}``
  is a ``g_i x g_{i+1}`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .modules import (
    HomologyData,
    ModuleMap,
    PresentedModule,
    direct_sum,
    exact_at,
    homology,
    twist_module,
    zero_module,
)
from .rings import Ring, block_diag, matmul, zeros

SIGN_CONVENTIONS = {
    "shift": "(C[1])^i = C^(i+1), d_C[1] = -d_C",
    "cone": "cone(f)^i = Y^i + X^(i+1), d(y,x) = (d_Y y + f x, -d_X x)",
    "hom_complex": "(d f) = d_N f - (-1)^|f| f d_M",
    "maps": "row vectors, matrices act on the right",
}


class ComplexError(ValueError):
    pass


def _neg(ring: Ring, M):
    return [[ring.neg(x) for x in r] for r in M]


@dataclass
class BoundedComplex:
    """Modules ``terms[k]`` in degree ``lo + k`` with differentials ``diffs[k]``."""

    ring: Ring
    lo: int
    terms: list
    diffs: list
    _hom_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.diffs) != max(len(self.terms) - 1, 0):
            raise ComplexError("need one differential per consecutive pair of terms")
        for k, d in enumerate(self.diffs):
            a, b = self.terms[k], self.terms[k + 1]
            if len(d) != a.ngens or any(len(r) != b.ngens for r in d):
                raise ComplexError(f"differential in degree {self.lo + k} has the wrong shape")
            if not ModuleMap(a, b, d, check=False).is_well_defined():
                raise ComplexError(f"differential in degree {self.lo + k} ignores relations")
        for k in range(len(self.diffs) - 1):
            a, c = self.terms[k], self.terms[k + 2]
            if a.ngens and c.ngens:
                sq = matmul(self.ring, self.diffs[k], self.diffs[k + 1], inner=self.terms[k + 1].ngens)
                if not all(c.is_zero(r) for r in sq):
                    raise ComplexError(f"d^2 != 0 starting in degree {self.lo + k}")

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def term(self, i: int) -> PresentedModule:
        if self.lo <= i <= self.hi:
            return self.terms[i - self.lo]
        return zero_module(self.ring)

    def diff(self, i: int):
        """Matrix of ``d^i: C^i -> C^{i+1}``."""
        if self.lo <= i < self.hi:
            return self.diffs[i - self.lo]
        return zeros(self.ring, self.term(i).ngens, self.term(i + 1).ngens)

    def homology(self, i: int) -> HomologyData:
        if i not in self._hom_cache:
            M = self.term(i)
            prev = self.term(i - 1)
            incoming = self.diff(i - 1) if prev.ngens else []
            out = self.diff(i) if self.term(i + 1).ngens else None
            self._hom_cache[i] = homology(M, incoming, out, self.term(i + 1))
        return self._hom_cache[i]

    def homology_modules(self):
        return {i: self.homology(i).module for i in self.degrees()}

    def is_exact(self) -> bool:
        return all(self.homology(i).module.is_zero_module() for i in self.degrees())


def single(m: PresentedModule, degree: int = 0) -> BoundedComplex:
    return BoundedComplex(m.ring, degree, [m], [])


def two_term(f: ModuleMap, lo: int = 0) -> BoundedComplex:
    return BoundedComplex(f.ring, lo, [f.source, f.target], [f.matrix])


@dataclass
class ChainMap:
    source: BoundedComplex
    target: BoundedComplex
    maps: dict  # degree -> matrix

    def __post_init__(self):
        R = self.source.ring
        for i in range(min(self.source.lo, self.target.lo) - 1, max(self.source.hi, self.target.hi) + 1):
            a = matmul(R, self.source.diff(i), self.component(i + 1), inner=self.source.term(i + 1).ngens) \
                if self.source.term(i).ngens else []
            b = matmul(R, self.component(i), self.target.diff(i), inner=self.target.term(i).ngens) \
                if self.source.term(i).ngens else []
            tgt = self.target.term(i + 1)
            # an empty inner dimension yields rows of length 0; those are zero rows
            a = [r if len(r) == tgt.ngens else [R.zero] * tgt.ngens for r in a]
            b = [r if len(r) == tgt.ngens else [R.zero] * tgt.ngens for r in b]
            for ra, rb in zip(a, b):
                if not tgt.is_zero([R.sub(x, y) for x, y in zip(ra, rb)]):
                    raise ComplexError(f"chain map does not commute in degree {i}")

    def component(self, i: int):
        if i in self.maps:
            return self.maps[i]
        return zeros(self.source.ring, self.source.term(i).ngens, self.target.term(i).ngens)

    def on_homology(self, i: int) -> ModuleMap:
        hs, ht = self.source.homology(i), self.target.homology(i)
        if not hs.witnesses:
            return ModuleMap(hs.module, ht.module, [], check=False)
        if not ht.witnesses:
            return ModuleMap(hs.module, ht.module, [[] for _ in hs.witnesses], check=False)
        return hs.induced(self.component(i), ht)


def identity_chain_map(c: BoundedComplex) -> ChainMap:
    from .rings import identity

    return ChainMap(c, c, {i: identity(c.ring, c.term(i).ngens) for i in c.degrees()})


def shift(c: BoundedComplex, n: int) -> BoundedComplex:
    sign = -1 if n % 2 else 1
    diffs = [d if sign == 1 else _neg(c.ring, d) for d in c.diffs]
    return BoundedComplex(c.ring, c.lo - n, list(c.terms), diffs)


@dataclass
class Triangle:
    """``X -f-> Y -i-> cone(f) -p-> X[1]``."""

    f: ChainMap
    cone: BoundedComplex
    inclusion: dict
    projection: dict


def mapping_cone(f: ChainMap) -> Triangle:
    X, Y = f.source, f.target
    R = X.ring
    lo = min(Y.lo, X.lo - 1)
    hi = max(Y.hi, X.hi - 1)
    terms, diffs, inc, proj = [], [], {}, {}
    for i in range(lo, hi + 1):
        terms.append(direct_sum([Y.term(i), X.term(i + 1)]))
    for i in range(lo, hi):
        yi, xi1 = Y.term(i).ngens, X.term(i + 1).ngens
        yj, xj1 = Y.term(i + 1).ngens, X.term(i + 2).ngens
        D = zeros(R, yi + xi1, yj + xj1)
        dy, fx, dx = Y.diff(i), f.component(i + 1), X.diff(i + 1)
        for a in range(yi):
            for b in range(yj):
                D[a][b] = dy[a][b]
        for a in range(xi1):
            for b in range(yj):
                D[yi + a][b] = fx[a][b]
            for b in range(xj1):
                D[yi + a][yj + b] = R.neg(dx[a][b])
        diffs.append(D)
    for i in range(lo, hi + 1):
        yi, xi1 = Y.term(i).ngens, X.term(i + 1).ngens
        I = zeros(R, yi, yi + xi1)
        for a in range(yi):
            I[a][a] = R.one
        inc[i] = I
        P = zeros(R, yi + xi1, xi1)
        for a in range(xi1):
            P[yi + a][a] = R.one
        proj[i] = P
    cone = BoundedComplex(R, lo, terms, diffs)
    return Triangle(f, cone, inc, proj)


def homology_map(src: BoundedComplex, tgt: BoundedComplex, i: int, matrix, j: int | None = None) -> ModuleMap:
    """Map ``H^i(src) -> H^j(tgt)`` induced by a degreewise matrix."""
    j = i if j is None else j
    hs, ht = src.homology(i), tgt.homology(j)
    if not hs.witnesses:
        return ModuleMap(hs.module, ht.module, [], check=False)
    if not ht.witnesses:
        return ModuleMap(hs.module, ht.module, [[] for _ in hs.witnesses], check=False)
    return hs.induced(matrix, ht)


def long_exact_sequence(t: Triangle):
    """The homology sequence of a triangle as a list of maps, in order."""
    f, C = t.f, t.cone
    X, Y = f.source, f.target
    lo = min(X.lo, Y.lo, C.lo) - 1
    hi = max(X.hi, Y.hi, C.hi) + 1
    seq = []
    for i in range(lo, hi + 1):
        seq.append(("f", i, homology_map(X, Y, i, f.component(i))))
        seq.append(("inc", i, homology_map(Y, C, i, t.inclusion.get(i, zeros(X.ring, Y.term(i).ngens, C.term(i).ngens)))))
        seq.append(("proj", i, homology_map(C, X, i, t.projection.get(i, zeros(X.ring, C.term(i).ngens, X.term(i + 1).ngens)), i + 1)))
    return seq


def verify_les(t: Triangle) -> dict:
    """Check exactness at every spot of the long exact homology sequence."""
    seq = long_exact_sequence(t)
    spots = []
    for (na, ia, a), (nb, ib, b) in zip(seq, seq[1:]):
        spots.append({"at": f"{na}->{nb} deg {ib}", "exact": exact_at(a, b)})
    return {"exact": all(s["exact"] for s in spots), "spots": spots}


def is_quasi_iso(f: ChainMap) -> dict:
    C = mapping_cone(f).cone
    per = {i: C.homology(i).module.describe() for i in C.degrees()}
    return {"quasi_iso": C.is_exact(), "cone_homology": per}


def euler_characteristic(c: BoundedComplex, measure) -> int:
    return sum((-1) ** (i % 2) * measure(c.homology(i).module) for i in c.degrees())


# ---------------------------------------------------------------------------
# free bimodule complexes (Koszul/telescope shapes)


@dataclass
class FreeBimoduleComplex:
    """Free bimodule terms ``sum_k A e_k`` with ``e_k b = phi^{t_k}(b) e_k``.

    ``twists[d]`` lists the exponents t_k in degree ``lo + d``; ``diffs[d]`` is
    the matrix sending ``e_k`` to ``sum_l D[k][l] e_l``.  Entries must be of
    the form ``+-s^j`` so that the differential is a bimodule map.
    """

    ring: Ring
    lo: int
    twists: list
    diffs: list

    def __post_init__(self):
        R = self.ring
        for d, D in enumerate(self.diffs):
            ts, tt = self.twists[d], self.twists[d + 1]
            if len(D) != len(ts) or any(len(r) != len(tt) for r in D):
                raise ComplexError("bimodule differential has the wrong shape")
        # d^2 = 0 on free terms
        for d in range(len(self.diffs) - 1):
            sq = matmul(R, self.diffs[d], self.diffs[d + 1], inner=len(self.twists[d + 1]))
            if any(not R.is_zero(x) for r in sq for x in r):
                raise ComplexError("d^2 != 0 in bimodule complex")

    @property
    def hi(self) -> int:
        return self.lo + len(self.twists) - 1

    def check_bimodule(self, samples) -> bool:
        """``e_k b`` maps to ``d(e_k) b`` for sampled b: ``phi^{t_k}(b) D = D phi^{t_l}(b)``."""
        R = self.ring
        for d, D in enumerate(self.diffs):
            ts, tt = self.twists[d], self.twists[d + 1]
            for b in samples:
                for k, row in enumerate(D):
                    for l, x in enumerate(row):
                        if R.is_zero(x):
                            continue
                        lhs = R.mul(R.phi(b, ts[k]), x)
                        rhs = R.mul(x, R.phi(b, tt[l]))
                        if not R.eq(lhs, rhs):
                            return False
        return True

    def as_complex(self) -> BoundedComplex:
        from .modules import free_module

        return BoundedComplex(self.ring, self.lo, [free_module(self.ring, len(t)) for t in self.twists],
                              [list(map(list, D)) for D in self.diffs])


def _block_matrix(ring: Ring, D, g: int, transpose: bool = False):
    """Replace each entry x of D by the g x g block ``x I`` (optionally transposed layout)."""
    rows = len(D[0]) if transpose and D else len(D)
    cols = len(D) if transpose else (len(D[0]) if D else 0)
    out = zeros(ring, rows * g, cols * g)
    for a in range(len(D)):
        for b in range(len(D[a])):
            x = D[a][b]
            if ring.is_zero(x):
                continue
            r, c = (b, a) if transpose else (a, b)
            for k in range(g):
                out[r * g + k][c * g + k] = x
    return out


def tensor_with_module(c: FreeBimoduleComplex, m: PresentedModule) -> BoundedComplex:
    """``c (x)_A m`` as twisted copies ``A e_k (x) m = ^{phi^{-t_k}} m``.

    In twisted coordinates every block of the differential is right
    multiplication by the corresponding entry.
    """
    R = m.ring
    terms = [direct_sum([twist_module(m, -t) for t in ts]) if ts else zero_module(R) for ts in c.twists]
    diffs = [_block_matrix(R, D, m.ngens) for D in c.diffs]
    return BoundedComplex(R, c.lo, terms, diffs)


def hom_complex(c: FreeBimoduleComplex, m: PresentedModule) -> BoundedComplex:
    """``Hom_A(c, m)`` with ``Hom(A e_k, m) = ^{phi^{t_k}} m`` in degree ``-deg``.

    The differential is ``(d f) = -(-1)^{|f|} f o d_c`` (m sits in degree 0),
    i.e. the transposed matrix of ``d_c`` with the sign ``(-1)^{q+1}`` for
    maps out of degree q.
    """
    R = m.ring
    n = len(c.twists)
    # Hom degree -q for c-degree q; list from lowest Hom degree (= -hi)
    terms, diffs = [], []
    for idx in range(n - 1, -1, -1):
        ts = c.twists[idx]
        terms.append(direct_sum([twist_module(m, t) for t in ts]) if ts else zero_module(R))
    for idx in range(n - 1, 0, -1):
        q = c.lo + idx  # source c-degree of f
        D = c.diffs[idx - 1]  # c^{q-1} -> c^q
        B = _block_matrix(R, D, m.ngens, transpose=True)
        if (q + 1) % 2:
            B = _neg(R, B)
        diffs.append(B)
    return BoundedComplex(R, -c.hi, terms, diffs)


def direct_sum_complex(a: BoundedComplex, b: BoundedComplex) -> BoundedComplex:
    R = a.ring
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    terms = [direct_sum([a.term(i), b.term(i)]) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        diffs.append(block_diag(R, [(a.diff(i), a.term(i).ngens, a.term(i + 1).ngens),
                                    (b.diff(i), b.term(i).ngens, b.term(i + 1).ngens)]))
    return BoundedComplex(R, lo, terms, diffs)
