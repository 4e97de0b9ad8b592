"""Finitely presented left modules over the base rings.

A module with ``g`` generators is ``A^g / rowspace(R)``; elements are row
vectors of length ``g``.  A map ``M -> N`` is a ``g_M x g_N`` matrix ``F``
acting by ``v -> v F``.  Everything is decided through
:func:`~workbench.rings.diagonal_normal_form`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .rings import (
    Integers,
    Localized,
    PrimeField,
    Ring,
    RingError,
    SkewPoly,
    diagonal_normal_form,
    identity,
    matmul,
    scalar_matrix,
    stack,
    twist_matrix,
    zeros,
)


class ModuleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrix-level helpers


def left_kernel(ring: Ring, B, nrows: int, ncols: int):
    """Generators (rows) of ``{c : c B = 0}``."""
    if nrows == 0:
        return []
    if ncols == 0:
        return identity(ring, nrows)
    if isinstance(ring, PrimeField):
        K = linalg.left_nullspace(linalg.as_array(B, ring.p, ncols), ring.p)
        return K.tolist()
    F = diagonal_normal_form(ring, B, ncols)
    return [list(F.U[i]) for i in range(F.rank, nrows)]


def solve_left(ring: Ring, B, v, nrows: int):
    """Some ``c`` with ``c B = v`` or ``None``."""
    ncols = len(v)
    if nrows == 0:
        return [] if all(ring.is_zero(x) for x in v) else None
    if ncols == 0:
        return [ring.zero] * nrows
    if isinstance(ring, PrimeField):
        x = linalg.solve_left(linalg.as_array(B, ring.p, ncols), np.array(v, dtype=np.int64), ring.p)
        return None if x is None else x.tolist()
    F = _cached_form(ring, B, ncols)
    w = matmul(ring, [list(v)], F.V)[0]
    y = []
    for j in range(ncols):
        if j < F.rank:
            q, r = ring.divmod(w[j], F.D[j][j], "left")
            if not ring.is_zero(r):
                return None
            y.append(q)
        elif not ring.is_zero(w[j]):
            return None
    y += [ring.zero] * (nrows - len(y))
    return matmul(ring, [y], F.U)[0]


def _cached_form(ring, B, ncols):
    return diagonal_normal_form(ring, B, ncols)


def _sort_key(ring: Ring, d):
    if isinstance(ring, SkewPoly):
        return (len(d), d)
    return (ring.size(d), str(d))


# ---------------------------------------------------------------------------
# modules


class PresentedModule:
    """``A^g / rowspace(relations)`` for a base ring or its localisation.

    Args:
        ring: The ring A.
        ngens: Number of generators g.
        relations: List of length-g rows.
    """

    def __init__(self, ring: Ring, ngens: int, relations=()):
        rels = [list(r) for r in relations]
        for r in rels:
            if len(r) != ngens:
                raise ModuleError(f"relation of length {len(r)} for {ngens} generators")
        self.ring = ring
        self.ngens = ngens
        self.relations = [r for r in rels if not all(ring.is_zero(x) for x in r)]

    # ---- normal form ----

    @property
    def base_ring(self) -> Ring:
        return self.ring.base if self.ring.localized else self.ring

    @cached_property
    def base_relations(self):
        """Relations over the base ring (rows rescaled by units of the localisation)."""
        if not self.ring.localized:
            return self.relations
        L = self.ring
        out = []
        for row in self.relations:
            k = max(L.reduce(x)[1] for x in row)
            out.append([L.clear(x, k) for x in row])
        return out

    @cached_property
    def form(self):
        return diagonal_normal_form(self.base_ring, self.base_relations, self.ngens)

    @cached_property
    def _loc_torsion(self):
        base = PresentedModule(self.base_ring, self.ngens, self.base_relations)
        return base, torsion_submodule_s(base)[1].matrix

    def factors(self):
        """Diagonal entries of the relation form (including units), then free rank."""
        F = self.form
        return [F.D[i][i] for i in range(F.rank)], self.ngens - F.rank

    @cached_property
    def invariants(self):
        """Canonical isomorphism invariants ``(free_rank, torsion_factors)``."""
        R = self.base_ring
        diag, free = self.factors()
        out = []
        for d in diag:
            if self.ring.localized:
                _, d = R.s_saturation(d)
            if R.is_unit(d):
                continue
            _, d = R.normalize(d)
            if isinstance(R, SkewPoly):
                k, core = R.strip_s(d)
                if R.is_unit(core):
                    d = R.monomial(1, k)
            out.append(d)
        return free, tuple(sorted(out, key=lambda d: _sort_key(R, d)))

    def isomorphic(self, other: "PresentedModule") -> bool:
        return self.base_ring == other.base_ring and self.invariants == other.invariants

    def is_zero_module(self) -> bool:
        free, tors = self.invariants
        return free == 0 and not tors

    def is_finite(self) -> bool:
        return self.invariants[0] == 0

    def order(self) -> int:
        """Cardinality of a finite module over Z."""
        if not isinstance(self.base_ring, Integers) or not self.is_finite():
            raise ModuleError("order is only defined for finite abelian groups")
        n = 1
        for d in self.invariants[1]:
            n *= abs(d)
        return n

    def dimension(self) -> int:
        """Dimension over the prime field (torsion skew modules, vector spaces)."""
        R = self.base_ring
        free, tors = self.invariants
        if isinstance(R, PrimeField):
            return free
        if isinstance(R, SkewPoly) and free == 0 and not self.ring.localized:
            return sum(len(d) - 1 for d in tors) * R.F.m
        raise ModuleError("dimension is only defined for finite-dimensional modules")

    def describe(self) -> str:
        R = self.base_ring
        free, tors = self.invariants
        if isinstance(R, Integers):
            name = "Z[1/s]" if self.ring.localized else "Z"
            parts = [f"Z/{d}" for d in tors]
        elif isinstance(R, PrimeField):
            return f"F{R.p}^{free}" if free else "0"
        else:
            name = "A_s" if self.ring.localized else "A"
            parts = [f"A/A({R.fmt(d)})" for d in tors]
        if free:
            parts.append(name if free == 1 else f"{name}^{free}")
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        free, tors = self.invariants
        R = self.base_ring
        return {"free_rank": free, "torsion": [R.to_json(d) for d in tors],
                "description": self.describe()}

    # ---- elements ----

    def zero_vector(self):
        return [self.ring.zero] * self.ngens

    def basis_vector(self, i: int):
        v = self.zero_vector()
        v[i] = self.ring.one
        return v

    def _to_base(self, v):
        if not self.ring.localized:
            return list(v)
        L = self.ring
        k = max((L.reduce(x)[1] for x in v), default=0)
        return [L.clear(x, k) for x in v]

    def is_zero(self, v) -> bool:
        if self.ring.localized:
            base, T = self._loc_torsion
            w = self._to_base(v)
            return solve_left(base.ring, stack(base.relations, T), w,
                              len(base.relations) + len(T)) is not None
        return self.canonical(v) == self.canonical(self.zero_vector())

    def eq(self, u, v) -> bool:
        return self.is_zero([self.ring.sub(a, b) for a, b in zip(u, v)])

    def canonical(self, v):
        """Normal form of the class of v in the diagonal basis."""
        R = self.ring
        F = self.form
        w = matmul(R, [list(v)], F.V)[0] if self.ngens else []
        out = []
        for j, x in enumerate(w):
            if j < F.rank:
                _, x = R.divmod(x, F.D[j][j], "left")
            if isinstance(R, PrimeField):
                x %= R.p
            out.append(x)
        return tuple(out)

    def solve(self, v):
        """Coefficients c with ``c R = v`` (so ``v`` is zero), or None."""
        return solve_left(self.ring, self.relations, v, len(self.relations))

    def contains(self, gens, v) -> bool:
        """Is ``v`` in the submodule generated by the rows ``gens``?"""
        B = stack(self.relations, gens)
        return solve_left(self.ring, B, v, len(B)) is not None

    def submodule_contains(self, big, small) -> bool:
        return all(self.contains(big, v) for v in small)

    def same_submodule(self, a, b) -> bool:
        return self.submodule_contains(a, b) and self.submodule_contains(b, a)

    def __repr__(self) -> str:
        return f"PresentedModule({self.describe()})"


def free_module(ring: Ring, n: int) -> PresentedModule:
    return PresentedModule(ring, n, [])


def cyclic_module(ring: Ring, d) -> PresentedModule:
    """``A / A d``."""
    return PresentedModule(ring, 1, [[d]])


def diagonal_module(ring: Ring, diag, free: int = 0) -> PresentedModule:
    n = len(diag) + free
    rels = []
    for i, d in enumerate(diag):
        r = [ring.zero] * n
        r[i] = d
        rels.append(r)
    return PresentedModule(ring, n, rels)


def abelian_group(*orders: int, free: int = 0, s: int = 2) -> PresentedModule:
    """``Z/o1 + ... + Z^free`` with designated element s."""
    return diagonal_module(Integers(s), list(orders), free)


def direct_sum(mods) -> PresentedModule:
    mods = list(mods)
    if not mods:
        raise ModuleError("empty direct sum needs a ring")
    ring = mods[0].ring
    n = sum(m.ngens for m in mods)
    rels = []
    off = 0
    for m in mods:
        for r in m.relations:
            row = [ring.zero] * n
            row[off:off + m.ngens] = r
            rels.append(row)
        off += m.ngens
    return PresentedModule(ring, n, rels)


def zero_module(ring: Ring) -> PresentedModule:
    return PresentedModule(ring, 0, [])


# ---------------------------------------------------------------------------
# maps


class ModuleMap:
    """A left-linear map given by a matrix acting on row vectors from the right."""

    def __init__(self, source: PresentedModule, target: PresentedModule, matrix, check: bool = True):
        if len(matrix) != source.ngens or any(len(r) != target.ngens for r in matrix):
            raise ModuleError("map matrix has the wrong shape")
        self.source, self.target = source, target
        self.matrix = [list(r) for r in matrix]
        if check and not self.is_well_defined():
            raise ModuleError("matrix does not respect the relations")

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def apply(self, v):
        if not self.source.ngens:
            return self.target.zero_vector()
        return matmul(self.ring, [list(v)], self.matrix)[0] if self.target.ngens else []

    def is_well_defined(self) -> bool:
        return all(self.target.is_zero(self.apply(r)) for r in self.source.relations)

    def then(self, other: "ModuleMap") -> "ModuleMap":
        """``other o self``."""
        if self.source.ngens and other.target.ngens:
            M = matmul(self.ring, self.matrix, other.matrix, inner=self.target.ngens)
        else:
            M = zeros(self.ring, self.source.ngens, other.target.ngens)
        return ModuleMap(self.source, other.target, M, check=False)

    def is_zero(self) -> bool:
        return all(self.target.is_zero(r) for r in self.matrix)

    def equals(self, other: "ModuleMap") -> bool:
        return all(self.target.eq(a, b) for a, b in zip(self.matrix, other.matrix))

    def kernel(self):
        """``(K, inclusion)``."""
        R, S, T = self.ring, self.source, self.target
        B = stack(self.matrix, [[R.neg(x) for x in r] for r in T.relations])
        L = left_kernel(R, B, len(B), T.ngens)
        gens = [r[: S.ngens] for r in L]
        return submodule(S, gens)

    def image_generators(self):
        return self.matrix

    def cokernel(self):
        """``(C, projection)``."""
        return quotient(self.target, self.matrix)

    def is_injective(self) -> bool:
        return self.kernel()[0].is_zero_module()

    def is_surjective(self) -> bool:
        return self.cokernel()[0].is_zero_module()

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()


def identity_map(m: PresentedModule) -> ModuleMap:
    return ModuleMap(m, m, identity(m.ring, m.ngens), check=False)


def zero_map(a: PresentedModule, b: PresentedModule) -> ModuleMap:
    return ModuleMap(a, b, zeros(a.ring, a.ngens, b.ngens), check=False)


def simplify(ring: Ring, ngens: int, relations, embed):
    """Diagonalise a presentation and drop generators killed by units.

    ``embed`` is a ``ngens x n`` matrix expressing the generators in some
    ambient coordinates.  Returns ``(module, new_embed, to_new)`` where
    ``to_new`` (``ngens x k``) rewrites old coordinates in the new generators.
    """
    F = diagonal_normal_form(ring, relations, ngens)
    keep, diag = [], []
    for j in range(ngens):
        if j < F.rank:
            d = F.D[j][j]
            if ring.is_unit(d):
                continue
            keep.append(j)
            diag.append(d)
        else:
            keep.append(j)
    k = len(keep)
    rels = []
    for i, d in enumerate(diag):
        r = [ring.zero] * k
        r[i] = d
        rels.append(r)
    mod = PresentedModule(ring, k, rels)
    new_gens = [F.Vinv[j] for j in keep]
    n_amb = len(embed[0]) if embed else 0
    new_embed = matmul(ring, new_gens, embed, inner=ngens) if new_gens and ngens else \
        zeros(ring, k, n_amb)
    to_new = [[F.V[i][j] for j in keep] for i in range(ngens)]
    return mod, new_embed, to_new


def submodule(m: PresentedModule, gens):
    """The submodule generated by the rows ``gens`` with its inclusion map."""
    R = m.ring
    gens = [list(g) for g in gens]
    k = len(gens)
    if k == 0:
        z = zero_module(R)
        return z, ModuleMap(z, m, [], check=False)
    B = stack(gens, [[R.neg(x) for x in r] for r in m.relations])
    L = left_kernel(R, B, len(B), m.ngens)
    rels = [r[:k] for r in L]
    mod, emb, _ = simplify(R, k, rels, gens)
    return mod, ModuleMap(mod, m, emb, check=False)


def quotient(m: PresentedModule, gens):
    """``m / <gens>`` with its projection."""
    R = m.ring
    rels = stack(m.relations, gens)
    mod, _, to_new = simplify(R, m.ngens, rels, identity(R, m.ngens))
    return mod, ModuleMap(m, mod, to_new, check=False)


@dataclass
class HomologyData:
    """Homology ``ker g / im f`` at a module together with cocycle witnesses."""

    module: PresentedModule
    witnesses: list  # rows in the ambient coordinates, one per generator
    ambient: PresentedModule
    boundaries: list  # rows generating im f

    def class_of(self, v):
        """Coordinates of the class of the cocycle ``v`` in ``module``."""
        R = self.ambient.ring
        B = stack(self.witnesses, self.ambient.relations, self.boundaries)
        c = solve_left(R, B, v, len(B))
        if c is None:
            raise ModuleError("vector is not a cocycle representative")
        return c[: len(self.witnesses)]

    def induced(self, f_matrix, other: "HomologyData") -> ModuleMap:
        """The map on homology induced by a matrix between ambient modules."""
        R = self.ambient.ring
        rows = []
        for w in self.witnesses:
            img = matmul(R, [w], f_matrix)[0] if other.ambient.ngens else []
            rows.append(other.class_of(img) if other.ambient.ngens else [])
        return ModuleMap(self.module, other.module, rows, check=False)


def homology(middle: PresentedModule, incoming, outgoing, target: PresentedModule | None) -> HomologyData:
    """Homology at ``middle`` of ``prev --incoming--> middle --outgoing--> target``.

    ``incoming`` is a list of rows in middle coordinates (may be empty);
    ``outgoing`` a matrix or None (zero map).
    """
    R = middle.ring
    if outgoing is None or target is None or target.ngens == 0 or middle.ngens == 0:
        K = identity(R, middle.ngens)
    else:
        B = stack(outgoing, [[R.neg(x) for x in r] for r in target.relations])
        K = [r[: middle.ngens] for r in left_kernel(R, B, len(B), target.ngens)]
    incoming = [list(r) for r in incoming]
    k = len(K)
    if k == 0:
        return HomologyData(zero_module(R), [], middle, incoming)
    neg = lambda rows: [[R.neg(x) for x in r] for r in rows]  # noqa: E731
    B = stack(K, neg(middle.relations), neg(incoming))
    L = left_kernel(R, B, len(B), middle.ngens)
    rels = [r[:k] for r in L]
    mod, emb, _ = simplify(R, k, rels, K)
    return HomologyData(mod, emb, middle, incoming)


def exact_at(alpha: ModuleMap, beta: ModuleMap) -> bool:
    """Is ``A -alpha-> B -beta-> C`` exact at B?"""
    if not alpha.then(beta).is_zero():
        return False
    ker, inc = beta.kernel()
    return alpha.target.submodule_contains(alpha.matrix, inc.matrix)


# ---------------------------------------------------------------------------
# twists, torsion, localisation, completion


def twist_module(m: PresentedModule, i: int) -> PresentedModule:
    """The module with action ``a * v = phi^i(a) v``.

    In the coordinates ``w = phi^{-i}(v)`` the relations become ``phi^{-i}(R)``.
    """
    if i == 0:
        return m
    return PresentedModule(m.ring, m.ngens, twist_matrix(m.ring, m.relations, -i))


def s_power_map(m: PresentedModule, k: int, twist: int = 0) -> ModuleMap:
    """``v -> s^k v`` from ``^{phi^twist}m`` to ``^{phi^(twist-k)}m`` (right multiplication by s^k)."""
    R = m.ring
    src, tgt = twist_module(m, twist), twist_module(m, twist - k)
    return ModuleMap(src, tgt, scalar_matrix(R, m.ngens, R.s_power(k)), check=False)


def s_power_kernel(m: PresentedModule, k: int):
    """``{v : s^k v = 0}`` with its inclusion."""
    return s_power_map(m, k).kernel()


def torsion_submodule_s(m: PresentedModule):
    """The s-power torsion submodule ``{v : s^N v = 0 for some N}``.

    Returns ``(sub, inclusion, N)`` with N the stabilising exponent.
    """
    if m.ring.localized:
        raise ModuleError("torsion is computed over the non-localised ring")
    N = 1
    sub, inc = s_power_kernel(m, 1)
    while True:
        nxt, nxt_inc = s_power_kernel(m, N + 1)
        if m.submodule_contains(inc.matrix, nxt_inc.matrix):
            return sub, inc, N if not sub.is_zero_module() else 0
        sub, inc, N = nxt, nxt_inc, N + 1


def localize_module(m: PresentedModule):
    """``m_s``: the same generators and relations read over the localised ring."""
    if m.ring.localized:
        raise ModuleError("module is already localised")
    L = Localized(m.ring)
    rels = [[(x, 0) for x in r] for r in m.relations]
    ms = PresentedModule(L, m.ngens, rels)
    return ms


def localization_kernel_is_torsion(m: PresentedModule) -> bool:
    """Check that ``ker(m -> m_s)`` is exactly the s-torsion submodule."""
    ms = localize_module(m)
    tors, inc, _ = torsion_submodule_s(m)
    # torsion dies
    if not all(ms.is_zero([(x, 0) for x in g]) for g in inc.matrix):
        return False
    # nothing else dies: the quotient m/torsion embeds (s acts injectively there)
    q, proj = quotient(m, inc.matrix)
    return s_power_map(q, 1).is_injective()


def adic_quotient(m: PresentedModule, n: int):
    """``m / s^n m`` with its projection from m."""
    if n < 1:
        raise ModuleError("precision must be >= 1")
    if m.ring.localized:
        raise ModuleError("adic quotients are taken over the non-localised ring")
    R = m.ring
    return quotient(m, scalar_matrix(R, m.ngens, R.s_power(n)))


def adic_projection(m: PresentedModule, n: int) -> ModuleMap:
    """The projection ``m/s^{n+1}m -> m/s^n m`` in simplified coordinates."""
    top, ptop = adic_quotient(m, n + 1)
    low, plow = adic_quotient(m, n)
    # generators of top are images of rows of ptop's section: lift via embed
    rows = []
    lift = _section(ptop)
    for r in lift:
        rows.append(plow.apply(r))
    return ModuleMap(top, low, rows, check=False)


def _section(proj: ModuleMap):
    """Preimages in the source of the target's generators (for simplified quotients)."""
    R = proj.ring
    S, T = proj.source, proj.target
    out = []
    for i in range(T.ngens):
        e = T.basis_vector(i)
        c = solve_left(R, stack(proj.matrix, T.relations), e, S.ngens + len(T.relations))
        if c is None:
            raise ModuleError("projection is not surjective")
        out.append(c[: S.ngens])
    return out


def completion_tower(m: PresentedModule, max_level: int):
    from .towers import TowerCertificate

    if max_level < 2:
        raise ModuleError("max level must be >= 2")
    levels = [adic_quotient(m, n)[0] for n in range(1, max_level + 1)]
    trans = [adic_projection(m, n) for n in range(1, max_level)]
    # adic_projection rebuilds the same simplified modules, so identify endpoints
    trans = [ModuleMap(levels[i + 1], levels[i], t.matrix, check=True) for i, t in enumerate(trans)]
    return TowerCertificate.build("inverse", levels, trans, labels=list(range(1, max_level + 1)))


# ---------------------------------------------------------------------------
# Hom over the centre


def prime_field_structure(m: PresentedModule):
    """F_p-vector-space model of a torsion module over a skew polynomial ring.

    Returns ``(dim, basis, act)`` where ``basis`` lists ``(j, c, t)`` meaning
    ``c x^t`` in summand j of the simplified module, and ``act(a)`` gives the
    F_p matrix (row-vector convention) of left multiplication by ``a``.  Also
    returns ``coords``: A-coordinates -> F_p vector, and ``lift``.
    """
    R = m.ring
    if not isinstance(R, SkewPoly) or not m.is_finite():
        raise ModuleError("prime-field model needs a torsion skew-polynomial module")
    F = R.F
    simp, emb, to_new = simplify(R, m.ngens, m.relations, identity(R, m.ngens))
    diag = [simp.relations[i][i] for i in range(simp.ngens)]
    basis = []
    for j, d in enumerate(diag):
        for t in range(len(d) - 1):
            for u in range(F.m):
                basis.append((j, F.p ** u, t))
    index = {b: i for i, b in enumerate(basis)}
    dim = len(basis)

    def vec_of(w):
        """F_p coordinates of a vector in simplified coordinates."""
        out = [0] * dim
        for j, a in enumerate(w):
            _, r = R.divmod(a, diag[j], "left")
            for t, c in enumerate(r):
                for u, dgt in enumerate(F._digits(c)):
                    if dgt:
                        out[index[(j, F.p ** u, t)]] = dgt
        return out

    def coords(v):
        w = matmul(R, [list(v)], to_new)[0] if m.ngens and simp.ngens else []
        return vec_of(w)

    def elem_of(b):
        j, c, t = b
        w = [R.zero] * simp.ngens
        w[j] = R.monomial(c, t)
        return w

    def act(a):
        rows = []
        for b in basis:
            w = elem_of(b)
            rows.append(vec_of([R.mul(a, x) for x in w]))
        return rows

    def lift(vec):
        """A-coordinates (original generators) of an F_p vector."""
        w = [R.zero] * simp.ngens
        for i, c in enumerate(vec):
            if c % F.p:
                j, cc, t = basis[i]
                w[j] = R.add(w[j], R.monomial(F.mul(cc, c % F.p), t))
        return matmul(R, [w], emb)[0] if simp.ngens else [R.zero] * m.ngens

    return dim, act, coords, lift


def hom_module(m: PresentedModule, n: PresentedModule):
    """``Hom_A(m, n)`` as a module over the centre.

    Over Z the result is an abelian group; over a skew polynomial ring it is
    an F_p-vector space (requires a torsion argument).  Returns
    ``(H, maps)`` where ``maps[i]`` is the matrix of the map for generator i.
    """
    R = m.ring
    if isinstance(R, Integers):
        return _hom_integers(m, n)
    if isinstance(R, SkewPoly):
        return _hom_skew(m, n)
    raise ModuleError(f"Hom is not supported over {R}")


def _hom_integers(m: PresentedModule, n: PresentedModule):
    R = m.ring
    g, h = m.ngens, n.ngens
    rm, rn = len(m.relations), len(n.relations)
    nv = g * h + rm * rn
    if g == 0 or h == 0:
        return zero_module(R), []
    # variables F[i][j] (index i*h+j) and Y[a][b]; equation R_M F - Y R_N = 0
    neqs = rm * h
    B = [[0] * max(neqs, 1) for _ in range(nv)]
    for a in range(rm):
        for j in range(h):
            col = a * h + j
            for i in range(g):
                B[i * h + j][col] += m.relations[a][i]
            for b in range(rn):
                B[g * h + a * rn + b][col] -= n.relations[b][j]
    sols = left_kernel(R, B, nv, max(neqs, 1)) if neqs else identity(R, nv)
    gens = [r[: g * h] for r in sols]
    # maps whose rows all lie in rowspace(R_N) are zero
    trivial = []
    for i in range(g):
        for r in n.relations:
            v = [0] * (g * h)
            v[i * h:(i + 1) * h] = r
            trivial.append(v)
    amb = PresentedModule(R, g * h, trivial)
    H, inc = submodule(amb, gens)
    maps = [[row[i * h:(i + 1) * h] for i in range(g)] for row in inc.matrix]
    return H, maps


def _hom_skew(m: PresentedModule, n: PresentedModule):
    R = m.ring
    P = PrimeField(R.F.p)
    mt, nt = m.is_finite(), n.is_finite()
    if not mt and not nt:
        raise ModuleError("Hom between modules with free parts is infinite-dimensional")
    if not nt:
        # torsion source lands in the torsion of the target
        tors, inc, _ = torsion_submodule_s(n)
        H, maps = _hom_skew(m, tors)
        return H, [matmul(R, f, inc.matrix) if f else f for f in maps]
    dn, act_n, coords_n, lift_n = prime_field_structure(n)
    g = m.ngens
    if dn == 0 or g == 0:
        return zero_module(P), []
    # unknowns n_1..n_g in F_p^dn subject to sum_i n_i act(R[a][i]) = 0
    nv = g * dn
    ncon = max(len(m.relations) * dn, 1)
    rows = [[0] * ncon for _ in range(nv)]
    for a, rel in enumerate(m.relations):
        for i, r in enumerate(rel):
            if R.is_zero(r):
                continue
            Ar = act_n(r)
            for k in range(dn):
                for j in range(dn):
                    rows[i * dn + k][a * dn + j] += Ar[k][j]
    if m.relations:
        sol = linalg.left_nullspace(np.array(rows, dtype=np.int64) % P.p, P.p).tolist()
    else:
        sol = np.eye(nv, dtype=np.int64).tolist()
    H = free_module(P, len(sol))
    maps = [[lift_n(x[i * dn:(i + 1) * dn]) for i in range(g)] for x in sol]
    return H, maps


def check_ring_kind(m: PresentedModule, *kinds) -> None:
    if not isinstance(m.base_ring, kinds):
        raise RingError(f"operation not supported over {m.ring}")
