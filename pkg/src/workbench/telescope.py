"""Koszul and telescope models over a ring with a normal regular element s.

``Tel'_n`` has degree-0 basis ``e_0..e_n`` and degree-1 basis
``e_0..e_{n+1}`` with ``d e_i = e_i - s e_{i+1}``; the basis element
``e_i`` satisfies ``e_i b = phi^i(b) e_i``.  ``Tel_n`` is the cone of
``A[-1] -> Tel'_n, 1 -> e_0`` and carries an extra degree-0 generator
``e_{-1}`` with ``d e_{-1} = e_0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .complexes import (
    BoundedComplex,
    ChainMap,
    FreeBimoduleComplex,
    hom_complex,
    mapping_cone,
    tensor_with_module,
)
from .modules import (
    ModuleError,
    ModuleMap,
    PresentedModule,
    adic_quotient,
    direct_sum,
    free_module,
    localize_module,
    prime_field_structure,
    s_power_kernel,
    s_power_map,
    simplify,
    torsion_submodule_s,
    twist_module,
    zero_module,
)
from .rings import (
    Integers,
    Localized,
    PrimeField,
    Ring,
    SkewPoly,
    identity,
    matmul,
    scalar_matrix,
    twist_matrix,
    zeros,
)
from .towers import TowerCertificate


def _sample_elements(ring: Ring, count: int = 6, seed: int = 7):
    rng = random.Random(seed)
    return [ring.random_element(rng) for _ in range(count)] + [ring.s]


# ---------------------------------------------------------------------------
# telescope complexes


def tel_prime(ring: Ring, n: int) -> FreeBimoduleComplex:
    D = zeros(ring, n + 1, n + 2)
    for i in range(n + 1):
        D[i][i] = ring.one
        D[i][i + 1] = ring.neg(ring.s)
    return FreeBimoduleComplex(ring, 0, [list(range(n + 1)), list(range(n + 2))], [D])


def tel(ring: Ring, n: int) -> FreeBimoduleComplex:
    """Degree-0 basis ``e_{-1}, e_0..e_n`` (in that order); degree 1 ``e_0..e_{n+1}``."""
    D = zeros(ring, n + 2, n + 2)
    D[0][0] = ring.one
    for i in range(n + 1):
        D[i + 1][i] = ring.one
        D[i + 1][i + 1] = ring.neg(ring.s)
    return FreeBimoduleComplex(ring, 0, [[0] + list(range(n + 1)), list(range(n + 2))], [D])


def tel_inclusion(n: int, ring: Ring):
    """Matrices of ``Tel_n -> Tel_{n+1}`` (``e_i -> e_i``) in degrees 0 and 1."""
    I0 = zeros(ring, n + 2, n + 3)
    for i in range(n + 2):
        I0[i][i] = ring.one
    I1 = zeros(ring, n + 2, n + 3)
    for i in range(n + 2):
        I1[i][i] = ring.one
    return {0: I0, 1: I1}


@dataclass
class TelescopeTruncation:
    ring: Ring
    n: int
    tel_prime: FreeBimoduleComplex
    tel: FreeBimoduleComplex
    checks: dict = field(default_factory=dict)

    def beta(self, i: int):
        """``beta(e_i) = s^{-i}`` in the localisation."""
        return (self.ring.one, i)


def telescope_models(ring: Ring, n: int) -> TelescopeTruncation:
    """Build ``Tel'_n`` and ``Tel_n`` and verify their defining properties."""
    if n < 0:
        raise ModuleError("telescope level must be >= 0")
    tp, t = tel_prime(ring, n), tel(ring, n)
    samples = _sample_elements(ring)
    C = tp.as_complex()
    h0, h1 = C.homology(0).module, C.homology(1).module
    checks = {
        "bimodule_differential": tp.check_bimodule(samples) and t.check_bimodule(samples),
        "tel_prime_H0_zero": h0.is_zero_module(),
        "tel_prime_H1_free_rank_1": h1.invariants == (1, ()),
    }
    # beta: H^1(Tel'_n) -> A_s sends the generator to a unit multiple of s^{-(n+1)}
    L = Localized(ring)
    gens = C.homology(1).witnesses
    if len(gens) == 1:
        val = L.sum(L.mul((c, 0), (ring.one, i)) for i, c in enumerate(gens[0]))
        scaled = L.mul(val, (ring.s_power(n + 1), 0))
        checks["beta_generator_is_s_power"] = scaled[1] == 0 and ring.is_unit(scaled[0])
    else:
        checks["beta_generator_is_s_power"] = False
    # beta o theta = localisation map: theta(1) = e_0 and beta(e_0) = 1
    checks["beta_theta_is_localization"] = L.eq((ring.one, 0), L.mul((ring.one, 0), (ring.one, 0)))
    # beta o d = 0: beta(e_i) - s beta(e_{i+1}) = 0
    checks["beta_is_chain_map"] = all(
        L.is_zero(L.sub((ring.one, i), L.mul((ring.s, 0), (ring.one, i + 1)))) for i in range(n + 1))
    TT = t.as_complex()
    checks["tel_H0_zero"] = TT.homology(0).module.is_zero_module()
    checks["tel_H1_is_A_mod_s^(n+1)"] = TT.homology(1).module.isomorphic(
        PresentedModule(ring, 1, [[ring.s_power(n + 1)]]))
    return TelescopeTruncation(ring, n, tp, t, checks)


def beta_colimit_compatible(ring: Ring, n: int) -> bool:
    """The generator of ``H^1(Tel'_k)`` maps under inclusion to s times the next one,
    and beta is compatible with the inclusions, for all k < n."""
    L = Localized(ring)
    for k in range(n):
        a, b = tel_prime(ring, k).as_complex(), tel_prime(ring, k + 1).as_complex()
        wa = a.homology(1).witnesses[0]
        img = list(wa) + [ring.zero]  # e_i -> e_i
        beta_a = L.sum(L.mul((c, 0), (ring.one, i)) for i, c in enumerate(wa))
        beta_img = L.sum(L.mul((c, 0), (ring.one, i)) for i, c in enumerate(img))
        if not L.eq(beta_a, beta_img):
            return False
        cls = b.homology(1).class_of(img)
        # class of the image is s (up to a unit) times the generator
        j, core = ring.s_saturation(cls[0]) if not ring.is_zero(cls[0]) else (None, None)
        if j != 1 or not ring.is_unit(core):
            return False
    return True


# ---------------------------------------------------------------------------
# Koszul model K(A;s) (x) m = (m -> m_s)


def koszul_cokernel_tower(m: PresentedModule, max_level: int) -> TowerCertificate:
    """Directed tower ``coker(s^k: m -> ^{phi^{-k}} m)`` with transitions ``s``.

    Its colimit is ``m_s / image(m)``, the first cohomology of ``m -> m_s``.
    """
    levels, projs = [], []
    for k in range(1, max_level + 1):
        C, p = s_power_map(m, k).cokernel()
        levels.append(C)
        projs.append(p)
    trans = []
    R = m.ring
    for k in range(max_level - 1):
        sec = _section_rows(projs[k])
        rows = [projs[k + 1].apply(matmul(R, [r], scalar_matrix(R, m.ngens, R.s))[0]) for r in sec]
        trans.append(ModuleMap(levels[k], levels[k + 1], rows, check=True))
    return TowerCertificate.build("directed", levels, trans, labels=list(range(1, max_level + 1)))


def _section_rows(proj: ModuleMap):
    from .modules import _section

    return _section(proj)


def koszul_model(m: PresentedModule, max_level: int = 4) -> dict:
    """Cohomology of ``m -> m_s``: H^0 is the s-torsion, H^1 a directed tower."""
    tors, inc, N = torsion_submodule_s(m)
    ms = localize_module(m)
    from .modules import localization_kernel_is_torsion

    return {
        "H0": tors,
        "H0_inclusion": inc,
        "torsion_exponent": N,
        "localized": ms,
        "kernel_is_torsion": localization_kernel_is_torsion(m),
        "H1_tower": koszul_cokernel_tower(m, max_level),
    }


def koszul_power_complex(m: PresentedModule, k: int) -> BoundedComplex:
    """``m -s^k-> ^{phi^{-k}} m`` in degrees 0, 1."""
    f = s_power_map(m, k)
    return BoundedComplex(m.ring, 0, [f.source, f.target], [f.matrix])


# ---------------------------------------------------------------------------
# RGamma via Tel_n (x) m


def tel_tensor(m: PresentedModule, n: int) -> BoundedComplex:
    return tensor_with_module(tel(m.ring, n), m)


def tel_tensor_inclusion(m: PresentedModule, n: int, a: BoundedComplex, b: BoundedComplex) -> ChainMap:
    """``Tel_n (x) m -> Tel_{n+1} (x) m``."""
    R, g = m.ring, m.ngens
    inc = tel_inclusion(n, R)
    maps = {}
    for d in (0, 1):
        I = inc[d]
        M = zeros(R, len(I) * g, len(I[0]) * g)
        for i in range(len(I)):
            for j in range(len(I[0])):
                if not R.is_zero(I[i][j]):
                    for t in range(g):
                        M[i * g + t][j * g + t] = I[i][j]
        maps[d] = M
    return ChainMap(a, b, maps)


def rgamma_model(m: PresentedModule, n: int, max_level: int | None = None) -> dict:
    """Homology of ``Tel_k (x) m`` for k <= n with directed towers over k."""
    if max_level is None:
        # enough levels for torsion classes to die under the s-transitions
        max_level = n + torsion_submodule_s(m)[2] + 2
    top = max(n, max_level)
    cx = [tel_tensor(m, k) for k in range(top + 1)]
    incs = [tel_tensor_inclusion(m, k, cx[k], cx[k + 1]) for k in range(top)]
    towers = {}
    for i in (0, 1):
        levels = [c.homology(i).module for c in cx]
        trans = [f.on_homology(i) for f in incs]
        towers[i] = TowerCertificate.build("directed", levels, trans, labels=list(range(top + 1)))
    H = {i: cx[n].homology(i).module for i in (0, 1)}
    K = koszul_power_complex(m, n + 1)
    koszul = {i: K.homology(i).module for i in (0, 1)}
    return {
        "complex": cx[n],
        "H": H,
        "koszul_power_H": koszul,
        "agrees_with_koszul_power": all(H[i].isomorphic(koszul[i]) for i in (0, 1)),
        "H0_expected": s_power_kernel(m, n + 1)[0],
        "H1_expected": adic_quotient(m, n + 1)[0],
        "towers": towers,
    }


# ---------------------------------------------------------------------------
# LLambda via Hom(Tel_n, m)


def tel_hom(m: PresentedModule, n: int) -> BoundedComplex:
    return hom_complex(tel(m.ring, n), m)


def tel_hom_restriction(m: PresentedModule, n: int, big: BoundedComplex, small: BoundedComplex) -> ChainMap:
    """``Hom(Tel_{n+1}, m) -> Hom(Tel_n, m)`` restricting along the inclusion."""
    R, g = m.ring, m.ngens
    inc = tel_inclusion(n, R)
    maps = {}
    for d, hdeg in ((1, -1), (0, 0)):
        I = inc[d]  # rows: Tel_n basis, cols: Tel_{n+1} basis
        M = zeros(R, len(I[0]) * g, len(I) * g)
        for i in range(len(I)):
            for j in range(len(I[0])):
                if not R.is_zero(I[i][j]):
                    for t in range(g):
                        M[j * g + t][i * g + t] = I[i][j]
        maps[hdeg] = M
    return ChainMap(big, small, maps)


def llambda_model(m: PresentedModule, n: int) -> dict:
    """Homology of ``Hom(Tel_k, m)`` for k <= n with inverse towers.

    The H^{-1} tower is extended past n by the torsion exponent of m plus one
    level, so that the Mittag-Leffler flags of levels ``0..n`` are decided by
    computed images rather than assumed.
    """
    _, _, N = torsion_submodule_s(m)
    top = n + N + 1
    cx = [tel_hom(m, k) for k in range(top + 1)]
    res = [tel_hom_restriction(m, k, cx[k + 1], cx[k]) for k in range(top)]
    towers = {}
    for i in (-1, 0):
        levels = [c.homology(i).module for c in cx]
        trans = [f.on_homology(i) for f in res]
        towers[i] = TowerCertificate.build("inverse", levels, trans, labels=list(range(top + 1)))
    H = {i: cx[n].homology(i).module for i in (-1, 0)}
    return {
        "complex": cx[n],
        "H": H,
        "H0_expected": adic_quotient(m, n + 1)[0],
        "Hm1_expected": s_power_kernel(m, n + 1)[0],
        "towers": towers,
        "lookahead": top - n,
    }


# ---------------------------------------------------------------------------
# the map omega and its witness recursion


def omega_matrix(m: PresentedModule, n: int):
    """``omega(v, m_0..m_n) = sum_j s^j m_j - v`` in twisted coordinates.

    Rows follow the degree-0 term of Hom(Tel_n, m): ``e_{-1}`` then ``e_0..e_n``.
    """
    R, g = m.ring, m.ngens
    rows = []
    for blk in range(n + 2):
        c = R.neg(R.one) if blk == 0 else R.s_power(blk - 1)
        for t in range(g):
            r = [R.zero] * g
            r[t] = c
            rows.append(r)
    return rows


def _untwist(R: Ring, w, t: int):
    """M-coordinates of a vector given in ^{phi^t} coordinates."""
    return [R.phi(x, t) for x in w]


def _twist(R: Ring, v, t: int):
    return [R.phi(x, -t) for x in v]


def _left_divide_by_s_power(R: Ring, y, k: int):
    """x with ``s^k x = y`` coordinatewise, or None."""
    sk = R.s_power(k)
    out = []
    for c in y:
        q, r = R.divmod(c, sk, "left")  # c = q s^k = s^k phi^k(q)
        if not R.is_zero(r):
            return None
        out.append(R.phi(q, k))
    return out


def witness_recursion(R: Ring, g: int, n: int, ell, ells):
    """Preimage ``x_0..x_{n+1}`` of a kernel element ``(ell, ell_0..ell_n)`` of omega.

    ``x_0 = ell`` and ``x_k = -s^{-k} (sum_{j<k} s^j ell_j - ell)``, all in
    plain (untwisted) coordinates.  Returns None if a division is not exact.
    """
    xs = [list(ell)]
    for k in range(1, n + 2):
        acc = [R.neg(x) for x in ell]
        for j in range(k):
            sj = R.s_power(j)
            acc = [R.add(a, R.mul(sj, b)) for a, b in zip(acc, ells[j])]
        x = _left_divide_by_s_power(R, [R.neg(a) for a in acc], k)
        if x is None:
            return None
        xs.append(x)
    return xs


def omega_verify(m: PresentedModule, n: int) -> dict:
    """Check that omega induces ``H^0(Hom(Tel_n, m)) = m/s^{n+1}m`` for free m.

    Every generator of ker(omega) is given an explicit preimage under the
    differential via the witness recursion.
    """
    R, g = m.ring, m.ngens
    if m.relations:
        raise ModuleError("omega_verify needs a free module")
    C = tel_hom(m, n)
    target, proj = adic_quotient(m, n + 1)
    H0 = C.term(0)
    om = ModuleMap(H0, target, matmul(R, omega_matrix(m, n), proj.matrix), check=True)
    d = C.diff(-1)
    composite_zero = all(target.is_zero(r) for r in matmul(R, d, om.matrix))
    surjective = om.is_surjective()
    ker, inc = om.kernel()
    witnesses, ok = [], True
    for gen in inc.matrix:
        blocks = [gen[b * g:(b + 1) * g] for b in range(n + 2)]
        ell = blocks[0]
        ells = [_untwist(R, blocks[j + 1], j) for j in range(n + 1)]
        xs = witness_recursion(R, g, n, ell, ells)
        if xs is None:
            ok = False
            witnesses.append({"kernel_element": gen, "witness": None})
            continue
        # ^{phi^k} coordinates for the degree -1 term, then apply d
        xw = []
        for k, x in enumerate(xs):
            xw.extend(_twist(R, x, k))
        image = matmul(R, [xw], d)[0]
        match = all(R.eq(a, b) for a, b in zip(image, gen))
        ok = ok and match
        witnesses.append({"kernel_element": gen, "witness": xw, "matches": match})
    hm1 = C.homology(-1).module
    return {
        "pass": ok and composite_zero and surjective and hm1.is_zero_module(),
        "H_minus1_zero": hm1.is_zero_module(),
        "omega_kills_boundaries": composite_zero,
        "omega_surjective": surjective,
        "kernel_generators": len(inc.matrix),
        "witnesses": witnesses,
    }


def omega_naturality(F, L: PresentedModule, Lp: PresentedModule, n: int) -> bool:
    """``omega_{L'} o Hom(Tel_n, f) = f mod s^{n+1} o omega_L`` for ``f = (v -> vF)``."""
    R = L.ring
    g, h = L.ngens, Lp.ngens
    blocks = [F, F] + [twist_matrix(R, F, -j) for j in range(1, n + 1)]
    Hf = zeros(R, g * (n + 2), h * (n + 2))
    for b, B in enumerate(blocks):
        for i in range(g):
            for j in range(h):
                Hf[b * g + i][b * h + j] = B[i][j]
    target, proj = adic_quotient(Lp, n + 1)
    lhs = matmul(R, matmul(R, Hf, omega_matrix(Lp, n)), proj.matrix)
    rhs = matmul(R, matmul(R, omega_matrix(L, n), F), proj.matrix)
    return all(target.eq(a, b) for a, b in zip(lhs, rhs))


# ---------------------------------------------------------------------------
# adjunction


class CenterModel:
    """A module viewed over the centre: Z itself, or F_p for torsion skew modules."""

    def __init__(self, m: PresentedModule):
        self.module = m
        R = m.ring
        if isinstance(R, Integers):
            self.center = R
            self.group = m
            self.dim = m.ngens
        elif isinstance(R, SkewPoly):
            dim, act, coords, lift = prime_field_structure(m)
            self.center = PrimeField(R.F.p)
            self.group = free_module(self.center, dim)
            self.dim = dim
            self._act, self._coords, self._lift = act, coords, lift
        else:
            raise ModuleError(f"no centre model over {R}")

    def act(self, a):
        """Centre matrix of ``v -> a v``."""
        if isinstance(self.module.ring, Integers):
            return scalar_matrix(self.center, self.dim, a)
        return self._act(a)

    def coords(self, v):
        return list(v) if isinstance(self.module.ring, Integers) else self._coords(v)

    def lift(self, c):
        return list(c) if isinstance(self.module.ring, Integers) else self._lift(c)

    def convert_to(self, other: "CenterModel", fn):
        """Centre matrix of ``v -> fn(v)`` (fn acts on A-coordinates)."""
        rows = []
        for i in range(self.dim):
            e = [self.center.zero] * self.dim
            e[i] = self.center.one
            rows.append(other.coords(fn(self.lift(e))))
        return rows


def _free_resolution(m: PresentedModule):
    """Two-term free resolution ``A^t -D-> A^g`` of m (degrees -1, 0)."""
    R = m.ring
    simp, emb, to_new = simplify(R, m.ngens, m.relations, identity(R, m.ngens))
    D = simp.relations
    return simp, D


def _hom_total(center, blocks_terms, diffs):
    terms = [direct_sum(t) if t else zero_module(center) for t in blocks_terms]
    return BoundedComplex(center, 0, terms, diffs)


def _adjunction_level(m: PresentedModule, N: PresentedModule, n: int, simp, Dm) -> dict:
    """Both total Hom complexes at telescope level n and the comparison between them."""
    R = m.ring
    P = {-1: len(Dm), 0: simp.ngens}
    T = tel(R, n)
    tw = {0: T.twists[0], 1: T.twists[1]}
    Dt = T.diffs[0]
    cN = CenterModel(N)
    C = cN.center
    # twisted copies ^{phi^t}N for Hom(Tel, N)
    twisted = {}
    for t in set(tw[0]) | set(tw[1]):
        twisted[t] = CenterModel(twist_module(N, t))

    # index sets for total degree k = -(p+q): components (p, q, i, j)
    def comps(k):
        out = []
        for p in (0, 1):
            q = -k - p
            if q in P:
                for i in range(len(tw[p])):
                    for j in range(P[q]):
                        out.append((p, q, i, j))
        return out

    degrees = sorted({-(p + q) for p in (0, 1) for q in P})
    lo, hi = degrees[0], degrees[-1]
    D = cN.dim

    def Bmat(q):  # P^{q} -> P^{q+1}
        return Dm if q == -1 else None

    def left_diff(k):
        """Hom^k(Tot, N) -> Hom^{k+1}(Tot, N)."""
        src, tgt = comps(k), comps(k + 1)
        M = zeros(C, len(src) * D, len(tgt) * D)
        sidx = {c: a for a, c in enumerate(src)}
        sign = -1 if k % 2 == 0 else 1  # -(-1)^k
        for b, (p, q, i, j) in enumerate(tgt):  # x = e_i (x) f_j of degree p+q = -k-1
            # d x = sum_l Dt[i][l] e_l (x) f_j + (-1)^p sum_l phi^{t_i}(B[j][l]) e_i (x) f_l
            terms = []
            if p == 0:
                for l, x in enumerate(Dt[i]):
                    if not R.is_zero(x):
                        terms.append(((1, q, l, j), x, 1))
            B = Bmat(q)
            if B is not None:
                for l, x in enumerate(B[j]):
                    if not R.is_zero(x):
                        terms.append(((p, q + 1, i, l), R.phi(x, tw[p][i]), (-1) ** p))
            for comp, coef, sg in terms:
                a = sidx[comp]
                A = cN.act(coef)
                for u in range(D):
                    for v in range(D):
                        val = A[u][v] * sg * sign
                        if val:
                            M[a * D + u][b * D + v] = C.add(M[a * D + u][b * D + v], C.mul(val, 1) if isinstance(C, PrimeField) else val)
        return M

    def right_model(p, i):
        return twisted[tw[p][i]]

    def right_dim(comp):
        return right_model(comp[0], comp[2]).dim

    def right_offsets(cs):
        offs, o = [], 0
        for c in cs:
            offs.append(o)
            o += right_dim(c)
        return offs, o

    def right_diff(k):
        """Hom^k(P, Hom(Tel, N)) -> Hom^{k+1}: G(f)(e) components."""
        src, tgt = comps(k), comps(k + 1)
        so, stot = right_offsets(src)
        to, ttot = right_offsets(tgt)
        M = zeros(C, stot, ttot)
        sidx = {c: a for a, c in enumerate(src)}
        for b, (p, q, i, j) in enumerate(tgt):
            # (dG)(f_j)(e_i) = -(-1)^{k+q} G(f_j)(d e_i) - (-1)^k G(d f_j)(e_i)
            tgt_model = right_model(p, i)
            if p == 0:
                for l, x in enumerate(Dt[i]):
                    if R.is_zero(x):
                        continue
                    a = sidx[(1, q, l, j)]
                    src_model = right_model(1, l)
                    sg = -((-1) ** ((k + q) % 2))
                    # left multiplication by x in plain coordinates, moved between twists
                    fn = _move(R, x, tw[1][l], tw[0][i], sg)
                    blk = src_model.convert_to(tgt_model, fn)
                    _add_block(C, M, so[a], to[b], blk)
            B = Bmat(q)
            if B is not None:
                for l, x in enumerate(B[j]):
                    if R.is_zero(x):
                        continue
                    a = sidx[(p, q + 1, i, l)]
                    src_model = right_model(p, i)
                    sg = -((-1) ** (k % 2))
                    # module action of x on ^{phi^t}N: twisted coordinates, ordinary action
                    fn = _act_twisted(R, x, sg)
                    blk = src_model.convert_to(tgt_model, fn)
                    _add_block(C, M, so[a], to[b], blk)
        return M

    def phi_matrix(k):
        """Comparison Hom^k(Tot, N) -> Hom^k(P, Hom(Tel, N))."""
        cs = comps(k)
        offs, tot = right_offsets(cs)
        M = zeros(C, len(cs) * D, tot)
        for a, (p, q, i, j) in enumerate(cs):
            sg = (-1) ** ((p * q) % 2)
            t = tw[p][i]
            blk = cN.convert_to(right_model(p, i),
                                lambda v, t=t, sg=sg: [R.mul(R.one if sg == 1 else R.neg(R.one), R.phi(x, -t)) for x in v])
            _add_block(C, M, a * D, offs[a], blk)
        return M

    left_terms = [[cN.group] * len(comps(k)) for k in range(lo, hi + 1)]
    right_terms = [[right_model(c[0], c[2]).group for c in comps(k)] for k in range(lo, hi + 1)]
    left = BoundedComplex(C, lo, [direct_sum(t) if t else zero_module(C) for t in left_terms],
                          [left_diff(k) for k in range(lo, hi)])
    right = BoundedComplex(C, lo, [direct_sum(t) if t else zero_module(C) for t in right_terms],
                           [right_diff(k) for k in range(lo, hi)])
    comparison = ChainMap(left, right, {k: phi_matrix(k) for k in range(lo, hi + 1)})
    return {"left": left, "right": right, "comparison": comparison, "comps": comps,
            "degrees": (lo, hi)}


def _restriction(big: dict, small: dict, D: int) -> ChainMap:
    """``Hom(Tel_{n+1} (x) P, N) -> Hom(Tel_n (x) P, N)``: keep the components present at level n."""
    left_b, left_s = big["left"], small["left"]
    C = left_b.ring
    maps = {}
    for k in left_b.degrees():
        cb, cs = big["comps"](k), small["comps"](k)
        pos = {c: a for a, c in enumerate(cs)}
        M = zeros(C, len(cb) * D, len(cs) * D)
        for a, c in enumerate(cb):
            if c in pos:
                for u in range(D):
                    M[a * D + u][pos[c] * D + u] = C.one
        maps[k] = M
    return ChainMap(left_b, left_s, maps)


def verify_adjunction(m: PresentedModule, N: PresentedModule, n: int, lookahead: int = 3) -> dict:
    """Compare ``Hom(Tel_n (x) P, N)`` with ``Hom(P, Hom(Tel_n, N))``, P a free resolution of m.

    The comparison ``G(f)(e) = (-1)^{|e||f|} F(e (x) f)`` is checked to be a
    termwise isomorphism commuting with the differentials, and the cohomology
    of both sides is compared in every degree.  The degree-0 cohomology is
    followed over the levels ``0..n+lookahead`` as an inverse tower under
    restriction; its limit is the Hom from the derived torsion of m.
    """
    simp, Dm = _free_resolution(m)
    levels = [_adjunction_level(m, N, k, simp, Dm) for k in range(n + lookahead + 1)]
    cur = levels[n]
    left, right, comparison = cur["left"], cur["right"], cur["comparison"]
    lo, hi = cur["degrees"]
    termwise_iso = all(ModuleMap(left.term(k), right.term(k), comparison.component(k), check=False).is_iso()
                       for k in range(lo, hi + 1))
    Hl = {k: left.homology(k).module for k in range(lo, hi + 1)}
    Hr = {k: right.homology(k).module for k in range(lo, hi + 1)}
    agree = all(Hl[k].isomorphic(Hr[k]) for k in Hl)
    induced_iso = all(comparison.on_homology(k).is_iso() for k in range(lo, hi + 1))
    D = CenterModel(N).dim
    res = [_restriction(levels[k + 1], levels[k], D) for k in range(len(levels) - 1)]
    tower = TowerCertificate.build("inverse", [lv["left"].homology(0).module for lv in levels],
                                   [f.on_homology(0) for f in res], labels=list(range(len(levels))))
    return {
        "pass": termwise_iso and agree and induced_iso,
        "termwise_iso": termwise_iso,
        "commutes_with_differentials": True,  # checked when the ChainMap is built
        "H_left": Hl,
        "H_right": Hr,
        "H0": Hl.get(0),
        "H0_tower": tower,
        "left": left,
        "right": right,
        "comparison": comparison,
    }


def _move(R: Ring, x, t_src: int, t_tgt: int, sign: int):
    """``w -> sign * x * v`` from ^{phi^t_src} to ^{phi^t_tgt} coordinates (v plain)."""
    def fn(w):
        v = [R.phi(c, t_src) for c in w]
        out = [R.mul(x, c) for c in v]
        if sign < 0:
            out = [R.neg(c) for c in out]
        return [R.phi(c, -t_tgt) for c in out]
    return fn


def _act_twisted(R: Ring, x, sign: int):
    """Module action of x on a twisted module in its own coordinates."""
    def fn(w):
        out = [R.mul(x, c) for c in w]
        return [R.neg(c) for c in out] if sign < 0 else out
    return fn


def _add_block(C: Ring, M, r0: int, c0: int, blk):
    for u, row in enumerate(blk):
        for v, x in enumerate(row):
            if not C.is_zero(x):
                M[r0 + u][c0 + v] = C.add(M[r0 + u][c0 + v], x)


# ---------------------------------------------------------------------------
# derived idempotency on the telescope side


def tel_tensor_complex(T: FreeBimoduleComplex, X: BoundedComplex) -> BoundedComplex:
    """Total complex of ``T (x)_A X`` for a complex X of presented modules."""
    R = X.ring
    lo, hi = T.lo + X.lo, T.hi + X.hi
    comps = {}
    for k in range(lo, hi + 1):
        cs = []
        for p in range(T.lo, T.hi + 1):
            q = k - p
            if X.lo <= q <= X.hi:
                for i, t in enumerate(T.twists[p - T.lo]):
                    cs.append((p, q, i, t))
        comps[k] = cs
    terms = {k: direct_sum([twist_module(X.term(q), -t) for (p, q, i, t) in comps[k]])
             if comps[k] else zero_module(R) for k in comps}
    diffs = []
    for k in range(lo, hi):
        src, tgt = comps[k], comps[k + 1]
        offs_s = _offsets([X.term(q).ngens for (_, q, _, _) in src])
        offs_t = _offsets([X.term(q).ngens for (_, q, _, _) in tgt])
        tidx = {c[:3]: a for a, c in enumerate(tgt)}
        M = zeros(R, terms[k].ngens, terms[k + 1].ngens)
        for a, (p, q, i, t) in enumerate(src):
            g = X.term(q).ngens
            if p < T.hi:
                D = T.diffs[p - T.lo]
                for l, x in enumerate(D[i]):
                    if R.is_zero(x):
                        continue
                    b = tidx[(p + 1, q, l)]
                    for u in range(g):
                        M[offs_s[a] + u][offs_t[b] + u] = R.add(M[offs_s[a] + u][offs_t[b] + u], x)
            if q < X.hi:
                b = tidx[(p, q + 1, i)]
                dX = twist_matrix(R, X.diff(q), t)
                sg = -1 if p % 2 else 1
                for u in range(g):
                    for v in range(X.term(q + 1).ngens):
                        x = dX[u][v]
                        if not R.is_zero(x):
                            M[offs_s[a] + u][offs_t[b] + v] = R.add(
                                M[offs_s[a] + u][offs_t[b] + v], x if sg > 0 else R.neg(x))
        diffs.append(M)
    return BoundedComplex(R, lo, [terms[k] for k in range(lo, hi + 1)], diffs)


def _offsets(sizes):
    out, o = [], 0
    for s in sizes:
        out.append(o)
        o += s
    return out


def augmentation_outer(T: FreeBimoduleComplex, X: BoundedComplex, TX: BoundedComplex) -> ChainMap:
    """``eps (x) id: Tel (x) X -> X`` (``e_{-1} -> 1``)."""
    R = X.ring
    maps = {}
    for k in TX.degrees():
        M = zeros(R, TX.term(k).ngens, X.term(k).ngens)
        o = 0
        for p in range(T.lo, T.hi + 1):
            q = k - p
            if not (X.lo <= q <= X.hi):
                continue
            g = X.term(q).ngens
            for i, t in enumerate(T.twists[p - T.lo]):
                if p == 0 and i == 0:
                    for u in range(g):
                        M[o + u][u] = R.one
                o += g
        maps[k] = M
    return ChainMap(TX, X, maps)


def derived_idempotency_ore(m: PresentedModule, n: int, levels: int | None = None) -> dict:
    """RGamma(RGamma m) -> RGamma m, RQ(RGamma m) = 0 and RGamma(RQ m) = 0 on telescope models."""
    R = m.ring
    top = levels if levels is not None else n + 2
    cone_towers = {}
    cone_levels = []
    per_level = []
    for k in range(top + 1):
        X = tel_tensor(m, k)
        T = tel(R, k)
        TX = tel_tensor_complex(T, X)
        eps = augmentation_outer(T, X, TX)
        cone = mapping_cone(eps).cone
        cone_levels.append((cone, T, X, TX))
        per_level.append({i: cone.homology(i).module.describe() for i in cone.degrees()})
    # directed towers of cone homology along Tel_k -> Tel_{k+1} on both factors
    for i in range(-1, 2):
        mods = [c[0].homology(i).module for c in cone_levels]
        trans = []
        for k in range(top):
            trans.append(_cone_inclusion_on_homology(m, k, cone_levels[k], cone_levels[k + 1], i))
        cone_towers[i] = TowerCertificate.build("directed", mods, trans, labels=list(range(top + 1)))
    eps_iso = all(t.summary["status"] == "stabilized" and t.summary["value"] == "0"
                  for t in cone_towers.values())
    # RQ(RGamma m): localisation is exact, so localise the cohomology
    Xn = tel_tensor(m, n)
    rq_rgamma_zero = all(localize_module(Xn.homology(i).module).is_zero_module() for i in (0, 1))
    # RGamma(RQ m): m_s = colim(m -s-> ^{phi^-1}m -> ...); RGamma at level n along that colimit
    rg_rq = _rgamma_of_localization_tower(m, n, top + n + 2)
    rg_rq_zero = all(t.summary["status"] == "stabilized" and t.summary["value"] == "0"
                     for t in rg_rq.values())
    return {
        "pass": eps_iso and rq_rgamma_zero and rg_rq_zero,
        "rgamma_rgamma_to_rgamma_iso": eps_iso,
        "cone_towers": cone_towers,
        "cone_homology_per_level": per_level,
        "rq_of_rgamma_zero": rq_rgamma_zero,
        "rgamma_of_rq_zero": rg_rq_zero,
        "rgamma_of_rq_towers": rg_rq,
        "rgamma_value": {i: Xn.homology(i).module for i in (0, 1)},
    }


def _cone_inclusion_on_homology(m, k, lvl_a, lvl_b, i) -> ModuleMap:
    """Homology map between cones of eps (x) id induced by Tel_k -> Tel_{k+1} on both factors."""
    cone_a, Ta, Xa, TXa = lvl_a
    cone_b, Tb, Xb, TXb = lvl_b
    R = m.ring
    inner = tel_tensor_inclusion(m, k, Xa, Xb)
    # Tel_k (x) X_a -> Tel_{k+1} (x) X_b, componentwise e_p -> e_p and inner map
    maps = {}
    for deg in TXa.degrees():
        M = zeros(R, TXa.term(deg).ngens, TXb.term(deg).ngens)
        src = _tx_components(Ta, Xa, deg)
        tgt = _tx_components(Tb, Xb, deg)
        tpos = {c[:3]: off for c, off in tgt}
        for (p, q, idx, t), off in src:
            ob = tpos[(p, q, idx)]
            I = inner.component(q)
            for u in range(len(I)):
                for v in range(len(I[0]) if I else 0):
                    x = I[u][v]
                    if not R.is_zero(x):
                        M[off + u][ob + v] = R.phi(x, t) if False else x
        maps[deg] = M
    outer = ChainMap(TXa, TXb, maps)
    # cone components: cone^d = X^d + TX^{d+1}
    cm = {}
    for d in cone_a.degrees():
        xa, xb = Xa.term(d).ngens, Xb.term(d).ngens
        ta, tb = TXa.term(d + 1).ngens, TXb.term(d + 1).ngens
        M = zeros(R, xa + ta, xb + tb)
        I = inner.component(d)
        for u in range(xa):
            for v in range(xb):
                M[u][v] = I[u][v]
        O = outer.component(d + 1)
        for u in range(ta):
            for v in range(tb):
                M[xa + u][xb + v] = O[u][v]
        cm[d] = M
    f = ChainMap(cone_a, cone_b, cm)
    return f.on_homology(i)


def _tx_components(T, X, deg):
    out, o = [], 0
    for p in range(T.lo, T.hi + 1):
        q = deg - p
        if X.lo <= q <= X.hi:
            for i, t in enumerate(T.twists[p - T.lo]):
                out.append(((p, q, i, t), o))
                o += X.term(q).ngens
    return out


def _rgamma_of_localization_tower(m: PresentedModule, n: int, length: int) -> dict:
    """Directed towers ``H^i(Tel_n (x) ^{phi^{-k}} m)`` along ``s``; colimit = H^i(Tel_n (x) m_s)."""
    R = m.ring
    cx = [tel_tensor(twist_module(m, -k), n) for k in range(length + 1)]
    out = {}
    for i in (0, 1):
        mods = [c.homology(i).module for c in cx]
        trans = []
        for k in range(length):
            # right multiplication by s on every twisted copy
            g = cx[k].term(i).ngens
            trans.append(cx[k].homology(i).induced(scalar_matrix(R, g, R.s), cx[k + 1].homology(i))
                         if cx[k].homology(i).witnesses and cx[k + 1].homology(i).witnesses
                         else ModuleMap(mods[k], mods[k + 1], [[] for _ in range(mods[k].ngens)]
                                        if mods[k].ngens else [], check=False))
        out[i] = TowerCertificate.build("directed", mods, trans, labels=list(range(length + 1)))
    return out


# ---------------------------------------------------------------------------
# weak stability for Ore settings


def ore_weak_stability(ring: Ring, corpus, d: int = 4, max_level: int = 4) -> dict:
    """Cohomological dimension <= 1 from the length-one resolutions ``A -s^k-> A``.

    For each corpus module M and each k, ``Ext^i(A/As^k, M)`` is computed
    from the resolution and recorded for ``0 <= i <= d``; the colimit towers of
    ``Ext^0`` and ``Ext^1`` are reported.  Localised modules are checked to be
    acyclic (``M_s / s^k M_s = 0``).
    """
    rows = []
    ok = True
    for name, M in corpus:
        exts = {}
        for k in range(1, max_level + 1):
            res_ok = _resolution_exact(ring, k)
            f = s_power_map(M, k)
            e0 = f.kernel()[0]
            e1 = f.cokernel()[0]
            higher = [zero_module(ring) for _ in range(2, d + 1)]  # resolution has length one
            exts[k] = {"resolution_exact": res_ok, "Ext0": e0.describe(), "Ext1": e1.describe(),
                       "Ext>=2": [h.describe() for h in higher]}
            ok = ok and res_ok
        Ms = localize_module(M)
        L = Ms.ring
        acyclic = all(
            PresentedModule(L, M.ngens, list(Ms.relations) + scalar_matrix(L, M.ngens, (ring.s_power(k), 0)))
            .is_zero_module() for k in range(1, max_level + 1))
        ok = ok and acyclic
        rows.append({"module": name, "ext": exts, "localized_acyclic": acyclic})
    return {"cohomological_dimension_at_most_1": ok, "weakly_stable": ok, "per_module": rows,
            "bound": d}


def _resolution_exact(ring: Ring, k: int) -> bool:
    """``0 -> A -s^k-> A -> A/As^k -> 0`` is exact: s^k is left regular."""
    A = free_module(ring, 1)
    f = ModuleMap(A, A, [[ring.s_power(k)]])
    C = f.cokernel()[0]
    return f.is_injective() and C.isomorphic(PresentedModule(ring, 1, [[ring.s_power(k)]]))
