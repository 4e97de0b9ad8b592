"""Finite-dimensional algebras over F_p and their modules.

Algebras are given by structure constants ``const[i, j] = coords(b_i b_j)``.
Modules are left modules given by one action matrix per basis element,
acting on column vectors: ``act[i] @ x = b_i x``.  Right modules are left
modules over the opposite algebra.  All arithmetic is exact mod p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from .complexes import BoundedComplex
from .modules import PresentedModule
from .rings import PrimeField


class AlgebraError(ValueError):
    pass


def _mod(A, p):
    return np.asarray(A, dtype=np.int64) % p


def _dim_rowspace(A, p) -> int:
    A = np.asarray(A, dtype=np.int64)
    return 0 if A.size == 0 else la.rank(A, p)


# ---------------------------------------------------------------------------
# algebras


class FdAlgebra:
    def __init__(self, p: int, const, unit, names=None, idempotents=None, check: bool = True):
        self.p = p
        self.const = _mod(const, p)
        self.dim = self.const.shape[0]
        self.unit = _mod(unit, p)
        self.names = list(names) if names else [f"b{i}" for i in range(self.dim)]
        self._idempotents = [_mod(e, p) for e in idempotents] if idempotents is not None else None
        if check:
            self._verify()

    def _verify(self):
        d = self.dim
        if self.const.shape != (d, d, d) or self.unit.shape != (d,):
            raise AlgebraError("structure constants must have shape (d, d, d) and the unit length d")
        for i, j, k in itertools.product(range(d), repeat=3):
            left = self.mul(self.const[i, j], self.basis(k))
            right = self.mul(self.basis(i), self.const[j, k])
            if not np.array_equal(left, right):
                raise AlgebraError(
                    f"not associative at basis triple ({self.names[i]}, {self.names[j]}, {self.names[k]})")
        for i in range(d):
            e = self.basis(i)
            if not (np.array_equal(self.mul(self.unit, e), e) and np.array_equal(self.mul(e, self.unit), e)):
                raise AlgebraError(f"unit law fails at {self.names[i]}")

    def basis(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def mul(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", _mod(x, self.p), _mod(y, self.p), self.const) % self.p

    def left_mult(self, x) -> np.ndarray:
        """Matrix of ``y -> x y``."""
        return np.einsum("i,ijk->kj", _mod(x, self.p), self.const) % self.p

    def right_mult(self, x) -> np.ndarray:
        """Matrix of ``y -> y x``."""
        return np.einsum("j,ijk->ki", _mod(x, self.p), self.const) % self.p

    def opposite(self) -> "FdAlgebra":
        return FdAlgebra(self.p, self.const.transpose(1, 0, 2), self.unit,
                         [n + "^op" for n in self.names], self._idempotents, check=False)

    def span_products(self, X, Y) -> np.ndarray:
        rows = [self.mul(x, y) for x in X for y in Y]
        return la.row_basis(np.array(rows).reshape(len(rows), self.dim), self.p, self.dim)

    def is_nilpotent_space(self, X) -> bool:
        cur = la.row_basis(_mod(X, self.p).reshape(-1, self.dim), self.p, self.dim)
        for _ in range(self.dim + 1):
            if cur.shape[0] == 0:
                return True
            cur = self.span_products(cur, X)
        return cur.shape[0] == 0

    @cached_property
    def radical(self) -> np.ndarray:
        """Basis of the Jacobson radical (the largest nilpotent ideal)."""
        p, d = self.p, self.dim
        G = np.array([[np.trace(self.left_mult(self.mul(self.basis(i), self.basis(j)))) % p
                       for j in range(d)] for i in range(d)], dtype=np.int64)
        T = la.left_nullspace(G, p) if d else np.zeros((0, 0), dtype=np.int64)
        if self.is_nilpotent_space(T):
            return la.row_basis(T, p, d)
        # trace form degenerate in characteristic p: search the trace ideal
        if p ** T.shape[0] > 1 << 14:
            raise AlgebraError("radical search space too large")
        good = []
        for coeffs in itertools.product(range(p), repeat=T.shape[0]):
            a = (np.array(coeffs, dtype=np.int64) @ T) % p
            if a.any() and self.is_nilpotent_space(ideal_closure(self, [a])):
                good.append(a)
        return la.row_basis(np.array(good).reshape(len(good), d), p, d)

    def _elements_of(self, B):
        """All elements of the span of the rows of B (small spans only)."""
        if self.p ** B.shape[0] > 1 << 14:
            raise AlgebraError("idempotent search space too large")
        for coeffs in itertools.product(range(self.p), repeat=B.shape[0]):
            yield (np.array(coeffs, dtype=np.int64) @ B) % self.p

    def corner(self, e) -> np.ndarray:
        """Basis of ``eAe``."""
        rows = [self.mul(self.mul(e, self.basis(i)), e) for i in range(self.dim)]
        return la.row_basis(np.array(rows), self.p, self.dim)

    def _split(self, e):
        """A nontrivial idempotent f of eAe with f != e, or None if e is primitive."""
        for f in self._elements_of(self.corner(e)):
            if f.any() and not np.array_equal(f, e) and np.array_equal(self.mul(f, f), f):
                return f
        return None

    @cached_property
    def primitive_idempotents(self):
        """A complete set of primitive orthogonal idempotents."""
        if self._idempotents is not None:
            es = self._idempotents
            tot = sum(es) % self.p if es else np.zeros(self.dim, dtype=np.int64)
            ok = np.array_equal(tot, self.unit) and all(
                np.array_equal(self.mul(a, b), a if i == j else 0 * a)
                for i, a in enumerate(es) for j, b in enumerate(es))
            if ok and all(self._split(e) is None for e in es):
                return es
            raise AlgebraError("declared idempotents are not a complete primitive orthogonal set")
        todo, done = [self.unit.copy()], []
        while todo:
            e = todo.pop(0)
            f = self._split(e)
            if f is None:
                done.append(e)
            else:
                todo[:0] = [f, (e - f) % self.p]
        # canonical order: lexicographically largest coordinate vector first
        return sorted(done, key=lambda e: tuple(-int(x) for x in e))

    def describe(self) -> str:
        return f"F{self.p}-algebra of dimension {self.dim}"

    def element_name(self, x) -> str:
        terms = [(c if c != 1 else "") and f"{c}" for c in x]
        parts = [f"{terms[i]}{self.names[i]}" for i in range(self.dim) if x[i]]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"p": self.p, "dim": self.dim, "basis": self.names,
                "unit": self.unit.tolist()}


def build_algebra(p: int, const, unit, names=None, idempotents=None) -> FdAlgebra:
    return FdAlgebra(p, const, unit, names, idempotents)


def matrix_units_algebra(p: int, n: int, units, names=None) -> FdAlgebra:
    """Subalgebra of n x n matrices spanned by the given matrix units ``(row, col)``."""
    units = [tuple(u) for u in units]
    idx = {u: k for k, u in enumerate(units)}
    d = len(units)
    const = np.zeros((d, d, d), dtype=np.int64)
    for a, (i, j) in enumerate(units):
        for b, (k, l) in enumerate(units):
            if j == k:
                if (i, l) not in idx:
                    raise AlgebraError(f"span of matrix units not closed: E{i+1}{j+1} E{k+1}{l+1}")
                const[a, b, idx[(i, l)]] = 1
    unit = np.zeros(d, dtype=np.int64)
    diag = []
    for i in range(n):
        if (i, i) not in idx:
            raise AlgebraError("matrix unit span must contain the diagonal units")
        unit[idx[(i, i)]] = 1
        e = np.zeros(d, dtype=np.int64)
        e[idx[(i, i)]] = 1
        diag.append(e)
    names = names or [f"e{i+1}{j+1}" for i, j in units]
    return FdAlgebra(p, const, unit, names, diag)


def full_matrix_algebra(p: int, n: int) -> FdAlgebra:
    return matrix_units_algebra(p, n, [(i, j) for i in range(n) for j in range(n)])


def lower_triangular_a2(p: int = 2) -> FdAlgebra:
    """Lower-triangular 2x2 matrices, basis e11, e22, e21."""
    return matrix_units_algebra(p, 2, [(0, 0), (1, 1), (1, 0)])


def product_algebra(*algs: FdAlgebra) -> FdAlgebra:
    p = algs[0].p
    d = sum(a.dim for a in algs)
    const = np.zeros((d, d, d), dtype=np.int64)
    unit = np.zeros(d, dtype=np.int64)
    names, o = [], 0
    for t, a in enumerate(algs):
        const[o:o + a.dim, o:o + a.dim, o:o + a.dim] = a.const
        unit[o:o + a.dim] = a.unit
        names += [f"{n}_{t + 1}" for n in a.names]
        o += a.dim
    return FdAlgebra(p, const, unit, names)


def prime_field_algebra(p: int) -> FdAlgebra:
    return FdAlgebra(p, [[[1]]], [1], ["1"])


def path_algebra(p: int, nverts: int, arrows, zero_paths=(), max_length: int = 8,
                 max_dim: int = 64) -> FdAlgebra:
    """Path algebra of a quiver modulo monomial relations.

    ``arrows`` is a list of ``(source, target)``; paths are tuples of arrow
    indices in the order traversed and the product ``u * v`` is "v then u".
    """
    zero = [tuple(z) for z in zero_paths]

    def allowed(path):
        L = len(path)
        return not any(path[i:i + len(z)] == z for z in zero for i in range(L - len(z) + 1))

    paths = [("v", i) for i in range(nverts)]
    layer = [(a,) for a in range(len(arrows)) if allowed((a,))]
    length = 1
    while layer:
        if length > max_length:
            raise AlgebraError("monomial relations leave infinitely many paths")
        paths += layer
        if len(paths) > max_dim:
            raise AlgebraError("path algebra exceeds the dimension cap")
        nxt = []
        for path in layer:
            end = arrows[path[-1]][1]
            for a, (s, t) in enumerate(arrows):
                if s == end and allowed(path + (a,)):
                    nxt.append(path + (a,))
        layer, length = nxt, length + 1
    idx = {q: k for k, q in enumerate(paths)}

    def src(q):
        return q[1] if q[0] == "v" else arrows[q[0]][0]

    def tgt(q):
        return q[1] if q[0] == "v" else arrows[q[-1]][1]

    d = len(paths)
    const = np.zeros((d, d, d), dtype=np.int64)
    for a, u in enumerate(paths):
        for b, v in enumerate(paths):
            if tgt(v) != src(u):
                continue
            if u[0] == "v":
                w = v
            elif v[0] == "v":
                w = u
            else:
                w = v + u
                if not allowed(w):
                    continue
            const[a, b, idx[w]] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[:nverts] = 1
    names = [f"e{q[1] + 1}" if q[0] == "v" else "".join(f"a{x + 1}" for x in reversed(q)) for q in paths]
    idem = [np.eye(d, dtype=np.int64)[i] for i in range(nverts)]
    return FdAlgebra(p, const, unit, names, idem)


def quotient_algebra(A: FdAlgebra, ideal) -> tuple[FdAlgebra, np.ndarray]:
    """``A/a`` and the projection matrix (rows: images of the basis of A)."""
    p = A.p
    I = la.row_basis(ideal, p, A.dim)
    C = la.complement_basis(I, A.dim, p)
    full = np.vstack([I, C]) if I.shape[0] else C
    inv = la.inverse(full, p)
    q = C.shape[0]

    def proj(x):
        return ((_mod(x, p) @ inv) % p)[I.shape[0]:]

    const = np.zeros((q, q, q), dtype=np.int64)
    for i in range(q):
        for j in range(q):
            const[i, j] = proj(A.mul(C[i], C[j]))
    P = np.array([proj(A.basis(i)) for i in range(A.dim)]).reshape(A.dim, q)
    names = [A.element_name(c) for c in C]
    return FdAlgebra(p, const, proj(A.unit), names), P


# ---------------------------------------------------------------------------
# ideals


def ideal_closure(A: FdAlgebra, gens) -> np.ndarray:
    """Basis of the two-sided ideal generated by ``gens``: span of b g b'."""
    p = A.p
    rows = [A.mul(A.mul(A.basis(i), _mod(g, p)), A.basis(j))
            for g in gens for i in range(A.dim) for j in range(A.dim)]
    if not rows:
        return np.zeros((0, A.dim), dtype=np.int64)
    return la.row_basis(np.array(rows), p, A.dim)


def is_idempotent_ideal(A: FdAlgebra, a) -> bool:
    a = la.row_basis(a, A.p, A.dim)
    sq = A.span_products(a, a) if a.shape[0] else a
    return _dim_rowspace(sq, A.p) == a.shape[0]


def same_space(X, Y, p: int) -> bool:
    X, Y = np.asarray(X), np.asarray(Y)
    rx, ry = _dim_rowspace(X, p), _dim_rowspace(Y, p)
    if rx != ry:
        return False
    if rx == 0:
        return True
    return _dim_rowspace(np.vstack([X, Y]), p) == rx


@dataclass
class GabrielFilterView:
    """Left ideals i with A/i torsion, i.e. those containing the idempotent ideal a."""

    algebra: FdAlgebra
    ideal: np.ndarray

    def contains(self, left_ideal) -> bool:
        A = self.algebra
        L = la.row_basis(left_ideal, A.p, A.dim)
        return all(la.in_rowspace(L, v, A.p) for v in self.ideal) if L.shape[0] else self.ideal.shape[0] == 0

    @property
    def minimum(self):
        return self.ideal


# ---------------------------------------------------------------------------
# modules


class FdModule:
    """Left module: ``act[i] @ x = b_i x`` on column vectors."""

    def __init__(self, algebra: FdAlgebra, act, name: str = "", check: bool = True):
        self.algebra = algebra
        self.p = algebra.p
        self.act = [_mod(M, self.p) for M in act]
        self.dim = self.act[0].shape[0] if self.act else 0
        if len(self.act) != algebra.dim:
            raise AlgebraError("need one action matrix per basis element")
        self.name = name
        if check:
            self._verify()

    def _verify(self):
        A, p = self.algebra, self.p
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = (self.act[i] @ self.act[j]) % p
                if not np.array_equal(lhs, self.action(A.const[i, j])):
                    raise AlgebraError(f"action does not respect {A.names[i]}*{A.names[j]}")
        if not np.array_equal(self.action(A.unit), np.eye(self.dim, dtype=np.int64)):
            raise AlgebraError("unit does not act as the identity")

    def action(self, x) -> np.ndarray:
        x = _mod(x, self.p)
        M = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i, c in enumerate(x):
            if c:
                M = (M + c * self.act[i]) % self.p
        return M

    def is_zero_module(self) -> bool:
        return self.dim == 0

    def __repr__(self):
        return f"FdModule({self.name or 'M'}, dim={self.dim})"


@dataclass
class FdMap:
    source: FdModule
    target: FdModule
    matrix: np.ndarray  # target.dim x source.dim

    def __post_init__(self):
        self.matrix = _mod(self.matrix, self.source.p).reshape(self.target.dim, self.source.dim)

    def is_linear(self) -> bool:
        p = self.source.p
        return all(np.array_equal((self.matrix @ a) % p, (b @ self.matrix) % p)
                   for a, b in zip(self.source.act, self.target.act))

    def then(self, other: "FdMap") -> "FdMap":
        return FdMap(self.source, other.target, (other.matrix @ self.matrix) % self.source.p)

    def rank(self) -> int:
        return _dim_rowspace(self.matrix, self.source.p)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def is_zero(self) -> bool:
        return not self.matrix.any()


def regular_module(A: FdAlgebra) -> FdModule:
    return FdModule(A, [A.left_mult(A.basis(i)) for i in range(A.dim)], "A", check=False)


def zero_fd_module(A: FdAlgebra) -> FdModule:
    return FdModule(A, [np.zeros((0, 0), dtype=np.int64) for _ in range(A.dim)], "0", check=False)


def _restrict(M: FdModule, B) -> list:
    """Action matrices on the span of the rows of B (assumed invariant)."""
    p = M.p
    out = []
    for a in M.act:
        imgs = (a @ B.T % p).T
        C = la.solve_left(B, imgs, p)
        if C is None:
            raise AlgebraError("subspace is not a submodule")
        out.append(C.T % p)
    return out


def submodule_closure(M: FdModule, vectors) -> np.ndarray:
    p = M.p
    V = _mod(vectors, p)
    if M.dim == 0 or V.size == 0:
        return np.zeros((0, M.dim), dtype=np.int64)
    cur = la.row_basis(V.reshape(-1, M.dim), p, M.dim)
    while True:
        rows = [cur] + [(a @ cur.T % p).T for a in M.act]
        nxt = la.row_basis(np.vstack(rows), p, M.dim) if cur.shape[0] else cur
        if nxt.shape[0] == cur.shape[0]:
            return cur
        cur = nxt


def submodule(M: FdModule, vectors, name: str = "") -> tuple[FdModule, FdMap]:
    B = submodule_closure(M, vectors)
    if B.shape[0] == 0:
        Z = zero_fd_module(M.algebra)
        return Z, FdMap(Z, M, np.zeros((M.dim, 0), dtype=np.int64))
    S = FdModule(M.algebra, _restrict(M, B), name, check=False)
    return S, FdMap(S, M, B.T)


def quotient_module(M: FdModule, vectors, name: str = "") -> tuple[FdModule, FdMap]:
    p = M.p
    W = submodule_closure(M, vectors)
    C = la.complement_basis(W, M.dim, p)
    full = np.vstack([W, C]) if W.shape[0] else C
    inv = la.inverse(full, p) if full.shape[0] else full
    k = W.shape[0]
    P = (inv[:, k:] if full.shape[0] else np.zeros((M.dim, 0), dtype=np.int64)).T % p  # q x n
    act = [(P @ a @ C.T) % p for a in M.act]
    Q = FdModule(M.algebra, act, name, check=False)
    return Q, FdMap(M, Q, P)


def direct_sum_fd(mods, name: str = "") -> FdModule:
    A = mods[0].algebra
    act = []
    for i in range(A.dim):
        n = sum(m.dim for m in mods)
        D = np.zeros((n, n), dtype=np.int64)
        o = 0
        for m in mods:
            D[o:o + m.dim, o:o + m.dim] = m.act[i]
            o += m.dim
        act.append(D)
    return FdModule(A, act, name, check=False)


def dual_module(M: FdModule, over: FdAlgebra | None = None) -> FdModule:
    """``Hom_F(M, F)`` as a left module over the opposite algebra."""
    B = over if over is not None else M.algebra.opposite()
    return FdModule(B, [a.T.copy() for a in M.act], f"D({M.name})", check=False)


def kernel_of(f: FdMap, name: str = "") -> tuple[FdModule, FdMap]:
    K = la.nullspace(f.matrix, f.source.p) if f.source.dim else np.zeros((0, 0), dtype=np.int64)
    return submodule(f.source, K, name)


def image_of(f: FdMap) -> np.ndarray:
    return la.row_basis(f.matrix.T, f.source.p, f.target.dim)


def cokernel_of(f: FdMap, name: str = "") -> tuple[FdModule, FdMap]:
    return quotient_module(f.target, image_of(f), name)


# ---------------------------------------------------------------------------
# Hom and tensor


def hom_basis(M: FdModule, N: FdModule) -> np.ndarray:
    """Basis of Hom_A(M, N) as flattened ``N.dim x M.dim`` matrices (rows)."""
    p, m, n = M.p, M.dim, N.dim
    if m == 0 or n == 0:
        return np.zeros((0, n * m), dtype=np.int64)
    In, Im = np.eye(n, dtype=np.int64), np.eye(m, dtype=np.int64)
    eqs = [(np.kron(In, a.T) - np.kron(b, Im)) % p for a, b in zip(M.act, N.act)]
    return la.nullspace(np.vstack(eqs), p)


def hom_dim(M: FdModule, N: FdModule) -> int:
    return hom_basis(M, N).shape[0]


def _coords(basis, v, p):
    x = la.solve_left(basis, v, p)
    if x is None:
        raise AlgebraError("vector outside the expected span")
    return x


def tensor_space(Mr: FdModule, N: FdModule):
    """``Mr (x)_A N`` as ``(V / W)``: returns the relation rows W of ``Mr (x)_F N``."""
    p = N.p
    m, n = Mr.dim, N.dim
    rows = []
    Im, In = np.eye(m, dtype=np.int64), np.eye(n, dtype=np.int64)
    for ar, al in zip(Mr.act, N.act):
        rows.append((np.kron(ar, In) - np.kron(Im, al)) % p)
    if m * n == 0:
        return np.zeros((0, m * n), dtype=np.int64)
    # columns of (ar (x) 1 - 1 (x) al) span the relations
    return la.row_basis(np.hstack(rows).T, p, m * n)


def tensor_dim(Mr: FdModule, N: FdModule) -> int:
    return Mr.dim * N.dim - tensor_space(Mr, N).shape[0]


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class Resolution:
    direction: str  # "projective" or "injective"
    module: FdModule
    terms: list  # FdModules
    maps: list  # projective: terms[k] -> terms[k-1] (k >= 1); injective: terms[k] -> terms[k+1]
    augmentation: FdMap  # projective: terms[0] -> M; injective: M -> terms[0]
    summands: list = field(default_factory=list)
    length: int = 0

    def dims(self):
        return [t.dim for t in self.terms]

    def is_exact(self) -> bool:
        p = self.module.p
        if self.direction == "projective":
            ranks_ok = self.augmentation.is_surjective()
            prev_kernel = self.terms[0].dim - self.augmentation.rank()
            for k, d in enumerate(self.maps):
                if k == 0:
                    comp = (self.augmentation.matrix @ d.matrix) % p
                else:
                    comp = (self.maps[k - 1].matrix @ d.matrix) % p
                if comp.any() or d.rank() != prev_kernel:
                    return False
                prev_kernel = d.source.dim - d.rank()
            return ranks_ok
        ok = self.augmentation.is_injective()
        prev_image = self.augmentation.rank()
        for k, d in enumerate(self.maps):
            before = self.augmentation.matrix if k == 0 else self.maps[k - 1].matrix
            if ((d.matrix @ before) % p).any():
                return False
            if d.source.dim - d.rank() != prev_image:
                return False
            prev_image = d.rank()
        return ok

    def projective_dimension_bound(self):
        """Length if the resolution terminated (last term zero), else None."""
        for k, t in enumerate(self.terms):
            if t.dim == 0:
                return k - 1
        return None


def indecomposable_projective(A: FdAlgebra, e) -> tuple[FdModule, np.ndarray]:
    """``A e`` with its basis (rows, coordinates in A)."""
    R = regular_module(A)
    B = la.row_basis((A.right_mult(e) % A.p).T, A.p, A.dim)
    return FdModule(A, _restrict(R, B), "Ae", check=False), B


def radical_submodule(M: FdModule) -> np.ndarray:
    J = M.algebra.radical
    rows = [(M.action(j) @ np.eye(M.dim, dtype=np.int64)).T for j in J]
    if not rows or M.dim == 0:
        return np.zeros((0, M.dim), dtype=np.int64)
    return la.row_basis(np.vstack(rows), M.p, M.dim)


def projective_cover(M: FdModule):
    """Minimal projective cover ``P -> M``; returns (P, map, summand idempotent indices)."""
    A, p = M.algebra, M.p
    es = A.primitive_idempotents
    rad = radical_submodule(M)
    chosen = []  # (idempotent index, generator vector)
    span = rad
    for i, e in enumerate(es):
        eM = la.row_basis((M.action(e)).T, p, M.dim) if M.dim else np.zeros((0, 0), dtype=np.int64)
        for v in eM:
            if span.shape[0] and la.in_rowspace(span, v, p):
                continue
            chosen.append((i, v))
            gen = submodule_closure(M, [x for _, x in chosen]) if M.dim else span
            span = la.row_basis(np.vstack([gen, rad]) if rad.shape[0] else gen, p, M.dim)
    projs, blocks = [], []
    for i, v in chosen:
        P, B = indecomposable_projective(A, es[i])
        projs.append(P)
        # basis vector b of Ae (coords in A) maps to b . v
        blocks.append(np.array([(M.action(b) @ v) % p for b in B]).T.reshape(M.dim, P.dim))
    if not projs:
        Z = zero_fd_module(A)
        return Z, FdMap(Z, M, np.zeros((M.dim, 0), dtype=np.int64)), []
    P = direct_sum_fd(projs, "P")
    F = FdMap(P, M, np.hstack(blocks))
    if not F.is_surjective():
        raise AlgebraError("projective cover construction failed to be onto")
    return P, F, [i for i, _ in chosen]


def projective_resolution(M: FdModule, d: int) -> Resolution:
    """Minimal projective resolution ``P_d -> ... -> P_0 -> M``."""
    if d < 0:
        raise AlgebraError("resolution length must be >= 0")
    P0, aug, s0 = projective_cover(M)
    terms, maps, summands = [P0], [], [s0]
    K, inc = kernel_of(aug)
    for _ in range(d):
        P, cov, s = projective_cover(K)
        maps.append(FdMap(P, terms[-1], (inc.matrix @ cov.matrix) % M.p))
        terms.append(P)
        summands.append(s)
        K, k_inc = kernel_of(cov)
        inc = FdMap(K, P, k_inc.matrix)
    return Resolution("projective", M, terms, maps, aug, summands, d)


def injective_resolution(M: FdModule, d: int) -> Resolution:
    """``M -> I^0 -> ... -> I^d`` as the dual of a projective resolution over the opposite algebra."""
    A = M.algebra
    Aop = A.opposite()
    DM = dual_module(M, Aop)
    R = projective_resolution(DM, d)
    terms = [dual_module(P, A) for P in R.terms]
    maps = [FdMap(terms[k], terms[k + 1], f.matrix.T) for k, f in enumerate(R.maps)]
    aug = FdMap(M, terms[0], R.augmentation.matrix.T)
    return Resolution("injective", M, terms, maps, aug, R.summands, d)


def simple_modules(A: FdAlgebra):
    out = []
    for i, e in enumerate(A.primitive_idempotents):
        P, _ = indecomposable_projective(A, e)
        S, _ = quotient_module(P, radical_submodule(P), f"S{i + 1}")
        out.append(S)
    return out


def indecomposable_projectives(A: FdAlgebra):
    out = []
    for i, e in enumerate(A.primitive_idempotents):
        P, _ = indecomposable_projective(A, e)
        P.name = f"P{i + 1}"
        out.append(P)
    return out


def indecomposable_injectives(A: FdAlgebra):
    Aop = A.opposite()
    out = []
    for i, e in enumerate(A.primitive_idempotents):
        P, _ = indecomposable_projective(Aop, e)
        I = dual_module(P, A)
        I.name = f"I{i + 1}"
        out.append(I)
    return out


def is_isomorphic(M: FdModule, N: FdModule) -> bool:
    if M.dim != N.dim:
        return False
    if M.dim == 0:
        return True
    H = hom_basis(M, N)
    if H.shape[0] == 0:
        return False
    if M.p ** H.shape[0] > 1 << 14:
        raise AlgebraError("isomorphism search space too large")
    for coeffs in itertools.product(range(M.p), repeat=H.shape[0]):
        X = (np.array(coeffs) @ H % M.p).reshape(N.dim, M.dim)
        if la.rank(X, M.p) == M.dim:
            return True
    return False


def standard_corpus(A: FdAlgebra):
    """Simples, indecomposable projectives and injectives up to isomorphism."""
    out = []
    for M in simple_modules(A) + indecomposable_projectives(A) + indecomposable_injectives(A):
        if not any(is_isomorphic(M, N) for N in out):
            out.append(M)
    return out


# ---------------------------------------------------------------------------
# Ext and Tor


def _field_complex(p: int, lo: int, dims, rel, diffs_col) -> BoundedComplex:
    """Complex of F_p-spaces ``F^dims[k] / rel[k]`` with column-convention differentials."""
    F = PrimeField(p)
    terms = []
    for n, W in zip(dims, rel):
        terms.append(PresentedModule(F, n, W.tolist() if W is not None and len(W) else []))
    diffs = [(D.T % p).tolist() if D.size else [[0] * dims[k + 1] for _ in range(dims[k])]
             for k, D in enumerate(diffs_col)]
    return BoundedComplex(F, lo, terms, diffs)


def _cohomology_dims(p: int, dims, rel, diffs_col):
    """Dimensions of cohomology of a quotient-space complex, degree by degree."""
    out = []
    for k, n in enumerate(dims):
        Wk = rel[k] if rel[k] is not None else np.zeros((0, n), dtype=np.int64)
        if k < len(diffs_col):
            D = diffs_col[k]  # dims[k+1] x n
            W1 = rel[k + 1] if rel[k + 1] is not None else np.zeros((0, dims[k + 1]), dtype=np.int64)
            # cycles: v with D v in W1
            if W1.shape[0]:
                Q = _quotient_coords(W1, dims[k + 1], p)
                Dq = (Q @ D) % p
            else:
                Dq = D
            Z = la.nullspace(Dq, p) if Dq.size else np.eye(n, dtype=np.int64)
        else:
            Z = np.eye(n, dtype=np.int64)
        B_rows = [Wk] if Wk.shape[0] else []
        if k > 0:
            Dp = diffs_col[k - 1]
            if Dp.size:
                B_rows.append(Dp.T % p)
        B = la.row_basis(np.vstack(B_rows), p, n) if B_rows else np.zeros((0, n), dtype=np.int64)
        zr = _dim_rowspace(np.vstack([Z, B]) if B.shape[0] else Z, p) if n else 0
        out.append(zr - B.shape[0])
    return out


def _quotient_coords(W, n, p):
    """Matrix Q (q x n) with ker Q = rowspace(W)."""
    C = la.complement_basis(W, n, p)
    full = np.vstack([la.row_basis(W, p, n), C])
    inv = la.inverse(full, p)
    k = full.shape[0] - C.shape[0]
    return inv[:, k:].T % p


def ext_dims(M: FdModule, N: FdModule, d: int, method: str = "projective"):
    """``dim Ext^i(M, N)`` for ``0 <= i <= d``."""
    p = M.p
    if method == "projective":
        R = projective_resolution(M, d + 1)
        homs = [hom_basis(P, N) for P in R.terms]
        dims = [h.shape[0] for h in homs]
        diffs = []
        for k in range(len(R.maps)):
            # Hom(P_k, N) -> Hom(P_{k+1}, N): X -> X o d_{k+1}
            d_mat = R.maps[k].matrix
            src, tgt = homs[k], homs[k + 1]
            cols = []
            for x in src:
                X = x.reshape(N.dim, R.terms[k].dim)
                y = ((X @ d_mat) % p).reshape(-1)
                cols.append(_coords(tgt, y, p) if tgt.shape[0] else np.zeros(0, dtype=np.int64))
            diffs.append(np.array(cols, dtype=np.int64).reshape(len(cols), tgt.shape[0]).T)
        return _cohomology_dims(p, dims, [None] * len(dims), diffs)[: d + 1]
    R = injective_resolution(N, d + 1)
    homs = [hom_basis(M, I) for I in R.terms]
    dims = [h.shape[0] for h in homs]
    diffs = []
    for k in range(len(R.maps)):
        src, tgt = homs[k], homs[k + 1]
        cols = []
        for x in src:
            X = x.reshape(R.terms[k].dim, M.dim)
            y = ((R.maps[k].matrix @ X) % p).reshape(-1)
            cols.append(_coords(tgt, y, p) if tgt.shape[0] else np.zeros(0, dtype=np.int64))
        diffs.append(np.array(cols, dtype=np.int64).reshape(len(cols), tgt.shape[0]).T)
    return _cohomology_dims(p, dims, [None] * len(dims), diffs)[: d + 1]


def tor_dims(Mr: FdModule, N: FdModule, d: int, method: str = "left"):
    """``dim Tor_i(Mr, N)`` for ``0 <= i <= d``; Mr is a module over the opposite algebra.

    ``left`` resolves N, ``right`` resolves Mr.
    """
    p = N.p
    if method == "right":
        return _tor_from(projective_resolution(Mr, d + 1), N, p, d, resolved_right=True)
    return _tor_from(projective_resolution(N, d + 1), Mr, p, d, resolved_right=False)


def _tor_from(R: Resolution, other: FdModule, p: int, d: int, resolved_right: bool):
    dims, rels, diffs = [], [], []
    for P in R.terms:
        dims.append(P.dim * other.dim)
        rels.append(tensor_space(P, other) if resolved_right else tensor_space(other, P))
    I = np.eye(other.dim, dtype=np.int64)
    for f in R.maps:
        diffs.append(np.kron(f.matrix, I) % p if resolved_right else np.kron(I, f.matrix) % p)
    # cohomological order P_{d+1} -> ... -> P_0
    n = len(dims)
    h = _cohomology_dims(p, dims[::-1], rels[::-1], [diffs[n - 2 - j] for j in range(n - 1)])
    return h[::-1][: d + 1]


def right_regular(A: FdAlgebra) -> FdModule:
    """A as a right module (left module over the opposite algebra)."""
    return FdModule(A.opposite(), [A.right_mult(A.basis(i)) for i in range(A.dim)], "A_A", check=False)


def quotient_by_ideal(A: FdAlgebra, a, side: str = "left") -> FdModule:
    """``A/a`` as a left module, or as a right module over the opposite algebra."""
    base = regular_module(A) if side == "left" else right_regular(A)
    Q, _ = quotient_module(base, a, "A/a")
    return Q


# ---------------------------------------------------------------------------
# torsion and localisation for an idempotent ideal


def gamma_ideal(A: FdAlgebra, a, M: FdModule) -> tuple[FdModule, FdMap]:
    """``{x in M : a x = 0}``."""
    p = M.p
    if M.dim == 0:
        return submodule(M, np.zeros((0, 0), dtype=np.int64))
    stack = np.vstack([M.action(g) for g in a]) if len(a) else np.zeros((0, M.dim), dtype=np.int64)
    K = la.nullspace(stack, p) if stack.shape[0] else np.eye(M.dim, dtype=np.int64)
    return submodule(M, K, f"Gamma({M.name})")


def ideal_as_module(A: FdAlgebra, a) -> tuple[FdModule, np.ndarray]:
    """The ideal a as a left module, with its basis (coordinates in A)."""
    R = regular_module(A)
    B = la.row_basis(a, A.p, A.dim)
    return FdModule(A, _restrict(R, B), "a", check=False), B


@dataclass
class QData:
    module: FdModule  # Hom_A(a, M)
    basis: np.ndarray  # flattened hom matrices (M.dim x a.dim)
    tau: FdMap  # M -> Q(M)
    ideal_module: FdModule
    ideal_basis: np.ndarray
    source: FdModule

    def coords(self, X) -> np.ndarray:
        return _coords(self.basis, np.asarray(X).reshape(-1) % self.source.p, self.source.p)


def q_functor(A: FdAlgebra, a, M: FdModule) -> QData:
    """``Q(M) = Hom_A(a, M)`` with ``(x f)(y) = f(y x)`` and ``tau_M(m)(y) = y m``."""
    p = M.p
    aM, aB = ideal_as_module(A, a)
    H = hom_basis(aM, M)
    k = aM.dim
    # right multiplication by b_i on a, in the basis aB
    act = []
    for i in range(A.dim):
        imgs = np.array([A.mul(y, A.basis(i)) for y in aB]).reshape(k, A.dim)
        Rb = la.solve_left(aB, imgs, p).T % p  # column convention on a
        cols = []
        for h in H:
            X = h.reshape(M.dim, k)
            cols.append(_coords(H, ((X @ Rb) % p).reshape(-1), p))
        act.append(np.array(cols, dtype=np.int64).reshape(len(H), len(H)).T)
    Q = FdModule(A, act, f"Q({M.name})", check=True) if len(H) else zero_fd_module(A)
    cols = []
    for j in range(M.dim):
        e = np.zeros(M.dim, dtype=np.int64)
        e[j] = 1
        X = np.array([(M.action(y) @ e) % p for y in aB]).T.reshape(M.dim, k)
        cols.append(_coords(H, X.reshape(-1), p) if len(H) else np.zeros(0, dtype=np.int64))
    tau = FdMap(M, Q, np.array(cols, dtype=np.int64).reshape(M.dim, len(H)).T)
    return QData(Q, H, tau, aM, aB, M)


def q_on_map(qa: QData, qb: QData, f: FdMap) -> FdMap:
    """``Q(f): Hom(a, M) -> Hom(a, N)``, composition with f."""
    p = f.source.p
    k = qa.ideal_module.dim
    cols = []
    for h in qa.basis:
        X = h.reshape(f.source.dim, k)
        cols.append(qb.coords((f.matrix @ X) % p))
    M = np.array(cols, dtype=np.int64).reshape(len(qa.basis), len(qb.basis)).T
    return FdMap(qa.module, qb.module, M)


def is_strongly_idempotent(A: FdAlgebra, a, d: int) -> dict:
    """``Tor_i(A/a, A/a) = 0`` for ``1 <= i <= d``."""
    if not is_idempotent_ideal(A, a):
        raise AlgebraError("ideal is not idempotent: Tor_1(A/a, A/a) = a/a^2 is nonzero")
    right = quotient_by_ideal(A, a, "right")
    left = quotient_by_ideal(A, a, "left")
    tor = tor_dims(right, left, d)
    for i in range(1, d + 1):
        if tor[i]:
            return {"verdict": f"fails-at-{i}", "holds": False, "tor": tor, "bound": d}
    return {"verdict": f"holds-up-to-{d}", "holds": True, "tor": tor, "bound": d}


def ideal_from_idempotent(A: FdAlgebra, e) -> np.ndarray:
    return ideal_closure(A, [e])


def search_non_strongly_idempotent(p: int = 2, max_vertices: int = 3, max_arrows: int = 4,
                                   max_relation_degree: int = 3, d: int = 4, limit: int | None = None):
    """Scan monomial quiver algebras for an idempotent ideal ``AeA`` that is not strongly idempotent.

    Yields dictionaries describing every hit; ``limit`` caps the number of
    algebras examined.
    """
    seen = 0
    for nv in range(1, max_vertices + 1):
        pairs = [(s, t) for s in range(nv) for t in range(nv)]
        for na in range(0, max_arrows + 1):
            for arrows in itertools.combinations_with_replacement(pairs, na):
                paths2 = _short_paths(arrows, max_relation_degree)
                for nrel in range(0, min(len(paths2), 3) + 1):
                    for rels in itertools.combinations(paths2, nrel):
                        if limit is not None and seen >= limit:
                            return
                        try:
                            A = path_algebra(p, nv, list(arrows), rels, max_length=6, max_dim=12)
                        except AlgebraError:
                            continue
                        if A.dim > 12:
                            continue
                        seen += 1
                        for mask in range(1, 2 ** nv - 1):
                            e = sum(A.primitive_idempotents[i] for i in range(nv) if mask >> i & 1) % p
                            a = ideal_from_idempotent(A, e)
                            res = is_strongly_idempotent(A, a, d)
                            if not res["holds"]:
                                yield {"vertices": nv, "arrows": list(arrows), "zero_paths": list(rels),
                                       "idempotent_vertices": [i + 1 for i in range(nv) if mask >> i & 1],
                                       "verdict": res["verdict"], "tor": res["tor"]}


def _short_paths(arrows, max_len):
    out = []
    layer = [(a,) for a in range(len(arrows))]
    for L in range(1, max_len + 1):
        if L >= 2:
            out += layer
        nxt = []
        for q in layer:
            end = arrows[q[-1]][1]
            nxt += [q + (b,) for b, (s, _) in enumerate(arrows) if s == end]
        layer = nxt
    return out
