"""Independent reference computations used by the tests.

Nothing here calls the normal-form or module code of the package; every
oracle works from definitions (minors, element enumeration, coefficient
expansion) so it can catch mistakes in the optimised paths.
"""

from itertools import combinations, product
from math import gcd

import numpy as np
import sympy


def determinant_divisors(A):
    """d_k = gcd of all k x k minors, for k = 1..rank."""
    M = sympy.Matrix(A)
    m, n = M.shape
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, int(M.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        out.append(g)
    return out


def smith_diagonal(A):
    """Invariant factors from determinant divisors: d_k / d_{k-1}."""
    dd = determinant_divisors(A)
    prev, out = 1, []
    for d in dd:
        out.append(d // prev)
        prev = d
    return out


def group_elements(orders):
    return list(product(*[range(o) for o in orders]))


def s_torsion_size(orders, s):
    """Count elements x of Z/o1 + ... with s^k x = 0 for some k."""
    count = 0
    for x in group_elements(orders):
        y = x
        for _ in range(64):
            if all(c == 0 for c in y):
                count += 1
                break
            y = tuple((s * c) % o for c, o in zip(y, orders))
    return count


def kernel_size(orders, c):
    return sum(1 for x in group_elements(orders) if all((c * a) % o == 0 for a, o in zip(x, orders)))


def image_size(orders, c):
    return len({tuple((c * a) % o for a, o in zip(x, orders)) for x in group_elements(orders)})


def hom_count_cyclic(a, b):
    """Number of homomorphisms Z/a -> Z/b, by testing every image of the generator."""
    return sum(1 for g in range(b) if (a * g) % b == 0)


def hom_count(src_orders, tgt_orders):
    """Homomorphisms between finite abelian groups given by cyclic factors, by enumeration of generator images."""
    tgt = group_elements(tgt_orders)
    per_gen = []
    for a in src_orders:
        per_gen.append(sum(1 for y in tgt if all((a * c) % o == 0 for c, o in zip(y, tgt_orders))))
    n = 1
    for k in per_gen:
        n *= k
    return n


def order_of_description(desc: str) -> int:
    """Cardinality from a description like 'Z/2 + Z/4' ('0' is trivial)."""
    if desc == "0":
        return 1
    n = 1
    for part in desc.split(" + "):
        assert part.startswith("Z/"), desc
        n *= int(part[2:])
    return n


def skew_mul(F, k, a, b):
    """Product in F[x; Frob^k] by expanding x^i c = Frob^{ik}(c) x^i coefficientwise."""
    out = [0] * (len(a) + len(b))
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            c = F.mul(ai, F.frob(bj, (k * i) % F.m))
            out[i + j] = F.add(out[i + j], c)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def fd_annihilator_dim(A, ideal_rows, M):
    """dim {x in M : a x = 0 for all a in the ideal}, by enumerating every vector over F_p."""
    p = M.p
    acts = [M.action(a) for a in ideal_rows]
    count = 0
    for v in product(range(p), repeat=M.dim):
        x = np.array(v, dtype=np.int64)
        if all(not ((act @ x) % p).any() for act in acts):
            count += 1
    dim = 0
    while p ** dim < count:
        dim += 1
    assert p ** dim == count
    return dim
