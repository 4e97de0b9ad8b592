import pytest
from hypothesis import given, settings, strategies as st

from oracles import smith_diagonal
from workbench.complexes import (
    BoundedComplex,
    ChainMap,
    ComplexError,
    FreeBimoduleComplex,
    direct_sum_complex,
    euler_characteristic,
    hom_complex,
    identity_chain_map,
    is_quasi_iso,
    mapping_cone,
    shift,
    single,
    tensor_with_module,
    two_term,
    verify_les,
)
from workbench.modules import ModuleMap, abelian_group, cyclic_module, free_module
from workbench.rings import Integers, f4_skew

ZZ = Integers(2)
F4 = f4_skew()


def mul_by(c, m=None):
    m = m or free_module(ZZ, 1)
    return ModuleMap(m, m, [[c]])


def free_rank(m):
    return m.invariants[0]


def test_cone_of_multiplication_by_four():
    X, Y = single(free_module(ZZ, 1)), single(free_module(ZZ, 1))
    t = mapping_cone(ChainMap(X, Y, {0: [[4]]}))
    C = t.cone
    assert (C.lo, C.hi) == (-1, 0)
    assert C.homology(0).module.describe() == "Z/4"
    assert C.homology(-1).module.is_zero_module()
    assert verify_les(t)["exact"]


def test_identity_is_quasi_iso_and_zero_map_is_not():
    c = two_term(mul_by(3))
    assert is_quasi_iso(identity_chain_map(c))["quasi_iso"]
    z = ChainMap(c, c, {})
    r = is_quasi_iso(z)
    assert not r["quasi_iso"]
    assert r["cone_homology"][0] == "Z/3"


def test_quasi_iso_between_different_complexes():
    # Z -3-> Z is quasi-isomorphic to Z/3 in degree 1
    c = two_term(mul_by(3))
    target = single(abelian_group(3), 1)
    f = ChainMap(c, target, {1: [[1]]})
    assert is_quasi_iso(f)["quasi_iso"]


def test_shift_moves_degrees_and_negates():
    c = two_term(mul_by(5), lo=0)
    s = shift(c, 1)
    assert (s.lo, s.hi) == (-1, 0)
    assert s.diffs[0] == [[-5]]
    assert s.homology(0).module.describe() == "Z/5"
    assert shift(c, 2).diffs[0] == [[5]]


def test_bad_complexes_rejected():
    Z = free_module(ZZ, 1)
    with pytest.raises(ComplexError):
        BoundedComplex(ZZ, 0, [Z, Z, Z], [[[1]], [[1]]])  # d^2 = 1
    with pytest.raises(ComplexError):
        BoundedComplex(ZZ, 0, [Z, Z], [])
    c = two_term(mul_by(2))
    with pytest.raises(ComplexError):
        ChainMap(c, c, {0: [[1]], 1: [[3]]})


@settings(max_examples=60)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_cone_of_matrix_has_kernel_and_cokernel(a, b, data):
    M = data.draw(st.lists(st.lists(st.integers(-6, 6), min_size=b, max_size=b), min_size=a, max_size=a))
    X, Y = single(free_module(ZZ, a)), single(free_module(ZZ, b))
    t = mapping_cone(ChainMap(X, Y, {0: M}))
    assert verify_les(t)["exact"]
    h0, hm1 = t.cone.homology(0).module, t.cone.homology(-1).module
    diag = smith_diagonal(M)
    # coker has torsion the nonunit invariant factors and free rank b - rank
    assert free_rank(h0) == b - len(diag)
    assert sorted(abs(d) for d in h0.invariants[1]) == sorted(d for d in diag if d != 1)
    assert free_rank(hm1) == a - len(diag) and not hm1.invariants[1]
    # Euler characteristic of ranks is additive along the triangle
    chi = euler_characteristic(t.cone, free_rank)
    assert chi == euler_characteristic(Y, free_rank) - euler_characteristic(X, free_rank)


@settings(max_examples=40)
@given(st.integers(-8, 8), st.integers(-8, 8).filter(lambda x: x != 0))
def test_les_for_scalar_maps_of_two_term_complexes(k, c):
    X = two_term(mul_by(c))
    t = mapping_cone(ChainMap(X, X, {0: [[k]], 1: [[k]]}))
    assert verify_les(t)["exact"]


def test_direct_sum_complex():
    a = two_term(mul_by(2))
    b = single(abelian_group(3), 1)
    s = direct_sum_complex(a, b)
    assert s.homology(1).module.describe() == "Z/6"


def _koszul(ring):
    # A -s-> A with the target twisted once
    return FreeBimoduleComplex(ring, 0, [[0], [1]], [[[ring.s]]])


def test_tensor_and_hom_with_koszul_over_integers():
    k = _koszul(ZZ)
    m = abelian_group(12, free=1)
    T = tensor_with_module(k, m)
    # kernel and cokernel of multiplication by 2 on Z/12 + Z
    assert T.homology(0).module.describe() == "Z/2"
    assert T.homology(1).module.describe() == "Z/2 + Z/2"
    H = hom_complex(k, m)
    assert (H.lo, H.hi) == (-1, 0)
    assert H.homology(-1).module.describe() == "Z/2"
    assert H.homology(0).module.describe() == "Z/2 + Z/2"


def test_koszul_bimodule_check_over_skew_ring():
    import random

    rng = random.Random(1)
    k = _koszul(F4)
    samples = [F4.random_element(rng, 3) for _ in range(20)]
    assert k.check_bimodule(samples)
    bad = FreeBimoduleComplex(F4, 0, [[0], [0]], [[[F4.s]]])
    assert not bad.check_bimodule(samples)


def test_skew_tensor_detects_twist():
    m = cyclic_module(F4, F4.s_power(2))
    T = tensor_with_module(_koszul(F4), m)
    assert T.homology(0).module.dimension() == 2
    assert T.homology(1).module.dimension() == 2
