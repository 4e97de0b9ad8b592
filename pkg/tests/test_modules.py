import pytest
from hypothesis import given, settings, strategies as st

from oracles import hom_count, image_size, s_torsion_size, smith_diagonal
from workbench.mgm import abelian_group_orders
from workbench.modules import (
    ModuleError,
    ModuleMap,
    PresentedModule,
    abelian_group,
    adic_quotient,
    completion_tower,
    cyclic_module,
    free_module,
    hom_module,
    localization_kernel_is_torsion,
    localize_module,
    quotient,
    s_power_map,
    torsion_submodule_s,
    twist_module,
)
from workbench.rings import Integers, f4_skew

ZZ = Integers(2)
F4 = f4_skew()
GROUPS = abelian_group_orders(64)


def _order(orders):
    n = 1
    for o in orders:
        n *= o
    return n


def _odd_part(n):
    while n % 2 == 0:
        n //= 2
    return n


def test_group_count():
    # number of abelian groups of each order, summed for orders 2..64
    assert len(GROUPS) == 116
    assert sum(1 for g in GROUPS if _order(g) == 64) == 11


def test_invariants_from_presentation():
    m = PresentedModule(ZZ, 3, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert m.describe() == "Z/2 + Z/6 + Z/12"
    assert smith_diagonal([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert m.order() == 144


def test_free_and_zero():
    assert free_module(ZZ, 2).describe() == "Z^2"
    assert PresentedModule(ZZ, 1, [[1]]).is_zero_module()
    with pytest.raises(ModuleError):
        free_module(ZZ, 1).order()


@pytest.mark.parametrize("orders", GROUPS, ids=lambda g: "x".join(map(str, g)))
def test_torsion_and_localisation_by_enumeration(orders):
    m = abelian_group(*orders)
    tors, inc, N = torsion_submodule_s(m)
    assert tors.order() == s_torsion_size(orders, 2)
    assert inc.is_injective()
    ms = localize_module(m)
    assert ms.is_finite()
    # M_s is the odd part of M
    expected = 1
    for o in orders:
        expected *= _odd_part(o)
    assert _order([abs(d) for d in ms.invariants[1]]) == expected
    assert localization_kernel_is_torsion(m)
    # M / 2^n M has size |M| / |2^n M|
    for n in (1, 2):
        q, proj = adic_quotient(m, n)
        assert q.order() * image_size(orders, 2 ** n) == _order(orders)
        assert proj.is_surjective()


def test_torsion_exponent():
    assert torsion_submodule_s(abelian_group(8, 3))[2] == 3
    assert torsion_submodule_s(abelian_group(9))[2] == 0
    assert torsion_submodule_s(free_module(ZZ, 1))[0].is_zero_module()


def test_localisation_examples():
    assert localize_module(abelian_group(12, 3)).describe() == "Z/3 + Z/3"
    assert localize_module(abelian_group(free=1)).describe() == "Z[1/s]"
    assert localize_module(abelian_group(8)).is_zero_module()


def test_skew_torsion_and_localisation():
    m = cyclic_module(F4, F4.s_power(3))
    tors, _, N = torsion_submodule_s(m)
    assert N == 3 and tors.dimension() == 6
    assert localize_module(m).is_zero_module()
    c = cyclic_module(F4, F4.elem([1, 1]))  # 1 + x is coprime to x
    assert torsion_submodule_s(c)[0].is_zero_module()
    assert not localize_module(c).is_zero_module()


def test_adic_quotient_rejects_bad_precision():
    with pytest.raises(ModuleError):
        adic_quotient(free_module(ZZ, 1), 0)


def test_completion_tower_of_integers():
    t = completion_tower(abelian_group(4, 3, free=1), 4)
    levels = [lv["module"] for lv in t.to_json()["levels"]]
    assert levels == ["Z/2 + Z/2", "Z/4 + Z/4", "Z/4 + Z/8", "Z/4 + Z/16"]
    assert t.transitions_compose()
    assert t.summary["lim1_vanishes"]


def test_completion_tower_of_torsion_module_stabilises():
    t = completion_tower(abelian_group(8, 5), 5)
    assert t.summary["status"] == "stabilized"
    assert t.summary["value"] == "Z/8"
    assert t.summary["level"] == 3


def test_completion_tower_needs_two_levels():
    with pytest.raises(ModuleError):
        completion_tower(free_module(ZZ, 1), 1)


def test_twist_is_trivial_over_integers_and_invertible_over_skew():
    m = abelian_group(6)
    assert twist_module(m, 3).describe() == m.describe()
    c = cyclic_module(F4, F4.elem([2, 1]))
    back = twist_module(twist_module(c, 1), -1)
    assert back.relations == c.relations
    assert twist_module(c, 2).relations == c.relations  # sigma has order 2


def test_s_power_map_is_a_module_map():
    c = cyclic_module(F4, F4.elem([2, 0, 1]))
    f = s_power_map(c, 1)
    assert f.is_well_defined()
    assert f.is_iso()  # x is invertible modulo a polynomial with nonzero constant term


@settings(max_examples=40)
@given(st.sampled_from([g for g in GROUPS if _order(g) <= 24]),
       st.sampled_from([g for g in GROUPS if _order(g) <= 24]))
def test_hom_against_enumeration(a, b):
    H, maps = hom_module(abelian_group(*a), abelian_group(*b))
    assert H.order() == hom_count(a, b)
    src, tgt = abelian_group(*a), abelian_group(*b)
    for mat in maps:
        assert ModuleMap(src, tgt, mat).is_well_defined()


def test_hom_examples():
    assert hom_module(abelian_group(4), abelian_group(6))[0].describe() == "Z/2"
    assert hom_module(free_module(ZZ, 1), abelian_group(5))[0].describe() == "Z/5"
    assert hom_module(abelian_group(3), free_module(ZZ, 1))[0].is_zero_module()


def test_skew_hom_dimension():
    m = cyclic_module(F4, F4.s)
    n = cyclic_module(F4, F4.s_power(2))
    H, _ = hom_module(m, n)
    # maps A/Ax -> A/Ax^2 send 1 to an element killed by x on the left action: F_4 x
    assert H.dimension() == 2


def test_quotient_projection():
    m = free_module(ZZ, 2)
    q, proj = quotient(m, [[2, 4]])
    assert q.describe() == "Z/2 + Z"
    assert proj.is_surjective() and not proj.is_injective()
