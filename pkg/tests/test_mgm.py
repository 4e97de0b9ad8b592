import pytest

from workbench import fd
from workbench.finite_ring import FiniteSetting
from workbench.mgm import (
    IdealSetting,
    Refused,
    a2_settings,
    abelian_group_orders,
    build_xi_comparison,
    default_corpus,
    derived_idempotency_check,
    gamma_acyclicity_check,
    integer_corpus,
    skew_corpus,
    weak_stability_report,
)
from workbench.modules import abelian_group, cyclic_module
from workbench.rings import Integers, f4_skew

ZZ = Integers(2)
F4 = f4_skew()


def test_group_orders_are_divisor_chains():
    for fs in abelian_group_orders(64):
        assert all(fs[i + 1] % fs[i] == 0 for i in range(len(fs) - 1))
        assert all(d > 1 for d in fs)
    assert len(set(abelian_group_orders(64))) == len(abelian_group_orders(64))


def test_corpora():
    assert len(integer_corpus(2, 64)) == 118
    names = [n for n, _ in skew_corpus(F4)]
    assert names[:2] == ["A", "A^2"] and "twist(A/Ax^3)" in names
    assert len(default_corpus(ZZ, small=True)) < len(default_corpus(ZZ))
    with pytest.raises(TypeError):
        default_corpus(object())


def test_ideal_setting_refuses_radical():
    A = fd.lower_triangular_a2(2)
    with pytest.raises(Refused):
        IdealSetting(A, A.radical, "rad")


def test_a2_reports():
    A, a, ap = a2_settings()
    ra, rap = weak_stability_report(a), weak_stability_report(ap)
    assert ra.weakly_stable and ra.agree and not ra.conditions["stable"]
    assert rap.weakly_stable and rap.agree and rap.conditions["stable"]
    assert ra.conditions["cohomological_dimension"] == 0
    assert rap.conditions["cohomological_dimension"] == 1
    assert "e22" in ap.describe()


@pytest.mark.parametrize("S", [(1, 4), (1, 3, 9)])
def test_finite_reports(S):
    r = weak_stability_report(FiniteSetting(12, S))
    assert r.weakly_stable and r.agree
    assert all(r.conditions.values())


@pytest.mark.parametrize("ring", [ZZ, F4], ids=["Z", "F4"])
def test_ore_reports(ring):
    r = weak_stability_report(ring, d=3)
    assert r.weakly_stable
    assert r.conditions["localized_modules_acyclic"]


def test_unknown_setting():
    with pytest.raises(TypeError):
        weak_stability_report("nothing")
    with pytest.raises(TypeError):
        build_xi_comparison("nothing", None)


def test_xi_dispatch():
    F = FiniteSetting(12, (1, 4))
    r = build_xi_comparison(F, F.module(4))
    assert r["injective"] and r["quasi_iso"]
    A, _, ap = a2_settings()
    for E in fd.indecomposable_injectives(A):
        r = build_xi_comparison(ap, E)
        assert r["quasi_iso"] == r["surjective"]


def test_acyclicity_over_ore_rings():
    assert gamma_acyclicity_check(ZZ, abelian_group(3))["rgamma_vanishes"]
    assert not gamma_acyclicity_check(ZZ, abelian_group(free=1))["rgamma_vanishes"]
    assert not gamma_acyclicity_check(ZZ, abelian_group(4))["rgamma_vanishes"]
    assert gamma_acyclicity_check(F4, cyclic_module(F4, F4.elem([1, 1])))["rgamma_vanishes"]


def test_acyclicity_over_a2():
    A, _, ap = a2_settings()
    S1, S2 = fd.simple_modules(A)
    P1 = fd.indecomposable_projectives(A)[0]
    assert not gamma_acyclicity_check(ap, S1)["rgamma_vanishes"]
    assert not gamma_acyclicity_check(ap, S2)["rgamma_vanishes"]
    r = gamma_acyclicity_check(ap, P1)
    assert r["rgamma_vanishes"] and r["extends_to_h0"]


def test_derived_idempotency_dispatch():
    A, _, ap = a2_settings()
    assert derived_idempotency_check(ap, fd.regular_module(A))["pass"]
    assert derived_idempotency_check(ZZ, abelian_group(2, free=1))["pass"]
