from itertools import product

import numpy as np
import pytest

from workbench import fd, localisation as loc
from workbench.mgm import a2_settings

A, SET_A, SET_AP = a2_settings()
a, ap = SET_A.ideal, SET_AP.ideal
QUIVER = fd.path_algebra(2, 2, [(0, 1), (1, 0)], [(0, 1)])


def brute_matrix_units(B):
    """Search all triples (E11, E12, E21) with E22 = 1 - E11 satisfying the 2x2 matrix unit relations."""
    p = B.p
    elems = [np.array(v, dtype=np.int64) for v in product(range(p), repeat=B.dim)]

    def mul(x, y):
        return B.mul(x, y) % p

    def eq(x, y):
        return np.array_equal(x % p, y % p)

    zero = np.zeros(B.dim, dtype=np.int64)
    for e11 in elems:
        if not eq(mul(e11, e11), e11) or eq(e11, zero) or eq(e11, B.unit):
            continue
        e22 = (B.unit - e11) % p
        for e12 in elems:
            if not (eq(mul(e11, e12), e12) and eq(mul(e12, e22), e12) and not eq(e12, zero)):
                continue
            for e21 in elems:
                if eq(mul(e12, e21), e11) and eq(mul(e21, e12), e22) and eq(mul(e22, e21), e21):
                    return e11, e12, e21, e22
    return None


def test_triangle_for_regular_module():
    r = loc.verify_localization_triangle(A, ap, fd.regular_module(A), 3)
    assert r["pass"] and r["les_exact"] and r["degreewise_exact"]
    assert r["homology_dims"] == {"RGamma": [0, 1, 0, 0], "M": [3, 0, 0, 0], "RQ": [4, 0, 0, 0]}
    assert [x for x in r["les_dims"] if x] == [3, 4, 1]
    assert r["euler_defect"] == 0


@pytest.mark.parametrize("setting", [SET_A, SET_AP], ids=["a", "a'"])
def test_triangle_over_corpus(setting):
    for M in fd.standard_corpus(A):
        r = loc.verify_localization_triangle(A, setting.ideal, M, 3)
        assert r["pass"], M.name
        # R Gamma in degree 0 is the torsion submodule
        assert r["homology_dims"]["RGamma"][0] == fd.gamma_ideal(A, setting.ideal, M)[0].dim


def test_rgamma_of_regular_module_matches_ext():
    S1 = fd.simple_modules(A)[0]
    assert fd.ext_dims(S1, fd.regular_module(A), 4) == [0, 1, 0, 0, 0]
    assert fd.gamma_ideal(A, a, fd.regular_module(A))[0].dim == 2


def test_dg_end_ring_flagship():
    D = loc.dg_end_ring(A, ap, 3)
    assert D.cohomology_dims == [4, 0, 0, 0]
    assert all(D.checks.values()), D.checks
    B = D.h0_algebra
    assert B.dim == 4
    assert loc.matrix_algebra_certificate(B)["is_full_matrix_algebra"]
    assert brute_matrix_units(B) is not None
    assert loc.is_algebra_map(A, B, D.unit_map)


def test_dg_end_ring_for_other_ideal():
    D = loc.dg_end_ring(A, a, 3)
    assert D.cohomology_dims[0] == 1
    assert brute_matrix_units(D.h0_algebra) is None


def test_dg_end_ring_refuses_non_strongly_idempotent():
    e = QUIVER.primitive_idempotents[1]
    with pytest.raises(loc.Refused):
        loc.dg_end_ring(QUIVER, fd.ideal_from_idempotent(QUIVER, e), 3)


def test_homological_epimorphism():
    D = loc.dg_end_ring(A, ap, 3)
    r = loc.homological_epi_check(A, D.h0_algebra, D.unit_map, 4)
    assert r["pass"] and r["tensor_dim"] == 4
    BR = loc.right_module_via(D.h0_algebra, D.unit_map, A)
    BL = loc.left_module_via(D.h0_algebra, D.unit_map, A)
    assert fd.tor_dims(BR, BL, 4, "left") == fd.tor_dims(BR, BL, 4, "right") == [4, 0, 0, 0, 0]


def test_quotient_map_is_homological_epi_and_non_algebra_map_fails():
    B, proj = fd.quotient_algebra(A, a)
    assert loc.homological_epi_check(A, B, proj, 4)["pass"]
    bad = np.zeros((A.dim, B.dim), dtype=np.int64)
    assert not loc.homological_epi_check(A, B, bad, 4)["pass"]


def test_gamma_acyclicity_consistent_with_extension():
    D = loc.dg_end_ring(A, ap, 3)
    for M in fd.standard_corpus(A):
        r = loc.gamma_acyclicity_check(A, ap, M, 3, D)
        assert r["consistent"], M.name


def test_pointed_idempotence():
    for ideal in (a, ap):
        r = loc.verify_pointed_idempotence(A, ideal, fd.standard_corpus(A))
        assert r["pass"] and r["maps_agree"]


def test_injective_sequences_and_weak_stability():
    for ideal in (a, ap):
        assert loc.injective_sequence_check(A, ideal)
        r = loc.fd_weak_stability(A, ideal, 4)
        assert r["weakly_stable"] and r["strongly_idempotent"] and r["verdicts_agree"]
    assert loc.fd_weak_stability(A, a, 4)["cohomological_dimension"] == 0
    assert loc.fd_weak_stability(A, ap, 4)["cohomological_dimension"] == 1


def test_derived_idempotency_on_corpus():
    for M in fd.standard_corpus(A):
        assert loc.fd_derived_idempotency(A, ap, M, 3)["pass"], M.name


def test_xi_comparison_matches_surjectivity():
    for ideal in (a, ap):
        for E in fd.indecomposable_injectives(A):
            r = loc.fd_xi_comparison(A, ideal, E)
            assert r["quasi_iso"] == r["surjective"]
