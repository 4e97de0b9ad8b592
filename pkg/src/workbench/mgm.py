"""Entry points for the torsion/completion constructions and their verifiers.

Three kinds of setting are understood:

* a ring with a normal regular element s (``Integers`` or ``SkewPoly``);
  modules carry their ring, so operations take the module directly;
* ``FiniteSetting``: Z/N with a multiplicative set S;
* ``IdealSetting``: a finite-dimensional algebra with an idempotent ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import fd, localisation as loc, telescope as tel
from .finite_ring import FiniteSetting, build_xi_comparison as _finite_xi, finite_weak_stability, is_injective
from .modules import PresentedModule, abelian_group, cyclic_module, free_module, twist_module
from .rings import Integers, Ring, SkewPoly

koszul_model = tel.koszul_model
telescope_models = tel.telescope_models
rgamma_model = tel.rgamma_model
llambda_model = tel.llambda_model
omega_verify = tel.omega_verify
verify_adjunction = tel.verify_adjunction
verify_localization_triangle = loc.verify_localization_triangle
dg_end_ring = loc.dg_end_ring
homological_epi_check = loc.homological_epi_check
Refused = loc.Refused


@dataclass
class IdealSetting:
    algebra: fd.FdAlgebra
    ideal: np.ndarray
    name: str = "a"

    def __post_init__(self):
        self.ideal = fd.ideal_closure(self.algebra, self.ideal)
        if not fd.is_idempotent_ideal(self.algebra, self.ideal):
            raise Refused(f"ideal {self.name} is not idempotent")

    def describe(self) -> str:
        gens = [self.algebra.element_name(x) for x in self.ideal]
        return f"{self.algebra.describe()}, {self.name} = span{{{', '.join(gens)}}}"


@dataclass
class StabilityReport:
    setting: str
    conditions: dict
    weakly_stable: bool
    agree: bool
    witnesses: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# corpora


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _factor(n: int):
    out, q = {}, 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def abelian_group_orders(max_order: int):
    """Invariant factor lists ``d_1 | d_2 | ...`` of every abelian group of order at most ``max_order``."""
    out = []
    for n in range(2, max_order + 1):
        fac = sorted(_factor(n).items())
        for choice in product(*[list(_partitions(e)) for _, e in fac]):
            width = max(len(c) for c in choice)
            factors = []
            for j in range(width):
                d = 1
                for (q, _), c in zip(fac, choice):
                    if j < len(c):
                        d *= q ** c[j]
                factors.append(d)
            out.append(tuple(sorted(factors)))
    return out


def integer_corpus(s: int = 2, max_order: int = 64, max_rank: int = 2):
    mods = [(f"Z^{r}" if r > 1 else "Z", abelian_group(free=r, s=s)) for r in range(1, max_rank + 1)]
    for fs in abelian_group_orders(max_order):
        mods.append((" + ".join(f"Z/{d}" for d in fs), abelian_group(*fs, s=s)))
    return mods


def skew_corpus(ring: SkewPoly, max_power: int = 3, max_rank: int = 2):
    mods = [(f"A^{r}" if r > 1 else "A", free_module(ring, r)) for r in range(1, max_rank + 1)]
    for k in range(1, max_power + 1):
        m = cyclic_module(ring, ring.s_power(k))
        mods.append((f"A/Ax^{k}", m))
        mods.append((f"twist(A/Ax^{k})", twist_module(m, 1)))
    return mods


def default_corpus(ring: Ring, small: bool = False):
    if isinstance(ring, Integers):
        return integer_corpus(ring.s, 16 if small else 64)
    if isinstance(ring, SkewPoly):
        return skew_corpus(ring)
    raise TypeError(f"no corpus for {ring!r}")


# ---------------------------------------------------------------------------
# dispatching verifiers


def build_xi_comparison(setting, E) -> dict:
    if isinstance(setting, FiniteSetting):
        out = _finite_xi(setting, E)
        out["injective"] = is_injective(setting, E)
        return out
    if isinstance(setting, IdealSetting):
        return loc.fd_xi_comparison(setting.algebra, setting.ideal, E)
    raise TypeError("comparison needs a finite ring or an fd setting")


def weak_stability_report(setting, d: int = 4, corpus=None) -> StabilityReport:
    """Evaluate each checkable condition separately and compare the verdicts."""
    if isinstance(setting, FiniteSetting):
        r = finite_weak_stability(setting, d)
        conds = {"surjective_on_injectives": r["condition_iii"],
                 "cohomological_dimension_at_most_1": r["condition_v"],
                 "xi_quasi_iso_matches": r["xi_matches"]}
        return StabilityReport(r["setting"], conds, r["weakly_stable"], r["verdicts_agree"] and r["xi_matches"],
                               {"injectives": r["injectives"], "derived_gamma": r["derived_gamma"], "bound": d})
    if isinstance(setting, IdealSetting):
        A, a = setting.algebra, setting.ideal
        r = loc.fd_weak_stability(A, a, d)
        seq = loc.injective_sequence_check(A, a)
        xi = [loc.fd_xi_comparison(A, a, E) for E in fd.indecomposable_injectives(A)]
        xi_ok = all(x["quasi_iso"] == x["surjective"] for x in xi)
        conds = {"strongly_idempotent": r["strongly_idempotent"],
                 "weakly_stable": r["weakly_stable"],
                 "cohomological_dimension": r["cohomological_dimension"],
                 "surjective_on_injectives": all(x["surjective"] for x in xi),
                 "injective_sequences_exact": seq,
                 "stable": r["stable"]}
        agree = r["verdicts_agree"] and xi_ok and (conds["surjective_on_injectives"] == r["weakly_stable"])
        return StabilityReport(setting.describe(), conds, r["weakly_stable"], agree,
                               {"per_injective": r["per_injective"], "xi": xi, "bound": d})
    if isinstance(setting, Ring):
        corpus = corpus if corpus is not None else default_corpus(setting, small=True)
        r = tel.ore_weak_stability(setting, corpus, d)
        conds = {"cohomological_dimension_at_most_1": r["cohomological_dimension_at_most_1"],
                 "localized_modules_acyclic": all(x["localized_acyclic"] for x in r["per_module"])}
        return StabilityReport(f"{setting!r}, s = {setting.s!r}", conds, r["weakly_stable"], True,
                               {"corpus_size": len(corpus), "bound": d})
    raise TypeError(f"unknown setting {setting!r}")


def gamma_acyclicity_check(setting, m, d: int = 3) -> dict:
    if isinstance(setting, IdealSetting):
        A, a = setting.algebra, setting.ideal
        try:
            ring = loc.dg_end_ring(A, a, d)
        except Refused:
            ring = None
        return loc.gamma_acyclicity_check(A, a, m, d, ring)
    if isinstance(m, PresentedModule):
        # R Gamma_s(m) is the two-term complex m -> m_s
        r = tel.koszul_model(m)
        h1 = r["H1_tower"].summary
        vanishes = r["H0"].is_zero_module() and h1.get("status") == "stabilized" and h1.get("value") == "0"
        return {"rgamma_vanishes": bool(vanishes), "H0": r["H0"].describe(), "H1": h1, "bound": d}
    raise TypeError(f"unknown setting {setting!r}")


def derived_idempotency_check(setting, m, d: int = 3, n: int = 1) -> dict:
    if isinstance(setting, IdealSetting):
        return loc.fd_derived_idempotency(setting.algebra, setting.ideal, m, d)
    if isinstance(m, PresentedModule):
        return tel.derived_idempotency_ore(m, n)
    raise TypeError(f"unknown setting {setting!r}")


def a2_settings(p: int = 2):
    """The lower-triangular 2x2 algebra with its two nonzero proper idempotent ideals."""
    A = fd.lower_triangular_a2(p)
    e11, e22 = A.basis(0), A.basis(1)
    return A, IdealSetting(A, fd.ideal_from_idempotent(A, e11), "Ae11A"), \
        IdealSetting(A, fd.ideal_from_idempotent(A, e22), "Ae22A")
