"""Execute the tasks of a task file and collect verdicts."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import fd, mgm
from .complexes import SIGN_CONVENTIONS
from .finite_ring import FiniteSetting
from .modules import (
    ModuleError,
    PresentedModule,
    adic_quotient,
    completion_tower,
    hom_module,
    localize_module,
    torsion_submodule_s,
)
from .rings import as_elements, diagonal_normal_form, identity, mat_eq, matmul
from .towers import TowerCertificate

PASS, FAIL, REFUSED = "pass", "fail", "refused-precondition"

CONVENTIONS = dict(SIGN_CONVENTIONS)
CONVENTIONS.update({
    "twist": "x c = sigma(c) x, phi = sigma^-1, telescope basis e_i b = phi^i(b) e_i",
    "telescope": "d e_i = e_i - s e_(i+1); degree 1 has one more generator than degree 0",
    "directed_stabilization": "eventual kernels agree through K and M_K/EK_K -> M_(K+1)/EK_(K+1) is onto",
    "inverse_stabilization": "eventual images agree through K (Mittag-Leffler) and EI_(K+1) -> EI_K is an isomorphism",
    "truncation": "derived functors are reported for degrees 0..d only",
})


@dataclass
class RunConfig:
    max_level: int = 4
    tor_bound: int = 6
    threads: int = 1


@dataclass
class TaskResult:
    id: str
    op: str
    verdict: str
    bounds: dict
    result: dict
    counterexamples: list = field(default_factory=list)
    seconds: float = 0.0


def plain(x):
    """JSON-ready copy of a result; opaque objects (complexes, maps) are dropped."""
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, float):
        return x
    if isinstance(x, np.ndarray):
        return plain(x.tolist())
    if isinstance(x, PresentedModule):
        return x.describe()
    if isinstance(x, TowerCertificate):
        return x.to_json()
    if isinstance(x, fd.FdModule):
        return {"name": x.name, "dim": x.dim}
    if isinstance(x, fd.FdAlgebra):
        return x.describe()
    if isinstance(x, dict):
        out = {}
        for k, v in x.items():
            pv = plain(v)
            if pv is not _DROP:
                out[str(k)] = pv
        return out
    if isinstance(x, (list, tuple)):
        return [v for v in (plain(v) for v in x) if v is not _DROP]
    return _DROP


_DROP = object()


def _lookup(d, path: str):
    cur = d
    for part in path.split("."):
        if not isinstance(cur, dict) or part not in cur:
            raise KeyError(path)
        cur = cur[part]
    return cur


# ---------------------------------------------------------------------------
# operations: each returns (passed, result dict)


def _int(t, key, default):
    v = t.get(key, default)
    if not isinstance(v, int) or v < 0:
        raise ModuleError(f"{key} must be a non-negative integer")
    return v


def op_normal_form(tf, t, cfg):
    R = tf.rings[t["ring"]]
    A = as_elements(R, t["matrix"])
    ncols = len(A[0]) if A else 0
    F = diagonal_normal_form(R, A, ncols)
    ok = mat_eq(R, matmul(R, matmul(R, F.U, A), F.V), F.D)
    ok = ok and mat_eq(R, matmul(R, F.U, F.Uinv), identity(R, len(A)))
    ok = ok and mat_eq(R, matmul(R, F.V, F.Vinv), identity(R, ncols))
    diag = [R.to_json(F.D[i][i]) for i in range(F.rank)]
    return ok, {"diagonal": diag, "rank": F.rank, "U": [[R.to_json(x) for x in r] for r in F.U],
                "V": [[R.to_json(x) for x in r] for r in F.V]}


def op_torsion(tf, t, cfg):
    m = tf.modules[t["module"]]
    sub, inc, N = torsion_submodule_s(m)
    return inc.is_injective(), {"torsion": sub, "exponent": N}


def op_localize(tf, t, cfg):
    m = tf.modules[t["module"]]
    return True, {"localized": localize_module(m)}


def op_adic(tf, t, cfg):
    m = tf.modules[t["module"]]
    q, proj = adic_quotient(m, _int(t, "n", 1))
    return proj.is_surjective(), {"quotient": q}


def op_completion_tower(tf, t, cfg):
    m = tf.modules[t["module"]]
    tw = completion_tower(m, _int(t, "max_level", cfg.max_level))
    return tw.transitions_compose(), {"tower": tw}


def op_hom(tf, t, cfg):
    h = hom_module(tf.modules[t["module"]], tf.modules[t["target"]])
    return True, {"hom": h[0] if isinstance(h, tuple) else h}


def op_koszul(tf, t, cfg):
    r = mgm.koszul_model(tf.modules[t["module"]], _int(t, "max_level", cfg.max_level))
    return r["kernel_is_torsion"], {"H0": r["H0"], "H1": r["H1_tower"].summary,
                                    "localized": r["localized"], "torsion_exponent": r["torsion_exponent"]}


def op_telescope(tf, t, cfg):
    T = mgm.telescope_models(tf.rings[t["ring"]], _int(t, "n", 1))
    return all(T.checks.values()), {"checks": T.checks}


def op_rgamma(tf, t, cfg):
    m = tf.modules[t["module"]]
    n = _int(t, "n", 1)
    r = mgm.rgamma_model(m, n)
    ok = r["agrees_with_koszul_power"] and r["H"][0].isomorphic(r["H0_expected"]) \
        and r["H"][1].isomorphic(r["H1_expected"])
    return ok, {"H0": r["H"][0], "H1": r["H"][1], "agrees_with_koszul_power": r["agrees_with_koszul_power"],
                "H0_colimit": r["towers"][0].summary, "H1_colimit": r["towers"][1].summary}


def op_llambda(tf, t, cfg):
    m = tf.modules[t["module"]]
    n = _int(t, "n", 1)
    r = mgm.llambda_model(m, n)
    ok = r["H"][0].isomorphic(r["H0_expected"]) and r["H"][-1].isomorphic(r["Hm1_expected"])
    return ok, {"H0": r["H"][0], "H-1": r["H"][-1], "H0_limit": r["towers"][0].summary,
                "H-1_limit": r["towers"][-1].summary, "lookahead": r["lookahead"]}


def op_omega(tf, t, cfg):
    r = mgm.omega_verify(tf.modules[t["module"]], _int(t, "n", 1))
    return r["pass"], r


def op_adjunction(tf, t, cfg):
    r = mgm.verify_adjunction(tf.modules[t["module"]], tf.modules[t["target"]], _int(t, "n", 1))
    return r["pass"], {"termwise_iso": r["termwise_iso"], "H_left": r["H_left"], "H_right": r["H_right"],
                       "H0_limit": r["H0_tower"].summary}


def _setting(tf, t):
    if "ideal" in t:
        return tf.ideals[t["ideal"]]
    if "finite_ring" in t:
        return tf.finite_rings[t["finite_ring"]]
    if "ring" in t:
        return tf.rings[t["ring"]]
    raise ModuleError("task needs an ideal, finite_ring or ring")


def op_weak_stability(tf, t, cfg):
    st = _setting(tf, t)
    r = mgm.weak_stability_report(st, _int(t, "d", cfg.tor_bound))
    return r.agree, {"setting": r.setting, "conditions": r.conditions, "weakly_stable": r.weakly_stable,
                     "verdicts_agree": r.agree, "witnesses": r.witnesses}


def _injective_for(tf, t, st):
    if isinstance(st, FiniteSetting):
        return st.module(*t.get("injective", [st.N]))
    return tf.fd_modules[t["fd_module"]]


def op_xi(tf, t, cfg):
    st = _setting(tf, t)
    E = _injective_for(tf, t, st)
    r = mgm.build_xi_comparison(st, E)
    ok = r["quasi_iso"] == r["surjective"] and r.get("injective", True)
    return ok, r


def op_triangle(tf, t, cfg):
    st = tf.ideals[t["ideal"]]
    r = mgm.verify_localization_triangle(st.algebra, st.ideal, tf.fd_modules[t["fd_module"]],
                                         _int(t, "d", cfg.tor_bound))
    return r["pass"], r


def op_dg_end(tf, t, cfg):
    st = tf.ideals[t["ideal"]]
    R = mgm.dg_end_ring(st.algebra, st.ideal, _int(t, "d", cfg.tor_bound))
    out = {"cohomology_dims": R.cohomology_dims, "checks": R.checks, "notes": R.notes,
           "les_dims": R.triangle["les_dims"]}
    if R.h0_algebra is not None:
        out["h0_dim"] = R.h0_algebra.dim
        out["unit_map"] = R.unit_map
        out["matrix_algebra"] = mgm.loc.matrix_algebra_certificate(R.h0_algebra)
    return all(R.checks.values()), out


def op_epi(tf, t, cfg):
    st = tf.ideals[t["ideal"]]
    A, a = st.algebra, st.ideal
    d = _int(t, "d", cfg.tor_bound)
    kind = t.get("map", "localisation")
    if kind == "localisation":
        R = mgm.dg_end_ring(A, a, _int(t, "ring_bound", min(d, 3)))
        if R.h0_algebra is None:
            raise mgm.Refused("higher cohomology present: H^0 does not represent the localisation")
        B, phi = R.h0_algebra, R.unit_map
    elif kind == "quotient":
        B, P = fd.quotient_algebra(A, a)
        phi = P
    elif kind == "identity":
        B, phi = A, np.eye(A.dim, dtype=np.int64)
    else:
        raise ModuleError(f"unknown map kind {kind!r}")
    r = mgm.homological_epi_check(A, B, phi, d)
    return r["pass"], r


def op_acyclic(tf, t, cfg):
    d = _int(t, "d", 3)
    if "ideal" in t:
        r = mgm.gamma_acyclicity_check(tf.ideals[t["ideal"]], tf.fd_modules[t["fd_module"]], d)
        return r.get("consistent", True), r
    r = mgm.gamma_acyclicity_check(None, tf.modules[t["module"]], d)
    return True, r


def op_derived_idem(tf, t, cfg):
    d = _int(t, "d", 3)
    if "ideal" in t:
        r = mgm.derived_idempotency_check(tf.ideals[t["ideal"]], tf.fd_modules[t["fd_module"]], d)
    else:
        r = mgm.derived_idempotency_check(None, tf.modules[t["module"]], d, _int(t, "n", 1))
    return r["pass"], r


def op_strong(tf, t, cfg):
    st = tf.ideals[t["ideal"]]
    r = fd.is_strongly_idempotent(st.algebra, st.ideal, _int(t, "d", cfg.tor_bound))
    return r["holds"], r


def op_ext(tf, t, cfg):
    M, N = tf.fd_modules[t["fd_module"]], tf.fd_modules[t["target"]]
    d = _int(t, "d", cfg.tor_bound)
    a, b = fd.ext_dims(M, N, d, "projective"), fd.ext_dims(M, N, d, "injective")
    return a == b, {"ext": a, "ext_via_injective": b}


def op_tor(tf, t, cfg):
    st = tf.ideals[t["ideal"]]
    A, a = st.algebra, st.ideal
    d = _int(t, "d", cfg.tor_bound)
    Mr, N = fd.quotient_by_ideal(A, a, "right"), fd.quotient_by_ideal(A, a, "left")
    x, y = fd.tor_dims(Mr, N, d, "left"), fd.tor_dims(Mr, N, d, "right")
    return x == y, {"tor": x, "tor_via_right": y}


def op_gamma(tf, t, cfg):
    st = tf.ideals[t["ideal"]]
    g, inc = fd.gamma_ideal(st.algebra, st.ideal, tf.fd_modules[t["fd_module"]])
    return inc.is_injective(), {"dim": g.dim}


def op_q(tf, t, cfg):
    st = tf.ideals[t["ideal"]]
    q = fd.q_functor(st.algebra, st.ideal, tf.fd_modules[t["fd_module"]])
    return True, {"dim": q.module.dim, "tau_rank": q.tau.rank()}


def op_pointed(tf, t, cfg):
    st = tf.ideals[t["ideal"]]
    r = mgm.loc.verify_pointed_idempotence(st.algebra, st.ideal, fd.standard_corpus(st.algebra),
                                           _int(t, "d", cfg.tor_bound))
    return r["pass"], r


def _resolution(kind):
    def run(tf, t, cfg):
        M = tf.fd_modules[t["fd_module"]]
        d = _int(t, "d", cfg.tor_bound)
        R = fd.projective_resolution(M, d) if kind == "projective" else fd.injective_resolution(M, d)
        return R.is_exact(), {"dims": R.dims}
    return run


# name -> (handler, required references {key: table})
OPS = {
    "diagonal_normal_form": (op_normal_form, {"ring": "rings"}),
    "torsion_submodule_s": (op_torsion, {"module": "modules"}),
    "localize_module": (op_localize, {"module": "modules"}),
    "adic_quotient": (op_adic, {"module": "modules"}),
    "completion_tower": (op_completion_tower, {"module": "modules"}),
    "hom_module": (op_hom, {"module": "modules", "target": "modules"}),
    "koszul_model": (op_koszul, {"module": "modules"}),
    "telescope_models": (op_telescope, {"ring": "rings"}),
    "rgamma_model": (op_rgamma, {"module": "modules"}),
    "llambda_model": (op_llambda, {"module": "modules"}),
    "omega_verify": (op_omega, {"module": "modules"}),
    "verify_adjunction": (op_adjunction, {"module": "modules", "target": "modules"}),
    "weak_stability_report": (op_weak_stability, {}),
    "build_xi_comparison": (op_xi, {}),
    "verify_localization_triangle": (op_triangle, {"ideal": "ideals", "fd_module": "fd_modules"}),
    "dg_end_ring": (op_dg_end, {"ideal": "ideals"}),
    "homological_epi_check": (op_epi, {"ideal": "ideals"}),
    "gamma_acyclicity_check": (op_acyclic, {}),
    "derived_idempotency_check": (op_derived_idem, {}),
    "is_strongly_idempotent": (op_strong, {"ideal": "ideals"}),
    "ext_groups": (op_ext, {"fd_module": "fd_modules", "target": "fd_modules"}),
    "tor_groups": (op_tor, {"ideal": "ideals"}),
    "gamma_ideal": (op_gamma, {"ideal": "ideals", "fd_module": "fd_modules"}),
    "q_functor": (op_q, {"ideal": "ideals", "fd_module": "fd_modules"}),
    "verify_pointed_idempotence": (op_pointed, {"ideal": "ideals"}),
    "projective_resolution": (_resolution("projective"), {"fd_module": "fd_modules"}),
    "injective_resolution": (_resolution("injective"), {"fd_module": "fd_modules"}),
}

# optional references checked when present
_OPTIONAL = {"ring": "rings", "module": "modules", "ideal": "ideals", "fd_module": "fd_modules",
             "finite_ring": "finite_rings", "target": "modules"}


def validate_task(tf, t: dict, where: str) -> None:
    from .taskfile import TaskFileError

    op = t.get("op")
    if op not in OPS:
        raise TaskFileError(f"unknown op {op!r}", where)
    _, refs = OPS[op]
    for key, table in refs.items():
        if key not in t:
            raise TaskFileError(f"{op} needs {key!r}", where)
        if t[key] not in getattr(tf, table):
            raise TaskFileError(f"unknown {table[:-1]} {t[key]!r}", where)
    for key, table in _OPTIONAL.items():
        if key in t and key not in refs and t[key] not in getattr(tf, table):
            raise TaskFileError(f"unknown {table[:-1]} {t[key]!r}", where)
    if "expect" in t and not isinstance(t["expect"], dict):
        raise TaskFileError("expect must be an object", where)


def _bounds(t: dict, cfg: RunConfig) -> dict:
    out = {}
    for k in ("n", "d", "max_level", "ring_bound"):
        if k in t:
            out[k] = t[k]
    out.setdefault("max_level", cfg.max_level)
    out.setdefault("d", cfg.tor_bound)
    return out


def run_task(tf, t: dict, cfg: RunConfig) -> TaskResult:
    handler, _ = OPS[t["op"]]
    start = time.perf_counter()
    try:
        ok, res = handler(tf, t, cfg)
        res = plain(res)
        verdict = PASS if ok else FAIL
        cex = [] if ok else [{"reason": "verifier returned false"}]
        for key, want in sorted(t.get("expect", {}).items()):
            try:
                got = _lookup(res, key)
            except KeyError:
                got = None
            if got != want:
                verdict = FAIL
                cex.append({"claim": key, "expected": want, "actual": got})
    except (mgm.Refused, ModuleError, fd.AlgebraError, MemoryError, RecursionError) as e:
        res, verdict, cex = {}, REFUSED, [{"reason": f"{type(e).__name__}: {e}"}]
    return TaskResult(t["id"], t["op"], verdict, _bounds(t, cfg), res, cex, time.perf_counter() - start)


@dataclass
class Report:
    suite: str
    config: RunConfig
    results: list

    @property
    def all_pass(self) -> bool:
        return all(r.verdict == PASS for r in self.results)

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, REFUSED: 0}
        for r in self.results:
            out[r.verdict] += 1
        return out


def run_tasks(tf, cfg: RunConfig | None = None) -> Report:
    """Run every task; output order is declaration order whatever the thread count."""
    cfg = cfg or RunConfig()
    if cfg.threads > 1 and len(tf.tasks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            results = list(ex.map(lambda t: run_task(tf, t, cfg), tf.tasks))
    else:
        results = [run_task(tf, t, cfg) for t in tf.tasks]
    return Report(tf.name, cfg, results)
