"""Task files: JSON documents declaring rings, modules, algebras and verification tasks.

Top-level keys (all optional except ``tasks``)::

    schema        "workbench-tasks/1"
    name          suite name
    rings         {id: {"kind": "integers", "s": 2} | {"kind": "skew", "p", "m", "modulus", "sigma_power"}}
    modules       {id: {"ring": id, "relations": [[...]], "ngens": k}
                       | {"ring": id, "diagonal": [...], "free": r}}
    algebras      {id: {"preset": "lower_triangular_a2" | "full_matrix", "p", "n"}
                       | {"p", "structure_constants", "unit", "names", "idempotents"}
                       | {"p", "quiver": {"vertices", "arrows", "zero_paths"}}}
    ideals        {id: {"algebra": id, "generators": [[...]]} | {"algebra": id, "idempotent": [...]}}
    fd_modules    {id: {"algebra": id, "standard": "simple"|"projective"|"injective", "index": i}
                       | {"algebra": id, "regular": true} | {"algebra": id, "action": [[[...]]]}}
    finite_rings  {id: {"N": N, "S": [...]}}
    tasks         [{"id", "op", ...parameters..., "expect": {key: value}}]

Ring elements are integers over Z and lists of field codes (by x-degree) over
skew polynomial rings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import fd
from .finite_ring import FiniteSetting
from .mgm import IdealSetting, Refused
from .modules import ModuleError, PresentedModule, diagonal_module
from .rings import RingError, as_elements, ring_from_description

SCHEMA = "workbench-tasks/1"


class TaskFileError(ValueError):
    """Syntax or validation error, with a location when one is known."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


@dataclass
class TaskFile:
    name: str = ""
    rings: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    algebras: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)
    fd_modules: dict = field(default_factory=dict)
    finite_rings: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise TaskFileError(f"missing key {key!r}", where)
    return d[key]


def _ref(table: dict, key, kind: str, where: str):
    if key not in table:
        raise TaskFileError(f"unknown {kind} {key!r}", where)
    return table[key]


def _build_ring(d, where):
    try:
        return ring_from_description(d)
    except (RingError, KeyError, TypeError, ValueError) as e:
        raise TaskFileError(f"bad ring: {e}", where) from None


def _build_module(tf: TaskFile, d: dict, where: str) -> PresentedModule:
    R = _ref(tf.rings, _need(d, "ring", where), "ring", where)
    try:
        if "diagonal" in d:
            diag = [R.from_json(x) for x in d["diagonal"]]
            return diagonal_module(R, diag, int(d.get("free", 0)))
        rels = as_elements(R, d.get("relations", []))
        n = int(d.get("ngens", len(rels[0]) if rels else 0))
        if any(len(r) != n for r in rels):
            raise TaskFileError("relation rows must have ngens entries", where)
        return PresentedModule(R, n, rels)
    except (ModuleError, RingError, TypeError, ValueError) as e:
        if isinstance(e, TaskFileError):
            raise
        raise TaskFileError(f"bad module: {e}", where) from None


def _build_algebra(d: dict, where: str) -> fd.FdAlgebra:
    p = int(d.get("p", 2))
    try:
        if "preset" in d:
            kind = d["preset"]
            if kind == "lower_triangular_a2":
                return fd.lower_triangular_a2(p)
            if kind == "full_matrix":
                return fd.full_matrix_algebra(p, int(d.get("n", 2)))
            raise TaskFileError(f"unknown preset {kind!r}", where)
        if "quiver" in d:
            q = d["quiver"]
            return fd.path_algebra(p, int(q["vertices"]), [tuple(a) for a in q.get("arrows", [])],
                                   [tuple(z) for z in q.get("zero_paths", [])])
        const = np.array(_need(d, "structure_constants", where), dtype=np.int64)
        unit = np.array(_need(d, "unit", where), dtype=np.int64)
        idem = d.get("idempotents")
        idem = [np.array(e, dtype=np.int64) for e in idem] if idem is not None else None
        return fd.build_algebra(p, const, unit, d.get("names"), idem)
    except fd.AlgebraError as e:
        raise TaskFileError(f"invalid algebra: {e}", where) from None
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, TaskFileError):
            raise
        raise TaskFileError(f"bad algebra data: {e}", where) from None


def _build_ideal(tf: TaskFile, name: str, d: dict, where: str) -> IdealSetting:
    A = _ref(tf.algebras, _need(d, "algebra", where), "algebra", where)
    try:
        if "idempotent" in d:
            gens = fd.ideal_from_idempotent(A, np.array(d["idempotent"], dtype=np.int64))
        else:
            gens = np.array(_need(d, "generators", where), dtype=np.int64).reshape(-1, A.dim)
        return IdealSetting(A, gens, name)
    except Refused as e:
        raise TaskFileError(str(e), where) from None
    except ValueError as e:
        if isinstance(e, TaskFileError):
            raise
        raise TaskFileError(f"bad ideal: {e}", where) from None


def _build_fd_module(tf: TaskFile, name: str, d: dict, where: str) -> fd.FdModule:
    A = _ref(tf.algebras, _need(d, "algebra", where), "algebra", where)
    try:
        if d.get("regular"):
            M = fd.regular_module(A)
        elif "standard" in d:
            table = {"simple": fd.simple_modules, "projective": fd.indecomposable_projectives,
                     "injective": fd.indecomposable_injectives}
            kind = d["standard"]
            if kind not in table:
                raise TaskFileError(f"unknown standard module kind {kind!r}", where)
            mods = table[kind](A)
            i = int(d.get("index", 0))
            if not 0 <= i < len(mods):
                raise TaskFileError(f"index {i} out of range (0..{len(mods) - 1})", where)
            M = mods[i]
        else:
            act = [np.array(a, dtype=np.int64) for a in _need(d, "action", where)]
            M = fd.FdModule(A, act, name)
        M.name = name
        return M
    except fd.AlgebraError as e:
        raise TaskFileError(f"invalid module: {e}", where) from None


def parse_task_file(text: str) -> TaskFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise TaskFileError(e.msg, f"line {e.lineno}, column {e.colno}") from None
    if not isinstance(doc, dict):
        raise TaskFileError("top level must be an object", "line 1, column 1")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise TaskFileError(f"unsupported schema {schema!r}", "schema")
    tf = TaskFile(name=str(doc.get("name", "")))
    for k, d in doc.get("rings", {}).items():
        tf.rings[k] = _build_ring(d, f"rings.{k}")
    for k, d in doc.get("modules", {}).items():
        tf.modules[k] = _build_module(tf, d, f"modules.{k}")
    for k, d in doc.get("algebras", {}).items():
        tf.algebras[k] = _build_algebra(d, f"algebras.{k}")
    for k, d in doc.get("ideals", {}).items():
        tf.ideals[k] = _build_ideal(tf, k, d, f"ideals.{k}")
    for k, d in doc.get("fd_modules", {}).items():
        tf.fd_modules[k] = _build_fd_module(tf, k, d, f"fd_modules.{k}")
    for k, d in doc.get("finite_rings", {}).items():
        try:
            tf.finite_rings[k] = FiniteSetting(int(_need(d, "N", f"finite_rings.{k}")), tuple(d.get("S", [1])))
        except ModuleError as e:
            raise TaskFileError(str(e), f"finite_rings.{k}") from None
    tasks = doc.get("tasks", [])
    if not isinstance(tasks, list):
        raise TaskFileError("tasks must be a list", "tasks")
    from .runner import validate_task

    seen = set()
    for i, t in enumerate(tasks):
        where = f"tasks[{i}]"
        if not isinstance(t, dict):
            raise TaskFileError("task must be an object", where)
        tid = str(t.get("id", f"task-{i}"))
        if tid in seen:
            raise TaskFileError(f"duplicate task id {tid!r}", where)
        seen.add(tid)
        validate_task(tf, t, where)
        tf.tasks.append(dict(t, id=tid))
    return tf
