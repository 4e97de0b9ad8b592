"""Finite truncations of directed and inverse systems of modules.

A tower stands in for a (co)limit that is not finitely generated.  The
certificate records, per level, whether the eventual kernel (directed) or the
eventual image (inverse) has stabilised within the available levels, and a
summary that is either the stabilised value or an explicit non-stabilisation
report at the top level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .modules import (
    ModuleMap,
    PresentedModule,
    _section,
    identity_map,
    quotient,
    solve_left,
    stack,
    submodule,
)


@dataclass
class TowerCertificate:
    direction: str  # "directed" or "inverse"
    levels: list
    transitions: list  # directed: levels[k] -> levels[k+1]; inverse: levels[k+1] -> levels[k]
    labels: list
    flags: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @classmethod
    def build(cls, direction: str, levels, transitions, labels=None):
        if direction not in ("directed", "inverse"):
            raise ValueError(f"unknown tower direction {direction!r}")
        if len(transitions) != len(levels) - 1:
            raise ValueError("a tower needs one transition per consecutive pair")
        t = cls(direction, list(levels), list(transitions),
                list(labels) if labels is not None else list(range(len(levels))))
        t.summary = tower_limit(t)
        return t

    def composite(self, lo: int, hi: int) -> ModuleMap:
        """Directed: levels[lo] -> levels[hi]; inverse: levels[hi] -> levels[lo]."""
        if self.direction == "directed":
            f = identity_map(self.levels[lo])
            for k in range(lo, hi):
                f = f.then(self.transitions[k])
            return f
        f = identity_map(self.levels[hi])
        for k in range(hi - 1, lo - 1, -1):
            f = f.then(self.transitions[k])
        return f

    def transitions_compose(self) -> bool:
        """Every transition is a well-defined module map between the right levels."""
        for k, t in enumerate(self.transitions):
            src, tgt = (k, k + 1) if self.direction == "directed" else (k + 1, k)
            if t.source is not self.levels[src] or t.target is not self.levels[tgt]:
                return False
            if not t.is_well_defined():
                return False
        return True

    def to_json(self):
        return {
            "direction": self.direction,
            "levels": [{"label": lab, "module": m.describe()} for lab, m in zip(self.labels, self.levels)],
            "stabilized_flags": list(self.flags),
            "summary": self.summary,
        }


def _image_in(f: ModuleMap):
    return f.matrix


def tower_limit(t: TowerCertificate) -> dict:
    """Evaluate a truncated tower.

    Inverse towers: eventual images ``EI_k = im(M_L -> M_k)``; level k is
    flagged when the images from ``L-1`` and ``L`` agree (Mittag-Leffler
    within the truncation).  With K the top of the flagged initial segment,
    the limit is ``EI_K`` when ``EI_{K+1} -> EI_K`` is an isomorphism.

    Directed towers: eventual kernels ``EK_k = ker(M_k -> M_L)``; level k is
    flagged when the kernels towards ``L-1`` and ``L`` agree.  With K the top
    of the flagged initial segment, the colimit is ``M_K / EK_K`` when the
    injective map ``M_K/EK_K -> M_{K+1}/EK_{K+1}`` is onto.

    The reported level is the first one from which every transition up to K
    is an isomorphism.
    """
    L = len(t.levels) - 1
    flags: list[bool] = []
    if t.direction == "inverse":
        images = []
        for k in range(L + 1):
            M = t.levels[k]
            from_top = _image_in(t.composite(k, L))
            if k <= L - 2:
                from_prev = _image_in(t.composite(k, L - 1))
                flags.append(M.same_submodule(from_prev, from_top))
            else:
                flags.append(False)
            images.append(from_top)
        t.flags = flags
        K = -1
        while K + 1 <= L - 2 and flags[K + 1]:
            K += 1
        out = {"mittag_leffler_through": t.labels[K] if K >= 0 else None,
               "lim1_vanishes": K >= 0}
        if L == 0:
            out.update(status="stabilized", value=t.levels[0].describe(), lim1_vanishes=True)
            return out
        if K >= 0:
            # compare EI_{K+1} -> EI_K; both are eventual images from the top
            top_src, inc_src = submodule(t.levels[K + 1], images[K + 1])
            low, inc_low = submodule(t.levels[K], images[K])
            tr = inc_src.then(t.transitions[K])
            B = stack(inc_low.matrix, t.levels[K].relations)
            rows = [solve_left(t.levels[K].ring, B, r, len(B))[: low.ngens] for r in tr.matrix]
            f = ModuleMap(top_src, low, rows, check=False)
            if f.is_iso():
                j = K
                while j > 0 and _inverse_step_iso(t, images, j - 1):
                    j -= 1
                out.update(status="stabilized", value=low.describe(), level=t.labels[j])
                return out
        out.update(status="non-stabilizing pro-object reported at max level",
                   value=t.levels[L].describe(), level=t.labels[L])
        return out

    # directed
    quots = []
    for k in range(L + 1):
        ek_top = t.composite(k, L).kernel()[1].matrix
        if k <= L - 1:
            ek_prev = t.composite(k, L - 1).kernel()[1].matrix
            flags.append(t.levels[k].same_submodule(ek_prev, ek_top))
        else:
            flags.append(False)
        quots.append(quotient(t.levels[k], ek_top))
    t.flags = flags
    if L == 0:
        return {"status": "stabilized", "value": t.levels[0].describe(), "level": t.labels[0]}
    K = -1
    while K + 1 <= L - 1 and flags[K + 1]:
        K += 1
    out = {"eventual_kernels_through": t.labels[K] if K >= 0 else None}
    if K >= 0:
        # M_K/EK_K -> M_{K+1}/EK_{K+1} is injective by construction; test surjectivity
        (qa, pa), (qb, pb) = quots[K], quots[K + 1]
        rows = [pb.apply(t.transitions[K].apply(r)) for r in _section(pa)]
        f = ModuleMap(qa, qb, rows, check=False)
        if f.is_iso():
            j = K
            while j > 0 and _directed_step_iso(t, quots, j - 1):
                j -= 1
            out.update(status="stabilized", value=qa.describe(), level=t.labels[j])
            return out
    out.update(status="non-stabilizing ind-object reported at max level",
               value=t.levels[L].describe(), level=t.labels[L])
    return out


def _inverse_step_iso(t: TowerCertificate, images, k: int) -> bool:
    """``EI_{k+1} -> EI_k`` is an isomorphism."""
    src, inc_src = submodule(t.levels[k + 1], images[k + 1])
    low, inc_low = submodule(t.levels[k], images[k])
    tr = inc_src.then(t.transitions[k])
    B = stack(inc_low.matrix, t.levels[k].relations)
    rows = [solve_left(t.levels[k].ring, B, r, len(B))[: low.ngens] for r in tr.matrix]
    return ModuleMap(src, low, rows, check=False).is_iso()


def _directed_step_iso(t: TowerCertificate, quots, k: int) -> bool:
    """``M_k/EK_k -> M_{k+1}/EK_{k+1}`` is an isomorphism."""
    (qa, pa), (qb, pb) = quots[k], quots[k + 1]
    rows = [pb.apply(t.transitions[k].apply(r)) for r in _section(pa)]
    return ModuleMap(qa, qb, rows, check=False).is_iso()


def vanishing_lags(t: TowerCertificate):
    """Directed towers: for each level, the first later level where it maps to zero."""
    if t.direction != "directed":
        raise ValueError("vanishing lags are defined for directed towers")
    out = []
    for k in range(len(t.levels)):
        lag = None
        for j in range(k, len(t.levels)):
            if t.composite(k, j).is_zero():
                lag = j - k
                break
        out.append(lag)
    return out


def constant_tower(direction: str, m: PresentedModule, length: int) -> TowerCertificate:
    levels = [m] * length
    trans = [identity_map(m) for _ in range(length - 1)]
    return TowerCertificate.build(direction, levels, trans)
