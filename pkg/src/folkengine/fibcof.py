"""Fibrations, cofibrations and their cleavages.

Cofibrations are decided through the mapping cylinder: j: a0 -> a1 is a
cofibration iff some r: Cyl(a1) -> M_j satisfies r . Cyl(j) = d0 and
r . i0(a1) = d1.  Necessity: r is a filler of the square (d1, d0).
Sufficiency: for any square (g, h) the pushout gives u: M_j -> X with
u . d0 = h and u . d1 = g, and k = u . r fills it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice
from typing import Iterable, Optional, Sequence

import numpy as np

from .fincat import (
    FinCat, FunctorMap, Report, enumerate_functors, first_functor, identity_functor,
    walking_arrow, terminal,
)
from .homotopy import Homotopy, identity_homotopy
from .interval import (
    MappingCylinder, cocyl_m, cyl, cyl_map, i_at, mapping_cylinder,
    p_at, product_data, standard,
)

__all__ = [
    "Verdict", "Cleavage", "CofibrationWitness", "CofCleavage",
    "is_isofibration", "cocylinder_fibration_verdict", "canonical_cleavage",
    "broken_cleavage", "check_cleavage", "is_normally_cloven_fibration", "is_cofibration",
    "find_cof_criterion_lift", "is_normally_cloven_cofibration", "check_cof_cleavage",
    "closure_checks", "lifting_squares", "cof_squares",
]


@dataclass
class Verdict:
    holds: bool
    witness: str = ""
    cert: object = None

    def __bool__(self) -> bool:
        return self.holds


# -- fibrations --------------------------------------------------------------------

def is_isofibration(f: FunctorMap) -> Verdict:
    """Every iso out of f(e) lifts to an iso out of e."""
    a1, a2 = f.dom, f.cod
    for e in range(a1.n_obj):
        y = int(f.omap[e])
        outs = [u for u in range(a1.n_arr) if a1.src[u] == e and a1.inv[u] >= 0]
        hit = {int(f.amap[u]) for u in outs}
        for phi in range(a2.n_arr):
            if a2.src[phi] == y and a2.inv[phi] >= 0 and phi not in hit:
                return Verdict(False, f"iso {a2.arrows[phi]} out of {a2.objects[y]} = "
                                      f"f({a1.objects[e]}) has no lift")
    return Verdict(True)


def cocylinder_fibration_verdict(f: FunctorMap) -> Verdict:
    """Co-cylinder side: m_f: a1^I -> N_f admits a section."""
    m = cocyl_m(f)
    s = first_functor(m.cod, m.dom, over=(m, identity_functor(m.cod)))
    if s is None:
        return Verdict(False, "m_f admits no section")
    return Verdict(True, cert=s)


class Cleavage:
    """Deterministic lifts for an iso-fibration f: a1 -> a2.

    For each object x of a0 the lift moves g(x) along the chosen iso psi_x
    over the component of h at x; everything else is conjugation, so the
    result depends on (g, h) pointwise.
    """

    def __init__(self, f: FunctorMap, policy: str = "canonical"):
        self.fibration = f
        self.policy = policy
        a1 = f.dom
        table: dict[tuple[int, int], list[int]] = {}
        for u in range(a1.n_arr):
            if a1.inv[u] >= 0:
                table.setdefault((int(a1.src[u]), int(f.amap[u])), []).append(u)
        self._table = table

    def choose(self, e: int, phi: int) -> int:
        a1, a2 = self.fibration.dom, self.fibration.cod
        if self.policy == "canonical" and phi < a2.n_obj:
            return e
        cands = self._table.get((e, phi))
        if not cands:
            raise ValueError(f"no lift of {a2.arrows[phi]} at {a1.objects[e]}: not a fibration")
        return cands[0] if self.policy == "canonical" else cands[-1]

    def lift(self, g: FunctorMap, h) -> Homotopy:
        """l: Cyl(a0) -> a1 with l . i0 = g and f . l = h."""
        hc = h.carrier if isinstance(h, Homotopy) else h
        f = self.fibration
        a0, a1 = g.dom, f.dom
        I = standard().I
        pd = product_data(a0, I)
        fwd = I.arr("f")
        psi = [self.choose(int(g.omap[x]), int(hc.amap[pd.arr_index[x, fwd]]))
               for x in range(a0.n_obj)]
        om = np.empty(pd.cat.n_obj, dtype=np.int64)
        for x in range(a0.n_obj):
            om[pd.obj_index(x, 0)] = g.omap[x]
            om[pd.obj_index(x, 1)] = a1.tgt[psi[x]]
        comp, inv = a1.comp, a1.inv
        am = np.empty(pd.cat.n_arr, dtype=np.int64)
        for z in range(pd.cat.n_arr):
            u, tau = pd.arr_pairs[z]
            x, y = int(a0.src[u]), int(a0.tgt[u])
            t, t2 = int(I.src[tau]), int(I.tgt[tau])
            back = psi[x] if t == 1 else int(g.omap[x])
            fwd_y = psi[y] if t2 == 1 else int(g.omap[y])
            am[z] = comp[fwd_y, comp[g.amap[u], inv[back]]]
        return Homotopy(FunctorMap(pd.cat, a1, om, am))


def canonical_cleavage(f: FunctorMap) -> Cleavage:
    v = is_isofibration(f)
    if not v:
        raise ValueError(f"not a fibration: {v.witness}")
    return Cleavage(f, "canonical")


def broken_cleavage(f: FunctorMap) -> Cleavage:
    """Fault injection: largest lift, no identity rule."""
    return Cleavage(f, "broken")


def _sources() -> tuple[FinCat, ...]:
    st = standard()
    return (terminal(), walking_arrow(), st.I)


def lifting_squares(f: FunctorMap, sources: Iterable[FinCat] | None = None,
                    per_source: int = 40):
    """Squares (g: a0 -> a1, h: Cyl(a0) -> a2) with h . i0 = f . g."""
    for a0 in (sources if sources is not None else _sources()):
        n = 0
        inc = i_at(0, a0)
        for g in enumerate_functors(a0, f.dom):
            fg = f @ g
            fo = [(int(inc.omap[x]), int(fg.omap[x])) for x in range(a0.n_obj)]
            fa = [(int(inc.amap[u]), int(fg.amap[u])) for u in range(a0.n_arr)]
            for h in enumerate_functors(cyl(a0).total, f.cod, fixed_obj=fo, fixed_arr=fa):
                yield g, h
                n += 1
                if n >= per_source:
                    break
            if n >= per_source:
                break


def check_cleavage(cl: Cleavage, sources: Iterable[FinCat] | None = None,
                   per_source: int = 40, ident_limit: int | None = None) -> Report:
    """Filler, lifting of identities and compatibility of liftings.

    ``ident_limit`` caps the identity-rule inputs per source (None checks all).
    """
    f = cl.fibration
    rep = Report("cleavage")
    srcs = tuple(sources) if sources is not None else _sources()
    fill_w = ident_w = compat_w = ""
    for g, h in lifting_squares(f, srcs, per_source):
        try:
            l = cl.lift(g, h)
        except ValueError as e:
            fill_w = fill_w or str(e)
            continue
        if not (l.f0 == g and f @ l.carrier == h):
            fill_w = fill_w or f"square g={g.omap.tolist()}"
        a0 = g.dom
        for b in srcs:
            for g0 in enumerate_functors(b, a0):
                if cl.lift(g @ g0, h @ cyl_map(g0)).carrier != l.carrier @ cyl_map(g0):
                    compat_w = compat_w or f"g={g.omap.tolist()} precomposed from {b.name}"
    for a0 in srcs:
        gs = enumerate_functors(a0, f.dom)
        if ident_limit is not None:
            gs = islice(gs, ident_limit)
        for g in gs:
            l = cl.lift(g, identity_homotopy(f @ g))
            if l.carrier != g @ p_at(a0):
                ident_w = ident_w or f"g={g.amap.tolist()} on {a0.name}"
    rep.check("every lift fills its square", not fill_w, fill_w)
    rep.check("lifting of identities", not ident_w, ident_w)
    rep.check("compatibility of liftings", not compat_w, compat_w)
    return rep


def is_normally_cloven_fibration(f: FunctorMap) -> Verdict:
    v = is_isofibration(f)
    if not v:
        return v
    cl = canonical_cleavage(f)
    rep = check_cleavage(cl)
    if not rep.ok:
        return Verdict(False, "; ".join(rep.failures))
    return Verdict(True, cert=cl)


# -- cofibrations ------------------------------------------------------------------

@dataclass(eq=False)
class CofibrationWitness:
    j: FunctorMap
    r: FunctorMap
    mc: MappingCylinder

    def filler(self, g: FunctorMap, h) -> FunctorMap:
        """k: Cyl(a1) -> X with k . Cyl(j) = h and k . i0(a1) = g."""
        hc = h.carrier if isinstance(h, Homotopy) else h
        return self.mc.legs(hc, g) @ self.r

    def check(self) -> Report:
        j, r, mc = self.j, self.r, self.mc
        rep = Report("cofibration witness")
        rep.check("r . Cyl(j) = d0", r @ cyl_map(j) == mc.d0)
        rep.check("r . i0(a1) = d1", r @ i_at(0, j.cod) == mc.d1)
        rep.check("r . m = id", r @ mc.m == identity_functor(mc.M))
        return rep


def is_cofibration(j: FunctorMap) -> Verdict:
    mc = mapping_cylinder(j)
    a1 = j.cod
    cj = cyl_map(j)
    inc = i_at(0, a1)
    fo = [(int(cj.omap[x]), int(mc.d0.omap[x])) for x in range(cj.dom.n_obj)]
    fo += [(int(inc.omap[x]), int(mc.d1.omap[x])) for x in range(a1.n_obj)]
    fa = [(int(cj.amap[u]), int(mc.d0.amap[u])) for u in range(cj.dom.n_arr)]
    fa += [(int(inc.amap[u]), int(mc.d1.amap[u])) for u in range(a1.n_arr)]
    r = first_functor(cyl(a1).total, mc.M, fixed_obj=fo, fixed_arr=fa)
    if r is None:
        bad = [(x, y) for x in range(j.dom.n_obj) for y in range(x)
               if j.omap[x] == j.omap[y]]
        w = "no retraction r onto the mapping cylinder"
        if bad:
            x, y = bad[0]
            w += f" (objects {j.dom.objects[y]}, {j.dom.objects[x]} are identified)"
        return Verdict(False, w)
    return Verdict(True, cert=CofibrationWitness(j, r, mc))


def find_cof_criterion_lift(j: FunctorMap) -> Optional[FunctorMap]:
    """l: a1 -> M_j with l . j = d0 . i1(a0) and g_M . l = id."""
    mc = mapping_cylinder(j)
    target = mc.j
    fo = [(int(j.omap[x]), int(target.omap[x])) for x in range(j.dom.n_obj)]
    fa = [(int(j.amap[u]), int(target.amap[u])) for u in range(j.dom.n_arr)]
    return first_functor(j.cod, mc.M, fixed_obj=fo, fixed_arr=fa,
                         over=(mc.g, identity_functor(j.cod)))


@dataclass(eq=False)
class CofCleavage:
    """Cleavage of a normally cloven cofibration: k(g, h) = u . H_M . Cyl(l)."""

    j: FunctorMap
    l: FunctorMap
    mc: MappingCylinder
    _hl: FunctorMap = field(default=None, repr=False)

    @property
    def hl(self) -> FunctorMap:
        if self._hl is None:
            self._hl = self.mc.h @ cyl_map(self.l)
        return self._hl

    def filler(self, g: FunctorMap, h) -> FunctorMap:
        hc = h.carrier if isinstance(h, Homotopy) else h
        return self.mc.legs(hc, g) @ self.hl

    def check(self) -> Report:
        j, l, mc = self.j, self.l, self.mc
        rep = Report("normally cloven cofibration criterion")
        rep.check("l . j = d0 . i1(a0)", l @ j == mc.j)
        rep.check("g_M . l = id", mc.g @ l == identity_functor(j.cod))
        return rep


def cof_squares(j: FunctorMap, targets: Iterable[FinCat], per_target: int = 40):
    """Squares (g: a1 -> X, h: Cyl(a0) -> X) with h . i0 = g . j."""
    a0 = j.dom
    inc = i_at(0, a0)
    for X in targets:
        n = 0
        for g in enumerate_functors(j.cod, X):
            gj = g @ j
            fo = [(int(inc.omap[x]), int(gj.omap[x])) for x in range(a0.n_obj)]
            fa = [(int(inc.amap[u]), int(gj.amap[u])) for u in range(a0.n_arr)]
            for h in enumerate_functors(cyl(a0).total, X, fixed_obj=fo, fixed_arr=fa):
                yield g, h
                n += 1
                if n >= per_target:
                    break
            if n >= per_target:
                break


def check_cof_cleavage(cc, targets: Iterable[FinCat] | None = None,
                       per_target: int = 30) -> Report:
    """Filler, lifting of identities and compatibility with post-composition."""
    j = cc.j
    rep = Report("cofibration cleavage")
    tg = tuple(targets) if targets is not None else _sources()
    fill_w = ident_w = compat_w = ""
    for g, h in cof_squares(j, tg, per_target):
        k = cc.filler(g, h)
        if not (k @ cyl_map(j) == h and k @ i_at(0, j.cod) == g):
            fill_w = fill_w or f"g={g.omap.tolist()}"
        for Y in tg:
            for q in enumerate_functors(g.cod, Y):
                if cc.filler(q @ g, q @ h) != q @ k:
                    compat_w = compat_w or f"g={g.omap.tolist()} post-composed into {Y.name}"
                    break
    for X in tg:
        for g in enumerate_functors(j.cod, X):
            k = cc.filler(g, (g @ j) @ p_at(j.dom))
            if k != g @ p_at(j.cod):
                ident_w = ident_w or f"g={g.omap.tolist()} into {X.name}"
    rep.check("every filler fills its square", not fill_w, fill_w)
    rep.check("lifting of identities", not ident_w, ident_w)
    rep.check("compatibility of liftings", not compat_w, compat_w)
    return rep


def is_normally_cloven_cofibration(j: FunctorMap) -> Verdict:
    l = find_cof_criterion_lift(j)
    if l is None:
        return Verdict(False, "no criterion lift a1 -> M_j")
    cc = CofCleavage(j, l, mapping_cylinder(j))
    rep = check_cof_cleavage(cc)
    if not rep.ok:
        return Verdict(False, "; ".join(rep.failures))
    return Verdict(True, cert=cc)


# -- closure -----------------------------------------------------------------------

def closure_checks(functors: Sequence[FunctorMap], retracts: Sequence[tuple] = (),
                   max_pairs: int = 400) -> Report:
    """Identities, composites and retracts stay in their classes.

    ``retracts`` holds tuples (f, f', g0, r0, g1, r1) with f' a retract of f.
    """
    rep = Report("closure")
    cats = {F.dom for F in functors} | {F.cod for F in functors}
    w = ""
    for c in sorted(cats, key=lambda c: c.name):
        idc = identity_functor(c)
        if not (is_cofibration(idc) and is_isofibration(idc)):
            w = w or c.name
    rep.check("identities are cofibrations and fibrations", not w, w)
    cof = [F for F in functors if is_cofibration(F)]
    fib = [F for F in functors if is_isofibration(F)]
    for label, cls, decide in (("cofibrations", cof, is_cofibration),
                               ("fibrations", fib, is_isofibration)):
        w, n = "", 0
        for F in cls:
            for G in cls:
                if F.cod == G.dom:
                    n += 1
                    if not decide(G @ F):
                        w = w or f"{G.name or G.cod.name} . {F.name or F.dom.name}"
                    if n >= max_pairs:
                        break
            if n >= max_pairs:
                break
        rep.check(f"composites of {label} ({n} pairs)", not w, w)
    for label, decide in (("cofibrations", is_cofibration), ("fibrations", is_isofibration)):
        w = ""
        for (f, fp, *_rest) in retracts:
            if decide(f) and not decide(fp):
                w = w or f"{fp.dom.name} -> {fp.cod.name}"
        rep.check(f"retracts of {label} ({len(retracts)} diagrams)", not w, w)
    return rep
