"""Factorizations, formula lifts and the model-structure verifier.

Every lift and factorization here is built from explicit formulas on the
interval structure.  Search appears only as an independent oracle.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .corpus import Corpus, _spread, retract_diagrams, triangles
from .fibcof import (
    Cleavage, CofCleavage, CofibrationWitness, check_cleavage, cof_squares,
    find_cof_criterion_lift, is_cofibration, is_isofibration, lifting_squares,
)
from .fincat import (
    FinCat, FunctorMap, Report, enumerate_functors, first_functor, identity_functor,
    induced_functor, product_map,
)
from .homotopy import (
    DoubleHomotopy, EquivalenceCertificate, Homotopy, SdrCertificate, find_equivalence,
    identity_homotopy, left_inverse_upgrade, retract_transfer, reverse,
    right_inverse_upgrade, two_of_three, whisker,
)
from .interval import (
    adj, adj_inv, cocyl, cyl, cyl_map, exponential_data, gamma_at, i_at, mapping_cocylinder,
    mapping_cylinder, p_at, r_at, s_at, standard, sub, swap_at, v_at,
)

__all__ = [
    "LiftProblem", "LiftSolution", "Factorization", "DoldResult",
    "SdrFibration", "CompositeFibration", "RetractFibration",
    "SdrSectionCofibration", "CompositeCofibration", "RetractCofibration", "IdentityFiller",
    "witness_from_filler", "cleavage_for", "mapping_cylinder_lift",
    "factor_mapping_cylinder", "factor_mapping_cocylinder", "factor_composite", "FACTOR_MODES",
    "sdr_of_m", "lift_against_sdr", "chep_lift", "dual_chep_lift", "nc_cofibration_lift",
    "sdr_is_fibration_lift", "dold_over", "dold_under", "over_sdr", "under_sdr",
    "cocylinder_section", "brute_force_filler", "square_problems",
    "verify_model_axioms", "VARIANTS", "AxiomBudget", "formula_lift",
]


# -- lifting problems --------------------------------------------------------------

@dataclass(eq=False)
class LiftProblem:
    """A square  g0: a0 -> a2 (top),  g1: a1 -> a3 (bottom),  f . g0 = g1 . j."""

    j: FunctorMap
    f: FunctorMap
    top: FunctorMap
    bottom: FunctorMap

    def commutes(self) -> bool:
        return self.f @ self.top == self.bottom @ self.j

    def describe(self) -> str:
        j, f = self.j, self.f
        return (f"j: {j.dom.name} -> {j.cod.name} {j.omap.tolist()}, "
                f"f: {f.dom.name} -> {f.cod.name} {f.omap.tolist()}, "
                f"top {self.top.omap.tolist()}, bottom {self.bottom.omap.tolist()}")


@dataclass(eq=False)
class LiftSolution:
    problem: LiftProblem
    l: FunctorMap
    method: str

    def check(self) -> Report:
        p, l = self.problem, self.l
        rep = Report(f"lift ({self.method})")
        rep.check("l . j = top", l @ p.j == p.top)
        rep.check("f . l = bottom", p.f @ l == p.bottom)
        return rep


def brute_force_filler(p: LiftProblem) -> Optional[FunctorMap]:
    """Oracle: any l: a1 -> a2 with l j = g0 and f l = g1, found by search."""
    j = p.j
    fo, fa = {}, {}
    for x in range(j.dom.n_obj):
        y, v = int(j.omap[x]), int(p.top.omap[x])
        if fo.setdefault(y, v) != v:
            return None
    for u in range(j.dom.n_arr):
        y, v = int(j.amap[u]), int(p.top.amap[u])
        if fa.setdefault(y, v) != v:
            return None
    return first_functor(j.cod, p.f.dom, fixed_obj=fo, fixed_arr=fa, over=(p.f, p.bottom))


def square_problems(j: FunctorMap, f: FunctorMap, limit: int = 3, pool: int = 24):
    """Up to ``limit`` commuting squares from j to f, spread over the first ``pool``."""
    found = []
    for g1 in enumerate_functors(j.cod, f.cod):
        for g0 in enumerate_functors(j.dom, f.dom, over=(f, g1 @ j)):
            found.append(LiftProblem(j, f, g0, g1))
            if len(found) >= pool:
                break
        if len(found) >= pool:
            break
    return _spread(found, limit)


# -- filler and lifter protocols -----------------------------------------------------

def cleavage_for(f: FunctorMap, fault: Optional[str] = None) -> Cleavage:
    """The cleavage used for fibrations; ``fault='broken-cleavage'`` swaps in the bad one."""
    return Cleavage(f, "broken" if fault == "broken-cleavage" else "canonical")


class IdentityFiller:
    """Fillers for an identity: k = h."""

    def __init__(self, a: FinCat):
        self.j = identity_functor(a)

    def filler(self, g: FunctorMap, h) -> FunctorMap:
        return h.carrier if isinstance(h, Homotopy) else h


class SdrSectionCofibration:
    """Fillers for the section j of an SDR under a0: k = (g . rev H) + (h . Cyl(r))."""

    def __init__(self, sdr: SdrCertificate):
        if sdr.kind != "under":
            raise ValueError("SdrSectionCofibration needs an SDR under a0")
        self.sdr = sdr
        self.j = sdr.j

    def filler(self, g: FunctorMap, h) -> FunctorMap:
        hc = h.carrier if isinstance(h, Homotopy) else h
        sd = self.sdr
        if hc @ i_at(0, self.j.dom) != g @ self.j:
            raise ValueError("filler: square does not commute")
        first = whisker(g, reverse(sd.h))
        second = Homotopy(hc @ cyl_map(sd.r))
        return (first + second).carrier


class CompositeCofibration:
    """Fillers for j1 . j0 from fillers for j0 and j1."""

    def __init__(self, c0, c1):
        if c0.j.cod != c1.j.dom:
            raise ValueError("CompositeCofibration: not composable")
        self.c0, self.c1 = c0, c1
        self.j = c1.j @ c0.j

    def filler(self, g: FunctorMap, h) -> FunctorMap:
        k0 = self.c0.filler(g @ self.c1.j, h)
        return self.c1.filler(g, k0)


class RetractCofibration:
    """Fillers for j' a retract of j: k' = k(g r1, h Cyl(r0)) . Cyl(g1)."""

    def __init__(self, c, j_prime, g0, r0, g1, r1):
        self.c, self.j = c, j_prime
        self.g0, self.r0, self.g1, self.r1 = g0, r0, g1, r1

    def filler(self, g: FunctorMap, h) -> FunctorMap:
        hc = h.carrier if isinstance(h, Homotopy) else h
        k = self.c.filler(g @ self.r1, hc @ cyl_map(self.r0))
        return k @ cyl_map(self.g1)


def witness_from_filler(j: FunctorMap, fill) -> CofibrationWitness:
    """r = filler of the square (d1, d0) into M_j."""
    mc = mapping_cylinder(j)
    return CofibrationWitness(j, fill.filler(mc.d1, mc.d0), mc)


def check_fillers(fill, targets: Sequence[FinCat], per_target: int = 6) -> Report:
    j = fill.j
    rep = Report("fillers")
    w, n = "", 0
    for g, h in cof_squares(j, targets, per_target):
        n += 1
        try:
            k = fill.filler(g, h)
            ok = k @ cyl_map(j) == h and k @ i_at(0, j.cod) == g
        except ValueError as e:
            ok, w = False, w or str(e)
        if not ok:
            w = w or f"square g={g.omap.tolist()} into {g.cod.name}"
    rep.check(f"fillers solve {n} squares", not w, w)
    return rep


class SdrFibration:
    """Lifts for the retraction f of an SDR over a2: l = (rev H . Cyl(g)) + (j . k)."""

    def __init__(self, sdr: SdrCertificate):
        if sdr.kind != "over":
            raise ValueError("SdrFibration needs an SDR over the base")
        self.sdr = sdr
        self.fibration = sdr.r

    def lift(self, g: FunctorMap, h) -> Homotopy:
        return sdr_is_fibration_lift(self.sdr, g, h)


class CompositeFibration:
    """Lifts for f1 . f0: lift through f1 first, then through f0."""

    def __init__(self, c0, c1):
        if c0.fibration.cod != c1.fibration.dom:
            raise ValueError("CompositeFibration: not composable")
        self.c0, self.c1 = c0, c1
        self.fibration = c1.fibration @ c0.fibration

    def lift(self, g: FunctorMap, h) -> Homotopy:
        l1 = self.c1.lift(self.c0.fibration @ g, h)
        return self.c0.lift(g, l1)


class RetractFibration:
    """Lifts for f' a retract of f: l' = r0 . l(g0 g, g1 h)."""

    def __init__(self, c, f_prime, g0, r0, g1, r1):
        self.c, self.fibration = c, f_prime
        self.g0, self.r0, self.g1, self.r1 = g0, r0, g1, r1

    def lift(self, g: FunctorMap, h) -> Homotopy:
        hc = h.carrier if isinstance(h, Homotopy) else h
        l = self.c.lift(self.g0 @ g, self.g1 @ hc)
        return whisker(self.r0, l)


def check_lifter(lifter, sources: Sequence[FinCat] | None = None, per_source: int = 6) -> Report:
    f = lifter.fibration
    rep = Report("lifts")
    w, n = "", 0
    for g, h in lifting_squares(f, sources, per_source):
        n += 1
        try:
            l = lifter.lift(g, h)
            ok = l.f0 == g and f @ l.carrier == h
        except ValueError as e:
            ok, w = False, w or str(e)
        if not ok:
            w = w or f"square g={g.omap.tolist()} on {g.dom.name}"
    rep.check(f"lifts solve {n} squares", not w, w)
    return rep


def _lift(cl, g: FunctorMap, h) -> Homotopy:
    hc = h.carrier if isinstance(h, Homotopy) else h
    if hc @ i_at(0, g.dom) != cl.fibration @ g:
        raise ValueError("lift: square does not commute")
    return cl.lift(g, hc)


def _fill(c, g: FunctorMap, h) -> FunctorMap:
    hc = h.carrier if isinstance(h, Homotopy) else h
    if hc @ i_at(0, c.j.dom) != g @ c.j:
        raise ValueError("filler: square does not commute")
    return c.filler(g, hc)


# -- SDR based constructions -----------------------------------------------------------

def sdr_is_fibration_lift(sdr: SdrCertificate, g: FunctorMap, h) -> Homotopy:
    """Lift for an over-SDR retraction f (section j, H: j f -> id):
    l = (rev H . Cyl(g)) + (j . h)."""
    hc = h if isinstance(h, Homotopy) else Homotopy(h)
    if hc.f0 != sdr.r @ g:
        raise ValueError("lift: square does not commute")
    return whisker(None, reverse(sdr.h), g) + whisker(sdr.j, hc)


def lift_against_sdr(p: LiftProblem, cl, sdr: SdrCertificate) -> LiftSolution:
    """j the section of an SDR under a0 (r, H), f with cleavage cl:
    k = cl(g0 . r, g1 . H), l = k . i1(a1)."""
    k = _lift(cl, p.top @ sdr.r, p.bottom @ sdr.h.carrier)
    return LiftSolution(p, k.f1, "lift against SDR")


def sdr_of_m(w: CofibrationWitness) -> SdrCertificate:
    """m: M_j -> Cyl(a1) is the section of an SDR under M_j with retraction r:
    sigma = (m . r . Gamma_ur) + Gamma_lr."""
    j, r, mc = w.j, w.r, w.mc
    a1 = j.cod
    m = mc.m
    first = Homotopy(m @ r @ gamma_at("ur", a1))
    second = Homotopy(gamma_at("lr", a1))
    return SdrCertificate(m, r, first + second, "under")


def chep_lift(p: LiftProblem, w: CofibrationWitness, cl, sdr_f: SdrCertificate) -> LiftSolution:
    """j a cofibration, f a trivial normally cloven fibration with SDR (j', h)."""
    a1 = p.j.cod
    mc = w.mc
    u = mc.legs(sdr_f.h.carrier @ cyl_map(p.top), sdr_f.j @ p.bottom)
    sq = LiftProblem(mc.m, p.f, u, p.bottom @ p_at(a1))
    L = lift_against_sdr(sq, cl, sdr_of_m(w))
    return LiftSolution(p, L.l @ i_at(1, a1), "CHEP")


def nc_cofibration_lift(p: LiftProblem, cc, sdr_f: SdrCertificate) -> LiftSolution:
    """j a normally cloven cofibration, f the retraction of an over-SDR (j', H):
    K = k_j(j' g1, H . Cyl(g0)), l = K . i1(a1)."""
    K = _fill(cc, sdr_f.j @ p.bottom, sdr_f.h.carrier @ cyl_map(p.top))
    return LiftSolution(p, K @ i_at(1, p.j.cod), "normally cloven cofibration lift")


def cocylinder_section(f: FunctorMap, cl) -> SdrCertificate:
    """m_f: a^I -> N_f as the retraction of an SDR over N_f.

    Section s = adj(cl(d0, adj_inv(d1))); homotopy curry(P1) + curry(P2) with
    P1 = ev(s m psi, Gamma_ur) and P2 = ev(psi, Gamma_lr), in swapped coordinates.
    """
    mcc = mapping_cocylinder(f)
    m = mcc.m
    s = adj(_lift(cl, mcc.d0, adj_inv(mcc.d1)).carrier)
    E = m.dom
    ev = exponential_data(standard().I, f.dom).ev
    idI = identity_functor(standard().I)
    P1 = ev @ product_map(s @ m, idI) @ gamma_at("ur", E) @ swap_at(E)
    P2 = ev @ gamma_at("lr", E) @ swap_at(E)
    H = Homotopy(adj(P1)) + Homotopy(adj(P2))
    return SdrCertificate(s, m, H, "over")


def dual_chep_lift(p: LiftProblem, cc, sdr_j: SdrCertificate, cl) -> LiftSolution:
    """j a trivial normally cloven cofibration (SDR (r, H) under a0), f with cleavage cl."""
    j, f = p.j, p.f
    g0, g1 = p.top, p.bottom
    mcc = mapping_cocylinder(f)
    u = mcc.pair(g0 @ sdr_j.r, adj(g1 @ sdr_j.h.carrier))
    c2 = cocyl(f.dom)
    sq = LiftProblem(j, mcc.m, c2.c @ g0, u)
    L = nc_cofibration_lift(sq, cc, cocylinder_section(f, cl))
    return LiftSolution(p, c2.e1 @ L.l, "dual CHEP")


# -- Dold constructions ------------------------------------------------------------------

@dataclass(eq=False)
class DoldResult:
    g: FunctorMap
    right: Homotopy  # f g -> id
    left: Homotopy   # g f -> id


def _dold_over_step(f, j0, j1, cert, cl0, cl1):
    """g with j0 g = j1 and L: f g -> id over the base."""
    a1 = f.cod
    hR = cert.h_right
    k = _lift(cl0, cert.f_inv, j1 @ hR.carrier)
    g = k.f1
    l = whisker(f, reverse(k)) + hR
    t0 = j1 @ hR.carrier @ gamma_at("ul", a1)
    t1 = j0 @ k.carrier @ gamma_at("ul", a1) @ cyl_map(v_at(a1))
    SC = cyl(sub(a1).total).total
    u = induced_functor(SC, j1.cod, [(cyl_map(r_at(0, a1)), t0), (cyl_map(r_at(1, a1)), t1)])
    tau = u @ cyl_map(s_at(a1))
    sigma = _lift(cl1, l.carrier, tau)
    D = DoubleHomotopy(sigma.carrier, a1)
    return g, (D.h2 + D.h3) + reverse(D.h1)


def dold_over(f: FunctorMap, j0: FunctorMap, j1: FunctorMap, cert: EquivalenceCertificate,
              cl0, cl1) -> DoldResult:
    """Fibrations j0: a0 -> a, j1: a1 -> a, f over a and a homotopy equivalence:
    an inverse over a with both homotopies over a."""
    if j1 @ f != j0:
        raise ValueError("dold_over: f is not a map over the base")
    g, L = _dold_over_step(f, j0, j1, cert, cl0, cl1)
    up = right_inverse_upgrade(cert, g, L)
    cg = EquivalenceCertificate(g, f, L, up.h_left)
    g2, L2 = _dold_over_step(g, j1, j0, cg, cl1, cl0)
    K = whisker(g @ f, reverse(L2)) + whisker(g, L, g2)
    return DoldResult(g, L, K + L2)


def _dold_under_step(f, j0, j1, cert, fill0, fill1):
    """g with g j1 = j0 and L: g f -> id under the base."""
    a, a0 = j0.dom, f.dom
    HL = cert.h_left
    K = _fill(fill1, cert.f_inv, HL.carrier @ cyl_map(j0))
    Kh = Homotopy(K)
    g = Kh.f1
    L = whisker(None, reverse(Kh), f) + HL
    t0 = HL.carrier @ cyl_map(j0) @ gamma_at("ul", a)
    t1 = K @ cyl_map(j1) @ gamma_at("ul", a) @ cyl_map(v_at(a))
    SC = cyl(sub(a).total).total
    U = induced_functor(SC, a0, [(cyl_map(r_at(0, a)), t0), (cyl_map(r_at(1, a)), t1)])
    tau = U @ cyl_map(s_at(a))
    kp = _fill(fill0, adj(L.carrier), adj(tau @ swap_at(a)))
    sigma = adj_inv(kp) @ swap_at(a0)
    D = DoubleHomotopy(sigma, a0)
    return g, (D.h2 + D.h3) + reverse(D.h1)


def dold_under(f: FunctorMap, j0: FunctorMap, j1: FunctorMap, cert: EquivalenceCertificate,
               fill0, fill1) -> DoldResult:
    """Cofibrations j0: a -> a0, j1: a -> a1, f under a and a homotopy equivalence:
    an inverse under a with both homotopies under a."""
    if f @ j0 != j1:
        raise ValueError("dold_under: f is not a map under the base")
    g, L = _dold_under_step(f, j0, j1, cert, fill0, fill1)
    up = left_inverse_upgrade(cert, g, L)
    cg = EquivalenceCertificate(g, f, up.h_right, L)
    g2, L2 = _dold_under_step(g, j1, j0, cg, fill1, fill0)
    K2 = whisker(None, reverse(L2), f @ g) + whisker(g2, L, g)
    return DoldResult(g, K2 + L2, L)


def over_sdr(f: FunctorMap, cert: EquivalenceCertificate, cl) -> SdrCertificate:
    """A trivial fibration is the retraction of an SDR over its codomain."""
    idb = identity_functor(f.cod)
    d = dold_over(f, f, idb, cert, cl, Cleavage(idb, "canonical"))
    return SdrCertificate(d.g, f, d.left, "over")


def under_sdr(j: FunctorMap, cert: EquivalenceCertificate, fill) -> SdrCertificate:
    """A trivial cofibration is the section of an SDR under its domain."""
    ida = identity_functor(j.dom)
    d = dold_under(j, ida, j, cert, IdentityFiller(j.dom), fill)
    return SdrCertificate(j, d.g, d.right, "under")


# -- factorizations ---------------------------------------------------------------------

FACTOR_MODES = ("mapping_cyl", "mapping_cocyl", "cof_then_tfib", "tcof_then_fib")


@dataclass(eq=False)
class Factorization:
    mode: str
    f: FunctorMap
    j: FunctorMap
    g: FunctorMap
    certs: dict = field(default_factory=dict)

    @property
    def mid(self) -> FinCat:
        return self.j.cod

    def check(self, deep: bool = False) -> Report:
        rep = Report(f"factorization ({self.mode})")
        rep.check("g . j = f", self.g @ self.j == self.f)
        for name, c in self.certs.items():
            r = _check_cert(c, deep)
            rep.check(f"certificate {name}", r.ok, "; ".join(r.failures))
        return rep


def _check_cert(c, deep: bool) -> Report:
    if isinstance(c, Cleavage):
        return check_cleavage(c, per_source=8 if deep else 2, ident_limit=None if deep else 24)
    if isinstance(c, (SdrFibration, CompositeFibration, RetractFibration)):
        return check_lifter(c, per_source=6 if deep else 2)
    return c.check()


def mapping_cylinder_lift(f: FunctorMap) -> FunctorMap:
    """l: M_f -> M_j for j = d0 . i1: legs (d1_j . d0_f) + d0_j and d1_j . d1_f."""
    mf = mapping_cylinder(f)
    mj = mapping_cylinder(mf.j)
    leg0 = Homotopy(mj.d1 @ mf.d0) + Homotopy(mj.d0)
    return mf.legs(leg0.carrier, mj.d1 @ mf.d1)


def _mc_pieces(f: FunctorMap):
    mc = mapping_cylinder(f)
    cc = CofCleavage(mc.j, mapping_cylinder_lift(f), mapping_cylinder(mc.j))
    sdr = SdrCertificate(mc.d1, mc.g, Homotopy(mc.h), "over")
    eq = EquivalenceCertificate(mc.g, mc.d1, Homotopy(mc.h),
                                identity_homotopy(identity_functor(f.cod)))
    return mc, cc, sdr, eq


def _mcc_pieces(f: FunctorMap):
    mcc = mapping_cocylinder(f)
    N = mcc.N
    ev = exponential_data(standard().I, f.cod).ev
    idI = identity_functor(standard().I)
    psi = ev @ product_map(mcc.d1, idI) @ gamma_at("lr", N) @ swap_at(N)
    K = mcc.pair(mcc.d0 @ p_at(N), adj(psi))
    sdr = SdrCertificate(mcc.j, mcc.d0, Homotopy(K), "under")
    eq = EquivalenceCertificate(mcc.j, mcc.d0, identity_homotopy(identity_functor(f.dom)),
                                Homotopy(K))
    return mcc, SdrSectionCofibration(sdr), sdr, eq


def factor_mapping_cylinder(f: FunctorMap) -> Factorization:
    """f = g . j through M_f: j a normally cloven cofibration, g a trivial fibration."""
    mc, cc, sdr, eq = _mc_pieces(f)
    return Factorization("mapping_cyl", f, mc.j, mc.g, {
        "j.nc_cofibration": cc, "j.cofibration": witness_from_filler(mc.j, cc),
        "g.sdr": sdr, "g.equivalence": eq, "g.fibration": SdrFibration(sdr)})


def factor_mapping_cocylinder(f: FunctorMap, fault: Optional[str] = None) -> Factorization:
    """f = g . j through N_f: j a trivial cofibration, g a normally cloven fibration."""
    mcc, fill, sdr, eq = _mcc_pieces(f)
    return Factorization("mapping_cocyl", f, mcc.j, mcc.g, {
        "j.sdr": sdr, "j.equivalence": eq, "j.cofibration": witness_from_filler(mcc.j, fill),
        "g.cleavage": cleavage_for(mcc.g, fault)})


def factor_composite(f: FunctorMap, mode: str, fault: Optional[str] = None) -> Factorization:
    if mode == "mapping_cyl":
        return factor_mapping_cylinder(f)
    if mode == "mapping_cocyl":
        return factor_mapping_cocylinder(f, fault)
    if mode == "cof_then_tfib":
        # f = g' j' through M_f, then g' = g j'' through N_{g'}
        mc, cc, sdr1, eq1 = _mc_pieces(f)
        mcc, fill2, sdr2, eq2 = _mcc_pieces(mc.g)
        j = mcc.j @ mc.j
        g = mcc.g
        eq_g = two_of_three(mcc.j, mcc.g, mc.g, c0=eq2, c2=eq1)
        fill = CompositeCofibration(cc, fill2)
        return Factorization(mode, f, j, g, {
            "j.cofibration": witness_from_filler(j, fill),
            "g.cleavage": cleavage_for(g, fault), "g.equivalence": eq_g})
    if mode == "tcof_then_fib":
        # f = g' j' through N_f, then j' = g'' j through M_{j'}
        mcc, fill1, sdr1, eq1 = _mcc_pieces(f)
        mc, cc, sdr2, eq2 = _mc_pieces(mcc.j)
        j = mc.j
        g = mcc.g @ mc.g
        eq_j = two_of_three(mc.j, mc.g, mcc.j, c1=eq2, c2=eq1)
        lifter = CompositeFibration(SdrFibration(sdr2), cleavage_for(mcc.g, fault))
        return Factorization(mode, f, j, g, {
            "j.nc_cofibration": cc, "j.cofibration": witness_from_filler(j, cc),
            "j.equivalence": eq_j, "g.fibration": lifter})
    raise ValueError(f"unknown factorization mode {mode!r}; expected one of {FACTOR_MODES}")


# -- the verifier ------------------------------------------------------------------------

VARIANTS = {
    "A": "W = homotopy equivalences, F = normally cloven fibrations, C = cofibrations",
    "B": "W = homotopy equivalences, F = fibrations, C = normally cloven cofibrations",
}


@dataclass(eq=False)
class _Classes:
    """Class membership for one corpus, with certificates cached per functor."""

    variant: str
    fault: Optional[str]
    _eq: dict = field(default_factory=dict)
    _cof: dict = field(default_factory=dict)
    _ncc: dict = field(default_factory=dict)
    _fib: dict = field(default_factory=dict)

    def eq(self, f) -> Optional[EquivalenceCertificate]:
        k = f.key()
        if k not in self._eq:
            self._eq[k] = find_equivalence(f)
        return self._eq[k]

    def cof(self, f):
        """A filler object when f is in C, else None."""
        k = f.key()
        if self.variant == "A":
            if k not in self._cof:
                self._cof[k] = is_cofibration(f).cert
            return self._cof[k]
        if k not in self._ncc:
            l = find_cof_criterion_lift(f)
            self._ncc[k] = None if l is None else CofCleavage(f, l, mapping_cylinder(f))
        return self._ncc[k]

    def fib(self, f):
        """A cleavage when f is in F, else None."""
        k = f.key()
        if k not in self._fib:
            self._fib[k] = cleavage_for(f, self.fault) if is_isofibration(f) else None
        return self._fib[k]


def _fmt(f: FunctorMap) -> str:
    return f"{f.name or '?'} ({f.dom.name} -> {f.cod.name}, objects {f.omap.tolist()})"


def _first_error(fn: Callable[[], Report]) -> str:
    try:
        r = fn()
    except ValueError as e:
        return f"construction failed: {e}"
    return "" if r.ok else "; ".join(r.failures)


def _condition_i(cls: _Classes, functors, limit: int):
    """Whenever two sides are in W, certify the third from them and cross-check."""
    n, w = 0, ""
    for tri in triangles(functors):
        c = [cls.eq(x) for x in tri]
        if sum(x is not None for x in c) < 2:
            continue
        n += 1
        for t in range(3):
            others = [i for i in range(3) if i != t]
            if any(c[i] is None for i in others):
                continue
            kw = {f"c{i}": c[i] for i in others}
            err = _first_error(lambda: two_of_three(*tri, **kw).check())
            if not err and c[t] is None:
                err = f"certificate built for {_fmt(tri[t])} but the search finds no inverse"
            if err:
                w = w or f"triangle {_fmt(tri[0])}, {_fmt(tri[1])}: {err}"
        if n >= limit:
            break
    return n, w


def _condition_retract(cls: _Classes, retracts, which: str):
    n, w = 0, ""
    for f, fp, g0, r0, g1, r1 in retracts:
        if which == "C":
            c = cls.cof(f)
            if c is None:
                continue
            n += 1
            rc = RetractCofibration(c, fp, g0, r0, g1, r1)
            err = _first_error(lambda: witness_from_filler(fp, rc).check())
            if not err and cls.cof(fp) is None:
                err = "transferred fillers exist but the decision procedure rejects f'"
            if not err and cls.eq(f) is not None:
                err = _first_error(lambda: retract_transfer(cls.eq(f), fp, g0, r0, g1, r1).check())
        else:
            c = cls.fib(f)
            if c is None:
                continue
            n += 1
            rf = RetractFibration(c, fp, g0, r0, g1, r1)
            err = _first_error(lambda: check_lifter(rf, per_source=2))
            if not err and cls.fib(fp) is None:
                err = "transferred lifts exist but the decision procedure rejects f'"
            if not err and cls.variant == "A":
                err = _first_error(lambda: check_cleavage(cls.fib(fp), per_source=2))
            if not err and cls.eq(f) is not None:
                err = _first_error(lambda: retract_transfer(cls.eq(f), fp, g0, r0, g1, r1).check())
        if err:
            w = w or f"retract {_fmt(fp)} of {_fmt(f)}: {err}"
    return n, w


def _lift_iv(cls: _Classes, p: LiftProblem) -> LiftSolution:
    j, f = p.j, p.f
    if cls.variant == "A":
        sdr = under_sdr(j, cls.eq(j), cls.cof(j))
        return lift_against_sdr(p, cls.fib(f), sdr)
    cc = cls.cof(j)
    sdr = under_sdr(j, cls.eq(j), cc)
    return dual_chep_lift(p, cc, sdr, cls.fib(f))


def _lift_v(cls: _Classes, p: LiftProblem) -> LiftSolution:
    j, f = p.j, p.f
    cl = cls.fib(f)
    sdr_f = over_sdr(f, cls.eq(f), cl)
    if cls.variant == "A":
        return chep_lift(p, cls.cof(j), cl, sdr_f)
    return nc_cofibration_lift(p, cls.cof(j), sdr_f)


def formula_lift(p: LiftProblem, variant: str = "A",
                 fault: Optional[str] = None) -> Optional[LiftSolution]:
    """The constructed lift when j, f fall under condition (iv) or (v) of the
    variant, else None.  Raises ValueError if the square does not commute."""
    if not p.commutes():
        raise ValueError("the square does not commute")
    cls = _Classes(variant, fault)
    j, f = p.j, p.f
    if cls.cof(j) is None or cls.fib(f) is None:
        return None
    if cls.eq(j) is not None:
        return _lift_iv(cls, p)
    if cls.eq(f) is not None:
        return _lift_v(cls, p)
    return None


def _condition_lift(cls, left, right, solve, pairs: int, per_pair: int, oracle: bool):
    allp = [(j, f) for j in left for f in right]
    n, w = 0, ""
    for j, f in _spread(allp, pairs):
        for p in square_problems(j, f, per_pair):
            n += 1
            try:
                sol = solve(cls, p)
                r = sol.check()
                err = "" if r.ok else "; ".join(r.failures)
            except ValueError as e:
                err = f"construction failed: {e}"
            if not err and oracle and brute_force_filler(p) is None:
                err = "formula lift found but brute-force search finds no filler"
            if err:
                w = w or f"square {p.describe()}: {err}"
    return n, w


def _condition_factor(cls: _Classes, functors, mode: str, limit: int):
    n, w = 0, ""
    for f in _spread(list(functors), limit):
        n += 1
        try:
            fac = factor_composite(f, mode, cls.fault)
            err = "; ".join(fac.check().failures)
            if not err:
                if cls.variant == "A" and cls.cof(fac.j) is None:
                    err = "j is not a cofibration"
                if cls.variant == "B" and find_cof_criterion_lift(fac.j) is None:
                    err = "j is not a normally cloven cofibration"
                if cls.fib(fac.g) is None:
                    err = err or "g is not a fibration"
        except ValueError as e:
            err = f"construction failed: {e}"
        if err:
            w = w or f"factoring {_fmt(f)}: {err}"
    return n, w


@dataclass
class AxiomBudget:
    triangles: int = 150
    retracts: int = 60
    lift_pairs: int = 40
    per_pair: int = 2
    factorizations: int = 40
    oracle: bool = True


def verify_model_axioms(corpus: Corpus, variant: str = "A",
                        budget: Optional[AxiomBudget] = None) -> Report:
    """Check the seven model-category conditions on the corpus.

    A pass is evidence on a finite corpus, not a proof; a failure carries a
    concrete witness.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected A or B")
    b = budget or AxiomBudget()
    cls = _Classes(variant, corpus.fault)
    fs = corpus.functors
    rep = Report(f"model axioms, variant {variant}: {VARIANTS[variant]}")
    rep.lines.append(f"corpus {corpus.name}: {len(corpus.categories)} categories, "
                     f"{len(fs)} functors (finite evidence, not a proof)")

    def run(label, fn):
        t = time.perf_counter()
        n, w = fn()
        rep.check(f"{label} [{n} cases, {time.perf_counter() - t:.2f}s]", not w, w)

    W = [f for f in fs if cls.eq(f) is not None]
    C = [f for f in fs if cls.cof(f) is not None]
    F = [f for f in fs if cls.fib(f) is not None]
    CW = [f for f in C if cls.eq(f) is not None]
    FW = [f for f in F if cls.eq(f) is not None]
    rep.lines.append(f"|W| = {len(W)}, |C| = {len(C)}, |F| = {len(F)}, "
                     f"|C and W| = {len(CW)}, |F and W| = {len(FW)}")
    retracts = retract_diagrams(fs, b.retracts)

    run("(i) two out of three for W", lambda: _condition_i(cls, fs, b.triangles))
    run("(ii) C and C and W closed under retracts", lambda: _condition_retract(cls, retracts, "C"))
    run("(iii) F and F and W closed under retracts", lambda: _condition_retract(cls, retracts, "F"))
    run("(iv) C and W lifts against F",
        lambda: _condition_lift(cls, CW, F, _lift_iv, b.lift_pairs, b.per_pair, b.oracle))
    run("(v) C lifts against F and W",
        lambda: _condition_lift(cls, C, FW, _lift_v, b.lift_pairs, b.per_pair, b.oracle))
    run("(vi) factorization into C then W and F",
        lambda: _condition_factor(cls, fs, "cof_then_tfib", b.factorizations))
    run("(vii) factorization into W and C then F",
        lambda: _condition_factor(cls, fs, "tcof_then_fib", b.factorizations))
    return rep
