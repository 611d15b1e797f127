"""The interval groupoid, its subdivision object and all structure functors.

Coordinates: Cyl(a) = a x I.  Cyl(Cyl(a)) = (a x I) x I has coordinates
((x, t1), t2); ``i_e . Cyl`` fixes the outer coordinate t2 and ``Cyl . i_e``
(that is, Cyl applied to i_e) fixes the inner coordinate t1.  Interval-level
maps I x I -> I are written as functions of (t1, t2).

Every functor into I or S is determined by its object map since both are
indiscrete, so the structure functors are given by object tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .fincat import (
    BoundedCache, FinCat, compose_arrays, FunctorMap, Report, _canonical, enumerate_functors,
    exponential_data, identity_functor, indiscrete, induced_functor, pair,
    parallel_pair, product_data, product_map, pullback_data, terminal,
    terminal_map, walking_arrow, validate, validate_functor, z2_groupoid, discrete,
)

__all__ = [
    "IntervalStructure", "CylApp", "CoCylApp", "MappingCylinder", "MappingCocylinder",
    "build_interval", "standard", "verify_interval", "cyl", "cocyl", "cyl_map",
    "adj", "adj_inv", "mapping_cylinder", "mapping_cocylinder", "canonical_m",
    "to_indiscrete", "test_family", "pushout_bijection", "pullback_bijection",
    "i_at", "p_at", "v_at", "gamma_at", "sub", "r_at", "s_at", "q_at", "swap_at",
    "const_at",
]


def to_indiscrete(dom: FinCat, cod: FinCat, omap: Sequence[int], name: str = "") -> FunctorMap:
    """The unique functor into an indiscrete category with the given object map."""
    omap = np.asarray(omap, dtype=np.int64)
    amap = np.empty(dom.n_arr, dtype=np.int64)
    for a in range(dom.n_arr):
        h = cod.hom(int(omap[dom.src[a]]), int(omap[dom.tgt[a]]))
        amap[a] = h[0]
    return FunctorMap(dom, cod, omap, amap, name)


@dataclass(eq=False)
class IntervalStructure:
    I: FinCat
    i0: FunctorMap
    i1: FunctorMap
    p: FunctorMap
    v: FunctorMap
    S: FinCat
    r0: FunctorMap
    r1: FunctorMap
    s: FunctorMap
    gamma_ul: FunctorMap
    gamma_lr: FunctorMap
    gamma_ur: FunctorMap
    q_l: FunctorMap
    q_r: FunctorMap
    w: FunctorMap
    p_bar: FunctorMap
    x: FunctorMap

    def functors(self) -> list[tuple[str, FunctorMap]]:
        names = ["i0", "i1", "p", "v", "r0", "r1", "s", "gamma_ul", "gamma_lr",
                 "gamma_ur", "q_l", "q_r", "w", "p_bar", "x"]
        return [(n, getattr(self, n)) for n in names]


def _interval_cat() -> FinCat:
    return indiscrete("I", ["0", "1"], lambda s, t: "f" if s == "0" else "f^-1")


def _subdivision_cat() -> FinCat:
    return indiscrete("S", ["0", "1", "2"], lambda s, t: f"s{s}{t}")


def _square_map(I: FinCat, table: Callable[[int, int], int], name: str) -> FunctorMap:
    """A functor I x I -> I from an object table in (t1, t2)."""
    II = product_data(I, I).cat
    return to_indiscrete(II, I, [table(t1, t2) for t1 in (0, 1) for t2 in (0, 1)], name)


def build_interval() -> IntervalStructure:
    I = _interval_cat()
    S = _subdivision_cat()
    one = terminal()
    i0 = to_indiscrete(one, I, [0], "i0")
    i1 = to_indiscrete(one, I, [1], "i1")
    p = terminal_map(I).named("p")
    v = to_indiscrete(I, I, [1, 0], "v")
    r0 = to_indiscrete(I, S, [1, 2], "r0")
    r1 = to_indiscrete(I, S, [0, 1], "r1")
    s = to_indiscrete(I, S, [0, 2], "s")
    g_ul = _square_map(I, lambda a, b: a | b, "gamma_ul")
    g_lr = _square_map(I, lambda a, b: a & b, "gamma_lr")
    g_ur = _square_map(I, lambda a, b: int(a == 1 and b == 0), "gamma_ur")
    q_l = to_indiscrete(S, I, [0, 0, 1], "q_l")
    q_r = to_indiscrete(S, I, [0, 1, 1], "q_r")
    w = to_indiscrete(S, I, [1, 0, 1], "w")
    p_bar = terminal_map(S).named("p_bar")
    IS = product_data(I, S).cat
    x = to_indiscrete(IS, I, [t if sg != 1 else 0 for t in (0, 1) for sg in (0, 1, 2)], "x")
    st = IntervalStructure(I, i0, i1, p, v, S, r0, r1, s, g_ul, g_lr, g_ur,
                           q_l, q_r, w, p_bar, x)
    for _, F in st.functors():
        assert validate_functor(F).ok
    return st


@lru_cache(maxsize=None)
def standard() -> IntervalStructure:
    return build_interval()


# -- test family for universal properties ------------------------------------

@lru_cache(maxsize=None)
def test_family() -> tuple[FinCat, ...]:
    """Categories T used to check pushout/pullback bijections."""
    st = standard()
    return (terminal(), walking_arrow(), st.I, st.S, discrete("D2", ["0", "1"]),
            parallel_pair(), z2_groupoid())


def _compatible_pairs(z1: FunctorMap, z2: FunctorMap, T: FinCat) -> int:
    """Number of pairs (G1, G2) with G1 . z1 = G2 . z2 (z1: Z -> X, z2: Z -> Y)."""
    n = 0
    for G1 in enumerate_functors(z1.cod, T):
        fo = [(int(z2.omap[k]), int(G1.omap[z1.omap[k]])) for k in range(z1.dom.n_obj)]
        fa = [(int(z2.amap[k]), int(G1.amap[z1.amap[k]])) for k in range(z1.dom.n_arr)]
        n += sum(1 for _ in enumerate_functors(z2.cod, T, fixed_obj=fo, fixed_arr=fa))
    return n


def pushout_bijection(z1: FunctorMap, z2: FunctorMap, l1: FunctorMap, l2: FunctorMap,
                      family: Iterable[FinCat] | None = None) -> tuple[bool, str]:
    """Check that P (the common codomain of l1, l2) is a pushout of (z1, z2).

    For each T, restriction Functors(P, T) -> compatible pairs must be a
    bijection.  Returns (ok, witness).
    """
    P = l1.cod
    if (l1 @ z1) != (l2 @ z2):
        return False, "square does not commute"
    for T in (family if family is not None else test_family()):
        seen = set()
        count = 0
        for F in enumerate_functors(P, T):
            count += 1
            seen.add(((F @ l1).amap.tobytes(), (F @ l2).amap.tobytes()))
        if len(seen) != count:
            return False, f"restriction not injective for T={T.name}"
        pairs = _compatible_pairs(z1, z2, T)
        if pairs != count:
            return False, f"T={T.name}: {count} functors vs {pairs} compatible pairs"
    return True, ""


def pullback_bijection(f: FunctorMap, g: FunctorMap, p1: FunctorMap, p2: FunctorMap,
                       family: Iterable[FinCat] | None = None) -> tuple[bool, str]:
    P = p1.dom
    if (f @ p1) != (g @ p2):
        return False, "square does not commute"
    for T in (family if family is not None else test_family()):
        seen = set()
        count = 0
        for F in enumerate_functors(T, P):
            count += 1
            seen.add(((p1 @ F).amap.tobytes(), (p2 @ F).amap.tobytes()))
        if len(seen) != count:
            return False, f"pairing not injective for T={T.name}"
        pairs = 0
        for H1 in enumerate_functors(T, f.dom):
            pairs += sum(1 for _ in enumerate_functors(T, g.dom, over=(g, f @ H1)))
        if pairs != count:
            return False, f"T={T.name}: {count} functors vs {pairs} commuting pairs"
    return True, ""


# -- cylinder and co-cylinder --------------------------------------------------

@dataclass(eq=False)
class CylApp:
    base: FinCat
    total: FinCat
    i0: FunctorMap
    i1: FunctorMap
    p: FunctorMap


@dataclass(eq=False)
class CoCylApp:
    base: FinCat
    total: FinCat
    e0: FunctorMap
    e1: FunctorMap
    c: FunctorMap


def _const(a: FinCat, b: FinCat, F: FunctorMap) -> FunctorMap:
    """a -> 1 -> b."""
    return F @ terminal_map(a)


@lru_cache(maxsize=None)
def cyl(a: FinCat) -> CylApp:
    st = standard()
    pd = product_data(a, st.I)
    ida = identity_functor(a)
    i0 = pair(ida, _const(a, st.I, st.i0))
    i1 = pair(ida, _const(a, st.I, st.i1))
    return CylApp(a, pd.cat, i0, i1, pd.pi1)


def cyl_map(f: FunctorMap) -> FunctorMap:
    """Cyl(f) = f x I."""
    return product_map(f, identity_functor(standard().I))


def i_at(eps: int, a: FinCat) -> FunctorMap:
    c = cyl(a)
    return c.i0 if eps == 0 else c.i1


def p_at(a: FinCat) -> FunctorMap:
    return cyl(a).p


@lru_cache(maxsize=None)
def v_at(a: FinCat) -> FunctorMap:
    return product_map(identity_functor(a), standard().v)


@lru_cache(maxsize=None)
def gamma_at(which: str, a: FinCat) -> FunctorMap:
    """Gamma(a): ((x, t1), t2) -> (x, Gamma(t1, t2))."""
    st = standard()
    G = {"ul": st.gamma_ul, "lr": st.gamma_lr, "ur": st.gamma_ur}[which]
    return _via_coords(a, G)


def _via_coords(a: FinCat, G: FunctorMap) -> FunctorMap:
    """(a x I) x I -> a x B given G: I x I -> B acting on (t1, t2)."""
    inner = product_data(a, standard().I)
    outer = product_data(inner.cat, standard().I)
    xa = inner.pi1 @ outer.pi1
    t1 = inner.pi2 @ outer.pi1
    t2 = outer.pi2
    return pair(xa, G @ pair(t1, t2))


@lru_cache(maxsize=None)
def swap_at(a: FinCat) -> FunctorMap:
    """((x, t1), t2) -> ((x, t2), t1), the coherence reindexing of Cyl^2(a)."""
    inner = product_data(a, standard().I)
    outer = product_data(inner.cat, standard().I)
    xa = inner.pi1 @ outer.pi1
    t1 = inner.pi2 @ outer.pi1
    return pair(pair(xa, outer.pi2), t1)


@dataclass(eq=False)
class SubApp:
    base: FinCat
    total: FinCat
    r0: FunctorMap
    r1: FunctorMap
    s: FunctorMap


@lru_cache(maxsize=None)
def sub(a: FinCat) -> SubApp:
    st = standard()
    ida = identity_functor(a)
    return SubApp(a, product_data(a, st.S).cat, product_map(ida, st.r0),
                  product_map(ida, st.r1), product_map(ida, st.s))


def r_at(eps: int, a: FinCat) -> FunctorMap:
    return sub(a).r0 if eps == 0 else sub(a).r1


def s_at(a: FinCat) -> FunctorMap:
    return sub(a).s


def q_at(which: str, a: FinCat) -> FunctorMap:
    """q_l(a), q_r(a) or w(a): S(a) -> Cyl(a)."""
    st = standard()
    return product_map(identity_functor(a), {"l": st.q_l, "r": st.q_r, "w": st.w}[which])


@lru_cache(maxsize=None)
def cocyl(b: FinCat) -> CoCylApp:
    ed = exponential_data(standard().I, b)
    E = ed.cat
    e0 = FunctorMap(E, b, ed.fun_omap[:, 0], ed.components[:, 0], "e0")
    e1 = FunctorMap(E, b, ed.fun_omap[:, 1], ed.components[:, 1], "e1")
    # constant paths: every arrow of I goes to an identity
    om = np.empty(b.n_obj, dtype=np.int64)
    for y in range(b.n_obj):
        om[y] = ed.obj_lookup[np.full(4, y, dtype=np.int64).tobytes()]
    am = np.empty(b.n_arr, dtype=np.int64)
    for u in range(b.n_arr):
        s, t = int(b.src[u]), int(b.tgt[u])
        am[u] = ed.arr_lookup[(int(om[s]), int(om[t]), np.array([u, u], dtype=np.int64).tobytes())]
    return CoCylApp(b, E, e0, e1, FunctorMap(b, E, om, am, "c"))


def const_at(b: FinCat) -> FunctorMap:
    return cocyl(b).c


def _split_cyl(h: FunctorMap) -> FinCat:
    f = h.dom.factors
    if f is None or f[1] != standard().I:
        raise ValueError("adj: domain is not of the form a x I")
    return f[0]


def adj(h: FunctorMap) -> FunctorMap:
    """Transpose a x I -> b to a -> b^I."""
    a = _split_cyl(h)
    b = h.cod
    I = standard().I
    ed = exponential_data(I, b)
    pd = product_data(a, I)
    om = np.empty(a.n_obj, dtype=np.int64)
    for x in range(a.n_obj):
        path = h.amap[pd.arr_index[x]]
        om[x] = ed.obj_lookup[np.ascontiguousarray(path).tobytes()]
    am = np.empty(a.n_arr, dtype=np.int64)
    for u in range(a.n_arr):
        comps = np.ascontiguousarray(h.amap[pd.arr_index[u, :2]])
        am[u] = ed.arr_lookup[(int(om[a.src[u]]), int(om[a.tgt[u]]), comps.tobytes())]
    return FunctorMap(a, ed.cat, om, am)


def adj_inv(k: FunctorMap) -> FunctorMap:
    """Transpose a -> b^I back to a x I -> b."""
    b = exp_base(k.cod)
    ed = exponential_data(standard().I, b)
    return ed.ev @ product_map(k, identity_functor(standard().I))


def exp_base(E: FinCat) -> FinCat:
    """b for E = b^I."""
    if E.power is None or E.power[0] != standard().I:
        raise ValueError(f"{E.name} is not of the form b^I")
    return E.power[1]


# -- mapping cylinder -----------------------------------------------------------

@dataclass(eq=False)
class MappingCylinder:
    f: FunctorMap
    M: FinCat
    d0: FunctorMap  # Cyl(a0) -> M
    d1: FunctorMap  # a1 -> M
    kind: np.ndarray  # per object of M: 1 for d1(y), 0 for d0(x,1)
    under: np.ndarray  # underlying a1-object of each object of M
    arrows: np.ndarray = None  # (X, Y, u) per arrow of M
    derived: dict = field(default_factory=dict, repr=False)

    def __iter__(self):
        return iter((self.M, self.d0, self.d1))

    @property
    def j(self) -> FunctorMap:
        """d0 . i1(a0): a0 -> M."""
        return self.d0 @ i_at(1, self.f.dom)

    @property
    def g(self) -> FunctorMap:
        """The map M -> a1 induced by (f . p(a0), id)."""
        return _mc_g(self)

    @property
    def m(self) -> FunctorMap:
        return canonical_m(self)

    @property
    def h(self) -> FunctorMap:
        """Carrier Cyl(M) -> M of the homotopy d1 . g -> id over a1."""
        return _mc_h(self)

    def legs(self, on_d0: FunctorMap, on_d1: FunctorMap) -> FunctorMap:
        """The arrow out of M induced by a compatible pair.

        An arrow X -> Y over u factors as in(Y) . d1(u) . out(X), where out(X)
        is d0 of the backward interval arrow at a d0-object and in(Y) the
        forward one; so the induced arrow is evaluated in closed form.
        """
        f = self.f
        a0, a1 = f.dom, f.cod
        X = on_d1.cod
        if on_d0.dom != cyl(a0).total or on_d1.dom != a1 or on_d0.cod != X:
            raise ValueError("legs: endpoints do not match the mapping cylinder")
        if on_d0 @ i_at(0, a0) != on_d1 @ f:
            raise ValueError("legs disagree on the glued end Cyl(a0) <- a0 -> a1")
        I = standard().I
        pd = product_data(a0, I)
        fwd, bwd = I.arr("f"), I.arr("f^-1")
        xs = np.arange(a0.n_obj)
        inn = np.concatenate([on_d1.omap, on_d0.amap[pd.arr_index[xs, fwd]]])
        out = np.concatenate([on_d1.omap, on_d0.amap[pd.arr_index[xs, bwd]]])
        om = np.concatenate([on_d1.omap, on_d0.omap[pd.obj_index(xs, 1)]])
        Xs, Ys, us = self.arrows[:, 0], self.arrows[:, 1], self.arrows[:, 2]
        mid = on_d1.amap[us]
        am = compose_arrays(X, inn[Ys], compose_arrays(X, mid, out[Xs]))
        if (am < 0).any():
            raise ValueError("legs: induced composite undefined")
        F = FunctorMap(self.M, X, om, am)
        if F @ self.d0 != on_d0 or F @ self.d1 != on_d1:
            raise ValueError("legs: induced arrow does not restrict to the legs")
        return F


_MC_CACHE = BoundedCache(128)


def mapping_cylinder(f: FunctorMap) -> MappingCylinder:
    """Closed form: objects a1 + a0, hom(x, y) = Hom_a1(|x|, |y|)."""
    key = f.key()
    hit = _MC_CACHE.get(key)
    if hit is not None:
        return hit
    a0, a1 = f.dom, f.cod
    under = np.concatenate([np.arange(a1.n_obj), f.omap]).astype(np.int64)
    kind = np.concatenate([np.ones(a1.n_obj), np.zeros(a0.n_obj)]).astype(np.int64)
    names = [f"d1({y})" for y in a1.objects] + [f"d0({x},1)" for x in a0.objects]
    n = len(names)
    arrs, src, tgt, ident = [], [], [], []
    lookup = {}
    for X in range(n):
        for Y in range(n):
            for u in a1.hom(int(under[X]), int(under[Y])):
                u = int(u)
                if X == Y and u == under[X]:
                    ident.append(len(arrs))
                lookup[(X, Y, u)] = len(arrs)
                arrs.append((X, Y, u))
                src.append(X)
                tgt.append(Y)
    m = len(arrs)
    A = np.array(arrs, dtype=np.int64).reshape(m, 3)
    idx = np.full((n, n, a1.n_arr), -1, dtype=np.int64)
    idx[A[:, 0], A[:, 1], A[:, 2]] = np.arange(m)
    ok = A[:, 1][None, :] == A[:, 0][:, None]   # [g, f]: tgt f == src g
    uw = a1.comp[A[:, 2][:, None], A[:, 2][None, :]]
    raw = np.where(ok, idx[A[:, 0][None, :], A[:, 1][:, None], np.maximum(uw, 0)], -1)
    anames = [f"{names[X]}:{a1.arrows[u]}:{names[Y]}" for X, Y, u in arrs]
    M, perm = _canonical(f"M({a0.name}->{a1.name})", names, anames, src, tgt, ident, raw)
    new_lookup = {(X, Y, u): int(perm[k]) for (X, Y, u), k in lookup.items()}
    I = standard().I
    pd = product_data(a0, I)
    om0 = np.empty(pd.cat.n_obj, dtype=np.int64)
    for x in range(a0.n_obj):
        om0[pd.obj_index(x, 0)] = f.omap[x]
        om0[pd.obj_index(x, 1)] = a1.n_obj + x
    am0 = np.empty(pd.cat.n_arr, dtype=np.int64)
    for z in range(pd.cat.n_arr):
        u, _ = pd.arr_pairs[z]
        s, t = int(pd.cat.src[z]), int(pd.cat.tgt[z])
        am0[z] = new_lookup[(int(om0[s]), int(om0[t]), int(f.amap[u]))]
    d0 = FunctorMap(pd.cat, M, om0, am0, "d0")
    am1 = np.array([new_lookup[(int(a1.src[u]), int(a1.tgt[u]), u)] for u in range(a1.n_arr)],
                   dtype=np.int64)
    d1 = FunctorMap(a1, M, np.arange(a1.n_obj), am1, "d1")
    arr_table = np.empty((m, 3), dtype=np.int64)
    for (X, Y, u), k in new_lookup.items():
        arr_table[k] = (X, Y, u)
    mc = MappingCylinder(f, M, d0, d1, _frozen(kind), _frozen(under), _frozen(arr_table))
    _MC_CACHE.put(key, mc)
    return mc


def _frozen(a):
    a = np.asarray(a, dtype=np.int64).copy()
    a.setflags(write=False)
    return a


def canonical_m(mc: MappingCylinder | FunctorMap) -> FunctorMap:
    """m: M_f -> Cyl(a1) induced by Cyl(f) on d0 and i0(a1) on d1."""
    if isinstance(mc, FunctorMap):
        mc = mapping_cylinder(mc)
    return _mc_m(mc)


def _mc_cached(tag: str, mc: MappingCylinder, build):
    hit = mc.derived.get(tag)
    if hit is None:
        hit = build()
        mc.derived[tag] = hit
    return hit


def _mc_m(mc: MappingCylinder) -> FunctorMap:
    return _mc_cached("m", mc, lambda: mc.legs(cyl_map(mc.f), i_at(0, mc.f.cod)).named("m"))


def _mc_g(mc: MappingCylinder) -> FunctorMap:
    f = mc.f
    return _mc_cached("g", mc, lambda: mc.legs(f @ p_at(f.dom), identity_functor(f.cod)).named("g"))


def _mc_h(mc: MappingCylinder) -> FunctorMap:
    """H on Cyl(M): d1 . p on Cyl(d1), d0 . Gamma_lr on Cyl(d0).

    H lies over a1 and M is fully faithful over a1 (an arrow is its triple
    (X, Y, u)), so H(w, tau) is the arrow over u between the image objects.
    """
    def build():
        M, a1 = mc.M, mc.f.cod
        I = standard().I
        pd = product_data(M, I)
        n = M.n_obj
        X = np.arange(n)
        # (X, t) goes to X itself only at t = 1 on a d0-object, else to d1(|X|)
        om = np.empty(pd.cat.n_obj, dtype=np.int64)
        for t in (0, 1):
            keep = (mc.kind == 0) & (t == 1)
            om[pd.obj_index(X, t)] = np.where(keep, X, mc.under)
        idx = np.full((n, n, a1.n_arr), -1, dtype=np.int64)
        A = mc.arrows
        idx[A[:, 0], A[:, 1], A[:, 2]] = np.arange(M.n_arr)
        w, tau = pd.arr_pairs[:, 0], pd.arr_pairs[:, 1]
        s_obj = om[pd.obj_index(M.src[w], I.src[tau])]
        t_obj = om[pd.obj_index(M.tgt[w], I.tgt[tau])]
        am = idx[s_obj, t_obj, A[w, 2]]
        return FunctorMap(pd.cat, M, om, am)
    return _mc_cached("h", mc, build)


def _mc_h_via_pushout(mc: MappingCylinder) -> FunctorMap:
    f = mc.f
    a0, a1 = f.dom, f.cod
    on_d0 = mc.d0 @ gamma_at("lr", a0)
    on_d1 = mc.d1 @ p_at(a1)
    return induced_functor(cyl(mc.M).total, mc.M,
                           [(cyl_map(mc.d0), on_d0), (cyl_map(mc.d1), on_d1)])


# -- mapping co-cylinder ----------------------------------------------------------

@dataclass(eq=False)
class MappingCocylinder:
    f: FunctorMap
    N: FinCat
    d0: FunctorMap  # N -> a0
    d1: FunctorMap  # N -> a1^I
    pb: object

    def __iter__(self):
        return iter((self.N, self.d0, self.d1))

    def pair(self, h0: FunctorMap, h1: FunctorMap) -> FunctorMap:
        """Universal arrow into N from h0: T -> a0, h1: T -> a1^I with f h0 = e0 h1."""
        return self.pb.pair(h0, h1)

    @property
    def j(self) -> FunctorMap:
        f = self.f
        return self.pair(identity_functor(f.dom), const_at(f.cod) @ f)

    @property
    def g(self) -> FunctorMap:
        return cocyl(self.f.cod).e1 @ self.d1

    @property
    def m(self) -> FunctorMap:
        """m: a0^I -> N_f induced by e0(a0) and f^I."""
        return cocyl_m(self.f)


def mapping_cocylinder(f: FunctorMap) -> MappingCocylinder:
    pd = pullback_data(f, cocyl(f.cod).e0)
    return MappingCocylinder(f, pd.cat, pd.p1.named("d0"), pd.p2.named("d1"), pd)


def exp_map(f: FunctorMap) -> FunctorMap:
    """f^I: a^I -> b^I."""
    return adj(f @ exponential_data(standard().I, f.dom).ev)


def cocyl_m(f: FunctorMap) -> FunctorMap:
    """m_f: a0^I -> N_f induced by e0(a0) and f^I."""
    mcc = mapping_cocylinder(f)
    return mcc.pair(cocyl(f.dom).e0, exp_map(f))


# -- verification ------------------------------------------------------------------

def _eq(F: FunctorMap, G: FunctorMap) -> tuple[bool, str]:
    if F.dom != G.dom or F.cod != G.cod:
        return False, "endpoint mismatch"
    bad = np.nonzero(F.amap != G.amap)[0]
    if len(bad):
        a = int(bad[0])
        return False, (f"arrow {F.dom.arrows[a]}: {F.cod.arrows[F.amap[a]]} != "
                       f"{G.cod.arrows[G.amap[a]]}")
    if not np.array_equal(F.omap, G.omap):
        return False, "object maps differ"
    return True, ""


def _check(rep: Report, label: str, F: FunctorMap, G: FunctorMap) -> None:
    ok, w = _eq(F, G)
    rep.check(label, ok, w)


def verify_interval(st: IntervalStructure, family: Iterable[FinCat] | None = None) -> Report:
    """Every structure axiom as an exact functor equality."""
    rep = Report("interval axioms")
    I, S = st.I, st.S
    one = terminal()
    idI = identity_functor(I)
    id1 = identity_functor(one)
    rep.check("I is a category", validate(I).ok)
    rep.check("S is a category", validate(S).ok)
    for name, F in st.functors():
        r = validate_functor(F)
        rep.check(f"{name} is a functor", r.ok, "; ".join(r.failures))
    if not rep.ok:
        return rep
    II = product_data(I, I)
    const0 = st.i0 @ st.p
    const1 = st.i1 @ st.p

    def outer(eps_map):
        # i_e . Cyl at the interval level: t -> (t, e)
        return pair(idI, eps_map @ st.p)

    def inner(eps_map):
        # Cyl . i_e: t -> (e, t)
        return pair(eps_map @ st.p, idI)

    # contraction
    _check(rep, "contraction: p . i0 = id", st.p @ st.i0, id1)
    _check(rep, "contraction: p . i1 = id", st.p @ st.i1, id1)
    # involution
    _check(rep, "involution: v . i0 = i1", st.v @ st.i0, st.i1)
    _check(rep, "involution: v . i1 = i0", st.v @ st.i1, st.i0)
    _check(rep, "involution compatible with p", st.p @ st.v, st.p)
    # subdivision
    _check(rep, "subdivision square: r0 . i0 = r1 . i1", st.r0 @ st.i0, st.r1 @ st.i1)
    _check(rep, "subdivision: s . i0 = r1 . i0", st.s @ st.i0, st.r1 @ st.i0)
    _check(rep, "subdivision: s . i1 = r0 . i1", st.s @ st.i1, st.r0 @ st.i1)
    ok, w = pushout_bijection(st.i0, st.i1, st.r0, st.r1, family)
    rep.check("subdivision square is a pushout", ok, w)
    _check(rep, "p_bar . r0 = p", st.p_bar @ st.r0, st.p)
    _check(rep, "p_bar . r1 = p", st.p_bar @ st.r1, st.p)
    _check(rep, "subdivision compatible with p", st.p_bar @ st.s, st.p)
    # requirement: a x S is a pushout for every a of a small family
    req_ok, req_w = True, ""
    for a in (one, walking_arrow(), I):
        ida = identity_functor(a)
        ia0 = i_at(0, a)
        ia1 = i_at(1, a)
        ok, w = pushout_bijection(ia0, ia1, product_map(ida, st.r0), product_map(ida, st.r1),
                                  family if family is not None else (one, walking_arrow(), I, S))
        if not ok:
            req_ok, req_w = False, f"a={a.name}: {w}"
            break
    rep.check("requirement: a x S is a pushout", req_ok, req_w)
    # connections
    G = st.gamma_ul
    _check(rep, "Gamma_ul . (i0.Cyl) = id", G @ outer(st.i0), idI)
    _check(rep, "Gamma_ul . (Cyl.i0) = id", G @ inner(st.i0), idI)
    _check(rep, "Gamma_ul . (i1.Cyl) = i1 p", G @ outer(st.i1), const1)
    _check(rep, "Gamma_ul . (Cyl.i1) = i1 p", G @ inner(st.i1), const1)
    G = st.gamma_lr
    _check(rep, "Gamma_lr . (i1.Cyl) = id", G @ outer(st.i1), idI)
    _check(rep, "Gamma_lr . (Cyl.i1) = id", G @ inner(st.i1), idI)
    _check(rep, "Gamma_lr . (i0.Cyl) = i0 p", G @ outer(st.i0), const0)
    _check(rep, "Gamma_lr . (Cyl.i0) = i0 p", G @ inner(st.i0), const0)
    _check(rep, "Gamma_lr compatible with p", st.p @ G, st.p @ II.pi2)
    G = st.gamma_ur
    _check(rep, "Gamma_ur . (i0.Cyl) = id", G @ outer(st.i0), idI)
    _check(rep, "Gamma_ur . (Cyl.i1) = v", G @ inner(st.i1), st.v)
    _check(rep, "Gamma_ur . (Cyl.i0) = i0 p", G @ inner(st.i0), const0)
    _check(rep, "Gamma_ur . (i1.Cyl) = i0 p", G @ outer(st.i1), const0)
    _check(rep, "Gamma_ur = Gamma_lr . (v.Cyl)", G,
           st.gamma_lr @ product_map(idI, st.v))
    # compatibility of right connections with subdivision
    idI_ = idI
    _check(rep, "x . (I x r0) = Gamma_lr", st.x @ product_map(idI_, st.r0), st.gamma_lr)
    _check(rep, "x . (I x r1) = Gamma_ur", st.x @ product_map(idI_, st.r1), st.gamma_ur)
    _check(rep, "right connections compatible with subdivision: x . (I x s) = I x p",
           st.x @ product_map(idI_, st.s), II.pi1)
    # strictness
    _check(rep, "q_l . r0 = id", st.q_l @ st.r0, idI)
    _check(rep, "q_l . r1 = i0 p", st.q_l @ st.r1, const0)
    _check(rep, "strictness of left identities: q_l . s = id", st.q_l @ st.s, idI)
    _check(rep, "q_r . r0 = i1 p", st.q_r @ st.r0, const1)
    _check(rep, "q_r . r1 = id", st.q_r @ st.r1, idI)
    _check(rep, "strictness of right identities: q_r . s = id", st.q_r @ st.s, idI)
    _check(rep, "w . r0 = id", st.w @ st.r0, idI)
    _check(rep, "w . r1 = v", st.w @ st.r1, st.v)
    _check(rep, "strictness of left inverses: w . s = i1 p", st.w @ st.s, const1)
    return rep
