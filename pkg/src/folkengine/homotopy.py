"""Homotopies as functors out of cylinders, and their algebra.

A homotopy from f0 to f1 (both a0 -> a1) is a functor Cyl(a0) -> a1 whose
restrictions along i0(a0) and i1(a0) are f0 and f1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .fincat import (
    FinCat, FunctorMap, Report, compose_arrays, enumerate_functors, identity_functor, induced_functor,
    product_data, validate_functor,
)
from .interval import (
    adj, cyl, cyl_map, gamma_at, i_at, p_at, r_at, s_at, standard, sub, v_at,
)

__all__ = [
    "Homotopy", "DoubleHomotopy", "SdrCertificate", "EquivalenceCertificate",
    "homotopy", "identity_homotopy", "reverse", "compose", "compose_via_pushout", "whisker", "transpose",
    "connection_double", "is_under", "is_over", "find_homotopy", "iter_homotopies",
    "find_equivalence", "two_of_three", "right_inverse_upgrade", "left_inverse_upgrade",
    "retract_transfer", "identity_certificate",
]


def _base_of_cyl(c: FinCat) -> FinCat:
    fac = c.factors
    if fac is None or fac[1] != standard().I:
        raise ValueError(f"{c.name} is not a cylinder a x I")
    return fac[0]


@dataclass(eq=False)
class Homotopy:
    carrier: FunctorMap
    f0: FunctorMap = None
    f1: FunctorMap = None

    def __post_init__(self):
        a0 = _base_of_cyl(self.carrier.dom)
        b0 = self.carrier @ i_at(0, a0)
        b1 = self.carrier @ i_at(1, a0)
        if self.f0 is None:
            self.f0 = b0
        elif self.f0 != b0:
            raise ValueError("homotopy: recorded f0 is not carrier . i0")
        if self.f1 is None:
            self.f1 = b1
        elif self.f1 != b1:
            raise ValueError("homotopy: recorded f1 is not carrier . i1")

    @property
    def a0(self) -> FinCat:
        return self.f0.dom

    @property
    def a1(self) -> FinCat:
        return self.f0.cod

    def check(self) -> Report:
        rep = Report("homotopy")
        r = validate_functor(self.carrier)
        rep.check("carrier is a functor", r.ok, "; ".join(r.failures))
        rep.check("f0 = carrier . i0", self.f0 == self.carrier @ i_at(0, self.a0))
        rep.check("f1 = carrier . i1", self.f1 == self.carrier @ i_at(1, self.a0))
        return rep

    def __eq__(self, other) -> bool:
        if not isinstance(other, Homotopy):
            return NotImplemented
        return self.carrier == other.carrier

    def __hash__(self) -> int:
        return hash(self.carrier)

    def __add__(self, other: "Homotopy") -> "Homotopy":
        return compose(self, other)

    def __neg__(self) -> "Homotopy":
        return reverse(self)


def homotopy(carrier: FunctorMap) -> Homotopy:
    return Homotopy(carrier)


def identity_homotopy(f: FunctorMap) -> Homotopy:
    return Homotopy(f @ p_at(f.dom), f, f)


def reverse(h: Homotopy) -> Homotopy:
    return Homotopy(h.carrier @ v_at(h.a0), h.f1, h.f0)


def compose(h: Homotopy, k: Homotopy) -> Homotopy:
    """h + k: first h (f0 -> f1), then k (f1 -> f2).

    The carrier is R . s(a0) where R: S(a0) -> a1 is induced by h on r1 and k
    on r0.  An arrow (u, t -> t') of Cyl(a0) is sent by s to (u, 2t -> 2t'),
    which factors through the middle point as (u, 1 -> 2t') . (id, 2t -> 1);
    each factor lies in one half, so R is evaluated there directly.
    """
    if h.f1 != k.f0:
        raise ValueError("compose: boundary mismatch")
    a0, b = h.a0, h.a1
    I = standard().I
    pd = product_data(a0, I)
    fwd, bwd = I.arr("f"), I.arr("f^-1")
    hc, kc = h.carrier, k.carrier
    u, tau = pd.arr_pairs[:, 0], pd.arr_pairs[:, 1]
    t, t2 = I.src[tau], I.tgt[tau]
    x = a0.src[u]
    first = np.where(t == 0, hc.amap[pd.arr_index[x, fwd]], kc.amap[pd.arr_index[x, bwd]])
    second = np.where(t2 == 0, hc.amap[pd.arr_index[u, bwd]], kc.amap[pd.arr_index[u, fwd]])
    am = compose_arrays(b, second, first)
    ox = np.repeat(np.arange(a0.n_obj), I.n_obj)
    ot = np.tile(np.arange(I.n_obj), a0.n_obj)
    om = np.where(ot == 0, hc.omap[pd.obj_index(ox, 0)], kc.omap[pd.obj_index(ox, 1)])
    return Homotopy(FunctorMap(pd.cat, b, om, am), h.f0, k.f1)


def compose_via_pushout(h: Homotopy, k: Homotopy) -> Homotopy:
    """The same composite through the generic induced arrow out of S(a0)."""
    if h.f1 != k.f0:
        raise ValueError("compose: boundary mismatch")
    a0 = h.a0
    R = induced_functor(sub(a0).total, h.a1,
                        [(r_at(0, a0), k.carrier), (r_at(1, a0), h.carrier)])
    return Homotopy(R @ s_at(a0), h.f0, k.f1)


def whisker(g1: Optional[FunctorMap], h: Homotopy, g0: Optional[FunctorMap] = None) -> Homotopy:
    """g1 . h . Cyl(g0); either side may be None for the identity."""
    c = h.carrier
    f0, f1 = h.f0, h.f1
    if g0 is not None:
        c = c @ cyl_map(g0)
        f0, f1 = f0 @ g0, f1 @ g0
    if g1 is not None:
        c = g1 @ c
        f0, f1 = g1 @ f0, g1 @ f1
    return Homotopy(c, f0, f1)


def transpose(h: Homotopy) -> FunctorMap:
    return adj(h.carrier)


# -- double homotopies -----------------------------------------------------------

@dataclass(eq=False)
class DoubleHomotopy:
    """carrier: Cyl(Cyl(a0)) -> a1.

    h0 (top, t2 = 0), h1 (right, t1 = 1), h2 (left, t1 = 0), h3 (bottom,
    t2 = 1); corners f0 top-left, f1 top-right, f2 bottom-left, f3
    bottom-right.
    """

    carrier: FunctorMap
    a0: FinCat
    h0: Homotopy = field(init=False)
    h1: Homotopy = field(init=False)
    h2: Homotopy = field(init=False)
    h3: Homotopy = field(init=False)

    def __post_init__(self):
        a, s = self.a0, self.carrier
        C = cyl(a).total
        self.h0 = Homotopy(s @ i_at(0, C))
        self.h3 = Homotopy(s @ i_at(1, C))
        self.h2 = Homotopy(s @ cyl_map(i_at(0, a)))
        self.h1 = Homotopy(s @ cyl_map(i_at(1, a)))

    @property
    def corners(self) -> tuple[FunctorMap, FunctorMap, FunctorMap, FunctorMap]:
        return self.h0.f0, self.h0.f1, self.h3.f0, self.h3.f1

    def check(self) -> Report:
        rep = Report("double homotopy")
        f0, f1, f2, f3 = self.corners
        rep.check("left boundary runs f0 -> f2", self.h2.f0 == f0 and self.h2.f1 == f2)
        rep.check("right boundary runs f1 -> f3", self.h1.f0 == f1 and self.h1.f1 == f3)
        return rep


def connection_double(h: Homotopy, which: str) -> DoubleHomotopy:
    """h . Gamma(a0) for which in {ul, lr, ur}."""
    if which not in ("ul", "lr", "ur"):
        raise ValueError(f"unknown connection {which!r}")
    return DoubleHomotopy(h.carrier @ gamma_at(which, h.a0), h.a0)


# -- relative homotopies -----------------------------------------------------------

def is_under(h: Homotopy, j0: FunctorMap, j1: FunctorMap) -> bool:
    """Under a w.r.t. j0: a -> a0, j1: a -> a1: h . Cyl(j0) = j1 . p(a)."""
    if j0.cod != h.a0 or j1.cod != h.a1 or j0.dom != j1.dom:
        raise ValueError("is_under: malformed data")
    if h.f0 @ j0 != j1 or h.f1 @ j0 != j1:
        return False
    return h.carrier @ cyl_map(j0) == j1 @ p_at(j0.dom)


def is_over(h: Homotopy, j0: FunctorMap, j1: FunctorMap) -> bool:
    """Over a w.r.t. j0: a0 -> a, j1: a1 -> a: j1 . h = j0 . p(a0)."""
    if j0.dom != h.a0 or j1.dom != h.a1 or j0.cod != j1.cod:
        raise ValueError("is_over: malformed data")
    if j1 @ h.f0 != j0 or j1 @ h.f1 != j0:
        return False
    return j1 @ h.carrier == j0 @ p_at(h.a0)


def _boundary_constraints(F: FunctorMap, G: FunctorMap,
                          under: Optional[FunctorMap] = None):
    a = F.dom
    fo, fa = [], []
    for eps, B in ((0, F), (1, G)):
        inc = i_at(eps, a)
        fo += [(int(inc.omap[x]), int(B.omap[x])) for x in range(a.n_obj)]
        fa += [(int(inc.amap[u]), int(B.amap[u])) for u in range(a.n_arr)]
    if under is not None:
        # h . Cyl(j) = F . j . p  (F . j = G . j is required)
        C = cyl_map(under)
        target = F @ under @ p_at(under.dom)
        fo += [(int(C.omap[x]), int(target.omap[x])) for x in range(C.dom.n_obj)]
        fa += [(int(C.amap[u]), int(target.amap[u])) for u in range(C.dom.n_arr)]
    return fo, fa


def iter_homotopies(F: FunctorMap, G: FunctorMap, *, over: Optional[FunctorMap] = None,
                    under: Optional[FunctorMap] = None) -> Iterator[Homotopy]:
    """All homotopies F -> G, optionally over q (q . h = q . F . p) or under j."""
    if F.dom != G.dom or F.cod != G.cod:
        raise ValueError("iter_homotopies: endpoint mismatch")
    fo, fa = _boundary_constraints(F, G, under)
    ov = None
    if over is not None:
        ov = (over, over @ F @ p_at(F.dom))
    for c in enumerate_functors(cyl(F.dom).total, F.cod, fixed_obj=fo, fixed_arr=fa, over=ov):
        yield Homotopy(c, F, G)


def find_homotopy(F: FunctorMap, G: FunctorMap, **kw) -> Optional[Homotopy]:
    return next(iter_homotopies(F, G, **kw), None)


# -- certificates -----------------------------------------------------------------

@dataclass(eq=False)
class SdrCertificate:
    """r . j = id and h: j . r -> id, under a0 (kind 'under') or over a0 ('over')."""

    j: FunctorMap
    r: FunctorMap
    h: Homotopy
    kind: str = "under"

    def check(self) -> Report:
        j, r, h = self.j, self.r, self.h
        rep = Report(f"SDR certificate ({self.kind})")
        rep.check("r . j = id", r @ j == identity_functor(j.dom))
        rep.check("h starts at j . r", h.f0 == j @ r)
        rep.check("h ends at id", h.f1 == identity_functor(j.cod))
        if rep.ok:
            if self.kind == "under":
                rep.check("h is under a0", is_under(h, j, j))
            else:
                rep.check("h is over a0", is_over(h, r, r))
        return rep


@dataclass(eq=False)
class EquivalenceCertificate:
    f: FunctorMap
    f_inv: FunctorMap
    h_left: Homotopy   # f_inv . f -> id
    h_right: Homotopy  # f . f_inv -> id

    def check(self) -> Report:
        f, g = self.f, self.f_inv
        rep = Report("equivalence certificate")
        rep.check("h_left runs f_inv . f -> id",
                  self.h_left.f0 == g @ f and self.h_left.f1 == identity_functor(f.dom))
        rep.check("h_right runs f . f_inv -> id",
                  self.h_right.f0 == f @ g and self.h_right.f1 == identity_functor(f.cod))
        for nm, h in (("h_left", self.h_left), ("h_right", self.h_right)):
            r = h.check()
            rep.check(f"{nm} is a homotopy", r.ok, "; ".join(r.failures))
        return rep


def identity_certificate(a: FinCat) -> EquivalenceCertificate:
    i = identity_functor(a)
    h = identity_homotopy(i)
    return EquivalenceCertificate(i, i, h, h)


def find_equivalence(f: FunctorMap) -> Optional[EquivalenceCertificate]:
    """First (f_inv, h_left, h_right) in enumeration order, or None."""
    a, b = f.dom, f.cod
    ida, idb = identity_functor(a), identity_functor(b)
    for g in enumerate_functors(b, a):
        hr = find_homotopy(f @ g, idb)
        if hr is None:
            continue
        hl = find_homotopy(g @ f, ida)
        if hl is None:
            continue
        return EquivalenceCertificate(f, g, hl, hr)
    return None


def two_of_three(f0: FunctorMap, f1: FunctorMap, f2: FunctorMap,
                 c0: Optional[EquivalenceCertificate] = None,
                 c1: Optional[EquivalenceCertificate] = None,
                 c2: Optional[EquivalenceCertificate] = None) -> EquivalenceCertificate:
    """Given f2 = f1 . f0 and certificates for two of the three, certify the third."""
    if f1 @ f0 != f2:
        raise ValueError("two_of_three: triangle does not commute")
    given = sum(c is not None for c in (c0, c1, c2))
    if given < 2:
        raise ValueError("two_of_three: need two certificates")
    if c0 is None:
        g = c2.f_inv @ f1
        k0 = whisker(None, reverse(c1.h_left), f0 @ c2.f_inv @ f1)
        k1 = whisker(c1.f_inv, c2.h_right, f1)
        return EquivalenceCertificate(f0, g, c2.h_left, (k0 + k1) + c1.h_left)
    if c1 is None:
        g = f0 @ c2.f_inv
        k0 = whisker(f0 @ c2.f_inv @ f1, reverse(c0.h_right))
        k1 = whisker(f0, c2.h_left, c0.f_inv)
        return EquivalenceCertificate(f1, g, (k0 + k1) + c0.h_right, c2.h_right)
    g = c0.f_inv @ c1.f_inv
    hl = whisker(c0.f_inv, c1.h_left, f0) + c0.h_left
    hr = whisker(f1, c0.h_right, c1.f_inv) + c1.h_right
    return EquivalenceCertificate(f2, g, hl, hr)


def right_inverse_upgrade(cert: EquivalenceCertificate, g: FunctorMap,
                          h: Homotopy) -> EquivalenceCertificate:
    """Given h: f . g -> id, make g a homotopy inverse of f."""
    f, fi, k = cert.f, cert.f_inv, cert.h_left
    l = whisker(fi, reverse(h)) + whisker(None, k, g)           # f_inv -> g
    left = reverse(reverse(k) + whisker(None, l, f))             # g f -> id
    return EquivalenceCertificate(f, g, left, h)


def left_inverse_upgrade(cert: EquivalenceCertificate, g: FunctorMap,
                         L: Homotopy) -> EquivalenceCertificate:
    """Given L: g . f -> id, make g a homotopy inverse of f."""
    f, fi, E = cert.f, cert.f_inv, cert.h_right
    l = reverse(whisker(None, L, fi)) + whisker(g, E)            # f_inv -> g
    right = reverse(reverse(E) + whisker(f, l))                  # f g -> id
    return EquivalenceCertificate(f, g, L, right)


def retract_transfer(cert: EquivalenceCertificate, f_prime: FunctorMap,
                     g0: FunctorMap, r0: FunctorMap, g1: FunctorMap,
                     r1: FunctorMap) -> EquivalenceCertificate:
    """f' a retract of f: f g0 = g1 f', r1 f = f' r0, r0 g0 = id, r1 g1 = id."""
    f = cert.f
    if not (f @ g0 == g1 @ f_prime and r1 @ f == f_prime @ r0
            and r0 @ g0 == identity_functor(f_prime.dom)
            and r1 @ g1 == identity_functor(f_prime.cod)):
        raise ValueError("retract_transfer: retract equations fail")
    inv = r0 @ cert.f_inv @ g1
    return EquivalenceCertificate(f_prime, inv, whisker(r0, cert.h_left, g0),
                                  whisker(r1, cert.h_right, g1))
