"""Finite categories given by full composition tables.

Objects and arrows are addressed by integer index; names are kept for
printing and lookup.  Every category stores the identity of object ``x``
at arrow index ``x``, so ``ident[x] == x`` always holds.  ``comp[g, f]`` is
the index of ``g . f`` (g after f) or -1 when the pair is not composable.
"""

from __future__ import annotations

import hashlib
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as _iproduct
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "FinCat", "FunctorMap", "NatTrans", "Square", "Report",
    "validate", "validate_functor", "compose_functors", "identity_functor", "compose_arrays",
    "product", "product_data", "pair", "product_map", "exponential_by",
    "exponential_data", "pullback", "pullback_data", "enumerate_functors",
    "first_functor", "count_functors", "induced_functor",
    "equivalence_oracle", "injective_on_objects_oracle",
    "terminal", "empty", "walking_arrow", "indiscrete", "discrete",
    "parallel_pair", "z2_groupoid", "from_table", "terminal_map",
]


def _frozen(arr, dtype=np.int64) -> np.ndarray:
    out = np.array(arr, dtype=dtype)
    out.setflags(write=False)
    return out


class BoundedCache:
    """A small LRU map; large tables must not accumulate without bound."""

    def __init__(self, maxsize: int):
        self.maxsize = maxsize
        self._d: OrderedDict = OrderedDict()

    def get(self, key):
        hit = self._d.get(key)
        if hit is not None:
            self._d.move_to_end(key)
        return hit

    def put(self, key, value) -> None:
        self._d[key] = value
        self._d.move_to_end(key)
        while len(self._d) > self.maxsize:
            self._d.popitem(last=False)


@dataclass
class Report:
    """Pass/fail lines; a check fails iff any violation was recorded."""

    title: str
    lines: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, label: str, ok: bool, witness: str = "") -> bool:
        if ok:
            self.lines.append(f"PASS {label}")
        else:
            msg = label + (f": {witness}" if witness else "")
            self.lines.append(f"FAIL {msg}")
            self.failures.append(msg)
        return ok

    def fail(self, msg: str) -> None:
        self.lines.append(f"FAIL {msg}")
        self.failures.append(msg)

    def render(self) -> str:
        return "\n".join([f"# {self.title}", *self.lines])


class FinCat:
    """A finite category with a total composition table."""

    __slots__ = ("name", "objects", "arrows", "src", "tgt", "_comp", "_comp_fn", "factors",
                 "power", "_obj_idx", "_arr_idx", "_hom", "_inv", "_key", "_hint", "_hash",
                 "__weakref__")

    def __init__(self, name: str, objects: Sequence[str], arrows: Sequence[str],
                 src, tgt, comp, factors: tuple | None = None, power: tuple | None = None,
                 key: tuple | None = None):
        """``comp`` may be a callable building the table on first use; ``key``
        then identifies the category without it (products use their factors)."""
        self.name = name
        self.power = power  # (i, b) when this category is b^i
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self.src = _frozen(src)
        self.tgt = _frozen(tgt)
        self.factors = factors
        if callable(comp):
            self._comp, self._comp_fn = None, comp
        else:
            self._comp, self._comp_fn = self._freeze_comp(comp), None
        self._obj_idx = {o: i for i, o in enumerate(self.objects)}
        self._arr_idx = {a: i for i, a in enumerate(self.arrows)}
        self._hom = None
        self._inv = None
        self._key = None
        self._hint = key
        self._hash = None

    def _freeze_comp(self, comp) -> np.ndarray:
        return _frozen(comp, np.int32).reshape(len(self.arrows), len(self.arrows))

    @property
    def comp(self) -> np.ndarray:
        if self._comp is None:
            self._comp = self._freeze_comp(self._comp_fn())
            self._comp_fn = None
        return self._comp

    # -- basic structure -------------------------------------------------
    @property
    def n_obj(self) -> int:
        return len(self.objects)

    @property
    def n_arr(self) -> int:
        return len(self.arrows)

    def obj(self, name: str) -> int:
        return self._obj_idx[name]

    def arr(self, name: str) -> int:
        return self._arr_idx[name]

    def has_obj(self, name: str) -> bool:
        return name in self._obj_idx

    def has_arr(self, name: str) -> bool:
        return name in self._arr_idx

    def identity(self, x: int) -> int:
        return x

    def is_identity(self, a: int) -> bool:
        return a < self.n_obj

    def compose(self, g: int, f: int) -> int:
        c = int(self.comp[g, f])
        if c < 0:
            raise ValueError(f"{self.arrows[g]} . {self.arrows[f]} not composable in {self.name}")
        return c

    def hom(self, x: int, y: int) -> np.ndarray:
        if self._hom is None:
            table: dict[tuple[int, int], list[int]] = {}
            for a in range(self.n_arr):
                table.setdefault((int(self.src[a]), int(self.tgt[a])), []).append(a)
            self._hom = {k: np.asarray(v, dtype=np.int64) for k, v in table.items()}
        return self._hom.get((x, y), _EMPTY)

    @property
    def inv(self) -> np.ndarray:
        """inv[a] is the inverse of arrow a, or -1 if a is not invertible."""
        pd = product_data(*self.factors) if self._inv is None and self.factors else None
        if pd is not None and pd.cat is self:
            ia, ib = pd.a.inv[pd.arr_pairs[:, 0]], pd.b.inv[pd.arr_pairs[:, 1]]
            ok = (ia >= 0) & (ib >= 0)
            inv = np.where(ok, pd.arr_index[np.maximum(ia, 0), np.maximum(ib, 0)], -1)
            inv.setflags(write=False)
            self._inv = inv
        if self._inv is None:
            inv = np.full(self.n_arr, -1, dtype=np.int64)
            for a in range(self.n_arr):
                s, t = int(self.src[a]), int(self.tgt[a])
                for b in self.hom(t, s):
                    if self.comp[b, a] == s and self.comp[a, b] == t:
                        inv[a] = b
                        break
            inv.setflags(write=False)
            self._inv = inv
        return self._inv

    def is_iso(self, a: int) -> bool:
        return self.inv[a] >= 0

    def is_groupoid(self) -> bool:
        return bool(np.all(self.inv >= 0))

    # -- identity ---------------------------------------------------------
    def key(self) -> tuple:
        """Digest of names, sources and targets; cheap, never builds the table."""
        if self._key is None:
            h = hashlib.blake2b(digest_size=20)
            for part in (self.objects, self.arrows):
                h.update("\x1f".join(part).encode())
                h.update(b"\x1e")
            for arr in (self.src, self.tgt):
                h.update(np.ascontiguousarray(arr).tobytes())
            self._key = (self.name, self.n_obj, self.n_arr, h.hexdigest())
        return self._key

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinCat):
            return NotImplemented
        if self.key() != other.key():
            return False
        a, b = self._hint, other._hint
        if a is not None and b is not None and a == b:
            return True
        return np.array_equal(self.comp, other.comp)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self) -> str:
        return f"FinCat({self.name!r}, {self.n_obj} objects, {self.n_arr} arrows)"


_EMPTY = np.zeros(0, dtype=np.int64)
_EMPTY.setflags(write=False)


def from_table(name: str, objects: Sequence[str],
               arrows: Sequence[tuple[str, str, str]],
               comp: Mapping[tuple[str, str], str], factors=None) -> FinCat:
    """Build a category from named non-identity arrows and a table of their composites.

    ``comp`` maps ``(g, f)`` to ``g . f`` for composable non-identity pairs;
    composites with identities are implicit.  Missing entries raise ValueError.
    """
    objects = list(objects)
    oidx = {o: i for i, o in enumerate(objects)}
    if len(oidx) != len(objects):
        raise ValueError("duplicate object name")
    names = [f"id_{o}" for o in objects]
    src = list(range(len(objects)))
    tgt = list(range(len(objects)))
    for a, s, t in arrows:
        if s not in oidx or t not in oidx:
            raise ValueError(f"arrow {a}: unknown endpoint")
        names.append(a)
        src.append(oidx[s])
        tgt.append(oidx[t])
    aidx = {a: i for i, a in enumerate(names)}
    if len(aidx) != len(names):
        raise ValueError("duplicate arrow name")
    m = len(names)
    n = len(objects)
    table = np.full((m, m), -1, dtype=np.int64)
    for g in range(m):
        for f in range(m):
            if src[g] != tgt[f]:
                continue
            if g < n:
                table[g, f] = f
            elif f < n:
                table[g, f] = g
            else:
                key = (names[g], names[f])
                if key not in comp:
                    raise ValueError(f"missing composition entry {names[g]} . {names[f]}")
                h = comp[key]
                if h not in aidx:
                    raise ValueError(f"composite {h} of {names[g]} . {names[f]} is not an arrow")
                table[g, f] = aidx[h]
    return FinCat(name, objects, names, src, tgt, table, factors)


def _identities_first(m: int, ident) -> tuple[np.ndarray, np.ndarray]:
    """(order, perm): new index -> raw index and raw index -> new index."""
    ident = np.asarray(ident, dtype=np.int64)
    is_id = np.zeros(m, dtype=bool)
    is_id[ident] = True
    order = np.concatenate([ident, np.nonzero(~is_id)[0]]).astype(np.int64)
    perm = np.empty(m, dtype=np.int64)
    perm[order] = np.arange(m)
    return order, perm


def _canonical(name, objects, arr_names, src, tgt, ident, comp, factors=None, power=None):
    """Reorder arrows so identities come first; returns (cat, raw->new index map)."""
    m = len(arr_names)
    order, perm = _identities_first(m, ident)
    comp = np.asarray(comp, dtype=np.int32)
    sub = comp[np.ix_(order, order)] if m else comp.reshape(0, 0)
    perm32 = perm.astype(np.int32)
    new_comp = np.where(sub >= 0, perm32[np.maximum(sub, 0)], np.int32(-1))
    src = np.asarray(src, dtype=np.int64)[order]
    tgt = np.asarray(tgt, dtype=np.int64)[order]
    names = [arr_names[i] for i in order]
    for x, o in enumerate(objects):
        names[x] = f"id_{o}"
    return FinCat(name, objects, names, src, tgt, new_comp, factors, power), perm


# -- validation -----------------------------------------------------------

def validate(c: FinCat, max_witnesses: int = 5) -> Report:
    """Exhaustive check of the category laws, with witness triples on failure."""
    rep = Report(f"validate {c.name}")
    n, m = c.n_obj, c.n_arr
    src, tgt, comp = c.src, c.tgt, c.comp
    bad = [x for x in range(n) if src[x] != x or tgt[x] != x]
    rep.check("identity endpoints", not bad, f"object {c.objects[bad[0]]}" if bad else "")
    if m == 0:
        return rep
    composable = src[:, None] == tgt[None, :]
    defined = comp >= 0
    mism = np.argwhere(composable != defined)
    rep.check("composition defined exactly on composable pairs", len(mism) == 0,
              _pair_witness(c, mism[:max_witnesses]))
    if len(mism):
        return rep
    gi, fi = np.nonzero(defined)
    h = comp[gi, fi]
    ends = (src[h] == src[fi]) & (tgt[h] == tgt[gi])
    wit = np.nonzero(~ends)[0][:max_witnesses]
    rep.check("composite endpoints", bool(ends.all()),
              "; ".join(f"{c.arrows[gi[k]]} . {c.arrows[fi[k]]}" for k in wit))
    left = comp[tgt, np.arange(m)] == np.arange(m)
    right = comp[np.arange(m), src] == np.arange(m)
    wl = np.nonzero(~left)[0][:max_witnesses]
    wr = np.nonzero(~right)[0][:max_witnesses]
    rep.check("left unit", bool(left.all()),
              "; ".join(f"id . {c.arrows[a]} != {c.arrows[a]}" for a in wl))
    rep.check("right unit", bool(right.all()),
              "; ".join(f"{c.arrows[a]} . id != {c.arrows[a]}" for a in wr))
    witnesses = []
    for hh in range(m):
        row = comp[hh]
        gs = np.nonzero(row >= 0)[0]
        if len(gs) == 0:
            continue
        sub = comp[gs]  # g . f for all f
        ok = sub >= 0
        gg, ff = np.nonzero(ok)
        lhs = comp[hh, sub[gg, ff]]
        rhs = comp[row[gs[gg]], ff]
        badk = np.nonzero(lhs != rhs)[0]
        for k in badk[: max_witnesses - len(witnesses)]:
            witnesses.append(f"({c.arrows[hh]}, {c.arrows[gs[gg[k]]]}, {c.arrows[ff[k]]})")
        if len(witnesses) >= max_witnesses:
            break
    rep.check("associativity", not witnesses, "; ".join(witnesses))
    return rep


def _pair_witness(c, pairs) -> str:
    return "; ".join(f"({c.arrows[g]}, {c.arrows[f]})" for g, f in pairs)


# -- functors --------------------------------------------------------------

class FunctorMap:
    """A functor given by its object map and arrow map (index arrays)."""

    __slots__ = ("dom", "cod", "omap", "amap", "name")

    def __init__(self, dom: FinCat, cod: FinCat, omap, amap, name: str = ""):
        self.dom = dom
        self.cod = cod
        self.omap = _frozen(omap)
        self.amap = _frozen(amap)
        self.name = name

    @classmethod
    def from_names(cls, dom: FinCat, cod: FinCat, omap: Mapping[str, str],
                   amap: Mapping[str, str], name: str = "") -> "FunctorMap":
        o = np.array([cod.obj(omap[x]) for x in dom.objects], dtype=np.int64)
        a = np.empty(dom.n_arr, dtype=np.int64)
        for i, nm in enumerate(dom.arrows):
            if i < dom.n_obj and nm not in amap:
                a[i] = o[i]
            else:
                a[i] = cod.arr(amap[nm])
        return cls(dom, cod, o, a, name)

    def __matmul__(self, other: "FunctorMap") -> "FunctorMap":
        return compose_functors(self, other)

    def obj(self, name: str) -> str:
        return self.cod.objects[self.omap[self.dom.obj(name)]]

    def arr(self, name: str) -> str:
        return self.cod.arrows[self.amap[self.dom.arr(name)]]

    def key(self) -> tuple:
        return (self.dom, self.cod, self.omap.tobytes(), self.amap.tobytes())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctorMap):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and np.array_equal(self.omap, other.omap)
                and np.array_equal(self.amap, other.amap))

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.amap.tobytes()))

    def __repr__(self) -> str:
        nm = self.name or "F"
        return f"FunctorMap({nm}: {self.dom.name} -> {self.cod.name})"

    def named(self, name: str) -> "FunctorMap":
        return FunctorMap(self.dom, self.cod, self.omap, self.amap, name)


def validate_functor(f: FunctorMap, max_witnesses: int = 5) -> Report:
    d, c = f.dom, f.cod
    rep = Report(f"validate functor {f.name or ''}".strip())
    om, am = f.omap, f.amap
    if len(om) != d.n_obj or len(am) != d.n_arr:
        rep.fail("map sizes do not match the domain")
        return rep
    if d.n_obj == 0:
        rep.check("functor laws", True)
        return rep
    ids = am[np.arange(d.n_obj)] == om
    w = np.nonzero(~ids)[0][:max_witnesses]
    rep.check("identities preserved", bool(ids.all()), "; ".join(d.arrows[x] for x in w))
    ends = (c.src[am] == om[d.src]) & (c.tgt[am] == om[d.tgt])
    w = np.nonzero(~ends)[0][:max_witnesses]
    rep.check("source/target respected", bool(ends.all()), "; ".join(d.arrows[x] for x in w))
    if not ends.all():
        return rep
    gi, fi = np.nonzero(d.comp >= 0)
    lhs = am[d.comp[gi, fi]]
    rhs = c.comp[am[gi], am[fi]]
    bad = np.nonzero(lhs != rhs)[0][:max_witnesses]
    rep.check("composition preserved", len(bad) == 0,
              "; ".join(f"{d.arrows[gi[k]]} . {d.arrows[fi[k]]}" for k in bad))
    return rep


def compose_functors(g: FunctorMap, f: FunctorMap) -> FunctorMap:
    """g . f, pointwise."""
    if f.cod != g.dom:
        raise ValueError(f"cannot compose: {f.cod.name} != {g.dom.name}")
    return FunctorMap(f.dom, g.cod, g.omap[f.omap], g.amap[f.amap])


@lru_cache(maxsize=512)
def identity_functor(c: FinCat) -> FunctorMap:
    return FunctorMap(c, c, np.arange(c.n_obj), np.arange(c.n_arr), f"id_{c.name}")


def terminal_map(c: FinCat) -> FunctorMap:
    return FunctorMap(c, terminal(), np.zeros(c.n_obj), np.zeros(c.n_arr))


@dataclass(eq=False)
class NatTrans:
    """Natural transformation given by one component per object of the domain."""

    source: FunctorMap
    target: FunctorMap
    components: np.ndarray

    def validate(self) -> Report:
        F, G = self.source, self.target
        rep = Report("validate natural transformation")
        if F.dom != G.dom or F.cod != G.cod:
            rep.fail("source and target functors differ in endpoints")
            return rep
        d, c = F.dom, F.cod
        comps = np.asarray(self.components, dtype=np.int64)
        ends = [(c.src[comps[x]] == F.omap[x]) and (c.tgt[comps[x]] == G.omap[x])
                for x in range(d.n_obj)]
        rep.check("component endpoints", all(ends))
        if not all(ends):
            return rep
        bad = [d.arrows[u] for u in range(d.n_arr)
               if c.comp[comps[d.tgt[u]], F.amap[u]] != c.comp[G.amap[u], comps[d.src[u]]]]
        rep.check("naturality", not bad, ", ".join(bad[:5]))
        return rep


@dataclass(eq=False)
class Square:
    """top: a0 -> a2, left: a0 -> a1, right: a2 -> a3, bottom: a1 -> a3."""

    top: FunctorMap
    left: FunctorMap
    right: FunctorMap
    bottom: FunctorMap

    def commutes(self) -> bool:
        t, l, r, b = self.top, self.left, self.right, self.bottom
        if not (t.dom == l.dom and t.cod == r.dom and l.cod == b.dom and r.cod == b.cod):
            return False
        return (r @ t) == (b @ l)


# -- standard small categories ---------------------------------------------

@lru_cache(maxsize=None)
def terminal() -> FinCat:
    return from_table("1", ["*"], [], {})


@lru_cache(maxsize=None)
def empty() -> FinCat:
    return from_table("0", [], [], {})


@lru_cache(maxsize=None)
def walking_arrow() -> FinCat:
    return from_table("2", ["0", "1"], [("a", "0", "1")], {})


def indiscrete(name: str, objects: Sequence[str], arrow_name=None) -> FinCat:
    """The groupoid with exactly one arrow between any two objects."""
    objects = list(objects)
    if arrow_name is None:
        def arrow_name(s, t):
            return f"{s}>{t}"
    arrows = [(arrow_name(s, t), s, t) for s in objects for t in objects if s != t]
    nm = {(s, t): arrow_name(s, t) for s in objects for t in objects if s != t}
    comp = {}
    for (g, gs, gt) in arrows:
        for (f, fs, ft) in arrows:
            if ft == gs and fs != gt:
                comp[(g, f)] = nm[(fs, gt)]
            elif ft == gs:
                comp[(g, f)] = f"id_{fs}"
    return from_table(name, objects, arrows, comp)


def discrete(name: str, objects: Sequence[str]) -> FinCat:
    return from_table(name, objects, [], {})


@lru_cache(maxsize=None)
def parallel_pair() -> FinCat:
    return from_table("P", ["0", "1"], [("a", "0", "1"), ("b", "0", "1")], {})


@lru_cache(maxsize=None)
def z2_groupoid() -> FinCat:
    """Connected groupoid on two objects with vertex group Z/2."""
    objs = ["0", "1"]
    # arrows (s, t, e) with e in Z/2; (0,0,0) and (1,1,0) are identities
    def nm(s, t, e):
        return f"id_{s}" if (s == t and e == 0) else f"g{s}{t}{e}"
    arrows = [(nm(s, t, e), s, t) for s in objs for t in objs for e in (0, 1)
              if not (s == t and e == 0)]
    comp = {}
    for s1 in objs:
        for t1 in objs:
            for e1 in (0, 1):
                for t2 in objs:
                    for e2 in (0, 1):
                        if (s1 == t1 and e1 == 0) or (t1 == t2 and e2 == 0):
                            continue
                        comp[(nm(t1, t2, e2), nm(s1, t1, e1))] = nm(s1, t2, (e1 + e2) % 2)
    return from_table("G", objs, arrows, comp)


# -- products --------------------------------------------------------------

@dataclass(eq=False)
class ProductData:
    cat: FinCat
    a: FinCat
    b: FinCat
    arr_index: np.ndarray   # (m_a, m_b) -> arrow index
    arr_pairs: np.ndarray   # (m, 2)
    pi1: FunctorMap = None
    pi2: FunctorMap = None

    def obj_index(self, x: int, y: int) -> int:
        return x * self.b.n_obj + y


@lru_cache(maxsize=128)
def product_data(a: FinCat, b: FinCat) -> ProductData:
    na, nb, ma, mb = a.n_obj, b.n_obj, a.n_arr, b.n_arr
    objects = [f"({x},{y})" for x in a.objects for y in b.objects]
    raw_names = [f"({g},{h})" for g in a.arrows for h in b.arrows]
    gg, hh = np.meshgrid(np.arange(ma), np.arange(mb), indexing="ij")
    gg, hh = gg.ravel(), hh.ravel()
    src = a.src[gg] * nb + b.src[hh]
    tgt = a.tgt[gg] * nb + b.tgt[hh]
    ident = (np.arange(na)[:, None] * mb + np.arange(nb)[None, :]).ravel()
    order, perm = _identities_first(ma * mb, ident)
    G, H = gg[order], hh[order]
    perm32 = perm.astype(np.int32)

    def build():
        ca = a.comp[G[:, None], G[None, :]]
        cb = b.comp[H[:, None], H[None, :]]
        raw = np.where((ca >= 0) & (cb >= 0), ca.astype(np.int32) * mb + cb, 0)
        return np.where((ca >= 0) & (cb >= 0), perm32[raw], np.int32(-1))

    names = [raw_names[i] for i in order]
    for x, o in enumerate(objects):
        names[x] = f"id_{o}"
    cat = FinCat(f"{a.name}x{b.name}", objects, names, src[order], tgt[order], build,
                 factors=(a, b), key=("x", a, b))
    arr_index = perm.reshape(ma, mb)
    pairs = np.empty((ma * mb, 2), dtype=np.int64)
    pairs[perm, 0] = gg
    pairs[perm, 1] = hh
    pd = ProductData(cat, a, b, _frozen(arr_index), _frozen(pairs))
    ox = np.repeat(np.arange(na), nb)
    oy = np.tile(np.arange(nb), na)
    pd.pi1 = FunctorMap(cat, a, ox, pairs[:, 0], "pi1")
    pd.pi2 = FunctorMap(cat, b, oy, pairs[:, 1], "pi2")
    return pd


def compose_arrays(c: FinCat, g, f) -> np.ndarray:
    """Vectorized g . f in c (-1 where undefined); products compose by components
    so their full table is never needed."""
    g = np.asarray(g, dtype=np.int64)
    f = np.asarray(f, dtype=np.int64)
    if c._comp is None and c.factors is not None:
        pd = product_data(*c.factors)
        if pd.cat is c:
            ca = compose_arrays(pd.a, pd.arr_pairs[g, 0], pd.arr_pairs[f, 0])
            cb = compose_arrays(pd.b, pd.arr_pairs[g, 1], pd.arr_pairs[f, 1])
            ok = (ca >= 0) & (cb >= 0)
            return np.where(ok, pd.arr_index[np.maximum(ca, 0), np.maximum(cb, 0)], -1)
    return c.comp[g, f].astype(np.int64)


def product(a: FinCat, b: FinCat) -> tuple[FinCat, FunctorMap, FunctorMap]:
    pd = product_data(a, b)
    return pd.cat, pd.pi1, pd.pi2


def pair(f: FunctorMap, g: FunctorMap) -> FunctorMap:
    """The functor (f, g): X -> A x B."""
    if f.dom != g.dom:
        raise ValueError("pair: domains differ")
    pd = product_data(f.cod, g.cod)
    return FunctorMap(f.dom, pd.cat, f.omap * g.cod.n_obj + g.omap,
                      pd.arr_index[f.amap, g.amap])


def product_map(f: FunctorMap, g: FunctorMap) -> FunctorMap:
    """f x g: A x B -> A' x B'."""
    src = product_data(f.dom, g.dom)
    return pair(f @ src.pi1, g @ src.pi2)


# -- exponentials ------------------------------------------------------------

@dataclass(eq=False)
class ExponentialData:
    cat: FinCat
    i: FinCat
    b: FinCat
    fun_amap: np.ndarray          # (n_obj, m_i): each object is a functor i -> b
    fun_omap: np.ndarray          # (n_obj, n_i)
    components: np.ndarray        # (n_arr, n_i)
    obj_lookup: dict
    arr_lookup: dict
    ev: FunctorMap = None         # cat x i -> b

    def functor(self, k: int) -> FunctorMap:
        return FunctorMap(self.i, self.b, self.fun_omap[k], self.fun_amap[k])


@lru_cache(maxsize=32)
def exponential_data(i: FinCat, b: FinCat) -> ExponentialData:
    funs = list(enumerate_functors(i, b))
    nonid = [k for k in range(i.n_arr) if k >= i.n_obj]

    def oname(F):
        objs = ",".join(b.objects[y] for y in F.omap)
        arrs = ",".join(b.arrows[u] for u in F.amap[nonid])
        return f"<{objs}|{arrs}>" if nonid else f"<{objs}>"

    obj_names = [oname(F) for F in funs]
    obj_lookup = {F.amap.tobytes(): k for k, F in enumerate(funs)}
    names, src, tgt, comps, ident = [], [], [], [], []
    ni = i.n_obj
    for s, F in enumerate(funs):
        for t, G in enumerate(funs):
            choices = [b.hom(int(F.omap[x]), int(G.omap[x])) for x in range(ni)]
            for alpha in _iproduct(*choices):
                alpha = np.asarray(alpha, dtype=np.int64).reshape(ni)
                lhs = b.comp[alpha[i.tgt], F.amap]
                rhs = b.comp[G.amap, alpha[i.src]]
                if not np.array_equal(lhs, rhs):
                    continue
                if s == t and np.array_equal(alpha, F.omap):
                    ident.append(len(names))
                cn = ",".join(b.arrows[u] for u in alpha)
                names.append(f"[{cn}]@{obj_names[s]}")
                src.append(s)
                tgt.append(t)
                comps.append(alpha)
    m = len(names)
    comps_arr = np.asarray(comps, dtype=np.int64).reshape(m, ni)
    lookup_raw = {(src[k], tgt[k], comps_arr[k].tobytes()): k for k in range(m)}
    raw = np.full((m, m), -1, dtype=np.int64)
    for g in range(m):
        for f in range(m):
            if src[g] != tgt[f]:
                continue
            c = b.comp[comps_arr[g], comps_arr[f]] if ni else comps_arr[g]
            raw[g, f] = lookup_raw[(src[f], tgt[g], np.asarray(c, dtype=np.int64).tobytes())]
    cat, perm = _canonical(f"{b.name}^{i.name}", obj_names, names, src, tgt, ident, raw,
                           power=(i, b))
    new_comps = np.empty_like(comps_arr)
    new_comps[perm] = comps_arr
    arr_lookup = {(int(cat.src[k]), int(cat.tgt[k]), new_comps[k].tobytes()): k
                  for k in range(m)}
    fun_amap = np.asarray([F.amap for F in funs], dtype=np.int64).reshape(len(funs), i.n_arr)
    fun_omap = np.asarray([F.omap for F in funs], dtype=np.int64).reshape(len(funs), ni)
    ed = ExponentialData(cat, i, b, _frozen(fun_amap), _frozen(fun_omap), _frozen(new_comps),
                         obj_lookup, arr_lookup)
    # evaluation cat x i -> b: (alpha, tau: t -> t') |-> G(tau) . alpha_t
    pd = product_data(cat, i)
    e_om = np.empty(pd.cat.n_obj, dtype=np.int64)
    e_am = np.empty(pd.cat.n_arr, dtype=np.int64)
    for k in range(cat.n_obj):
        for t in range(ni):
            e_om[pd.obj_index(k, t)] = fun_omap[k, t]
    for z in range(pd.cat.n_arr):
        al, tau = pd.arr_pairs[z]
        G = fun_amap[cat.tgt[al]]
        e_am[z] = b.comp[G[tau], new_comps[al, i.src[tau]]]
    ed.ev = FunctorMap(pd.cat, b, e_om, e_am, "ev")
    return ed


def exponential_by(i: FinCat, b: FinCat) -> FinCat:
    """b^i: functors i -> b and natural transformations between them."""
    return exponential_data(i, b).cat


# -- pullbacks ---------------------------------------------------------------

@dataclass(eq=False)
class PullbackData:
    cat: FinCat
    f: FunctorMap
    g: FunctorMap
    p1: FunctorMap
    p2: FunctorMap
    obj_lookup: dict
    arr_lookup: dict

    def pair(self, h1: FunctorMap, h2: FunctorMap) -> FunctorMap:
        """Universal arrow into the pullback from a commuting pair."""
        if (self.f @ h1) != (self.g @ h2):
            raise ValueError("pullback pair: legs do not commute")
        om = [self.obj_lookup[(int(x), int(y))] for x, y in zip(h1.omap, h2.omap)]
        am = [self.arr_lookup[(int(u), int(v))] for u, v in zip(h1.amap, h2.amap)]
        return FunctorMap(h1.dom, self.cat, om, am)


def _pullback_key(f: FunctorMap, g: FunctorMap):
    return (f.key(), g.key())


_PB_CACHE = BoundedCache(64)


def pullback_data(f: FunctorMap, g: FunctorMap) -> PullbackData:
    key = _pullback_key(f, g)
    hit = _PB_CACHE.get(key)
    if hit is not None:
        return hit
    if f.cod != g.cod:
        raise ValueError("pullback: not a cospan")
    A, B = f.dom, g.dom
    objs = [(x, y) for x in range(A.n_obj) for y in range(B.n_obj) if f.omap[x] == g.omap[y]]
    obj_lookup = {p: k for k, p in enumerate(objs)}
    arrs = [(u, v) for u in range(A.n_arr) for v in range(B.n_arr) if f.amap[u] == g.amap[v]]
    raw_lookup = {p: k for k, p in enumerate(arrs)}
    src = [obj_lookup[(int(A.src[u]), int(B.src[v]))] for u, v in arrs]
    tgt = [obj_lookup[(int(A.tgt[u]), int(B.tgt[v]))] for u, v in arrs]
    ident = [raw_lookup[(x, y)] for x, y in objs]
    m = len(arrs)
    raw = np.full((m, m), -1, dtype=np.int64)
    ua = np.asarray([p[0] for p in arrs], dtype=np.int64)
    va = np.asarray([p[1] for p in arrs], dtype=np.int64)
    for k in range(m):
        ok = np.nonzero((A.comp[ua[k], ua] >= 0) & (B.comp[va[k], va] >= 0))[0]
        for j in ok:
            raw[k, j] = raw_lookup[(int(A.comp[ua[k], ua[j]]), int(B.comp[va[k], va[j]]))]
    onames = [f"({A.objects[x]},{B.objects[y]})" for x, y in objs]
    anames = [f"({A.arrows[u]},{B.arrows[v]})" for u, v in arrs]
    cat, perm = _canonical(f"PB({A.name},{B.name})", onames, anames, src, tgt, ident, raw)
    new_pairs = np.empty((m, 2), dtype=np.int64)
    new_pairs[perm, 0] = ua
    new_pairs[perm, 1] = va
    arr_lookup = {(int(new_pairs[k, 0]), int(new_pairs[k, 1])): k for k in range(m)}
    p1 = FunctorMap(cat, A, [x for x, _ in objs], new_pairs[:, 0], "p1")
    p2 = FunctorMap(cat, B, [y for _, y in objs], new_pairs[:, 1], "p2")
    pd = PullbackData(cat, f, g, p1, p2, obj_lookup, arr_lookup)
    _PB_CACHE.put(key, pd)
    return pd


def pullback(f: FunctorMap, g: FunctorMap) -> tuple[FinCat, FunctorMap, FunctorMap]:
    pd = pullback_data(f, g)
    return pd.cat, pd.p1, pd.p2


# -- assignment engine -----------------------------------------------------

class _Tables:
    """Plain-list views of a category, used by the assignment engine."""

    __slots__ = ("src", "tgt", "inv", "post", "pre", "comp", "homs", "n_obj", "n_arr")

    def __init__(self, c: FinCat):
        self.n_obj, self.n_arr = c.n_obj, c.n_arr
        self.src = c.src.tolist()
        self.tgt = c.tgt.tolist()
        self.inv = c.inv.tolist()
        self.comp = c.comp.tolist()
        # post[f]: (g, g.f) for g after f; pre[g]: (f, g.f) for f before g
        gi, fi = np.nonzero(c.comp >= 0)
        hi = c.comp[gi, fi]
        self.pre = _group(gi, fi, hi, c.n_arr)
        order = np.lexsort((gi, fi))
        self.post = _group(fi[order], gi[order], hi[order], c.n_arr)
        self.homs = {}
        for u in range(c.n_arr):
            self.homs.setdefault((self.src[u], self.tgt[u]), []).append(u)


def _group(keys, a, b, n) -> list[list[tuple[int, int]]]:
    """Lists of (a, b) pairs grouped by sorted keys."""
    out: list = [[] for _ in range(n)]
    if len(keys) == 0:
        return out
    cuts = np.searchsorted(keys, np.arange(n + 1))
    pairs = list(zip(a.tolist(), b.tolist()))
    for k in range(n):
        lo, hi = cuts[k], cuts[k + 1]
        if hi > lo:
            out[k] = pairs[lo:hi]
    return out


_TABLES = BoundedCache(64)


def _tables(c: FinCat) -> _Tables:
    t = _TABLES.get(c)
    if t is None:
        t = _Tables(c)
        _TABLES.put(c, t)
    return t


class _Assignment:
    """Partial functor a -> b with propagation through the composition table.

    Used both for backtracking enumeration and for computing the arrow induced
    by the legs of a colimit (the arrows of the colimit are composites of leg
    images, so propagation reaches every arrow).
    """

    def __init__(self, a: FinCat, b: FinCat, over: tuple | None = None):
        self.a, self.b = a, b
        self.ta, self.tb = _tables(a), _tables(b)
        self.omap = [-1] * a.n_obj
        self.amap = [-1] * a.n_arr
        self.trail_o: list[int] = []
        self.trail_a: list[int] = []
        self.over = over  # (q: b -> c, t: a -> c); require q . F = t
        if over is not None:
            q, t = over
            self._q_om, self._q_am = q.omap.tolist(), q.amap.tolist()
            self._t_om, self._t_am = t.omap.tolist(), t.amap.tolist()

    def mark(self):
        return len(self.trail_o), len(self.trail_a)

    def undo(self, mark) -> None:
        mo, ma = mark
        to, ta = self.trail_o, self.trail_a
        om, am = self.omap, self.amap
        while len(to) > mo:
            om[to.pop()] = -1
        while len(ta) > ma:
            am[ta.pop()] = -1

    def _obj(self, x: int, y: int, queue) -> bool:
        cy = self.omap[x]
        if cy >= 0:
            return cy == y
        if self.over is not None and self._q_om[y] != self._t_om[x]:
            return False
        self.omap[x] = y
        self.trail_o.append(x)
        queue.append((x, y))  # identity of x goes to identity of y
        return True

    def set_obj(self, x: int, y: int) -> bool:
        queue: list = []
        if not self._obj(x, y, queue):
            return False
        return self._drain(queue)

    def set_arr(self, f: int, u: int) -> bool:
        return self._drain([(f, u)])

    def _drain(self, queue) -> bool:
        ta, tb = self.ta, self.tb
        amap = self.amap
        bcomp = tb.comp
        over = self.over is not None
        while queue:
            f, u = queue.pop()
            cur = amap[f]
            if cur >= 0:
                if cur != u:
                    return False
                continue
            if over and self._q_am[u] != self._t_am[f]:
                return False
            if not self._obj(ta.src[f], tb.src[u], queue):
                return False
            if not self._obj(ta.tgt[f], tb.tgt[u], queue):
                return False
            amap[f] = u
            self.trail_a.append(f)
            fi = ta.inv[f]
            if fi >= 0:
                ui = tb.inv[u]
                if ui < 0:
                    return False
                queue.append((fi, ui))
            for g, gf in ta.post[f]:
                ug = amap[g]
                if ug >= 0:
                    queue.append((gf, bcomp[ug][u]))
            for h, fh in ta.pre[f]:
                uh = amap[h]
                if uh >= 0:
                    queue.append((fh, bcomp[u][uh]))
        return True

    def next_arrow(self) -> int:
        om, am, ta = self.omap, self.amap, self.ta
        for f in range(ta.n_obj, ta.n_arr):
            if am[f] < 0 and om[ta.src[f]] >= 0 and om[ta.tgt[f]] >= 0:
                return f
        return -1

    def next_object(self) -> int:
        for x, y in enumerate(self.omap):
            if y < 0:
                return x
        return -1

    def ready_homs_nonempty(self) -> bool:
        om, am, ta, homs = self.omap, self.amap, self.ta, self.tb.homs
        for f in range(ta.n_obj, ta.n_arr):
            if am[f] < 0:
                s, t = om[ta.src[f]], om[ta.tgt[f]]
                if s >= 0 and t >= 0 and (s, t) not in homs:
                    return False
        return True

    def result(self) -> FunctorMap:
        return FunctorMap(self.a, self.b, self.omap, self.amap)

    def search(self) -> Iterator[FunctorMap]:
        f = self.next_arrow()
        if f >= 0:
            s, t = self.omap[self.ta.src[f]], self.omap[self.ta.tgt[f]]
            for u in self.tb.homs.get((s, t), ()):
                m = self.mark()
                if self.set_arr(f, u):
                    yield from self.search()
                self.undo(m)
            return
        x = self.next_object()
        if x >= 0:
            for y in range(self.tb.n_obj):
                m = self.mark()
                if self.set_obj(x, y) and self.ready_homs_nonempty():
                    yield from self.search()
                self.undo(m)
            return
        yield self.result()


def _fixed_items(fixed) -> list[tuple[int, int]]:
    """Accepts a dict, a -1-padded array, or a list of (index, image) pairs."""
    if fixed is None:
        return []
    if isinstance(fixed, Mapping):
        return [(int(k), int(v)) for k, v in fixed.items()]
    if isinstance(fixed, np.ndarray):
        return [(int(k), int(fixed[k])) for k in np.nonzero(fixed >= 0)[0]]
    return [(int(k), int(v)) for k, v in fixed]


def enumerate_functors(a: FinCat, b: FinCat, *, fixed_obj=None, fixed_arr=None,
                       over: tuple[FunctorMap, FunctorMap] | None = None) -> Iterator[FunctorMap]:
    """All functors a -> b in deterministic order.

    ``fixed_obj`` / ``fixed_arr`` pre-assign images (dict or array with -1 for
    free).  ``over=(q, t)`` restricts to functors F with ``q . F == t``.
    """
    st = _Assignment(a, b, over)
    for x, y in _fixed_items(fixed_obj):
        if not st.set_obj(x, y):
            return iter(())
    for f, u in _fixed_items(fixed_arr):
        if not st.set_arr(f, u):
            return iter(())
    return st.search()


def first_functor(a: FinCat, b: FinCat, **kw) -> FunctorMap | None:
    return next(iter(enumerate_functors(a, b, **kw)), None)


def count_functors(a: FinCat, b: FinCat, **kw) -> int:
    return sum(1 for _ in enumerate_functors(a, b, **kw))


def induced_functor(dom: FinCat, cod: FinCat,
                    legs: Iterable[tuple[FunctorMap, FunctorMap]]) -> FunctorMap:
    """The arrow out of a colimit determined by its legs.

    ``legs`` are pairs (L: A -> dom, G: A -> cod).  Raises ValueError if the
    legs are incompatible, do not generate ``dom``, or the result is not a
    functor.
    """
    st = _Assignment(dom, cod)
    for L, G in legs:
        if L.cod != dom or G.cod != cod or L.dom != G.dom:
            raise ValueError("induced_functor: leg endpoints do not match")
        for x in range(L.dom.n_obj):
            if not st.set_obj(int(L.omap[x]), int(G.omap[x])):
                raise ValueError(f"legs disagree on object {dom.objects[L.omap[x]]}")
        for f in range(L.dom.n_arr):
            if not st.set_arr(int(L.amap[f]), int(G.amap[f])):
                raise ValueError(f"legs disagree on arrow {dom.arrows[L.amap[f]]}")
    if min(st.amap, default=0) < 0 or min(st.omap, default=0) < 0:
        raise ValueError("legs do not generate the domain")
    F = st.result()
    rep = validate_functor(F)
    if not rep.ok:
        raise ValueError("induced map is not a functor: " + "; ".join(rep.failures))
    return F


# -- oracles ------------------------------------------------------------------

def _iso_classes(c: FinCat) -> np.ndarray:
    cls = np.arange(c.n_obj)

    def find(x):
        while cls[x] != x:
            cls[x] = cls[cls[x]]
            x = cls[x]
        return x

    for a in range(c.n_arr):
        if c.inv[a] >= 0:
            r1, r2 = find(int(c.src[a])), find(int(c.tgt[a]))
            if r1 != r2:
                cls[max(r1, r2)] = min(r1, r2)
    return np.array([find(x) for x in range(c.n_obj)], dtype=np.int64)


def equivalence_oracle(f: FunctorMap) -> bool:
    """Fully faithful and essentially surjective."""
    d, c = f.dom, f.cod
    for x in range(d.n_obj):
        for y in range(d.n_obj):
            img = f.amap[d.hom(x, y)]
            target = c.hom(int(f.omap[x]), int(f.omap[y]))
            if len(img) != len(target) or len(set(img.tolist())) != len(img):
                return False
    cls = _iso_classes(c)
    hit = set(cls[f.omap].tolist())
    return all(int(cls[y]) in hit for y in range(c.n_obj))


def injective_on_objects_oracle(j: FunctorMap) -> bool:
    return len(set(j.omap.tolist())) == len(j.omap)
