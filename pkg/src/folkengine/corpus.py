"""The default corpus of small categories and functors, and diagram generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as _iproduct
from typing import Iterator, Optional, Sequence

import numpy as np

from .fincat import (
    FinCat, FunctorMap, discrete, enumerate_functors, identity_functor,
    parallel_pair, product, terminal, walking_arrow, z2_groupoid,
)
from .interval import standard

__all__ = ["Corpus", "base_categories", "product_categories", "default_corpus",
           "functors_among", "retract_diagrams", "triangles", "FUNCTOR_BOUND"]

# categories taking part in the functor corpus: at most 2 objects and 8 arrows
FUNCTOR_BOUND = (2, 8)


@lru_cache(maxsize=None)
def base_categories() -> tuple[FinCat, ...]:
    st = standard()
    return (terminal(), walking_arrow(), st.I, st.S, discrete("D2", ["0", "1"]),
            parallel_pair(), z2_groupoid())


@lru_cache(maxsize=None)
def product_categories() -> tuple[FinCat, ...]:
    """All products of two non-trivial base categories."""
    bases = [c for c in base_categories() if c.n_arr > 1]
    out = []
    for i, a in enumerate(bases):
        for b in bases[i:]:
            out.append(product(a, b)[0])
    return tuple(out)


def functors_among(cats: Sequence[FinCat]) -> list[FunctorMap]:
    out = []
    for a in cats:
        for b in cats:
            for k, F in enumerate(enumerate_functors(a, b)):
                out.append(F.named(f"{a.name}->{b.name}#{k}"))
    return out


@dataclass(eq=False)
class Corpus:
    name: str
    categories: list[FinCat]
    functors: list[FunctorMap]
    fault: Optional[str] = None
    notes: list[str] = field(default_factory=list)

    def small_categories(self) -> list[FinCat]:
        n, m = FUNCTOR_BOUND
        return [c for c in self.categories if c.n_obj <= n and c.n_arr <= m]


@lru_cache(maxsize=None)
def _default() -> Corpus:
    cats = list(base_categories()) + list(product_categories())
    n, m = FUNCTOR_BOUND
    small = [c for c in cats if c.n_obj <= n and c.n_arr <= m]
    return Corpus("default", cats, functors_among(small))


def default_corpus(fault: Optional[str] = None) -> Corpus:
    c = _default()
    if fault is None:
        return c
    return Corpus(f"{c.name}+{fault}", c.categories, c.functors, fault)


def _spread(items: list, k: int) -> list:
    """k items evenly spaced through the list (all of them if fewer)."""
    if len(items) <= k:
        return items
    idx = np.linspace(0, len(items) - 1, k).round().astype(int)
    return [items[i] for i in sorted(set(idx.tolist()))]


def section_pairs(x_small: FinCat, x_big: FinCat) -> list[tuple[FunctorMap, FunctorMap]]:
    """(g, r) with g: small -> big, r: big -> small and r . g = id."""
    ident = identity_functor(x_small)
    out = []
    rs = list(enumerate_functors(x_big, x_small))
    for g in enumerate_functors(x_small, x_big):
        for r in rs:
            if r @ g == ident:
                out.append((g, r))
    return out


def retract_diagrams(functors: Sequence[FunctorMap], limit: int = 200) -> list[tuple]:
    """Tuples (f, f', g0, r0, g1, r1) exhibiting f' as a retract of f.

    Identity retractions are skipped; the selection is spread over all found.
    """
    cache: dict = {}

    def secs(a, b):
        key = (a, b)
        if key not in cache:
            cache[key] = section_pairs(a, b)
        return cache[key]

    found = []
    for f in functors:
        for fp in functors:
            s0 = secs(fp.dom, f.dom)
            if not s0:
                continue
            s1 = secs(fp.cod, f.cod)
            for (g0, r0), (g1, r1) in _iproduct(s0, s1):
                if f @ g0 == g1 @ fp and r1 @ f == fp @ r0:
                    trivial = (fp is f or fp == f) and g0 == identity_functor(f.dom) \
                        and g1 == identity_functor(f.cod)
                    if not trivial:
                        found.append((f, fp, g0, r0, g1, r1))
                        break
            if len(found) >= 20 * limit:
                break
        if len(found) >= 20 * limit:
            break
    return _spread(found, limit)


def triangles(functors: Sequence[FunctorMap]) -> Iterator[tuple[FunctorMap, FunctorMap, FunctorMap]]:
    """(f0, f1, f1 . f0) for composable corpus pairs."""
    by_dom: dict = {}
    for F in functors:
        by_dom.setdefault(F.dom, []).append(F)
    for f0 in functors:
        for f1 in by_dom.get(f0.cod, ()):
            yield f0, f1, f1 @ f0
