from itertools import product as iproduct

import numpy as np
import pytest

from folkengine.corpus import default_corpus
from folkengine.fincat import FinCat, FunctorMap, enumerate_functors, identity_functor, validate_functor
from folkengine.interval import standard


@pytest.fixture(scope="session")
def st():
    return standard()


@pytest.fixture(scope="session")
def corpus():
    return default_corpus()


def isomorphic(a: FinCat, b: FinCat) -> bool:
    """Search for mutually inverse functors; only for small categories."""
    if (a.n_obj, a.n_arr) != (b.n_obj, b.n_arr):
        return False
    for F in enumerate_functors(a, b):
        if len(set(F.amap.tolist())) != a.n_arr:
            continue
        for G in enumerate_functors(b, a):
            if G @ F == identity_functor(a) and F @ G == identity_functor(b):
                return True
    return False


def brute_functors(a: FinCat, b: FinCat) -> list[FunctorMap]:
    """All functors by plain enumeration of object maps and hom-set choices."""
    out = []
    nonid = list(range(a.n_obj, a.n_arr))
    for om in iproduct(range(b.n_obj), repeat=a.n_obj):
        choices = [b.hom(om[a.src[u]], om[a.tgt[u]]).tolist() for u in nonid]
        for pick in iproduct(*choices):
            am = list(om) + list(pick)
            F = FunctorMap(a, b, np.array(om), np.array(am))
            if validate_functor(F).ok:
                out.append(F)
    return out


def corpus_homotopies(corpus) -> list:
    """Every homotopy Cyl(a) -> b for (a, b) the endpoints of some corpus functor."""
    from folkengine.homotopy import Homotopy
    from folkengine.interval import cyl

    pairs = sorted({(F.dom, F.cod) for F in corpus.functors}, key=lambda p: (p[0].name, p[1].name))
    return [Homotopy(c) for a, b in pairs for c in enumerate_functors(cyl(a).total, b)]
