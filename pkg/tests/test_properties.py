"""Property tests: invariants checked on hypothesis-drawn inputs."""

from itertools import combinations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as hs

from folkengine.cli import Document, parse_category, parse_functor, print_category
from folkengine.corpus import triangles
from folkengine.fibcof import (
    Cleavage, canonical_cleavage, cocylinder_fibration_verdict, is_cofibration, is_isofibration,
    lifting_squares,
)
from folkengine.fincat import (
    enumerate_functors, equivalence_oracle, from_table, identity_functor,
    injective_on_objects_oracle, product_data, validate, validate_functor,
)
from folkengine.homotopy import (
    compose, compose_via_pushout, find_equivalence, identity_homotopy, reverse, transpose, whisker,
)
from folkengine.interval import adj, adj_inv, cocyl, p_at
from folkengine.modelstruct import LiftProblem, brute_force_filler, factor_composite

from conftest import corpus_homotopies

PROPS = settings(max_examples=60, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
MODES = ["mapping_cyl", "mapping_cocyl", "cof_then_tfib", "tcof_then_fib"]


@pytest.fixture(scope="session")
def homotopies(corpus):
    return corpus_homotopies(corpus)


@pytest.fixture(scope="session")
def by_start(homotopies):
    out = {}
    for h in homotopies:
        out.setdefault(h.f0, []).append(h)
    return out


@pytest.fixture(scope="session")
def composable_triples(corpus):
    return list(triangles(corpus.functors))


@hs.composite
def posets(draw):
    """A finite poset as a category: one arrow per strict relation, closed under composition."""
    n = draw(hs.integers(1, 4))
    objs = [f"x{i}" for i in range(n)]
    pairs = list(combinations(range(n), 2))
    rel = {p for p in pairs if draw(hs.booleans())}
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    name = {p: f"r{p[0]}{p[1]}" for p in rel}
    arrows = [(name[p], objs[p[0]], objs[p[1]]) for p in sorted(rel)]
    comp = {(name[(b, c)], name[(a, b)]): name[(a, c)]
            for (a, b) in rel for (b2, c) in rel if b == b2}
    return from_table("Q", objs, arrows, comp)


@PROPS
@given(c=posets())
def test_generated_posets_are_categories_and_round_trip(c):
    assert validate(c).ok
    assert parse_category(print_category(c)) == c
    assert validate_functor(identity_functor(c)).ok


@PROPS
@given(a=posets(), b=posets())
def test_enumerated_functors_are_valid_and_distinct(a, b):
    fs = list(enumerate_functors(a, b))
    assert len(fs) >= 1 or b.n_obj == 0
    assert all(validate_functor(F).ok for F in fs)
    assert len({F.key() for F in fs}) == len(fs)


@PROPS
@given(a=posets(), b=posets())
def test_product_projections_are_functors(a, b):
    pd = product_data(a, b)
    assert validate(pd.cat).ok
    assert validate_functor(pd.pi1).ok and validate_functor(pd.pi2).ok
    assert pd.cat.n_arr == a.n_arr * b.n_arr


@PROPS
@given(data=hs.data())
def test_category_text_round_trip(corpus, data):
    c = data.draw(hs.sampled_from(corpus.categories))
    assert parse_category(print_category(c)) == c


@PROPS
@given(data=hs.data())
def test_functor_text_round_trip(corpus, data):
    F = data.draw(hs.sampled_from(corpus.functors))
    doc = Document(builtins=True)
    doc.functor(F, "F")
    assert parse_functor(doc.text()) == F


@PROPS
@given(data=hs.data())
def test_functor_composition_is_associative_and_unital(composable_triples, corpus, data):
    f0, f1, _ = data.draw(hs.sampled_from(composable_triples))
    later = [g for g in corpus.functors if g.dom == f1.cod]
    f2 = data.draw(hs.sampled_from(later))
    assert (f2 @ f1) @ f0 == f2 @ (f1 @ f0)
    assert identity_functor(f0.cod) @ f0 == f0 == f0 @ identity_functor(f0.dom)


@PROPS
@given(data=hs.data())
def test_reverse_is_an_involution_swapping_ends(homotopies, data):
    h = data.draw(hs.sampled_from(homotopies))
    r = reverse(h)
    assert (r.f0, r.f1) == (h.f1, h.f0)
    assert reverse(r) == h


@PROPS
@given(data=hs.data())
def test_strictness_laws(homotopies, data):
    h = data.draw(hs.sampled_from(homotopies))
    assert compose(h, identity_homotopy(h.f1)).carrier == h.carrier
    assert compose(identity_homotopy(h.f0), h).carrier == h.carrier
    assert compose(reverse(h), h).carrier == identity_homotopy(h.f1).carrier


@PROPS
@given(data=hs.data())
def test_compose_agrees_with_pushout_route(homotopies, by_start, data):
    h = data.draw(hs.sampled_from(homotopies))
    k = data.draw(hs.sampled_from(by_start[h.f1]))
    hk = compose(h, k)
    assert hk == compose_via_pushout(h, k)
    assert (hk.f0, hk.f1) == (h.f0, k.f1)


@PROPS
@given(data=hs.data())
def test_whiskering_moves_boundaries(homotopies, corpus, data):
    h = data.draw(hs.sampled_from(homotopies))
    outs = [g for g in corpus.functors if g.dom == h.a1]
    g = data.draw(hs.sampled_from(outs)) if outs else identity_functor(h.a1)
    w = whisker(g, h)
    assert (w.f0, w.f1) == (g @ h.f0, g @ h.f1)


@PROPS
@given(data=hs.data())
def test_adj_round_trip_and_constants(homotopies, corpus, data):
    h = data.draw(hs.sampled_from(homotopies))
    k = adj(h.carrier)
    assert adj_inv(k) == h.carrier
    assert adj(adj_inv(k)) == k
    assert transpose(h) == k
    f = data.draw(hs.sampled_from(corpus.functors))
    assert adj(f @ p_at(f.dom)) == cocyl(f.cod).c @ f


@PROPS
@given(data=hs.data())
def test_cofibration_and_fibration_deciders_match_oracles(corpus, data):
    f = data.draw(hs.sampled_from(corpus.functors))
    v = is_cofibration(f)
    assert bool(v) == injective_on_objects_oracle(f)
    if v:
        assert v.cert.check().ok
    assert bool(is_isofibration(f)) == bool(cocylinder_fibration_verdict(f))


@settings(PROPS, max_examples=25)
@given(data=hs.data())
def test_equivalence_search_matches_oracle(corpus, data):
    f = data.draw(hs.sampled_from(corpus.functors))
    cert = find_equivalence(f)
    assert (cert is not None) == equivalence_oracle(f)
    if cert is not None:
        assert cert.check().ok


@settings(PROPS, max_examples=30)
@given(data=hs.data())
def test_factorization_composes_back(corpus, data):
    f = data.draw(hs.sampled_from(corpus.functors))
    mode = data.draw(hs.sampled_from(MODES))
    fz = factor_composite(f, mode)
    assert fz.g @ fz.j == f
    assert fz.j.dom == f.dom and fz.g.cod == f.cod


@settings(PROPS, max_examples=30)
@given(data=hs.data())
def test_canonical_cleavage_is_deterministic(corpus, data):
    fibs = [f for f in corpus.functors if is_isofibration(f)]
    f = data.draw(hs.sampled_from(fibs))
    a, b = canonical_cleavage(f), Cleavage(f)
    for g, h in lifting_squares(f, per_source=4):
        l = a.lift(g, h)
        assert l == b.lift(g, h)
        hc = getattr(h, "carrier", h)
        assert l.f0 == g and f @ l.carrier == hc


@settings(PROPS, max_examples=40)
@given(data=hs.data())
def test_brute_force_filler_fills(corpus, data):
    j = data.draw(hs.sampled_from(corpus.functors))
    f = data.draw(hs.sampled_from(corpus.functors))
    g1s = list(enumerate_functors(j.cod, f.cod))
    if not g1s:
        return
    g1 = data.draw(hs.sampled_from(g1s[:20]))
    g0 = next(iter(enumerate_functors(j.dom, f.dom, over=(f, g1 @ j))), None)
    if g0 is None:
        return
    p = LiftProblem(j, f, g0, g1)
    assert p.commutes()
    l = brute_force_filler(p)
    if l is not None:
        assert l @ j == g0 and f @ l == g1
