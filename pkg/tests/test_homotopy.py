import pytest

from conftest import corpus_homotopies
from folkengine.corpus import retract_diagrams, triangles
from folkengine.fincat import (
    enumerate_functors, equivalence_oracle, identity_functor, terminal, terminal_map, walking_arrow,
)
from folkengine.homotopy import (
    EquivalenceCertificate, Homotopy, SdrCertificate, compose, compose_via_pushout,
    connection_double, find_equivalence, find_homotopy, identity_certificate, identity_homotopy,
    is_over, is_under, iter_homotopies, retract_transfer, reverse, right_inverse_upgrade,
    left_inverse_upgrade, transpose, two_of_three, whisker,
)
from folkengine.interval import adj_inv, cocyl, cyl


@pytest.fixture(scope="module")
def homs(corpus):
    return corpus_homotopies(corpus)


@pytest.fixture(scope="module")
def point_path(st):
    """The non-identity homotopy i0 -> i1 : 1 -> I."""
    return find_homotopy(st.i0, st.i1)


def test_identity_homotopy_examples(st):
    h = identity_homotopy(identity_functor(terminal()))
    assert h.carrier.omap.tolist() == [0, 0] and h.carrier.cod == terminal()
    h = identity_homotopy(st.i0)
    assert h.carrier.omap.tolist() == [0, 0]
    assert h.carrier.amap.tolist() == [0, 0, 0, 0]


def test_identity_homotopy_boundaries(corpus):
    for f in corpus.functors:
        h = identity_homotopy(f)
        assert (h.f0, h.f1) == (f, f) and h.check().ok


def test_recorded_boundaries_are_checked(st, point_path):
    with pytest.raises(ValueError):
        Homotopy(point_path.carrier, st.i1, st.i1)


def test_reverse(st, corpus, homs, point_path):
    for f in corpus.functors:
        assert reverse(identity_homotopy(f)) == identity_homotopy(f)
    for h in homs:
        assert reverse(reverse(h)) == h
    r = reverse(point_path)
    assert (r.f0, r.f1) == (st.i1, st.i0)


def test_compose_boundaries_and_mismatch(st, point_path):
    loop = point_path + reverse(point_path)
    assert (loop.f0, loop.f1) == (st.i0, st.i0)
    with pytest.raises(ValueError):
        compose(point_path, point_path)


def test_strictness_laws_on_every_corpus_homotopy(homs):
    assert len(homs) == 980
    for h in homs:
        assert compose(h, identity_homotopy(h.f1)) == h
        assert compose(identity_homotopy(h.f0), h) == h
        assert compose(reverse(h), h) == identity_homotopy(h.f1)


def test_compose_agrees_with_pushout_route(homs):
    by_start = {}
    for h in homs:
        by_start.setdefault((h.f0.dom, h.f0.cod, h.f0), []).append(h)
    n = 0
    for h in homs[::7]:
        for k in by_start.get((h.f1.dom, h.f1.cod, h.f1), [])[:3]:
            assert compose(h, k) == compose_via_pushout(h, k)
            n += 1
    assert n > 50


def test_whisker(st, corpus, homs, point_path):
    for h in homs[::11]:
        assert whisker(None, h, None) == h
        assert whisker(identity_functor(h.a1), h, identity_functor(h.a0)) == h
    # over 1 a homotopy i0 -> i1 is the arrow f; whiskering with v conjugates it to f^-1
    w = whisker(st.v, point_path)
    assert (w.f0, w.f1) == (st.i1, st.i0)
    assert w.carrier.amap[w.carrier.dom.arr("(id_*,f)")] == st.I.arr("f^-1")


def test_whisker_preserves_over(corpus, homs):
    checked = 0
    for h in homs[::5]:
        q = terminal_map(h.a1)
        assert is_over(h, terminal_map(h.a0), q)
        for g1 in [F for F in corpus.functors if F.dom == h.a1][:2]:
            for g0 in [F for F in corpus.functors if F.cod == h.a0][:2]:
                w = whisker(g1, h, g0)
                assert is_over(w, terminal_map(g0.dom), terminal_map(g1.cod))
                checked += 1
    assert checked > 20


def test_transpose_round_trip_and_boundaries(homs):
    for h in homs:
        k = transpose(h)
        assert adj_inv(k) == h.carrier
        cc = cocyl(h.a1)
        assert cc.e0 @ k == h.f0 and cc.e1 @ k == h.f1


def test_transpose_is_bijective_on_hom_sets(corpus, homs):
    groups = {}
    for h in homs:
        groups.setdefault((h.a0, h.a1, h.f0, h.f1), []).append(transpose(h).amap.tobytes())
    for ks in groups.values():
        assert len(set(ks)) == len(ks)


def test_connection_patterns(st, point_path):
    h = point_path
    i = identity_homotopy
    D = connection_double(h, "ul")
    assert (D.h0, D.h1, D.h2, D.h3) == (h, i(st.i1), h, i(st.i1))
    D = connection_double(h, "lr")
    assert (D.h0, D.h1, D.h2, D.h3) == (i(st.i0), h, i(st.i0), h)
    D = connection_double(h, "ur")
    assert (D.h0, D.h1, D.h2, D.h3) == (h, reverse(h), i(st.i0), i(st.i0))
    with pytest.raises(ValueError):
        connection_double(h, "ll")


def test_connection_of_identity_is_identity(corpus):
    for f in corpus.functors[::9]:
        D = connection_double(identity_homotopy(f), "ur")
        assert all(x == identity_homotopy(f) for x in (D.h0, D.h1, D.h2, D.h3))


def test_connection_corners_on_corpus(homs):
    for h in homs[::3]:
        for which in ("ul", "lr", "ur"):
            D = connection_double(h, which)
            assert D.check().ok
            corners = D.corners
            expected = {"ul": (h.f0, h.f1, h.f1, h.f1), "lr": (h.f0, h.f0, h.f0, h.f1),
                        "ur": (h.f0, h.f1, h.f0, h.f0)}[which]
            assert corners == expected


def test_under_and_over(st, corpus, homs):
    for f in corpus.functors[::4]:
        h = identity_homotopy(f)
        assert is_over(h, f, identity_functor(f.cod))
        assert is_under(h, identity_functor(f.dom), f)
    for h in homs:
        # over a1 itself w.r.t. (f0, id) exactly when h is constant
        assert is_over(h, h.f0, identity_functor(h.a1)) == (h == identity_homotopy(h.f0))
    for F in enumerate_functors(st.I, st.I):
        for G in enumerate_functors(st.I, st.I):
            for h in iter_homotopies(F, G, over=st.p):
                assert is_over(reverse(h), st.p @ F, st.p)


def test_composite_of_over_homotopies_is_over(st):
    p = st.p
    a = cyl(st.I).total
    # homotopies between endofunctors of I lying over p: 1
    hs = [h for F in enumerate_functors(st.I, st.I) for G in enumerate_functors(st.I, st.I)
          for h in iter_homotopies(F, G, over=p)]
    assert hs
    for h in hs:
        for k in hs:
            if h.f1 == k.f0:
                assert is_over(h + k, p @ h.f0, p)
    assert a.n_arr == 16


def test_over_search_matches_filter(corpus):
    checked = 0
    for f in corpus.functors[::13]:
        for q in [Q for Q in corpus.functors if Q.dom == f.cod][:2]:
            for G in list(enumerate_functors(f.dom, f.cod))[:4]:
                if q @ G != q @ f:
                    continue
                fast = set(iter_homotopies(f, G, over=q))
                slow = {h for h in iter_homotopies(f, G) if is_over(h, q @ f, q)}
                assert fast == slow
                checked += 1
    assert checked > 5
    s = walking_arrow()
    for F in enumerate_functors(s, s):
        assert list(iter_homotopies(F, F, over=identity_functor(s))) == [identity_homotopy(F)]


def test_under_search(st):
    # homotopies I -> I under i0 from i0 p to id
    h = find_homotopy(st.i0 @ st.p, identity_functor(st.I), under=st.i0)
    assert h is not None and is_under(h, st.i0, st.i0)
    cert = SdrCertificate(st.i0, st.p, h, "under")
    assert cert.check().ok


def test_malformed_under_over_raise(st, point_path):
    with pytest.raises(ValueError):
        is_under(point_path, st.i0, st.i0)
    with pytest.raises(ValueError):
        is_over(point_path, st.v, st.v)


def test_find_equivalence_examples(st):
    cert = find_equivalence(st.p)
    assert cert is not None and cert.f_inv == st.i0 and cert.check().ok
    assert find_equivalence(terminal_map(walking_arrow())) is None
    two = walking_arrow()
    c = find_equivalence(identity_functor(two))
    assert c.f_inv == identity_functor(two)
    assert c.h_left == c.h_right == identity_homotopy(identity_functor(two))
    # S is indiscrete, so the first hit for id_S is a constant inverse, still valid
    assert find_equivalence(identity_functor(st.S)).check().ok


def test_find_equivalence_matches_oracle(corpus):
    for f in corpus.functors:
        cert = find_equivalence(f)
        assert (cert is not None) == equivalence_oracle(f), f.name
        if cert is not None:
            assert cert.check().ok


def test_two_of_three_identities(st):
    i = identity_functor(st.I)
    c = identity_certificate(st.I)
    out = two_of_three(i, i, i, c0=c, c1=c)
    assert out.check().ok and out.f_inv == i


def test_two_of_three_all_positions_on_corpus(corpus):
    certs = {}

    def cert(f):
        if f not in certs:
            certs[f] = find_equivalence(f)
        return certs[f]

    done = {0: 0, 1: 0, 2: 0}
    for f0, f1, f2 in triangles(corpus.functors):
        if not (equivalence_oracle(f0) and equivalence_oracle(f1)):
            continue
        c0, c1, c2 = cert(f0), cert(f1), cert(f2)
        for missing, kw in ((0, dict(c1=c1, c2=c2)), (1, dict(c0=c0, c2=c2)), (2, dict(c0=c0, c1=c1))):
            if done[missing] >= 40:
                continue
            out = two_of_three(f0, f1, f2, **kw)
            assert out.check().ok
            assert out.f == (f0, f1, f2)[missing]
            done[missing] += 1
    assert min(done.values()) >= 20


def test_two_of_three_p_after_inclusion(st):
    # f0 = i0: 1 -> I, f1 = p: I -> 1, f2 = p . i0 = id
    f0, f1 = st.i0, st.p
    f2 = f1 @ f0
    out = two_of_three(f0, f1, f2, c1=find_equivalence(f1), c2=find_equivalence(f2))
    assert out.check().ok and out.f_inv == st.p


def test_two_of_three_errors(st):
    c = identity_certificate(terminal())
    with pytest.raises(ValueError):
        two_of_three(st.i0, st.p, st.i0, c0=c, c1=c)
    with pytest.raises(ValueError):
        two_of_three(st.i0, st.p, st.p @ st.i0, c0=c)


def test_right_and_left_inverse_upgrades(corpus):
    n = 0
    for f in corpus.functors:
        cert = find_equivalence(f)
        if cert is None:
            continue
        for g in enumerate_functors(f.cod, f.dom):
            h = find_homotopy(f @ g, identity_functor(f.cod))
            if h is not None:
                up = right_inverse_upgrade(cert, g, h)
                assert isinstance(up, EquivalenceCertificate) and up.check().ok
                n += 1
            L = find_homotopy(g @ f, identity_functor(f.dom))
            if L is not None:
                assert left_inverse_upgrade(cert, g, L).check().ok
    assert n > 10


def test_retract_transfer(st, corpus):
    c = find_equivalence(st.p)
    i = identity_functor
    same = retract_transfer(c, st.p, i(st.I), i(st.I), i(terminal()), i(terminal()))
    assert same.f_inv == c.f_inv and same.h_left == c.h_left and same.h_right == c.h_right
    eqs = [f for f in corpus.functors if equivalence_oracle(f)]
    diagrams = retract_diagrams(eqs, limit=40)
    assert diagrams
    for f, fp, g0, r0, g1, r1 in diagrams:
        out = retract_transfer(find_equivalence(f), fp, g0, r0, g1, r1)
        assert out.check().ok
    with pytest.raises(ValueError):
        retract_transfer(c, st.p, st.v, i(st.I), i(terminal()), i(terminal()))


def test_sdr_certificate_detects_bad_data(st):
    h = find_homotopy(st.i0 @ st.p, identity_functor(st.I), under=st.i0)
    bad = SdrCertificate(st.i1, st.p, h, "under")
    assert not bad.check().ok
