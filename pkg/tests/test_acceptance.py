"""The eight acceptance criteria, each timed and reported on one line.

Criteria 1 and 8 run the command line in a fresh interpreter, so their times
include start-up and cold caches.  The others run in-process.
"""

import os
import subprocess
import sys
import time

import pytest

from folkengine.corpus import default_corpus
from folkengine.fibcof import cocylinder_fibration_verdict, is_cofibration, is_isofibration
from folkengine.fincat import (
    enumerate_functors, equivalence_oracle, identity_functor, injective_on_objects_oracle,
)
from folkengine.homotopy import compose, find_equivalence, find_homotopy, identity_homotopy, reverse
from folkengine.interval import adj, adj_inv, cocyl, p_at
from folkengine.modelstruct import (
    _Classes, _lift_iv, _lift_v, brute_force_filler, factor_composite, over_sdr, square_problems,
    under_sdr,
)

from conftest import corpus_homotopies

MODES = ["mapping_cyl", "mapping_cocyl", "cof_then_tfib", "tcof_then_fib"]


@pytest.fixture
def report(capsys):
    """Time a criterion, print its PASS/FAIL line, then assert."""

    def go(number: int, budget: float, fn):
        t = time.perf_counter()
        failures, detail = fn()
        dt = time.perf_counter() - t
        ok = not failures and dt < budget
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} "
                  f"({dt:.2f}s, budget {budget:g}s) {detail}")
        assert not failures, failures[:5]
        assert dt < budget, f"criterion {number} took {dt:.2f}s"

    return go


def _cli(*args, env=None):
    e = dict(os.environ)
    e.pop("FOLKENGINE_CORPUS", None)
    e.update(env or {})
    return subprocess.run([sys.executable, "-m", "folkengine", *args],
                          capture_output=True, text=True, env=e)


def test_criterion_1_interval_axioms(report):
    def fn():
        r = _cli("interval", "verify")
        fails = [] if r.returncode == 0 else [r.stdout + r.stderr]
        n = sum(x.startswith("PASS") for x in r.stdout.splitlines())
        return fails, f"{n} axioms checked"

    report(1, 1.0, fn)


def test_criterion_2_adjunction(report):
    corpus = default_corpus()

    def fn():
        fails = []
        hs = corpus_homotopies(corpus)
        for h in hs:
            k = adj(h.carrier)
            if adj_inv(k) != h.carrier or adj(adj_inv(k)) != k:
                fails.append(f"round trip {h.carrier.dom.name} -> {h.carrier.cod.name}")
            E = cocyl(h.a1)
            if E.e0 @ k != h.f0 or E.e1 @ k != h.f1:
                fails.append(f"boundary {h.carrier.dom.name} -> {h.carrier.cod.name}")
        for f in corpus.functors:
            if adj(f @ p_at(f.dom)) != cocyl(f.cod).c @ f:
                fails.append(f"contraction {f.name}")
        return fails, f"{len(hs)} homotopies, {len(corpus.functors)} functors"

    report(2, 5.0, fn)


def test_criterion_3_strictness(report):
    corpus = default_corpus()

    def fn():
        fails = []
        hs = corpus_homotopies(corpus)
        for h in hs:
            if compose(h, identity_homotopy(h.f1)).carrier != h.carrier:
                fails.append("right identity")
            if compose(identity_homotopy(h.f0), h).carrier != h.carrier:
                fails.append("left identity")
            if compose(reverse(h), h).carrier != identity_homotopy(h.f1).carrier:
                fails.append("left inverse")
        return fails, f"{len(hs)} homotopies"

    report(3, 5.0, fn)


def test_criterion_4_oracle_agreement(report):
    corpus = default_corpus()

    def fn():
        fails = []
        for f in corpus.functors:
            cert = find_equivalence(f)
            if (cert is not None) != equivalence_oracle(f) or (cert and not cert.check().ok):
                fails.append(f"equivalence {f.name}")
            v = is_cofibration(f)
            if bool(v) != injective_on_objects_oracle(f):
                fails.append(f"cofibration {f.name}")
            if bool(is_isofibration(f)) != bool(cocylinder_fibration_verdict(f)):
                fails.append(f"fibration {f.name}")
        return fails, f"{len(corpus.functors)} functors x 3 deciders, 0 disagreements allowed"

    report(4, 30.0, fn)


def test_criterion_5_factorizations(report):
    corpus = default_corpus()

    def fn():
        fails, n = [], 0
        for f in corpus.functors:
            for mode in MODES:
                fz = factor_composite(f, mode)
                n += len(fz.certs)
                if fz.g @ fz.j != f:
                    fails.append(f"{mode} {f.name}: g . j != f")
                r = fz.check(deep=True)
                if not r.ok:
                    fails.append(f"{mode} {f.name}: {r.failures}")
        return fails, f"{len(corpus.functors)} functors x 4 modes, {n} certificates"

    report(5, 30.0, fn)


def test_criterion_6_formula_lifts(report):
    corpus = default_corpus()

    def fn():
        fails, counts = [], []
        for variant in "AB":
            cls = _Classes(variant, None)
            fs = corpus.functors
            C = [f for f in fs if cls.cof(f) is not None]
            F = [f for f in fs if cls.fib(f) is not None]
            CW = [f for f in C if cls.eq(f) is not None]
            FW = [f for f in F if cls.eq(f) is not None]
            for label, left, right, solve in (("iv", CW, F, _lift_iv), ("v", C, FW, _lift_v)):
                n = 0
                for j in left:
                    for f in right:
                        for p in square_problems(j, f, 1):
                            n += 1
                            r = solve(cls, p).check()
                            if not r.ok:
                                fails.append(f"{variant} {label} {p.describe()}: {r.failures}")
                            if brute_force_filler(p) is None:
                                fails.append(f"{variant} {label} {p.describe()}: no brute-force filler")
                counts.append(f"{variant}/{label} {n}")
        return fails, "squares: " + ", ".join(counts)

    report(6, 60.0, fn)


def test_criterion_7_trivial_classes(report):
    corpus = default_corpus()

    def fn():
        fails = []
        fs = corpus.functors
        cls = _Classes("A", None)
        tfib = {f for f in fs if cls.fib(f) is not None and cls.eq(f) is not None}
        tcof = {f for f in fs if cls.cof(f) is not None and cls.eq(f) is not None}
        sdr_dual, sdr_sec = set(), set()
        for f in fs:
            idd, idc = identity_functor(f.dom), identity_functor(f.cod)
            back = list(enumerate_functors(f.cod, f.dom))
            if any(f @ s == idc and find_homotopy(s @ f, idd, over=f) is not None for s in back):
                sdr_dual.add(f)
            if any(r @ f == idd and find_homotopy(f @ r, idc, under=f) is not None for r in back):
                sdr_sec.add(f)
        if tfib != sdr_dual:
            fails.append(f"trivial fibrations differ: {len(tfib)} vs {len(sdr_dual)}")
        if tcof != sdr_sec:
            fails.append(f"trivial cofibrations differ: {len(tcof)} vs {len(sdr_sec)}")
        # constructive route: the certificates are built from the class data
        for f in tfib:
            if not over_sdr(f, cls.eq(f), cls.fib(f)).check().ok:
                fails.append(f"over SDR for {f.name}")
        for j in tcof:
            if not under_sdr(j, cls.eq(j), cls.cof(j)).check().ok:
                fails.append(f"under SDR for {j.name}")
        return fails, f"|F and W| = {len(tfib)}, |C and W| = {len(tcof)}"

    report(7, 30.0, fn)


@pytest.mark.parametrize("variant", ["A", "B"])
def test_criterion_8_model_axioms(report, variant):
    def fn():
        r = _cli("axioms", "--variant", variant)
        lines = r.stdout.splitlines()
        passes = [x for x in lines if x.startswith("PASS (")]
        fails = [] if r.returncode == 0 and len(passes) == 7 else [r.stdout + r.stderr]
        return fails, f"variant {variant}: {len(passes)}/7 conditions pass"

    report(8, 60.0, fn)


def test_criterion_8_fault_injection(report, tmp_path):
    d = tmp_path / "faulty"
    assert _cli("corpus", "dump", str(d), "--fault", "broken-cleavage").returncode == 0

    def fn():
        r = _cli("axioms", "--variant", "A", env={"FOLKENGINE_CORPUS": str(d)})
        iv = [x for x in r.stdout.splitlines() if x.startswith("FAIL (iv)")]
        ok = r.returncode == 1 and iv and "square j:" in iv[0]
        return ([] if ok else [r.stdout + r.stderr]), (iv[0][:120] if iv else "no (iv) failure")

    report(8, 60.0, fn)
