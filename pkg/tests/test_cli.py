import subprocess
import sys

import numpy as np
import pytest

from folkengine.cli import (
    Document, ParseError, Workspace, dump_corpus_dir, interval_document, load_corpus_dir,
    parse_category, parse_functor, parse_homotopy, parse_nat, parse_square, print_category,
    print_functor, run,
)
from folkengine.corpus import Corpus, default_corpus
from folkengine.fincat import NatTrans, identity_functor
from folkengine.homotopy import find_homotopy
from folkengine.modelstruct import LiftProblem

P_FUN = """\
functor p : I -> 1
object 0 -> *
object 1 -> *
arrow f -> id_*
arrow f^-1 -> id_*
"""

I0_FUN = """\
functor i0 : 1 -> I   # the left end point
object * -> 0
"""

COLLAPSE_FUN = """\
functor c : 2 -> 1
object 0 -> *
object 1 -> *
arrow a -> id_*
"""


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return write


def _out(capsys):
    return capsys.readouterr().out


# -- formats ---------------------------------------------------------------------------

def test_interval_dump_round_trips(st):
    ws = Workspace()
    ws.load_text(interval_document().text())
    assert ws.categories["I"] == st.I and ws.categories["S"] == st.S
    for name, F in st.functors():
        assert ws.functors[name] == F, name


def test_category_round_trip_on_corpus(corpus):
    for c in corpus.categories:
        assert parse_category(print_category(c)) == c, c.name


def test_functor_round_trip_on_corpus(corpus):
    for F in corpus.functors[::3]:
        doc = Document(builtins=True)
        doc.functor(F, "F")
        assert parse_functor(doc.text()) == F


def test_homotopy_round_trip(st):
    h = find_homotopy(st.i0 @ st.p, identity_functor(st.I))
    doc = Document()
    doc.homotopy(h, "H")
    back = parse_homotopy(doc.text())
    assert back == h and (back.f0, back.f1) == (h.f0, h.f1)


def test_nat_and_square_round_trip(st):
    I = st.I
    N = NatTrans(identity_functor(I), st.v, np.array([I.arr("f"), I.arr("f^-1")]))
    doc = Document()
    doc.nat(N, "N")
    back = parse_nat(doc.text())
    assert back.source == N.source and back.target == N.target
    assert np.array_equal(back.components, N.components)
    p = LiftProblem(st.i0, st.p, st.i0, st.p @ identity_functor(I))
    doc = Document()
    doc.square(p, "Q")
    q = parse_square(doc.text())
    assert (q.j, q.f, q.top, q.bottom) == (p.j, p.f, p.top, p.bottom)


def test_comments_and_blank_lines_are_ignored():
    text = "# a category\n\ncategory C   # trailing\nobject x\n\narrow e : x -> x\ne . e = e\n"
    c = parse_category(text)
    assert (c.n_obj, c.n_arr) == (1, 2)


def test_missing_composition_entry_is_named():
    text = "category C\nobject x\narrow e : x -> x\n"
    with pytest.raises(ParseError, match=r"missing composition entry e \. e"):
        parse_category(text)


def test_syntax_error_has_line_number():
    text = "category C\nobject x\narrow e x x\n"
    with pytest.raises(ParseError, match="line 3"):
        parse_category(text)


def test_dangling_reference():
    with pytest.raises(ParseError, match="Q"):
        parse_functor("functor F : Q -> I\nobject 0 -> 0\n")


def test_functoriality_violation_names_witness():
    text = ("category C\nobject x\nobject y\narrow a : x -> y\narrow b : y -> x\n"
            "a . b = id_y\nb . a = id_x\n"
            "functor F : C -> I\nobject x -> 0\nobject y -> 1\narrow a -> f\narrow b -> f\n")
    with pytest.raises(ParseError) as e:
        Workspace().load_text(text)
    assert "b" in str(e.value) and "line" in str(e.value)


def test_printer_rejects_unwritable_names(st):
    with pytest.raises(ValueError):
        print_functor(st.p, "two words")


# -- commands ----------------------------------------------------------------------------

def test_interval_verify_exit_zero(capsys):
    assert run(["interval", "verify"]) == 0
    assert "FAIL" not in _out(capsys)


def test_interval_dump_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(["interval", "dump", "-o", str(a)]) == 0
    assert run(["interval", "dump", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(["check", str(a)]) == 0
    assert "ok functor gamma_ur" in _out(capsys)


def test_check_reports_problems(files, capsys):
    # a complete but non-associative table is a failed check
    bad = files("bad.cat", "category C\nobject x\narrow e : x -> x\narrow f : x -> x\n"
                "e . e = f\nf . f = f\ne . f = f\nf . e = e\n")
    assert run(["check", bad]) == 1
    assert "FAIL" in _out(capsys)
    # a missing entry is malformed input
    missing = files("missing.cat", "category C\nobject x\narrow e : x -> x\n")
    assert run(["check", missing]) == 2
    assert "missing composition entry e . e" in capsys.readouterr().err


def test_functor_check(files, capsys):
    good = files("p.fun", P_FUN)
    assert run(["functor", "check", good]) == 0
    bad = files("bad.fun", P_FUN.replace("arrow f -> id_*", "arrow f -> nope"))
    assert run(["functor", "check", bad]) == 2  # dangling arrow name
    assert "nope" in capsys.readouterr().err
    broken = files("broken.fun", I0_FUN + "functor v : I -> I\nobject 0 -> 1\nobject 1 -> 0\n"
                   "arrow f -> f\narrow f^-1 -> f^-1\n")
    assert run(["functor", "check", broken]) == 1
    out = _out(capsys)
    assert "FAIL" in out and "ok functor i0" in out


def test_cofib_and_fib_exit_codes(files, capsys):
    p, i0 = files("p.fun", P_FUN), files("i0.fun", I0_FUN)
    assert run(["cofib", p]) == 1
    assert "identified" in _out(capsys)
    assert run(["cofib", i0]) == 0
    assert run(["cofib", "--normally-cloven", i0]) == 0
    assert run(["fib", p]) == 0
    assert run(["fib", "--normally-cloven", p]) == 0
    assert run(["fib", i0]) == 1
    assert "iso f out of 0" in _out(capsys)


def test_equiv(files, tmp_path, capsys, st):
    out = tmp_path / "cert.txt"
    assert run(["equiv", files("p.fun", P_FUN), "-o", str(out)]) == 0
    ws = Workspace()
    ws.load_file(out)
    assert ws.functors["f_inv"] == st.i0
    assert ws.homotopies["h_left"].f0 == st.i0 @ st.p
    assert run(["equiv", files("c.fun", COLLAPSE_FUN)]) == 1
    assert "not full" in _out(capsys)


def test_name_selects_functor(files, capsys):
    both = files("both.fun", P_FUN + "\n" + I0_FUN)
    assert run(["cofib", both]) == 0
    assert run(["cofib", both, "--name", "p"]) == 1
    assert run(["cofib", both, "--name", "zz"]) == 2
    assert "zz" in capsys.readouterr().err


@pytest.mark.parametrize("mode", ["cyl", "cocyl", "cof-tfib", "tcof-fib"])
def test_factor_writes_parseable_outputs(files, tmp_path, mode, capsys):
    src = files("c.fun", COLLAPSE_FUN)
    out = tmp_path / mode
    assert run(["factor", "--mode", mode, src, "-o", str(out)]) == 0
    for name in ("mid.cat", "f.fun", "j.fun", "g.fun", "certificates.fun", "report.txt"):
        assert (out / name).exists(), name
    ws = Workspace()
    for name in ("mid.cat", "f.fun", "j.fun", "g.fun", "certificates.fun"):
        ws.load_file(out / name)
    assert ws.functors["g"] @ ws.functors["j"] == ws.functors["f"]
    report = (out / "report.txt").read_text()
    assert "FAIL" not in report and "g . j = f" in report
    first = report
    assert run(["factor", "--mode", mode, src, "-o", str(out)]) == 0
    assert (out / "report.txt").read_text() == first


def test_factor_with_fault_fails(files, tmp_path, capsys):
    src = files("p.fun", P_FUN)
    assert run(["factor", "--mode", "cocyl", src, "-o", str(tmp_path / "o"),
                "--fault", "broken-cleavage"]) == 1
    assert "lifting of identities" in _out(capsys)


def test_factor_usage_errors(files, tmp_path):
    src = files("p.fun", P_FUN)
    assert run(["factor", "--mode", "nope", src, "-o", str(tmp_path)]) == 2
    assert run(["factor", "--mode", "cyl", str(tmp_path / "missing.fun"), "-o", str(tmp_path)]) == 2


SQUARE = I0_FUN + P_FUN + """
functor top : 1 -> I
object * -> 1

functor bottom : I -> 1
object 0 -> *
object 1 -> *
arrow f -> id_*
arrow f^-1 -> id_*

square Q
left i0
right p
top top
bottom bottom
"""


def test_lift_formula(files, tmp_path, capsys, st):
    out = tmp_path / "l.fun"
    assert run(["lift", files("q.sq", SQUARE), "-o", str(out)]) == 0
    assert "method lift against SDR" in _out(capsys)
    ws = Workspace()
    ws.load_file(out)
    l = ws.functors["l"]
    assert l @ st.i0 == st.i1 and st.p @ l == st.p
    assert run(["lift", files("q.sq", SQUARE), "-o", str(out), "--variant", "B"]) == 0
    assert "method dual CHEP" in _out(capsys)


def test_lift_falls_back_to_search(files, tmp_path, capsys):
    # p against i0: outside both lifting conditions, but a filler exists
    text = P_FUN + I0_FUN + """
functor t : I -> 1
object 0 -> *
object 1 -> *
arrow f -> id_*
arrow f^-1 -> id_*

square Q
left p
right i0
top t
bottom i0
"""
    assert run(["lift", files("q.sq", text), "-o", str(tmp_path / "l.fun")]) == 0
    assert "method search" in _out(capsys)


def test_lift_no_filler(files, tmp_path, capsys):
    # D2 -> 2 (both objects) against D2 -> 1: a filler 2 -> D2 would need an arrow 0 -> 1
    text = """
functor j : D2 -> 2
object 0 -> 0
object 1 -> 1

functor f : D2 -> 1
object 0 -> *
object 1 -> *

functor top : D2 -> D2
object 0 -> 0
object 1 -> 1

functor bottom : 2 -> 1
object 0 -> *
object 1 -> *
arrow a -> id_*

square Q
left j
right f
top top
bottom bottom
"""
    out = tmp_path / "l.fun"
    assert run(["lift", files("n.sq", text), "-o", str(out)]) == 1
    assert "no filler exists" in _out(capsys)
    assert not out.exists()


def test_lift_rejects_non_commuting_square(files, tmp_path, capsys):
    # v . i0 = i1 but id . i0 = i0
    text = I0_FUN + """
functor v : I -> I
object 0 -> 1
object 1 -> 0
arrow f -> f^-1
arrow f^-1 -> f

functor idI : I -> I
object 0 -> 0
object 1 -> 1
arrow f -> f
arrow f^-1 -> f^-1

square Q
left i0
right v
top i0
bottom idI
"""
    assert run(["lift", files("bad.sq", text), "-o", str(tmp_path / "l.fun")]) == 2
    assert "fails validation: commutes" in capsys.readouterr().err


def test_corpus_dump_and_load(tmp_path, corpus):
    d = tmp_path / "corpus"
    assert run(["corpus", "dump", str(d)]) == 0
    back = load_corpus_dir(d)
    assert back.categories == corpus.categories
    assert back.functors == corpus.functors and back.fault is None
    d2 = tmp_path / "faulty"
    assert run(["corpus", "dump", str(d2), "--fault", "broken-cleavage"]) == 0
    assert load_corpus_dir(d2).fault == "broken-cleavage"


def _small_corpus_dir(path, fault=None):
    path.mkdir()
    lines = ["name small", "functors enumerate"] + ([f"fault {fault}"] if fault else [])
    (path / "manifest.txt").write_text("\n".join(lines) + "\n")
    cats = [c for c in default_corpus().categories if c.name in ("1", "2", "I", "D2", "P")]
    (path / "cats.cat").write_text("\n".join(print_category(c) for c in cats))
    return path


def test_axioms_on_small_corpus_dir(tmp_path, capsys):
    d = _small_corpus_dir(tmp_path / "small")
    rep = tmp_path / "report.txt"
    assert run(["axioms", "--variant", "A", "--corpus", str(d), "--report", str(rep)]) == 0
    text = rep.read_text()
    assert "corpus small" in text and text.count("PASS (") == 7
    assert run(["axioms", "--variant", "B", "--corpus", str(d)]) == 0


def test_axioms_env_var_and_fault(tmp_path, capsys, monkeypatch):
    d = _small_corpus_dir(tmp_path / "faulty", fault="broken-cleavage")
    monkeypatch.setenv("FOLKENGINE_CORPUS", str(d))
    assert run(["axioms", "--variant", "A"]) == 1
    out = _out(capsys)
    assert "corpus small" in out and "FAIL (iv)" in out and "square j:" in out


def test_bad_corpus_dirs(tmp_path):
    assert run(["axioms", "--variant", "A", "--corpus", str(tmp_path / "nope")]) == 2
    d = tmp_path / "empty"
    d.mkdir()
    assert run(["axioms", "--variant", "A", "--corpus", str(d)]) == 2
    (d / "manifest.txt").write_text("fault gremlins\n")
    assert run(["axioms", "--variant", "A", "--corpus", str(d)]) == 2


def test_usage_errors():
    assert run(["no-such-command"]) == 2
    assert run(["axioms"]) == 2
    assert run(["axioms", "--variant", "Z"]) == 2
    assert run(["cofib", "/nonexistent/file.fun"]) == 2


def test_dump_corpus_dir_round_trips_custom_corpus(tmp_path, st):
    c = Corpus("mini", [st.I, st.S], [st.r0, st.s, st.q_l], None)
    dump_corpus_dir(c, tmp_path / "mini")
    back = load_corpus_dir(tmp_path / "mini")
    assert back.name == "mini" and back.categories == [st.I, st.S]
    assert back.functors == [st.r0, st.s, st.q_l]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "folkengine", "interval", "verify"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and "strictness of left inverses" in r.stdout
