"""Command-line front end: text formats, workspaces, corpus directories, commands.

Text format, one declaration per line, ``#`` starts a comment::

    category NAME
    object X
    arrow f : X -> Y          # identities are implicit, named id_X
    g . f = h                 # every composable pair of non-identity arrows

    functor F : C -> D
    object X -> U
    arrow f -> u              # identity arrows follow from the object map

    nat N : F => G
    at X : u

    homotopy H : A0 -> A1     # a functor Cyl(A0) -> A1 in the functor format

    square Q                  # a lifting problem between named functors
    left j
    right f
    top g0
    bottom g1

A file may hold any number of blocks; names resolve against the file, then
the workspace, then the built-in categories 1, 2, I, S, D2, P, G.
"""

from __future__ import annotations

import os
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import click
import numpy as np

from .corpus import FUNCTOR_BOUND, Corpus, base_categories, default_corpus, functors_among
from .fibcof import (
    Cleavage, CofCleavage, CofibrationWitness, is_cofibration, is_isofibration,
    is_normally_cloven_cofibration, is_normally_cloven_fibration,
)
from .fincat import (
    FinCat, FunctorMap, NatTrans, Report, equivalence_oracle, from_table,
    validate, validate_functor,
)
from .homotopy import EquivalenceCertificate, Homotopy, SdrCertificate, find_equivalence
from .interval import cyl, standard, verify_interval
from .modelstruct import (
    AxiomBudget, LiftProblem, LiftSolution, VARIANTS, brute_force_filler, factor_composite,
    formula_lift, verify_model_axioms,
)

__all__ = [
    "ParseError", "Workspace", "parse_category", "parse_functor", "parse_homotopy",
    "parse_square", "parse_nat", "print_category", "print_functor", "print_homotopy",
    "print_nat", "print_square", "Document", "load_corpus_dir", "dump_corpus_dir",
    "run", "main", "FAULTS",
]

FAULTS = ("broken-cleavage",)
MODES = {"cyl": "mapping_cyl", "cocyl": "mapping_cocyl",
         "cof-tfib": "cof_then_tfib", "tcof-fib": "tcof_then_fib"}


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, source: str = ""):
        self.msg, self.line, self.source = msg, line, source
        where = f"{source}:" if source else ""
        where += f"line {line}: " if line else ""
        super().__init__(where + msg)


# -- lexing -------------------------------------------------------------------------

_COMMENT = re.compile(r"(^|\s)#.*$")
_HEADERS = ("category", "functor", "nat", "homotopy", "square")


@dataclass
class _Block:
    kind: str
    head: list[str]
    line: int
    body: list[tuple[int, list[str]]] = field(default_factory=list)


def _blocks(text: str, source: str) -> list[_Block]:
    out: list[_Block] = []
    for n, raw in enumerate(text.splitlines(), 1):
        toks = _COMMENT.sub("", raw).split()
        if not toks:
            continue
        if toks[0] in _HEADERS:
            out.append(_Block(toks[0], toks, n))
        elif not out:
            raise ParseError(f"expected a declaration header, got {toks[0]!r}", n, source)
        else:
            out[-1].body.append((n, toks))
    return out


def _expect(toks: list[str], shape: str, line: int, source: str) -> list[str]:
    """Match tokens against a pattern like 'functor _ : _ -> _' and return the holes."""
    pat = shape.split()
    if len(toks) != len(pat) or any(p != "_" and p != t for p, t in zip(pat, toks)):
        raise ParseError(f"malformed line, expected '{shape}'", line, source)
    return [t for p, t in zip(pat, toks) if p == "_"]


# -- the workspace ------------------------------------------------------------------

def builtin_categories() -> dict[str, FinCat]:
    return {c.name: c for c in base_categories()}


@dataclass
class Workspace:
    """Named values parsed so far; later files may refer to earlier ones."""

    categories: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    nats: dict = field(default_factory=dict)
    homotopies: dict = field(default_factory=dict)
    squares: dict = field(default_factory=dict)
    order: list = field(default_factory=list)  # (kind, name) in definition order
    problems: list = field(default_factory=list)  # validation failures when not strict
    strict: bool = True
    invalid: set = field(default_factory=set)  # "kind name" of values that failed

    def category(self, name: str, line: int, source: str) -> FinCat:
        if name in self.categories:
            return self.categories[name]
        b = builtin_categories().get(name)
        if b is None:
            raise ParseError(f"unknown category {name!r}", line, source)
        return b

    def functor(self, name: str, line: int, source: str) -> FunctorMap:
        if name not in self.functors:
            raise ParseError(f"unknown functor {name!r}", line, source)
        return self.functors[name]

    def _define(self, table: dict, kind: str, name: str, value, eq, line: int, source: str):
        if name in table and not eq(table[name], value):
            raise ParseError(f"{kind} {name!r} is already defined differently", line, source)
        if name not in table:
            self.order.append((kind, name))
        table[name] = value

    def _invalid(self, what: str, rep: Report, line: int, source: str) -> None:
        msg = f"{what} fails validation: " + "; ".join(rep.failures)
        if self.strict:
            raise ParseError(msg, line, source)
        self.problems.append(ParseError(msg, line, source))
        self.invalid.add(what)

    # blocks
    def load_text(self, text: str, source: str = "") -> "Workspace":
        for b in _blocks(text, source):
            getattr(self, f"_load_{b.kind}")(b, source)
        return self

    def load_file(self, path) -> "Workspace":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise ParseError(f"cannot read {path}: {e}") from e
        return self.load_text(text, str(path))

    def _load_category(self, b: _Block, source: str) -> None:
        (name,) = _expect(b.head, "category _", b.line, source)
        objects, arrows, comp = [], [], {}
        lines = {}
        for n, toks in b.body:
            if toks[0] == "object":
                objects.append(_expect(toks, "object _", n, source)[0])
            elif toks[0] == "arrow":
                a, s, t = _expect(toks, "arrow _ : _ -> _", n, source)
                arrows.append((a, s, t))
                lines[a] = n
            elif len(toks) == 5 and toks[1] == "." and toks[3] == "=":
                key = (toks[0], toks[2])
                if key in comp:
                    raise ParseError(f"duplicate composition entry {toks[0]} . {toks[2]}", n, source)
                comp[key] = toks[4]
                lines[key] = n
            else:
                raise ParseError(f"unexpected line in category {name}", n, source)
        known = set(objects)
        for a, s, t in arrows:
            for o in (s, t):
                if o not in known:
                    raise ParseError(f"arrow {a}: unknown object {o!r}", lines[a], source)
        names = {f"id_{o}" for o in objects} | {a for a, _, _ in arrows}
        for (g, f), h in comp.items():
            for x in (g, f, h):
                if x not in names:
                    raise ParseError(f"unknown arrow {x!r}", lines[(g, f)], source)
        try:
            c = from_table(name, objects, arrows, comp)
        except ValueError as e:
            raise ParseError(f"category {name}: {e}", b.line, source) from e
        extra = [k for k in comp if c.comp[c.arr(k[0]), c.arr(k[1])] < 0
                 or c.arr(k[0]) < c.n_obj or c.arr(k[1]) < c.n_obj]
        if extra:
            g, f = extra[0]
            raise ParseError(f"entry {g} . {f}: not a composable pair of non-identity arrows",
                             lines[extra[0]], source)
        rep = validate(c)
        if not rep.ok:
            self._invalid(f"category {name}", rep, b.line, source)
        self._define(self.categories, "category", name, c, lambda x, y: x == y, b.line, source)

    def _maps(self, b: _Block, dom: FinCat, cod: FinCat, what: str, source: str) -> FunctorMap:
        omap, amap = {}, {}
        for n, toks in b.body:
            if toks[0] == "object":
                x, u = _expect(toks, "object _ -> _", n, source)
                if not dom.has_obj(x):
                    raise ParseError(f"{dom.name} has no object {x!r}", n, source)
                if not cod.has_obj(u):
                    raise ParseError(f"{cod.name} has no object {u!r}", n, source)
                if omap.setdefault(x, u) != u:
                    raise ParseError(f"object {x} mapped twice", n, source)
            elif toks[0] == "arrow":
                f, u = _expect(toks, "arrow _ -> _", n, source)
                if not dom.has_arr(f):
                    raise ParseError(f"{dom.name} has no arrow {f!r}", n, source)
                if not cod.has_arr(u):
                    raise ParseError(f"{cod.name} has no arrow {u!r}", n, source)
                if amap.setdefault(f, u) != u:
                    raise ParseError(f"arrow {f} mapped twice", n, source)
            else:
                raise ParseError(f"unexpected line in {what}", n, source)
        for x in dom.objects:
            if x not in omap:
                raise ParseError(f"{what}: object {x} is not mapped", b.line, source)
        for k, f in enumerate(dom.arrows):
            if k >= dom.n_obj and f not in amap:
                raise ParseError(f"{what}: arrow {f} is not mapped", b.line, source)
        F = FunctorMap.from_names(dom, cod, omap, amap, b.head[1])
        rep = validate_functor(F)
        if not rep.ok:
            self._invalid(what, rep, b.line, source)
        return F

    def _load_functor(self, b: _Block, source: str) -> None:
        name, d, c = _expect(b.head, "functor _ : _ -> _", b.line, source)
        dom, cod = self.category(d, b.line, source), self.category(c, b.line, source)
        F = self._maps(b, dom, cod, f"functor {name}", source)
        self._define(self.functors, "functor", name, F, lambda x, y: x == y, b.line, source)

    def _load_homotopy(self, b: _Block, source: str) -> None:
        name, d, c = _expect(b.head, "homotopy _ : _ -> _", b.line, source)
        a0, a1 = self.category(d, b.line, source), self.category(c, b.line, source)
        carrier = self._maps(b, cyl(a0).total, a1, f"homotopy {name}", source)
        h = Homotopy(carrier.named(name))
        self._define(self.homotopies, "homotopy", name, h, lambda x, y: x == y, b.line, source)

    def _load_nat(self, b: _Block, source: str) -> None:
        name, fn, gn = _expect(b.head, "nat _ : _ => _", b.line, source)
        F, G = self.functor(fn, b.line, source), self.functor(gn, b.line, source)
        if F.dom != G.dom or F.cod != G.cod:
            raise ParseError(f"nat {name}: {fn} and {gn} have different endpoints", b.line, source)
        comps = {}
        for n, toks in b.body:
            x, u = _expect(toks, "at _ : _", n, source)
            if not F.dom.has_obj(x):
                raise ParseError(f"{F.dom.name} has no object {x!r}", n, source)
            if not F.cod.has_arr(u):
                raise ParseError(f"{F.cod.name} has no arrow {u!r}", n, source)
            comps[x] = F.cod.arr(u)
        missing = [x for x in F.dom.objects if x not in comps]
        if missing:
            raise ParseError(f"nat {name}: no component at {missing[0]}", b.line, source)
        N = NatTrans(F, G, np.array([comps[x] for x in F.dom.objects], dtype=np.int64))
        rep = N.validate()
        if not rep.ok:
            self._invalid(f"nat {name}", rep, b.line, source)
        self._define(self.nats, "nat", name, N, _nat_eq, b.line, source)

    def _load_square(self, b: _Block, source: str) -> None:
        (name,) = _expect(b.head, "square _", b.line, source)
        parts = {}
        for n, toks in b.body:
            role, fn = _expect(toks, "_ _", n, source)
            if role not in ("left", "right", "top", "bottom"):
                raise ParseError(f"unknown square role {role!r}", n, source)
            parts[role] = self.functor(fn, n, source)
        for role in ("left", "right", "top", "bottom"):
            if role not in parts:
                raise ParseError(f"square {name}: missing {role}", b.line, source)
        j, f, top, bot = parts["left"], parts["right"], parts["top"], parts["bottom"]
        rep = Report(f"square {name}")
        shape = (top.dom == j.dom and top.cod == f.dom and bot.dom == j.cod and bot.cod == f.cod)
        rep.check("endpoints match", shape)
        if shape:
            rep.check("commutes", f @ top == bot @ j)
        if not rep.ok:
            self._invalid(f"square {name}", rep, b.line, source)
        p = LiftProblem(j, f, top, bot)
        self._define(self.squares, "square", name, p, _square_eq, b.line, source)

    def last(self, kind: str, name: Optional[str] = None):
        table = {"functor": self.functors, "homotopy": self.homotopies,
                 "square": self.squares, "nat": self.nats, "category": self.categories}[kind]
        if name is not None:
            if name not in table:
                raise ParseError(f"no {kind} named {name!r}")
            return table[name]
        names = [n for k, n in self.order if k == kind]
        if not names:
            raise ParseError(f"no {kind} found in the input")
        return table[names[-1]]


def _nat_eq(x: NatTrans, y: NatTrans) -> bool:
    return (x.source == y.source and x.target == y.target
            and np.array_equal(x.components, y.components))


def _square_eq(x: LiftProblem, y: LiftProblem) -> bool:
    return x.j == y.j and x.f == y.f and x.top == y.top and x.bottom == y.bottom


def _single(text: str, kind: str, ws: Optional[Workspace] = None):
    ws = ws if ws is not None else Workspace()
    ws.load_text(text)
    return ws.last(kind)


def parse_category(text: str, ws: Optional[Workspace] = None) -> FinCat:
    return _single(text, "category", ws)


def parse_functor(text: str, ws: Optional[Workspace] = None) -> FunctorMap:
    return _single(text, "functor", ws)


def parse_homotopy(text: str, ws: Optional[Workspace] = None) -> Homotopy:
    return _single(text, "homotopy", ws)


def parse_nat(text: str, ws: Optional[Workspace] = None) -> NatTrans:
    return _single(text, "nat", ws)


def parse_square(text: str, ws: Optional[Workspace] = None) -> LiftProblem:
    return _single(text, "square", ws)


# -- printing -------------------------------------------------------------------------

def _tok(name: str) -> str:
    if not name or any(ch.isspace() for ch in name) or name.startswith("#") \
            or name in (":", "->", "=>", ".", "="):
        raise ValueError(f"name {name!r} cannot be written as a single token")
    return name


def safe_name(name: str) -> str:
    """A file-friendly token for generated functor names."""
    return re.sub(r"[^A-Za-z0-9_.^()\[\],<>|@+-]", "_", name) or "F"


def print_category(c: FinCat) -> str:
    out = [f"category {_tok(c.name)}"]
    for x, o in enumerate(c.objects):
        if c.arrows[x] != f"id_{o}":
            raise ValueError(f"identity of {o} in {c.name} is not named id_{o}")
        out.append(f"object {_tok(o)}")
    n = c.n_obj
    for a in range(n, c.n_arr):
        out.append(f"arrow {_tok(c.arrows[a])} : {c.objects[c.src[a]]} -> {c.objects[c.tgt[a]]}")
    if c.n_arr > n:
        comp = c.comp[n:, n:]
        for g, f in zip(*np.nonzero(comp >= 0)):
            out.append(f"{c.arrows[g + n]} . {c.arrows[f + n]} = {c.arrows[comp[g, f]]}")
    return "\n".join(out) + "\n"


def _map_lines(F: FunctorMap) -> list[str]:
    d, c = F.dom, F.cod
    out = [f"object {d.objects[x]} -> {c.objects[F.omap[x]]}" for x in range(d.n_obj)]
    out += [f"arrow {d.arrows[a]} -> {c.arrows[F.amap[a]]}" for a in range(d.n_obj, d.n_arr)]
    return out


def print_functor(F: FunctorMap, name: Optional[str] = None) -> str:
    nm = _tok(name or F.name or "F")
    return "\n".join([f"functor {nm} : {_tok(F.dom.name)} -> {_tok(F.cod.name)}",
                      *_map_lines(F)]) + "\n"


def print_homotopy(h: Homotopy, name: Optional[str] = None) -> str:
    nm = _tok(name or h.carrier.name or "H")
    return "\n".join([f"homotopy {nm} : {_tok(h.a0.name)} -> {_tok(h.a1.name)}",
                      *_map_lines(h.carrier)]) + "\n"


def print_nat(N: NatTrans, name: str, source: str, target: str) -> str:
    d, c = N.source.dom, N.source.cod
    lines = [f"nat {_tok(name)} : {_tok(source)} => {_tok(target)}"]
    lines += [f"at {d.objects[x]} : {c.arrows[N.components[x]]}" for x in range(d.n_obj)]
    return "\n".join(lines) + "\n"


def print_square(name: str, left: str, right: str, top: str, bottom: str) -> str:
    return (f"square {_tok(name)}\nleft {_tok(left)}\nright {_tok(right)}\n"
            f"top {_tok(top)}\nbottom {_tok(bottom)}\n")


class Document:
    """Collects values and writes them, categories first, as one self-contained text."""

    def __init__(self, builtins: bool = False):
        self.builtins = builtins  # also write categories that are built in
        self.cats: dict[str, FinCat] = {}
        self.parts: list[str] = []

    def category(self, c: FinCat) -> None:
        seen = self.cats.get(c.name)
        if seen is not None:
            if seen != c:
                raise ValueError(f"two different categories are named {c.name}")
            return
        self.cats[c.name] = c

    def functor(self, F: FunctorMap, name: Optional[str] = None) -> str:
        self.category(F.dom)
        self.category(F.cod)
        nm = name or F.name or f"F{len(self.parts)}"
        self.parts.append(print_functor(F, nm))
        return nm

    def homotopy(self, h: Homotopy, name: str) -> str:
        self.category(h.a0)
        self.category(h.a1)
        self.parts.append(print_homotopy(h, name))
        return name

    def nat(self, N: NatTrans, name: str) -> str:
        s = self.functor(N.source, f"{name}.source")
        t = self.functor(N.target, f"{name}.target")
        self.parts.append(print_nat(N, name, s, t))
        return name

    def square(self, p: LiftProblem, name: str = "Q") -> str:
        names = [self.functor(F, f"{name}.{r}") for r, F in
                 (("left", p.j), ("right", p.f), ("top", p.top), ("bottom", p.bottom))]
        self.parts.append(print_square(name, *names))
        return name

    def text(self) -> str:
        built = builtin_categories()
        cats = [print_category(c) for nm, c in self.cats.items()
                if self.builtins or built.get(nm) != c]
        return "\n".join(cats + self.parts)


# -- corpus directories ---------------------------------------------------------------

def load_corpus_dir(path) -> Corpus:
    """manifest.txt (optional) plus *.cat and *.fun files.

    Manifest lines: ``name NAME``, ``fault broken-cleavage``, ``functors enumerate``
    (add all functors among the categories within the functor bound).
    """
    root = Path(path)
    if not root.is_dir():
        raise ParseError(f"corpus directory {root} does not exist")
    name, fault, enumerate_all = root.name, None, False
    man = root / "manifest.txt"
    if man.exists():
        for n, raw in enumerate(man.read_text(encoding="utf-8").splitlines(), 1):
            toks = _COMMENT.sub("", raw).split()
            if not toks:
                continue
            if toks[0] == "name" and len(toks) == 2:
                name = toks[1]
            elif toks[0] == "fault" and len(toks) == 2:
                if toks[1] not in FAULTS:
                    raise ParseError(f"unknown fault {toks[1]!r}", n, str(man))
                fault = toks[1]
            elif toks == ["functors", "enumerate"]:
                enumerate_all = True
            else:
                raise ParseError(f"unexpected manifest line {raw.strip()!r}", n, str(man))
    ws = Workspace()
    for f in sorted(root.glob("*.cat")) + sorted(root.glob("*.fun")):
        ws.load_file(f)
    cats = [ws.categories[n] for k, n in ws.order if k == "category"]
    funs = [ws.functors[n] for k, n in ws.order if k == "functor"]
    if enumerate_all:
        n_max, m_max = FUNCTOR_BOUND
        funs += functors_among([c for c in cats if c.n_obj <= n_max and c.n_arr <= m_max])
    if not cats:
        raise ParseError(f"corpus directory {root} defines no categories")
    return Corpus(name, cats, funs, fault)


def dump_corpus_dir(corpus: Corpus, path) -> None:
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    lines = [f"name {corpus.name}"] + ([f"fault {corpus.fault}"] if corpus.fault else [])
    (root / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (root / "categories.cat").write_text(
        "\n".join(print_category(c) for c in corpus.categories), encoding="utf-8")
    doc = Document()
    doc.cats = {c.name: c for c in corpus.categories}
    for F in corpus.functors:
        doc.functor(F, safe_name(F.name))
    (root / "functors.fun").write_text("\n".join(doc.parts), encoding="utf-8")


def corpus_from_env(path: Optional[str]) -> Corpus:
    path = path or os.environ.get("FOLKENGINE_CORPUS")
    return default_corpus() if not path else load_corpus_dir(path)


# -- commands --------------------------------------------------------------------------

def _load(paths: Iterable[str], strict: bool = True) -> Workspace:
    ws = Workspace(strict=strict)
    for p in paths:
        ws.load_file(p)
    return ws


def _emit(rep: Report, report: Optional[str] = None) -> int:
    text = rep.render()
    click.echo(text)
    if report:
        Path(report).write_text(text + "\n", encoding="utf-8")
    return 0 if rep.ok else 1


@click.group()
def cli() -> None:
    """Homotopy-theoretic constructions on finite categories."""


@cli.command()
@click.argument("files", nargs=-1, required=True)
def check(files) -> int:
    """Parse and validate every declaration in FILES."""
    ws = _load(files, strict=False)
    rep = Report("check")
    for e in ws.problems:
        rep.fail(str(e))
    for kind, name in ws.order:
        if f"{kind} {name}" not in ws.invalid:
            rep.lines.append(f"ok {kind} {name}")
    return _emit(rep)


@cli.group()
def interval() -> None:
    """The interval structure on finite categories."""


@interval.command("verify")
def interval_verify() -> int:
    """Check every interval structure axiom as an exact equality."""
    t = time.perf_counter()
    rep = verify_interval(standard())
    rep.lines.append(f"time {time.perf_counter() - t:.3f}s")
    return _emit(rep)


def interval_document() -> Document:
    st = standard()
    doc = Document(builtins=True)
    doc.category(st.I)
    doc.category(st.S)
    for name, F in st.functors():
        doc.functor(F, name)
    return doc


@interval.command("dump")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def interval_dump(output) -> int:
    """Write I, S and all structure functors in the text format."""
    text = interval_document().text()
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    return 0


@cli.group()
def functor() -> None:
    """Functor utilities."""


@functor.command("check")
@click.argument("files", nargs=-1, required=True)
def functor_check(files) -> int:
    """Validate every functor in FILES, naming a witness on failure."""
    ws = _load(files, strict=False)
    rep = Report("functor check")
    for e in ws.problems:
        rep.fail(str(e))
    for name in ws.functors:
        if f"functor {name}" not in ws.invalid:
            rep.lines.append(f"ok functor {name}")
    if not ws.functors and not ws.problems:
        raise ParseError("no functor found in the input")
    return _emit(rep)


_name_opt = click.option("--name", default=None, help="Which functor (default: the last one).")


@cli.command()
@click.argument("file")
@_name_opt
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Write the certificate here.")
def equiv(file, name, output) -> int:
    """Decide whether a functor is a homotopy equivalence."""
    f = _load([file]).last("functor", name)
    rep = Report(f"equivalence {f.name}")
    cert = find_equivalence(f)
    if cert is None:
        rep.fail(f"no homotopy inverse: {_equiv_witness(f)}")
    else:
        r = cert.check()
        rep.check("certificate re-validates", r.ok, "; ".join(r.failures))
        rep.lines.append("inverse: " + ", ".join(
            f"{x} -> {cert.f_inv.obj(x)}" for x in f.cod.objects))
        if output:
            doc = Document()
            doc.functor(f, "f")
            doc.functor(cert.f_inv, "f_inv")
            doc.homotopy(cert.h_left, "h_left")
            doc.homotopy(cert.h_right, "h_right")
            Path(output).write_text(doc.text(), encoding="utf-8")
    rep.check("agrees with the fully faithful and essentially surjective test",
              (cert is not None) == equivalence_oracle(f))
    return _emit(rep)


def _equiv_witness(f: FunctorMap) -> str:
    d, c = f.dom, f.cod
    for x in range(d.n_obj):
        for y in range(d.n_obj):
            img = f.amap[d.hom(x, y)].tolist()
            tgt = c.hom(int(f.omap[x]), int(f.omap[y]))
            if len(set(img)) != len(img):
                return f"not faithful on {d.objects[x]} -> {d.objects[y]}"
            if len(img) != len(tgt):
                return f"not full on {d.objects[x]} -> {d.objects[y]}"
    hit = {int(y) for y in f.omap}
    for y in range(c.n_obj):
        if not any(c.hom(y, z).size and c.inv[c.hom(y, z)].max() >= 0 for z in hit):
            return f"object {c.objects[y]} is not isomorphic to an image object"
    return "no inverse found"


@cli.command()
@click.argument("file")
@_name_opt
@click.option("--normally-cloven", is_flag=True, help="Also check the canonical cleavage.")
def fib(file, name, normally_cloven) -> int:
    """Decide whether a functor is a fibration."""
    f = _load([file]).last("functor", name)
    v = is_normally_cloven_fibration(f) if normally_cloven else is_isofibration(f)
    kind = "normally cloven fibration" if normally_cloven else "fibration"
    rep = Report(f"{kind} {f.name}")
    rep.check(f"{f.name} is a {kind}", v.holds, v.witness)
    return _emit(rep)


@cli.command()
@click.argument("file")
@_name_opt
@click.option("--normally-cloven", is_flag=True, help="Require a normal cleavage.")
def cofib(file, name, normally_cloven) -> int:
    """Decide whether a functor is a cofibration."""
    f = _load([file]).last("functor", name)
    v = is_normally_cloven_cofibration(f) if normally_cloven else is_cofibration(f)
    kind = "normally cloven cofibration" if normally_cloven else "cofibration"
    rep = Report(f"{kind} {f.name}")
    rep.check(f"{f.name} is a {kind}", v.holds, v.witness)
    return _emit(rep)


def _write_cert(doc: Document, name: str, c) -> str:
    """Serialize the data of a certificate; returns a one-line description."""
    if isinstance(c, SdrCertificate):
        doc.functor(c.j, f"{name}.j")
        doc.functor(c.r, f"{name}.r")
        doc.homotopy(c.h, f"{name}.h")
        return f"strong deformation retraction ({c.kind}): {name}.j, {name}.r, {name}.h"
    if isinstance(c, EquivalenceCertificate):
        doc.functor(c.f_inv, f"{name}.inv")
        doc.homotopy(c.h_left, f"{name}.h_left")
        doc.homotopy(c.h_right, f"{name}.h_right")
        return f"homotopy equivalence: {name}.inv, {name}.h_left, {name}.h_right"
    if isinstance(c, CofibrationWitness):
        doc.functor(c.r, f"{name}.r")
        return f"retraction of Cyl onto the mapping cylinder: {name}.r"
    if isinstance(c, CofCleavage):
        doc.functor(c.l, f"{name}.l")
        return f"normal cofibration cleavage from the criterion lift {name}.l"
    if isinstance(c, Cleavage):
        return f"cleavage, {c.policy} policy"
    return f"lift construction {type(c).__name__}"


@cli.command()
@click.option("--mode", type=click.Choice(list(MODES)), required=True)
@click.argument("file")
@_name_opt
@click.option("-o", "--output", type=click.Path(file_okay=False), required=True)
@click.option("--fault", type=click.Choice(FAULTS), default=None)
def factor(mode, file, name, output, fault) -> int:
    """Factor a functor and write the middle object, j, g and certificates."""
    f = _load([file]).last("functor", name)
    fac = factor_composite(f, MODES[mode], fault)
    rep = fac.check(deep=True)
    root = Path(output)
    root.mkdir(parents=True, exist_ok=True)
    (root / "mid.cat").write_text(print_category(fac.mid), encoding="utf-8")
    for nm, F in (("f", f), ("j", fac.j), ("g", fac.g)):
        doc = Document()
        doc.functor(F, nm)
        (root / f"{nm}.fun").write_text(doc.text(), encoding="utf-8")
    doc = Document()
    lines = []
    for nm, c in fac.certs.items():
        lines.append(f"{nm}: {_write_cert(doc, nm, c)}")
    (root / "certificates.fun").write_text(doc.text(), encoding="utf-8")
    rep.lines.extend(lines)
    rep.lines.append(f"middle object {fac.mid.name}: {fac.mid.n_obj} objects, "
                     f"{fac.mid.n_arr} arrows")
    return _emit(rep, str(root / "report.txt"))


@cli.command()
@click.argument("file")
@click.option("--name", default=None, help="Which square (default: the last one).")
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
@click.option("--variant", type=click.Choice(sorted(VARIANTS)), default="A")
def lift(file, name, output, variant) -> int:
    """Fill a lifting square by the explicit construction, else by search."""
    p = _load([file]).last("square", name)
    rep = Report("lift")
    sol = formula_lift(p, variant)
    if sol is None:
        l = brute_force_filler(p)
        if l is None:
            rep.fail("no formula applies and no filler exists")
            return _emit(rep)
        sol = LiftSolution(p, l, "search")
    r = sol.check()
    rep.lines.append(f"method {sol.method}")
    rep.lines.extend(r.lines)
    rep.failures.extend(r.failures)
    doc = Document()
    doc.functor(sol.l, "l")
    Path(output).write_text(doc.text(), encoding="utf-8")
    return _emit(rep)


@cli.command()
@click.option("--variant", type=click.Choice(sorted(VARIANTS)), required=True)
@click.option("--corpus", "corpus_dir", type=click.Path(file_okay=False), default=None,
              help="Corpus directory (default: $FOLKENGINE_CORPUS, else the built-in one).")
@click.option("--report", type=click.Path(dir_okay=False), default=None)
def axioms(variant, corpus_dir, report) -> int:
    """Check the seven model-structure conditions on a corpus."""
    corpus = corpus_from_env(corpus_dir)
    return _emit(verify_model_axioms(corpus, variant, AxiomBudget()), report)


@cli.group()
def corpus() -> None:
    """Corpus directories."""


@corpus.command("dump")
@click.argument("directory", type=click.Path(file_okay=False))
@click.option("--fault", type=click.Choice(FAULTS), default=None)
def corpus_dump(directory, fault) -> int:
    """Write the built-in corpus as text files."""
    dump_corpus_dir(default_corpus(fault), directory)
    return 0


# -- entry points ------------------------------------------------------------------------

def run(argv: Optional[list[str]] = None) -> int:
    """Dispatch; 0 = checks pass, 1 = a checked property fails, 2 = bad input or usage."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None,
                      prog_name="folkengine", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 2
    except click.exceptions.Abort:
        return 2
    except (ParseError, ValueError, OSError) as e:
        click.echo(f"error: {e}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
