"""Line-oriented text formats.

Every record is a sequence of ``keyword arg ...`` lines.  Blank lines and
lines starting with ``%`` are ignored ('#' is an automaton symbol, so it
cannot mark comments).  Numbers are integers or rationals ``p/q``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from . import linalg as la
from .automata import Dfa
from .digraphs import ColoredDigraph, WeightedDigraph
from .errors import FormatError
from .hitting import Chamber, ChpInstance, OdpInstance, PlpInstance, ShpInstance
from .lattice.cones import TranslatedCone
from .lattice.ihp import IhpInstance
from .lattice.semilinear import LinearSet, ProgressionSet, SemilinearSet
from .lrs import Affine, Lrs
from .monoid import MonoidPresentation, WwhpInstance


@dataclass
class Line:
    no: int
    key: str
    args: list

    def fail(self, msg: str):
        raise FormatError(msg, self.no)

    def nums(self, count: int | None = None) -> list:
        try:
            vals = [la.normalize(la.to_fraction(a)) for a in self.args]
        except (ValueError, ZeroDivisionError):
            self.fail(f"expected numbers after {self.key!r}, got {' '.join(self.args)!r}")
        if count is not None and len(vals) != count:
            self.fail(f"{self.key!r} expects {count} values, got {len(vals)}")
        return vals

    def ints(self, count: int | None = None) -> list[int]:
        vals = self.nums(count)
        if any(not isinstance(v, int) for v in vals):
            self.fail(f"{self.key!r} expects integers")
        return vals


def lines(text: str) -> list[Line]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("%"):
            continue
        parts = s.split()
        out.append(Line(no, parts[0], parts[1:]))
    return out


class Reader:
    def __init__(self, text: str):
        self.items = lines(text)
        self.pos = 0

    def peek(self) -> Line | None:
        return self.items[self.pos] if self.pos < len(self.items) else None

    def take(self, key: str | None = None) -> Line:
        ln = self.peek()
        if ln is None:
            raise FormatError(f"unexpected end of input, expected {key or 'a line'}")
        if key is not None and ln.key != key:
            ln.fail(f"expected {key!r}, found {ln.key!r}")
        self.pos += 1
        return ln

    def done(self) -> bool:
        return self.peek() is None

    def finish(self):
        ln = self.peek()
        if ln is not None:
            ln.fail(f"unexpected {ln.key!r}")


def fmt(v) -> str:
    return str(la.normalize(la.to_fraction(v)))


def fmt_vec(vs) -> str:
    return " ".join(fmt(v) for v in vs)


# --- lrs and matrices -----------------------------------------------------


def read_lrs(r: Reader) -> Lrs:
    head = r.take("lrs")
    (d,) = head.ints(1)
    a = r.take("a").nums(d)
    b = r.take("b").nums(d)
    return Lrs(tuple(a), tuple(b))


def parse_lrs(text: str) -> Lrs:
    r = Reader(text)
    s = read_lrs(r)
    r.finish()
    return s


def format_lrs(s: Lrs) -> str:
    return str(s)


def read_matrix(r: Reader) -> tuple:
    head = r.take("mat")
    rows, cols = head.ints(2)
    out = []
    for _ in range(rows):
        ln = r.take()
        vals = Line(ln.no, "row", [ln.key] + ln.args).nums(cols)
        out.append(tuple(vals))
    return tuple(out)


def read_vector(r: Reader) -> tuple:
    m = read_matrix(r)
    if any(len(row) != 1 for row in m):
        raise FormatError("vector must be a one-column matrix")
    return tuple(row[0] for row in m)


def parse_matrix(text: str) -> tuple:
    r = Reader(text)
    m = read_matrix(r)
    r.finish()
    return m


def format_matrix(m) -> str:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    return "\n".join([f"mat {rows} {cols}"] + [fmt_vec(row) for row in m]) + "\n"


def format_vector(v) -> str:
    return format_matrix([(x,) for x in v])


# --- digraphs -------------------------------------------------------------


def parse_digraph(text: str):
    """Weighted digraph, or colored when a ``colors`` line is present."""
    r = Reader(text)
    (n,) = r.take("digraph").ints(1)
    colors = None
    marks = {"s": 0, "f": 0}
    edges = []
    while not r.done():
        ln = r.take()
        if ln.key == "colors":
            (colors,) = ln.ints(1)
        elif ln.key == "mark":
            if len(ln.args) != 2 or ln.args[0] not in marks:
                ln.fail("mark expects 's <v>' or 'f <v>'")
            marks[ln.args[0]] = Line(ln.no, "mark", ln.args[1:]).ints(1)[0]
        elif ln.key == "edge":
            edges.append(tuple(ln.ints(3)))
        else:
            ln.fail(f"unknown digraph line {ln.key!r}")
    try:
        if colors is not None:
            return ColoredDigraph(n, tuple(edges), colors, marks["s"], marks["f"])
        return WeightedDigraph(n, tuple(edges), marks["s"], marks["f"])
    except ValueError as e:
        raise FormatError(str(e)) from None


# --- automata -------------------------------------------------------------


def read_dfa(r: Reader) -> Dfa:
    r.take("dfa")
    alphabet = tuple(r.take("alphabet").args)
    (states,) = r.take("states").ints(1)
    (initial,) = r.take("initial").ints(1)
    acc = r.take("accepting").ints()
    index = {a: i for i, a in enumerate(alphabet)}
    table = [[None] * len(alphabet) for _ in range(states)]
    while r.peek() is not None and r.peek().key == "trans":
        ln = r.take("trans")
        if len(ln.args) != 3:
            ln.fail("trans expects '<state> <symbol> <state>'")
        q, sym, t = ln.args
        if sym not in index:
            ln.fail(f"symbol {sym!r} not in the alphabet")
        try:
            qi, ti = int(q), int(t)
            table[qi][index[sym]] = ti
        except (ValueError, IndexError):
            ln.fail("state out of range")
    for q, row in enumerate(table):
        for i, t in enumerate(row):
            if t is None:
                raise FormatError(f"missing transition for state {q} on {alphabet[i]!r}")
    try:
        return Dfa(alphabet, tuple(tuple(row) for row in table), initial, frozenset(acc))
    except ValueError as e:
        raise FormatError(str(e)) from None


def parse_dfa(text: str) -> Dfa:
    r = Reader(text)
    a = read_dfa(r)
    r.finish()
    return a


def format_dfa(a: Dfa) -> str:
    return str(a)


# --- monoids and walk-hitting instances -----------------------------------


def format_monoid(m: MonoidPresentation) -> str:
    lines_ = [
        f"monoid {len(m.elements)}",
        "% maps compose right to left: (f g)(q) = f(g(q))",
        f"identity {m.identity if m.identity is not None else -1}",
    ]
    lines_ += [f"elem {i} " + " ".join(map(str, e)) for i, e in enumerate(m.elements)]
    lines_ += [f"gen g{i + 1} " + " ".join(map(str, g)) for i, g in enumerate(m.generators)]
    return "\n".join(lines_) + "\n"


def format_wwhp(inst: WwhpInstance) -> str:
    parts = [
        f"wwhp {inst.relation}",
        f"min_power {inst.min_power}",
        f"accept {inst.accept_state}",
        "target " + " ".join(map(str, inst.target)),
        str(inst.graph).rstrip("\n"),
        format_matrix(inst.phi).rstrip("\n"),
        format_vector(inst.x0).rstrip("\n"),
    ]
    return "\n".join(parts) + "\n"


def parse_wwhp(text: str) -> WwhpInstance:
    r = Reader(text)
    head = r.take("wwhp")
    if len(head.args) != 1 or head.args[0] not in ("eq", "le", "ge"):
        head.fail("wwhp expects a relation eq, le or ge")
    (min_power,) = r.take("min_power").ints(1)
    (accept,) = r.take("accept").ints(1)
    target = tuple(r.take("target").ints())
    graph_lines = []
    while r.peek() is not None and r.peek().key != "mat":
        ln = r.take()
        graph_lines.append(" ".join([ln.key] + ln.args))
    graph = parse_digraph("\n".join(graph_lines))
    if not isinstance(graph, ColoredDigraph):
        raise FormatError("walk-hitting instances need a colored digraph")
    phi = read_matrix(r)
    x0 = read_vector(r)
    r.finish()
    return WwhpInstance(graph, phi, x0, head.args[0], min_power, accept, target)


# --- cones, semilinear and progression sets -------------------------------


def read_cone(r: Reader) -> TranslatedCone:
    (dim,) = r.take("cone").ints(1)
    apex = tuple(r.take("apex").ints(dim))
    gens = []
    while r.peek() is not None and r.peek().key == "gen":
        gens.append(tuple(r.take("gen").ints(dim)))
    return TranslatedCone(apex, tuple(gens))


def parse_cone(text: str) -> TranslatedCone:
    r = Reader(text)
    c = read_cone(r)
    r.finish()
    return c


def format_cone(c: TranslatedCone) -> str:
    return str(c)


def parse_semilinear(text: str) -> SemilinearSet:
    r = Reader(text)
    (dim,) = r.take("semilinear").ints(1)
    comps = []
    while not r.done():
        r.take("component")
        base = tuple(r.take("base").ints(dim))
        periods = []
        while r.peek() is not None and r.peek().key == "period":
            periods.append(tuple(r.take("period").ints(dim)))
        comps.append(LinearSet(base, tuple(periods)))
    return SemilinearSet(tuple(comps), dim)


def parse_progression(text: str) -> ProgressionSet:
    r = Reader(text)
    finite = frozenset(r.take("finite").ints())
    progs = []
    while not r.done():
        ln = r.take("prog")
        n0, d = ln.ints(2)
        if d < 1:
            ln.fail("progression difference must be positive")
        progs.append((n0, d))
    return ProgressionSet(finite, tuple(progs))


def parse_ihp(text: str) -> IhpInstance:
    r = Reader(text)
    phi = read_matrix(r)
    x0 = read_vector(r)
    min_power = 0
    if r.peek() is not None and r.peek().key == "min_power":
        (min_power,) = r.take("min_power").ints(1)
    c = read_cone(r)
    r.finish()
    if len(c.apex) != len(x0):
        raise FormatError("cone dimension does not match the start vector")
    return IhpInstance(phi, x0, c.apex, c.gens, min_power)


def format_ihp(inst: IhpInstance) -> str:
    head = format_matrix(inst.phi) + format_vector(inst.x0)
    return head + f"min_power {inst.min_power}\n" + str(inst.cone)


# --- orbit hitting instances ----------------------------------------------


def _affine(ln: Line, dim: int) -> Affine:
    vals = ln.nums(dim + 1)
    return Affine(tuple(vals[:dim]), vals[dim])


def parse_orbit_instance(text: str):
    """Matrix and start vector followed by one target block.

    ``chamber`` with ``h`` lines and one ``sign`` line is a chamber-hitting
    instance; several ``sign`` lines make an orbit-description instance.
    ``subspaces`` holds ``subspace`` groups of ``h`` lines; ``polyhedron``
    holds ``h`` (>= 0) and ``eq`` (= 0) lines.
    """
    r = Reader(text)
    phi = read_matrix(r)
    x0 = read_vector(r)
    d = len(x0)
    if len(phi) != d or any(len(row) != d for row in phi):
        raise FormatError("matrix must be square and match the start vector")
    head = r.take()
    if head.key == "chamber":
        funcs, signs = [], []
        while not r.done():
            ln = r.take()
            if ln.key == "h":
                funcs.append(_affine(ln, d))
            elif ln.key == "sign":
                s = ln.ints(len(funcs))
                if any(x not in (-1, 0, 1) for x in s):
                    ln.fail("signs must be -1, 0 or 1")
                signs.append(tuple(s))
            else:
                ln.fail(f"unknown chamber line {ln.key!r}")
        if not signs:
            head.fail("chamber block needs a sign line")
        if len(signs) == 1:
            return ChpInstance(phi, x0, Chamber(tuple(funcs), signs[0]))
        return OdpInstance(phi, x0, tuple(funcs), frozenset(signs))
    if head.key == "subspaces":
        fams: list[list] = []
        while not r.done():
            ln = r.take()
            if ln.key == "subspace":
                fams.append([])
            elif ln.key == "h":
                if not fams:
                    ln.fail("'h' before any 'subspace'")
                fams[-1].append(_affine(ln, d))
            else:
                ln.fail(f"unknown subspaces line {ln.key!r}")
        return ShpInstance(phi, x0, tuple(tuple(f) for f in fams))
    if head.key == "polyhedron":
        ineqs, eqs = [], []
        while not r.done():
            ln = r.take()
            if ln.key == "h":
                ineqs.append(_affine(ln, d))
            elif ln.key == "eq":
                eqs.append(_affine(ln, d))
            else:
                ln.fail(f"unknown polyhedron line {ln.key!r}")
        return PlpInstance(phi, x0, tuple(ineqs), tuple(eqs))
    head.fail(f"expected chamber, subspaces or polyhedron, found {head.key!r}")


def _fmt_affine(key: str, h: Affine) -> str:
    return f"{key} {fmt_vec(h.coeffs)} {fmt(h.const)}"


def format_orbit_instance(inst) -> str:
    out = [format_matrix(inst.phi).rstrip("\n"), format_vector(inst.x0).rstrip("\n")]
    if isinstance(inst, ChpInstance):
        out.append("chamber")
        out += [_fmt_affine("h", h) for h in inst.chamber.funcs]
        out.append("sign " + " ".join(map(str, inst.chamber.signs)))
    elif isinstance(inst, OdpInstance):
        out.append("chamber")
        out += [_fmt_affine("h", h) for h in inst.funcs]
        out += ["sign " + " ".join(map(str, p)) for p in sorted(inst.patterns, reverse=True)]
    elif isinstance(inst, ShpInstance):
        out.append("subspaces")
        for fam in inst.families:
            out.append("subspace")
            out += [_fmt_affine("h", h) for h in fam]
    elif isinstance(inst, PlpInstance):
        out.append("polyhedron")
        out += [_fmt_affine("h", h) for h in inst.ineqs]
        out += [_fmt_affine("eq", h) for h in inst.eqs]
    else:
        raise TypeError(type(inst).__name__)
    return "\n".join(out) + "\n"


# --- machine-readable variant ---------------------------------------------


def to_jsonl(text: str) -> str:
    """One JSON object per text line with the same fields.

    Lines without a leading keyword (bare values, matrix rows) get the field
    ``value``; comment lines get ``comment``.
    """
    out = []
    for raw in text.splitlines():
        if not raw.strip():
            continue
        parts = raw.split()
        if parts[0] == "%":
            field, values = "comment", parts[1:]
        elif parts[0].startswith("%"):
            field, values = "comment", [parts[0][1:]] + parts[1:]
        elif parts[0][0].isalpha():
            field, values = parts[0], parts[1:]
        else:
            field, values = "value", parts
        out.append(json.dumps({"field": field, "values": values}, separators=(",", ":")))
    return "\n".join(out) + ("\n" if out else "")


def records(items: Iterable[str]) -> str:
    return "".join(s if s.endswith("\n") else s + "\n" for s in items)
