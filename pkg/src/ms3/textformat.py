"""Line-oriented text format for flow presentations and framed graphs.

A flow document is UTF-8 text with ``#`` comments and sections::

    [graph]
    vertex A1
    edge a = A1 -- A1 orient=fixed kind=corner

    [surface L1]
    genus 0
    boundary a
    boundary b^-1

    [handle T1]
    kind=round index=1 height=0
    in = L1 L2
    out = L5 L6

    [pairs]
    lower a | b^-1

    [chosen]
    T1 = a b

    [tau]
    case1 T0 T2 alpha=1 beta=-1
    case2 T0 meridian=(3, 0)
    omega T0 = (1, 3)
    case2L vertex T0 role=source
    case2L edge L1 = T0 -> T1 mu=inf
    case3 T0 cycle a b^-1 alpha=1

Exactly one ``[graph]`` section and at least one ``[surface]`` section are
required.  Errors carry 1-based line and column numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .errors import InvalidGraph, ParseError, ValidationError
from .framed import INF, MSGraph, Role, is_infinite
from .model import (
    Case1Record,
    Case2Record,
    Case3Record,
    EdgeKind,
    EdgeRecord,
    FlowPresentation,
    HandleRecord,
    Orientation,
    SurfaceRegion,
    TauInvariant,
    validate_presentation,
)
from .words import CyclicWord, Letter

__all__ = [
    "parse_flow",
    "serialize",
    "parse_msgraph",
    "parse_framing",
    "serialize_msgraph",
    "serialize_framing",
]

_PUNCT = set("=(),|[]")
_IDENT = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.\-']*\Z")
_INT = re.compile(r"[+-]?\d+\Z")
_LETTER = re.compile(r"([A-Za-z0-9_][A-Za-z0-9_.\-']*?)(\^([+-]?1))?\Z")

SECTIONS = ("graph", "surface", "handle", "pairs", "chosen", "tau")


@dataclass
class Token:
    text: str
    col: int


def _tokenize(line: str, lineno: int, source) -> list[Token]:
    out = []
    i, n = 0, len(line)
    while i < n:
        ch = line[i]
        if ch.isspace():
            i += 1
        elif ch == "#":
            break
        elif ch in _PUNCT:
            out.append(Token(ch, i + 1))
            i += 1
        else:
            j = i
            while j < n and not line[j].isspace() and line[j] not in _PUNCT and line[j] != "#":
                j += 1
            out.append(Token(line[i:j], i + 1))
            i = j
    return out


class _Line:
    """Cursor over the tokens of one line."""

    def __init__(self, tokens, lineno, text, source):
        self.toks = tokens
        self.pos = 0
        self.lineno = lineno
        self.text = text
        self.source = source

    def error(self, msg, tok: Token | None = None):
        if tok is None:
            tok = self.peek()
        col = tok.col if tok is not None else len(self.text.rstrip()) + 1
        return ParseError(msg, self.lineno, col, self.source)

    def peek(self) -> Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, what: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise self.error(f"expected {what}, found end of line")
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next(repr(text))
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text!r}", tok)
        return tok

    def ident(self, what="identifier") -> Token:
        tok = self.next(what)
        if not _IDENT.match(tok.text):
            raise self.error(f"expected {what}, found {tok.text!r}", tok)
        return tok

    def integer(self, what="integer") -> int:
        tok = self.next(what)
        if not _INT.match(tok.text):
            raise self.error(f"expected {what}, found {tok.text!r}", tok)
        return int(tok.text)

    def key(self, name: str) -> None:
        tok = self.next(f"'{name}='")
        if tok.text != name:
            raise self.error(f"expected '{name}=', found {tok.text!r}", tok)
        self.expect("=")

    def int_pair(self) -> tuple[int, int]:
        self.expect("(")
        a = self.integer()
        self.expect(",")
        b = self.integer()
        self.expect(")")
        return (a, b)

    def letters(self, stop=()) -> list[tuple[Letter, Token]]:
        out = []
        while self.peek() is not None and self.peek().text not in stop:
            tok = self.next("letter")
            m = _LETTER.match(tok.text)
            if not m:
                raise self.error(f"bad letter {tok.text!r}; use 'a' or 'a^-1'", tok)
            out.append((Letter(m.group(1), -1 if m.group(3) == "-1" else 1), tok))
        if not out:
            raise self.error("expected at least one letter")
        return out

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected {tok.text!r}", tok)

    def at_end(self) -> bool:
        return self.pos >= len(self.toks)


@dataclass
class _Word:
    letters: list  # (Letter, Token)
    line: _Line

    def build(self, known: set[str]) -> CyclicWord:
        for lt, tok in self.letters:
            if lt.label not in known:
                raise self.line.error(f"letter {lt.label!r} names an undeclared edge", tok)
        return CyclicWord(tuple(lt for lt, _ in self.letters))


@dataclass
class _Section:
    kind: str
    ident: str | None
    line: _Line
    body: list = field(default_factory=list)


def _lines(text: str, source) -> Iterator[_Line]:
    for i, raw in enumerate(text.splitlines(), start=1):
        toks = _tokenize(raw, i, source)
        if toks:
            yield _Line(toks, i, raw, source)


def _sections(text: str, source) -> list[_Section]:
    out: list[_Section] = []
    for ln in _lines(text, source):
        if ln.peek().text == "[":
            ln.next("[")
            name = ln.next("section name")
            if name.text not in SECTIONS:
                raise ln.error(f"unknown section {name.text!r}", name)
            ident = None
            if name.text in ("surface", "handle"):
                ident = ln.ident(f"{name.text} id").text
            ln.expect("]")
            ln.done()
            out.append(_Section(name.text, ident, ln))
        else:
            if not out:
                raise ln.error("statement outside any section")
            out[-1].body.append(ln)
    return out


def _check_unique(seen: dict, key: str, ln: _Line, tok: Token, what: str):
    if key in seen:
        raise ln.error(f"duplicate {what} {key!r} (first declared on line {seen[key]})", tok)
    seen[key] = ln.lineno


def parse_flow(text: str, *, validate: bool = True, source: str | None = None) -> FlowPresentation:
    """Parse a flow document.

    Raises :class:`ParseError` on syntax and reference errors and, when
    ``validate`` is true, :class:`ValidationError` if the result violates
    structural invariants.
    """
    sections = _sections(text, source)
    graphs = [s for s in sections if s.kind == "graph"]
    last = max((s.line.lineno for s in sections), default=1)
    if not graphs:
        raise ParseError("missing [graph]", 1, 1, source)
    if len(graphs) > 1:
        raise ParseError("more than one [graph] section", graphs[1].line.lineno, 1, source)
    if not any(s.kind == "surface" for s in sections):
        raise ParseError("missing [surface <id>] section", last, 1, source)

    vertices: dict[str, int] = {}
    edges: dict[str, EdgeRecord] = {}
    edge_lines: dict[str, int] = {}
    pending_edges = []
    for ln in graphs[0].body:
        head = ln.next("statement")
        if head.text == "vertex":
            ln.ident("vertex id")
            ln.pos -= 1
            while not ln.at_end():
                tok = ln.ident("vertex id")
                _check_unique(vertices, tok.text, ln, tok, "vertex")
        elif head.text == "edge":
            lab = ln.ident("edge label")
            ln.expect("=")
            v1 = ln.ident("vertex id")
            ln.expect("--")
            v2 = ln.ident("vertex id")
            ln.key("orient")
            o = ln.next("orientation")
            if o.text not in ("fixed", "free"):
                raise ln.error(f"orientation must be fixed or free, found {o.text!r}", o)
            ln.key("kind")
            k = ln.next("edge kind")
            kinds = [x.value for x in EdgeKind]
            if k.text not in kinds:
                raise ln.error(f"edge kind must be one of {', '.join(kinds)}; found {k.text!r}", k)
            ln.done()
            _check_unique(edge_lines, lab.text, ln, lab, "edge")
            pending_edges.append((ln, lab, v1, v2))
            edges[lab.text] = EdgeRecord(lab.text, v1.text, v2.text, Orientation(o.text), EdgeKind(k.text))
        else:
            raise ln.error(f"expected 'vertex' or 'edge', found {head.text!r}", head)
    for ln, lab, v1, v2 in pending_edges:
        for v in (v1, v2):
            if v.text not in vertices:
                raise ln.error(f"edge {lab.text!r} uses undeclared vertex {v.text!r}", v)
    for v in vertices:
        if v in edges:
            raise ParseError(f"label {v!r} names both a vertex and an edge", vertices[v], 1, source)
    known = set(edges)

    surfaces: dict[str, SurfaceRegion] = {}
    surface_lines: dict[str, int] = {}
    handles: dict[str, tuple] = {}
    handle_lines: dict[str, int] = {}
    lower, upper = [], []
    chosen: dict[str, CyclicWord] = {}
    chosen_lines: dict[str, int] = {}
    tau_lines: list[_Line] = []

    for sec in sections:
        if sec.kind == "surface":
            _check_unique(surface_lines, sec.ident, sec.line, sec.line.toks[2], "surface")
            genus = None
            words = []
            for ln in sec.body:
                head = ln.next("statement")
                if head.text == "genus":
                    if genus is not None:
                        raise ln.error("genus given twice", head)
                    genus = ln.integer("signed genus")
                    ln.done()
                elif head.text == "boundary":
                    words.append(_Word(ln.letters(), ln).build(known))
                else:
                    raise ln.error(f"expected 'genus' or 'boundary', found {head.text!r}", head)
            if genus is None:
                raise sec.line.error("surface section needs a 'genus' line", sec.line.toks[0])
            surfaces[sec.ident] = SurfaceRegion(sec.ident, genus, tuple(words))
        elif sec.kind == "handle":
            _check_unique(handle_lines, sec.ident, sec.line, sec.line.toks[2], "handle")
            handles[sec.ident] = _parse_handle(sec)
        elif sec.kind == "pairs":
            for ln in sec.body:
                head = ln.next("statement")
                if head.text not in ("lower", "upper"):
                    raise ln.error(f"expected 'lower' or 'upper', found {head.text!r}", head)
                a = _Word(ln.letters(stop=("|",)), ln).build(known)
                ln.expect("|")
                b = _Word(ln.letters(), ln).build(known)
                (lower if head.text == "lower" else upper).append((a, b))
        elif sec.kind == "chosen":
            for ln in sec.body:
                h = ln.ident("handle id")
                ln.expect("=")
                _check_unique(chosen_lines, h.text, ln, h, "chosen cycle for")
                chosen[h.text] = _Word(ln.letters(), ln).build(known)
        elif sec.kind == "tau":
            tau_lines.extend(sec.body)

    region_ids = set(surfaces)
    for hid, (rec, ln, refs) in handles.items():
        for tok in refs:
            if tok.text not in region_ids:
                raise ln.error(f"handle {hid!r} references unknown region {tok.text!r}", tok)
    handle_ids = set(handles)
    for hid, line in chosen_lines.items():
        if hid not in handle_ids:
            raise ParseError(f"chosen cycle for unknown handle {hid!r}", line, 1, source)

    tau = _parse_tau(tau_lines, known, handle_ids, region_ids, source)
    p = FlowPresentation(
        frozenset(vertices),
        tuple(edges.values()),
        tuple(surfaces.values()),
        tuple(rec for rec, _, _ in handles.values()),
        tuple(lower),
        tuple(upper),
        chosen,
        tau,
    )
    if validate:
        report = validate_presentation(p)
        if report:
            raise ValidationError(report)
    return p


def _parse_handle(sec: _Section):
    kind = index = height = None
    regions = incoming = outgoing = None
    refs: list[Token] = []
    for ln in sec.body:
        head = ln.peek()
        if head.text == "kind":
            if kind is not None:
                raise ln.error("handle kind given twice", head)
            ln.key("kind")
            k = ln.next("handle kind")
            if k.text not in ("simple", "round"):
                raise ln.error(f"handle kind must be simple or round, found {k.text!r}", k)
            kind = k.text
            ln.key("index")
            index = ln.integer("handle index")
            if not ln.at_end():
                ln.key("height")
                height = ln.integer("height")
            ln.done()
        elif head.text in ("regions", "in", "out"):
            ln.next("keyword")
            ln.expect("=")
            ids = []
            while not ln.at_end():
                ids.append(ln.ident("region id"))
            refs.extend(ids)
            got = frozenset(t.text for t in ids)
            if head.text == "regions":
                if regions is not None:
                    raise ln.error("'regions' given twice", head)
                regions = got
            elif head.text == "in":
                if incoming is not None:
                    raise ln.error("'in' given twice", head)
                incoming = got
            else:
                if outgoing is not None:
                    raise ln.error("'out' given twice", head)
                outgoing = got
        else:
            raise ln.error(f"expected 'kind=', 'regions', 'in' or 'out', found {head.text!r}", head)
    if kind is None:
        raise sec.line.error("handle section needs a 'kind=... index=...' line", sec.line.toks[0])
    if (incoming is not None or outgoing is not None) and regions is not None:
        raise sec.line.error("give either 'regions' or 'in'/'out', not both", sec.line.toks[0])
    rec = HandleRecord(
        sec.ident, kind, index, height,
        regions=regions or frozenset(), incoming=incoming, outgoing=outgoing,
    )
    return rec, sec.line, refs


def _parse_tau(lines: list[_Line], known, handle_ids, region_ids, source) -> TauInvariant:
    case1 = []
    case2: dict[str, list] = {}
    case2_seen: dict[str, int] = {}
    omega_seen: dict[str, int] = {}
    case3 = []
    lverts: dict[str, Role] = {}
    ledges: dict[str, tuple] = {}
    lframing: dict[str, object] = {}
    first_graph_line = None

    def handle(ln, what="handle id"):
        tok = ln.ident(what)
        if tok.text not in handle_ids:
            raise ln.error(f"unknown handle {tok.text!r}", tok)
        return tok.text

    for ln in lines:
        head = ln.next("tau statement")
        if head.text == "case1":
            h0 = handle(ln)
            h2 = handle(ln)
            ln.key("alpha")
            a = ln.integer()
            ln.key("beta")
            b = ln.integer()
            ln.done()
            case1.append(Case1Record(h0, h2, a, b))
        elif head.text == "case2":
            htok = ln.peek()
            h = handle(ln)
            _check_unique(case2_seen, h, ln, htok, "case2 record for")
            rec = case2.setdefault(h, [None, None])
            while not ln.at_end():
                tok = ln.next("'meridian=' or 'omega='")
                if tok.text == "meridian" and rec[0] is None:
                    ln.expect("=")
                    rec[0] = ln.int_pair()
                elif tok.text == "omega" and rec[1] is None and h not in omega_seen:
                    ln.expect("=")
                    rec[1] = ln.int_pair()
                    omega_seen[h] = ln.lineno
                else:
                    raise ln.error(f"expected 'meridian=' or 'omega=', found {tok.text!r}", tok)
        elif head.text == "omega":
            htok = ln.peek()
            h = handle(ln)
            _check_unique(omega_seen, h, ln, htok, "omega pair for")
            ln.expect("=")
            pair = ln.int_pair()
            ln.done()
            case2.setdefault(h, [None, None])[1] = pair
        elif head.text == "case2L":
            first_graph_line = first_graph_line or ln
            what = ln.next("'vertex' or 'edge'")
            if what.text == "vertex":
                htok = ln.peek()
                h = handle(ln)
                if h in lverts:
                    raise ln.error(f"duplicate L vertex {h!r}", htok)
                ln.key("role")
                r = ln.next("role")
                if r.text not in ("source", "sink", "saddle"):
                    raise ln.error(f"role must be source, sink or saddle, found {r.text!r}", r)
                ln.done()
                lverts[h] = Role(r.text)
            elif what.text == "edge":
                etok = ln.ident("region id")
                if etok.text not in region_ids:
                    raise ln.error(f"L edges are regions; unknown region {etok.text!r}", etok)
                if etok.text in ledges:
                    raise ln.error(f"duplicate L edge {etok.text!r}", etok)
                ln.expect("=")
                t = handle(ln)
                ln.expect("->")
                h = handle(ln)
                ln.key("mu")
                mtok = ln.next("integer or inf")
                if mtok.text == "inf":
                    mu = INF
                elif _INT.match(mtok.text):
                    mu = int(mtok.text)
                else:
                    raise ln.error(f"mu must be an integer or inf, found {mtok.text!r}", mtok)
                ln.done()
                ledges[etok.text] = (t, h)
                lframing[etok.text] = mu
            else:
                raise ln.error(f"expected 'vertex' or 'edge', found {what.text!r}", what)
        elif head.text == "case3":
            h = handle(ln)
            ln.expect("cycle")
            cyc = _Word(ln.letters(stop=("alpha",)), ln).build(known)
            ln.key("alpha")
            a = ln.integer()
            ln.done()
            case3.append(Case3Record(h, cyc, a))
        else:
            raise ln.error(f"unknown tau statement {head.text!r}", head)

    graph = None
    if first_graph_line is not None:
        for e, (t, h) in ledges.items():
            for v in (t, h):
                if v not in lverts:
                    raise first_graph_line.error(f"L edge {e!r} uses undeclared L vertex {v!r}", first_graph_line.toks[0])
        try:
            graph = MSGraph(lverts, ledges)
        except InvalidGraph as exc:
            raise first_graph_line.error(f"invalid L graph: {exc}", first_graph_line.toks[0]) from None
    return TauInvariant(
        case1=case1,
        case2={h: Case2Record(tuple(m) if m else None, tuple(o) if o else None) for h, (m, o) in case2.items()},
        case2_graph=graph,
        case2_framing=lframing,
        case3=case3,
    )


def _ids(xs) -> str:
    return " ".join(sorted(xs))


def _mu(v) -> str:
    return "inf" if is_infinite(v) else str(int(v))


def serialize(p: FlowPresentation) -> str:
    """Deterministic document for ``p``; ``parse_flow(serialize(p)) == p``."""
    out = ["[graph]"]
    out += [f"vertex {v}" for v in sorted(p.vertices)]
    for e in p.edges:
        out.append(f"edge {e.label} = {e.tail} -- {e.head} orient={e.orientation.value} kind={e.kind.value}")
    for s in p.surfaces:
        out += ["", f"[surface {s.id}]", f"genus {s.genus_signed}"]
        out += [f"boundary {w}" for w in s.boundary_words]
    for h in p.handles:
        out += ["", f"[handle {h.id}]"]
        hl = f"kind={h.kind.value} index={h.index}"
        if h.height is not None:
            hl += f" height={h.height}"
        out.append(hl)
        if h.regions or not h.partitioned:
            out.append(f"regions = {_ids(h.regions)}".rstrip())
        if h.incoming is not None:
            out.append(f"in = {_ids(h.incoming)}".rstrip())
        if h.outgoing is not None:
            out.append(f"out = {_ids(h.outgoing)}".rstrip())
    if p.lower_pairs or p.upper_pairs:
        out += ["", "[pairs]"]
        out += [f"lower {a} | {b}" for a, b in p.lower_pairs]
        out += [f"upper {a} | {b}" for a, b in p.upper_pairs]
    if p.chosen_cycles:
        out += ["", "[chosen]"]
        out += [f"{h} = {w}" for h, w in p.chosen_cycles.items()]
    t = p.tau
    if not t.empty:
        out += ["", "[tau]"]
        out += [f"case1 {r.handle0} {r.handle2} alpha={r.alpha} beta={r.beta}" for r in t.case1]
        for h, rec in t.case2.items():
            if rec.meridian is not None:
                out.append(f"case2 {h} meridian=({rec.meridian[0]}, {rec.meridian[1]})")
            elif rec.omega is None:
                out.append(f"case2 {h}")
            if rec.omega is not None:
                out.append(f"omega {h} = ({rec.omega[0]}, {rec.omega[1]})")
        g = t.case2_graph
        if g is not None:
            out += [f"case2L vertex {v} role={r.value}" for v, r in g.vertices.items()]
            for e, (a, b) in g.edges.items():
                out.append(f"case2L edge {e} = {a} -> {b} mu={_mu(t.case2_framing.get(e, 0))}")
        out += [f"case3 {r.handle} cycle {r.cycle} alpha={r.alpha}" for r in t.case3]
    return "\n".join(out) + "\n"


# --- framed graphs -------------------------------------------------------------


def parse_msgraph(text: str, source: str | None = None) -> MSGraph:
    """Parse ``vertex <id> [role=<role>]`` / ``edge <id> = <tail> -> <head>`` lines.

    Roles of vertices without an explicit ``role=`` are derived from the orientation.
    """
    roles: dict[str, Role] = {}
    declared: dict[str, int] = {}
    edges: dict[str, tuple[str, str]] = {}
    edge_lines: dict[str, int] = {}
    first = None
    for ln in _lines(text, source):
        first = first or ln
        head = ln.next("statement")
        if head.text == "vertex":
            v = ln.ident("vertex id")
            _check_unique(declared, v.text, ln, v, "vertex")
            if not ln.at_end():
                ln.key("role")
                r = ln.next("role")
                if r.text not in ("source", "sink", "saddle"):
                    raise ln.error(f"role must be source, sink or saddle, found {r.text!r}", r)
                roles[v.text] = Role(r.text)
            ln.done()
        elif head.text == "edge":
            e = ln.ident("edge id")
            _check_unique(edge_lines, e.text, ln, e, "edge")
            ln.expect("=")
            t = ln.ident("vertex id")
            ln.expect("->")
            h = ln.ident("vertex id")
            ln.done()
            edges[e.text] = (t.text, h.text)
        else:
            raise ln.error(f"expected 'vertex' or 'edge', found {head.text!r}", head)
    if first is None:
        raise ParseError("empty graph document", 1, 1, source)
    try:
        derived = MSGraph.from_edges(edges, isolated=[v for v in declared if v not in roles])
        merged = dict(derived.vertices)
        merged.update(roles)
        return MSGraph(merged, edges)
    except InvalidGraph as exc:
        raise ParseError(f"invalid MS-graph: {exc}", first.lineno, 1, source) from None


def parse_framing(text: str, source: str | None = None) -> dict[str, object]:
    """Parse ``<edge> = <int|inf>`` entries separated by newlines or commas."""
    out: dict[str, object] = {}
    seen: dict[str, int] = {}
    for ln in _lines(text, source):
        while not ln.at_end():
            e = ln.ident("edge id")
            _check_unique(seen, e.text, ln, e, "framing entry for")
            ln.expect("=")
            v = ln.next("integer or inf")
            if v.text == "inf":
                out[e.text] = INF
            elif _INT.match(v.text):
                out[e.text] = int(v.text)
            else:
                raise ln.error(f"expected integer or inf, found {v.text!r}", v)
            if not ln.at_end():
                ln.expect(",")
    return out


def serialize_msgraph(g: MSGraph) -> str:
    out = [f"vertex {v} role={r.value}" for v, r in g.vertices.items()]
    out += [f"edge {e} = {t} -> {h}" for e, (t, h) in g.edges.items()]
    return "\n".join(out) + "\n"


def serialize_framing(f) -> str:
    return "\n".join(f"{e} = {_mu(v)}" for e, v in sorted(f.items())) + "\n"
