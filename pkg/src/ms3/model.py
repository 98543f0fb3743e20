"""Combinatorial presentation of a Morse-Smale flow (its distinguishing graph).

A :class:`FlowPresentation` records the graph formed by the lower and upper
curves, corner circles and tau-curves on the stratified surface, the regions
obtained by cutting along it (signed genus plus boundary words), the handle
boundaries they belong to, the paired orbit curves, chosen cycles and the
tau-invariant.  Presentations are immutable; :func:`validate_presentation`
reports every violated structural invariant and :func:`relabel` renames
labels and reverses free edges.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .framed import INF, MSGraph, Role, is_infinite
from .words import CyclicWord, word

__all__ = [
    "Orientation",
    "EdgeKind",
    "HandleKind",
    "EdgeRecord",
    "SurfaceRegion",
    "HandleRecord",
    "Case1Record",
    "Case2Record",
    "Case3Record",
    "TauInvariant",
    "FlowPresentation",
    "Violation",
    "validate_presentation",
    "relabel",
]


class Orientation(str, enum.Enum):
    FIXED = "fixed"
    FREE = "free"


class EdgeKind(str, enum.Enum):
    LOWER = "lower-curve"
    UPPER = "upper-curve"
    CORNER = "corner"
    TAU = "tau-curve"
    CHOSEN = "chosen-cycle-curve"


class HandleKind(str, enum.Enum):
    SIMPLE = "simple"
    ROUND = "round"


@dataclass(frozen=True)
class EdgeRecord:
    label: str
    tail: str
    head: str
    orientation: Orientation = Orientation.FIXED
    kind: EdgeKind = EdgeKind.CORNER

    def __post_init__(self):
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        object.__setattr__(self, "kind", EdgeKind(self.kind))

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    @property
    def free(self) -> bool:
        return self.orientation is Orientation.FREE


@dataclass(frozen=True)
class SurfaceRegion:
    """A region of the cut surface: signed genus (negative if non-orientable) and boundary words."""

    id: str
    genus_signed: int
    boundary_words: tuple[CyclicWord, ...]

    def __post_init__(self):
        object.__setattr__(self, "boundary_words", tuple(word(w) for w in self.boundary_words))
        object.__setattr__(self, "genus_signed", int(self.genus_signed))


@dataclass(frozen=True)
class HandleRecord:
    """Boundary of a simple or round handle.

    Round 1-handles list their incoming and outgoing regions separately
    (``incoming``/``outgoing``); every other handle uses ``regions``.
    """

    id: str
    kind: HandleKind
    index: int
    height: int | None = None
    regions: frozenset[str] = frozenset()
    incoming: frozenset[str] | None = None
    outgoing: frozenset[str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", HandleKind(self.kind))
        object.__setattr__(self, "regions", frozenset(self.regions))
        if self.incoming is not None:
            object.__setattr__(self, "incoming", frozenset(self.incoming))
        if self.outgoing is not None:
            object.__setattr__(self, "outgoing", frozenset(self.outgoing))

    @property
    def partitioned(self) -> bool:
        return self.incoming is not None or self.outgoing is not None

    @property
    def all_regions(self) -> frozenset[str]:
        if self.partitioned:
            return (self.incoming or frozenset()) | (self.outgoing or frozenset())
        return self.regions

    @property
    def is_round_one(self) -> bool:
        return self.kind is HandleKind.ROUND and self.index == 1


class Case1Record(NamedTuple):
    """Numbers attached to a round 0-handle / round 2-handle pair."""

    handle0: str
    handle2: str
    alpha: int
    beta: int


class Case2Record(NamedTuple):
    """Per-torus data when all essential cycles are parallel.

    ``meridian`` is the (alpha, beta) pair of the meridian, ``omega`` the
    ``(k, l)`` pair with ``[m] = k[gamma] + l[omega]``; either may be absent.
    """

    meridian: tuple[int, int] | None = None
    omega: tuple[int, int] | None = None


class Case3Record(NamedTuple):
    """Intersection number ``alpha`` of one simple cycle with the chosen cycle."""

    handle: str
    cycle: CyclicWord
    alpha: int


@dataclass(frozen=True)
class TauInvariant:
    """The tau-invariant.

    ``case2_graph`` is the framed graph whose vertices are handle ids and
    whose edges are the ids of annular regions shared by two handles;
    ``case2_framing`` maps each such region to an integer or ``INF``.
    """

    case1: tuple[Case1Record, ...] = ()
    case2: Mapping[str, Case2Record] = field(default_factory=dict)
    case2_graph: MSGraph | None = None
    case2_framing: Mapping[str, object] = field(default_factory=dict)
    case3: tuple[Case3Record, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "case1", tuple(sorted(Case1Record(*r) for r in self.case1)))
        object.__setattr__(
            self, "case2", {h: Case2Record(*r) for h, r in sorted(self.case2.items())}
        )
        object.__setattr__(
            self,
            "case2_framing",
            {e: (INF if is_infinite(v) else int(v)) for e, v in sorted(self.case2_framing.items())},
        )
        object.__setattr__(
            self,
            "case3",
            tuple(Case3Record(h, word(c), int(a)) for h, c, a in self.case3),
        )

    @property
    def empty(self) -> bool:
        return not (self.case1 or self.case2 or self.case2_graph or self.case3)


@dataclass(frozen=True)
class FlowPresentation:
    """Distinguishing graph of a flow plus all the data compared by equivalence.

    Collections are normalized on construction (edges, regions, handles
    sorted by id), so two presentations built from the same data compare equal.
    """

    vertices: frozenset[str]
    edges: tuple[EdgeRecord, ...]
    surfaces: tuple[SurfaceRegion, ...]
    handles: tuple[HandleRecord, ...] = ()
    lower_pairs: tuple[tuple[CyclicWord, CyclicWord], ...] = ()
    upper_pairs: tuple[tuple[CyclicWord, CyclicWord], ...] = ()
    chosen_cycles: Mapping[str, CyclicWord] = field(default_factory=dict)
    tau: TauInvariant = field(default_factory=TauInvariant)
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.label)))
        object.__setattr__(self, "surfaces", tuple(sorted(self.surfaces, key=lambda s: s.id)))
        object.__setattr__(self, "handles", tuple(sorted(self.handles, key=lambda h: h.id)))
        for attr in ("lower_pairs", "upper_pairs"):
            object.__setattr__(
                self, attr, tuple((word(a), word(b)) for a, b in getattr(self, attr))
            )
        object.__setattr__(
            self, "chosen_cycles", {h: word(w) for h, w in sorted(self.chosen_cycles.items())}
        )

    def edge(self, label: str) -> EdgeRecord:
        return self._edge_index[label]

    def region(self, rid: str) -> SurfaceRegion:
        return self._region_index[rid]

    def handle(self, hid: str) -> HandleRecord:
        return self._handle_index[hid]

    @cached_property
    def _edge_index(self) -> dict[str, EdgeRecord]:
        return {e.label: e for e in self.edges}

    @cached_property
    def _region_index(self) -> dict[str, SurfaceRegion]:
        return {s.id: s for s in self.surfaces}

    @cached_property
    def _handle_index(self) -> dict[str, HandleRecord]:
        return {h.id: h for h in self.handles}

    def all_words(self) -> Iterable[tuple[str, CyclicWord]]:
        """Every word in the presentation, tagged with where it lives."""
        for s in self.surfaces:
            for w in s.boundary_words:
                yield f"surface {s.id}", w
        for tag, pairs in (("lower pair", self.lower_pairs), ("upper pair", self.upper_pairs)):
            for i, (a, b) in enumerate(pairs):
                yield f"{tag} {i}", a
                yield f"{tag} {i}", b
        for h, w in self.chosen_cycles.items():
            yield f"chosen cycle {h}", w
        for r in self.tau.case3:
            yield f"case3 cycle on {r.handle}", r.cycle

    def occurrences(self) -> Counter:
        return Counter(lt.label for s in self.surfaces for w in s.boundary_words for lt in w)

    def handles_of_region(self) -> dict[str, list[tuple[str, str]]]:
        """region id -> list of (handle id, side) with side in {"", "in", "out"}."""
        out: dict[str, list] = {s.id: [] for s in self.surfaces}
        for h in self.handles:
            if h.partitioned:
                for side, regs in (("in", h.incoming or ()), ("out", h.outgoing or ())):
                    for r in regs:
                        out.setdefault(r, []).append((h.id, side))
            else:
                for r in h.regions:
                    out.setdefault(r, []).append((h.id, ""))
        return out


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.subject}: {self.message}"


def _walk_closed(p: FlowPresentation, w: CyclicWord) -> bool:
    idx = p._edge_index
    ends = []
    for lt in w:
        e = idx[lt.label]
        ends.append((e.tail, e.head) if lt.power > 0 else (e.head, e.tail))
    return all(ends[i][1] == ends[(i + 1) % len(ends)][0] for i in range(len(ends)))


def validate_presentation(p: FlowPresentation) -> list[Violation]:
    """List every violated invariant; an empty list means the presentation is valid."""
    out: list[Violation] = []
    add = lambda code, subj, msg: out.append(Violation(code, subj, msg))

    labels = [e.label for e in p.edges]
    for lb, n in Counter(labels).items():
        if n > 1:
            add("duplicate-label", f"edge {lb}", f"declared {n} times")
    for lb in sorted(set(labels) & p.vertices):
        add("duplicate-label", lb, "used as both vertex and edge label")
    edge_idx = p._edge_index
    for e in p.edges:
        for v in (e.tail, e.head):
            if v not in p.vertices:
                add("unknown-vertex", f"edge {e.label}", f"endpoint {v} is not a vertex")
        if e.kind is EdgeKind.CORNER and e.free:
            add("fixed-orientation", f"edge {e.label}", "corner edges carry the orbit orientation and must be fixed")

    for rid, n in Counter(s.id for s in p.surfaces).items():
        if n > 1:
            add("duplicate-label", f"surface {rid}", f"declared {n} times")
    for hid, n in Counter(h.id for h in p.handles).items():
        if n > 1:
            add("duplicate-label", f"handle {hid}", f"declared {n} times")
    for s in p.surfaces:
        if not s.boundary_words and s.genus_signed == 0:
            add("empty-region", f"surface {s.id}", "genus-0 region without boundary")

    unknown = False
    for where, w in p.all_words():
        for lt in w:
            if lt.label not in edge_idx:
                add("unknown-edge", where, f"letter {lt.label} names no edge")
                unknown = True
    if not unknown:
        for where, w in p.all_words():
            if not _walk_closed(p, w):
                add("open-path", where, f"word '{w}' is not a closed edge path")

    occ = p.occurrences()
    for e in p.edges:
        n = occ.get(e.label, 0)
        if n < 2:
            add("edge-occurrence", f"edge {e.label}",
                f"edge occurrence ≠ 2: appears {n} time(s) in boundary words, needs at least 2")

    regions = set(r.id for r in p.surfaces)
    for h in p.handles:
        subj = f"handle {h.id}"
        top = 3 if h.kind is HandleKind.SIMPLE else 2
        if not 0 <= h.index <= top:
            add("handle-index", subj, f"{h.kind.value} handle index {h.index} outside 0..{top}")
        if h.height is not None and h.height < 0:
            add("handle-height", subj, f"negative height {h.height}")
        if h.is_round_one and not h.partitioned:
            add("handle-partition", subj, "round 1-handles need incoming and outgoing region sets")
        if h.partitioned:
            if not h.is_round_one:
                add("handle-partition", subj, "only round 1-handles are split into incoming/outgoing")
            if h.regions:
                add("handle-partition", subj, "give either regions or in/out sets, not both")
            both = (h.incoming or frozenset()) & (h.outgoing or frozenset())
            for r in sorted(both):
                add("handle-partition", subj, f"region {r} is both incoming and outgoing")
        for r in sorted(h.all_regions | h.regions):
            if r not in regions:
                add("unknown-region", subj, f"region {r} does not exist")
    for r, owners in p.handles_of_region().items():
        if len({hid for hid, _ in owners}) > 2:
            add("region-overuse", f"surface {r}", f"belongs to {len(owners)} handle boundaries (max 2)")

    handles = p._handle_index
    for hid in p.chosen_cycles:
        h = handles.get(hid)
        if h is None:
            add("unknown-handle", f"chosen cycle {hid}", "no such handle")
        elif h.kind is not HandleKind.ROUND:
            add("chosen-not-round", f"chosen cycle {hid}", "chosen cycles belong to round handles")

    out.extend(_validate_tau(p, handles, regions))
    return out


def _round(handles, hid, index=None):
    h = handles.get(hid)
    return h is not None and h.kind is HandleKind.ROUND and (index is None or h.index == index)


def _validate_tau(p, handles, regions) -> list[Violation]:
    out = []
    add = lambda code, subj, msg: out.append(Violation(code, subj, msg))
    t = p.tau
    for r in t.case1:
        subj = f"case1 {r.handle0} {r.handle2}"
        if not _round(handles, r.handle0, 0):
            add("tau-handle", subj, f"{r.handle0} is not a round 0-handle")
        if not _round(handles, r.handle2, 2):
            add("tau-handle", subj, f"{r.handle2} is not a round 2-handle")
    for hid, rec in t.case2.items():
        subj = f"case2 {hid}"
        if not _round(handles, hid):
            add("tau-handle", subj, f"{hid} is not a round handle")
        if rec.omega is not None:
            k, l = rec.omega
            if l == 0 or not 0 <= k <= abs(l):
                add("tau-omega", subj, f"omega pair ({k}, {l}) needs l != 0 and 0 <= k <= |l|")
    for r in t.case3:
        if not _round(handles, r.handle):
            add("tau-handle", f"case3 {r.handle}", f"{r.handle} is not a round handle")
    g = t.case2_graph
    if g is None:
        if t.case2_framing:
            add("tau-graph", "case2L", "framing given without a graph")
        return out
    if set(t.case2_framing) != set(g.edges):
        add("tau-graph", "case2L", "framing domain differs from the edge set")
    owners = p.handles_of_region()
    for v, role in g.vertices.items():
        h = handles.get(v)
        if not _round(handles, v):
            add("tau-graph", f"case2L vertex {v}", "vertices of L are round handles")
            continue
        if h.index == 0 and role is not Role.SOURCE:
            add("tau-graph", f"case2L vertex {v}", "round 0-handles are sources of L")
        if h.index == 2 and role is not Role.SINK:
            add("tau-graph", f"case2L vertex {v}", "round 2-handles are sinks of L")
    for e, (a, b) in g.edges.items():
        if e not in regions:
            add("tau-graph", f"case2L edge {e}", "edges of L are regions")
            continue
        holders = {hid for hid, _ in owners.get(e, ())}
        if not {a, b} <= holders:
            add("tau-graph", f"case2L edge {e}", f"region is not shared by handles {a} and {b}")
    return out


def _check_bijective(mapping: Mapping[str, str], universe: Iterable[str], what: str) -> None:
    universe = set(universe)
    stray = set(mapping) - universe
    if stray:
        raise ValueError(f"{what} map names unknown labels {sorted(stray)}")
    images = [mapping.get(x, x) for x in universe]
    if len(set(images)) != len(images):
        raise ValueError(f"{what} map is not injective")


def relabel(
    p: FlowPresentation,
    perm: Mapping[str, str] | None = None,
    flips: Iterable[str] = (),
    *,
    regions: Mapping[str, str] | None = None,
    handles: Mapping[str, str] | None = None,
) -> FlowPresentation:
    """Rename vertex/edge labels (``perm``), regions and handles; reverse ``flips``.

    Missing keys map to themselves.  Flipping reverses the edge and negates
    every occurrence of its letter.  Only free edges may be flipped.
    """
    perm = dict(perm or {})
    regions = dict(regions or {})
    handles = dict(handles or {})
    flips = frozenset(flips)
    edge_idx = p._edge_index
    vmap = {v: perm[v] for v in p.vertices if v in perm}
    emap = {e: perm[e] for e in edge_idx if e in perm}
    stray = set(perm) - set(vmap) - set(emap)
    if stray:
        raise ValueError(f"relabel names unknown labels {sorted(stray)}")
    _check_bijective(vmap, p.vertices, "vertex")
    _check_bijective(emap, edge_idx, "edge")
    _check_bijective(regions, [s.id for s in p.surfaces], "region")
    _check_bijective(handles, [h.id for h in p.handles], "handle")
    for f in flips:
        if f not in edge_idx:
            raise ValueError(f"cannot flip unknown edge {f}")
        if not edge_idx[f].free:
            raise ValueError(f"cannot flip fixed-orientation edge {f}")

    V = lambda v: vmap.get(v, v)
    R = lambda r: regions.get(r, r)
    H = lambda h: handles.get(h, h)
    W = lambda w: w.translate(emap, flips)

    edges = []
    for e in p.edges:
        t, h = (e.head, e.tail) if e.label in flips else (e.tail, e.head)
        edges.append(replace(e, label=emap.get(e.label, e.label), tail=V(t), head=V(h)))
    surfaces = [
        SurfaceRegion(R(s.id), s.genus_signed, tuple(W(w) for w in s.boundary_words))
        for s in p.surfaces
    ]
    hs = []
    for h in p.handles:
        hs.append(
            replace(
                h,
                id=H(h.id),
                regions=frozenset(R(r) for r in h.regions),
                incoming=None if h.incoming is None else frozenset(R(r) for r in h.incoming),
                outgoing=None if h.outgoing is None else frozenset(R(r) for r in h.outgoing),
            )
        )
    t = p.tau
    tau = TauInvariant(
        case1=[Case1Record(H(r.handle0), H(r.handle2), r.alpha, r.beta) for r in t.case1],
        case2={H(h): rec for h, rec in t.case2.items()},
        case2_graph=None if t.case2_graph is None else t.case2_graph.relabel(
            {v: H(v) for v in t.case2_graph.vertices}, {e: R(e) for e in t.case2_graph.edges}
        ),
        case2_framing={R(e): v for e, v in t.case2_framing.items()},
        case3=[Case3Record(H(r.handle), W(r.cycle), r.alpha) for r in t.case3],
    )
    return FlowPresentation(
        vertices=frozenset(V(v) for v in p.vertices),
        edges=tuple(edges),
        surfaces=tuple(surfaces),
        handles=tuple(hs),
        lower_pairs=tuple((W(a), W(b)) for a, b in p.lower_pairs),
        upper_pairs=tuple((W(a), W(b)) for a, b in p.upper_pairs),
        chosen_cycles={H(h): W(w) for h, w in p.chosen_cycles.items()},
        tau=tau,
        name=p.name,
    )
