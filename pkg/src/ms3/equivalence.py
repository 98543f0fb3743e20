"""Deciding topological equivalence of two flow presentations.

Two presentations are equivalent when some :class:`Isomorphism` maps the
graph, regions and handle boundaries of one onto the other, keeping edge
kinds, the orientations of fixed edges, the region lists (SLW), the orbit
pairings, chosen cycles and the tau-invariant.  :func:`check_isomorphism`
verifies a given candidate; :func:`find_equivalence` searches for one.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import ValidationError
from .framed import framings_equivalent, classify
from .model import FlowPresentation, HandleRecord, TauInvariant, validate_presentation
from .words import CyclicWord, canonical_form, lists_equivalent, rotate_equal, slw_bijections

__all__ = [
    "Isomorphism",
    "relabel_isomorphism",
    "tau_equivalent",
    "isomorphism_failure",
    "check_isomorphism",
    "find_equivalence",
    "explain_inequivalence",
    "global_signature",
]

# order in which criteria are checked and reported
CRITERIA = (
    "bijection",
    "orientation",
    "incidence",
    "edge kinds",
    "region lists",
    "handles",
    "lower pairs",
    "upper pairs",
    "chosen cycles",
    "tau",
)


@dataclass(frozen=True)
class Isomorphism:
    """Label bijections between two presentations.

    Letters of edges in ``flips`` have their powers negated under translation;
    only free edges may be flipped.
    """

    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]
    flips: frozenset[str] = frozenset()
    region_map: Mapping[str, str] = field(default_factory=dict)
    handle_map: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "flips", frozenset(self.flips))
        for attr in ("vertex_map", "edge_map", "region_map", "handle_map"):
            object.__setattr__(self, attr, dict(sorted(getattr(self, attr).items())))

    @classmethod
    def identity(cls, p: FlowPresentation) -> "Isomorphism":
        return cls(
            {v: v for v in p.vertices},
            {e.label: e.label for e in p.edges},
            frozenset(),
            {s.id: s.id for s in p.surfaces},
            {h.id: h.id for h in p.handles},
        )

    def inverse(self) -> "Isomorphism":
        inv = lambda m: {b: a for a, b in m.items()}
        return Isomorphism(
            inv(self.vertex_map),
            inv(self.edge_map),
            frozenset(self.edge_map[f] for f in self.flips),
            inv(self.region_map),
            inv(self.handle_map),
        )

    def word(self, w: CyclicWord) -> CyclicWord:
        return w.translate(self.edge_map, self.flips)

    def lines(self) -> list[str]:
        """Human-readable label map, one entry per line."""
        out = [f"vertex {a} -> {b}" for a, b in self.vertex_map.items()]
        out += [
            f"edge {a} -> {b}" + (" (reversed)" if a in self.flips else "")
            for a, b in self.edge_map.items()
        ]
        out += [f"region {a} -> {b}" for a, b in self.region_map.items()]
        out += [f"handle {a} -> {b}" for a, b in self.handle_map.items()]
        return out


def relabel_isomorphism(p, perm=None, flips=(), *, regions=None, handles=None) -> Isomorphism:
    """The isomorphism ``p -> relabel(p, perm, flips, ...)``."""
    perm = dict(perm or {})
    regions = dict(regions or {})
    handles = dict(handles or {})
    return Isomorphism(
        {v: perm.get(v, v) for v in p.vertices},
        {e.label: perm.get(e.label, e.label) for e in p.edges},
        frozenset(flips),
        {s.id: regions.get(s.id, s.id) for s in p.surfaces},
        {h.id: handles.get(h.id, h.id) for h in p.handles},
    )


def _need(mapping, key, what):
    try:
        return mapping[key]
    except KeyError:
        raise ValueError(f"isomorphism does not cover {what} {key}") from None


def _case3_key(handle, cycle, alpha):
    # a cycle read backwards meets the chosen cycle with the opposite sign
    c = canonical_form(cycle)
    return (handle, c.letters, alpha if rotate_equal(cycle, c) else -alpha)


def _tau_failure(t1: TauInvariant, t2: TauInvariant, iso: Isomorphism) -> str | None:
    H = lambda h: _need(iso.handle_map, h, "handle")
    R = lambda r: _need(iso.region_map, r, "region")
    c1 = Counter((H(r.handle0), H(r.handle2), r.alpha, r.beta) for r in t1.case1)
    if c1 != Counter(tuple(r) for r in t2.case1):
        return "tau case 1 numbers differ"
    if {H(h): rec for h, rec in t1.case2.items()} != dict(t2.case2):
        return "tau case 2 meridian/omega pairs differ"
    g1, g2 = t1.case2_graph, t2.case2_graph
    if (g1 is None) != (g2 is None):
        return "tau case 2 graph present on one side only"
    if g1 is not None:
        moved = g1.relabel({v: H(v) for v in g1.vertices}, {e: R(e) for e in g1.edges})
        if moved != g2:
            return "tau case 2 graphs do not correspond"
        mu = {R(e): v for e, v in t1.case2_framing.items()}
        if not framings_equivalent(g2, mu, t2.case2_framing):
            return "tau case 2 framings are not equivalent"
    k1 = Counter(_case3_key(H(r.handle), iso.word(r.cycle), r.alpha) for r in t1.case3)
    k2 = Counter(_case3_key(r.handle, r.cycle, r.alpha) for r in t2.case3)
    if k1 != k2:
        return "tau case 3 cycle numbers differ"
    return None


def tau_equivalent(t1: TauInvariant, t2: TauInvariant, iso: Isomorphism) -> bool:
    """Compare tau-invariants through ``iso``.

    Case 1 and case 2 numbers must match exactly, the framed graphs must
    correspond with equivalent framings, and case 3 cycle numbers must match
    per cycle (the beta map plays no role there).  Raises ``ValueError`` when
    ``iso`` misses a referenced handle or region.
    """
    return _tau_failure(t1, t2, iso) is None


def _is_bijection(m: Mapping, src, dst) -> bool:
    return set(m) == set(src) and sorted(m.values()) == sorted(dst)


def _pairs_match(pairs1, pairs2, iso) -> bool:
    # pairs are unordered; each curve keeps its orientation
    remaining = list(pairs2)
    for a, b in pairs1:
        ta, tb = iso.word(a), iso.word(b)
        for i, (c, d) in enumerate(remaining):
            if (rotate_equal(ta, c) and rotate_equal(tb, d)) or (rotate_equal(ta, d) and rotate_equal(tb, c)):
                del remaining[i]
                break
        else:
            return False
    return not remaining


def _handle_image_ok(h1: HandleRecord, h2: HandleRecord, rmap) -> bool:
    if (h1.kind, h1.index, h1.height, h1.partitioned) != (h2.kind, h2.index, h2.height, h2.partitioned):
        return False
    img = lambda regs: frozenset(rmap[r] for r in regs)
    if h1.partitioned:
        return img(h1.incoming or ()) == (h2.incoming or frozenset()) and img(h1.outgoing or ()) == (
            h2.outgoing or frozenset()
        )
    return img(h1.regions) == h2.regions


def isomorphism_failure(p1: FlowPresentation, p2: FlowPresentation, iso: Isomorphism) -> str | None:
    """The first criterion ``iso`` violates, or ``None`` when it is an isomorphism."""
    e1, e2 = p1._edge_index, p2._edge_index
    if not (
        _is_bijection(iso.vertex_map, p1.vertices, p2.vertices)
        and _is_bijection(iso.edge_map, e1, e2)
        and _is_bijection(iso.region_map, p1._region_index, p2._region_index)
        and _is_bijection(iso.handle_map, p1._handle_index, p2._handle_index)
    ):
        return "bijection: label maps are not bijections between the presentations"
    for f in iso.flips:
        if f not in e1 or not e1[f].free:
            return f"orientation: edge {f} has a fixed orientation and cannot be reversed"
    for e in p1.edges:
        tgt = e2[iso.edge_map[e.label]]
        t, h = (e.head, e.tail) if e.label in iso.flips else (e.tail, e.head)
        if (iso.vertex_map[t], iso.vertex_map[h]) != (tgt.tail, tgt.head):
            return f"incidence: edge {e.label} does not land on {tgt.label}'s endpoints"
        if (e.kind, e.orientation) != (tgt.kind, tgt.orientation):
            return f"edge kinds: {e.label} ({e.kind.value}, {e.orientation.value}) vs {tgt.label}"
    r2 = p2._region_index
    for s in p1.surfaces:
        if not lists_equivalent(s, r2[iso.region_map[s.id]], iso):
            return f"region lists: {s.id} does not match {iso.region_map[s.id]}"
    h2 = p2._handle_index
    for h in p1.handles:
        if not _handle_image_ok(h, h2[iso.handle_map[h.id]], iso.region_map):
            return f"handles: {h.id} does not match {iso.handle_map[h.id]}"
    if not _pairs_match(p1.lower_pairs, p2.lower_pairs, iso):
        return "lower pairs: pairings of lower curves differ"
    if not _pairs_match(p1.upper_pairs, p2.upper_pairs, iso):
        return "upper pairs: pairings of upper curves differ"
    c2 = p2.chosen_cycles
    if len(p1.chosen_cycles) != len(c2):
        return "chosen cycles: different number of chosen cycles"
    for h, w in p1.chosen_cycles.items():
        tgt = c2.get(iso.handle_map[h])
        if tgt is None or not rotate_equal(iso.word(w), tgt):
            return f"chosen cycles: cycle of {h} is not carried to the chosen cycle of {iso.handle_map[h]}"
    why = _tau_failure(p1.tau, p2.tau, iso)
    if why:
        return f"tau: {why}"
    return None


def check_isomorphism(p1: FlowPresentation, p2: FlowPresentation, iso: Isomorphism) -> bool:
    return isomorphism_failure(p1, p2, iso) is None


# --- search -----------------------------------------------------------------


def _degrees(p: FlowPresentation) -> Counter:
    deg: Counter = Counter()
    for e in p.edges:
        deg[e.tail] += 1
        deg[e.head] += 1
    return deg


def _edge_signatures(p: FlowPresentation) -> dict[str, tuple]:
    """Iso-invariant local data of each edge (flip-invariant for free edges)."""
    deg = _degrees(p)
    regions_of: dict[str, list] = {e.label: [] for e in p.edges}
    for s in p.surfaces:
        shape = (s.genus_signed, tuple(sorted(len(w) for w in s.boundary_words)))
        for w in s.boundary_words:
            for lt in w:
                regions_of[lt.label].append((shape, len(w)))
    others: Counter = Counter()
    for where, w in p.all_words():
        if not where.startswith("surface"):
            for lt in w:
                others[(lt.label, where.split()[0])] += 1
    sig = {}
    for e in p.edges:
        ends = (deg[e.tail], deg[e.head])
        if e.free:
            ends = tuple(sorted(ends))
        extra = tuple(sorted((k[1], n) for k, n in others.items() if k[0] == e.label))
        sig[e.label] = (
            e.kind.value,
            e.orientation.value,
            e.is_loop,
            ends,
            tuple(sorted(regions_of[e.label])),
            extra,
        )
    return sig


def global_signature(p: FlowPresentation) -> dict:
    """Counts and multisets that any isomorphism must preserve."""
    deg = _degrees(p)
    t = p.tau
    g = t.case2_graph
    return {
        "vertices": (len(p.vertices), sum(1 for v in p.vertices if not deg[v])),
        "edges": sorted(Counter(_edge_signatures(p).values()).items(), key=repr),
        "regions": sorted(
            (s.genus_signed, tuple(sorted(len(w) for w in s.boundary_words))) for s in p.surfaces
        ),
        "handles": sorted(
            (h.kind.value, h.index, -1 if h.height is None else h.height,
             (len(h.incoming or ()), len(h.outgoing or ())) if h.partitioned else len(h.regions))
            for h in p.handles
        ),
        "edge kinds": sorted(Counter((e.kind.value, e.orientation.value) for e in p.edges).items()),
        "lower pairs": len(p.lower_pairs),
        "upper pairs": len(p.upper_pairs),
        "chosen": sorted(len(w) for w in p.chosen_cycles.values()),
        "tau case 1": sorted((r.alpha, r.beta) for r in t.case1),
        "tau case 2": sorted((t.case2.values()), key=repr),
        "tau case 2 graph": None if g is None else (
            sorted(r.value for r in g.vertices.values()),
            len(g.edges),
            sorted(int(c.type) for c in classify(g)),
        ),
        "tau case 3": sorted((abs(r.alpha), len(r.cycle)) for r in t.case3),
    }


def _edge_maps(p1: FlowPresentation, p2: FlowPresentation) -> Iterator[tuple[dict, dict, frozenset]]:
    """Backtrack over edge assignments consistent with incidence and local signatures."""
    s1, s2 = _edge_signatures(p1), _edge_signatures(p2)
    by_sig: dict = {}
    for lb in sorted(s2):
        by_sig.setdefault(s2[lb], []).append(lb)
    cands = {lb: by_sig.get(s1[lb], []) for lb in s1}
    if any(not c for c in cands.values()):
        return
    e1, e2 = p1._edge_index, p2._edge_index
    # rare signatures first; ties broken by label for determinism
    order = sorted(cands, key=lambda lb: (len(cands[lb]), lb))
    deg1, deg2 = _degrees(p1), _degrees(p2)
    iso1 = sorted(v for v in p1.vertices if not deg1[v])
    iso2 = sorted(v for v in p2.vertices if not deg2[v])

    vmap: dict = {}
    vused: set = set()
    emap: dict = {}
    eused: set = set()
    flips: set = set()

    def bind(a, b, undo):
        if a in vmap:
            return vmap[a] == b
        if b in vused:
            return False
        vmap[a] = b
        vused.add(b)
        undo.append(a)
        return True

    def rec(i):
        if i == len(order):
            full = dict(vmap)
            full.update(zip(iso1, iso2))
            yield full, dict(emap), frozenset(flips)
            return
        lb = order[i]
        e = e1[lb]
        for tgt in cands[lb]:
            if tgt in eused:
                continue
            f = e2[tgt]
            for flip in ((False, True) if e.free else (False,)):
                t, h = (e.head, e.tail) if flip else (e.tail, e.head)
                undo: list = []
                if bind(t, f.tail, undo) and bind(h, f.head, undo):
                    emap[lb] = tgt
                    eused.add(tgt)
                    if flip:
                        flips.add(lb)
                    yield from rec(i + 1)
                    flips.discard(lb)
                    eused.discard(tgt)
                    del emap[lb]
                for a in undo:
                    vused.discard(vmap.pop(a))

    yield from rec(0)


def _handle_profile(p: FlowPresentation) -> dict[str, tuple]:
    owners = p.handles_of_region()
    idx = p._handle_index
    return {
        r: tuple(sorted(
            (idx[h].kind.value, idx[h].index, -1 if idx[h].height is None else idx[h].height, side)
            for h, side in hs
        ))
        for r, hs in owners.items()
    }


def _handle_maps(p1, p2, rmap) -> Iterator[dict]:
    hs1 = list(p1.handles)
    hs2 = list(p2.handles)
    cands = [[h2.id for h2 in hs2 if _handle_image_ok(h1, h2, rmap)] for h1 in hs1]
    used: set = set()
    acc: dict = {}

    def rec(i):
        if i == len(hs1):
            yield dict(acc)
            return
        for c in cands[i]:
            if c not in used:
                used.add(c)
                acc[hs1[i].id] = c
                yield from rec(i + 1)
                used.discard(c)
                del acc[hs1[i].id]

    yield from rec(0)


def _candidates(p1, p2) -> Iterator[Isomorphism]:
    prof1, prof2 = _handle_profile(p1), _handle_profile(p2)
    for vmap, emap, flips in _edge_maps(p1, p2):
        partial = Isomorphism(vmap, emap, flips)
        keys = (lambda r: prof1[r.id], lambda r: prof2[r.id])
        for rmap in slw_bijections(p1.surfaces, p2.surfaces, partial, extra_keys=keys):
            for hmap in _handle_maps(p1, p2, rmap):
                yield Isomorphism(vmap, emap, flips, rmap, hmap)


def _require_valid(p: FlowPresentation, which: str) -> None:
    report = validate_presentation(p)
    if report:
        raise ValidationError(report)


def find_equivalence(p1: FlowPresentation, p2: FlowPresentation) -> Isomorphism | None:
    """Search for an isomorphism of distinguishing presentations; ``None`` if there is none.

    Both inputs must validate and must present minimal diagrams; minimality is
    the caller's contract and is not checked.
    """
    _require_valid(p1, "first")
    _require_valid(p2, "second")
    if global_signature(p1) != global_signature(p2):
        return None
    for iso in _candidates(p1, p2):
        if check_isomorphism(p1, p2, iso):
            return iso
    return None


# which criterion a global-signature mismatch violates
_SIGNATURE_CRITERION = {
    "vertices": "bijection",
    "edges": "incidence",
    "edge kinds": "edge kinds",
    "regions": "region lists",
    "handles": "handles",
    "lower pairs": "lower pairs",
    "upper pairs": "upper pairs",
    "chosen": "chosen cycles",
    "tau case 1": "tau",
    "tau case 2": "tau",
    "tau case 2 graph": "tau",
    "tau case 3": "tau",
}


def explain_inequivalence(p1: FlowPresentation, p2: FlowPresentation) -> str | None:
    """``None`` if the presentations are equivalent, else the first failing criterion.

    Signature mismatches are reported by name; otherwise the reported
    criterion is the one reached latest among all candidate isomorphisms.
    """
    _require_valid(p1, "first")
    _require_valid(p2, "second")
    s1, s2 = global_signature(p1), global_signature(p2)
    for k in s1:
        if s1[k] != s2[k]:
            return f"{_SIGNATURE_CRITERION.get(k, k)}: {k} invariants differ"
    best = None
    best_rank = -1
    found_any = False
    for iso in _candidates(p1, p2):
        found_any = True
        why = isomorphism_failure(p1, p2, iso)
        if why is None:
            return None
        head = why.split(":", 1)[0]
        rank = CRITERIA.index(head) if head in CRITERIA else len(CRITERIA)
        if rank > best_rank:
            best, best_rank = why, rank
    if not found_any:
        return "graph: no edge/region/handle correspondence preserves incidence, region lists and handles"
    return best
