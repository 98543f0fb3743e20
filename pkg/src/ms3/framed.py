"""Framed MS-graphs and the equivalence of their framings.

An MS-graph is an oriented graph in which every edge has a source or a sink
among its endpoints; vertices that are neither are saddles.  A framing assigns
an integer or infinity to each edge.  Two framings are equivalent when one is
reachable from the other by

* operation 1: add ``k`` to two *sequential* edges, i.e. the head of one is
  the tail of the other (that common vertex is necessarily a saddle);
* operation 2: add ``k`` to one edge and ``-k`` to an incident edge that is
  not sequential with it.

Infinity absorbs additions.  :func:`framings_equivalent` decides equivalence
from per-component invariants; :func:`oracle_equivalent` and
:func:`reachability_classes` decide it by brute-force search and exist to
cross-check the invariants.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple

from .errors import InvalidGraph, InvalidOperation

INF = math.inf

__all__ = [
    "INF",
    "Role",
    "FrameType",
    "MSGraph",
    "Component",
    "Move",
    "classify",
    "apply_operation",
    "framings_equivalent",
    "framing_invariants",
    "oracle_equivalent",
    "reachability_classes",
    "normalize_type1",
    "is_infinite",
    "check_framing",
]


class Role(str, enum.Enum):
    SOURCE = "source"
    SINK = "sink"
    SADDLE = "saddle"


class FrameType(enum.IntEnum):
    TYPE1 = 1  # no saddles
    TYPE2 = 2  # some cycle passes an odd number of saddles
    TYPE3 = 3  # saddles, all cycles even: two groups of pieces


def is_infinite(value) -> bool:
    return isinstance(value, float) and math.isinf(value)


@dataclass(frozen=True)
class MSGraph:
    """Oriented multigraph with vertex roles.

    ``vertices`` maps vertex id to :class:`Role`; ``edges`` maps edge id to
    ``(tail, head)``.  Roles must agree with the orientation: a source has no
    incoming edge, a sink no outgoing edge, and a saddle has both.
    """

    vertices: Mapping[str, Role]
    edges: Mapping[str, tuple[str, str]]

    def __post_init__(self):
        verts = {str(v): Role(r) for v, r in self.vertices.items()}
        edges = {str(e): (str(t), str(h)) for e, (t, h) in self.edges.items()}
        object.__setattr__(self, "vertices", dict(sorted(verts.items())))
        object.__setattr__(self, "edges", dict(sorted(edges.items())))
        problems = self.problems()
        if problems:
            raise InvalidGraph("; ".join(problems))

    def __hash__(self):
        return hash((tuple(self.vertices.items()), tuple(self.edges.items())))

    @classmethod
    def from_edges(cls, edges: Mapping[str, tuple[str, str]], isolated: Iterable[str] = ()) -> "MSGraph":
        """Build a graph deriving every role from in/out degrees."""
        indeg: dict[str, int] = {}
        outdeg: dict[str, int] = {}
        for t, h in edges.values():
            outdeg[t] = outdeg.get(t, 0) + 1
            indeg[h] = indeg.get(h, 0) + 1
            indeg.setdefault(t, 0)
            outdeg.setdefault(h, 0)
        roles = {v: Role.SOURCE for v in isolated}
        for v in indeg:
            if indeg[v] == 0:
                roles[v] = Role.SOURCE
            elif outdeg[v] == 0:
                roles[v] = Role.SINK
            else:
                roles[v] = Role.SADDLE
        return cls(roles, edges)

    def problems(self) -> list[str]:
        out = []
        indeg = {v: 0 for v in self.vertices}
        outdeg = {v: 0 for v in self.vertices}
        for e, (t, h) in self.edges.items():
            missing = [v for v in (t, h) if v not in self.vertices]
            if missing:
                out.append(f"edge {e} references unknown vertex {missing[0]}")
                continue
            if t == h:
                out.append(f"edge {e} is a loop at {t}")
                continue
            if Role.SADDLE == self.vertices[t] and Role.SADDLE == self.vertices[h]:
                out.append(f"edge {e} joins two saddles; one end must be a source or sink")
            outdeg[t] += 1
            indeg[h] += 1
        for v, role in self.vertices.items():
            if role is Role.SOURCE and indeg[v]:
                out.append(f"source {v} has incoming edges")
            elif role is Role.SINK and outdeg[v]:
                out.append(f"sink {v} has outgoing edges")
            elif role is Role.SADDLE and not (indeg[v] and outdeg[v]):
                out.append(f"saddle {v} needs both incoming and outgoing edges")
        return out

    def saddles(self) -> list[str]:
        return [v for v, r in self.vertices.items() if r is Role.SADDLE]

    def sequential(self, e1: str, e2: str) -> bool:
        """Head of one edge is the tail of the other."""
        t1, h1 = self.edges[e1]
        t2, h2 = self.edges[e2]
        return e1 != e2 and (h1 == t2 or h2 == t1)

    def incident(self, e1: str, e2: str) -> bool:
        return e1 != e2 and bool(set(self.edges[e1]) & set(self.edges[e2]))

    @cached_property
    def adjacent_pairs(self) -> tuple[tuple[str, str, int], ...]:
        """All incident edge pairs with the operation (1 or 2) they admit."""
        return tuple(
            (a, b, 1 if self.sequential(a, b) else 2)
            for a, b in combinations(self.edges, 2)
            if self.incident(a, b)
        )

    def components(self) -> list[tuple[frozenset[str], frozenset[str]]]:
        """Connected components as ``(vertex set, edge set)``, sorted by least vertex."""
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, h in self.edges.values():
            rt, rh = find(t), find(h)
            if rt != rh:
                parent[max(rt, rh)] = min(rt, rh)
        verts: dict[str, set] = {}
        for v in self.vertices:
            verts.setdefault(find(v), set()).add(v)
        edges: dict[str, set] = {r: set() for r in verts}
        for e, (t, _) in self.edges.items():
            edges[find(t)].add(e)
        return [(frozenset(verts[r]), frozenset(edges[r])) for r in sorted(verts)]

    def relabel(self, vertex_map: Mapping[str, str], edge_map: Mapping[str, str]) -> "MSGraph":
        return MSGraph(
            {vertex_map.get(v, v): r for v, r in self.vertices.items()},
            {edge_map.get(e, e): (vertex_map.get(t, t), vertex_map.get(h, h)) for e, (t, h) in self.edges.items()},
        )


class Component(NamedTuple):
    vertices: frozenset
    edges: frozenset
    type: FrameType
    # edge id -> 1 or 2 for TYPE3 components, else None
    groups: Mapping[str, int] | None


def _pieces(g: MSGraph, edges: Iterable[str]) -> dict[str, tuple]:
    """Cut every saddle into an incoming half and an outgoing half.

    Returns edge -> piece key; a piece is a connected component of the cut graph.
    """
    def node(v, side):
        return (v, side) if g.vertices[v] is Role.SADDLE else (v, "")

    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    ends = {}
    for e in edges:
        t, h = g.edges[e]
        a, b = node(t, "out"), node(h, "in")
        ends[e] = a
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return {e: find(a) for e, a in ends.items()}


def _classify_component(g: MSGraph, verts: frozenset, edges: frozenset) -> Component:
    saddles = sorted(v for v in verts if g.vertices[v] is Role.SADDLE)
    if not saddles:
        return Component(verts, edges, FrameType.TYPE1, None)
    piece = _pieces(g, edges)
    piece_of_half: dict = {}
    for e in edges:
        t, h = g.edges[e]
        if g.vertices[t] is Role.SADDLE:
            piece_of_half[(t, "out")] = piece[e]
        if g.vertices[h] is Role.SADDLE:
            piece_of_half[(h, "in")] = piece[e]
    # auxiliary graph: pieces linked by saddles; 2-colour it
    links: dict = {}
    for s in saddles:
        a, b = piece_of_half[(s, "in")], piece_of_half[(s, "out")]
        if a == b:
            return Component(verts, edges, FrameType.TYPE2, None)
        links.setdefault(a, []).append(b)
        links.setdefault(b, []).append(a)
    colour: dict = {}
    for start in sorted(set(piece.values())):
        if start in colour:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in links.get(x, ()):
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    queue.append(y)
                elif colour[y] == colour[x]:
                    return Component(verts, edges, FrameType.TYPE2, None)
    # the group holding the least edge id is the first group
    first = colour[piece[min(edges)]]
    groups = {e: 1 if colour[piece[e]] == first else 2 for e in edges}
    return Component(verts, edges, FrameType.TYPE3, groups)


def classify(g: MSGraph) -> list[Component]:
    """Type of every connected component, with the group split for Type 3."""
    return [_classify_component(g, v, e) for v, e in g.components()]


def check_framing(g: MSGraph, f: Mapping[str, object]) -> dict:
    if set(f) != set(g.edges):
        missing = sorted(set(g.edges) - set(f))
        extra = sorted(set(f) - set(g.edges))
        raise InvalidGraph(f"framing domain mismatch: missing {missing}, unknown {extra}")
    out = {}
    for e, v in f.items():
        if is_infinite(v):
            out[e] = INF
        elif isinstance(v, bool) or not float(v).is_integer():
            raise InvalidGraph(f"framing of {e} must be an integer or inf, got {v!r}")
        else:
            out[e] = int(v)
    return out


class Move(NamedTuple):
    op: int
    first: str
    second: str
    k: int


def apply_operation(g: MSGraph, f: Mapping[str, object], move: Move) -> dict:
    """Apply operation 1 (``+k, +k``) or 2 (``+k, -k``) to a pair of incident edges."""
    op, a, b, k = move
    f = check_framing(g, f)
    for e in (a, b):
        if e not in g.edges:
            raise InvalidOperation(f"unknown edge {e}")
    if not g.incident(a, b):
        raise InvalidOperation(f"edges {a} and {b} are not incident")
    seq = g.sequential(a, b)
    if op == 1 and not seq:
        raise InvalidOperation(f"operation 1 needs sequential edges; {a}, {b} are not")
    if op == 2 and seq:
        raise InvalidOperation(f"operation 2 needs non-sequential edges; {a}, {b} are sequential")
    if op not in (1, 2):
        raise InvalidOperation(f"unknown operation {op}")
    out = dict(f)
    out[a] = f[a] + k if not is_infinite(f[a]) else INF
    out[b] = f[b] + (k if op == 1 else -k) if not is_infinite(f[b]) else INF
    return out


def framing_invariants(g: MSGraph, f: Mapping[str, object]) -> list[tuple]:
    """Per-component invariant that decides equivalence.

    Entries are ``("inf", edges)``, ``(1, total)``, ``(2, total % 2)`` or
    ``(3, group1 - group2)``.
    """
    f = check_framing(g, f)
    out = []
    for comp in _classification(g):
        inf_edges = frozenset(e for e in comp.edges if is_infinite(f[e]))
        if inf_edges:
            # both operations fix the infinite set, and with any infinite edge
            # present every finite edge can be moved freely along a path to it
            out.append(("inf", inf_edges))
        elif comp.type is FrameType.TYPE1:
            out.append((1, sum(f[e] for e in comp.edges)))
        elif comp.type is FrameType.TYPE2:
            out.append((2, sum(f[e] for e in comp.edges) % 2))
        else:
            diff = sum(f[e] if comp.groups[e] == 1 else -f[e] for e in comp.edges)
            out.append((3, diff))
    return out


_CLASS_CACHE: dict = {}


def _classification(g: MSGraph) -> list[Component]:
    key = hash(g)
    hit = _CLASS_CACHE.get(key)
    if hit is not None and hit[0] == g:
        return hit[1]
    comps = classify(g)
    if len(_CLASS_CACHE) > 4096:
        _CLASS_CACHE.clear()
    _CLASS_CACHE[key] = (g, comps)
    return comps


def framings_equivalent(g: MSGraph, f1: Mapping[str, object], f2: Mapping[str, object]) -> bool:
    """Decide equivalence of two framings of ``g`` component by component."""
    return framing_invariants(g, f1) == framing_invariants(g, f2)


def _neighbours(g: MSGraph, state: tuple, order: list[str], bound: int):
    index = {e: i for i, e in enumerate(order)}
    for a, b, op in g.adjacent_pairs:
        i, j = index[a], index[b]
        for k in (1, -1):
            new = list(state)
            if not is_infinite(new[i]):
                new[i] += k
            if not is_infinite(new[j]):
                new[j] += k if op == 1 else -k
            if all(is_infinite(x) or -bound <= x <= bound for x in (new[i], new[j])):
                yield tuple(new)


def oracle_equivalent(g: MSGraph, f1: Mapping[str, object], f2: Mapping[str, object], value_bound: int) -> bool:
    """Breadth-first search over unit operations with values clamped to ``±value_bound``."""
    f1 = check_framing(g, f1)
    f2 = check_framing(g, f2)
    order = list(g.edges)
    start = tuple(f1[e] for e in order)
    goal = tuple(f2[e] for e in order)
    if start == goal:
        return True
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for t in _neighbours(g, s, order, value_bound):
            if t == goal:
                return True
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return False


def reachability_classes(g: MSGraph, infinite: Iterable[str], value_bound: int):
    """Label every framing with the given infinite set by its reachability class.

    Same relation as :func:`oracle_equivalent` (unit operations, clamp to
    ``±value_bound``), computed for the whole box at once.  Returns
    ``(finite_edges, labels)`` where ``labels`` is an integer array indexed by
    ``value + value_bound`` along each finite edge.  Unit moves are
    reversible inside the box, so reachability is a connected-components problem.
    """
    import numpy as np
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    infinite = frozenset(infinite)
    finite = [e for e in g.edges if e not in infinite]
    side = 2 * value_bound + 1
    shape = (side,) * len(finite)
    n = side ** len(finite)
    if not finite:
        return finite, np.zeros((), dtype=np.int64)
    coords = np.indices(shape).reshape(len(finite), -1)
    flat = np.arange(n)
    pos = {e: i for i, e in enumerate(finite)}
    rows, cols = [], []
    for a, b, op in g.adjacent_pairs:
        delta = np.zeros(len(finite), dtype=np.int64)
        if a in pos:
            delta[pos[a]] = 1
        if b in pos:
            delta[pos[b]] = 1 if op == 1 else -1
        if not delta.any():
            continue
        moved = coords + delta[:, None]
        ok = np.all((moved >= 0) & (moved < side), axis=0)
        target = np.ravel_multi_index(moved[:, ok], shape)
        rows.append(flat[ok])
        cols.append(target)
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    adj = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
    _, labels = connected_components(adj, directed=False)
    return finite, labels.reshape(shape)


def normalize_type1(g: MSGraph, f: Mapping[str, object], keep: str | None = None):
    """Move all of a saddle-free framing onto one edge using operation 2.

    Returns ``(framing, moves)``: the framing is zero everywhere except on
    ``keep`` (default: least edge of each component), which carries the
    component total; replaying ``moves`` with :func:`apply_operation`
    reproduces it.
    """
    f = check_framing(g, f)
    if any(is_infinite(v) for v in f.values()):
        raise InvalidGraph("normalize_type1 needs a finite framing")
    moves: list[Move] = []
    cur = dict(f)
    for comp in _classification(g):
        if comp.type is not FrameType.TYPE1:
            raise InvalidGraph("normalize_type1 applies to graphs without saddles")
        if not comp.edges:
            continue
        root = keep if keep in comp.edges else min(comp.edges)
        # BFS tree on edges, adjacency through shared endpoints
        parent = {root: None}
        order = [root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in sorted(comp.edges):
                if y not in parent and g.incident(x, y):
                    parent[y] = x
                    order.append(y)
                    queue.append(y)
        for e in reversed(order[1:]):
            k = -cur[e]
            if k:
                mv = Move(2, e, parent[e], k)
                cur = apply_operation(g, cur, mv)
                moves.append(mv)
    return cur, moves
