"""Enumeration of small connected MS-graphs up to isomorphism, plus framing helpers."""

from __future__ import annotations

import itertools

from ms3.framed import INF, MSGraph


def _roles_ok(n, edges):
    indeg = [0] * n
    outdeg = [0] * n
    for t, h in edges:
        outdeg[t] += 1
        indeg[h] += 1
    # every edge needs a source tail or a sink head
    return all(indeg[t] == 0 or outdeg[h] == 0 for t, h in edges)


def _connected(n, edges):
    seen = {0}
    stack = [0]
    adj = {v: set() for v in range(n)}
    for t, h in edges:
        adj[t].add(h)
        adj[h].add(t)
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _canonical(n, edges):
    return min(
        tuple(sorted((p[t], p[h]) for t, h in edges)) for p in itertools.permutations(range(n))
    )


def connected_msgraphs(max_edges: int) -> list[MSGraph]:
    """Every connected MS-graph with 1..max_edges edges, one per isomorphism class.

    Parallel edges are allowed; loops are not (a loop endpoint is neither a
    source nor a sink).
    """
    out = []
    for m in range(1, max_edges + 1):
        for n in range(2, m + 2):
            pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
            seen = set()
            for edges in itertools.combinations_with_replacement(pairs, m):
                used = {v for e in edges for v in e}
                if len(used) != n or not _roles_ok(n, edges) or not _connected(n, edges):
                    continue
                key = _canonical(n, edges)
                if key in seen:
                    continue
                seen.add(key)
                out.append(
                    MSGraph.from_edges({f"e{i + 1}": (f"v{t}", f"v{h}") for i, (t, h) in enumerate(key)})
                )
    return out


def framings_in_box(g: MSGraph, infinite, lo: int, hi: int):
    """All framings with the given infinite edges and other values in ``lo..hi``."""
    finite = [e for e in g.edges if e not in infinite]
    for values in itertools.product(range(lo, hi + 1), repeat=len(finite)):
        f = dict.fromkeys(infinite, INF)
        f.update(zip(finite, values))
        yield finite, values, f


def infinite_sets(g: MSGraph, max_size: int = 2):
    edges = list(g.edges)
    for k in range(max_size + 1):
        yield from (frozenset(c) for c in itertools.combinations(edges, k))
