"""Built-in presentations.

Two families of flows on the 3-sphere with one saddle closed orbit, a closed
orbit of index 0 and one of index 2 (no fixed points):

* ``trivial_orbit_flow(s0, s2)``: the saddle orbit has a trivial
  neighbourhood; the graph is four loops and the flows differ only by the
  signs of the intersections of ``b`` with the meridians of the round 0- and
  2-handles.
* ``twisted_orbit_flow(n)``: the saddle orbit has a twisted neighbourhood
  built from ``2n + 1`` half-twisted bands; the graph is two loops.

plus small synthetic fixtures that exercise each tau case and each type of
framed graph.
"""

from __future__ import annotations

from typing import Callable

from .framed import MSGraph, Role
from .model import (
    Case1Record,
    Case2Record,
    Case3Record,
    EdgeRecord,
    FlowPresentation,
    HandleRecord,
    SurfaceRegion,
    TauInvariant,
)
from .words import word

__all__ = ["trivial_orbit_flow", "twisted_orbit_flow", "builtin", "catalog_keys", "from_key"]


def _loops(*labels, kind="corner", orientation="fixed"):
    verts = [f"A{i + 1}" for i in range(len(labels))]
    edges = [EdgeRecord(lb, v, v, orientation, kind) for lb, v in zip(labels, verts)]
    return verts, edges


def _region(rid, genus, *words):
    return SurfaceRegion(rid, genus, tuple(word(w) for w in words))


def trivial_orbit_flow(s0: int, s2: int) -> FlowPresentation:
    """Flow whose saddle orbit has a trivial neighbourhood.

    ``s0`` and ``s2`` (each +1 or -1) are the algebraic intersection numbers
    of ``b`` with the meridians of the round 0-handle and round 2-handle;
    they are stored as the alpha and beta entries of the single case-1 record.
    """
    if s0 not in (1, -1) or s2 not in (1, -1):
        raise ValueError(f"signs must be +1 or -1, got ({s0}, {s2})")
    verts, edges = _loops("a", "b", "c", "d")
    surfaces = [
        _region("L1", 0, "a", "b^-1"),
        _region("L2", 0, "c", "d^-1"),
        _region("L3", 0, "a^-1", "b", "c^-1"),
        _region("L4", 0, "d"),
        _region("L5", 0, "a", "d^-1"),
        _region("L6", 0, "b", "c^-1"),
    ]
    handles = [
        HandleRecord("T0", "round", 0, regions={"L1", "L2", "L3", "L4"}),
        HandleRecord("T1", "round", 1, height=0, incoming={"L1", "L2"}, outgoing={"L5", "L6"}),
        HandleRecord("T2", "round", 2, regions={"L3", "L4", "L5", "L6"}),
    ]
    tau = TauInvariant(case1=[Case1Record("T0", "T2", s0, s2)])
    return FlowPresentation(
        verts, tuple(edges), tuple(surfaces), tuple(handles), tau=tau,
        name=f"trivial:{s0:+d}:{s2:+d}",
    )


def twisted_orbit_flow(n: int, framing_parity: int = 0) -> FlowPresentation:
    """Flow whose saddle orbit has a twisted neighbourhood of ``2n + 1`` half-twists.

    The framed graph of the annuli is a triangle (source, saddle, sink);
    ``framing_parity`` sets its total framing mod 2, which depends on orbit
    orientations not modelled here.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if framing_parity not in (0, 1):
        raise ValueError("framing_parity must be 0 or 1")
    verts, edges = _loops("a", "b")
    surfaces = [_region(f"L{i}", 0, "a", "b^-1") for i in (1, 2, 3)]
    h0, h1, h2 = "0-handle", "1-handle", "2-handle"
    handles = [
        HandleRecord(h0, "round", 0, regions={"L1", "L2"}),
        HandleRecord(h1, "round", 1, height=0, incoming={"L1"}, outgoing={"L3"}),
        HandleRecord(h2, "round", 2, regions={"L2", "L3"}),
    ]
    graph = MSGraph(
        {h0: Role.SOURCE, h1: Role.SADDLE, h2: Role.SINK},
        {"L1": (h0, h1), "L3": (h1, h2), "L2": (h0, h2)},
    )
    tau = TauInvariant(
        case2={
            h0: Case2Record(meridian=(2 * n + 1, 0), omega=(1, 2 * n + 1)),
            h1: Case2Record(omega=(1, 2)),
            h2: Case2Record(omega=(0, 1)),
        },
        case2_graph=graph,
        case2_framing={"L1": framing_parity, "L2": 0, "L3": 0},
    )
    suffix = f":{framing_parity}" if framing_parity else ""
    return FlowPresentation(
        verts, tuple(edges), tuple(surfaces), tuple(handles), tau=tau, name=f"twisted:{n}{suffix}"
    )


def _tau_case3_demo() -> FlowPresentation:
    # torus cut by a meridian x and a longitude y meeting once
    edges = (
        EdgeRecord("x", "P", "P", "free", "tau-curve"),
        EdgeRecord("y", "P", "P", "free", "tau-curve"),
    )
    surfaces = (_region("D", 0, "x y x^-1 y^-1"),)
    handles = (
        HandleRecord("V0", "round", 0, regions={"D"}),
        HandleRecord("V2", "round", 2, regions={"D"}),
    )
    tau = TauInvariant(case3=[Case3Record("V0", word("x"), 0), Case3Record("V0", word("y"), 1)])
    return FlowPresentation(
        {"P"}, edges, surfaces, handles, chosen_cycles={"V0": word("x")}, tau=tau,
        name="tau-case3-demo",
    )


def _type1_L() -> FlowPresentation:
    # two parallel annuli shared by a round 0-handle and a round 2-handle
    verts, edges = _loops("a", "b", kind="lower-curve")
    surfaces = (_region("R1", 0, "a", "b^-1"), _region("R2", 0, "a^-1", "b"))
    handles = (
        HandleRecord("H0", "round", 0, regions={"R1", "R2"}),
        HandleRecord("H2", "round", 2, regions={"R1", "R2"}),
    )
    graph = MSGraph({"H0": Role.SOURCE, "H2": Role.SINK}, {"R1": ("H0", "H2"), "R2": ("H0", "H2")})
    tau = TauInvariant(
        case2={"H0": Case2Record(meridian=(1, 0), omega=(1, 2))},
        case2_graph=graph,
        case2_framing={"R1": 1, "R2": 0},
    )
    return FlowPresentation(
        verts, tuple(edges), surfaces, handles, lower_pairs=((word("a"), word("b")),), tau=tau,
        name="type1-L",
    )


def _type2_L() -> FlowPresentation:
    p = twisted_orbit_flow(0, framing_parity=1)
    return FlowPresentation(
        p.vertices, p.edges, p.surfaces, p.handles, tau=p.tau, name="type2-L"
    )


def _type3_L() -> FlowPresentation:
    # round 0-handle -> round 1-handle -> round 2-handle through two annuli
    verts, edges = _loops("a", "b", kind="upper-curve")
    surfaces = (_region("R1", 0, "a", "b^-1"), _region("R2", 0, "a", "b^-1"))
    handles = (
        HandleRecord("H0", "round", 0, regions={"R1"}),
        HandleRecord("H1", "round", 1, height=0, incoming={"R1"}, outgoing={"R2"}),
        HandleRecord("H2", "round", 2, regions={"R2"}),
    )
    graph = MSGraph(
        {"H0": Role.SOURCE, "H1": Role.SADDLE, "H2": Role.SINK},
        {"R1": ("H0", "H1"), "R2": ("H1", "H2")},
    )
    tau = TauInvariant(
        case2={"H1": Case2Record(omega=(1, 2))},
        case2_graph=graph,
        case2_framing={"R1": 1, "R2": 0},
    )
    return FlowPresentation(
        verts, tuple(edges), surfaces, handles,
        upper_pairs=((word("a"), word("b")),),
        chosen_cycles={"H1": word("a")},
        tau=tau,
        name="type3-L",
    )


def _theta_demo() -> FlowPresentation:
    # sphere cut by a theta graph of three free arcs from P to Q
    edges = tuple(EdgeRecord(e, "P", "Q", "free", "upper-curve") for e in ("e1", "e2", "e3"))
    surfaces = (
        _region("D1", 0, "e1 e2^-1"),
        _region("D2", 0, "e2 e3^-1"),
        _region("D3", 0, "e3 e1^-1"),
    )
    handles = (HandleRecord("B0", "simple", 0, regions={"D1", "D2", "D3"}),)
    return FlowPresentation({"P", "Q"}, edges, surfaces, handles, name="theta-demo")


_BUILTINS: dict[str, Callable[[], FlowPresentation]] = {
    "tau-case3-demo": _tau_case3_demo,
    "type1-L": _type1_L,
    "type2-L": _type2_L,
    "type3-L": _type3_L,
    "theta-demo": _theta_demo,
}


def builtin(name: str) -> FlowPresentation:
    try:
        return _BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; known: {', '.join(sorted(_BUILTINS))}") from None


def catalog_keys(max_twist: int = 5) -> list[str]:
    keys = [f"trivial:{a:+d}:{b:+d}" for a in (1, -1) for b in (1, -1)]
    keys += [f"twisted:{n}" for n in range(max_twist + 1)]
    keys += sorted(_BUILTINS)
    return keys


def from_key(key: str) -> FlowPresentation:
    """Resolve ``trivial:<s0>:<s2>``, ``twisted:<n>[:<parity>]`` or a builtin name."""
    family, _, rest = key.partition(":")
    try:
        if family == "trivial":
            s0, s2 = rest.split(":")
            return trivial_orbit_flow(int(s0), int(s2))
        if family == "twisted":
            parts = rest.split(":")
            return twisted_orbit_flow(int(parts[0]), int(parts[1]) if len(parts) > 1 else 0)
    except ValueError as exc:
        raise KeyError(f"bad catalog key {key!r}: {exc}") from None
    return builtin(key)
