import random

import pytest

from ms3.errors import InvalidGraph, InvalidOperation
from ms3.framed import (
    INF,
    FrameType,
    Move,
    MSGraph,
    Role,
    apply_operation,
    classify,
    framing_invariants,
    framings_equivalent,
    normalize_type1,
    oracle_equivalent,
    reachability_classes,
)
from msgraphs import connected_msgraphs

PARALLEL = MSGraph.from_edges({"e1": ("s", "t"), "e2": ("s", "t")})
PATH = MSGraph.from_edges({"e1": ("s", "x"), "e2": ("x", "t")})
TRIANGLE = MSGraph.from_edges({"e1": ("s", "x"), "e2": ("x", "t"), "e3": ("s", "t")})


class TestGraph:
    def test_roles_derived(self):
        assert PATH.vertices == {"s": Role.SOURCE, "x": Role.SADDLE, "t": Role.SINK}

    def test_edge_between_saddles_rejected(self):
        with pytest.raises(InvalidGraph):
            MSGraph.from_edges({"e1": ("s", "x"), "e2": ("x", "y"), "e3": ("y", "t")})

    def test_declared_role_must_match(self):
        with pytest.raises(InvalidGraph):
            MSGraph({"s": Role.SINK, "t": Role.SINK}, {"e": ("s", "t")})

    def test_sequential_means_head_to_tail(self):
        assert PATH.sequential("e1", "e2")
        assert not TRIANGLE.sequential("e1", "e3")
        assert TRIANGLE.incident("e1", "e3")

    def test_components_split(self):
        g = MSGraph.from_edges({"a": ("s", "t"), "b": ("u", "w")})
        assert len(g.components()) == 2


class TestClassify:
    def test_type1(self):
        (c,) = classify(PARALLEL)
        assert c.type is FrameType.TYPE1

    def test_type2(self):
        (c,) = classify(TRIANGLE)
        assert c.type is FrameType.TYPE2

    def test_type3_groups(self):
        (c,) = classify(PATH)
        assert c.type is FrameType.TYPE3
        assert c.groups == {"e1": 1, "e2": 2}

    def test_three_valent_saddle_is_type3(self):
        g = MSGraph.from_edges({"e1": ("s1", "x"), "e2": ("s2", "x"), "e3": ("x", "t")})
        (c,) = classify(g)
        assert c.type is FrameType.TYPE3
        assert c.groups == {"e1": 1, "e2": 1, "e3": 2}

    def test_two_saddles_even_cycle_is_type3(self):
        # s -> x -> t and s -> y -> t: both in-halves meet s, both out-halves meet t
        g = MSGraph.from_edges({"a": ("s", "x"), "b": ("x", "t"), "c": ("s", "y"), "d": ("y", "t")})
        (c,) = classify(g)
        assert c.type is FrameType.TYPE3

    def test_saddle_whose_halves_touch_is_type2(self):
        g = MSGraph.from_edges({"a": ("s", "x"), "b": ("x", "t"), "c": ("s", "t")})
        assert classify(g)[0].type is FrameType.TYPE2


class TestOperations:
    def test_op1(self):
        assert apply_operation(PATH, {"e1": 1, "e2": 1}, Move(1, "e1", "e2", 3)) == {"e1": 4, "e2": 4}

    def test_op2(self):
        assert apply_operation(PARALLEL, {"e1": 2, "e2": 3}, Move(2, "e1", "e2", 2)) == {"e1": 4, "e2": 1}

    def test_op2_zero(self):
        assert apply_operation(PARALLEL, {"e1": 2, "e2": 3}, Move(2, "e1", "e2", 0)) == {"e1": 2, "e2": 3}

    def test_infinity_absorbs(self):
        got = apply_operation(PARALLEL, {"e1": INF, "e2": 3}, Move(2, "e1", "e2", 5))
        assert got == {"e1": INF, "e2": -2}

    def test_op1_needs_sequential(self):
        with pytest.raises(InvalidOperation):
            apply_operation(PARALLEL, {"e1": 0, "e2": 0}, Move(1, "e1", "e2", 1))

    def test_op2_needs_non_sequential(self):
        with pytest.raises(InvalidOperation):
            apply_operation(PATH, {"e1": 0, "e2": 0}, Move(2, "e1", "e2", 1))

    def test_non_incident(self):
        g = MSGraph.from_edges({"a": ("s", "t"), "b": ("u", "w")})
        with pytest.raises(InvalidOperation):
            apply_operation(g, {"a": 0, "b": 0}, Move(2, "a", "b", 1))

    def test_framing_domain(self):
        with pytest.raises(InvalidGraph):
            framings_equivalent(PATH, {"e1": 0}, {"e1": 0, "e2": 0})

    def test_non_integer_framing(self):
        with pytest.raises(InvalidGraph):
            framings_equivalent(PATH, {"e1": 0.5, "e2": 0}, {"e1": 0, "e2": 0})


class TestVerdicts:
    def test_sum_case(self):
        assert framings_equivalent(PARALLEL, {"e1": 2, "e2": 3}, {"e1": 0, "e2": 5})
        assert not framings_equivalent(PARALLEL, {"e1": 2, "e2": 3}, {"e1": 0, "e2": 4})

    def test_parity_case(self):
        assert framings_equivalent(TRIANGLE, {"e1": 3, "e2": 0, "e3": 0}, {"e1": 2, "e2": 2, "e3": 1})
        assert not framings_equivalent(TRIANGLE, {"e1": 3, "e2": 0, "e3": 0}, {"e1": 2, "e2": 2, "e3": 0})

    def test_difference_case(self):
        assert not framings_equivalent(PATH, {"e1": 1, "e2": 0}, {"e1": 0, "e2": 1})
        assert framings_equivalent(PATH, {"e1": 1, "e2": 0}, {"e1": 3, "e2": 2})

    def test_infinite_set_case(self):
        assert framings_equivalent(TRIANGLE, {"e1": INF, "e2": 0, "e3": 7}, {"e1": INF, "e2": 5, "e3": -1})
        assert not framings_equivalent(TRIANGLE, {"e1": INF, "e2": 0, "e3": 0}, {"e1": 0, "e2": INF, "e3": 0})
        assert not framings_equivalent(TRIANGLE, {"e1": INF, "e2": 0, "e3": 0}, {"e1": 0, "e2": 0, "e3": 0})

    def test_components_decided_separately(self):
        g = MSGraph.from_edges({"a": ("s", "t"), "b": ("s", "t"), "c": ("u", "x"), "d": ("x", "w")})
        f1 = {"a": 1, "b": 1, "c": 1, "d": 0}
        assert framings_equivalent(g, f1, {"a": 2, "b": 0, "c": 2, "d": 1})
        # same totals overall but the saddle component's difference changes
        assert not framings_equivalent(g, f1, {"a": 2, "b": 1, "c": 0, "d": 0})


class TestOracle:
    def test_examples(self):
        assert oracle_equivalent(PATH, {"e1": 1, "e2": 1}, {"e1": 4, "e2": 4}, 8)
        for bound in (1, 3, 8):
            assert not oracle_equivalent(PATH, {"e1": 1, "e2": 0}, {"e1": 0, "e2": 1}, bound)
        assert oracle_equivalent(TRIANGLE, {"e1": 1, "e2": 2, "e3": 0}, {"e1": 1, "e2": 2, "e3": 0}, 1)

    def test_bfs_matches_bulk_components(self):
        rng = random.Random(7)
        for g in connected_msgraphs(3):
            finite, labels = reachability_classes(g, (), 4)
            for _ in range(20):
                v1 = [rng.randint(-2, 2) for _ in finite]
                v2 = [rng.randint(-2, 2) for _ in finite]
                same = labels[tuple(x + 4 for x in v1)] == labels[tuple(x + 4 for x in v2)]
                f1, f2 = dict(zip(finite, v1)), dict(zip(finite, v2))
                assert oracle_equivalent(g, f1, f2, 4) == same

    def test_agrees_with_verdict_on_all_pairs_up_to_three_edges(self):
        import itertools

        for g in connected_msgraphs(3):
            edges = list(g.edges)
            box = [dict(zip(edges, v)) for v in itertools.product(range(-1, 2), repeat=len(edges))]
            finite, labels = reachability_classes(g, (), 6)
            lab = lambda f: labels[tuple(f[e] + 6 for e in finite)]
            for f1 in box:
                for f2 in box:
                    assert framings_equivalent(g, f1, f2) == (lab(f1) == lab(f2))


def _random_move(g, f, rng):
    a, b, op = rng.choice(g.adjacent_pairs)
    return Move(op, a, b, rng.randint(-3, 3))


@pytest.mark.parametrize("seed", range(5))
def test_random_operations_preserve_invariants(seed):
    rng = random.Random(seed)
    for g in rng.sample(connected_msgraphs(4), 15):
        f = {e: rng.randint(-3, 3) for e in g.edges}
        start = framing_invariants(g, f)
        total = sum(f.values())
        for _ in range(25):
            move = _random_move(g, f, rng)
            f = apply_operation(g, f, move)
            if move.op == 2:
                assert sum(f.values()) == total
            assert (sum(f.values()) - total) % 2 == 0
            total = sum(f.values())
            assert framing_invariants(g, f) == start


def test_equivalence_relation_laws():
    rng = random.Random(3)
    for g in connected_msgraphs(3):
        fs = [{e: rng.randint(-1, 1) for e in g.edges} for _ in range(12)]
        for f1 in fs:
            assert framings_equivalent(g, f1, f1)
            for f2 in fs:
                assert framings_equivalent(g, f1, f2) == framings_equivalent(g, f2, f1)
                for f3 in fs:
                    if framings_equivalent(g, f1, f2) and framings_equivalent(g, f2, f3):
                        assert framings_equivalent(g, f1, f3)


class TestNormalizeType1:
    def test_replay(self):
        g = MSGraph.from_edges({"a": ("s", "t"), "b": ("s", "t"), "c": ("s", "u"), "d": ("w", "u")})
        f = {"a": 3, "b": -1, "c": 4, "d": 2}
        normal, moves = normalize_type1(g, f, keep="b")
        assert normal == {"a": 0, "b": 8, "c": 0, "d": 0}
        cur = dict(f)
        for m in moves:
            cur = apply_operation(g, cur, m)
        assert cur == normal

    def test_rejects_saddles(self):
        with pytest.raises(InvalidGraph):
            normalize_type1(PATH, {"e1": 0, "e2": 0})

    def test_rejects_infinity(self):
        with pytest.raises(InvalidGraph):
            normalize_type1(PARALLEL, {"e1": INF, "e2": 0})
