import random

import pytest

from ms3.catalog import catalog_keys, from_key, trivial_orbit_flow, twisted_orbit_flow
from ms3.errors import ParseError, ValidationError
from ms3.framed import INF, Role
from ms3.textformat import (
    parse_flow,
    parse_framing,
    parse_msgraph,
    serialize,
    serialize_framing,
    serialize_msgraph,
)
from relabels import random_relabel

SMALL = """\
# one loop bounding two discs
[graph]
vertex P
edge a = P -- P orient=fixed kind=corner

[surface D1]
genus 0
boundary a

[surface D2]
genus 0
boundary a^-1   # same loop, other side

[handle B]
kind=simple index=0
regions = D1
"""


def test_small_document():
    p = parse_flow(SMALL)
    assert p.region("D2").boundary_words[0].letters[0].power == -1
    assert p.handle("B").regions == {"D1"}


@pytest.mark.parametrize("key", catalog_keys())
def test_round_trip(key):
    p = from_key(key)
    text = serialize(p)
    assert parse_flow(text) == p
    assert serialize(parse_flow(text)) == text


def test_round_trip_relabeled():
    rng = random.Random(2)
    keys = catalog_keys()
    for i in range(100):
        q, _ = random_relabel(from_key(keys[i % len(keys)]), rng)
        assert parse_flow(serialize(q)) == q


def test_serialize_is_stable():
    p = trivial_orbit_flow(1, -1)
    assert serialize(p) == serialize(p)


def test_omega_line():
    assert "omega 0-handle = (1, 1)" in serialize(twisted_orbit_flow(0)).splitlines()


def test_one_line_case2_form():
    text = serialize(twisted_orbit_flow(1)).replace(
        "case2 0-handle meridian=(3, 0)\nomega 0-handle = (1, 3)",
        "case2 0-handle meridian=(3,0) omega=(1,3)",
    )
    assert parse_flow(text) == twisted_orbit_flow(1)


def test_missing_graph():
    with pytest.raises(ParseError, match=r"missing \[graph\]"):
        parse_flow("[surface A]\ngenus 0\n")


def test_undeclared_letter_located():
    text = SMALL.replace("boundary a^-1", "boundary a^-1 zz")
    with pytest.raises(ParseError) as info:
        parse_flow(text)
    err = info.value
    assert "'zz'" in err.message
    assert (err.line, err.column) == (12, 15)


def test_duplicate_id():
    text = SMALL + "\n[surface D1]\ngenus 0\nboundary a\n"
    with pytest.raises(ParseError, match="duplicate surface 'D1'"):
        parse_flow(text)


def test_syntax_location():
    text = SMALL.replace("orient=fixed", "orient=fixd")
    with pytest.raises(ParseError) as info:
        parse_flow(text, source="x.flow")
    assert str(info.value).startswith("x.flow:4:")
    assert info.value.column == SMALL.splitlines()[3].index("fixed") + 1


def test_validation_runs():
    text = SMALL.replace("[surface D2]\ngenus 0\nboundary a^-1   # same loop, other side\n", "")
    with pytest.raises(ValidationError) as info:
        parse_flow(text)
    assert [(v.code, v.subject) for v in info.value.report] == [("edge-occurrence", "edge a")]
    assert len(parse_flow(text, validate=False).surfaces) == 1


def _mutations(text, rng, count):
    alphabet = "ab01-=()[]|^ #\nxL,>"
    for _ in range(count):
        i = rng.randrange(len(text))
        op = rng.randrange(3)
        c = rng.choice(alphabet)
        if op == 0:
            yield text[:i] + c + text[i + 1:]
        elif op == 1:
            yield text[:i] + text[i + 1:]
        else:
            yield text[:i] + c + text[i:]


@pytest.mark.parametrize("key", ["trivial:+1:-1", "twisted:2", "tau-case3-demo", "type3-L"])
def test_mutations_fail_cleanly(key):
    text = serialize(from_key(key))
    rng = random.Random(key)
    for mutated in _mutations(text, rng, 300):
        try:
            parse_flow(mutated)
        except ParseError as exc:
            assert exc.line >= 1 and exc.column >= 1
        except ValidationError as exc:
            assert exc.report


class TestFramedFormats:
    def test_graph_roles_derived(self):
        g = parse_msgraph("edge e1 = s -> x\nedge e2 = x -> t\n")
        assert g.vertices["x"] is Role.SADDLE

    def test_graph_round_trip(self):
        g = parse_msgraph("vertex lonely role=source\nedge e1 = s -> t  # parallel\nedge e2 = s -> t\n")
        assert parse_msgraph(serialize_msgraph(g)) == g

    def test_invalid_graph(self):
        with pytest.raises(ParseError, match="invalid MS-graph"):
            parse_msgraph("edge a = s -> x\nedge b = x -> y\nedge c = y -> t\n")

    def test_framing(self):
        f = parse_framing("e1 = 3, e2 = inf\ne3 = -2\n")
        assert f == {"e1": 3, "e2": INF, "e3": -2}
        assert parse_framing(serialize_framing(f)) == f

    def test_framing_errors(self):
        with pytest.raises(ParseError):
            parse_framing("e1 = x")
        with pytest.raises(ParseError, match="duplicate"):
            parse_framing("e1 = 1\ne1 = 2")
