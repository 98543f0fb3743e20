import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ms3.model import SurfaceRegion
from ms3.words import (
    CyclicWord,
    Letter,
    canonical_form,
    invert,
    least_rotation,
    letter_key,
    lists_equivalent,
    rotate_equal,
    slw_bijections,
    slw_equivalent,
    word,
)
from ms3.catalog import trivial_orbit_flow, twisted_orbit_flow

letters = st.builds(Letter, st.sampled_from("abcd"), st.sampled_from([1, -1]))
words = st.lists(letters, min_size=1, max_size=8).map(lambda ls: CyclicWord(tuple(ls)))


def brute_canonical(w, order=letter_key):
    cands = []
    for seq in (w.letters, invert(w).letters):
        for i in range(len(seq)):
            cands.append(seq[i:] + seq[:i])
    return min(cands, key=lambda s: [order(x) for x in s])


class TestParsing:
    def test_word_text(self):
        w = word("a b^-1 c")
        assert w.letters == (Letter("a", 1), Letter("b", -1), Letter("c", 1))
        assert str(w) == "a b^-1 c"

    def test_explicit_positive_power(self):
        assert word("a^1 b^+1") == word("a b")

    @pytest.mark.parametrize("bad", ["", "a^2", "a^-"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            word(bad)

    def test_power_must_be_unit(self):
        with pytest.raises(ValueError):
            CyclicWord((("a", 2),))


def test_rotation_examples():
    assert rotate_equal(word("a b^-1"), word("b^-1 a"))
    assert not rotate_equal(word("a b^-1"), word("a^-1 b"))
    assert rotate_equal(word("a a b"), word("a b a"))
    assert not rotate_equal(word("a b"), word("a b a"))


def test_invert_examples():
    assert invert(word("a b^-1")) == word("b a^-1")
    assert invert(word("a")) == word("a^-1")


def test_canonical_examples():
    assert canonical_form(word("b^-1 a")) == word("a b^-1")
    assert canonical_form(word("a")) == word("a")
    assert canonical_form(word("a^-1")) == word("a")


def test_canonical_custom_order():
    # b before a, negative before positive
    order = lambda lt: (lt.label != "b", lt.power)
    got = canonical_form(word("a b"), order)
    assert got.letters == brute_canonical(word("a b"), order)


@given(words)
def test_booth_matches_brute_force(w):
    seq = w.letters
    i = least_rotation(seq, letter_key)
    best = min(range(len(seq)), key=lambda k: [letter_key(x) for x in seq[k:] + seq[:k]])
    rot = lambda k: [letter_key(x) for x in seq[k:] + seq[:k]]
    assert rot(i) == rot(best)


@given(words)
def test_canonical_is_least_candidate(w):
    assert canonical_form(w).letters == brute_canonical(w)


@given(words)
def test_invert_is_involution(w):
    assert rotate_equal(invert(invert(w)), w)
    assert canonical_form(invert(w)) == canonical_form(w)


@given(words)
def test_canonical_is_rotation_of_word_or_inverse(w):
    c = canonical_form(w)
    assert rotate_equal(c, w) or rotate_equal(c, invert(w))


@given(words, words)
def test_canonical_decides_matching(u, v):
    same = rotate_equal(u, v) or rotate_equal(u, invert(v))
    assert (canonical_form(u) == canonical_form(v)) == same


@settings(max_examples=50)
@given(st.lists(words, min_size=3, max_size=3))
def test_rotate_equal_is_equivalence(ws):
    u, v, x = ws
    assert rotate_equal(u, u)
    assert rotate_equal(u, v) == rotate_equal(v, u)
    if rotate_equal(u, v) and rotate_equal(v, x):
        assert rotate_equal(u, x)
    k = len(u) // 2
    assert rotate_equal(u, CyclicWord(u.letters[k:] + u.letters[:k]))


def region(rid, genus, *ws):
    return SurfaceRegion(rid, genus, tuple(word(w) for w in ws))


class TestLists:
    def test_same_list(self):
        assert lists_equivalent(region("L1", 0, "a", "b^-1"), region("X", 0, "a", "b^-1"))

    def test_genus_mismatch(self):
        assert not lists_equivalent(region("L1", 0, "a", "b^-1"), region("X", 1, "a", "b^-1"))

    def test_inverted_copy(self):
        assert lists_equivalent(region("L3", 0, "a^-1", "b", "c^-1"), region("X", 0, "a", "b^-1", "c"))

    def test_word_count_mismatch(self):
        assert not lists_equivalent(region("A", 0, "a"), region("B", 0, "a", "a"))

    @given(st.lists(words, min_size=1, max_size=4), st.data())
    def test_invariant_under_rotation_and_inversion(self, ws, data):
        changed = []
        for w in ws:
            k = data.draw(st.integers(0, len(w) - 1))
            r = CyclicWord(w.letters[k:] + w.letters[:k])
            changed.append(invert(r) if data.draw(st.booleans()) else r)
        changed = data.draw(st.permutations(changed))
        assert lists_equivalent(SurfaceRegion("A", 0, tuple(ws)), SurfaceRegion("B", 0, tuple(changed)))


class TestSLW:
    def test_trivial_identity(self):
        s = trivial_orbit_flow(1, 1).surfaces
        m = slw_equivalent(s, s)
        assert m == {r.id: r.id for r in s}

    def test_cardinality(self):
        s = trivial_orbit_flow(1, 1).surfaces
        assert slw_equivalent(s, s[:-1]) is None

    def test_twisted_all_matchings(self):
        s = twisted_orbit_flow(0).surfaces
        shuffled = [SurfaceRegion(r.id, r.genus_signed, r.boundary_words) for r in reversed(s)]
        found = list(slw_bijections(s, shuffled))
        assert len(found) == 6
        assert all(lists_equivalent(a, b) for m in found for a in s for b in s if m[a.id] == b.id)

    def test_no_match(self):
        a = [region("X", 0, "a"), region("Y", 0, "b")]
        b = [region("X", 0, "a"), region("Y", 1, "b")]
        assert slw_equivalent(a, b) is None

    def test_bijections_are_exactly_matching_permutations(self):
        a = [region("P", 0, "a b"), region("Q", 0, "b^-1 a^-1"), region("R", 0, "a")]
        b = [region("U", 0, "a"), region("V", 0, "b a"), region("W", 0, "a b")]
        got = sorted(tuple(sorted(m.items())) for m in slw_bijections(a, b))
        want = []
        for perm in itertools.permutations([r.id for r in b]):
            m = dict(zip([r.id for r in a], perm))
            if all(lists_equivalent(r, next(x for x in b if x.id == m[r.id])) for r in a):
                want.append(tuple(sorted(m.items())))
        assert got == sorted(want)
        assert len(got) == 2
