"""Cyclic boundary words over signed edge letters.

A word is a cyclic sequence of letters ``(label, power)`` with power +1 or -1.
Two words are *equivalent* when one is a rotation of the other, and *inverse*
when one is obtained from the other by reading it backwards with all powers
negated (again up to rotation).  Region lists match words that are equivalent
or inverse, so the canonical form used for matching is the least sequence over
all rotations of the word and of its inverse.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

__all__ = [
    "Letter",
    "CyclicWord",
    "word",
    "rotate_equal",
    "invert",
    "canonical_form",
    "least_rotation",
    "letter_key",
    "lists_equivalent",
    "slw_equivalent",
    "slw_bijections",
]


class Letter(NamedTuple):
    label: str
    power: int

    def inverse(self) -> "Letter":
        return Letter(self.label, -self.power)

    def __str__(self) -> str:
        return self.label if self.power > 0 else f"{self.label}^-1"


@dataclass(frozen=True)
class CyclicWord:
    """Non-empty cyclic word.  Equality is literal; use :func:`rotate_equal`."""

    letters: tuple[Letter, ...]

    def __post_init__(self):
        letters = tuple(Letter(str(lb), int(pw)) for lb, pw in self.letters)
        if not letters:
            raise ValueError("cyclic word must be non-empty")
        for lt in letters:
            if lt.power not in (1, -1):
                raise ValueError(f"letter power must be +1 or -1, got {lt.power}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __str__(self) -> str:
        return " ".join(str(lt) for lt in self.letters)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lt.label for lt in self.letters)

    def translate(self, edge_map: Mapping[str, str], flips: Iterable[str] = ()) -> "CyclicWord":
        """Rename letters through ``edge_map``; letters of flipped edges change power."""
        flips = frozenset(flips)
        return CyclicWord(
            tuple(
                Letter(edge_map.get(lt.label, lt.label), -lt.power if lt.label in flips else lt.power)
                for lt in self.letters
            )
        )


_LETTER_RE = re.compile(r"^([A-Za-z0-9_][\w.\-']*?)(\^(-1|\+1|1))?$")


def word(text: str | Sequence) -> CyclicWord:
    """Build a word from ``"a b^-1 c"`` or from a sequence of ``(label, power)`` pairs."""
    if isinstance(text, CyclicWord):
        return text
    if isinstance(text, str):
        letters = []
        for tok in text.split():
            m = _LETTER_RE.match(tok)
            if not m:
                raise ValueError(f"bad letter {tok!r}")
            letters.append(Letter(m.group(1), -1 if m.group(3) == "-1" else 1))
        return CyclicWord(tuple(letters))
    return CyclicWord(tuple(Letter(lb, pw) for lb, pw in text))


def rotate_equal(w1: CyclicWord, w2: CyclicWord) -> bool:
    """True iff some rotation of ``w1`` equals ``w2`` letter for letter."""
    a, b = w1.letters, w2.letters
    if len(a) != len(b):
        return False
    # b is a rotation of a iff b occurs in a+a
    doubled = a + a
    n = len(a)
    return any(doubled[i:i + n] == b for i in range(n))


def invert(w: CyclicWord) -> CyclicWord:
    return CyclicWord(tuple(lt.inverse() for lt in reversed(w.letters)))


def letter_key(lt: Letter) -> tuple[str, int]:
    """Default total order: labels lexicographically, then a^+1 before a^-1."""
    return (lt.label, 0 if lt.power > 0 else 1)


def least_rotation(seq: Sequence, key: Callable = lambda x: x) -> int:
    """Start index of the lexicographically least rotation (Booth's algorithm)."""
    s = [key(x) for x in seq]
    s = s + s
    n = len(s)
    f = [-1] * n
    k = 0
    for j in range(1, n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % len(seq) if seq else 0


def canonical_form(w: CyclicWord, order: Callable[[Letter], object] = letter_key) -> CyclicWord:
    """Least sequence among all rotations of ``w`` and of ``invert(w)``."""
    best = None
    for cand in (w.letters, invert(w).letters):
        i = least_rotation(cand, order)
        rot = cand[i:] + cand[:i]
        keyed = [order(x) for x in rot]
        if best is None or keyed < best[0]:
            best = (keyed, rot)
    return CyclicWord(best[1])


def _list_signature(region, edge_map=None, flips=()) -> tuple:
    words = region.boundary_words
    if edge_map is not None:
        words = [w.translate(edge_map, flips) for w in words]
    canon = sorted(canonical_form(w).letters for w in words)
    return (region.genus_signed, tuple(canon))


def lists_equivalent(L1, L2, iso=None) -> bool:
    """Region lists match: equal signed genus and a word bijection up to rotation/inversion.

    ``iso`` (an :class:`~ms3.equivalence.Isomorphism` or ``None`` for identity)
    translates the letters of ``L1`` before comparison.  Matchability is a
    per-class counting condition, so comparing multisets of canonical forms is
    exactly the bijection condition.
    """
    if L1.genus_signed != L2.genus_signed or len(L1.boundary_words) != len(L2.boundary_words):
        return False
    edge_map, flips = _iso_edges(iso)
    return _list_signature(L1, edge_map, flips) == _list_signature(L2)


def _iso_edges(iso):
    if iso is None:
        return None, ()
    return iso.edge_map, iso.flips


def slw_bijections(S1: Sequence, S2: Sequence, iso=None, extra_keys: tuple | None = None) -> Iterator[dict]:
    """Yield every region bijection ``id -> id`` under which paired lists are equivalent.

    Regions are bucketed by translated list signature, refined by
    ``extra_keys = (key1, key2)`` when given (applied to regions of ``S1`` and
    ``S2`` respectively); bijections are products of permutations inside
    matching buckets.
    """
    if len(S1) != len(S2):
        return
    edge_map, flips = _iso_edges(iso)

    def buckets(regions, translate, extra):
        out: dict = {}
        for r in regions:
            sig = _list_signature(r, edge_map, flips) if translate else _list_signature(r)
            if extra is not None:
                sig = (sig, extra(r))
            out.setdefault(sig, []).append(r.id)
        return out

    k1, k2 = extra_keys if extra_keys is not None else (None, None)
    b1 = buckets(S1, True, k1)
    b2 = buckets(S2, False, k2)
    if Counter({k: len(v) for k, v in b1.items()}) != Counter({k: len(v) for k, v in b2.items()}):
        return
    keys = sorted(b1, key=repr)
    groups = [(sorted(b1[k]), sorted(b2[k])) for k in keys]

    def rec(i, acc):
        if i == len(groups):
            yield dict(acc)
            return
        src, dst = groups[i]
        for perm in permutations(dst):
            acc.update(zip(src, perm))
            yield from rec(i + 1, acc)
        for s in src:
            acc.pop(s, None)

    yield from rec(0, {})


def slw_equivalent(S1: Sequence, S2: Sequence, iso=None) -> dict | None:
    """A region bijection making corresponding lists equivalent, or ``None``."""
    return next(slw_bijections(S1, S2, iso), None)


def word_counter(words: Iterable[CyclicWord]) -> Counter:
    return Counter(lt.label for w in words for lt in w.letters)
