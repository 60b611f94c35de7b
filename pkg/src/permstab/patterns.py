"""Patterns over words and their exact occurrence statistics.

A pattern couples a letter sequence with per-gap adjacency flags, so a single
type covers the classical case (no flags), the consecutive case (all flags),
and everything in between.  An occurrence in a word picks positions
``i1 < i2 < ...`` that sit next to each other wherever a flag demands it and
whose letters compare exactly like the pattern letters do: equal pattern
letters force equal word letters, distinct ones force the same strict
inequality.  Repeated pattern letters are therefore meaningful, e.g. ``11``
matches level adjacent pairs only.

Text notation: letters are written in order and a dash between two letters
lifts the adjacency requirement on that gap.  ``1-2-3`` is the classical
pattern, ``123`` the consecutive one, ``1-32`` requires only the ``32`` part
to sit together.  Letters beyond 9 need commas on the adjacent gaps:
``9,10-11``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .core import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    Multiset,
    Word,
    count_words,
    enumerate_words,
    format_multiset,
    map_shards,
    shard_prefixes,
)


@dataclass(frozen=True)
class Pattern:
    """A letter sequence plus one adjacency flag per gap.

    ``adjacent[j]`` is True when positions ``j`` and ``j+1`` of an occurrence
    must be consecutive in the host word.  Letters must use the full alphabet
    ``1..max`` with no gaps.
    """

    letters: tuple[int, ...]
    adjacent: tuple[bool, ...]

    def __post_init__(self) -> None:
        if not self.letters:
            raise ValueError("a pattern needs at least one letter")
        if len(self.adjacent) != len(self.letters) - 1:
            raise ValueError("need exactly one adjacency flag per gap")
        seen = set(self.letters)
        if min(seen) < 1 or seen != set(range(1, max(seen) + 1)):
            raise ValueError(f"pattern letters must cover 1..max, got {self.letters!r}")

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def alphabet_size(self) -> int:
        return max(self.letters)

    @property
    def is_classical(self) -> bool:
        return not any(self.adjacent)

    @property
    def is_consecutive(self) -> bool:
        return all(self.adjacent)

    @property
    def has_distinct_letters(self) -> bool:
        return len(set(self.letters)) == len(self.letters)

    @property
    def is_monotone(self) -> bool:
        """True for the letter sequences ``12...l`` and ``l...21``."""
        up = tuple(range(1, self.length + 1))
        return self.letters == up or self.letters == up[::-1]

    @cached_property
    def blocks(self) -> tuple[tuple[int, int], ...]:
        """Maximal adjacency-linked stretches as ``(start, length)`` pairs."""
        out = []
        start = 0
        for j, flag in enumerate(self.adjacent):
            if not flag:
                out.append((start, j + 1 - start))
                start = j + 1
        out.append((start, self.length - start))
        return tuple(out)

    @cached_property
    def _pair_relations(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        # _pair_relations[t] lists (u, sign) for u < t with sign = cmp(q_u, q_t).
        q = self.letters
        return tuple(
            tuple((u, (q[u] > q[t]) - (q[u] < q[t])) for u in range(t))
            for t in range(len(q))
        )

    @cached_property
    def _window_relations(self) -> tuple[tuple[int, int, int], ...]:
        # All pairs (u, t, sign) with u < t, for the consecutive fast path.
        q = self.letters
        return tuple(
            (u, t, (q[u] > q[t]) - (q[u] < q[t]))
            for t in range(len(q))
            for u in range(t)
        )

    def __str__(self) -> str:
        return format_pattern(self)


def parse_pattern(text: str) -> Pattern:
    """Parse dash/comma pattern notation; see the module docstring."""
    text = text.strip()
    if not text:
        raise ValueError("empty pattern text")
    letters: list[int] = []
    adjacent: list[bool] = []
    if "," in text:
        token = ""
        for c in text:
            if c.isdigit():
                token += c
            elif c in ",-":
                if not token:
                    raise ValueError(f"misplaced separator in pattern {text!r}")
                letters.append(int(token))
                adjacent.append(c == ",")
                token = ""
            else:
                raise ValueError(f"bad character {c!r} in pattern {text!r}")
        if not token:
            raise ValueError(f"trailing separator in pattern {text!r}")
        letters.append(int(token))
    else:
        prev_dash = False
        for c in text:
            if c == "-":
                if not letters or prev_dash:
                    raise ValueError(f"misplaced dash in pattern {text!r}")
                prev_dash = True
            elif c.isdigit():
                if letters:
                    adjacent.append(not prev_dash)
                letters.append(int(c))
                prev_dash = False
            else:
                raise ValueError(f"bad character {c!r} in pattern {text!r}")
        if prev_dash:
            raise ValueError(f"trailing dash in pattern {text!r}")
    if any(a < 1 for a in letters):
        raise ValueError(f"pattern letters start at 1 in {text!r}")
    return Pattern(tuple(letters), tuple(adjacent))


def format_pattern(p: Pattern) -> str:
    """Inverse of :func:`parse_pattern`; digit form whenever all letters <= 9."""
    digits = p.alphabet_size <= 9
    out = [str(p.letters[0])]
    for j in range(1, p.length):
        if not p.adjacent[j - 1]:
            out.append("-")
        elif not digits:
            out.append(",")
        out.append(str(p.letters[j]))
    return "".join(out)


def count_occurrences(p: Pattern, w: Sequence[int]) -> int:
    """Exact number of occurrences of ``p`` in ``w``.

    Fully consecutive patterns slide a window; everything else backtracks
    over the pattern positions left to right, with adjacency flags pinning a
    position to its predecessor's neighbour.  Order relations are checked
    pairwise against every already-placed position, equalities included.
    """
    ell = p.length
    m = len(w)
    if ell > m:
        return 0
    if ell == 1:
        return m
    if p.is_consecutive:
        pairs = p._window_relations
        total = 0
        for start in range(m - ell + 1):
            for u, t, sign in pairs:
                wu = w[start + u]
                wt = w[start + t]
                if ((wu > wt) - (wu < wt)) != sign:
                    break
            else:
                total += 1
        return total

    adj = p.adjacent
    rels = p._pair_relations
    pos = [0] * ell

    def place(t: int, lo: int) -> int:
        if t == ell:
            return 1
        hi = m - (ell - t)  # last start leaving room for the rest
        if t and adj[t - 1]:
            candidates = range(lo, min(lo, hi) + 1)
        else:
            candidates = range(lo, hi + 1)
        found = 0
        for j in candidates:
            wj = w[j]
            for u, sign in rels[t]:
                wu = w[pos[u]]
                if ((wu > wj) - (wu < wj)) != sign:
                    break
            else:
                pos[t] = j
                found += place(t + 1, j + 1)
        return found

    return place(0, 0)


def avoids(p: Pattern, w: Sequence[int]) -> bool:
    """True when ``w`` contains no occurrence of ``p``."""
    return count_occurrences(p, w) == 0


@dataclass(frozen=True)
class Distribution:
    """Occurrence statistic of one pattern over all words of one multiset.

    ``counts[s]`` is the number of words with exactly ``s`` occurrences;
    values of ``s`` with no words are omitted.
    """

    multiset: Multiset
    pattern: Pattern
    counts: Mapping[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", dict(sorted(self.counts.items())))

    def count(self, s: int) -> int:
        return self.counts.get(s, 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def to_json_dict(self) -> dict:
        return {
            "multiset": list(self.multiset.multiplicities),
            "pattern": format_pattern(self.pattern),
            "counts": {str(s): str(c) for s, c in sorted(self.counts.items())},
        }


def distributions(
    M: Multiset,
    patterns: Sequence[Pattern],
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> list[dict[int, int]]:
    """Occurrence distributions of several patterns in one enumeration pass.

    Returns one ``{s: word count}`` dict per pattern, in pattern order.  The
    pass visits every word of ``M`` exactly once; a budget smaller than the
    number of words aborts before any enumeration starts.
    """
    total = count_words(M)
    if total > budget:
        raise BudgetExceededError(
            f"{format_multiset(M)} has {total} words, over the budget of {budget}"
        )

    def tally(prefix: Word) -> list[dict[int, int]]:
        local: list[dict[int, int]] = [{} for _ in patterns]
        for w in enumerate_words(M, prefix):
            for slot, p in zip(local, patterns):
                s = count_occurrences(p, w)
                slot[s] = slot.get(s, 0) + 1
        return local

    shards = shard_prefixes(M) if threads > 1 else [()]
    merged: list[dict[int, int]] = [{} for _ in patterns]
    for part in map_shards(tally, shards, threads):
        for slot, piece in zip(merged, part):
            for s, c in piece.items():
                slot[s] = slot.get(s, 0) + c
    return merged


def distribution(
    M: Multiset,
    p: Pattern,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    cache=None,
) -> Distribution:
    """Distribution of ``count_occurrences(p, -)`` over all words of ``M``.

    ``cache`` may be any object with ``lookup(M, p)`` returning a complete
    ``{s: count}`` dict (or None) and ``store(M, p, counts)``; it is consulted
    before enumeration and fed afterwards.
    """
    if cache is not None:
        hit = cache.lookup(M, p)
        if hit is not None:
            return Distribution(M, p, dict(hit))
    counts = distributions(M, [p], budget=budget, threads=threads)[0]
    if cache is not None:
        cache.store(M, p, counts)
    return Distribution(M, p, counts)


def is_proven_stable(p: Pattern) -> bool:
    """Patterns whose occurrence distribution provably never changes under
    reordering of the multiplicities, safe to key by the sorted multiset
    alone: the singleton, the level pair ``11``, both classical pairs, and
    every monotone consecutive pattern."""
    if p.length == 1:
        return True
    if p.is_consecutive and p.length == 2 and len(set(p.letters)) == 1:
        return True  # "11"
    if p.is_classical and p.length == 2 and p.has_distinct_letters:
        return True  # "1-2", "2-1"
    if p.is_consecutive and p.is_monotone:
        return True  # "12", "21", "123", ...
    return False


def all_patterns(length: int, kind: str) -> Iterator[Pattern]:
    """All distinct-letter patterns of one length, in lexicographic order.

    ``kind`` is ``"consecutive"`` or ``"classical"``.
    """
    from itertools import permutations

    if kind not in ("consecutive", "classical"):
        raise ValueError(f"unknown pattern family kind {kind!r}")
    flags = tuple(kind == "consecutive" for _ in range(length - 1))
    for perm in permutations(range(1, length + 1)):
        yield Pattern(perm, flags)
