"""Multisets, words, and exhaustive enumeration of multiset permutations.

A multiset ``M(k1,...,kn)`` holds ``ki`` copies of the letter ``i``.  Its
permutations ("words") are the sequences in which letter ``i`` occurs exactly
``ki`` times; there are ``m!/(k1!...kn!)`` of them for ``m = k1+...+kn``.
Everything here is exact integer arithmetic on immutable values.

Text forms: a multiset prints as ``(2,4,2,1)``; a word prints as
``321432212`` while all letters are single digits, and comma-separated
(``12,3,1``) otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, TypeVar

Word = tuple[int, ...]

#: Default ceiling on the number of words any exhaustive pass may visit.
DEFAULT_BUDGET = 10**7


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would visit more words than the caller allows."""


class IntegrityError(RuntimeError):
    """An internal cross-check failed (conflicting cache rows, broken table, ...)."""


@dataclass(frozen=True, order=True)
class Multiset:
    """Multiplicity vector ``(k1,...,kn)``: letter ``i`` occurs ``ki >= 1`` times.

    Zero multiplicities are not stored; build instances through
    :func:`make_multiset` when the raw vector may contain zeros.
    """

    multiplicities: tuple[int, ...]

    def __post_init__(self) -> None:
        for k in self.multiplicities:
            if not isinstance(k, int) or k < 1:
                raise ValueError(
                    f"multiplicities must be positive integers, got {self.multiplicities!r}"
                )

    @property
    def n(self) -> int:
        """Number of distinct letters."""
        return len(self.multiplicities)

    @property
    def size(self) -> int:
        """Total number of letters, counted with multiplicity."""
        return sum(self.multiplicities)

    def __str__(self) -> str:
        return format_multiset(self)

    def __repr__(self) -> str:
        return f"Multiset({self.multiplicities!r})"


def make_multiset(raw: Sequence[int]) -> Multiset:
    """Build a :class:`Multiset` from a raw vector, dropping zero entries.

    Letters with zero multiplicity are removed and the remaining letters are
    renumbered 1..n in their original order, so ``make_multiset((2,0,1))``
    equals ``make_multiset((2,1))``.
    """
    for k in raw:
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"multiplicities must be nonnegative integers, got {raw!r}")
    return Multiset(tuple(k for k in raw if k > 0))


def transpose_multiset(M: Multiset, i: int) -> Multiset:
    """Swap the multiplicities of letters ``i`` and ``i+1``."""
    if not 1 <= i <= M.n - 1:
        raise IndexError(f"transposition index {i} out of range for {M}")
    ks = list(M.multiplicities)
    ks[i - 1], ks[i] = ks[i], ks[i - 1]
    return Multiset(tuple(ks))


def apply_sigma(sigma: Sequence[int], w: Sequence[int]) -> Word:
    """Relabel a word letterwise: letter ``j`` becomes ``sigma[j-1]``.

    ``sigma`` must be a permutation of ``1..n`` for some ``n`` at least the
    largest letter of ``w``.
    """
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError(f"{sigma!r} is not a permutation of 1..{len(sigma)}")
    try:
        return tuple(sigma[a - 1] for a in w)
    except IndexError:
        raise ValueError(f"word letter out of range for a permutation of 1..{len(sigma)}") from None


def permute_multiset(sigma: Sequence[int], M: Multiset) -> Multiset:
    """Multiset counterpart of :func:`apply_sigma`: letter ``i`` of the result
    occurs as often as letter ``sigma^-1(i)`` of ``M``."""
    if sorted(sigma) != list(range(1, M.n + 1)):
        raise ValueError(f"{sigma!r} is not a permutation of 1..{M.n}")
    ks = [0] * M.n
    for j, k in enumerate(M.multiplicities):
        ks[sigma[j] - 1] = k
    return Multiset(tuple(ks))


def count_words(M: Multiset) -> int:
    """Number of distinct permutations of ``M`` (the multinomial coefficient)."""
    out = math.factorial(M.size)
    for k in M.multiplicities:
        out //= math.factorial(k)
    return out


def _advance(seq: list[int]) -> bool:
    # Standard next-permutation step, in place; False once seq is descending.
    i = len(seq) - 2
    while i >= 0 and seq[i] >= seq[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = len(seq) - 1
    while seq[j] <= seq[i]:
        j -= 1
    seq[i], seq[j] = seq[j], seq[i]
    seq[i + 1 :] = seq[:i:-1]
    return True


def enumerate_words(M: Multiset, prefix: Sequence[int] = ()) -> Iterator[Word]:
    """Yield the words of ``M`` in lexicographic order.

    With a ``prefix``, only the words starting with it are produced (still in
    lexicographic order), which lets callers split the full enumeration into
    independent chunks by first letter(s).
    """
    remaining = list(M.multiplicities)
    for a in prefix:
        if not 1 <= a <= len(remaining) or remaining[a - 1] == 0:
            raise ValueError(f"prefix {tuple(prefix)!r} is not realizable in {M}")
        remaining[a - 1] -= 1
    head = tuple(prefix)
    suffix = [i + 1 for i, k in enumerate(remaining) for _ in range(k)]
    if not suffix:
        yield head
        return
    while True:
        yield head + tuple(suffix)
        if not _advance(suffix):
            return


def shard_prefixes(M: Multiset) -> list[Word]:
    """Length-1 prefixes splitting ``enumerate_words(M)`` into disjoint chunks."""
    if M.size == 0:
        return [()]
    return [(a,) for a in range(1, M.n + 1)]


_T = TypeVar("_T")


def map_shards(fn: Callable[[Word], _T], shards: Sequence[Word], threads: int = 1) -> list[_T]:
    """Apply ``fn`` to every shard prefix, returning results in shard order.

    With ``threads > 1`` the shards run on a thread pool; the result order is
    still the shard order, so any downstream merge is deterministic and the
    emitted numbers never depend on the thread count.
    """
    if threads <= 1 or len(shards) <= 1:
        return [fn(s) for s in shards]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, shards))


def multiplicity_rearrangements(M: Multiset) -> list[Multiset]:
    """All distinct reorderings of the multiplicity vector, lexicographically.

    This is the orbit of ``M`` under relabeling of the letters: every multiset
    reachable by permuting which letter carries which multiplicity.
    """
    seq = sorted(M.multiplicities)
    out = [Multiset(tuple(seq))]
    while _advance(seq):
        out.append(Multiset(tuple(seq)))
    return out


def canonical_form(M: Multiset) -> Multiset:
    """The orbit representative with multiplicities sorted descending."""
    return Multiset(tuple(sorted(M.multiplicities, reverse=True)))


# ---------------------------------------------------------------------------
# Text forms


def parse_word(text: str) -> Word:
    """Parse a word from digits (``321432212``) or comma form (``12,3,1``)."""
    text = text.strip()
    if not text:
        return ()
    if "," in text:
        letters = []
        for part in text.split(","):
            part = part.strip()
            if not part.isdigit():
                raise ValueError(f"bad word letter {part!r} in {text!r}")
            letters.append(int(part))
    else:
        if not text.isdigit():
            raise ValueError(f"bad word text {text!r}")
        letters = [int(c) for c in text]
    if any(a < 1 for a in letters):
        raise ValueError(f"word letters must be >= 1 in {text!r}")
    return tuple(letters)


def format_word(w: Sequence[int]) -> str:
    """Inverse of :func:`parse_word`; digit form whenever all letters are <= 9."""
    if not w:
        return ""
    if max(w) <= 9:
        return "".join(str(a) for a in w)
    return ",".join(str(a) for a in w)


def word_multiset(w: Sequence[int]) -> Multiset:
    """The multiset a word is a permutation of.

    Every letter ``1..max(w)`` must actually occur, otherwise the word does
    not correspond to a (compact) multiset and a ``ValueError`` is raised.
    """
    if not w:
        return Multiset(())
    ks = [0] * max(w)
    for a in w:
        if a < 1:
            raise ValueError(f"word letters must be >= 1, got {a}")
        ks[a - 1] += 1
    if 0 in ks:
        missing = ks.index(0) + 1
        raise ValueError(f"letter {missing} never occurs in {format_word(tuple(w))!r}")
    return Multiset(tuple(ks))


def parse_multiset(text: str) -> Multiset:
    """Parse ``(2,4,2,1)`` (parentheses optional) into a multiset.

    Zero entries are accepted and dropped, mirroring :func:`make_multiset`.
    """
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1].strip()
    if not text:
        return Multiset(())
    parts = [p.strip() for p in text.split(",")]
    if any(not p.isdigit() for p in parts):
        raise ValueError(f"bad multiset text {text!r}")
    return make_multiset([int(p) for p in parts])


def format_multiset(M: Multiset) -> str:
    """Inverse of :func:`parse_multiset`: ``(2,4,2,1)``."""
    return "(" + ",".join(str(k) for k in M.multiplicities) + ")"
