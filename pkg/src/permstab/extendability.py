"""Self-overlap analysis of consecutive patterns and instability witnesses.

An index ``i`` (``2 <= i <= l``) of a length-``l`` consecutive pattern with
distinct letters is *extendable* when two occurrences of the pattern can
share letters at offset ``i-1`` inside one word of length ``l+i-1``; this
happens exactly when the length-``(l-i+1)`` prefix and suffix of the pattern
are order-isomorphic.  The *extended permutation* realizes such a word with
the fewest distinct letters, and its letter content is the *extended
multiset*, read off from two families of gap vectors.

Whenever the extended permutation at the minimal extendable index repeats a
letter, the pattern cannot be stable: a specific swap of two multiplicities
of the extended multiset kills every double occurrence, and
:func:`consecutive_instability_witness` builds and verifies that swap.  For
classical patterns of length at least 3 a cruder construction
(:func:`classical_instability_witness`) always works.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import (
    DEFAULT_BUDGET,
    IntegrityError,
    Multiset,
    Word,
    count_words,
    format_multiset,
    format_word,
    make_multiset,
    word_multiset,
)
from .patterns import Pattern, count_occurrences, distribution, format_pattern


@dataclass(frozen=True)
class GapVectors:
    """The per-band gap data of one extendable index.

    Band ``j`` (1-based, ``j = 1..l-i+2``) sits between the ``(j-1)``-th and
    ``j``-th smallest overlap letters.  ``delta1[j]`` counts the suffix-only
    letters in the band, ``delta2[j]`` the prefix-only ones;
    ``big1 = min(delta1, delta2)`` letters of the band can be shared and
    ``big2 = |delta1 - delta2|`` cannot.  ``sigma`` is the permutation
    sorting the overlap: ``p[sigma[0]-1] < p[sigma[1]-1] < ...``.
    """

    sigma: tuple[int, ...]
    delta1: tuple[int, ...]
    delta2: tuple[int, ...]
    big1: tuple[int, ...]
    big2: tuple[int, ...]


@dataclass(frozen=True)
class ExtendabilityReport:
    """Everything known about one extendable index of one pattern."""

    pattern: Pattern
    index: int
    gaps: GapVectors
    extended_permutation: Word
    extended_multiset: Multiset

    def to_json_dict(self) -> dict:
        return {
            "pattern": format_pattern(self.pattern),
            "index": self.index,
            "sigma": list(self.gaps.sigma),
            "delta1": list(self.gaps.delta1),
            "delta2": list(self.gaps.delta2),
            "Delta1": list(self.gaps.big1),
            "Delta2": list(self.gaps.big2),
            "extended_permutation": format_word(self.extended_permutation),
            "extended_multiset": list(self.extended_multiset.multiplicities),
        }


@dataclass(frozen=True)
class WitnessPair:
    """Two multisets related by one multiplicity swap whose occurrence counts
    at ``s`` differ, falsifying stability of the pattern."""

    pattern: Pattern
    s: int
    multiset: Multiset
    rearranged: Multiset
    count: int
    count_rearranged: int
    offsets: Mapping[str, int] | None = None

    def to_json_dict(self) -> dict:
        out = {
            "pattern": format_pattern(self.pattern),
            "s": self.s,
            "multiset": list(self.multiset.multiplicities),
            "rearranged": list(self.rearranged.multiplicities),
            "count": str(self.count),
            "count_rearranged": str(self.count_rearranged),
        }
        if self.offsets is not None:
            out["offsets"] = dict(sorted(self.offsets.items()))
        return out


def _require_consecutive_distinct(p: Pattern) -> None:
    if not p.is_consecutive or not p.has_distinct_letters:
        raise ValueError(
            f"{format_pattern(p)} must be fully consecutive with distinct letters"
        )


def _ranks(seq: Sequence[int]) -> tuple[int, ...]:
    # Rank vector of a distinct-letter sequence: smallest letter -> 1.
    order = sorted(range(len(seq)), key=seq.__getitem__)
    out = [0] * len(seq)
    for r, t in enumerate(order):
        out[t] = r + 1
    return tuple(out)


def extendable_indices(p: Pattern) -> list[int]:
    """All offsets at which two occurrences of ``p`` can overlap in one word.

    Index ``i`` qualifies exactly when the first and last ``l-i+1`` letters
    of the pattern are order-isomorphic; ``l`` itself always qualifies (the
    overlap is then a single letter).
    """
    _require_consecutive_distinct(p)
    ell = p.length
    out = []
    for i in range(2, ell + 1):
        k = ell - i + 1
        if _ranks(p.letters[:k]) == _ranks(p.letters[i - 1 :]):
            out.append(i)
    return out


def gap_vectors(p: Pattern, i: int) -> GapVectors:
    """Gap data of ``p`` at extendable index ``i``; raises if not extendable."""
    if i not in extendable_indices(p):
        raise ValueError(f"index {i} is not extendable for {format_pattern(p)}")
    q = p.letters
    ell = p.length
    k = ell - i + 1
    sigma = tuple(sorted(range(1, k + 1), key=lambda t: q[t - 1]))
    d1: list[int] = []
    d2: list[int] = []
    prev1 = prev2 = 0
    for rank, t in enumerate(sigma):
        v1 = q[t - 1]  # overlap letter under the first occurrence's values
        v2 = q[t - 1 + i - 1]  # same slot under the second occurrence's values
        d1.append(v1 - prev1 - 1 if rank else v1 - 1)
        d2.append(v2 - prev2 - 1 if rank else v2 - 1)
        prev1, prev2 = v1, v2
    d1.append(ell - prev1)
    d2.append(ell - prev2)
    if any(x < 0 for x in d2):
        raise IntegrityError("negative gap despite extendability")
    big1 = tuple(min(a, b) for a, b in zip(d1, d2))
    big2 = tuple(abs(a - b) for a, b in zip(d1, d2))
    return GapVectors(sigma, tuple(d1), tuple(d2), big1, big2)


def extended_multiset(p: Pattern, i: int) -> Multiset:
    """Letter content of the extended permutation of ``p`` at index ``i``.

    Reading the bands bottom-up: band ``j`` contributes ``big1[j]`` doubled
    letters, then ``big2[j]`` single ones, then (below the top band) the
    single overlap letter closing the band.
    """
    gv = gap_vectors(p, i)
    last = len(gv.big1) - 1
    ks: list[int] = []
    for j, (D1, D2) in enumerate(zip(gv.big1, gv.big2)):
        ks.extend([2] * D1)
        ks.extend([1] * (D2 + 1 if j < last else D2))
    return make_multiset(ks)


def extended_permutation(p: Pattern, i: int) -> Word:
    """A shortest-overlap word whose first and last ``l`` letters are both
    occurrences of ``p``, using as few distinct letters as the gap data
    allows.

    Built band by band: within band ``j`` the ``t``-th smallest prefix-only
    letter shares its value with the ``t``-th smallest suffix-only letter
    (that is ``big1[j]`` shared values), the leftovers of the longer side get
    fresh single values, and the band closes with the overlap letter.  The
    occurrence and multiset postconditions are verified before returning.
    """
    gv = gap_vectors(p, i)
    q = p.letters
    ell = p.length
    k = ell - i + 1
    L = ell + i - 1
    thresholds1 = [q[s - 1 + i - 1] for s in gv.sigma]  # first-occurrence values
    thresholds2 = [q[s - 1] for s in gv.sigma]  # second-occurrence values
    prefix_bands: list[list[tuple[int, int]]] = [[] for _ in range(k + 1)]
    suffix_bands: list[list[tuple[int, int]]] = [[] for _ in range(k + 1)]
    for x in range(i - 1):
        v = q[x]
        prefix_bands[sum(1 for t in thresholds1 if t < v)].append((v, x))
    for x in range(ell, L):
        v = q[x - i + 1]
        suffix_bands[sum(1 for t in thresholds2 if t < v)].append((v, x))

    word = [0] * L
    value = 1
    for j in range(k + 1):
        pre = sorted(prefix_bands[j])
        suf = sorted(suffix_bands[j])
        if len(pre) != gv.delta2[j] or len(suf) != gv.delta1[j]:
            raise IntegrityError("band contents disagree with the gap vectors")
        shared = min(len(pre), len(suf))
        for t in range(shared):
            word[pre[t][1]] = value
            word[suf[t][1]] = value
            value += 1
        for _, x in (pre if len(pre) > len(suf) else suf)[shared:]:
            word[x] = value
            value += 1
        if j < k:
            word[i - 2 + gv.sigma[j]] = value
            value += 1

    out = tuple(word)
    expect = extended_multiset(p, i)
    if word_multiset(out) != expect:
        raise IntegrityError(
            f"extended permutation {format_word(out)} does not realize {format_multiset(expect)}"
        )
    if _ranks(out[:ell]) != _ranks(q) or _ranks(out[L - ell :]) != _ranks(q):
        raise IntegrityError(
            f"extended permutation {format_word(out)} lost an occurrence of {format_pattern(p)}"
        )
    return out


def extendability_report(p: Pattern, i: int) -> ExtendabilityReport:
    """Bundle gap vectors, extended permutation, and extended multiset."""
    return ExtendabilityReport(
        pattern=p,
        index=i,
        gaps=gap_vectors(p, i),
        extended_permutation=extended_permutation(p, i),
        extended_multiset=extended_multiset(p, i),
    )


def classical_instability_witness(
    p: Pattern, *, budget: int = DEFAULT_BUDGET, threads: int = 1
) -> WitnessPair:
    """A single-occurrence witness against stability of a classical pattern.

    For ``l >= 3``, give the first pattern letter multiplicity 2 and the last
    one multiplicity 3 (all others 1); swapping the multiplicities of the
    second and last pattern letters then shifts the count of words with
    exactly one occurrence from ``l(l^2-5)/2`` to ``l(l^2-3)/2``.  Both
    counts are recomputed by brute force and checked against the closed
    forms.
    """
    if not p.is_classical or not p.has_distinct_letters:
        raise ValueError(
            f"{format_pattern(p)} must be classical with distinct letters"
        )
    ell = p.length
    if ell < 3:
        raise ValueError("classical patterns shorter than 3 admit no witness")
    ks = [1] * ell
    ks[p.letters[0] - 1] = 2
    ks[p.letters[-1] - 1] = 3
    M = Multiset(tuple(ks))
    kbar = list(ks)
    a, b = p.letters[1] - 1, p.letters[-1] - 1
    kbar[a], kbar[b] = kbar[b], kbar[a]
    Mbar = Multiset(tuple(kbar))
    c = distribution(M, p, budget=budget, threads=threads).count(1)
    cbar = distribution(Mbar, p, budget=budget, threads=threads).count(1)
    if c != ell * (ell * ell - 5) // 2 or cbar != ell * (ell * ell - 3) // 2:
        raise IntegrityError(
            f"witness counts ({c}, {cbar}) disagree with the closed forms for {format_pattern(p)}"
        )
    return WitnessPair(
        pattern=p, s=1, multiset=M, rearranged=Mbar, count=c, count_rearranged=cbar
    )


def consecutive_instability_witness(
    p: Pattern, *, budget: int = DEFAULT_BUDGET, threads: int = 1
) -> WitnessPair | None:
    """A double-occurrence witness against stability of a consecutive pattern.

    Works at the minimal extendable index ``i``.  Returns None when the
    extended permutation there has no repeated letter (this construction
    offers nothing for such patterns).  Otherwise swaps two multiplicities of
    the extended multiset -- which one depends on how many bands hold shared
    letters -- and verifies by brute force that the swap empties the
    two-occurrence class: ``|Mbar*(p;2)| = 0 < |M*(p;2)|``.
    """
    indices = extendable_indices(p)
    i = indices[0]
    gv = gap_vectors(p, i)
    M = extended_multiset(p, i)
    if max(M.multiplicities) < 2:
        return None
    k = p.length - i + 1
    positives = [j for j in range(k + 1) if gv.big1[j] > 0]  # 0-based bands
    ell_prime = M.n
    offsets: dict[str, int]
    if len(positives) == 1:
        j0 = positives[0]
        ell1 = j0 + sum(gv.big2[:j0])
        offsets = {"l_prime": ell_prime, "l1": ell1}
        swap = (ell1 + 1, ell_prime) if j0 < k else (1, ell1 + 1)
    else:
        j1, j2 = positives[0], positives[1]
        ell1 = j1 + sum(gv.big2[:j1])
        ell2 = j2 + gv.big1[j1] + sum(gv.big2[:j2])
        ell3 = j2 - 1 + 2 * gv.big1[j1] + sum(gv.big2[:j2])
        offsets = {"l_prime": ell_prime, "l1": ell1, "l2": ell2, "l3": ell3}
        swap = (ell1 + 1, ell_prime)
    kbar = list(M.multiplicities)
    if kbar[ell1] != 2:
        raise IntegrityError(
            f"offset arithmetic broke for {format_pattern(p)}: letter {ell1 + 1} is not doubled"
        )
    kbar[swap[0] - 1], kbar[swap[1] - 1] = kbar[swap[1] - 1], kbar[swap[0] - 1]
    Mbar = Multiset(tuple(kbar))
    c = distribution(M, p, budget=budget, threads=threads).count(2)
    cbar = distribution(Mbar, p, budget=budget, threads=threads).count(2)
    if not (cbar == 0 < c):
        raise IntegrityError(
            f"witness verification failed for {format_pattern(p)}: "
            f"|M*(p;2)|={c}, |Mbar*(p;2)|={cbar}"
        )
    return WitnessPair(
        pattern=p,
        s=2,
        multiset=M,
        rearranged=Mbar,
        count=c,
        count_rearranged=cbar,
        offsets=offsets,
    )
