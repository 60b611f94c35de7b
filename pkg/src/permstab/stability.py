"""Orbit stability testing and the pattern-family scanner.

Reordering the multiplicity vector of a multiset acts on its words by
relabeling letters.  A pattern is *stable* on a multiset when the
distribution of its occurrence counts is the same for every reordering of
the multiplicities, and *s-stable* when only the count of words with exactly
``s`` occurrences must survive.  These functions falsify stability by
exhaustive comparison over the whole orbit; they never prove it, so the
positive verdict is literally "no counterexample at this scale".

The scanner walks a family of patterns against every canonical multiset
(multiplicities sorted descending) within size bounds.  Orbits are
reconstructed from the canonical form only, so no multiset is ever examined
twice; the orbit graph is connected under adjacent transpositions, hence
comparing every member against the canonical one covers all of them.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from typing import Sequence

from .core import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    Multiset,
    canonical_form,
    count_words,
    format_multiset,
    multiplicity_rearrangements,
)
from .patterns import (
    Pattern,
    all_patterns,
    distributions,
    format_pattern,
    parse_pattern,
)


@dataclass(frozen=True)
class StabilityWitness:
    """An orbit member whose count at ``s`` differs from the canonical one."""

    multiset: Multiset
    s: int
    count_canonical: int
    count_other: int

    def to_json_dict(self) -> dict:
        return {
            "multiset": list(self.multiset.multiplicities),
            "s": self.s,
            "count_canonical": str(self.count_canonical),
            "count_other": str(self.count_other),
        }


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of one orbit comparison."""

    pattern: Pattern
    multiset: Multiset  # canonical representative, multiplicities descending
    stable: bool
    s_restriction: int | None = None  # None: full distributions were compared
    witness: StabilityWitness | None = None

    @property
    def verdict(self) -> str:
        return "stable-on-orbit" if self.stable else "unstable"

    def to_json_dict(self) -> dict:
        return {
            "pattern": format_pattern(self.pattern),
            "multiset": list(self.multiset.multiplicities),
            "s_restriction": self.s_restriction,
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json_dict(),
        }


def _cell_distributions(M, patterns, budget, threads, cache):
    """Per-pattern {s: count} maps for one multiset, cache-aware.

    Returns (dict pattern -> counts, words actually enumerated)."""
    out = {}
    missing = []
    for p in patterns:
        hit = cache.lookup(M, p) if cache is not None else None
        if hit is not None:
            out[p] = dict(hit)
        else:
            missing.append(p)
    enumerated = 0
    if missing:
        computed = distributions(M, missing, budget=budget, threads=threads)
        for p, d in zip(missing, computed):
            if cache is not None:
                cache.store(M, p, d)
            out[p] = d
        enumerated = count_words(M)
    return out, enumerated


def _orbit_compare(
    M: Multiset,
    p: Pattern,
    s: int | None,
    budget: int,
    threads: int,
    cache,
) -> StabilityVerdict:
    canonical = canonical_form(M)
    orbit = multiplicity_rearrangements(M)
    per_member = count_words(canonical)
    if per_member * len(orbit) > budget:
        raise BudgetExceededError(
            f"orbit of {format_multiset(canonical)} needs {per_member * len(orbit)} words, "
            f"over the budget of {budget}"
        )
    base, _ = _cell_distributions(canonical, [p], budget, threads, cache)
    base = base[p]
    for other in orbit:
        if other == canonical:
            continue
        dist, _ = _cell_distributions(other, [p], budget, threads, cache)
        dist = dist[p]
        if s is None:
            if dist != base:
                bad = min(
                    t
                    for t in set(base) | set(dist)
                    if base.get(t, 0) != dist.get(t, 0)
                )
                return StabilityVerdict(
                    p,
                    canonical,
                    False,
                    None,
                    StabilityWitness(other, bad, base.get(bad, 0), dist.get(bad, 0)),
                )
        else:
            if dist.get(s, 0) != base.get(s, 0):
                return StabilityVerdict(
                    p,
                    canonical,
                    False,
                    s,
                    StabilityWitness(other, s, base.get(s, 0), dist.get(s, 0)),
                )
    return StabilityVerdict(p, canonical, True, s, None)


def is_stable_on(
    M: Multiset,
    p: Pattern,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    cache=None,
) -> StabilityVerdict:
    """Compare the full occurrence distribution of ``p`` across the whole
    multiplicity-rearrangement orbit of ``M``.

    The witness, when one exists, is the lexicographically first differing
    orbit member together with the smallest differing ``s``.
    """
    return _orbit_compare(M, p, None, budget, threads, cache)


def is_i_stable_on(
    M: Multiset,
    p: Pattern,
    s: int,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    cache=None,
) -> StabilityVerdict:
    """Like :func:`is_stable_on` but compares only the single entry ``s``."""
    if s < 0:
        raise ValueError("occurrence count must be nonnegative")
    return _orbit_compare(M, p, s, budget, threads, cache)


# ---------------------------------------------------------------------------
# Family scanner


VERDICT_UNSTABLE = "unstable (witness found)"
VERDICT_NO_COUNTEREXAMPLE = "no counterexample at this scale"


@dataclass
class ScanEntry:
    pattern: Pattern
    verdict: str = VERDICT_NO_COUNTEREXAMPLE
    witness: StabilityWitness | None = None
    witness_size: int | None = None
    cells_skipped: int = 0

    def to_json_dict(self) -> dict:
        return {
            "pattern": format_pattern(self.pattern),
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json_dict(),
            "witness_size": self.witness_size,
            "cells_skipped": self.cells_skipped,
        }


@dataclass
class ScanReport:
    family: str
    max_size: int
    max_letters: int
    s_restriction: int | None
    entries: list[ScanEntry]
    words_enumerated: int = 0
    elapsed_seconds: float = 0.0

    def entry(self, text: str) -> ScanEntry:
        for e in self.entries:
            if format_pattern(e.pattern) == text:
                return e
        raise KeyError(text)

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "max_size": self.max_size,
            "max_letters": self.max_letters,
            "s_restriction": self.s_restriction,
            "results": [e.to_json_dict() for e in self.entries],
            "words_enumerated": self.words_enumerated,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["pattern", "verdict", "witness_multiset", "s", "count_a", "count_b"])
        for e in self.entries:
            if e.witness is None:
                writer.writerow([format_pattern(e.pattern), e.verdict, "", "", "", ""])
            else:
                writer.writerow(
                    [
                        format_pattern(e.pattern),
                        e.verdict,
                        format_multiset(e.witness.multiset),
                        e.witness.s,
                        e.witness.count_canonical,
                        e.witness.count_other,
                    ]
                )
        return buf.getvalue()


def parse_family(family: str) -> list[Pattern]:
    """Decode a family description: ``consecutive:3``, ``classical:3-4``
    (length ranges), or an explicit comma-separated pattern list."""
    family = family.strip()
    kind, _, rest = family.partition(":")
    if kind.strip() in ("consecutive", "classical") and rest:
        lo, _, hi = rest.partition("-")
        try:
            lengths = range(int(lo), int(hi or lo) + 1)
        except ValueError:
            raise ValueError(f"bad family length range {rest!r}") from None
        out: list[Pattern] = []
        for L in lengths:
            out.extend(all_patterns(L, kind.strip()))
        return out
    return [parse_pattern(t) for t in family.split(",") if t.strip()]


def partitions(total: int, max_parts: int) -> list[tuple[int, ...]]:
    """Partitions of ``total`` into at most ``max_parts`` parts, each as a
    descending tuple, in descending lexicographic order."""
    out: list[tuple[int, ...]] = []

    def rec(left: int, cap: int, parts: int, acc: tuple[int, ...]) -> None:
        if left == 0:
            out.append(acc)
            return
        if parts == 0:
            return
        for head in range(min(left, cap), 0, -1):
            rec(left - head, head, parts - 1, acc + (head,))

    rec(total, total, max_parts, ())
    return out


def scan(
    family: str | Sequence[Pattern],
    max_size: int,
    max_letters: int,
    *,
    s: int | None = None,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    cache=None,
) -> ScanReport:
    """Hunt for instability witnesses across a family of patterns.

    Every canonical multiset (descending multiplicities) with size up to
    ``max_size`` and at most ``max_letters`` distinct letters is tried in a
    fixed order: sizes ascending, partitions descending-lex, orbit members
    ascending-lex.  A pattern leaves the hunt at its first witness.  Cells
    whose whole orbit would exceed the word budget are skipped and counted,
    never fatal.  With ``s`` given, only that single occurrence count is
    compared (s-stability).
    """
    if isinstance(family, str):
        description = family
        pats = parse_family(family)
    else:
        pats = list(family)
        description = ",".join(format_pattern(p) for p in pats)
    started = time.monotonic()
    report = ScanReport(
        family=description,
        max_size=max_size,
        max_letters=max_letters,
        s_restriction=s,
        entries=[ScanEntry(p) for p in pats],
    )
    by_pattern = {format_pattern(e.pattern): e for e in report.entries}
    unresolved = list(pats)
    for size in range(1, max_size + 1):
        if not unresolved:
            break
        for part in partitions(size, max_letters):
            if not unresolved:
                break
            if len(part) < 2 or part[0] == part[-1]:
                continue  # singleton orbit: nothing to compare
            M = Multiset(part)
            orbit = multiplicity_rearrangements(M)
            if count_words(M) * len(orbit) > budget:
                for p in unresolved:
                    by_pattern[format_pattern(p)].cells_skipped += 1
                continue
            cell_patterns = list(unresolved)
            base, enumerated = _cell_distributions(M, cell_patterns, budget, threads, cache)
            report.words_enumerated += enumerated
            found: dict[str, StabilityWitness] = {}
            for other in orbit:
                if other == M:
                    continue
                live = [p for p in cell_patterns if format_pattern(p) not in found]
                if not live:
                    break
                dists, enumerated = _cell_distributions(other, live, budget, threads, cache)
                report.words_enumerated += enumerated
                for p in live:
                    b, d = base[p], dists[p]
                    if s is None:
                        if d != b:
                            bad = min(
                                t
                                for t in set(b) | set(d)
                                if b.get(t, 0) != d.get(t, 0)
                            )
                            found[format_pattern(p)] = StabilityWitness(
                                other, bad, b.get(bad, 0), d.get(bad, 0)
                            )
                    elif d.get(s, 0) != b.get(s, 0):
                        found[format_pattern(p)] = StabilityWitness(
                            other, s, b.get(s, 0), d.get(s, 0)
                        )
            for text, witness in found.items():
                entry = by_pattern[text]
                entry.verdict = VERDICT_UNSTABLE
                entry.witness = witness
                entry.witness_size = size
            unresolved = [p for p in unresolved if format_pattern(p) not in found]
    report.elapsed_seconds = time.monotonic() - started
    return report
