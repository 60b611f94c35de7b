"""Persistent distribution cache: one JSON object per line, append-only.

Each line records one exact count:

    {"k": [2,1,1], "pattern": "1-2", "s": 0, "count": "4", "provenance": "bruteforce"}

The key is (multiplicity vector, pattern text, s).  For patterns proven
stable on every orbit the vector is stored sorted descending, so lookups
from any reordering of the same multiset hit the same rows; every other
pattern keys on the ordered vector as given — correctness must not assume
the stability conjecture.  A second route recomputing a cached key must
agree bit-for-bit: a conflicting duplicate is a fatal integrity error, not
a cache miss.  All writes go through a single in-process writer.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import IntegrityError, Multiset, count_words
from .patterns import Pattern, format_pattern, is_proven_stable

PROVENANCES = ("bruteforce", "recurrence", "macmahon")

_REQUIRED_FIELDS = ("k", "pattern", "s", "count", "provenance")


class ResultCache:
    """Line-oriented store of exact pattern-count results."""

    def __init__(self, path):
        self.path = Path(path)
        # (multiplicities, pattern text) -> {s: count}; provenance kept per key+s
        self._rows: dict[tuple[tuple[int, ...], str], dict[int, int]] = {}
        self._provenance: dict[tuple[tuple[int, ...], str, int], str] = {}
        if self.path.exists():
            self._load()

    # -- persistence -----------------------------------------------------

    def _load(self) -> None:
        with open(self.path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise IntegrityError(
                        f"{self.path}:{lineno}: corrupt cache line: {exc}"
                    ) from None
                self._ingest(record, f"{self.path}:{lineno}")

    def _ingest(self, record, where: str) -> tuple[tuple[int, ...], str, int, int]:
        if not isinstance(record, dict) or set(record) != set(_REQUIRED_FIELDS):
            raise IntegrityError(f"{where}: cache entry must have fields {_REQUIRED_FIELDS}")
        k = record["k"]
        if (
            not isinstance(k, list)
            or not k
            or not all(isinstance(v, int) and v >= 1 for v in k)
        ):
            raise IntegrityError(f"{where}: bad multiplicity vector {k!r}")
        text = record["pattern"]
        if not isinstance(text, str) or not text:
            raise IntegrityError(f"{where}: bad pattern {text!r}")
        s = record["s"]
        if not isinstance(s, int) or s < 0:
            raise IntegrityError(f"{where}: bad occurrence count index {s!r}")
        raw = record["count"]
        if not isinstance(raw, str) or not raw.isdigit():
            raise IntegrityError(f"{where}: count must be a decimal string, got {raw!r}")
        count = int(raw)
        if record["provenance"] not in PROVENANCES:
            raise IntegrityError(f"{where}: unknown provenance {record['provenance']!r}")
        key = (tuple(k), text)
        existing = self._rows.get(key, {}).get(s)
        if existing is not None and existing != count:
            raise IntegrityError(
                f"{where}: conflicting counts for k={list(key[0])} pattern={text!r} s={s}: "
                f"{existing} vs {count}"
            )
        self._rows.setdefault(key, {})[s] = count
        self._provenance[(key[0], text, s)] = record["provenance"]
        return key[0], text, s, count

    def _append(self, record: dict) -> None:
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")

    # -- keys --------------------------------------------------------------

    @staticmethod
    def key_for(M: Multiset, pattern: Pattern) -> tuple[int, ...]:
        """Stable patterns key on the sorted multiset; others keep order."""
        if is_proven_stable(pattern):
            return tuple(sorted(M.multiplicities, reverse=True))
        return M.multiplicities

    # -- API -----------------------------------------------------------------

    def lookup(self, M: Multiset, pattern: Pattern) -> dict[int, int] | None:
        """The complete distribution for (M, pattern), or None.

        Complete means the stored counts account for every word of M; partial
        rows (single-s stores from cross-checks) never satisfy a lookup."""
        rows = self._rows.get((self.key_for(M, pattern), format_pattern(pattern)))
        if rows and sum(rows.values()) == count_words(M):
            return dict(rows)
        return None

    def store_value(
        self,
        M: Multiset,
        pattern: Pattern,
        s: int,
        count: int,
        provenance: str = "bruteforce",
    ) -> None:
        """Record one count; re-recording must agree exactly."""
        if provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}")
        if s < 0 or count < 0:
            raise ValueError("s and count must be nonnegative")
        key = (self.key_for(M, pattern), format_pattern(pattern))
        existing = self._rows.get(key, {}).get(s)
        if existing is not None:
            if existing != count:
                raise IntegrityError(
                    f"conflicting counts for k={list(key[0])} pattern={key[1]!r} s={s}: "
                    f"cached {existing}, new {count} ({provenance})"
                )
            return  # idempotent
        record = {
            "k": list(key[0]),
            "pattern": key[1],
            "s": s,
            "count": str(count),
            "provenance": provenance,
        }
        self._append(record)
        self._rows.setdefault(key, {})[s] = count
        self._provenance[(key[0], key[1], s)] = provenance

    def store(
        self,
        M: Multiset,
        pattern: Pattern,
        counts: dict[int, int],
        provenance: str = "bruteforce",
    ) -> None:
        """Record a whole distribution (used after a brute-force pass)."""
        for s in sorted(counts):
            if counts[s]:
                self.store_value(M, pattern, s, counts[s], provenance)

    def stats(self) -> dict:
        by_provenance: dict[str, int] = {p: 0 for p in PROVENANCES}
        entries = 0
        for (k, text, s), provenance in self._provenance.items():
            entries += 1
            by_provenance[provenance] += 1
        return {
            "path": str(self.path),
            "entries": entries,
            "distributions": len(self._rows),
            "by_provenance": by_provenance,
        }

    def clear(self) -> None:
        if self.path.exists():
            self.path.unlink()
        self._rows.clear()
        self._provenance.clear()
