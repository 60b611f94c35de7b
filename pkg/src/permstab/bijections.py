"""Letter-swap bijections that preserve pattern statistics.

All maps here send the words of a multiset onto the words of the neighbouring
multiset in which the multiplicities of ``i`` and ``i+1`` trade places, and
each preserves a different statistic:

* :func:`tau` relabels ``i <-> i+1`` pointwise (preserves nothing subtle;
  it is the building block of the others).
* :func:`psi` preserves the classical pair count ``1-2``.
* :func:`phi` preserves the adjacent pair counts ``12`` and ``21``.
* :func:`theta` preserves every monotone consecutive count ``12...l``.

Each rests on the same surgery: cut the word at its maximal factors over the
two-letter alphabet ``{i, i+1}`` (:func:`decompose`), rework only those
factors, and stitch the word back together.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Word


def reverse(w: Sequence[int]) -> Word:
    """The word read right to left."""
    return tuple(reversed(w))


def tau(w: Sequence[int], i: int) -> Word:
    """Swap the letters ``i`` and ``i+1`` pointwise."""
    _check_index(w, i)
    swap = {i: i + 1, i + 1: i}
    return tuple(swap.get(a, a) for a in w)


@dataclass(frozen=True)
class RunDecomposition:
    """A word cut as ``x1 X1 x2 X2 ... X_{r-1} x_r`` around the letter pair
    ``{i, i+1}``.

    The ``runs`` ``Xj`` are the maximal nonempty factors using only ``i`` and
    ``i+1``; the ``separators`` ``xj`` are what lies between (and around)
    them.  Maximality makes every interior separator nonempty; only the first
    and last may be empty.  There is always one more separator than runs.
    """

    index: int
    separators: tuple[Word, ...]
    runs: tuple[Word, ...]

    @property
    def rho(self) -> int:
        """Number of separators (runs + 1)."""
        return len(self.separators)

    def reassemble(self, runs: Sequence[Word] | None = None) -> Word:
        """Interleave separators with ``runs`` (defaults to the original ones).

        Replacement runs must match the original runs in number and lengths.
        """
        if runs is None:
            runs = self.runs
        if len(runs) != len(self.runs) or any(
            len(a) != len(b) for a, b in zip(runs, self.runs)
        ):
            raise ValueError("replacement runs must match the original block lengths")
        out: list[int] = []
        for j, x in enumerate(self.separators):
            out.extend(x)
            if j < len(runs):
                out.extend(runs[j])
        return tuple(out)


def decompose(w: Sequence[int], i: int) -> RunDecomposition:
    """Cut ``w`` into separators and maximal runs over ``{i, i+1}``."""
    _check_index(w, i)
    pair = (i, i + 1)
    separators: list[Word] = []
    runs: list[Word] = []
    current: list[int] = []
    in_run = False
    for a in w:
        if (a in pair) == in_run:
            current.append(a)
            continue
        (runs if in_run else separators).append(tuple(current))
        current = [a]
        in_run = not in_run
    (runs if in_run else separators).append(tuple(current))
    if in_run:
        separators.append(())
    return RunDecomposition(i, tuple(separators), tuple(runs))


def psi(w: Sequence[int], i: int) -> Word:
    """Reverse the concatenation of all runs, re-cut it to the original run
    lengths, stitch, then swap ``i <-> i+1``.

    Sends the words of a multiset onto those of its ``i``-neighbour while
    preserving the classical pair count ``1-2`` of every word.
    """
    d = decompose(w, i)
    pooled = reverse([a for run in d.runs for a in run])
    new_runs: list[Word] = []
    at = 0
    for run in d.runs:
        new_runs.append(pooled[at : at + len(run)])
        at += len(run)
    return tau(d.reassemble(new_runs), i)


def phi(w: Sequence[int], i: int) -> Word:
    """Reverse each run in place, stitch, then swap ``i <-> i+1``.

    Preserves both adjacent pair counts ``12`` and ``21``.
    """
    d = decompose(w, i)
    return tau(d.reassemble([reverse(run) for run in d.runs]), i)


def theta(w: Sequence[int], i: int) -> Word:
    """Swap ``i <-> i+1`` inside each run except at shielded slots.

    The shields: a run of length two or more than three keeps its first two
    slots untouched when they hold distinct letters, and likewise its last
    two; a run of length exactly three is rewritten by a fixed table; a
    lone letter always swaps.  Unlike :func:`psi` and :func:`phi` no global
    relabeling follows — the per-run rewriting already trades the letter
    counts.  Preserves every monotone consecutive count ``12...l`` and
    ``l...21``.
    """
    d = decompose(w, i)
    return d.reassemble([_theta_run(run, i) for run in d.runs])


# Length-3 runs, written over a = i, b = i+1.
_THETA_TABLE = {
    (0, 0, 0): (1, 1, 1),  # aaa -> bbb
    (1, 1, 1): (0, 0, 0),  # bbb -> aaa
    (0, 1, 0): (0, 1, 1),  # aba -> abb
    (1, 0, 1): (0, 0, 1),  # bab -> aab
    (1, 1, 0): (1, 0, 0),  # bba -> baa
    (0, 0, 1): (1, 0, 1),  # aab -> bab
    (0, 1, 1): (0, 1, 0),  # abb -> aba
    (1, 0, 0): (1, 1, 0),  # baa -> bba
}


def _theta_run(run: Word, i: int) -> Word:
    bits = tuple(a - i for a in run)
    L = len(bits)
    if L == 3:
        return tuple(b + i for b in _THETA_TABLE[bits])
    if L == 1:
        return (i + 1 - bits[0],)  # lone letter swaps
    shielded = [False] * L
    if bits[0] != bits[1]:
        shielded[0] = shielded[1] = True
    if bits[-1] != bits[-2]:
        shielded[-1] = shielded[-2] = True
    return tuple(run[t] if shielded[t] else i + 1 - bits[t] for t in range(L))


def _check_index(w: Sequence[int], i: int) -> None:
    if i < 1:
        raise IndexError(f"letter index must be >= 1, got {i}")
    if w and i > max(w):
        raise IndexError(f"letter index {i} out of range for word with letters <= {max(w)}")
