"""Ascent-count tables and their generating-function identities.

``E_{m,s}`` counts permutations of m letters with s ascents.  ``A_{K,s}``
counts words of the multiset with multiplicity multiset K having s ascents
(occurrences of consecutive "12"); ascent counts are orbit-stable, so K may
be taken sorted descending.  ``A_{m,k,s}`` abbreviates the doubled-letter
family K = {2,…,2 (k times), 1,…,1 (m−2k times)}.

Everything here is exact integer or rational arithmetic: the tables come
from recurrences with asserted integrality, the brute-force counters from
word enumeration, and the generating-function checks from truncated series
with `Fraction` coefficients.  Agreement between the independent routes is
the whole point, so no route is ever allowed to feed another.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial

from .core import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    IntegrityError,
    Multiset,
    count_words,
)
from .patterns import distribution, parse_pattern
from .series import TruncatedSeries

_ASCENT = parse_pattern("12")
_DESCENT = parse_pattern("21")


# ---------------------------------------------------------------------------
# Classical table


@dataclass(frozen=True)
class EulerianTable:
    """Rows of E_{m,s} for 0 ≤ m ≤ m_max; row m covers 0 ≤ s ≤ max(m−1, 0)."""

    m_max: int
    rows: tuple[tuple[int, ...], ...]

    def value(self, m: int, s: int) -> int:
        """E_{m,s}, with 0 outside the triangle."""
        if not 0 <= m <= self.m_max:
            raise ValueError(f"m={m} outside table (m_max={self.m_max})")
        row = self.rows[m]
        return row[s] if 0 <= s < len(row) else 0

    def to_json_dict(self) -> dict:
        return {
            "m_max": self.m_max,
            "rows": [[str(v) for v in row] for row in self.rows],
        }


def eulerian_table(m_max: int) -> EulerianTable:
    """Fill E_{m,s} by the two-term recurrence from E_{0,0}=1."""
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    rows: list[tuple[int, ...]] = [(1,)]
    for m in range(1, m_max + 1):
        prev = rows[m - 1]

        def at(s: int) -> int:
            return prev[s] if 0 <= s < len(prev) else 0

        rows.append(tuple((s + 1) * at(s) + (m - s) * at(s - 1) for s in range(m)))
    return EulerianTable(m_max, tuple(rows))


# ---------------------------------------------------------------------------
# Brute-force A_{K,s} and the insertion recurrence


_brute_memo: dict[tuple[int, ...], dict[int, int]] = {}


def _canonical_key(K) -> tuple[int, ...]:
    key = tuple(sorted((int(k) for k in K), reverse=True))
    if any(k < 1 for k in key):
        raise ValueError("multiplicities must be positive")
    return key


def _ascent_counts(
    key: tuple[int, ...], budget: int, threads: int, cache
) -> dict[int, int]:
    if key not in _brute_memo:
        if not key:
            _brute_memo[key] = {0: 1}  # the empty word
        else:
            d = distribution(
                Multiset(key), _ASCENT, budget=budget, threads=threads, cache=cache
            )
            _brute_memo[key] = dict(d.counts)
    return _brute_memo[key]


def a_bruteforce(
    K,
    s: int,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    cache=None,
) -> int:
    """|M*(consecutive 12; s)| for the multiset with multiplicities K, by
    exhaustive enumeration.  Ascent counts are orbit-stable, so K is
    canonicalized to descending order first."""
    key = _canonical_key(K)
    return _ascent_counts(key, budget, threads, cache).get(s, 0)


def a_recurrence_check(
    K,
    s: int,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    cache=None,
) -> int:
    """The insertion recurrence: for K containing a 1 and s ≥ 1,
    A_{K,s} = (s+1)·A_{K′,s} + (ΣK − s)·A_{K′,s−1} with K′ = K minus one 1.

    Both right-hand values come from brute force, so comparing the result
    against ``a_bruteforce(K, s)`` checks the recurrence, not itself."""
    key = _canonical_key(K)
    if 1 not in key:
        raise ValueError("the recurrence needs a letter of multiplicity 1")
    if s < 1:
        raise ValueError("the recurrence needs s >= 1")
    reduced = key[:-1]  # descending order puts the 1 last
    counts = _ascent_counts(reduced, budget, threads, cache)
    total = sum(key)
    return (s + 1) * counts.get(s, 0) + (total - s) * counts.get(s - 1, 0)


# ---------------------------------------------------------------------------
# The doubled-letter table A_{m,k,s}


@dataclass(frozen=True)
class ATable:
    """A_{m,k,s} for 0 ≤ m ≤ m_max, 0 ≤ k ≤ m/2; entries outside are 0."""

    m_max: int
    entries: dict[tuple[int, int], tuple[int, ...]]

    def value(self, m: int, k: int, s: int) -> int:
        row = self.entries.get((m, k))
        if row is None:
            if not 0 <= m <= self.m_max:
                raise ValueError(f"m={m} outside table (m_max={self.m_max})")
            return 0  # k > m/2 or negative
        return row[s] if 0 <= s < len(row) else 0

    def cells(self):
        """Yield (m, k, s, value) in a fixed order."""
        for (m, k) in sorted(self.entries):
            for s, value in enumerate(self.entries[(m, k)]):
                yield m, k, s, value

    def to_json_dict(self) -> dict:
        return {
            "m_max": self.m_max,
            "entries": [
                {"m": m, "k": k, "s": s, "value": str(v)} for m, k, s, v in self.cells()
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "k", "s", "value"])
        for m, k, s, v in self.cells():
            writer.writerow([m, k, s, v])
        return buf.getvalue()


def a_table(m_max: int) -> ATable:
    """Fill A_{m,k,s} from the halved three-term recurrence, with the
    classical rows at k=0 and the constant boundary at s=0.

    The recurrence's numerator must be even at every cell; an odd value can
    only come from table corruption and raises IntegrityError."""
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    classical = eulerian_table(m_max)
    entries: dict[tuple[int, int], tuple[int, ...]] = {(0, 0): (1,)}
    for m in range(1, m_max + 1):
        entries[(m, 0)] = classical.rows[m]
        for k in range(1, m // 2 + 1):

            def at(mm: int, kk: int, ss: int) -> int:
                row = entries.get((mm, kk))
                if row is None or not 0 <= ss < len(row):
                    return 0
                return row[ss]

            row = [1]
            for s in range(1, m):
                numerator = at(m, k - 1, s) + at(m - 1, k - 1, s) - at(m - 1, k - 1, s - 1)
                if numerator % 2:
                    raise IntegrityError(
                        f"odd numerator {numerator} at A_{{{m},{k},{s}}}: table corrupt"
                    )
                row.append(numerator // 2)
            entries[(m, k)] = tuple(row)
    return ATable(m_max, entries)


def doubled_key(m: int, k: int) -> tuple[int, ...]:
    """The multiplicity multiset behind A_{m,k,s}: k twos and m−2k ones."""
    if not 0 <= 2 * k <= m:
        raise ValueError(f"need 0 <= 2k <= m, got m={m}, k={k}")
    return (2,) * k + (1,) * (m - 2 * k)


# ---------------------------------------------------------------------------
# Generating-function routes


def _int_coefficient(series: TruncatedSeries, exps: tuple[int, ...]) -> int:
    value = series.coefficient(exps)
    if value.denominator != 1:
        raise IntegrityError(f"non-integer coefficient {value} at {exps}")
    return int(value)


def macmahon_coefficient(M: Multiset, s: int, *, budget: int = DEFAULT_BUDGET) -> int:
    """Coefficient of x₀ˢ·x₁^{k₁}⋯xₙ^{kₙ} in the n-factor product whose t-th
    factor is (x₁+…+x_t + x₀·(x_{t+1}+…+xₙ))^{k_t}.

    Equals the number of words of M with s ascents; the equality is what the
    tests check, so this function never consults word enumeration."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    k = M.multiplicities
    n = M.n
    caps = (s,) + k
    bound = s + 1
    for kt in k:
        bound *= kt + 1
    if bound > budget:
        raise BudgetExceededError(
            f"coefficient extraction needs up to {bound} terms, over the budget of {budget}"
        )
    arity = n + 1
    product = TruncatedSeries.constant(1, caps)
    for t in range(1, n + 1):
        terms: dict[tuple[int, ...], int] = {}
        for u in range(1, n + 1):
            exps = [0] * arity
            exps[u] = 1
            if u > t:
                exps[0] = 1  # marked letters sit left of the bar
            terms[tuple(exps)] = 1
        factor = TruncatedSeries(caps, terms)
        product = product * factor ** k[t - 1]
    return _int_coefficient(product, caps)


def gf21_coefficient(M: Multiset, s: int, *, budget: int = DEFAULT_BUDGET) -> int:
    """Coefficient of x₀ˢ·x₁^{k₁}⋯xₙ^{kₙ} in
    1 / (1 − e₁ + (1−x₀)e₂ − (1−x₀)²e₃ + …), the descent-marking generating
    function, with e_j the j-th elementary symmetric polynomial in x₁..xₙ.

    Equals the number of words of M with s descents (consecutive "21")."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    k = M.multiplicities
    n = M.n
    caps = (s,) + k
    bound = s + 1
    for kt in k:
        bound *= kt + 1
    if bound > budget:
        raise BudgetExceededError(
            f"coefficient extraction needs up to {bound} terms, over the budget of {budget}"
        )
    arity = n + 1
    one = TruncatedSeries.constant(1, caps)
    x0 = TruncatedSeries.variable(0, caps)
    denominator = one
    sign = -1
    shift_power = one  # (1 − x₀)^{j−1}
    for j in range(1, n + 1):
        terms: dict[tuple[int, ...], int] = {}
        for subset in combinations(range(1, n + 1), j):
            exps = [0] * arity
            for u in subset:
                exps[u] = 1
            terms[tuple(exps)] = 1
        e_j = TruncatedSeries(caps, terms)
        denominator = denominator + sign * (shift_power * e_j)
        sign = -sign
        shift_power = shift_power * (one - x0)
    return _int_coefficient(denominator.inverse(), caps)


def verify_gf(
    which: str,
    M: Multiset,
    s: int,
    *,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    cache=None,
) -> tuple[bool, int, int]:
    """Compare one generating-function coefficient against brute force.

    Returns (agree, series_value, bruteforce_value)."""
    if which == "12":
        series_value = macmahon_coefficient(M, s, budget=budget)
        pattern = _ASCENT
    elif which == "21":
        series_value = gf21_coefficient(M, s, budget=budget)
        pattern = _DESCENT
    else:
        raise ValueError("which must be '12' or '21'")
    brute = distribution(M, pattern, budget=budget, threads=threads, cache=cache).count(s)
    return series_value == brute, series_value, brute


# ---------------------------------------------------------------------------
# The PDE of the three-variable ascent series


def _egf_term(caps: tuple[int, int, int]) -> TruncatedSeries:
    """(1−z)·e^{x(1−z)} / (1 − z·e^{x(1−z)}) in variables (x, y, z).

    At y=0 this is the whole right side of the PDE and coincides with the
    classical two-variable ascent EGF (with its second variable named z)."""
    x = TruncatedSeries.variable(0, caps)
    z = TruncatedSeries.variable(2, caps)
    one = TruncatedSeries.constant(1, caps)
    exponential = (x * (one - z)).exp()
    return (one - z) * exponential * (one - z * exponential).inverse()


def a_series(table: ATable, caps: tuple[int, int, int]) -> TruncatedSeries:
    """Σ A_{m,k,s}/(m−2k)! · x^{m−2k} y^k z^s as a truncated series.

    Distinct (m,k) cells land on distinct (x,y) exponents since m = x+2k, so
    no accumulation is needed."""
    x_cap, y_cap, z_cap = caps
    coeffs: dict[tuple[int, int, int], Fraction] = {}
    for m, k, s, value in table.cells():
        xe = m - 2 * k
        if xe > x_cap or k > y_cap or s > z_cap or not value:
            continue
        coeffs[(xe, k, s)] = Fraction(value, factorial(xe))
    return TruncatedSeries(caps, coeffs)


def required_table_depth(x_deg: int, y_deg: int, z_deg: int) -> int:
    """Table depth for an exact check: the series is built two x-degrees
    wide of the target so that the second x-derivative is exact there."""
    return x_deg + 2 + 2 * y_deg


def verify_pde(
    x_deg: int,
    y_deg: int,
    z_deg: int,
    table: ATable | None = None,
) -> tuple[bool, tuple[int, int, int] | None]:
    """Check 𝓐 = (y/2)·𝓐ₓₓ + (y/2)(1−z)·𝓐ₓ + (1−z)e^{x(1−z)}/(1−z·e^{x(1−z)})
    coefficientwise up to the given degrees, exactly.

    Returns (True, None) on success, else (False, first_bad) where first_bad
    is the lexicographically smallest differing (x,y,z) exponent."""
    if min(x_deg, y_deg, z_deg) < 0:
        raise ValueError("degrees must be nonnegative")
    depth = required_table_depth(x_deg, y_deg, z_deg)
    if table is None:
        table = a_table(depth)
    elif table.m_max < depth:
        raise ValueError(
            f"insufficient table depth: need m_max >= {depth}, got {table.m_max}"
        )
    wide = (x_deg + 2, y_deg, z_deg)
    series = a_series(table, wide)
    y = TruncatedSeries.variable(1, wide)
    z = TruncatedSeries.variable(2, wide)
    one = TruncatedSeries.constant(1, wide)
    half = Fraction(1, 2)
    d_x = series.diff(0)
    right = (
        half * (y * d_x.diff(0))
        + half * (y * (one - z) * d_x)
        + _egf_term(wide)
    )
    target = (x_deg, y_deg, z_deg)
    left = series.truncate(target)
    right = right.truncate(target)
    if left == right:
        return True, None
    differing = [
        exps
        for exps in set(dict(left.terms())) | set(dict(right.terms()))
        if left.coefficient(exps) != right.coefficient(exps)
    ]
    return False, min(differing)
