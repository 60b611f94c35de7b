"""Exact truncated multivariate power series over the rationals.

A :class:`TruncatedSeries` is a sparse exponent-vector-to-coefficient map
with a fixed per-variable degree cap.  Truncation is an ideal: products only
ever raise exponents, so discarding over-cap terms never disturbs the
coefficients that remain in range.  All arithmetic is exact (`Fraction`),
which keeps identity checks meaningful — equality means equality, not
closeness.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Exponents = tuple[int, ...]


class TruncatedSeries:
    """A polynomial truncated to ``exponent[i] <= caps[i]`` in every variable."""

    __slots__ = ("caps", "_coeffs")

    def __init__(
        self,
        caps: Iterable[int],
        coeffs: Mapping[Exponents, Fraction | int] | None = None,
    ):
        self.caps: Exponents = tuple(int(c) for c in caps)
        if any(c < 0 for c in self.caps):
            raise ValueError("degree caps must be nonnegative")
        clean: dict[Exponents, Fraction] = {}
        if coeffs:
            for exps, value in coeffs.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != len(self.caps):
                    raise ValueError(
                        f"exponent arity {len(exps)} != variable arity {len(self.caps)}"
                    )
                if any(e < 0 for e in exps):
                    raise ValueError("exponents must be nonnegative")
                value = Fraction(value)
                if value and all(e <= c for e, c in zip(exps, self.caps)):
                    clean[exps] = value
        self._coeffs = clean

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, caps: Iterable[int]) -> "TruncatedSeries":
        return cls(caps)

    @classmethod
    def constant(cls, value, caps: Iterable[int]) -> "TruncatedSeries":
        caps = tuple(caps)
        return cls(caps, {(0,) * len(caps): Fraction(value)})

    @classmethod
    def variable(cls, index: int, caps: Iterable[int]) -> "TruncatedSeries":
        caps = tuple(caps)
        if not 0 <= index < len(caps):
            raise ValueError(f"variable index {index} out of range")
        exps = tuple(1 if j == index else 0 for j in range(len(caps)))
        return cls(caps, {exps: Fraction(1)})

    # -- inspection ----------------------------------------------------

    @property
    def arity(self) -> int:
        return len(self.caps)

    def coefficient(self, exps: Iterable[int]) -> Fraction:
        return self._coeffs.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._coeffs.get((0,) * self.arity, Fraction(0))

    def terms(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(sorted(self._coeffs.items()))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.caps == other.caps and self._coeffs == other._coeffs

    def __hash__(self):  # pragma: no cover - mutability guard
        raise TypeError("TruncatedSeries is unhashable")

    def __repr__(self) -> str:
        parts = [f"{v}·x^{e}" for e, v in sorted(self._coeffs.items())[:6]]
        more = "" if len(self._coeffs) <= 6 else f" … ({len(self._coeffs)} terms)"
        return f"TruncatedSeries(caps={self.caps}: {' + '.join(parts) or '0'}{more})"

    # -- arithmetic ----------------------------------------------------

    def _check_same_shape(self, other: "TruncatedSeries") -> None:
        if self.caps != other.caps:
            raise ValueError(f"cap mismatch: {self.caps} vs {other.caps}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(other, self.caps)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_same_shape(other)
        out = dict(self._coeffs)
        for exps, value in other._coeffs.items():
            total = out.get(exps, Fraction(0)) + value
            if total:
                out[exps] = total
            else:
                out.pop(exps, None)
        return TruncatedSeries(self.caps, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.caps, {e: -v for e, v in self._coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(other, self.caps)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            scalar = Fraction(other)
            return TruncatedSeries(
                self.caps, {e: v * scalar for e, v in self._coeffs.items()}
            )
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_same_shape(other)
        caps = self.caps
        out: dict[Exponents, Fraction] = defaultdict(Fraction)
        for e1, v1 in self._coeffs.items():
            for e2, v2 in other._coeffs.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if all(e <= c for e, c in zip(exps, caps)):
                    out[exps] += v1 * v2
        return TruncatedSeries(caps, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers: use inverse() explicitly")
        result = TruncatedSeries.constant(1, self.caps)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, var: int) -> "TruncatedSeries":
        """Partial derivative.  The result is exact only up to cap−1 in
        ``var``; callers that need full precision must start from a series
        built with a higher cap."""
        if not 0 <= var < self.arity:
            raise ValueError(f"variable index {var} out of range")
        out: dict[Exponents, Fraction] = {}
        for exps, value in self._coeffs.items():
            k = exps[var]
            if k:
                lowered = exps[:var] + (k - 1,) + exps[var + 1 :]
                out[lowered] = value * k
        return TruncatedSeries(self.caps, out)

    def truncate(self, caps: Iterable[int]) -> "TruncatedSeries":
        return TruncatedSeries(tuple(caps), self._coeffs)

    # -- transcendental-shaped operations (still exact) -----------------

    def exp(self) -> "TruncatedSeries":
        """exp(f) for f with zero constant term, by the derivative
        recurrence: with E the Euler operator Σᵢ xᵢ∂ᵢ, E(g) = E(f)·g, so the
        degree-d part of g is (1/d)·[E(f)·g]_d.  Exact and terminating."""
        if self.constant_term() != 0:
            raise ValueError("exp needs a zero constant term")
        caps = self.caps
        euler = {e: v * sum(e) for e, v in self._coeffs.items()}
        total_cap = sum(caps)
        by_degree: dict[int, dict[Exponents, Fraction]] = {
            0: {(0,) * self.arity: Fraction(1)}
        }
        for d in range(1, total_cap + 1):
            layer: dict[Exponents, Fraction] = defaultdict(Fraction)
            for e1, v1 in euler.items():
                lower = by_degree.get(d - sum(e1))
                if not lower:
                    continue
                for e2, v2 in lower.items():
                    exps = tuple(a + b for a, b in zip(e1, e2))
                    if all(e <= c for e, c in zip(exps, caps)):
                        layer[exps] += v1 * v2
            cleaned = {e: v / d for e, v in layer.items() if v}
            if cleaned:
                by_degree[d] = cleaned
        merged: dict[Exponents, Fraction] = {}
        for layer in by_degree.values():
            merged.update(layer)
        return TruncatedSeries(caps, merged)

    def inverse(self) -> "TruncatedSeries":
        """1/f for f with constant term exactly 1, as the geometric series
        Σ (1−f)ⁿ.  (1−f) has zero constant term, so its powers gain total
        degree and the sum terminates under the caps."""
        if self.constant_term() != 1:
            raise ValueError("inverse needs a unit constant term")
        one = TruncatedSeries.constant(1, self.caps)
        g = one - self
        result = one
        power = one
        for _ in range(sum(self.caps)):
            power = power * g
            if power.is_zero():
                break
            result = result + power
        return result
