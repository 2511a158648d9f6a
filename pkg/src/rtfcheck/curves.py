"""Curves over F_q described only by zeta data, and divisor shapes on them.

A curve is its zeta numerator ``P(T)``; an etale double cover ``Y -> X`` is
``X`` together with the L-polynomial of the quadratic character, so that
``P_Y = P_X * L(eta)``.  Point counts, closed-point counts and effective
divisor counts all follow from that data.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from math import comb, factorial, prod
from pathlib import Path
from typing import Iterator, Sequence

from .permchar import CycleType, make_partition

DEFAULT_COUNT_BOUND = 12
DEFAULT_SHAPE_DEGREE_CAP = 12


class InvalidZeta(ValueError):
    """Zeta data that cannot belong to a curve (or cover) over F_q."""


class MultiplicityUnsupported(ValueError):
    """The divisor shape has a point of multiplicity >= 2."""


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


def mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def _power_sums(coeffs: Sequence[int], n_max: int) -> list[int]:
    """s_n = sum of n-th powers of the reciprocal roots of P (Newton's identities)."""
    c = list(coeffs)
    s = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        acc = n * (c[n] if n < len(c) else 0)
        for k in range(1, min(n, len(c))):
            acc += c[k] * s[n - k]
        s[n] = -acc
    return s[1:]


@dataclass(frozen=True)
class ZetaData:
    """``Z(T) = P(T) / ((1 - T)(1 - qT))`` with ``P`` given constant term first."""

    q: int
    numerator: tuple[int, ...]
    bound: int = field(default=DEFAULT_COUNT_BOUND, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(int(c) for c in self.numerator))
        self.validate()

    @property
    def genus(self) -> int:
        return (len(self.numerator) - 1) // 2

    def validate(self) -> None:
        q, p = self.q, self.numerator
        if not is_prime_power(q):
            raise InvalidZeta(f"q={q} is not a prime power")
        if not p or p[0] != 1:
            raise InvalidZeta("zeta numerator must have constant term 1")
        if len(p) % 2 != 1:
            raise InvalidZeta(f"zeta numerator must have even degree, got degree {len(p) - 1}")
        g = self.genus
        for i in range(g + 1):
            if p[2 * g - i] != q ** (g - i) * p[i]:
                raise InvalidZeta(
                    f"functional equation fails: coefficient of T^{2 * g - i} is {p[2 * g - i]}, "
                    f"expected q^{g - i} * {p[i]} = {q ** (g - i) * p[i]}")
        counts = _point_counts(q, p, self.bound)
        for n, N in enumerate(counts, 1):
            if N < 0:
                raise InvalidZeta(f"negative point count N_{n} = {N}")
        _closed_points(counts, label="X")

    def series(self, d_max: int) -> list[int]:
        """Coefficients of the zeta series up to T^d_max."""
        p = list(self.numerator) + [0] * max(0, d_max + 1 - len(self.numerator))
        # divide by (1 - T): partial sums; by (1 - qT): running recurrence
        partial = []
        acc = 0
        for c in p[: d_max + 1]:
            acc += c
            partial.append(acc)
        out = []
        prev = 0
        for c in partial:
            prev = c + self.q * prev
            out.append(prev)
        return out


def _point_counts(q: int, coeffs: Sequence[int], n_max: int) -> list[int]:
    return [q ** n + 1 - s for n, s in enumerate(_power_sums(coeffs, n_max), 1)]


def _closed_points(counts: Sequence[int], label: str) -> list[int]:
    out = []
    for n in range(1, len(counts) + 1):
        total = sum(mobius(n // m) * counts[m - 1] for m in range(1, n + 1) if n % m == 0)
        if total % n:
            raise InvalidZeta(f"{label}: closed-point count a_{n} = {total}/{n} is not an integer")
        if total < 0:
            raise InvalidZeta(f"{label}: negative closed-point count a_{n} = {total // n}")
        out.append(total // n)
    return out


def point_counts(z: ZetaData, n_max: int) -> list[int]:
    """N_n = #X(F_{q^n}) for n = 1..n_max."""
    counts = _point_counts(z.q, z.numerator, n_max)
    for n, N in enumerate(counts, 1):
        if N < 0:
            raise InvalidZeta(f"negative point count N_{n} = {N}")
    return counts


def closed_point_counts(z: ZetaData, n_max: int) -> list[int]:
    """a_n = number of closed points of degree n, by Mobius inversion."""
    return _closed_points(point_counts(z, n_max), label="X")


def effective_divisor_count(z: ZetaData, d: int) -> int:
    if d < 0:
        raise ValueError("degree must be non-negative")
    return z.series(d)[d]


def poly_mul_int(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@dataclass(frozen=True)
class DoubleCover:
    """Etale double cover ``Y -> X`` encoded by ``L(eta, T)`` of degree ``2g - 2``."""

    base: ZetaData
    eta_numerator: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "eta_numerator", tuple(int(c) for c in self.eta_numerator))
        g = self.base.genus
        if g < 1:
            raise InvalidZeta("a genus-0 curve has no nontrivial etale double cover")
        eta = self.eta_numerator
        if not eta or eta[0] != 1:
            raise InvalidZeta("L(eta, T) must have constant term 1")
        if len(eta) - 1 != 2 * g - 2:
            raise InvalidZeta(
                f"L(eta, T) must have degree 2g-2 = {2 * g - 2} for an unramified nontrivial "
                f"character, got degree {len(eta) - 1}")
        # Validates the functional equation and counts of Y (genus 2g - 1).
        object.__setattr__(self, "_zeta_y", ZetaData(self.base.q, self.cover_numerator(), self.base.bound))

    @property
    def q(self) -> int:
        return self.base.q

    def cover_numerator(self) -> tuple[int, ...]:
        return tuple(poly_mul_int(self.base.numerator, self.eta_numerator))

    @property
    def zeta_y(self) -> ZetaData:
        return self._zeta_y


def cover_closed_points(c: DoubleCover, n_max: int) -> list[int]:
    return _closed_points(point_counts(c.zeta_y, n_max), label="Y")


# -- curve config files ----------------------------------------------------------

CONFIG_FIELDS = ("q", "zeta_numerator", "eta_numerator")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def dump_curve_config(c: DoubleCover) -> str:
    payload = {
        "q": c.base.q,
        "zeta_numerator": list(c.base.numerator),
        "eta_numerator": list(c.eta_numerator),
    }
    return json.dumps(payload, indent=2) + "\n"


def _field_line(text: str, key: str) -> int | None:
    needle = f'"{key}"'
    for lineno, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return lineno
    return None


def parse_curve_config(text: str) -> DoubleCover:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(data, dict):
        raise ConfigError("curve config must be a single object", 1)
    unknown = sorted(set(data) - set(CONFIG_FIELDS))
    if unknown:
        raise ConfigError(f"unknown field {unknown[0]!r}", _field_line(text, unknown[0]))
    for key in CONFIG_FIELDS:
        if key not in data:
            raise ConfigError(f"missing field {key!r}", 1)
    if not isinstance(data["q"], int) or isinstance(data["q"], bool):
        raise ConfigError("q must be an integer", _field_line(text, "q"))
    for key in ("zeta_numerator", "eta_numerator"):
        value = data[key]
        if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
            raise ConfigError(f"{key} must be a list of integers", _field_line(text, key))
    try:
        base = ZetaData(data["q"], data["zeta_numerator"])
    except InvalidZeta as exc:
        key = "q" if "prime power" in str(exc) else "zeta_numerator"
        raise ConfigError(str(exc), _field_line(text, key)) from None
    try:
        return DoubleCover(base, data["eta_numerator"])
    except InvalidZeta as exc:
        raise ConfigError(str(exc), _field_line(text, "eta_numerator")) from None


def load_curve_config(path: str | Path) -> DoubleCover:
    return parse_curve_config(Path(path).read_text(encoding="utf-8"))


# -- divisor shapes --------------------------------------------------------------

@dataclass(frozen=True, order=True)
class DivisorShape:
    """Multiset of ``(closed-point degree, multiplicity)`` entries, sorted."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        entries = tuple(sorted((int(d), int(m)) for d, m in self.entries))
        if any(d < 1 or m < 1 for d, m in entries):
            raise ValueError(f"degrees and multiplicities must be positive: {entries}")
        object.__setattr__(self, "entries", entries)

    @property
    def total_degree(self) -> int:
        return sum(d * m for d, m in self.entries)

    @property
    def multiplicity_free(self) -> bool:
        return all(m == 1 for _, m in self.entries)

    def __str__(self) -> str:
        return format_shape(self)


def format_shape(shape: DivisorShape) -> str:
    """``"1:1,1:1,2:1"`` (degree:multiplicity); the empty shape is ``"-"``."""
    if not shape.entries:
        return "-"
    return ",".join(f"{d}:{m}" for d, m in shape.entries)


def parse_shape(text: str) -> DivisorShape:
    text = text.strip()
    if text in ("", "-"):
        return DivisorShape()
    entries = []
    for item in text.split(","):
        d, sep, m = item.partition(":")
        entries.append((int(d), int(m) if sep else 1))
    return DivisorShape(tuple(entries))


def _multiplicity_multisets(total: int, max_parts: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of positive ints summing to ``total`` with at most ``max_parts`` parts."""
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    top = total if largest is None else min(largest, total)
    for first in range(top, 0, -1):
        for rest in _multiplicity_multisets(total - first, max_parts - 1, first):
            yield (first, *rest)


def _choose_points(available: int, mults: tuple[int, ...]) -> int:
    """Ways to assign distinct points (from ``available``) to the multiplicity slots."""
    k = len(mults)
    if k > available:
        return 0
    ways = factorial(available) // factorial(available - k)
    return ways // prod(factorial(c) for c in Counter(mults).values())


def enumerate_shapes(counts: Sequence[int], degree: int) -> list[tuple[DivisorShape, int]]:
    """Every realizable shape of total ``degree`` with its number of divisors.

    ``counts[e - 1]`` is the number of closed points of degree ``e``.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if len(counts) < degree:
        raise ValueError(f"closed-point counts only cover degrees up to {len(counts)}, need {degree}")
    results: list[tuple[DivisorShape, int]] = []

    def walk(e: int, remaining: int, entries: list[tuple[int, int]], ways: int) -> None:
        if remaining == 0:
            results.append((DivisorShape(tuple(entries)), ways))
            return
        if e > remaining:
            return
        a = counts[e - 1]
        # weight carried by degree-e points: e * t for t = 0..remaining // e
        for t in range(remaining // e, -1, -1):
            for mults in _multiplicity_multisets(t, a):
                w = _choose_points(a, mults)
                if w:
                    walk(e + 1, remaining - e * t, entries + [(e, m) for m in mults], ways * w)

    walk(1, degree, [], 1)
    results.sort(key=lambda item: item[0])
    return results


def splitting_count(shape: DivisorShape, i: int) -> int:
    """Rational decompositions ``E = E1 + E2`` with ``deg E1 = i``."""
    if not 0 <= i <= shape.total_degree:
        raise ValueError(f"i={i} outside 0..{shape.total_degree}")
    return splitting_polynomial(shape)[i]


def splitting_polynomial(shape: DivisorShape) -> list[int]:
    """Coefficients of ``prod over entries (sum_{j=0}^m x^{j deg})``."""
    poly = [1]
    for d, m in shape.entries:
        factor = [0] * (d * m + 1)
        for j in range(m + 1):
            factor[j * d] = 1
        poly = poly_mul_int(poly, factor)
    return poly


def shape_cycle_type(shape: DivisorShape) -> CycleType:
    """Frobenius cycle type on the geometric points of a reduced divisor."""
    if not shape.multiplicity_free:
        raise MultiplicityUnsupported(
            f"shape {format_shape(shape)} has a point of multiplicity > 1; "
            "no stalk model is available there")
    return make_partition(d for d, _ in shape.entries)


def binomial_divisor_count(counts: Sequence[int], d: int) -> int:
    """Coefficient of T^d in prod_e (1 - T^e)^(-a_e); independent of shape enumeration."""
    series = [1] + [0] * d
    for e, a in enumerate(counts[:d], 1):
        if a == 0:
            continue
        # multiply by (1 - T^e)^(-a) = sum_t C(a + t - 1, t) T^{e t}
        new = [0] * (d + 1)
        for i, c in enumerate(series):
            if c:
                for t in range((d - i) // e + 1):
                    new[i + e * t] += c * comb(a + t - 1, t)
        series = new
    return series[d]
