"""Exact Laurent polynomials in the formal symbol ``q^s``.

Coefficients are :class:`fractions.Fraction`; exponents are the integer
powers ``m`` of ``q^s``.  Nothing here ever evaluates ``q`` numerically.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping

BigRational = Fraction


def format_rational(x: Rational) -> str:
    """Render an exact rational as ``"p"`` or ``"p/q"``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


class QsLaurent:
    """Immutable Laurent polynomial ``sum_m c_m (q^s)^m`` in normal form."""

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, Rational] | Iterable[tuple[int, Rational]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for m, c in items:
            if not isinstance(m, int):
                raise TypeError(f"exponent must be an integer, got {m!r}")
            acc[m] = acc.get(m, Fraction(0)) + Fraction(c)
        self._coeffs = {m: acc[m] for m in sorted(acc) if acc[m] != 0}
        self._hash = None

    @classmethod
    def monomial(cls, m: int, c: Rational = 1) -> QsLaurent:
        return cls({m: c})

    @classmethod
    def constant(cls, c: Rational) -> QsLaurent:
        return cls({0: c})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def exponents(self) -> list[int]:
        return list(self._coeffs)

    def __getitem__(self, m: int) -> Fraction:
        return self._coeffs.get(m, Fraction(0))

    def __iter__(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._coeffs.items())

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QsLaurent):
            return self._coeffs == other._coeffs
        if isinstance(other, Rational):
            return self == QsLaurent.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._coeffs.items()))
        return self._hash

    def __add__(self, other: QsLaurent | Rational) -> QsLaurent:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QsLaurent([*self._coeffs.items(), *other._coeffs.items()])

    __radd__ = __add__

    def __neg__(self) -> QsLaurent:
        return QsLaurent({m: -c for m, c in self._coeffs.items()})

    def __sub__(self, other: QsLaurent | Rational) -> QsLaurent:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Rational) -> QsLaurent:
        return (-self) + other

    def __mul__(self, other: QsLaurent | Rational) -> QsLaurent:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QsLaurent(
            (m1 + m2, c1 * c2)
            for m1, c1 in self._coeffs.items()
            for m2, c2 in other._coeffs.items()
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QsLaurent:
        if k < 0:
            raise ValueError("negative powers are only defined for monomials")
        out = QsLaurent.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def is_palindromic(self) -> bool:
        """True when the coefficient of ``q^{ms}`` equals that of ``q^{-ms}``."""
        return all(self[-m] == c for m, c in self._coeffs.items())

    def serialize(self) -> str:
        return serialize_laurent(self)

    def __repr__(self) -> str:
        return f"QsLaurent({self.serialize() or '0'})"


def _coerce(x):
    if isinstance(x, QsLaurent):
        return x
    if isinstance(x, Rational):
        return QsLaurent.constant(x)
    return NotImplemented


def laurent_arith(a: QsLaurent, b: QsLaurent, op: str) -> QsLaurent:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}; expected 'add' or 'mul'")


def normalized_derivative(L: QsLaurent, r: int) -> Fraction:
    """``(log q)^-r d^r/ds^r L |_{s=0}``, i.e. ``sum_m m^r c_m`` with ``0^0 = 1``."""
    if r < 0:
        raise ValueError("derivative order must be non-negative")
    return sum((Fraction(m) ** r * c for m, c in L), Fraction(0))


def serialize_laurent(L: QsLaurent) -> str:
    # Zero polynomial serializes to the empty string.
    return "+".join(f"{m}:{format_rational(c)}" for m, c in L)


def parse_laurent(text: str) -> QsLaurent:
    text = text.strip()
    if not text:
        return QsLaurent()
    terms = []
    for item in text.split("+"):
        m, sep, c = item.partition(":")
        if not sep:
            raise ValueError(f"malformed term {item!r}; expected 'm:c'")
        terms.append((int(m), parse_rational(c)))
    return QsLaurent(terms)
