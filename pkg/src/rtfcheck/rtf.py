"""Orbit-by-orbit comparison of the analytic and geometric trace functionals.

For a divisor shape of degree ``2d`` the analytic side is the Laurent
polynomial ``sum_i N_i q^{2(i-d)s}`` built from splitting counts; its
normalized derivatives are compared with ``Tr(H^r o Frob)`` on the tensor
model, computed both by brute force and through the isotypic block form.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .curves import (
    DivisorShape,
    MultiplicityUnsupported,
    format_shape,
    shape_cycle_type,
    splitting_polynomial,
)
from .exactnum import QsLaurent, format_rational, normalized_derivative, serialize_laurent
from .tensorrep import DEFAULT_TENSOR_CAP, brute_trace, structured_trace

TSV_COLUMNS = ("shape", "d", "r", "J_r", "I_r_brute", "I_r_structured", "equal")


class IdentityViolation(AssertionError):
    """Raised when J_r and I_r disagree for some orbit; carries the full report."""

    def __init__(self, report: "OrbitReport"):
        self.report = report
        bad = [row.r for row in report.rows if not row.equal]
        super().__init__(f"identity fails for shape {format_shape(report.shape)} at r = {bad}")


def _check_degree(shape: DivisorShape, d: int) -> None:
    if shape.total_degree != 2 * d:
        raise ValueError(f"shape {format_shape(shape)} has degree {shape.total_degree}, expected 2d = {2 * d}")


def geometric_orbital(shape: DivisorShape, d: int) -> QsLaurent:
    """``sum_i N_i(shape) q^{2(i-d)s}``."""
    _check_degree(shape, d)
    return QsLaurent({2 * (i - d): n for i, n in enumerate(splitting_polynomial(shape)) if n})


def jr_value(shape: DivisorShape, d: int, r: int) -> Fraction:
    if r < 0:
        raise ValueError("r must be non-negative")
    via_derivative = normalized_derivative(geometric_orbital(shape, d), r)
    direct = 2 ** r * sum(Fraction(i - d) ** r * n for i, n in enumerate(splitting_polynomial(shape)))
    if via_derivative != direct:
        raise ArithmeticError(f"J_{r} routes disagree: {via_derivative} != {direct}")
    return via_derivative


def ir_value(shape: DivisorShape, r: int, path: str, cap: int | None = None) -> Fraction:
    """Tr(H^r o Frob) on the stalk model of a reduced divisor."""
    ct = shape_cycle_type(shape)
    n = shape.total_degree
    if path == "brute":
        return Fraction(brute_trace(n, r, ct, cap))
    if path == "structured":
        return Fraction(structured_trace(n, r, ct))
    raise ValueError(f"unknown path {path!r}; expected 'brute' or 'structured'")


@dataclass(frozen=True)
class OrbitRow:
    r: int
    j_r: Fraction
    i_r_brute: Optional[Fraction]
    i_r_structured: Optional[Fraction]

    @property
    def equal(self) -> bool:
        return all(v == self.j_r for v in (self.i_r_brute, self.i_r_structured) if v is not None)


def _fmt(x: Optional[Fraction]) -> str:
    return "NA" if x is None else format_rational(x)


@dataclass(frozen=True)
class OrbitReport:
    shape: DivisorShape
    d: int
    orbital: QsLaurent
    rows: tuple[OrbitRow, ...] = field(default_factory=tuple)

    @property
    def all_equal(self) -> bool:
        return all(row.equal for row in self.rows)

    def tsv_rows(self) -> list[list[str]]:
        shape = format_shape(self.shape)
        return [[shape, str(self.d), str(row.r), _fmt(row.j_r), _fmt(row.i_r_brute),
                 _fmt(row.i_r_structured), "1" if row.equal else "0"] for row in self.rows]

    def to_tsv(self, header: bool = True) -> str:
        lines = ["\t".join(TSV_COLUMNS)] if header else []
        lines += ["\t".join(r) for r in self.tsv_rows()]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "shape": format_shape(self.shape),
            "d": self.d,
            "orbital": serialize_laurent(self.orbital),
            "rows": [
                {
                    "r": row.r,
                    "J_r": format_rational(row.j_r),
                    "I_r_brute": None if row.i_r_brute is None else format_rational(row.i_r_brute),
                    "I_r_structured": None if row.i_r_structured is None else format_rational(row.i_r_structured),
                    "equal": row.equal,
                }
                for row in self.rows
            ],
        }


def compare_orbit(shape: DivisorShape, d: int, r_max: int, cap: int | None = None,
                  raise_on_violation: bool = True) -> OrbitReport:
    """J_r vs I_r for r = 0..r_max.

    I-columns are left empty for shapes with multiplicity, and the brute
    column is empty when ``2d`` exceeds the tensor cap.
    """
    _check_degree(shape, d)
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    cap = DEFAULT_TENSOR_CAP if cap is None else cap
    reduced = shape.multiplicity_free
    use_brute = reduced and 2 * d <= cap
    rows = []
    for r in range(r_max + 1):
        j = jr_value(shape, d, r)
        brute = ir_value(shape, r, "brute", cap) if use_brute else None
        structured = ir_value(shape, r, "structured") if reduced else None
        rows.append(OrbitRow(r, j, brute, structured))
    report = OrbitReport(shape, d, geometric_orbital(shape, d), tuple(rows))
    if raise_on_violation and not report.all_equal:
        raise IdentityViolation(report)
    return report


# -- finite-field model of the orbit invariant ------------------------------------

class NonInvertible(ValueError):
    pass


class Degenerate(ValueError):
    """Tr(alpha * conj(beta)) = 0, so the invariant is undefined."""


def _factor_prime_power(q: int) -> tuple[int, int]:
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, m = 0, q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


class FiniteField:
    """F_q with elements encoded as ``0..q-1`` (base-p digits of a polynomial)."""

    def __init__(self, q: int):
        self.q = q
        self.p, self.k = _factor_prime_power(q)
        self.modulus = self._irreducible() if self.k > 1 else None
        elems = range(q)
        self.add_table = [[self._add(a, b) for b in elems] for a in elems]
        self.mul_table = [[self._mul(a, b) for b in elems] for a in elems]
        self.inv_table = [0] * q
        for a in range(1, q):
            self.inv_table[a] = next(b for b in elems if self.mul_table[a][b] == 1)
        self.neg_table = [next(b for b in elems if self.add_table[a][b] == 0) for a in elems]

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p ** i) % self.p for i in range(self.k)]

    def _encode(self, digits: list[int]) -> int:
        return sum(c * self.p ** i for i, c in enumerate(digits))

    def _add(self, a: int, b: int) -> int:
        return self._encode([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        x, y = self._digits(a), self._digits(b)
        prod_ = [0] * (2 * self.k - 1)
        for i, u in enumerate(x):
            for j, v in enumerate(y):
                prod_[i + j] = (prod_[i + j] + u * v) % self.p
        mod = self.modulus  # monic, length k + 1
        for top in range(len(prod_) - 1, self.k - 1, -1):
            c = prod_[top]
            if c:
                for i in range(self.k + 1):
                    prod_[top - self.k + i] = (prod_[top - self.k + i] - c * mod[i]) % self.p
        return self._encode(prod_[: self.k])

    def _irreducible(self) -> list[int]:
        p, k = self.p, self.k
        for tail in itertools.product(range(p), repeat=k):
            poly = list(tail) + [1]
            # degree 2 or 3: irreducible iff no root
            if k <= 3 and all(sum(c * x ** i for i, c in enumerate(poly)) % p for x in range(p)):
                return poly
        raise NotImplementedError(f"field extension of degree {k} not supported")

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.inv_table[a]

    @cached_property
    def nonsquare(self) -> int:
        squares = {self.mul(a, a) for a in range(self.q)}
        return min(a for a in range(self.q) if a not in squares)


Matrix2 = tuple[tuple[int, int], tuple[int, int]]
KElem = tuple[int, int]  # a + b*theta with theta^2 = c


class QuadraticModel:
    """``K = F[theta]/(theta^2 - c)`` over ``F = F_q`` with embeddings into ``M_2(F)``.

    ``alpha_1(a + b theta) = [[a, b c], [b, a]]`` (multiplication on the basis
    ``1, theta``) and ``alpha_2`` maps ``F + F`` to the diagonal, giving the
    idempotents ``e = diag(1, 0)`` and ``f = diag(0, 1)``.
    """

    def __init__(self, q: int):
        if q % 2 == 0:
            raise ValueError(f"q={q}: the invariant formula needs odd characteristic")
        self.q = q
        self.F = F = FiniteField(q)
        self.c = F.nonsquare
        self.e: Matrix2 = ((1, 0), (0, 0))
        self.f: Matrix2 = ((0, 0), (0, 1))
        self.one_k: KElem = (1, 0)
        self.theta: KElem = (0, 1)

    # K arithmetic
    def k_add(self, x: KElem, y: KElem) -> KElem:
        F = self.F
        return F.add(x[0], y[0]), F.add(x[1], y[1])

    def k_mul(self, x: KElem, y: KElem) -> KElem:
        F = self.F
        a = F.add(F.mul(x[0], y[0]), F.mul(self.c, F.mul(x[1], y[1])))
        b = F.add(F.mul(x[0], y[1]), F.mul(x[1], y[0]))
        return a, b

    def conj(self, x: KElem) -> KElem:
        return x[0], self.F.neg(x[1])

    def trace(self, x: KElem) -> int:
        t = self.k_add(x, self.conj(x))
        assert t[1] == 0
        return t[0]

    def norm(self, x: KElem) -> int:
        n = self.k_mul(x, self.conj(x))
        assert n[1] == 0
        return n[0]

    def k_elements(self) -> list[KElem]:
        return [(a, b) for a in range(self.q) for b in range(self.q)]

    def k_units(self) -> list[KElem]:
        return [x for x in self.k_elements() if x != (0, 0)]

    def scalar(self, a: int) -> KElem:
        return a, 0

    # matrices
    def mat_mul(self, g: Matrix2, h: Matrix2) -> Matrix2:
        F = self.F
        return tuple(
            tuple(F.add(F.mul(g[i][0], h[0][j]), F.mul(g[i][1], h[1][j])) for j in range(2))
            for i in range(2))

    def mat_add(self, g: Matrix2, h: Matrix2) -> Matrix2:
        F = self.F
        return tuple(tuple(F.add(g[i][j], h[i][j]) for j in range(2)) for i in range(2))

    def det(self, g: Matrix2) -> int:
        F = self.F
        return F.sub(F.mul(g[0][0], g[1][1]), F.mul(g[0][1], g[1][0]))

    def alpha1(self, x: KElem) -> Matrix2:
        a, b = x
        return (a, self.F.mul(b, self.c)), (b, a)

    def alpha2(self, x: int, y: int) -> Matrix2:
        return (x, 0), (0, y)

    def combine(self, alpha: KElem, beta: KElem) -> Matrix2:
        """``e alpha_1(alpha) + f alpha_1(beta)``."""
        return self.mat_add(self.mat_mul(self.e, self.alpha1(alpha)),
                            self.mat_mul(self.f, self.alpha1(beta)))

    def decompose(self, g: Matrix2) -> tuple[KElem, KElem]:
        """The unique ``(alpha, beta)`` with ``g = e alpha_1(alpha) + f alpha_1(beta)``."""
        F = self.F
        alpha = (g[0][0], F.mul(g[0][1], F.inv(self.c)))
        beta = (g[1][1], g[1][0])
        return alpha, beta

    def normalize(self, g: Matrix2) -> Matrix2:
        """Representative of ``g`` in PGL_2: first nonzero entry scaled to 1."""
        lead = next(x for row in g for x in row if x)
        s = self.F.inv(lead)
        return tuple(tuple(self.F.mul(s, x) for x in row) for row in g)

    def pgl2(self) -> list[Matrix2]:
        out = set()
        for a, b, c, d in itertools.product(range(self.q), repeat=4):
            g = ((a, b), (c, d))
            if self.det(g):
                out.add(self.normalize(g))
        return sorted(out)

    def check_structure(self) -> None:
        """Assert the algebraic identities the invariant map relies on."""
        ident = ((1, 0), (0, 1))
        assert self.mat_add(self.e, self.f) == ident
        assert self.mat_mul(self.e, self.f) == ((0, 0), (0, 0))
        for x in self.k_elements():
            assert self.k_add(x, self.conj(x)) == self.scalar(self.trace(x))
            for y in (self.theta, (1, 1)):
                assert self.alpha1(self.k_mul(x, y)) == self.mat_mul(self.alpha1(x), self.alpha1(y))
        images = {self.combine(a, b) for a in self.k_elements() for b in self.k_elements()}
        assert len(images) == self.q ** 4, "M_2(F) != e alpha_1(K) + f alpha_1(K)"


def invariant_from_pair(m: QuadraticModel, alpha: KElem, beta: KElem) -> KElem:
    """``alpha conj(beta) / Tr(alpha conj(beta))``, a trace-one element of K."""
    ab = m.k_mul(alpha, m.conj(beta))
    t = m.trace(ab)
    if t == 0:
        raise Degenerate(f"Tr(alpha * conj(beta)) = 0 for alpha={alpha}, beta={beta}")
    xi = m.k_mul(ab, m.scalar(m.F.inv(t)))
    if m.trace(xi) != 1:
        raise ArithmeticError(f"invariant {xi} has trace {m.trace(xi)}, not 1")
    return xi


def quad_invariant(m: QuadraticModel, g: Matrix2) -> KElem:
    if m.det(g) == 0:
        raise NonInvertible(f"det {g} = 0")
    alpha, beta = m.decompose(g)
    return invariant_from_pair(m, alpha, beta)


@dataclass(frozen=True)
class Census:
    q: int
    group_order: int
    double_cosets: int
    nondegenerate_cosets: int
    degenerate_elements: int
    distinct_invariants: int
    trace_one_elements: int
    constant_on_cosets: bool
    injective: bool
    surjective: bool

    @property
    def bijective(self) -> bool:
        return self.constant_on_cosets and self.injective and self.surjective and self.degenerate_elements == 0

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["bijective"] = self.bijective
        return out


def orbit_census(m: QuadraticModel) -> Census:
    """Brute-force ``A(F) \\ PGL_2(F) / T(F)`` and push every coset through the invariant."""
    F = m.F
    group = m.pgl2()
    left = [m.alpha2(x, 1) for x in range(1, m.q)]  # diag(x, y) modulo scalars
    right = [m.alpha1(k) for k in m.k_units()]
    seen: set[Matrix2] = set()
    cosets: list[list[Matrix2]] = []
    for g in group:
        if g in seen:
            continue
        orbit = {m.normalize(m.mat_mul(m.mat_mul(a, g), t)) for a in left for t in right}
        seen |= orbit
        cosets.append(sorted(orbit))
    degenerate = 0
    constant = True
    coset_invariants = []
    for orbit in cosets:
        values = set()
        for g in orbit:
            try:
                values.add(quad_invariant(m, g))
            except Degenerate:
                degenerate += 1
                values.add(None)
        constant &= len(values) == 1
        value = next(iter(values))
        if value is not None:
            coset_invariants.append(value)
    trace_one = {x for x in m.k_elements() if m.trace(x) == 1}
    distinct = set(coset_invariants)
    return Census(
        q=m.q,
        group_order=len(group),
        double_cosets=len(cosets),
        nondegenerate_cosets=len(coset_invariants),
        degenerate_elements=degenerate,
        distinct_invariants=len(distinct),
        trace_one_elements=len(trace_one),
        constant_on_cosets=constant,
        injective=len(distinct) == len(coset_invariants),
        surjective=distinct == trace_one,
    )
