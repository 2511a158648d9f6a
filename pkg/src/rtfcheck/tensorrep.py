"""The tensor space ``V = (Q^2)^{(x) n}`` with its S_n action and the operator H.

Basis vectors ``e_eps`` are indexed by ``n``-bit integers: ``+`` is bit 0,
``-`` is bit 1, and the leftmost tensor factor is the most significant bit.
"""
from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .permchar import (
    CycleType,
    Partition,
    _check_ct,
    hook_dimension,
    make_partition,
    mn_character,
    partitions,
    subset_fix_count,
    two_row_character,
)

DEFAULT_TENSOR_CAP = 8

SparseVector = dict[int, Rational]


class CapExceeded(ValueError):
    """Raised when a brute-force tensor computation would exceed the size cap."""


def _check_cap(n: int, cap: int | None) -> None:
    cap = DEFAULT_TENSOR_CAP if cap is None else cap
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the tensor cap {cap} (dimension 2^{n})")


def sign_string(index: int, n: int) -> str:
    return "".join("-" if (index >> (n - 1 - j)) & 1 else "+" for j in range(n))


def sign_index(signs: str) -> int:
    out = 0
    for ch in signs:
        if ch not in "+-":
            raise ValueError(f"sign strings use '+' and '-', got {signs!r}")
        out = (out << 1) | (ch == "-")
    return out


class TensorOperator:
    """Sparse exact endomorphism of ``(Q^2)^{(x) n}``; ``rows[a]`` maps column -> entry."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Sequence[Mapping[int, Rational]]):
        dim = 1 << n
        if len(rows) != dim:
            raise ValueError(f"expected {dim} rows for n={n}, got {len(rows)}")
        self.n = n
        self.rows = tuple({c: v for c, v in row.items() if v != 0} for row in rows)
        for row in self.rows:
            for c in row:
                if not 0 <= c < dim:
                    raise ValueError(f"column {c} out of range for n={n}")

    @property
    def dim(self) -> int:
        return 1 << self.n

    @classmethod
    def identity(cls, n: int) -> TensorOperator:
        return cls(n, [{a: 1} for a in range(1 << n)])

    def entry(self, a: int, b: int) -> Rational:
        return self.rows[a].get(b, 0)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def apply(self, vec: Mapping[int, Rational]) -> SparseVector:
        out: SparseVector = {}
        for a, row in enumerate(self.rows):
            s = 0
            for b, v in row.items():
                x = vec.get(b)
                if x:
                    s += v * x
            if s:
                out[a] = s
        return out

    def compose(self, other: TensorOperator) -> TensorOperator:
        """``self o other``."""
        if other.n != self.n:
            raise ValueError("operators act on different tensor powers")
        rows = []
        for row in self.rows:
            acc: dict[int, Rational] = {}
            for k, v in row.items():
                for j, w in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + v * w
            rows.append(acc)
        return TensorOperator(self.n, rows)

    def __matmul__(self, other: TensorOperator) -> TensorOperator:
        return self.compose(other)

    def __add__(self, other: TensorOperator) -> TensorOperator:
        rows = []
        for r1, r2 in zip(self.rows, other.rows):
            acc = dict(r1)
            for c, v in r2.items():
                acc[c] = acc.get(c, 0) + v
            rows.append(acc)
        return TensorOperator(self.n, rows)

    def __sub__(self, other: TensorOperator) -> TensorOperator:
        return self + other.scale(-1)

    def scale(self, s: Rational) -> TensorOperator:
        return TensorOperator(self.n, [{c: s * v for c, v in r.items()} for r in self.rows])

    def power(self, r: int) -> TensorOperator:
        out = TensorOperator.identity(self.n)
        for _ in range(r):
            out = out.compose(self)
        return out

    def transpose(self) -> TensorOperator:
        rows: list[dict[int, Rational]] = [{} for _ in range(self.dim)]
        for a, row in enumerate(self.rows):
            for b, v in row.items():
                rows[b][a] = v
        return TensorOperator(self.n, rows)

    def trace(self) -> Rational:
        return sum(row.get(a, 0) for a, row in enumerate(self.rows))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    __hash__ = None

    def to_dense(self) -> list[list[Rational]]:
        return [[row.get(b, 0) for b in range(self.dim)] for row in self.rows]

    def __repr__(self) -> str:
        return f"TensorOperator(n={self.n}, nnz={self.nnz()})"


def trace_of_product(a: TensorOperator, b: TensorOperator) -> Rational:
    """Tr(a o b) without forming the product; iterates the sparser factor."""
    if a.nnz() > b.nnz():
        a, b = b, a  # Tr(ab) = Tr(ba)
    total = 0
    for i, row in enumerate(a.rows):
        for k, v in row.items():
            w = b.rows[k].get(i)
            if w:
                total += v * w
    return total


def canonical_permutation(ct: CycleType) -> list[int]:
    """sigma on positions 0..n-1: cycles laid out left to right, longest first."""
    ct = _check_ct(ct)
    sigma = []
    start = 0
    for length in ct:
        sigma.extend(start + (j + 1) % length for j in range(length))
        start += length
    return sigma


def permute_index(index: int, sigma: Sequence[int], n: int) -> int:
    """Index of ``P_sigma e_eps``: the factor at position j moves to sigma(j)."""
    out = 0
    for j in range(n):
        if (index >> (n - 1 - j)) & 1:
            out |= 1 << (n - 1 - sigma[j])
    return out


def perm_operator(ct: CycleType, n: int) -> TensorOperator:
    ct = _check_ct(ct)
    if sum(ct) != n:
        raise ValueError(f"cycle type {ct} is not a partition of {n}")
    sigma = canonical_permutation(ct)
    dim = 1 << n
    rows: list[dict[int, int]] = [{} for _ in range(dim)]
    for b in range(dim):
        rows[permute_index(b, sigma, n)][b] = 1
    return TensorOperator(n, rows)


def yz_operator(n: int) -> TensorOperator:
    """``H(e_eps) = sum_i e_{eps eps_i}``: flip one tensor factor at a time.

    ``n = 0`` gives the zero operator on the one-dimensional empty tensor power.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    return TensorOperator(n, [{a ^ (1 << j): 1 for j in range(n)} for a in range(1 << n)])


@lru_cache(maxsize=None)
def _yz_power(n: int, r: int) -> TensorOperator:
    if r == 0:
        return TensorOperator.identity(n)
    return _yz_power(n, r - 1).compose(yz_operator(n))


# -- isotypic projectors -----------------------------------------------------

_CHUNK = 1 << 14


@lru_cache(maxsize=4)
def _class_sums(n: int) -> tuple[tuple[CycleType, ...], np.ndarray]:
    """Integer matrices ``C_ct[a, b] = #{sigma in ct : P_sigma e_b = e_a}``."""
    cts = tuple(partitions(n))
    cls_of = {ct: i for i, ct in enumerate(cts)}
    dim = 1 << n
    bits = np.array([[(b >> (n - 1 - j)) & 1 for j in range(n)] for b in range(dim)], dtype=np.int64)
    cols = np.arange(dim, dtype=np.int64)
    counts = np.zeros(len(cts) * dim * dim, dtype=np.int64)
    perms = itertools.permutations(range(n))
    while True:
        chunk = list(itertools.islice(perms, _CHUNK))
        if not chunk:
            break
        sig = np.array(chunk, dtype=np.int64)
        cls = np.array([cls_of[_cycle_type_of(p)] for p in chunk], dtype=np.int64)
        weights = np.left_shift(1, n - 1 - sig)  # (m, n)
        images = weights @ bits.T  # (m, dim)
        flat = (cls[:, None] * dim + images) * dim + cols[None, :]
        counts += np.bincount(flat.ravel(), minlength=counts.size)
    return cts, counts.reshape(len(cts), dim, dim)


def _cycle_type_of(perm: Sequence[int]) -> CycleType:
    seen = [False] * len(perm)
    lengths = []
    for s in range(len(perm)):
        if not seen[s]:
            length = 0
            j = s
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def isotypic_projector(lam: Partition, n: int, cap: int | None = None) -> TensorOperator:
    """Central idempotent ``(dim rho/n!) sum_sigma chi(sigma) P_sigma`` on V."""
    lam = make_partition(lam)
    if sum(lam) != n:
        raise ValueError(f"|{lam}| != {n}")
    if len(lam) > 2:
        raise ValueError(f"{lam} has more than two rows; its isotypic component in V is zero")
    _check_cap(n, cap)
    cts, sums = _class_sums(n)
    z = np.zeros(sums.shape[1:], dtype=np.int64)
    for ct, mat in zip(cts, sums):
        chi = mn_character(lam, ct)
        if chi:
            z += chi * mat
    scale = Fraction(hook_dimension(lam), factorial(n))
    rows = []
    for a in range(z.shape[0]):
        nz = np.flatnonzero(z[a])
        rows.append({int(b): scale * int(z[a, b]) for b in nz})
    return TensorOperator(n, rows)


def _components(op: TensorOperator) -> list[list[int]]:
    """Connected components of the row/column support graph."""
    parent = list(range(op.dim))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, row in enumerate(op.rows):
        for b in row:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for x in range(op.dim):
        groups.setdefault(find(x), []).append(x)
    return [g for g in groups.values() if len(g) > 1 or op.rows[g[0]]]


def image_basis(op: TensorOperator) -> tuple[list[SparseVector], list[int]]:
    """Reduced echelon basis of the column space, with one pivot index per vector.

    Each basis vector is 1 at its own pivot and 0 at every other pivot, so the
    coordinates of an image vector are simply its entries at the pivots.
    """
    cols = op.transpose().rows
    basis: list[SparseVector] = []
    pivots: list[int] = []
    for comp in _components(op):
        local = {g: i for i, g in enumerate(comp)}
        vectors = []
        for b in comp:
            if cols[b]:
                v = [0] * len(comp)
                for a, x in cols[b].items():
                    v[local[a]] = x
                vectors.append(v)
        red, piv = linalg.reduced_row_echelon(vectors)
        for row, p in zip(red, piv):
            basis.append({comp[i]: x for i, x in enumerate(row) if x})
            pivots.append(comp[p])
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [basis[i] for i in order], [pivots[i] for i in order]


def operator_rank(op: TensorOperator) -> int:
    return len(image_basis(op)[1])


def restrict(op: TensorOperator, basis: list[SparseVector], pivots: list[int],
             check: bool = True) -> list[list[Fraction]]:
    """Matrix of ``op`` on the span of ``basis`` (which ``op`` must preserve)."""
    m = len(basis)
    mat = [[Fraction(0)] * m for _ in range(m)]
    for j, v in enumerate(basis):
        w = op.apply(v)
        coords = [w.get(p, 0) for p in pivots]
        if check:
            recon: dict[int, Rational] = {}
            for c, u in zip(coords, basis):
                if c:
                    for idx, x in u.items():
                        recon[idx] = recon.get(idx, 0) + c * x
            recon = {k: x for k, x in recon.items() if x}
            if recon != {k: x for k, x in w.items() if x}:
                raise ArithmeticError("operator does not preserve the given subspace")
        for i, c in enumerate(coords):
            mat[i][j] = Fraction(c)
    return mat


def restricted_charpoly(n: int, k: int, cap: int | None = None) -> list[Fraction]:
    """Exact det(t - H) on the image of the ``[k, n-k]`` isotypic projector."""
    lam = _two_row(n, k)
    proj = isotypic_projector(lam, n, cap)
    basis, pivots = image_basis(proj)
    return linalg.charpoly(restrict(yz_operator(n), basis, pivots))


def expected_charpoly(n: int, k: int) -> list[Fraction]:
    """prod over j in {-(2k-n), ..., 2k-n} step 2 of (t - j)^{dim rho}."""
    lam = _two_row(n, k)
    top = 2 * k - n
    roots = [j for j in range(-top, top + 1, 2)] * hook_dimension(lam)
    return linalg.poly_from_roots(sorted(roots))


def isotypic_spectrum(n: int, k: int, cap: int | None = None) -> Counter:
    """Eigenvalues of H on ``image(e_[k, n-k])`` with multiplicity."""
    poly = restricted_charpoly(n, k, cap)
    roots, rest = linalg.integer_roots(poly, n)
    if len(rest) != 1:
        raise ArithmeticError(f"characteristic polynomial has non-integer roots: cofactor {rest}")
    return Counter(roots)


def _two_row(n: int, k: int) -> Partition:
    if not (n - k <= k <= n):
        raise ValueError(f"k must satisfy n/2 <= k <= n, got n={n}, k={k}")
    return make_partition((k, n - k))


# -- the two trace paths -------------------------------------------------------

def brute_trace(n: int, r: int, ct: CycleType, cap: int | None = None) -> int:
    """Tr(H^r o P_sigma) on the full tensor space."""
    ct = _check_ct(ct)
    if sum(ct) != n:
        raise ValueError(f"cycle type {ct} is not a partition of {n}")
    if r < 0:
        raise ValueError("r must be non-negative")
    _check_cap(n, cap)
    return int(trace_of_product(_yz_power(n, r), perm_operator(ct, n)))


def structured_trace(n: int, r: int, ct: CycleType) -> int:
    """Block-form trace: sum_k [sum_{j=k-d}^{d-k} (2j)^r] chi_[2d-k, k](ct)."""
    if n % 2:
        raise ValueError(f"structured trace needs even n, got {n}")
    ct = _check_ct(ct)
    if sum(ct) != n:
        raise ValueError(f"cycle type {ct} is not a partition of {n}")
    d = n // 2
    total = 0
    for k in range(d + 1):
        eig_power_sum = sum((2 * j) ** r for j in range(k - d, d - k + 1))
        total += eig_power_sum * two_row_character(n, n - k, ct)
    return total


def psi_trace(n: int, r: int, ct: CycleType) -> int:
    """2^r sum_i (i - n/2)^r psi_i(ct), written as sum_i (2i - n)^r psi_i(ct)."""
    ct = _check_ct(ct)
    if sum(ct) != n:
        raise ValueError(f"cycle type {ct} is not a partition of {n}")
    return sum((2 * i - n) ** r * subset_fix_count(ct, i) for i in range(n + 1))


def operators_commute(a: TensorOperator, b: TensorOperator) -> bool:
    return a.compose(b) == b.compose(a)


def all_two_row_projectors(n: int, cap: int | None = None) -> dict[Partition, TensorOperator]:
    return {make_partition((k, n - k)): isotypic_projector((k, n - k), n, cap)
            for k in range((n + 1) // 2, n + 1)}


def total_rank(ops: Iterable[TensorOperator]) -> int:
    return sum(operator_rank(op) for op in ops)
