"""Partitions, cycle types and exact class functions on the symmetric group.

Partitions and cycle types are plain tuples of positive integers in
non-increasing order.  A class function on ``S_n`` is a dict keyed by every
partition of ``n``; :func:`partitions` yields those keys in ascending
lexicographic order, which is the canonical table order everywhere.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Callable, Iterable

Partition = tuple[int, ...]
CycleType = Partition
ClassFunction = dict[Partition, Fraction]


def make_partition(parts: Iterable[int]) -> Partition:
    """Validate and canonicalize; zero parts are dropped so ``[n, 0]`` means ``[n]``."""
    parts = [int(p) for p in parts]
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {parts}")
    return tuple(sorted((p for p in parts if p > 0), reverse=True))


def format_partition(lam: Partition) -> str:
    return ",".join(str(p) for p in lam)


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if not text:
        return ()
    return make_partition(int(p) for p in text.split(","))


@lru_cache(maxsize=None)
def _partitions_desc(n: int, largest: int) -> tuple[Partition, ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        out.extend((first, *rest) for rest in _partitions_desc(n - first, first))
    return tuple(out)


def partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in ascending lexicographic order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return sorted(_partitions_desc(n, n))


def two_row_partition(n: int, k: int) -> Partition:
    if not (n - k <= k <= n):
        raise ValueError(f"[k, n-k] needs n/2 <= k <= n, got n={n}, k={k}")
    return make_partition((k, n - k))


def is_two_row(lam: Partition) -> bool:
    return len(lam) <= 2


def class_size(ct: CycleType) -> int:
    n = sum(ct)
    z = prod(ct) * prod(factorial(m) for m in Counter(ct).values())
    return factorial(n) // z


def _check_ct(ct: CycleType) -> CycleType:
    ct = tuple(ct)
    if ct != make_partition(ct):
        raise ValueError(f"cycle type must be a non-increasing tuple of positive parts: {ct}")
    return ct


def subset_fix_count(ct: CycleType, i: int) -> int:
    """Number of ``i``-subsets stable under a permutation of cycle type ``ct``.

    This is the ``x^i`` coefficient of ``prod over cycles (1 + x^len)``.
    """
    ct = _check_ct(ct)
    n = sum(ct)
    if not 0 <= i <= n:
        raise ValueError(f"subset size {i} outside 0..{n}")
    return _fix_poly(ct)[i]


@lru_cache(maxsize=None)
def _fix_poly(ct: CycleType) -> tuple[int, ...]:
    poly = [1]
    for length in ct:
        nxt = poly + [0] * length
        for j, c in enumerate(poly):
            nxt[j + length] += c
        poly = nxt
    return tuple(poly)


def permutation_character(n: int, i: int) -> ClassFunction:
    """psi_i: character of the permutation module on ``i``-subsets of ``{1..n}``."""
    return {ct: Fraction(subset_fix_count(ct, i)) for ct in partitions(n)}


def two_row_character(n: int, k: int, ct: CycleType) -> int:
    """chi_[k, n-k](ct) via the telescoping difference psi_{n-k} - psi_{n-k-1}."""
    two_row_partition(n, k)
    ct = _check_ct(ct)
    if sum(ct) != n:
        raise ValueError(f"cycle type {ct} is not a partition of {n}")
    j = n - k
    lower = subset_fix_count(ct, j - 1) if j >= 1 else 0
    return subset_fix_count(ct, j) - lower


def mn_character(lam: Partition, ct: CycleType) -> int:
    """chi_lam(ct) by the Murnaghan-Nakayama rule (bead/abacus form)."""
    lam = tuple(lam)
    if lam != make_partition(lam):
        raise ValueError(f"not a partition: {lam}")
    ct = _check_ct(ct)
    if sum(lam) != sum(ct):
        raise ValueError(f"size mismatch: |{lam}| != |{ct}|")
    return _mn(lam, ct)


@lru_cache(maxsize=None)
def _mn(lam: Partition, ct: CycleType) -> int:
    if not ct:
        return 1
    r, rest = ct[0], ct[1:]
    ell = len(lam)
    beads = [lam[i] + (ell - 1 - i) for i in range(ell)]
    occupied = set(beads)
    total = 0
    for b in beads:
        t = b - r
        if t < 0 or t in occupied:
            continue
        # Rim-hook height = number of beads jumped over.
        height = sum(1 for c in beads if t < c < b)
        new_beads = sorted((t if c == b else c for c in beads), reverse=True)
        m = len(new_beads)
        mu = make_partition(new_beads[i] - (m - 1 - i) for i in range(m))
        total += (-1) ** height * _mn(mu, rest)
    return total


def character_table(n: int) -> dict[Partition, ClassFunction]:
    cts = partitions(n)
    return {lam: {ct: Fraction(_mn(lam, ct)) for ct in cts} for lam in partitions(n)}


def class_inner_product(a: ClassFunction | Callable[[CycleType], int],
                        b: ClassFunction | Callable[[CycleType], int],
                        n: int) -> Fraction:
    """``(1/n!) sum_sigma a(sigma) b(sigma)``; characters are real so no conjugation."""
    fa = a.__getitem__ if isinstance(a, dict) else a
    fb = b.__getitem__ if isinstance(b, dict) else b
    total = sum(class_size(ct) * Fraction(fa(ct)) * Fraction(fb(ct)) for ct in partitions(n))
    return total / factorial(n)


def irreducible_multiplicity(lam: Partition, i: int, n: int) -> int:
    """Multiplicity of rho_lam inside the ``i``-subset permutation module of ``S_n``."""
    lam = make_partition(lam)
    if sum(lam) != n:
        raise ValueError(f"|{lam}| != {n}")
    if not 0 <= i <= n:
        raise ValueError(f"subset size {i} outside 0..{n}")
    value = class_inner_product(lambda ct: subset_fix_count(ct, i),
                                lambda ct: _mn(lam, ct), n)
    if value.denominator != 1 or value < 0:
        raise ArithmeticError(f"inner product <psi_{i}, chi_{lam}> = {value} is not a multiplicity")
    return int(value)


def hook_dimension(lam: Partition) -> int:
    lam = make_partition(lam)
    n = sum(lam)
    conj = [sum(1 for p in lam if p > j) for j in range(lam[0])] if lam else []
    hooks = prod(lam[i] - j + conj[j] - i - 1 for i in range(len(lam)) for j in range(lam[i]))
    return factorial(n) // hooks


def two_row_dimension(n: int, k: int) -> int:
    """dim rho_[k, n-k] = C(n, n-k) - C(n, n-k-1)."""
    j = n - k
    return comb(n, j) - (comb(n, j - 1) if j >= 1 else 0)
