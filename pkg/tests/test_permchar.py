import itertools
from fractions import Fraction
from math import comb, factorial

import pytest

from rtfcheck.permchar import (
    character_table,
    class_inner_product,
    class_size,
    format_partition,
    hook_dimension,
    irreducible_multiplicity,
    make_partition,
    mn_character,
    parse_partition,
    partitions,
    permutation_character,
    subset_fix_count,
    two_row_character,
    two_row_dimension,
)


def cycle_type_of(perm):
    seen, out = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        j, length = s, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        out.append(length)
    return tuple(sorted(out, reverse=True))


def brute_class_sizes(n):
    counts = {}
    for perm in itertools.permutations(range(n)):
        ct = cycle_type_of(perm)
        counts[ct] = counts.get(ct, 0) + 1
    return counts


def representative(ct):
    perm, start = [], 0
    for length in ct:
        perm.extend(start + (j + 1) % length for j in range(length))
        start += length
    return perm


def brute_fixed_subsets(ct, i):
    perm = representative(ct)
    return sum(1 for sub in itertools.combinations(range(sum(ct)), i)
               if {perm[x] for x in sub} == set(sub))


def count_standard_tableaux(lam):
    """Branching rule: remove one corner box at a time."""
    lam = tuple(lam)
    if sum(lam) <= 1:
        return 1
    total = 0
    for i, part in enumerate(lam):
        if part > (lam[i + 1] if i + 1 < len(lam) else 0):
            child = make_partition(lam[:i] + (part - 1,) + lam[i + 1:])
            total += count_standard_tableaux(child)
    return total


def test_partition_counts_and_order():
    assert [len(partitions(n)) for n in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert partitions(4) == [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)]


def test_partition_convention_and_format():
    assert make_partition([3, 0]) == (3,)
    assert format_partition((3, 1)) == "3,1"
    assert parse_partition("1,3") == (3, 1)


@pytest.mark.parametrize("ct,size", [((1, 1, 1, 1), 1), ((2, 1, 1), 6), ((4,), 6)])
def test_class_size_examples(ct, size):
    assert class_size(ct) == size


@pytest.mark.parametrize("n", range(1, 7))
def test_class_size_matches_enumeration(n):
    brute = brute_class_sizes(n)
    assert {ct: class_size(ct) for ct in partitions(n)} == brute
    assert sum(brute.values()) == factorial(n)


@pytest.mark.parametrize("ct,i,value", [((1, 1, 1, 1), 2, 6), ((2, 1, 1), 2, 2), ((4,), 2, 0)])
def test_subset_fix_examples(ct, i, value):
    assert subset_fix_count(ct, i) == value


@pytest.mark.parametrize("n", range(1, 7))
def test_subset_fix_matches_brute_force(n):
    for ct in partitions(n):
        for i in range(n + 1):
            assert subset_fix_count(ct, i) == brute_fixed_subsets(ct, i)


def test_subset_fix_range():
    with pytest.raises(ValueError):
        subset_fix_count((2, 1), 4)


@pytest.mark.parametrize("n", range(0, 11))
def test_subset_fix_is_palindromic(n):
    for ct in partitions(n):
        assert [subset_fix_count(ct, i) for i in range(n + 1)] == \
            [subset_fix_count(ct, n - i) for i in range(n + 1)]


def test_two_row_examples():
    for ct in partitions(5):
        assert two_row_character(5, 5, ct) == 1
    assert two_row_character(4, 2, (2, 2)) == 2
    assert two_row_character(4, 3, (1, 1, 1, 1)) == 3


def test_two_row_range():
    with pytest.raises(ValueError):
        two_row_character(4, 1, (4,))


@pytest.mark.parametrize("lam,ct,value", [((1, 1), (2,), -1), ((2, 2), (1, 1, 1, 1), 2), ((2, 1), (3,), -1)])
def test_mn_examples(lam, ct, value):
    assert mn_character(lam, ct) == value


def test_mn_size_mismatch():
    with pytest.raises(ValueError):
        mn_character((2, 1), (2,))


@pytest.mark.parametrize("n", range(2, 8))
def test_mn_standard_rep_is_fixed_points_minus_one(n):
    # [n-1, 1] is the permutation representation on n points minus the trivial one
    for ct in partitions(n):
        assert mn_character((n - 1, 1), ct) == ct.count(1) - 1


@pytest.mark.parametrize("n", range(1, 8))
def test_mn_sign_character(n):
    for ct in partitions(n):
        sign = (-1) ** sum(length - 1 for length in ct)
        assert mn_character((1,) * n, ct) == sign


@pytest.mark.parametrize("n", range(1, 11))
def test_two_row_agrees_with_mn(n):
    for k in range((n + 1) // 2, n + 1):
        for ct in partitions(n):
            assert two_row_character(n, k, ct) == mn_character(make_partition((k, n - k)), ct)


@pytest.mark.parametrize("n", range(1, 9))
def test_character_table_is_orthonormal(n):
    table = character_table(n)
    lams = list(table)
    for a in lams:
        for b in lams:
            assert class_inner_product(table[a], table[b], n) == (1 if a == b else 0)


@pytest.mark.parametrize("lam,i,n,mult", [((3, 1), 1, 4, 1), ((2, 1, 1), 2, 4, 0), ((4,), 3, 4, 1)])
def test_multiplicity_examples(lam, i, n, mult):
    assert irreducible_multiplicity(lam, i, n) == mult


@pytest.mark.parametrize("n", range(1, 8))
def test_multiplicity_free_two_row_pattern(n):
    for lam in partitions(n):
        for i in range(n + 1):
            expected = int(len(lam) <= 2 and lam[0] >= max(i, n - i))
            assert irreducible_multiplicity(lam, i, n) == expected


@pytest.mark.parametrize("lam,dim", [((6,), 1), ((2, 2), 2), ((3, 1), 3)])
def test_hook_dimension_examples(lam, dim):
    assert hook_dimension(lam) == dim


@pytest.mark.parametrize("n", range(1, 9))
def test_hook_dimension_counts_tableaux(n):
    for lam in partitions(n):
        assert hook_dimension(lam) == count_standard_tableaux(lam) == mn_character(lam, (1,) * n)


@pytest.mark.parametrize("n", range(1, 13))
def test_two_row_dimension_formula(n):
    for k in range((n + 1) // 2, n + 1):
        assert two_row_dimension(n, k) == hook_dimension((k, n - k))
        assert two_row_dimension(n, k) == comb(n, n - k) - (comb(n, n - k - 1) if n > k else 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_permutation_character_telescopes(n):
    for i in range(n + 1):
        psi = permutation_character(n, i)
        for ct in partitions(n):
            total = sum(two_row_character(n, n - j, ct) for j in range(min(i, n - i) + 1))
            assert psi[ct] == Fraction(total)
