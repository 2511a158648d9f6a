import itertools
import random
from collections import Counter
from fractions import Fraction
from math import factorial

import pytest

from rtfcheck.permchar import hook_dimension, mn_character, partitions
from rtfcheck.tensorrep import (
    CapExceeded,
    TensorOperator,
    all_two_row_projectors,
    brute_trace,
    canonical_permutation,
    expected_charpoly,
    image_basis,
    isotypic_projector,
    isotypic_spectrum,
    operator_rank,
    operators_commute,
    perm_operator,
    permute_index,
    psi_trace,
    restricted_charpoly,
    sign_index,
    sign_string,
    structured_trace,
    trace_of_product,
    yz_operator,
)


def test_sign_string_encoding():
    assert sign_index("++") == 0 and sign_index("-+") == 2 and sign_index("+-") == 1
    assert sign_string(5, 3) == "-+-"
    with pytest.raises(ValueError):
        sign_index("+x")


@pytest.mark.parametrize("ct,n,trace", [((1, 1), 2, 4), ((2,), 2, 2), ((2, 1), 3, 4)])
def test_perm_operator_traces(ct, n, trace):
    assert perm_operator(ct, n).trace() == trace


@pytest.mark.parametrize("n", range(1, 7))
def test_perm_trace_is_two_to_the_cycles(n):
    for ct in partitions(n):
        p = perm_operator(ct, n)
        assert p.trace() == 2 ** len(ct)
        assert all(list(row.values()) == [1] for row in p.rows)


def test_perm_operator_size_mismatch():
    with pytest.raises(ValueError):
        perm_operator((2, 1), 4)


def test_canonical_permutation_layout():
    assert canonical_permutation((3, 1)) == [1, 2, 0, 3]


def test_yz_n1_is_swap():
    h = yz_operator(1)
    assert h.to_dense() == [[0, 1], [1, 0]]


def test_yz_n2_on_plus_plus():
    h = yz_operator(2)
    image = h.apply({sign_index("++"): 1})
    assert image == {sign_index("-+"): 1, sign_index("+-"): 1}


@pytest.mark.parametrize("n", range(1, 9))
def test_yz_structure(n):
    h = yz_operator(n)
    assert h.trace() == 0
    assert h == h.transpose()
    for a, row in enumerate(h.rows):
        assert len(row) == n
        assert all(bin(a ^ b).count("1") == 1 for b in row)


@pytest.mark.parametrize("n", range(1, 9))
def test_yz_commutes_with_every_permutation(n):
    h = yz_operator(n)
    for ct in partitions(n):
        assert operators_commute(h, perm_operator(ct, n))


def _projector_oracle(lam, n):
    """Central idempotent summed over every permutation, one sparse operator at a time."""
    dim = 1 << n
    acc = [dict() for _ in range(dim)]
    for perm in itertools.permutations(range(n)):
        seen, ct = set(), []
        for s in range(n):
            if s not in seen:
                j, length = s, 0
                while j not in seen:
                    seen.add(j)
                    j = perm[j]
                    length += 1
                ct.append(length)
        chi = mn_character(lam, tuple(sorted(ct, reverse=True)))
        for b in range(dim):
            a = permute_index(b, perm, n)
            acc[a][b] = acc[a].get(b, 0) + chi
    scale = Fraction(hook_dimension(lam), factorial(n))
    return TensorOperator(n, [{b: scale * v for b, v in row.items()} for row in acc])


@pytest.mark.parametrize("lam,n", [((2,), 2), ((1, 1), 2), ((3, 1), 4), ((2, 2), 4), ((3, 2), 5)])
def test_projector_matches_per_permutation_sum(lam, n):
    assert isotypic_projector(lam, n) == _projector_oracle(lam, n)


def test_projector_rank_example():
    assert operator_rank(isotypic_projector((2,), 2)) == 3


def test_projector_idempotent_example():
    e = isotypic_projector((3, 1), 4)
    assert e.compose(e) == e


def test_projector_rejects_three_rows():
    with pytest.raises(ValueError):
        isotypic_projector((2, 1, 1), 4)


def test_projector_cap():
    with pytest.raises(CapExceeded):
        isotypic_projector((5, 4), 9)


def test_rank_sum_example():
    ranks = [operator_rank(isotypic_projector(lam, 4)) for lam in [(4,), (3, 1), (2, 2)]]
    assert ranks == [5, 9, 2] and sum(ranks) == 16


@pytest.mark.parametrize("n", range(1, 7))
def test_projectors_complete_and_orthogonal(n):
    projs = all_two_row_projectors(n)
    h = yz_operator(n)
    total = TensorOperator(n, [{} for _ in range(1 << n)])
    for lam, e in projs.items():
        assert e.compose(e) == e
        assert operators_commute(e, h)
        assert operator_rank(e) == e.trace() == (2 * lam[0] - n + 1) * hook_dimension(lam)
        total = total + e
        for mu, f in projs.items():
            if mu != lam:
                assert e.compose(f).is_zero()
    assert total == TensorOperator.identity(n)


def test_image_basis_is_reduced():
    e = isotypic_projector((3, 1), 4)
    basis, pivots = image_basis(e)
    for i, v in enumerate(basis):
        for j, p in enumerate(pivots):
            assert v.get(p, 0) == (1 if i == j else 0)
        assert e.apply(v) == {k: x for k, x in v.items() if x}


@pytest.mark.parametrize("n,k,spectrum", [
    (2, 2, {-2: 1, 0: 1, 2: 1}),
    (2, 1, {0: 1}),
    (4, 3, {-2: 3, 0: 3, 2: 3}),
])
def test_spectrum_examples(n, k, spectrum):
    assert isotypic_spectrum(n, k) == Counter(spectrum)


@pytest.mark.parametrize("n", range(1, 7))
def test_restricted_charpoly_is_arithmetic_progression(n):
    for k in range((n + 1) // 2, n + 1):
        assert restricted_charpoly(n, k) == expected_charpoly(n, k)


def test_spectrum_k_range():
    with pytest.raises(ValueError):
        isotypic_spectrum(4, 1)


@pytest.mark.parametrize("n,r,ct,value", [
    (2, 2, (1, 1), 8), (2, 1, (1, 1), 0), (4, 2, (1, 1, 1, 1), 64)])
def test_brute_trace_examples(n, r, ct, value):
    assert brute_trace(n, r, ct) == value


@pytest.mark.parametrize("n,r,ct,value", [
    (2, 2, (2,), 8), (2, 0, (2,), 2), (4, 2, (1, 1, 1, 1), 64)])
def test_structured_trace_examples(n, r, ct, value):
    assert structured_trace(n, r, ct) == value


def test_structured_trace_needs_even_n():
    with pytest.raises(ValueError):
        structured_trace(3, 1, (3,))


def test_brute_trace_cap():
    with pytest.raises(CapExceeded):
        brute_trace(10, 1, (10,))
    assert brute_trace(10, 0, (10,), cap=10) == 2


def test_brute_trace_dense_eigen_oracle():
    # H^2 has n on its diagonal (flip a factor and flip it back), so Tr = n * 2^n
    for n in range(1, 7):
        assert brute_trace(n, 2, (1,) * n) == n * 2 ** n


@pytest.mark.parametrize("n", [2, 4, 6])
def test_three_trace_routes_agree(n):
    for ct in partitions(n):
        for r in range(0, 7):
            assert brute_trace(n, r, ct) == structured_trace(n, r, ct) == psi_trace(n, r, ct)


def test_trace_is_independent_of_representative():
    rng = random.Random(7)
    n = 6
    h4 = yz_operator(n).power(4)
    for ct in partitions(n):
        sigma = canonical_permutation(ct)
        relabel = list(range(n))
        rng.shuffle(relabel)
        inv = [0] * n
        for i, x in enumerate(relabel):
            inv[x] = i
        conj = [relabel[sigma[inv[j]]] for j in range(n)]
        rows = [dict() for _ in range(1 << n)]
        for b in range(1 << n):
            rows[permute_index(b, conj, n)][b] = 1
        p = TensorOperator(n, rows)
        assert trace_of_product(h4, p) == brute_trace(n, 4, ct)


def test_empty_tensor_power():
    assert brute_trace(0, 0, ()) == structured_trace(0, 0, ()) == 1
    assert brute_trace(0, 2, ()) == structured_trace(0, 2, ()) == 0
