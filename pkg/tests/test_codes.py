import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onepass.codes import (
    CodeError,
    FoldedReedSolomon,
    ReedSolomon,
    SparseLinearCode,
    agreeing_codewords_bruteforce,
    all_codewords,
    distance_to_code_bruteforce,
    full_field_rs,
    hamming_distance,
)
from onepass.galois import GF, field_of_order

F7 = GF(7)


def rs7(k=1):
    return ReedSolomon(F7, [1, 2, 3], k)


def vj_oracle(F, points, j):
    """Direct product formula 1 / prod_{l != j} (a_j - a_l)."""
    prod = 1
    for l, a in enumerate(points):
        if l != j:
            prod = F.mul(prod, F.sub(points[j], a))
    return F.inv(prod)


def sample_codes():
    F16 = field_of_order(16)
    F8 = field_of_order(8)
    rng = random.Random(1)
    return [
        ReedSolomon(F7, [1, 2, 3, 4, 5, 6], 3),
        ReedSolomon(F16, list(range(1, 12)), 4),
        ReedSolomon(F16, list(range(10)), 5, [rng.randrange(1, 16) for _ in range(10)]),
        FoldedReedSolomon(ReedSolomon(F8, list(range(8)), 3), 2),
        SparseLinearCode(F7, 24, 3, 6, seed=2),
        SparseLinearCode(field_of_order(256), 60, 3, 6, seed=9),
    ]


# -- multipliers and parity entries ----------------------------------------------------

def test_rs_multiplier_examples():
    C = rs7()
    assert C.rs_multiplier(0) == 4
    assert C.rs_multiplier(1) == 6
    assert ReedSolomon(F7, [5], 1).rs_multiplier(0) == 1


def test_rs_multiplier_repeated_points():
    with pytest.raises((CodeError, ValueError, ZeroDivisionError)):
        ReedSolomon(F7, [1, 1, 2], 1).rs_multiplier(0)


@pytest.mark.parametrize("q,n", [(7, 6), (16, 15), (256, 40), (9, 9)])
def test_multipliers_match_product_formula(q, n):
    F = field_of_order(q)
    pts = list(range(q - n, q))
    C = ReedSolomon(F, pts, 2)
    assert list(C.multipliers) == [vj_oracle(F, pts, j) for j in range(n)]


def test_parity_rows_example():
    C = rs7()
    assert [C.parity_entry(0, j) for j in range(3)] == [4, 6, 4]
    assert [C.parity_entry(1, j) for j in range(3)] == [4, 5, 5]
    with pytest.raises((CodeError, IndexError, ValueError)):
        C.parity_entry(2, 0)
    with pytest.raises((CodeError, IndexError, ValueError)):
        C.parity_entry(0, 3)


def test_sparse_entries_deterministic():
    a = SparseLinearCode(F7, 24, 3, 6, seed=4)
    b = SparseLinearCode(F7, 24, 3, 6, seed=4)
    entries = [[a.parity_entry(i, j) for j in range(24)] for i in range(a.num_checks)]
    assert entries == [[b.parity_entry(i, j) for j in range(24)] for i in range(b.num_checks)]
    assert a.k == 24 - a.rank and len(a.info_positions) == a.k
    assert all(sum(1 for row in entries if row[j]) == 3 for j in range(24))


# -- encoding --------------------------------------------------------------------------

def test_encode_examples():
    assert rs7(1).encode([5]) == [5, 5, 5]
    assert rs7(2).encode([1, 1]) == [2, 3, 4]
    with pytest.raises((CodeError, ValueError)):
        rs7(2).encode([1])


@pytest.mark.parametrize("code", sample_codes(), ids=lambda c: f"{c.variant}-{c.field.order}-{c.n}")
def test_syndrome_of_codewords_is_zero(code):
    rng = random.Random(7)
    for _ in range(1000 if code.n <= 24 else 200):
        assert not any(code.syndrome(code.encode(code.random_message(rng))))


def test_syndrome_exhaustive_small():
    C = ReedSolomon(field_of_order(8), [0, 1, 2, 3, 4, 5], 3)
    for m in itertools.product(range(8), repeat=3):
        assert C.is_codeword(C.encode(list(m)))


def test_rs_distance_random_pairs():
    C = ReedSolomon(field_of_order(16), list(range(12)), 4)
    rng = random.Random(2)
    for _ in range(1000):
        a, b = C.random_message(rng), C.random_message(rng)
        if a != b:
            assert hamming_distance(C, C.encode(a), C.encode(b)) >= C.n - C.k + 1


# -- puncturing --------------------------------------------------------------------------

def test_puncture_examples():
    C = rs7(1)
    assert C.puncture([0, 1, 2]) == C
    P = C.puncture([0, 1])
    assert P.points == (1, 2) and P.k == 1
    with pytest.raises((CodeError, ValueError)):
        C.puncture([])


@pytest.mark.parametrize("q", [4, 5, 7, 8])
def test_puncture_encode_commutes_exhaustive(q):
    F = field_of_order(q)
    n = min(q, 6)
    C = ReedSolomon(F, list(range(n)), 2)
    subsets = [s for r in range(2, n + 1) for s in itertools.combinations(range(n), r)][::3]
    for m in itertools.product(range(q), repeat=2):
        cw = C.encode(list(m))
        for Q in subsets:
            assert C.puncture(Q).is_codeword([cw[p] for p in Q])


def test_folded_puncture_and_layout():
    R = ReedSolomon(field_of_order(8), list(range(8)), 3)
    Fo = FoldedReedSolomon(R, 2)
    cw = Fo.encode([1, 2, 3])
    assert len(cw) == 4 and all(len(s) == 2 for s in cw)
    assert Fo.flatten(cw) == R.encode([1, 2, 3])
    P = Fo.puncture([0, 2])
    assert P.is_codeword([cw[0], cw[2]])
    with pytest.raises((CodeError, ValueError)):
        FoldedReedSolomon(R, 3)


# -- brute-force oracles ------------------------------------------------------------------

def test_distance_oracle_examples():
    C = rs7(1)
    assert distance_to_code_bruteforce(C, [5, 5, 5])[0] == 0
    d, cw = distance_to_code_bruteforce(C, [5, 5, 2])
    assert d == 1 and cw == [5, 5, 5]


def test_distance_oracle_budget():
    C = ReedSolomon(field_of_order(256), list(range(10)), 3)
    with pytest.raises(CodeError):
        distance_to_code_bruteforce(C, [0] * 10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(0, 4))
def test_distance_within_unique_radius(seed, e):
    C = ReedSolomon(field_of_order(16), list(range(12)), 3)  # unique radius 4.5
    rng = random.Random(seed)
    cw = C.encode(C.random_message(rng))
    y = list(cw)
    for p in rng.sample(range(12), e):
        y[p] ^= rng.randrange(1, 16)
    d, nearest = distance_to_code_bruteforce(C, y)
    assert d == e and nearest == cw


def test_distance_zero_iff_syndrome_zero_exhaustive():
    C = ReedSolomon(field_of_order(4), [0, 1, 2, 3], 2)
    for y in itertools.product(range(4), repeat=4):
        assert (distance_to_code_bruteforce(C, list(y))[0] == 0) == C.is_codeword(list(y))
    S = SparseLinearCode(GF(2), 8, 2, 4, seed=0)
    for y in itertools.product(range(2), repeat=8):
        assert (distance_to_code_bruteforce(S, list(y))[0] == 0) == S.is_codeword(list(y))


def test_folded_distance_is_symbolwise():
    R = ReedSolomon(field_of_order(8), list(range(8)), 2)
    Fo = FoldedReedSolomon(R, 2)
    cw = Fo.encode([3, 5])
    y = list(cw)
    y[1] = (y[1][0] ^ 1, y[1][1] ^ 1)  # both halves of one symbol
    assert distance_to_code_bruteforce(Fo, y)[0] == 1


def test_agreeing_codewords_examples():
    C = rs7(1)
    full = agreeing_codewords_bruteforce(C, [5, 5, 5], 3)
    assert [cw for cw, _ in full] == [[5, 5, 5]]
    assert len(agreeing_codewords_bruteforce(C, [5, 5, 5], 0)) == 7
    two = agreeing_codewords_bruteforce(C, [5, 5, 2], 2)
    assert len(two) == 1
    cw, agree = two[0]
    assert cw == [5, 5, 5] and agree == frozenset({0, 1})


def test_all_codewords_and_full_field_rs():
    C = full_field_rs(GF(5), 2)
    assert C.n == 5 and C.has_constant_multiplier
    assert len(all_codewords(C)) == 25
