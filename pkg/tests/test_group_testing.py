import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onepass.group_testing import (
    BinMatrix,
    BudgetExceededError,
    DisjunctParams,
    KWiseFamily,
    MatrixParameterError,
    decode,
    explicit_rs_disjunct,
    format_matrix,
    gamma_thresholds,
    kwise_bits,
    parse_matrix,
    random_list_disjunct,
    rows_for,
    simulate_outcomes,
    verify_disjunct_bruteforce,
    verify_gamma_list_disjunct_bruteforce,
    verify_list_disjunct_bruteforce,
)


def identity(n):
    return BinMatrix.from_rows(np.eye(n, dtype=bool))


# -- params ---------------------------------------------------------------------------------

def test_params_validation():
    with pytest.raises(MatrixParameterError):
        DisjunctParams(e=2, ell=2, b1=1, b2=1)
    with pytest.raises(MatrixParameterError):
        DisjunctParams(e=2, ell=2, gamma=1.5)


def test_gamma_thresholds():
    b1, b2 = gamma_thresholds(1600, 4)
    assert b2 == math.ceil(1600 / 64) == 25
    assert b1 == math.floor(400 * (1 / 50 + 147 / 4000)) == 22
    assert gamma_thresholds(10, 4)[0] < gamma_thresholds(10, 4)[1]


# -- random construction ---------------------------------------------------------------------

def test_random_matrix_shape_and_determinism():
    M = random_list_disjunct(1024, 4, 12, seed=3)
    assert M.t == rows_for(1024, 4, 12) == 480
    assert np.array_equal(M.dense(), random_list_disjunct(1024, 4, 12, seed=3).dense())
    assert not np.array_equal(M.dense(), random_list_disjunct(1024, 4, 12, seed=4).dense())


def test_random_matrix_constraints():
    with pytest.raises(MatrixParameterError):
        random_list_disjunct(64, 1)
    with pytest.raises(MatrixParameterError):
        random_list_disjunct(64, 2, 12)  # t = 144 > n
    assert random_list_disjunct(64, 2, 12, strict=False).t == 144


@pytest.mark.parametrize("kwise", [None, 4])
def test_row_support_mean_within_three_sigma(kwise):
    n, e = 256, 4
    total, cells = 0, 0
    for seed in range(100):
        M = random_list_disjunct(n, e, 4, seed=seed, kwise=kwise)
        total += int(M.row_supports().sum())
        cells += M.t * n
    p = 1 / e
    sigma = math.sqrt(cells * p * (1 - p))
    assert abs(total - cells * p) <= 3 * sigma


def test_seeded_matches_materialized():
    for kwise, spots in ((None, 10_000), (3, 2_000)):
        dense = random_list_disjunct(1024, 4, 12, seed=9, kwise=kwise, materialize=True)
        lazy = random_list_disjunct(1024, 4, 12, seed=9, kwise=kwise, materialize=False)
        assert not lazy.materialized
        rng = np.random.default_rng(0)
        for i, j in zip(rng.integers(0, dense.t, spots), rng.integers(0, 1024, spots)):
            assert dense.entry(int(i), int(j)) == lazy.entry(int(i), int(j))


def test_random_list_disjunct_small_passes_mostly():
    ok = sum(verify_list_disjunct_bruteforce(random_list_disjunct(30, 2, 12, seed=s, strict=False), 2, 2)
             for s in range(40))
    assert ok >= 38


# -- k-wise bits --------------------------------------------------------------------------

def test_kwise_deterministic_and_binary():
    a = kwise_bits(4, 100, 7)
    assert np.array_equal(a, kwise_bits(4, 100, 7))
    assert set(np.unique(a)) <= {0, 1}
    with pytest.raises(MatrixParameterError):
        KWiseFamily(2, 10, 0).bits(np.array([10]))
    with pytest.raises(MatrixParameterError):
        KWiseFamily(0, 10, 0)


def test_kwise_full_independence_chi_square():
    trials = 10_000
    counts = np.zeros(256, dtype=np.int64)
    weights = 1 << np.arange(8)
    for s in range(trials):
        counts[int(kwise_bits(8, 8, s) @ weights)] += 1
    exp = trials / 256
    chi2 = float(((counts - exp) ** 2 / exp).sum())
    # 255 dof: mean 255, sd ~22.6
    assert chi2 < 255 + 6 * math.sqrt(2 * 255)


def test_pairwise_correlations_vanish():
    bits = np.array([kwise_bits(2, 64, s) for s in range(10_000)], dtype=float)
    assert abs(bits.mean() - 0.5) < 0.01
    corr = np.corrcoef(bits, rowvar=False)
    off = corr[~np.eye(64, dtype=bool)]
    assert np.abs(off).max() < 0.06


# -- explicit construction -----------------------------------------------------------------

def test_explicit_4_2():
    M = explicit_rs_disjunct(4, 2)
    assert (M.t, M.n) == (16, 16)
    assert set(M.column_weights()) == {4} and set(M.row_supports()) == {4}
    assert M.params.e == 3
    assert verify_disjunct_bruteforce(M, 3)
    assert not verify_disjunct_bruteforce(M, 4)


@pytest.mark.parametrize("qp,kp", [(q, k) for q in (2, 3, 4, 5, 7, 8) for k in (1, 2, 3) if k <= q])
def test_explicit_structural_counts(qp, kp):
    M = explicit_rs_disjunct(qp, kp)
    D = M.dense().astype(np.int64)
    assert (M.t, M.n) == (qp * qp, qp ** kp)
    assert (D.sum(axis=0) == qp).all()
    assert (D.sum(axis=1) == qp ** (kp - 1)).all()
    overlap = D.T @ D
    np.fill_diagonal(overlap, 0)
    assert overlap.max() <= kp - 1


def test_explicit_budget():
    with pytest.raises(BudgetExceededError):
        explicit_rs_disjunct(64, 4)


# -- verifiers --------------------------------------------------------------------------------

def test_identity_and_all_ones():
    for e in range(1, 6):
        assert verify_disjunct_bruteforce(identity(6), e)
    ones = BinMatrix.from_rows(np.ones((1, 4), dtype=bool))
    assert not verify_disjunct_bruteforce(ones, 1)


def test_verifier_budget():
    with pytest.raises(BudgetExceededError):
        verify_list_disjunct_bruteforce(identity(200), 4, 4)


def test_gamma_reduces_to_plain_with_empty_family():
    for s in range(10):
        M = random_list_disjunct(12, 2, 4, seed=s, strict=False)
        plain = verify_list_disjunct_bruteforce(M, 2, 2)
        # the plain verifier fixes |S| = e; the gamma verifier covers every |T| <= e,
        # which is equivalent for list-disjunctness since shrinking T only frees rows
        assert verify_gamma_list_disjunct_bruteforce(M, DisjunctParams(2, 2)) == plain
        assert verify_gamma_list_disjunct_bruteforce(M, DisjunctParams(2, 2), lambda T: []) == plain


def test_gamma_one_makes_condition_two_vacuous():
    M = explicit_rs_disjunct(4, 2)
    everything = lambda T: [frozenset(range(16))]  # noqa: E731
    assert not verify_gamma_list_disjunct_bruteforce(M, DisjunctParams(2, 1, gamma=0.0), everything)
    assert verify_gamma_list_disjunct_bruteforce(M, DisjunctParams(2, 1, gamma=1.0), everything)


def test_four_by_four_counterexample():
    # columns 0 and 1 are identical: T = {0}, U = {1} has no separating row
    rows = np.array([[1, 1, 0, 0],
                     [0, 0, 1, 0],
                     [0, 0, 0, 1],
                     [1, 1, 1, 1]], dtype=bool)
    M = BinMatrix.from_rows(rows)
    assert not verify_gamma_list_disjunct_bruteforce(M, DisjunctParams(1, 1))
    assert not verify_disjunct_bruteforce(M, 1)


# -- outcomes and decoding ---------------------------------------------------------------------

def test_simulate_and_decode_examples():
    I4 = identity(4)
    assert simulate_outcomes(I4, []).tolist() == [0, 0, 0, 0]
    assert simulate_outcomes(I4, [1]).tolist() == [0, 1, 0, 0]
    assert decode(I4, [0, 1, 0, 0]) == [1]
    assert decode(I4, [0, 0, 0, 0]) == []
    with pytest.raises(ValueError):
        decode(I4, [0, 1])


def test_forbidden_row_returns_zero():
    rows = np.array([[1, 1, 0], [0, 1, 1]], dtype=bool)
    M = BinMatrix.from_rows(rows)
    assert simulate_outcomes(M, [1]).tolist() == [1, 1]
    assert simulate_outcomes(M, [1], lambda D: [{0, 1}]).tolist() == [0, 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32), st.lists(st.integers(0, 19), max_size=4, unique=True), st.integers(0, 19))
def test_noiseless_monotone(seed, D, extra):
    M = random_list_disjunct(20, 3, 3, seed=seed, strict=False)
    base = simulate_outcomes(M, D)
    more = simulate_outcomes(M, set(D) | {extra})
    assert (more >= base).all()


def test_decoder_contract_on_verified_matrices():
    checked = 0
    for seed in range(30):
        M = random_list_disjunct(16, 2, 8, seed=seed, strict=False)
        if not verify_list_disjunct_bruteforce(M, 2, 2):
            continue
        checked += 1
        for size in range(3):
            for D in itertools.combinations(range(16), size):
                G = decode(M, simulate_outcomes(M, D))
                assert set(D) <= set(G) and len(G) <= 3
    assert checked >= 20


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(0, 2 ** 32))
def test_gamma_decoder_contract(mseed, fseed):
    n, e, ell = 10, 2, 2
    M = random_list_disjunct(n, e, 4, seed=mseed, strict=False)
    rng = np.random.default_rng(fseed)
    fam = {}

    def forbidden(T):
        key = tuple(sorted(T))
        if key not in fam:
            fam[key] = [frozenset(rng.choice(n, size=int(rng.integers(1, 5)), replace=False).tolist())
                        for _ in range(int(rng.integers(0, 3)))]
        return fam[key]

    b2 = 2
    params = DisjunctParams(e, ell, gamma=0.5, b1=1, b2=b2)
    if not verify_gamma_list_disjunct_bruteforce(M, params, forbidden):
        return
    for size in range(e + 1):
        for D in itertools.combinations(range(n), size):
            G = set(decode(M, simulate_outcomes(M, D, forbidden), b2))
            assert len(G) <= ell + e - 1
            assert len(set(D) - G) <= params.gamma * e


# -- interchange format --------------------------------------------------------------------

@pytest.mark.parametrize("seeded,kwise", [(False, None), (True, None), (True, 3)])
def test_matrix_format_roundtrip(seeded, kwise):
    M = random_list_disjunct(37, 3, 2, seed=5, kwise=kwise, materialize=not seeded)
    text = format_matrix(M)
    assert ("seeded" in text) == seeded
    back = parse_matrix(text)
    assert (back.t, back.n, back.params) == (M.t, M.n, M.params)
    assert np.array_equal(back.dense(), M.dense())
    assert format_matrix(back) == text


def test_matrix_format_dense_hex_layout():
    text = format_matrix(identity(5))
    lines = text.splitlines()
    assert lines[1] == "dense"
    assert lines[2:] == ["01", "02", "04", "08", "10"]


def test_parse_matrix_errors():
    with pytest.raises(ValueError):
        parse_matrix("2 2 1 1 0.0 0 1 -\ndense\n1\n")
    with pytest.raises(ValueError):
        parse_matrix("1 2 1 1 0.0 0 1 -\ndense\n7\n")
    with pytest.raises(ValueError):
        parse_matrix("1 2 1 1 0.0 0 1 -\nseeded bernoulli:2\n")
