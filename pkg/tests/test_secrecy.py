import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from awtc_lab.code import Codebook, Word, bin_codebook, sample_codebook
from awtc_lab.errors import DomainError, ResourceError
from awtc_lab.secrecy import (
    consistency_max,
    counting_bound,
    equivocation_for_support,
    min_equivocation,
    mutual_info_uniform,
    padded_view_divergence,
    secrecy_report,
    sem_surrogate,
    soft_cover_divergence,
)

import oracles


def distinct_book(n, size, seed):
    rng = np.random.default_rng(seed)
    return Codebook(n, rng.choice(1 << n, size, replace=False).astype(np.uint64), 0.0, seed)


def test_equivocation_examples():
    bc = bin_codebook(sample_codebook(8, 64, 1), 3)
    assert equivocation_for_support(bc, ()) == pytest.approx(bc.message_bits, abs=1e-12)
    flat = bin_codebook(distinct_book(8, 64, 2), 0)
    assert equivocation_for_support(flat, range(8)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_equivocation_matches_joint_table(seed):
    cb = sample_codebook(8, 64, seed)
    bc = bin_codebook(cb, 3)
    words = [int(w) for w in cb.words]
    for s in [(0, 1), (2, 7), (3, 5)]:
        assert equivocation_for_support(bc, s) == pytest.approx(oracles.equivocation(words, 8, 3, s), abs=1e-9)


@given(st.integers(0, 2**32 - 1), st.integers(0, 4), st.sets(st.integers(0, 9), max_size=6))
@settings(max_examples=50, deadline=None)
def test_equivocation_property_oracle(seed, ell, support):
    cb = sample_codebook(10, 32, seed)
    bc = bin_codebook(cb, ell)
    s = sorted(support)
    assert equivocation_for_support(bc, s) == pytest.approx(
        oracles.equivocation([int(w) for w in cb.words], 10, ell, s), abs=1e-9
    )


@given(st.integers(0, 2**32 - 1), st.permutations(list(range(10))))
@settings(max_examples=30, deadline=None)
def test_equivocation_monotone_in_support(seed, order):
    bc = bin_codebook(sample_codebook(10, 64, seed), 2)
    prev = equivocation_for_support(bc, ())
    for k in range(1, 11):
        cur = equivocation_for_support(bc, order[:k])
        assert cur <= prev + 1e-12
        prev = cur


@given(st.integers(0, 2**32 - 1), st.integers(0, 4), st.sets(st.integers(0, 9)))
@settings(max_examples=50, deadline=None)
def test_mutual_information_bounds(seed, ell, support):
    bc = bin_codebook(sample_codebook(10, 32, seed), ell)
    i = mutual_info_uniform(bc, support)
    assert i == pytest.approx(bc.message_bits - equivocation_for_support(bc, support), abs=1e-9)
    assert -1e-12 <= i <= min(bc.message_bits, len(support)) + 1e-12


def test_mutual_information_examples():
    bc = bin_codebook(distinct_book(8, 32, 4), 0)
    assert mutual_info_uniform(bc, ()) == pytest.approx(0.0, abs=1e-12)
    assert mutual_info_uniform(bc, range(8)) == pytest.approx(5.0, abs=1e-12)


def test_exact_caps():
    bc = bin_codebook(sample_codebook(20, 1 << 17, 0), 0)
    with pytest.raises(ResourceError):
        equivocation_for_support(bc, (0,))
    bc = bin_codebook(sample_codebook(20, 4, 0), 0)
    with pytest.raises(ResourceError):
        equivocation_for_support(bc, range(17))
    with pytest.raises(ResourceError):
        min_equivocation(bc, 10, max_supports=100)


def test_min_equivocation_examples():
    bc = bin_codebook(sample_codebook(10, 64, 3), 2)
    me = min_equivocation(bc, 0)
    assert me.delta == pytest.approx(bc.message_bits) and me.support == ()
    flat = bin_codebook(distinct_book(10, 64, 3), 0)
    assert min_equivocation(flat, 10).delta == pytest.approx(0.0, abs=1e-12)


def test_min_equivocation_vs_sampling_and_argmin():
    bc = bin_codebook(sample_codebook(10, 64, 9), 2)
    me = min_equivocation(bc, 3)
    assert me.exact and len(me.values) == math.comb(10, 3)
    words = [int(w) for w in bc.words]
    ref = {s: oracles.equivocation(words, 10, 2, s) for s in combinations(range(10), 3)}
    lo = min(ref.values())
    assert me.delta == pytest.approx(lo, abs=1e-9)
    assert me.support == min(s for s, v in ref.items() if v <= lo + 1e-12)
    sm = min_equivocation(bc, 3, mode="sampled", samples=50, rng=np.random.default_rng(0))
    assert not sm.exact
    assert all(me.delta <= v + 1e-12 for v in sm.values.values())
    assert me.delta <= sm.delta + 1e-12


def test_consistency_max_examples():
    bc = bin_codebook(sample_codebook(10, 64, 5), 3)
    assert consistency_max(bc, 0).l_max == 8
    flat = bin_codebook(distinct_book(10, 64, 5), 2)
    assert consistency_max(flat, 10).l_max == 1


@pytest.mark.parametrize("seed", range(4))
def test_consistency_max_matches_filter(seed):
    cb = sample_codebook(10, 32, seed)
    bc = bin_codebook(cb, 2)
    got = consistency_max(bc, 3)
    assert got.l_max == oracles.l_max([int(w) for w in cb.words], 10, 2, 3)
    # the reported view and bin do attain the count
    words = [int(w) for w in cb.words]
    members = [i for i in bc.bin_indices(got.message)]
    hits = [i for i in members if all((words[i] >> j) & 1 == b for j, b in zip(got.view.support, got.view.symbols))]
    assert len(hits) == got.l_max


def test_counting_bound_examples():
    assert counting_bound(10, 3, 1) == 7
    assert counting_bound(10, 3, 2**7) == 0
    assert counting_bound(4, 3, 8) == -2
    with pytest.raises(DomainError):
        counting_bound(10, 3, 0)


@given(st.integers(0, 2**32 - 1), st.integers(0, 3), st.integers(0, 5))
@settings(max_examples=40, deadline=None)
def test_counting_bound_below_exact(seed, ell, k):
    cb = sample_codebook(10, 32, seed)
    bc = bin_codebook(cb, ell)
    delta = min_equivocation(bc, k).delta
    lm = consistency_max(bc, k).l_max
    assert counting_bound(cb.log_size, k, lm) <= delta + 1e-9
    assert counting_bound(cb.log_size, k, lm + 1) <= delta + 1e-9


def test_soft_cover_examples():
    everything = [Word(b, 6) for b in range(64)]
    assert soft_cover_divergence(everything, (0, 2, 5)) == pytest.approx(0.0, abs=1e-12)
    assert soft_cover_divergence([Word(13, 6)], (1, 2, 4)) == pytest.approx(3.0, abs=1e-12)
    assert soft_cover_divergence(everything, ()) == 0.0
    with pytest.raises(ResourceError):
        soft_cover_divergence([Word(0, 24)], range(21))


def test_soft_cover_matches_histogram():
    for seed in range(20):
        cb = sample_codebook(16, 1 << 10, seed)
        words = [int(w) for w in cb.words]
        s = sorted(np.random.default_rng(seed).choice(16, 3, replace=False).tolist())
        assert soft_cover_divergence(cb.words, s, 16) == pytest.approx(oracles.divergence_hist(words, s), abs=1e-12)


def test_soft_cover_chi_square_magnitude():
    # sanity check only: the mean sits near (2^k - 1) / (2 ln 2 |bin|)
    vals = [soft_cover_divergence(sample_codebook(16, 1 << 10, s).words, (0, 5, 9), 16) for s in range(100)]
    expected = 7 / (2 * math.log(2) * 1024)
    assert 0.5 * expected < float(np.mean(vals)) < 2 * expected


@given(st.integers(0, 2**32 - 1), st.integers(1, 64), st.sets(st.integers(0, 11), max_size=10))
@settings(max_examples=80, deadline=None)
def test_restriction_identity(seed, size, support):
    words = sample_codebook(12, size, seed).words
    a = soft_cover_divergence(words, support, 12)
    b = padded_view_divergence(words, support, 12)
    assert abs(a - b) <= 1e-12


def test_sem_surrogate_examples():
    everything = bin_codebook(Codebook(6, np.arange(64, dtype=np.uint64), 0.0, 0), 6)
    assert sem_surrogate(everything, 3).value == pytest.approx(0.0, abs=1e-12)
    bc = bin_codebook(sample_codebook(10, 64, 1), 2)
    assert sem_surrogate(bc, 0).value == 0.0


def test_sem_surrogate_is_max_of_divergences():
    bc = bin_codebook(sample_codebook(8, 64, 12), 3)
    got = sem_surrogate(bc, 2)
    words = [int(w) for w in bc.words]
    ref = max(
        oracles.divergence_hist(words[m * 8 : (m + 1) * 8], s)
        for m in range(bc.num_messages)
        for s in combinations(range(8), 2)
    )
    assert got.value == pytest.approx(ref, abs=1e-12)
    assert soft_cover_divergence(bc.bin_words(got.message), got.support, 8) == pytest.approx(got.value, abs=1e-12)


def test_report_rows():
    bc = bin_codebook(sample_codebook(10, 32, 3), 2)
    rep = secrecy_report(bc, 3)
    assert rep.exact and 0 <= rep.delta <= bc.message_bits + 1e-12
    assert rep.eta <= bc.stochastic_rate + 1e-12
    assert rep.counting_bound <= rep.delta + 1e-9
    metrics = [r[0] for r in rep.rows()]
    assert metrics.count("equivocation") == math.comb(10, 3)
    for m in ("min_equivocation", "eta", "rate_prime", "l_max", "counting_bound", "sem_surrogate"):
        assert m in metrics
    sampled = secrecy_report(bc, 3, mode="sampled", samples=20, rng=np.random.default_rng(0))
    assert not sampled.exact and sampled.l_max is None
    assert all(not r[3] for r in sampled.rows() if r[0] in ("equivocation", "min_equivocation", "eta"))
