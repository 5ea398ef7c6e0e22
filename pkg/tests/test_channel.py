import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from awtc_lab.channel import View, apply_error, bec_observe, bsc_transmit, observe
from awtc_lab.code import Word
from awtc_lab.errors import BudgetError, DomainError

import oracles

word16 = st.integers(0, (1 << 16) - 1).map(lambda b: Word(b, 16))


def test_observe_examples():
    x = Word.from_str("1010")
    assert str(observe(x, [])) == "????"
    assert str(observe(x, range(4))) == "1010"
    v = observe(x, {0, 2})
    assert v.support == (0, 2) and v.symbols == (1, 1)
    assert str(v) == "1?1?"
    with pytest.raises(DomainError):
        observe(x, [4])


def test_view_validation_and_parse():
    v = View.from_str("?01?")
    assert v.support == (1, 2) and v.symbols == (0, 1)
    assert v.mask == 0b0110 and v.values == 0b0100
    for args in [(4, (2, 1), (0, 0)), (4, (1,), (2,)), (4, (4,), (1,)), (4, (1, 2), (1,))]:
        with pytest.raises(DomainError):
            View(*args)


def test_apply_error_examples():
    x = Word.from_str("110010")
    e = Word.from_str("100001")
    assert apply_error(x, Word.zeros(6), 0) == x
    assert apply_error(apply_error(x, e, 2), e, 2) == x
    with pytest.raises(BudgetError):
        apply_error(x, e, 1)


@given(word16, word16, st.integers(0, 16))
def test_apply_error_respects_budget(x, e, budget):
    if e.weight > budget:
        with pytest.raises(BudgetError):
            apply_error(x, e, budget)
    else:
        assert (apply_error(x, e, budget) ^ x).weight <= budget


def test_bsc_trivial_and_domain():
    x = Word.from_str("1100110011")
    rng = np.random.default_rng(0)
    assert bsc_transmit(x, 0.0, rng) == x
    with pytest.raises(DomainError):
        bsc_transmit(x, 0.6, rng)


def test_bsc_half_mean():
    rng = np.random.default_rng(1)
    x = Word.zeros(16)
    flips = [bsc_transmit(x, 0.5, rng).weight for _ in range(100_000)]
    assert abs(np.mean(flips) - 8) <= 0.1


def test_bsc_tail_matches_binomial():
    rng = np.random.default_rng(2)
    x = Word(0b10110, 20)
    trials = 100_000
    hits = sum((bsc_transmit(x, 0.1, rng) ^ x).weight >= 5 for _ in range(trials))
    p = oracles.binom_tail(20, 0.1, 5)
    sigma = math.sqrt(p * (1 - p) / trials)
    assert abs(hits / trials - p) <= 3 * sigma


def test_bec_trivial_and_domain():
    x = Word.from_str("0110")
    rng = np.random.default_rng(0)
    assert bec_observe(x, 1.0, rng).support == ()
    assert str(bec_observe(x, 0.0, rng)) == "0110"
    with pytest.raises(DomainError):
        bec_observe(x, 1.5, rng)


def test_bec_mean_support():
    rng = np.random.default_rng(3)
    x = Word.zeros(25)
    sizes = [len(bec_observe(x, 0.8, rng).support) for _ in range(100_000)]
    assert abs(np.mean(sizes) - 5) <= 0.05


@given(word16, st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_bec_view_is_consistent_with_input(x, p, seed):
    v = bec_observe(x, p, np.random.default_rng(seed))
    assert all(x[i] == b for i, b in zip(v.support, v.symbols))
