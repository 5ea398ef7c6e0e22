"""Adversary strategies for the adversarial wiretap channel.

Error selection sees the code, the view, the budgets and its own RNG, never
the transmitted word. The one exception is the ``full-view-midpoint``
baseline, which reads every coordinate (its support is all of [n]) and so
is *not* a valid AWTC adversary; it exists to show what full knowledge buys.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from awtc_lab.channel import View
from awtc_lab.code import (
    BinnedCode,
    Word,
    consistent_mask,
    decode_many,
    error_words,
    hamming_ball_volume,
    popcount,
)
from awtc_lab.errors import DomainError, ResourceError

KINDS = ("oblivious-random", "within-view-greedy", "within-view-exhaustive", "full-view-midpoint")

# CLI spellings
ALIASES = {
    "random": "oblivious-random",
    "greedy": "within-view-greedy",
    "exhaustive": "within-view-exhaustive",
    "omniscient": "full-view-midpoint",
}


@dataclass(frozen=True)
class Strategy:
    kind: str
    max_enum: int = 100_000
    max_n: int = 14
    max_budget: int = 4

    def __post_init__(self):
        kind = ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise DomainError(f"unknown adversary {self.kind!r}; expected one of {sorted(ALIASES)}")
        object.__setattr__(self, "kind", kind)

    @property
    def is_awtc(self) -> bool:
        return self.kind != "full-view-midpoint"


def choose_support(strategy: Strategy, n: int, read_budget: int, rng: np.random.Generator) -> tuple[int, ...]:
    if not 0 <= read_budget <= n:
        raise DomainError(f"read budget {read_budget} outside [0, {n}]")
    if strategy.kind == "full-view-midpoint":
        return tuple(range(n))
    if strategy.kind == "oblivious-random":
        return tuple(sorted(int(i) for i in rng.choice(n, read_budget, replace=False)))
    # i.i.d. codebooks are exchangeable in the coordinates
    return tuple(range(read_budget))


def _random_weight_word(n: int, weight: int, rng: np.random.Generator) -> int:
    return sum(1 << int(i) for i in rng.choice(n, weight, replace=False))


def _flip_toward(x: int, target: int, budget: int, order: list[int]) -> int:
    """Error flipping up to ``budget`` coordinates where x and target differ, in ``order``."""
    diff = x ^ target
    e = 0
    for i in order:
        if budget == 0:
            break
        if (diff >> i) & 1:
            e |= 1 << i
            budget -= 1
    return e


def _greedy(bc: BinnedCode, view: View, budget: int, rng: np.random.Generator) -> int:
    words = bc.words
    cand = np.flatnonzero(consistent_mask(words, view))
    if len(cand) == 0:
        return 0
    xi = int(cand[rng.integers(len(cand))])
    x = int(words[xi])
    others = np.flatnonzero(bc.bin_of != bc.bin_of[xi])
    if len(others) == 0:
        return 0
    target = int(words[others[np.argmin(popcount(words[others] ^ np.uint64(x)))]])
    seen = set(view.support)
    order = [i for i in range(bc.n) if i not in seen] + list(view.support)
    return _flip_toward(x, target, budget, order)


@lru_cache(maxsize=64)
def _lex_error_words(n: int, budget: int) -> np.ndarray:
    """Every word of weight <= budget, sorted lexicographically as strings x0 x1 ... x_{n-1}."""
    e = error_words(n, budget)
    rev = np.zeros(len(e), dtype=np.uint64)
    for i in range(n):
        rev |= ((e >> np.uint64(i)) & np.uint64(1)) << np.uint64(n - 1 - i)
    out = e[np.argsort(rev, kind="stable")]
    out.setflags(write=False)
    return out


def exhaustive_scores(
    bc: BinnedCode, view: View, write_budget: int, strategy: Strategy = Strategy("exhaustive")
) -> tuple[np.ndarray, np.ndarray]:
    """Every candidate error and its exact posterior decoding-error probability.

    The posterior is uniform over the codeword indices consistent with
    ``view``, so duplicated codewords count with multiplicity. Candidates
    come back in lexicographic order.
    """
    n = bc.n
    if n > strategy.max_n or write_budget > strategy.max_budget:
        raise ResourceError(
            f"exhaustive adversary limited to n <= {strategy.max_n}, budget <= {strategy.max_budget}"
        )
    if hamming_ball_volume(n, write_budget) > strategy.max_enum:
        raise ResourceError(f"{hamming_ball_volume(n, write_budget)} error words exceed --max-enum {strategy.max_enum}")
    errors = _lex_error_words(n, write_budget)
    cand = np.flatnonzero(consistent_mask(bc.words, view))
    if len(cand) == 0:
        return errors, np.zeros(len(errors))
    x = bc.words[cand]
    truth = bc.bin_of[cand]
    received = x[:, None] ^ errors[None, :]
    fail = decode_many(bc, received) != truth[:, None]
    return errors, fail.mean(axis=0)


def _omniscient(bc: BinnedCode, view: View, budget: int) -> int:
    if len(view.support) != bc.n:
        raise DomainError("the full-view baseline needs a view of every coordinate")
    words = bc.words
    x = view.values
    own = np.unique(bc.bin_of[words == np.uint64(x)])
    others = np.flatnonzero(~np.isin(bc.bin_of, own))
    if len(others) == 0 or budget == 0:
        return 0
    dist = popcount(words[others] ^ np.uint64(x))
    ranked = others[np.lexsort((others, dist))]
    order = list(range(bc.n))
    errs = np.array([_flip_toward(x, int(words[t]), budget, order) for t in ranked], dtype=np.uint64)
    decoded = decode_many(bc, errs ^ np.uint64(x))
    wins = np.flatnonzero(~np.isin(decoded, own))
    return int(errs[wins[0]] if len(wins) else errs[0])


def choose_error(
    strategy: Strategy, bc: BinnedCode, view: View, write_budget: int, rng: np.random.Generator
) -> Word:
    """Pick an error word of weight <= write_budget from the view alone."""
    if view.n != bc.n:
        raise DomainError(f"view length {view.n} does not match code length {bc.n}")
    if not 0 <= write_budget <= bc.n:
        raise DomainError(f"write budget {write_budget} outside [0, {bc.n}]")
    if write_budget == 0:
        return Word.zeros(bc.n)
    kind = strategy.kind
    if kind == "oblivious-random":
        e = _random_weight_word(bc.n, write_budget, rng)
    elif kind == "within-view-greedy":
        e = _greedy(bc, view, write_budget, rng)
    elif kind == "within-view-exhaustive":
        errors, scores = exhaustive_scores(bc, view, write_budget, strategy)
        e = int(errors[int(np.argmax(scores))])
    else:
        e = _omniscient(bc, view, write_budget)
    return Word(e, bc.n)
