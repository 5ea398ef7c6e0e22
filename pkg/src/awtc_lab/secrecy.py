"""Exact small-block secrecy metrics for a binned stochastic code.

Messages are uniform and the encoder seed is uniform, so every codeword
index is equally likely; duplicated codewords therefore carry multiplicity
weight. Entropies and divergences are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from awtc_lab.channel import View
from awtc_lab.code import BinnedCode, words_array
from awtc_lab.errors import DomainError, ResourceError

MAX_EXACT_WORDS = 1 << 16
MAX_EXACT_SUPPORT = 16
MAX_SUPPORTS = 200_000
MAX_TABLE = 1 << 24


def restrict(words: np.ndarray, support: Sequence[int]) -> np.ndarray:
    """Pack the bits of each word at ``support`` into a ``len(support)``-bit integer."""
    words = np.asarray(words, dtype=np.uint64)
    v = np.zeros(words.shape, dtype=np.int64)
    for j, i in enumerate(support):
        v |= ((words >> np.uint64(i)) & np.uint64(1)).astype(np.int64) << j
    return v


def _support(support: Iterable[int], n: int) -> tuple[int, ...]:
    s = tuple(sorted(set(int(i) for i in support)))
    if s and not (0 <= s[0] and s[-1] < n):
        raise DomainError(f"support {s} outside [0, {n})")
    return s


def _check_exact(bc: BinnedCode, k: int) -> None:
    if len(bc.words) > MAX_EXACT_WORDS:
        raise ResourceError(f"{len(bc.words)} codewords exceed the exact cap of {MAX_EXACT_WORDS}")
    if k > MAX_EXACT_SUPPORT:
        raise ResourceError(f"support size {k} exceeds the exact cap of {MAX_EXACT_SUPPORT}")


def _entropy_bits(counts: np.ndarray) -> float:
    counts = counts[counts > 0].astype(float)
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def equivocation_for_support(bc: BinnedCode, support: Iterable[int]) -> float:
    """H(S | V(support)) under uniform message and seed."""
    s = _support(support, bc.n)
    _check_exact(bc, len(s))
    v = restrict(bc.words, s)
    joint = bc.bin_of.astype(np.int64) * (1 << len(s)) + v
    _, c_joint = np.unique(joint, return_counts=True)
    _, c_view = np.unique(v, return_counts=True)
    # H(S|V) = H(S, V) - H(V)
    total = len(bc.words)
    h_joint = _entropy_bits(c_joint)
    h_view = _entropy_bits(c_view)
    return max(h_joint - h_view, 0.0) if total > 1 else 0.0


def mutual_info_uniform(bc: BinnedCode, support: Iterable[int]) -> float:
    """I(S; V(support)) for a uniform message."""
    return bc.message_bits - equivocation_for_support(bc, support)


def _supports(n: int, k: int, cap: int):
    total = math.comb(n, k)
    if total > cap:
        raise ResourceError(f"C({n}, {k}) = {total} supports exceed the enumeration cap of {cap}")
    return combinations(range(n), k)


def _sample_supports(n: int, k: int, samples: int, rng: np.random.Generator):
    for _ in range(samples):
        yield tuple(sorted(int(i) for i in rng.choice(n, k, replace=False)))


@dataclass(frozen=True)
class MinEquivocation:
    delta: float
    support: tuple[int, ...]
    exact: bool
    values: dict = field(default_factory=dict, repr=False, compare=False)


def min_equivocation(
    bc: BinnedCode,
    read_budget: int,
    mode: str = "exact",
    samples: int = 1000,
    rng: Optional[np.random.Generator] = None,
    max_supports: int = MAX_SUPPORTS,
) -> MinEquivocation:
    """Minimum of H(S|V(support)) over supports of size ``read_budget``.

    Exact mode walks supports in lexicographic order and keeps the first
    minimiser. Sampled mode only sees random supports, so its ``delta`` is
    an upper bound and ``exact`` is False.
    """
    if not 0 <= read_budget <= bc.n:
        raise DomainError(f"read budget {read_budget} outside [0, {bc.n}]")
    if mode == "exact":
        it = _supports(bc.n, read_budget, max_supports)
    elif mode == "sampled":
        if rng is None:
            raise DomainError("sampled mode needs an rng")
        it = _sample_supports(bc.n, read_budget, samples, rng)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    values = {}
    best, arg = math.inf, ()
    for s in it:
        if s in values:
            continue
        h = equivocation_for_support(bc, s)
        values[s] = h
        if h < best - 1e-12:
            best, arg = h, s
    return MinEquivocation(best, arg, mode == "exact", values)


@dataclass(frozen=True)
class ConsistencyMax:
    l_max: int
    view: View
    message: int


def consistency_max(bc: BinnedCode, read_budget: int, max_supports: int = MAX_SUPPORTS) -> ConsistencyMax:
    """Largest number of words in one bin that agree with a single view.

    Only realised symbol patterns are visited; an unrealised pattern has
    count zero and never attains the maximum.
    """
    if not 0 <= read_budget <= bc.n:
        raise DomainError(f"read budget {read_budget} outside [0, {bc.n}]")
    _check_exact(bc, read_budget)
    best = (-1, None, -1)
    for s in _supports(bc.n, read_budget, max_supports):
        v = restrict(bc.words, s)
        key = bc.bin_of.astype(np.int64) * (1 << len(s)) + v
        keys, counts = np.unique(key, return_counts=True)
        i = int(np.argmax(counts))
        if counts[i] > best[0]:
            pattern = int(keys[i]) & ((1 << len(s)) - 1)
            view = View(bc.n, s, tuple((pattern >> j) & 1 for j in range(len(s))))
            best = (int(counts[i]), view, int(keys[i]) >> len(s))
    return ConsistencyMax(*best)


def counting_bound(rn: float, read_budget: int, L: float) -> float:
    """Rn - read_budget - log2 L; raw, possibly negative."""
    if L < 1:
        raise DomainError(f"L={L} must be at least 1")
    return rn - read_budget - math.log2(L)


def soft_cover_divergence(bin_words, support: Iterable[int], n: Optional[int] = None) -> float:
    """D(empirical law of the bin restricted to ``support`` || uniform on {0,1}^k)."""
    arr, n = words_array(bin_words, n)
    s = _support(support, n)
    k = len(s)
    if k > 20:
        raise ResourceError(f"support size {k} exceeds the divergence table cap of 20")
    if len(arr) == 0:
        raise DomainError("empty bin")
    counts = np.bincount(restrict(arr, s), minlength=1 << k)
    counts = counts[counts > 0].astype(float)
    p = counts / counts.sum()
    return float((p * np.log2(p * (1 << k))).sum())


def padded_view_divergence(bin_words, support: Iterable[int], n: Optional[int] = None) -> float:
    """Same divergence computed over full strings in {0,1,?}^n.

    The reference law is uniform over the 2^k strings whose support is
    exactly ``support``; coordinates outside it are always '?'.
    """
    arr, n = words_array(bin_words, n)
    s = _support(support, n)
    inside = set(s)
    law: dict[str, int] = {}
    for w in arr.tolist():
        z = "".join(("1" if (w >> i) & 1 else "0") if i in inside else "?" for i in range(n))
        law[z] = law.get(z, 0) + 1
    total = len(arr)
    q = 2.0 ** -len(s)
    return math.fsum((c / total) * math.log2((c / total) / q) for c in law.values())


@dataclass(frozen=True)
class SemSurrogate:
    value: float
    message: int
    support: tuple[int, ...]


def sem_surrogate(bc: BinnedCode, read_budget: int, max_supports: int = MAX_SUPPORTS) -> SemSurrogate:
    """max over messages and size-``read_budget`` supports of the per-bin divergence from uniform."""
    if not 0 <= read_budget <= bc.n:
        raise DomainError(f"read budget {read_budget} outside [0, {bc.n}]")
    k = read_budget
    if bc.num_messages << k > MAX_TABLE:
        raise ResourceError(f"{bc.num_messages} x 2**{k} table exceeds the cap of {MAX_TABLE}")
    best = SemSurrogate(0.0, 0, tuple(range(k)))
    first = True
    for s in _supports(bc.n, k, max_supports):
        key = bc.bin_of.astype(np.int64) * (1 << k) + restrict(bc.words, s)
        table = np.bincount(key, minlength=bc.num_messages << k).reshape(bc.num_messages, 1 << k)
        p = table / bc.bin_size
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p > 0, p * np.log2(p * (1 << k)), 0.0)
        d = terms.sum(axis=1)
        m = int(np.argmax(d))
        if first or d[m] > best.value:
            best = SemSurrogate(float(max(d[m], 0.0)), m, s)
            first = False
    return best


@dataclass
class SecrecyReport:
    n: int
    read_budget: int
    per_support: dict
    delta: float
    delta_support: tuple[int, ...]
    eta: float
    message_bits: float
    l_max: Optional[int]
    counting_bound: Optional[float]
    sem: Optional[float]
    exact: bool

    def rows(self) -> list[tuple[str, str, float, bool]]:
        """``(metric, support, value, exact_flag)`` rows for CSV output."""
        fmt = lambda s: ";".join(str(i) for i in s)  # noqa: E731
        out = [("equivocation", fmt(s), h, self.exact) for s, h in sorted(self.per_support.items())]
        out.append(("min_equivocation", fmt(self.delta_support), self.delta, self.exact))
        out.append(("eta", fmt(self.delta_support), self.eta, self.exact))
        out.append(("rate_prime", "", self.message_bits / self.n, True))
        if self.l_max is not None:
            out.append(("l_max", "", float(self.l_max), True))
            out.append(("counting_bound", "", self.counting_bound, True))
        if self.sem is not None:
            out.append(("sem_surrogate", "", self.sem, True))
        return out


def secrecy_report(
    bc: BinnedCode,
    read_budget: int,
    mode: str = "exact",
    samples: int = 1000,
    rng: Optional[np.random.Generator] = None,
) -> SecrecyReport:
    """Equivocation and the counting/soft-covering quantities for one code.

    In sampled mode only the equivocation minimum is computed (as an upper
    bound); the exhaustive maxima are left out.
    """
    me = min_equivocation(bc, read_budget, mode=mode, samples=samples, rng=rng)
    exact = mode == "exact"
    l_max = bound = sem = None
    if exact:
        l_max = consistency_max(bc, read_budget).l_max
        bound = counting_bound(bc.base.log_size, read_budget, l_max)
        sem = sem_surrogate(bc, read_budget).value
    return SecrecyReport(
        n=bc.n,
        read_budget=read_budget,
        per_support=me.values,
        delta=me.delta,
        delta_support=me.support,
        eta=me.delta / bc.n,
        message_bits=bc.message_bits,
        l_max=l_max,
        counting_bound=bound,
        sem=sem,
        exact=exact,
    )
