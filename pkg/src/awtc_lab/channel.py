"""Adversary views, bounded-weight errors, and the BSC / BEC comparison channels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from awtc_lab.code import Word
from awtc_lab.errors import BudgetError, DomainError


@dataclass(frozen=True)
class View:
    """An element of {0,1,?}^n: ``symbols[j]`` is the bit seen at ``support[j]``."""

    n: int
    support: tuple[int, ...]
    symbols: tuple[int, ...]

    def __post_init__(self):
        if len(self.support) != len(self.symbols):
            raise DomainError("support and symbols differ in length")
        if list(self.support) != sorted(set(self.support)):
            raise DomainError("support must be strictly increasing")
        if self.support and not (0 <= self.support[0] and self.support[-1] < self.n):
            raise DomainError(f"support {self.support} outside [0, {self.n})")
        if any(b not in (0, 1) for b in self.symbols):
            raise DomainError("symbols must be bits")

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.support)

    @property
    def values(self) -> int:
        return sum(b << i for i, b in zip(self.support, self.symbols))

    def __str__(self) -> str:
        seen = dict(zip(self.support, self.symbols))
        return "".join(str(seen[i]) if i in seen else "?" for i in range(self.n))

    @classmethod
    def from_str(cls, s: str) -> "View":
        if set(s) - {"0", "1", "?"}:
            raise DomainError(f"not a view string: {s!r}")
        support = tuple(i for i, ch in enumerate(s) if ch != "?")
        return cls(len(s), support, tuple(int(s[i]) for i in support))


def _support(support: Iterable[int], n: int) -> tuple[int, ...]:
    out = tuple(sorted(set(int(i) for i in support)))
    if out and not (0 <= out[0] and out[-1] < n):
        raise DomainError(f"coordinate outside [0, {n}) in support {out}")
    return out


def observe(x: Word, support: Iterable[int]) -> View:
    s = _support(support, x.n)
    return View(x.n, s, tuple((x.bits >> i) & 1 for i in s))


def apply_error(x: Word, e: Word, budget: int) -> Word:
    """x XOR e; an error heavier than ``budget`` is never delivered."""
    if e.weight > budget:
        raise BudgetError(f"error weight {e.weight} exceeds budget {budget}")
    return x ^ e


def _bits_to_word(flags: np.ndarray) -> int:
    return int(sum(1 << int(i) for i in np.flatnonzero(flags)))


def bsc_transmit(x: Word, flip_prob: float, rng: np.random.Generator) -> Word:
    if not 0.0 <= flip_prob <= 0.5:
        raise DomainError(f"BSC flip probability {flip_prob} outside [0, 1/2]")
    return Word(x.bits ^ _bits_to_word(rng.random(x.n) < flip_prob), x.n)


def bec_observe(x: Word, erase_prob: float, rng: np.random.Generator) -> View:
    if not 0.0 <= erase_prob <= 1.0:
        raise DomainError(f"BEC erasure probability {erase_prob} outside [0, 1]")
    kept = np.flatnonzero(rng.random(x.n) >= erase_prob)
    return observe(x, kept.tolist())
