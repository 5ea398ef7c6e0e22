"""Words, random codebooks, the binned stochastic code, and Hamming queries.

Words are packed into unsigned integers with coordinate 0 in the least
significant bit. A codebook keeps its words in a read-only ``uint64``
array, so block lengths up to 64 are supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Optional, Sequence, Union

import numpy as np

from awtc_lab.errors import DomainError, ResourceError

if TYPE_CHECKING:
    from awtc_lab.channel import View

MAX_N = 64
MAX_CODEBOOK_BITS = 1 << 28
MAX_EXHAUSTIVE_N = 24


def popcount(a) -> np.ndarray:
    return np.bitwise_count(np.asarray(a, dtype=np.uint64))


@dataclass(frozen=True)
class Word:
    """A length-``n`` binary string; bit i of ``bits`` is coordinate i."""

    bits: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise DomainError(f"block length {self.n} outside [1, {MAX_N}]")
        if not 0 <= self.bits < (1 << self.n):
            raise DomainError(f"bits {self.bits:#x} do not fit in {self.n} coordinates")

    @classmethod
    def from_str(cls, s: str) -> "Word":
        """Parse ``"x0 x1 ... x_{n-1}"`` written left to right, e.g. ``"0110"``."""
        if not s or set(s) - {"0", "1"}:
            raise DomainError(f"not a binary string: {s!r}")
        return cls(sum(1 << i for i, ch in enumerate(s) if ch == "1"), len(s))

    @classmethod
    def zeros(cls, n: int) -> "Word":
        return cls(0, n)

    @classmethod
    def from_positions(cls, positions: Iterable[int], n: int) -> "Word":
        bits = 0
        for i in positions:
            if not 0 <= i < n:
                raise DomainError(f"coordinate {i} outside [0, {n})")
            bits |= 1 << i
        return cls(bits, n)

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def __xor__(self, other: "Word") -> "Word":
        _check_len(self, other)
        return Word(self.bits ^ other.bits, self.n)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def complement(self) -> "Word":
        return Word(self.bits ^ ((1 << self.n) - 1), self.n)

    def positions(self) -> list[int]:
        return [i for i in range(self.n) if (self.bits >> i) & 1]


def _check_len(a: Word, b: Word) -> None:
    if a.n != b.n:
        raise DomainError(f"length mismatch: {a.n} vs {b.n}")


def hamming_distance(a: Word, b: Word) -> int:
    _check_len(a, b)
    return (a.bits ^ b.bits).bit_count()


@dataclass(frozen=True, eq=False)
class Codebook:
    """Ordered i.i.d. codewords. ``rate`` is the design rate the size came from."""

    n: int
    words: np.ndarray
    rate: float
    seed: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise DomainError(f"block length {self.n} outside [1, {MAX_N}]")
        words = np.ascontiguousarray(self.words, dtype=np.uint64)
        if words.ndim != 1 or len(words) == 0:
            raise DomainError("a codebook needs a non-empty 1-d word array")
        if self.n < 64 and np.any(words >> np.uint64(self.n)):
            raise DomainError(f"codeword wider than n={self.n}")
        words.setflags(write=False)
        object.__setattr__(self, "words", words)

    def __len__(self) -> int:
        return len(self.words)

    def __getitem__(self, i: int) -> Word:
        return Word(int(self.words[i]), self.n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Codebook)
            and self.n == other.n
            and self.seed == other.seed
            and np.array_equal(self.words, other.words)
        )

    @property
    def log_size(self) -> float:
        return math.log2(len(self.words))


def num_words_for_rate(rate: float, n: int) -> int:
    """2**floor(rate * n): whole bits of codeword index keep binning exact."""
    if rate < 0:
        raise DomainError(f"rate {rate} < 0 gives an empty code")
    return 1 << math.floor(rate * n + 1e-9)


def sample_codebook(
    n: int, num_words: int, seed: int, rate: Optional[float] = None, max_bits: int = MAX_CODEBOOK_BITS
) -> Codebook:
    """Draw ``num_words`` uniform words of length ``n`` from a seeded PCG64 stream."""
    if not 1 <= n <= MAX_N:
        raise DomainError(f"block length {n} outside [1, {MAX_N}]")
    if num_words < 1:
        raise DomainError(f"num_words={num_words} must be positive")
    if not 0 <= seed < 1 << 64:
        raise DomainError(f"seed {seed} is not an unsigned 64-bit integer")
    if num_words * n > max_bits:
        raise ResourceError(f"{num_words} x {n} bits exceeds the cap of {max_bits}")
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(num_words, n), dtype=np.uint8)
    words = (bits.astype(np.uint64) << np.arange(n, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)
    if rate is None:
        rate = math.log2(num_words) / n
    return Codebook(n=n, words=words, rate=rate, seed=seed)


@dataclass(frozen=True, eq=False)
class BinnedCode:
    """Codebook split into consecutive bins of ``2**ell`` words.

    Message ``m`` with seed ``r`` is sent as word index ``m * 2**ell + r``.
    """

    base: Codebook
    ell: int
    _bins: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.ell < 0:
            raise DomainError(f"ell={self.ell} must be non-negative")
        if len(self.base) % (1 << self.ell):
            raise DomainError(f"2**{self.ell} does not divide {len(self.base)} codewords")
        bins = np.arange(len(self.base), dtype=np.int64) >> self.ell
        bins.setflags(write=False)
        object.__setattr__(self, "_bins", bins)

    def __eq__(self, other) -> bool:
        return isinstance(other, BinnedCode) and self.ell == other.ell and self.base == other.base

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def words(self) -> np.ndarray:
        return self.base.words

    @property
    def bin_size(self) -> int:
        return 1 << self.ell

    @property
    def num_messages(self) -> int:
        return len(self.base) >> self.ell

    @property
    def message_bits(self) -> float:
        """log2 of the message count, i.e. R'n."""
        return math.log2(self.num_messages)

    @property
    def stochastic_rate(self) -> float:
        return self.message_bits / self.n

    @property
    def bin_of(self) -> np.ndarray:
        """Message index of every codeword index."""
        return self._bins

    def bin_indices(self, message: int) -> range:
        return range(message << self.ell, (message + 1) << self.ell)

    def bin_words(self, message: int) -> np.ndarray:
        return self.words[message << self.ell : (message + 1) << self.ell]


def bin_codebook(cb: Codebook, ell: int) -> BinnedCode:
    return BinnedCode(cb, ell)


def encode_index(bc: BinnedCode, message: int, r: int) -> int:
    if not 0 <= message < bc.num_messages:
        raise DomainError(f"message {message} outside [0, {bc.num_messages})")
    if not 0 <= r < bc.bin_size:
        raise DomainError(f"seed r={r} outside [0, {bc.bin_size})")
    return (message << bc.ell) + r


def encode(bc: BinnedCode, message: int, r: Union[int, np.random.Generator]) -> Word:
    """Codeword for ``message`` under seed ``r``; a Generator draws ``r`` uniformly."""
    if isinstance(r, np.random.Generator):
        r = int(r.integers(bc.bin_size))
    return bc.base[encode_index(bc, message, r)]


def nearest_indices(words: np.ndarray, received: np.ndarray) -> np.ndarray:
    """Index of the nearest codeword to each received word; ties to the smallest index."""
    received = np.asarray(received, dtype=np.uint64)
    d = popcount(received[..., None] ^ words)
    return np.argmin(d, axis=-1)


def decode_nearest(bc: BinnedCode, y: Word) -> int:
    if y.n != bc.n:
        raise DomainError(f"received word has length {y.n}, code has {bc.n}")
    return int(bc.bin_of[nearest_indices(bc.words, np.uint64(y.bits))])


def decode_many(bc: BinnedCode, ys: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Vectorised nearest-neighbour decoding of packed received words."""
    ys = np.asarray(ys, dtype=np.uint64)
    flat = ys.reshape(-1)
    out = np.empty(len(flat), dtype=np.int64)
    step = max(1, chunk * 64 // max(len(bc.words), 1))
    for s in range(0, len(flat), step):
        out[s : s + step] = bc.bin_of[nearest_indices(bc.words, flat[s : s + step])]
    return out.reshape(ys.shape)


def words_array(words: Union[Codebook, BinnedCode, Sequence[Word], np.ndarray], n: Optional[int] = None):
    """Normalise a word collection to ``(uint64 array, n)``."""
    if isinstance(words, BinnedCode):
        return words.words, words.n
    if isinstance(words, Codebook):
        return words.words, words.n
    if isinstance(words, np.ndarray):
        if n is None:
            raise DomainError("block length required for a raw word array")
        return words.astype(np.uint64, copy=False), n
    words = list(words)
    if not words:
        return np.zeros(0, dtype=np.uint64), n
    lengths = {w.n for w in words}
    if len(lengths) != 1 or (n is not None and lengths != {n}):
        raise DomainError(f"mixed word lengths {sorted(lengths)}")
    return np.array([w.bits for w in words], dtype=np.uint64), lengths.pop()


def consistent_mask(words: np.ndarray, view: "View") -> np.ndarray:
    return (words & np.uint64(view.mask)) == np.uint64(view.values)


def consistent_subset(words, view: "View") -> list[int]:
    """Ascending indices of words agreeing with ``view`` on its support."""
    arr, n = words_array(words, view.n)
    if n is not None and n != view.n:
        raise DomainError(f"view has length {view.n}, words have {n}")
    return np.flatnonzero(consistent_mask(arr, view)).tolist()


def hamming_ball_volume(n: int, radius: int) -> int:
    return sum(math.comb(n, i) for i in range(radius + 1))


def error_words(n: int, max_weight: int, min_weight: int = 0) -> np.ndarray:
    """All words with min_weight <= weight <= max_weight, by weight then combination order."""
    out = []
    for w in range(min_weight, max_weight + 1):
        for pos in combinations(range(n), w):
            out.append(sum(1 << i for i in pos))
    return np.array(out, dtype=np.uint64)


@dataclass(frozen=True)
class Occupancy:
    count: int
    center: Word
    exact: bool


def max_ball_occupancy(
    cb: Codebook,
    radius: int,
    mode: str = "exhaustive",
    samples: int = 1000,
    rng: Optional[np.random.Generator] = None,
    max_n: int = MAX_EXHAUSTIVE_N,
) -> Occupancy:
    """Largest number of codewords (with multiplicity) in any radius-``radius`` ball.

    ``mode="sampled"`` only tries centers at codeword + random weight-``radius``
    error and returns a lower bound with ``exact=False``.
    """
    n = cb.n
    if not 0 <= radius <= n:
        raise DomainError(f"radius {radius} outside [0, {n}]")
    words = cb.words
    if mode == "sampled":
        if rng is None:
            raise DomainError("sampled mode needs an rng")
        picks = rng.integers(len(words), size=samples)
        errs = np.array(
            [sum(1 << int(i) for i in rng.choice(n, radius, replace=False)) for _ in range(samples)],
            dtype=np.uint64,
        )
        centers = words[picks] ^ errs
        counts = (popcount(centers[:, None] ^ words) <= radius).sum(axis=1)
        i = int(np.argmax(counts))
        return Occupancy(int(counts[i]), Word(int(centers[i]), n), exact=False)
    if mode != "exhaustive":
        raise DomainError(f"unknown occupancy mode {mode!r}")
    if n > max_n:
        raise ResourceError(f"exhaustive occupancy over 2**{n} centers exceeds n <= {max_n}")

    space = 1 << n
    if hamming_ball_volume(n, radius) <= len(words):
        # sum of shifted multiplicity tables, one per error pattern in the ball
        mult = np.bincount(words.astype(np.int64), minlength=space)
        idx = np.arange(space, dtype=np.int64)
        counts = np.zeros(space, dtype=np.int64)
        for e in error_words(n, radius).astype(np.int64):
            counts += mult[idx ^ e]
    else:
        counts = np.empty(space, dtype=np.int64)
        step = max(1, (1 << 22) // len(words))
        for s in range(0, space, step):
            centers = np.arange(s, min(s + step, space), dtype=np.uint64)
            counts[s : s + len(centers)] = (popcount(centers[:, None] ^ words) <= radius).sum(axis=1)
    c = int(np.argmax(counts))
    return Occupancy(int(counts[c]), Word(c, n), exact=True)
