"""Deterministic 64-bit seed derivation.

``derive_seed(master, stream, index)`` is ``hash64(hash64(master, stream), index)``
with ``hash64(a, b) = splitmix64(a ^ splitmix64(b))``. Trial seeds depend only on
(master seed, stream, trial index), so trial sets are stable under any
execution order.
"""

MASK = (1 << 64) - 1

CODEBOOK = 1
TRIAL = 2
BSC = 3
BEC = 4
SAMPLING = 5


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def hash64(a: int, b: int) -> int:
    return splitmix64((a & MASK) ^ splitmix64(b & MASK))


def derive_seed(master: int, stream: int, index: int = 0) -> int:
    return hash64(hash64(master, stream), index)
