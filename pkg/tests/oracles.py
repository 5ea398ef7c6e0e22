"""Slow, independently written reference implementations used as test oracles.

Nothing here imports awtc_lab; words are plain Python ints with coordinate i
at bit i, or '0'/'1' strings read left to right.
"""

import itertools
import math
from collections import Counter

import mpmath
import numpy as np


def h(p):
    if p in (0, 1):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def f_grid_min(rho_r, rho_w, step=1e-6):
    """Brute-force min of f over {0, step, 2 step, ..., 1}; returns (p, f)."""
    p = np.linspace(0.0, 1.0, int(round(1 / step)) + 1)

    def hv(q):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = -q * np.log2(q) - (1 - q) * np.log2(1 - q)
        return np.nan_to_num(out, nan=0.0)

    f = hv((2 * rho_w - 1) * p + 1 - rho_w) - h(rho_w) - rho_r * hv(p)
    f[0] = f[-1] = 0.0
    i = int(np.argmin(f))
    return float(p[i]), float(f[i])


def f_min_mp(rho_r, rho_w, depth=700):
    """High-precision min of f on (0, 1/2] via mpmath (grid then local refinement).

    For small rho_r the minimiser can sit near 2^(-c / rho_r), far below any
    float, so the scan goes down to 10^-depth with matching precision.
    """
    dps = depth + 60
    with mpmath.workdps(dps):
        rr, rw = mpmath.mpf(rho_r), mpmath.mpf(rho_w)

        def H(q):
            if q <= 0 or q >= 1:
                return mpmath.mpf(0)
            return -q * mpmath.log(q, 2) - (1 - q) * mpmath.log(1 - q, 2)

        def f(q):
            return H((2 * rw - 1) * q + 1 - rw) - H(rw) - rr * H(q)

        # near p=0, f ~ p log(1/p) (rho_r - (1-2rho_w) ...) so scan logarithmically too
        pts = [mpmath.mpf(10) ** (-k) for k in range(depth, 0, -1)]
        pts += [mpmath.mpf(i) / 1000 for i in range(1, 501)]
        vals = [f(q) for q in pts]
        i = min(range(len(pts)), key=lambda j: vals[j])
        lo = pts[i - 1] if i > 0 else pts[0] / 10
        hi = pts[i + 1] if i + 1 < len(pts) else mpmath.mpf("0.5")
        try:
            q = mpmath.findroot(lambda t: mpmath.diff(f, t), (lo, hi), solver="anderson")
            if lo <= q <= hi and f(q) < vals[i]:
                return f(q)
        except (ValueError, ZeroDivisionError):
            pass
        return vals[i]


def to_str(w, n):
    return "".join("1" if (w >> i) & 1 else "0" for i in range(n))


def dist(a, b):
    return bin(a ^ b).count("1")


def decode(words, y, bin_size):
    """Nearest neighbour, smallest index on ties, returns the bin."""
    best_i, best_d = 0, None
    for i, w in enumerate(words):
        d = dist(w, y)
        if best_d is None or d < best_d:
            best_i, best_d = i, d
    return best_i // bin_size


def consistent(words, support, x):
    return [i for i, w in enumerate(words) if all(((w >> j) & 1) == ((x >> j) & 1) for j in support)]


def equivocation(words, n, ell, support):
    """H(S|V) from the full (message, view) joint table."""
    joint = Counter()
    for i, w in enumerate(words):
        v = tuple((w >> j) & 1 for j in support)
        joint[(i >> ell, v)] += 1
    total = len(words)
    pv = Counter()
    for (m, v), c in joint.items():
        pv[v] += c
    out = 0.0
    for (m, v), c in joint.items():
        out -= (c / total) * math.log2(c / pv[v])
    return out


def l_max(words, n, ell, k):
    best = 0
    for s in itertools.combinations(range(n), k):
        cnt = Counter()
        for i, w in enumerate(words):
            cnt[(i >> ell, tuple((w >> j) & 1 for j in s))] += 1
        best = max(best, max(cnt.values()))
    return best


def divergence_hist(words, support):
    """D(P_bin|support || uniform) from a plain histogram."""
    k = len(support)
    hist = Counter(tuple((w >> j) & 1 for j in support) for w in words)
    total = len(words)
    return sum((c / total) * math.log2((c / total) * 2**k) for c in hist.values())


def ball_occupancy(words, n, radius):
    """Max over all 2^n centres; returns (count, smallest maximising centre)."""
    best, arg = -1, None
    for c in range(1 << n):
        cnt = sum(1 for w in words if dist(w, c) <= radius)
        if cnt > best:
            best, arg = cnt, c
    return best, arg


def conflicts(words, subset, e, radius):
    count = 0
    for i in subset:
        y = words[i] ^ e
        for j, w in enumerate(words):
            if j != i and dist(y, w) <= radius:
                count += 1
                break
    return count


def posterior_error_table(words, n, ell, support, x, budget):
    """{error string: posterior error probability} over every e with wt(e) <= budget."""
    cand = consistent(words, support, x)
    out = {}
    for bits in itertools.product((0, 1), repeat=n):
        if sum(bits) > budget:
            continue
        e = sum(b << i for i, b in enumerate(bits))
        fails = sum(decode(words, words[i] ^ e, 1 << ell) != (i >> ell) for i in cand)
        out["".join(map(str, bits))] = fails / len(cand)
    return out


def binom_tail(n, p, k):
    """P(Bin(n, p) >= k)."""
    return math.fsum(math.comb(n, i) * p**i * (1 - p) ** (n - i) for i in range(k, n + 1))


def binom_window(trials, p, lo, hi, offset=0):
    """P(lo <= offset + Bin(trials, p) <= hi)."""
    return math.fsum(
        math.comb(trials, i) * p**i * (1 - p) ** (trials - i)
        for i in range(trials + 1)
        if lo <= offset + i <= hi
    )
