"""Binary entropy, the random-wiretap objective f(p), and capacity bounds.

The achievable rate is ``max(1 - h(rho_w) - rho_r, 0)`` and the converse is
``1 - h(rho_w) - rho_r - min_p f(p)`` with

    f(p) = h((2 rho_w - 1) p + 1 - rho_w) - h(rho_w) - rho_r h(p).

All logarithms are base 2.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from awtc_lab.errors import DomainError

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2

CSV_HEADER = ["rho_r", "rho_w", "lower_raw", "lower", "upper", "p_star", "f_min", "ratio"]

# absorbs representation error in products like (2/14) * 14
_FLOOR_FUZZ = 1e-9


@dataclass(frozen=True)
class ChannelParams:
    """Read fraction, write fraction and (optionally) the block length.

    The closed ranges ``0 <= rho_r <= 1`` and ``0 <= rho_w <= 1/2`` are
    accepted so that plotting grids can touch the endpoints.
    """

    rho_r: float
    rho_w: float
    n: Optional[int] = None

    def __post_init__(self):
        for name, value, hi in (("rho_r", self.rho_r, 1.0), ("rho_w", self.rho_w, 0.5)):
            if not isinstance(value, (int, float)) or math.isnan(value) or not 0.0 <= value <= hi:
                raise DomainError(f"{name}={value!r} outside [0, {hi}]")
        if self.n is not None and (int(self.n) != self.n or self.n < 1):
            raise DomainError(f"block length n={self.n!r} must be a positive integer")

    @property
    def read_budget(self) -> int:
        return math.floor(self.rho_r * self._n() + _FLOOR_FUZZ)

    @property
    def write_budget(self) -> int:
        return math.floor(self.rho_w * self._n() + _FLOOR_FUZZ)

    @property
    def effective(self) -> tuple[float, float]:
        """Fractions actually realised after rounding the budgets down."""
        n = self._n()
        return self.read_budget / n, self.write_budget / n

    def _n(self) -> int:
        if self.n is None:
            raise DomainError("block length n is required for budget arithmetic")
        return int(self.n)


def binary_entropy(p: float) -> float:
    """h(p) in bits, using 0 log 0 = 0."""
    if isinstance(p, bool) or not isinstance(p, (int, float, np.floating, np.integer)):
        raise DomainError(f"p={p!r} is not a real number")
    p = float(p)
    if math.isnan(p) or not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p!r} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _h(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        b = np.where(q > 0, -q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    return a + b


def _f_vec(p: np.ndarray, rho_r: float, rho_w: float) -> np.ndarray:
    inner = np.clip((2.0 * rho_w - 1.0) * p + 1.0 - rho_w, 0.0, 1.0)
    return _h(inner) - binary_entropy(rho_w) - rho_r * _h(p)


def f_objective(p: float, params: ChannelParams) -> float:
    """Evaluate f(p) for the given (rho_r, rho_w)."""
    if isinstance(p, bool) or not isinstance(p, (int, float, np.floating, np.integer)):
        raise DomainError(f"p={p!r} is not a real number")
    p = float(p)
    if math.isnan(p) or not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p!r} outside [0, 1]")
    rho_r, rho_w = params.rho_r, params.rho_w
    inner = min(max((2.0 * rho_w - 1.0) * p + 1.0 - rho_w, 0.0), 1.0)
    return binary_entropy(inner) - binary_entropy(rho_w) - rho_r * binary_entropy(p)


def golden_section(f, a: float, b: float, xtol: float = 1e-12, maxiter: int = 200) -> float:
    """Golden-section search for a minimiser of a unimodal ``f`` on [a, b]."""
    a, b = min(a, b), max(a, b)
    c = a + INV_PHI2 * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI2 * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return c if fc <= fd else d


def minimize_f(params: ChannelParams, coarse_step: float = 1e-3) -> tuple[float, float]:
    """Global minimiser of f over [0, 1] as ``(p_star, f_min)``.

    f(p) = f(1 - p), so only [0, 1/2] is searched and the returned p_star is
    the smaller member of any symmetric pair. Every local minimum of a
    ``coarse_step`` grid is refined by golden section; the best refined
    point wins, ties going to the smallest p.
    """
    rho_r, rho_w = params.rho_r, params.rho_w
    m = int(round(0.5 / coarse_step))
    grid = np.linspace(0.0, 0.5, m + 1)
    vals = _f_vec(grid, rho_r, rho_w)
    # f(0) = 0 analytically; the float formula leaves ~1e-17 residue
    vals[0] = 0.0

    def f(p):
        return 0.0 if p == 0.0 else f_objective(p, params)

    left = np.concatenate(([np.inf], vals[:-1]))
    right = np.concatenate((vals[1:], [np.inf]))
    local = np.flatnonzero((vals <= left) & (vals <= right))
    if len(local) > 64:
        # plateau (e.g. rho_r = 0, rho_w = 1/2): keep the lowest few
        local = local[np.argsort(vals[local], kind="stable")[:64]]

    best_p, best_f = 0.0, 0.0
    for i in sorted(local):
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, m)]
        p = golden_section(f, lo, hi)
        fp = f(p)
        if vals[i] < fp or (vals[i] == fp and grid[i] < p):
            p, fp = float(grid[i]), float(vals[i])
        if fp < best_f or (fp == best_f and p < best_p):
            best_p, best_f = float(p), float(fp)
    return best_p, min(best_f, 0.0)


@dataclass(frozen=True)
class BoundsResult:
    rho_r: float
    rho_w: float
    lower_raw: float
    lower: float
    upper: float
    p_star: float
    f_min: float
    zero_capacity: bool

    @property
    def ratio(self) -> Optional[float]:
        """lower / upper, undefined when upper <= 0."""
        return self.lower / self.upper if self.upper > 0 else None

    @property
    def in_rand_cap_regime(self) -> bool:
        """True when rho_r <= 1 - h(rho_w), where the converse formula is stated."""
        return self.lower_raw >= 0.0


def capacity_bounds(params: ChannelParams) -> BoundsResult:
    rho_r, rho_w = params.rho_r, params.rho_w
    p_star, f_min = minimize_f(params)
    lower_raw = (1.0 - binary_entropy(rho_w)) - rho_r
    return BoundsResult(
        rho_r=rho_r,
        rho_w=rho_w,
        lower_raw=lower_raw,
        lower=max(lower_raw, 0.0),
        upper=lower_raw - f_min,
        p_star=p_star,
        f_min=f_min,
        # guard keeps decimal grid points on the threshold from flipping early
        zero_capacity=rho_r > 1.0 - 4.0 * rho_w * (1.0 - rho_w) + 1e-12,
    )


def rho_r_grid(step: float) -> list[float]:
    """{step, 2 step, ...} strictly below 1."""
    if not isinstance(step, (int, float)) or math.isnan(step) or not 0.0 < step < 1.0:
        raise DomainError(f"rho_r step {step!r} must lie in (0, 1)")
    out = []
    k = 1
    while True:
        r = round(k * step, 12)
        if r >= 1.0 - 1e-12:
            return out
        out.append(r)
        k += 1


def bounds_grid(rho_w_list: Sequence[float], rho_r_step: float) -> list[BoundsResult]:
    """One BoundsResult per (rho_w, rho_r) cell, ordered by (rho_w, rho_r)."""
    if not len(rho_w_list):
        raise DomainError("empty rho_w list")
    for rw in rho_w_list:
        if not isinstance(rw, (int, float)) or math.isnan(rw) or not 0.0 < rw < 0.5:
            raise DomainError(f"rho_w={rw!r} outside (0, 1/2)")
    rrs = rho_r_grid(rho_r_step)
    rows = [capacity_bounds(ChannelParams(rr, rw)) for rw in rho_w_list for rr in rrs]
    rows.sort(key=lambda r: (r.rho_w, r.rho_r))
    return rows


def _fmt(x: Optional[float]) -> str:
    if x is None:
        return ""
    s = f"{x:.9g}"
    return "0" if s == "-0" else s


def bounds_csv(rows: Iterable[BoundsResult], with_regime: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + (["regime"] if with_regime else []))
    for r in rows:
        line = [_fmt(v) for v in (r.rho_r, r.rho_w, r.lower_raw, r.lower, r.upper, r.p_star, r.f_min, r.ratio)]
        if with_regime:
            line.append("rand-cap" if r.in_rand_cap_regime else "outside")
        w.writerow(line)
    return buf.getvalue()
