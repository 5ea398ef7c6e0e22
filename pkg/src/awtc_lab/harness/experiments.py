"""Monte Carlo reliability runs, the random-wiretap comparison, and list-size probes."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.stats import beta

from awtc_lab.adversary import choose_error, choose_support
from awtc_lab.channel import apply_error, bec_observe, bsc_transmit, observe
from awtc_lab.code import BinnedCode, Codebook, Word, bin_codebook, decode_nearest, popcount, sample_codebook
from awtc_lab.errors import BudgetError, DomainError
from awtc_lab.harness import seeds
from awtc_lab.harness.config import ExperimentConfig
from awtc_lab.secrecy import equivocation_for_support, min_equivocation

Z95 = 1.959963984540054


def build_code(config: ExperimentConfig) -> BinnedCode:
    cb = sample_codebook(
        config.n,
        config.codebook_size,
        seeds.derive_seed(config.master_seed, seeds.CODEBOOK),
        rate=config.rate,
    )
    return bin_codebook(cb, config.ell)


def proportion_interval(failures: int, trials: int, method: str = "normal") -> tuple[float, float]:
    """Two-sided 95% interval for a binomial proportion."""
    p = failures / trials
    if method == "normal":
        half = Z95 * math.sqrt(p * (1 - p) / trials)
        return max(p - half, 0.0), min(p + half, 1.0)
    if method == "clopper-pearson":
        lo = 0.0 if failures == 0 else float(beta.ppf(0.025, failures, trials - failures + 1))
        hi = 1.0 if failures == trials else float(beta.ppf(0.975, failures + 1, trials - failures))
        return lo, hi
    raise DomainError(f"unknown interval method {method!r}")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    message: int
    r: int
    support: tuple[int, ...]
    error_weight: int
    decoded: int
    success: bool

    def to_json(self) -> str:
        d = asdict(self)
        d["support"] = list(self.support)
        return json.dumps(d, separators=(",", ":"))


@dataclass
class ReliabilityResult:
    adversary: str
    trials: int
    failures: int
    error_rate: float
    ci_low: float
    ci_high: float
    records: list = field(default_factory=list, repr=False)

    @property
    def ci95(self) -> float:
        """Half-width of the 95% interval."""
        return (self.ci_high - self.ci_low) / 2


def run_reliability(
    config: ExperimentConfig, code: Optional[BinnedCode] = None, keep_records: bool = True
) -> ReliabilityResult:
    """Estimate the average decoding error against ``config.adversary``.

    Each trial draws a uniform message and seed from its own derived RNG,
    lets the adversary pick a support and an error from the view, and
    decodes with the nearest-neighbour rule.
    """
    bc = code if code is not None else build_code(config)
    if bc.n != config.n:
        raise DomainError(f"code length {bc.n} does not match n={config.n}")
    strategy = config.adversary
    rb, wb = config.read_budget, config.write_budget
    failures = 0
    records = []
    for t in range(config.trials):
        rng = np.random.default_rng(seeds.derive_seed(config.master_seed, seeds.TRIAL, t))
        message = int(rng.integers(bc.num_messages))
        r = int(rng.integers(bc.bin_size))
        x = bc.base[(message << bc.ell) + r]
        support = choose_support(strategy, bc.n, rb, rng)
        view = observe(x, support)
        e = choose_error(strategy, bc, view, wb, rng)
        y = apply_error(x, e, wb)
        decoded = decode_nearest(bc, y)
        ok = decoded == message
        failures += not ok
        if keep_records:
            records.append(TrialRecord(t, message, r, tuple(support), e.weight, decoded, ok))
    lo, hi = proportion_interval(failures, config.trials, config.interval)
    return ReliabilityResult(strategy.kind, config.trials, failures, failures / config.trials, lo, hi, records)


@dataclass
class RandomWtcReport:
    bsc_flip: float
    bec_erase: float
    delta_random: float
    ci_random: tuple[float, float]
    eta_random: float
    delta_awtc: float
    ci_awtc: tuple[float, float]
    eta_awtc: float
    eta_awtc_exact: bool
    rate_prime: float
    trials: int
    adversary: str

    def width_random(self) -> float:
        return self.ci_random[1] - self.ci_random[0]

    def width_awtc(self) -> float:
        return self.ci_awtc[1] - self.ci_awtc[0]


def run_random_wtc(
    config: ExperimentConfig, code: Optional[BinnedCode] = None, awtc: Optional[ReliabilityResult] = None
) -> RandomWtcReport:
    """Evaluate one code on BSC(rho_w - xi) / BEC(1 - rho_r + xi) next to its AWTC run.

    The fractions are the effective ones, budget / n. ``awtc`` may carry a
    precomputed AWTC reliability result for the same config.
    """
    bc = code if code is not None else build_code(config)
    n = bc.n
    rho_r, rho_w = config.read_budget / n, config.write_budget / n
    flip = rho_w - config.xi
    erase = 1.0 - rho_r + config.xi
    if flip < 0 or erase > 1:
        raise DomainError(f"xi={config.xi} gives BSC({flip:g}) / BEC({erase:g}); need 0 <= xi <= min(rho_r, rho_w)")

    failures = 0
    cache: dict[tuple[int, ...], float] = {}
    h_sum = 0.0
    for t in range(config.trials):
        rng = np.random.default_rng(seeds.derive_seed(config.master_seed, seeds.BSC, t))
        message = int(rng.integers(bc.num_messages))
        x = bc.base[(message << bc.ell) + int(rng.integers(bc.bin_size))]
        failures += decode_nearest(bc, bsc_transmit(x, flip, rng)) != message

        rng = np.random.default_rng(seeds.derive_seed(config.master_seed, seeds.BEC, t))
        x = bc.base[int(rng.integers(len(bc.words)))]
        support = bec_observe(x, erase, rng).support
        if support not in cache:
            cache[support] = equivocation_for_support(bc, support)
        h_sum += cache[support]

    if awtc is None:
        awtc = run_reliability(config, bc, keep_records=False)
    me = min_equivocation(bc, config.read_budget)
    return RandomWtcReport(
        bsc_flip=flip,
        bec_erase=erase,
        delta_random=failures / config.trials,
        ci_random=proportion_interval(failures, config.trials, config.interval),
        eta_random=h_sum / config.trials / n,
        delta_awtc=awtc.error_rate,
        ci_awtc=(awtc.ci_low, awtc.ci_high),
        eta_awtc=me.delta / n,
        eta_awtc_exact=me.exact,
        rate_prime=bc.stochastic_rate,
        trials=config.trials,
        adversary=awtc.adversary,
    )


@dataclass(frozen=True)
class E0Result:
    pass_fraction: float
    sizes: tuple[int, ...]
    window: tuple[float, float]


def e0_window(cb: Codebook, read_budget: int, epsilon: float) -> tuple[float, float]:
    """[2^((R - rho_r - eps/2) n), 2^((R - rho_r + eps/2) n)] with R = log2|C| / n."""
    centre = cb.log_size - read_budget
    half = epsilon * cb.n / 2
    return 2.0 ** (centre - half), 2.0 ** (centre + half)


def event_e0_check(
    cb: Codebook, read_budget: int, epsilon: float, samples: int, rng: np.random.Generator
) -> E0Result:
    """Fraction of sampled views whose consistent set falls in the E0 size window.

    A view is a uniform size-``read_budget`` support read off a uniform codeword.
    """
    if samples < 1:
        raise DomainError("samples must be at least 1")
    if not 0 <= read_budget <= cb.n:
        raise DomainError(f"read budget {read_budget} outside [0, {cb.n}]")
    lo, hi = e0_window(cb, read_budget, epsilon)
    sizes = []
    for _ in range(samples):
        support = rng.choice(cb.n, read_budget, replace=False)
        mask = np.uint64(sum(1 << int(i) for i in support))
        x = cb.words[rng.integers(len(cb.words))]
        sizes.append(int(((cb.words & mask) == (x & mask)).sum()))
    passed = sum(lo <= s <= hi for s in sizes)
    return E0Result(passed / samples, tuple(sizes), (lo, hi))


def conflict_count(cb: Codebook, subset: Sequence[int], e: Word, radius: int) -> int:
    """Number of x in ``subset`` whose x + e lies within ``radius`` of another codeword index."""
    if e.n != cb.n:
        raise DomainError(f"error length {e.n} does not match code length {cb.n}")
    if e.weight > radius:
        raise BudgetError(f"error weight {e.weight} exceeds radius {radius}")
    idx = np.asarray(subset, dtype=np.int64)
    if len(idx) == 0:
        return 0
    received = cb.words[idx] ^ np.uint64(e.bits)
    close = popcount(received[:, None] ^ cb.words) <= radius
    close[np.arange(len(idx)), idx] = False
    return int(close.any(axis=1).sum())


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


RELIABILITY_HEADER = [
    "adversary", "n", "rho_r", "rho_w", "read_budget", "write_budget", "epsilon", "ell",
    "codewords", "messages", "trials", "master_seed", "failures", "error_rate", "ci95", "ci_low", "ci_high",
]


def reliability_row(config: ExperimentConfig, bc: BinnedCode, res: ReliabilityResult) -> list:
    return [
        res.adversary, config.n, config.rho_r, config.rho_w, config.read_budget, config.write_budget,
        config.epsilon, config.ell, len(bc.words), bc.num_messages, res.trials, config.master_seed,
        res.failures, res.error_rate, res.ci95, res.ci_low, res.ci_high,
    ]


REDUCE_HEADER = ["channel", "parameter", "error_rate", "ci_low", "ci_high", "eta", "eta_exact", "rate_prime"]


def reduce_rows(rep: RandomWtcReport) -> list[list]:
    return [
        ["random-wtc", f"bsc={rep.bsc_flip!r};bec={rep.bec_erase!r}", rep.delta_random, *rep.ci_random,
         rep.eta_random, False, rep.rate_prime],
        ["awtc", rep.adversary, rep.delta_awtc, *rep.ci_awtc, rep.eta_awtc, rep.eta_awtc_exact, rep.rate_prime],
    ]


def records_jsonl(records: Sequence[TrialRecord]) -> str:
    return "".join(r.to_json() + "\n" for r in records)
