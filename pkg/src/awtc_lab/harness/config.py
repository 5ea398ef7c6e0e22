"""Experiment configuration and the ``key=value`` config-file reader."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from awtc_lab.adversary import Strategy
from awtc_lab.bounds import ChannelParams, binary_entropy
from awtc_lab.code import num_words_for_rate
from awtc_lab.errors import DomainError, FormatError

MODES = ("awtc", "random-wtc")
INTERVALS = ("normal", "clopper-pearson")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    rho_r: float
    rho_w: float
    epsilon: float
    ell: int = 0
    trials: int = 1000
    master_seed: int = 0
    adversary: Strategy = field(default_factory=lambda: Strategy("exhaustive"))
    xi: float = 0.0
    mode: str = "awtc"
    interval: str = "normal"
    num_words: Optional[int] = None

    def __post_init__(self):
        ChannelParams(self.rho_r, self.rho_w, self.n)
        if self.trials < 1:
            raise DomainError(f"trials={self.trials} must be at least 1")
        if not 0 <= self.master_seed < 1 << 64:
            raise DomainError(f"master seed {self.master_seed} is not an unsigned 64-bit integer")
        if self.mode not in MODES:
            raise DomainError(f"mode {self.mode!r} not in {MODES}")
        if self.interval not in INTERVALS:
            raise DomainError(f"interval {self.interval!r} not in {INTERVALS}")
        if self.xi < 0:
            raise DomainError(f"xi={self.xi} must be non-negative")
        size = self.codebook_size
        if self.ell < 0 or (1 << self.ell) > size or size % (1 << self.ell):
            raise DomainError(f"ell={self.ell} does not split {size} codewords into whole bins")

    @property
    def params(self) -> ChannelParams:
        return ChannelParams(self.rho_r, self.rho_w, self.n)

    @property
    def rate(self) -> float:
        """Design rate 1 - h(rho_w) - epsilon."""
        return 1.0 - binary_entropy(self.rho_w) - self.epsilon

    @property
    def codebook_size(self) -> int:
        if self.num_words is not None:
            if self.num_words < 1:
                raise DomainError(f"num_words={self.num_words} must be positive")
            return self.num_words
        if self.rate < 0:
            raise DomainError(f"rate 1 - h({self.rho_w}) - {self.epsilon} is negative; no codewords")
        return num_words_for_rate(self.rate, self.n)

    @property
    def read_budget(self) -> int:
        return self.params.read_budget

    @property
    def write_budget(self) -> int:
        return self.params.write_budget

    @property
    def regime(self) -> str:
        """Which side of rho_r the seed fraction ell/n sits on."""
        r = self.read_budget / self.n
        x = self.ell / self.n
        return "ell/n>rho_r" if x > r else ("ell/n<rho_r" if x < r else "ell/n=rho_r")


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """``key=value`` lines; ``#`` starts a comment; dashes in keys become underscores."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"{source}: expected key=value, got {raw!r}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise FormatError(f"{source}: empty key", line=lineno)
        out[key.replace("-", "_")] = value
    return out


def load_config(path) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read(), str(path))

