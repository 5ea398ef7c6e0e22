"""``awtc-lab`` command line.

Exit status: 0 on success, 2 on a configuration or input error, 3 when a
computation would exceed a resource cap. Values come from (lowest to
highest precedence) built-in defaults, ``--config`` files, and flags given
on the command line.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Callable, Optional

import numpy as np

from awtc_lab.adversary import ALIASES, Strategy
from awtc_lab.bounds import bounds_csv, bounds_grid
from awtc_lab.code import Word, max_ball_occupancy
from awtc_lab.errors import AwtcError, ResourceError
from awtc_lab.harness import seeds
from awtc_lab.harness.config import ExperimentConfig, load_config
from awtc_lab.harness.experiments import (
    REDUCE_HEADER,
    RELIABILITY_HEADER,
    build_code,
    conflict_count,
    csv_text,
    e0_window,
    records_jsonl,
    reduce_rows,
    reliability_row,
    run_random_wtc,
    run_reliability,
)
from awtc_lab.harness.storage import dumps_codebook, load_codebook, save_codebook
from awtc_lab.secrecy import secrecy_report


def _floats(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip()]


def _bool(s: str) -> bool:
    if s.lower() in ("1", "true", "yes", "on"):
        return True
    if s.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


# option name -> (converter, default)
BOUNDS_OPTS: dict[str, tuple[Callable[[str], Any], Any]] = {
    "rho_w": (_floats, [0.05, 0.1, 0.2]),
    "rho_r_step": (float, 0.01),
    "out": (str, None),
    "with_regime": (_bool, False),
}

CODE_OPTS = {
    "n": (int, 14),
    "rho_r": (float, 2 / 14),
    "rho_w": (float, 2 / 14),
    "epsilon": (float, 0.15),
    "ell": (int, 0),
    "seed": (int, 0),
    "num_words": (int, None),
    "codebook": (str, None),
}

EXPERIMENT_OPTS = {
    **CODE_OPTS,
    "trials": (int, 2000),
    "adversary": (str, "exhaustive"),
    "max_enum": (int, 100_000),
    "interval": (str, "normal"),
    "xi": (float, None),
    "out": (str, None),
    "records": (str, None),
}

BUILD_OPTS = {**CODE_OPTS, "out": (str, None)}

SECRECY_OPTS = {
    "codebook": (str, None),
    "read_budget": (int, None),
    "mode": (str, "exact"),
    "samples": (int, 1000),
    "seed": (int, 0),
    "out": (str, None),
}

CONFLICT_OPTS = {**CODE_OPTS, "samples": (int, 200), "radius": (int, None), "out": (str, None)}

OPTIONS = {
    "bounds": BOUNDS_OPTS,
    "build": BUILD_OPTS,
    "secrecy": SECRECY_OPTS,
    "reliability": EXPERIMENT_OPTS,
    "reduce": EXPERIMENT_OPTS,
    "conflicts": CONFLICT_OPTS,
}

HELP = {
    "rho_w": "write fraction (comma list for `bounds`)",
    "rho_r_step": "grid step for rho_r",
    "rho_r": "read fraction",
    "n": "block length",
    "epsilon": "rate slack: R = 1 - h(rho_w) - epsilon",
    "ell": "log2 of the bin size",
    "seed": "master seed (unsigned 64-bit)",
    "num_words": "override the codebook size 2**floor(R n)",
    "codebook": "load this codebook file instead of sampling one",
    "trials": "Monte Carlo trials",
    "adversary": "adversary strategy",
    "max_enum": "cap on enumerated error words for the exhaustive adversary",
    "interval": "normal | clopper-pearson",
    "xi": "slack for the random wiretap channel (default 1/n)",
    "records": "write per-trial JSON lines here",
    "read_budget": "number of coordinates the adversary reads",
    "mode": "exact | sampled",
    "samples": "number of sampled supports / views",
    "radius": "Hamming radius (default floor(rho_w n))",
    "out": "output path (default stdout)",
    "with_regime": "append a regime column to the bounds CSV",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="awtc-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, opts in OPTIONS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", action="append", default=[], help="key=value file (repeatable)")
        for key in opts:
            flag = "--" + key.replace("_", "-")
            if key == "seed":
                p.add_argument(flag, "--master-seed", dest=key, default=None, help=HELP[key])
            elif key == "adversary":
                p.add_argument(flag, dest=key, default=None, choices=sorted(ALIASES), help=HELP[key])
            elif key == "with_regime":
                p.add_argument(flag, dest=key, action="store_const", const="true", default=None, help=HELP[key])
            else:
                p.add_argument(flag, dest=key, default=None, help=HELP.get(key))
    return parser


class ConfigError(AwtcError):
    pass


def resolve(command: str, args: argparse.Namespace) -> dict[str, Any]:
    """defaults < config files < explicit flags."""
    opts = OPTIONS[command]
    merged: dict[str, Any] = {k: d for k, (_, d) in opts.items()}
    raw: dict[str, str] = {}
    for path in args.config:
        raw.update(load_config(path))
    for key, value in vars(args).items():
        if key in opts and value is not None:
            raw[key] = value
    aliases = {"master_seed": "seed"}
    for key, value in raw.items():
        key = aliases.get(key, key)
        if key not in opts:
            raise ConfigError(f"unknown option {key!r} for `{command}`")
        conv = opts[key][0]
        try:
            merged[key] = conv(value) if isinstance(value, str) else value
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from exc
    return merged


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _config(o: dict) -> ExperimentConfig:
    return ExperimentConfig(
        n=o["n"],
        rho_r=o["rho_r"],
        rho_w=o["rho_w"],
        epsilon=o["epsilon"],
        ell=o["ell"],
        trials=o.get("trials", 1),
        master_seed=o["seed"],
        adversary=Strategy(o.get("adversary", "exhaustive"), max_enum=o.get("max_enum", 100_000)),
        xi=o.get("xi") or 0.0,
        interval=o.get("interval", "normal"),
        num_words=o["num_words"],
    )


def _setup(o: dict):
    """Config plus code; a ``--codebook`` file fixes n, ell and the codebook size."""
    if o.get("codebook"):
        bc = load_codebook(o["codebook"])
        o = {**o, "n": bc.n, "ell": bc.ell, "num_words": len(bc.words)}
        return _config(o), bc
    config = _config(o)
    return config, build_code(config)


def cmd_bounds(o: dict) -> None:
    rows = bounds_grid(o["rho_w"], o["rho_r_step"])
    _emit(bounds_csv(rows, with_regime=o["with_regime"]), o["out"])


def cmd_build(o: dict) -> None:
    config = _config(o)
    bc = build_code(config)
    if o["out"] is None:
        sys.stdout.write(dumps_codebook(bc))
    else:
        save_codebook(bc, o["out"])


def cmd_secrecy(o: dict) -> None:
    if not o["codebook"]:
        raise ConfigError("`secrecy` needs --codebook")
    if o["read_budget"] is None:
        raise ConfigError("`secrecy` needs --read-budget")
    bc = load_codebook(o["codebook"])
    rng = np.random.default_rng(seeds.derive_seed(o["seed"], seeds.SAMPLING))
    rep = secrecy_report(bc, o["read_budget"], mode=o["mode"], samples=o["samples"], rng=rng)
    _emit(csv_text(["metric", "support", "value", "exact_flag"], rep.rows()), o["out"])


def cmd_reliability(o: dict) -> None:
    config, bc = _setup(o)
    res = run_reliability(config, bc, keep_records=o["records"] is not None)
    _emit(csv_text(RELIABILITY_HEADER, [reliability_row(config, bc, res)]), o["out"])
    if o["records"] is not None:
        _emit(records_jsonl(res.records), o["records"])


def cmd_reduce(o: dict) -> None:
    if o["xi"] is None:
        o = {**o, "xi": 1.0 / o["n"]}
    config, bc = _setup(o)
    awtc = run_reliability(config, bc, keep_records=o["records"] is not None)
    rep = run_random_wtc(config, bc, awtc=awtc)
    _emit(csv_text(REDUCE_HEADER, reduce_rows(rep)), o["out"])
    if o["records"] is not None:
        _emit(records_jsonl(awtc.records), o["records"])


def cmd_conflicts(o: dict) -> None:
    config, bc = _setup(o)
    cb = bc.base
    radius = o["radius"] if o["radius"] is not None else config.write_budget
    rb = config.read_budget
    rng = np.random.default_rng(seeds.derive_seed(config.master_seed, seeds.SAMPLING))
    lo, hi = e0_window(cb, rb, config.epsilon)
    rows = []
    for i in range(o["samples"]):
        support = sorted(int(j) for j in rng.choice(cb.n, rb, replace=False))
        mask = np.uint64(sum(1 << j for j in support))
        x = cb.words[rng.integers(len(cb.words))]
        subset = np.flatnonzero((cb.words & mask) == (x & mask))
        e = Word(sum(1 << int(j) for j in rng.choice(cb.n, radius, replace=False)), cb.n)
        rows.append([
            i, ";".join(map(str, support)), len(subset), lo <= len(subset) <= hi, str(e),
            conflict_count(cb, subset, e, radius),
        ])
    occ = max_ball_occupancy(cb, radius, mode="exhaustive" if cb.n <= 20 else "sampled", rng=rng)
    rows.append(["max_ball_occupancy", str(occ.center), occ.count, occ.exact, "", ""])
    header = ["sample", "support", "consistent", "in_e0_window", "error", "conflicts"]
    _emit(csv_text(header, rows), o["out"])


COMMANDS = {
    "bounds": cmd_bounds,
    "build": cmd_build,
    "secrecy": cmd_secrecy,
    "reliability": cmd_reliability,
    "reduce": cmd_reduce,
    "conflicts": cmd_conflicts,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve(args.command, args)
        COMMANDS[args.command](opts)
    except ResourceError as exc:
        print(f"awtc-lab: resource cap: {exc}", file=sys.stderr)
        return 3
    except (AwtcError, ValueError, OSError) as exc:
        print(f"awtc-lab: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
