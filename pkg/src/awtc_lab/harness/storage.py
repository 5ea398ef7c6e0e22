"""Codebook text format.

::

    AWTC-CODEBOOK v1
    n=<int> words=<int> ell=<int> seed=<u64-decimal>
    <one lowercase hex word per line, most significant nibble first,
     left-padded to ceil(n/4) digits>
"""

from __future__ import annotations

import os
import re
from typing import Union

import numpy as np

from awtc_lab.code import MAX_N, BinnedCode, Codebook
from awtc_lab.errors import FormatError

MAGIC = "AWTC-CODEBOOK"
VERSION = "v1"
_PARAMS = re.compile(r"n=(\d+) words=(\d+) ell=(\d+) seed=(\d+)")
_HEX = re.compile(r"[0-9a-f]+")

PathLike = Union[str, "os.PathLike[str]"]


def dumps_codebook(bc: BinnedCode) -> str:
    digits = -(-bc.n // 4)
    lines = [f"{MAGIC} {VERSION}", f"n={bc.n} words={len(bc.words)} ell={bc.ell} seed={bc.base.seed}"]
    lines += [format(int(w), f"0{digits}x") for w in bc.words]
    return "\n".join(lines) + "\n"


def loads_codebook(text: str) -> BinnedCode:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty file", line=1)
    head = lines[0].split(" ")
    if len(head) != 2 or head[0] != MAGIC:
        raise FormatError(f"expected header '{MAGIC} {VERSION}'", line=1)
    if head[1] != VERSION:
        raise FormatError(f"unsupported version {head[1]!r} (this reader handles {VERSION})", line=1)
    if len(lines) < 2:
        raise FormatError("missing parameter line", line=2)
    m = _PARAMS.fullmatch(lines[1])
    if not m:
        raise FormatError("expected 'n=<int> words=<int> ell=<int> seed=<u64>'", line=2)
    n, count, ell, seed = (int(g) for g in m.groups())
    if not 1 <= n <= MAX_N:
        raise FormatError(f"n={n} outside [1, {MAX_N}]", line=2)
    if seed >= 1 << 64:
        raise FormatError(f"seed {seed} is not a 64-bit value", line=2)
    body = lines[2:]
    if len(body) < count:
        missing = count - len(body)
        raise FormatError(
            f"truncated: expected {count} word lines, found {len(body)} ({missing} missing)", line=len(lines) + 1
        )
    if len(body) > count:
        raise FormatError(f"expected {count} word lines, found {len(body)}", line=2 + count + 1)
    digits = -(-n // 4)
    words = np.empty(count, dtype=np.uint64)
    for i, s in enumerate(body):
        lineno = i + 3
        if len(s) != digits or not _HEX.fullmatch(s):
            raise FormatError(f"expected {digits} lowercase hex digits, got {s!r}", line=lineno)
        v = int(s, 16)
        if v >> n:
            raise FormatError(f"word {s} wider than n={n}", line=lineno)
        words[i] = v
    if count == 0:
        raise FormatError("a codebook needs at least one word", line=2)
    try:
        cb = Codebook(n=n, words=words, rate=float(np.log2(count)) / n, seed=seed)
        return BinnedCode(cb, ell)
    except ValueError as exc:
        raise FormatError(str(exc), line=2) from exc


def save_codebook(bc: BinnedCode, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_codebook(bc))


def load_codebook(path: PathLike) -> BinnedCode:
    with open(path, encoding="utf-8", newline="") as fh:
        return loads_codebook(fh.read())
