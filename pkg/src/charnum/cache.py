"""On-disk memo cache for descendant invariants.

One file per geometry; a header pins the artifact version and the geometry
fingerprint, so a changed ring silently invalidates old values.  Writes take
an exclusive lock and replace the file atomically; reads take a shared lock.
Reload-then-recompute yields identical tables because values are exact.
"""

from __future__ import annotations

import fcntl
import os
from pathlib import Path

from . import __version__
from .descend import DescendantSpec
from .series import Rat, format_rat, parse_rat

__all__ = ["CacheFile", "default_cache_dir", "spec_key"]

ENV_CACHE_DIR = "CHARNUM_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "charnum"


def spec_key(spec: DescendantSpec) -> str:
    ins = ",".join(f"{m}.{c}" for m, c in spec.insertions)
    beta = ",".join(map(str, spec.beta))
    return f"g{spec.genus}|{beta}|{ins}"


def _parse_key(text: str) -> tuple:
    _, beta, ins = text.split("|")
    beta_t = tuple(int(x) for x in beta.split(",") if x)
    ins_t = tuple(tuple(int(y) for y in pair.split(".")) for pair in ins.split(",") if pair)
    return (beta_t, ins_t)


class CacheFile:
    def __init__(self, path: Path, fingerprint: str):
        self.path = Path(path)
        self.fingerprint = fingerprint
        self.records: dict[tuple, Rat] = {}

    def load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path) as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            lines = fh.read().splitlines()
            fcntl.flock(fh, fcntl.LOCK_UN)
        if len(lines) < 2:
            return
        if lines[0] != f"charnum-cache {__version__}" or lines[1] != f"geometry {self.fingerprint}":
            return  # stale header: ignore, will be rewritten
        for ln in lines[2:]:
            if not ln.strip():
                continue
            key, val = ln.rsplit(" ", 1)
            self.records[_parse_key(key)] = parse_rat(val)

    def save(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        body = [f"charnum-cache {__version__}", f"geometry {self.fingerprint}"]
        for (beta, ins), val in sorted(self.records.items()):
            key = "g0|" + ",".join(map(str, beta)) + "|" + ",".join(f"{m}.{c}" for m, c in ins)
            body.append(f"{key} {format_rat(val)}")
        tmp = self.path.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            fh.write("\n".join(body) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
            fcntl.flock(fh, fcntl.LOCK_UN)
        os.replace(tmp, self.path)

    # the engine memo maps (beta, insertions) -> value already
    def absorb(self, memo: dict) -> None:
        self.records.update(memo)

    def seed_memo(self) -> dict:
        return dict(self.records)
