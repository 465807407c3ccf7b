"""Persistent JSON-lines cache of Mersenne factorizations.

One JSON object per line, big integers as decimal strings::

    {"n": 11, "factors": [["23", 1], ["89", 1]], "cofactor": "1",
     "status": "Complete", "trial_bound": 1000000, "rho_cap": 20000000,
     "timestamp": 1760000000}

Writes append a line and fsync; the file is compacted to one line per ``n``
when reopened with enough superseded lines. Lines that fail to parse or whose
product is not 2^n - 1 are moved to ``<path>.quarantine``.
"""

from __future__ import annotations

import fcntl
import json
import logging
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass
from math import prod
from pathlib import Path

from .arith import Status

log = logging.getLogger(__name__)

ENV_VAR = "MERSENNE_LAB_CACHE"
FIELDS = ("n", "factors", "cofactor", "status", "trial_bound", "rho_cap", "timestamp")


def default_cache_path() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "mersenne_lab" / "factors.jsonl"


class CacheRecordError(ValueError):
    pass


@dataclass(frozen=True)
class FactorCacheRecord:
    n: int
    factors: tuple[tuple[str, int], ...]
    cofactor: str
    status: str
    trial_bound: int
    rho_cap: int
    timestamp: int

    @classmethod
    def from_factorization(cls, mf, timestamp: int | None = None) -> FactorCacheRecord:
        return cls(
            n=mf.n,
            factors=tuple((str(p), e) for p, e in mf.merged.factors),
            cofactor=str(mf.merged.cofactor),
            status=mf.status.value,
            trial_bound=mf.trial_bound,
            rho_cap=mf.rho_cap,
            timestamp=int(time.time()) if timestamp is None else timestamp,
        )

    @classmethod
    def from_json(cls, obj: dict) -> FactorCacheRecord:
        if set(obj) != set(FIELDS):
            raise CacheRecordError(f"unexpected fields {sorted(obj)}")
        rec = cls(
            n=int(obj["n"]),
            factors=tuple((str(p), int(e)) for p, e in obj["factors"]),
            cofactor=str(obj["cofactor"]),
            status=Status(obj["status"]).value,
            trial_bound=int(obj["trial_bound"]),
            rho_cap=int(obj["rho_cap"]),
            timestamp=int(obj["timestamp"]),
        )
        rec.validate()
        return rec

    def to_json(self) -> str:
        obj = {
            "n": self.n,
            "factors": [[p, e] for p, e in self.factors],
            "cofactor": self.cofactor,
            "status": self.status,
            "trial_bound": self.trial_bound,
            "rho_cap": self.rho_cap,
            "timestamp": self.timestamp,
        }
        return json.dumps(obj, separators=(", ", ": "))

    @property
    def prime_counts(self) -> dict[int, int]:
        return {int(p): e for p, e in self.factors}

    def validate(self) -> None:
        if self.n < 1:
            raise CacheRecordError("n must be positive")
        cof = int(self.cofactor)
        if (self.status == Status.COMPLETE.value) != (cof == 1):
            raise CacheRecordError("status disagrees with cofactor")
        if cof * prod(int(p) ** e for p, e in self.factors) != 2**self.n - 1:
            raise CacheRecordError(f"record for n={self.n} does not multiply out to 2^n - 1")

    def better_than(self, other: FactorCacheRecord) -> bool:
        if self.status != other.status:
            return self.status == Status.COMPLETE.value
        if self.status == Status.COMPLETE.value:
            return True  # last write wins
        return (self.trial_bound, self.rho_cap) >= (other.trial_bound, other.rho_cap)


class FactorCache:
    """Read-through / write-back store keyed by n.

    Single writer per file, enforced with an advisory lock on ``<path>.lock``
    held only while appending or compacting.
    """

    def __init__(self, path: str | os.PathLike | None = None, compact_ratio: float = 2.0):
        self.path = Path(path) if path is not None else default_cache_path()
        self.quarantine_path = self.path.with_name(self.path.name + ".quarantine")
        self.lock_path = self.path.with_name(self.path.name + ".lock")
        self._records: dict[int, FactorCacheRecord] = {}
        self._lines = 0
        self._load()
        if self._lines > compact_ratio * max(len(self._records), 1):
            self.compact()

    def _load(self) -> None:
        if not self.path.exists():
            return
        bad = []
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                self._lines += 1
                try:
                    rec = FactorCacheRecord.from_json(json.loads(line))
                except (ValueError, TypeError, KeyError) as exc:
                    log.warning("%s:%d: skipping bad cache line (%s)", self.path, lineno, exc)
                    bad.append(line if line.endswith("\n") else line + "\n")
                    continue
                self._keep(rec)
        if bad:
            with self._locked():
                with open(self.quarantine_path, "a", encoding="utf-8") as q:
                    q.writelines(bad)

    def _keep(self, rec: FactorCacheRecord) -> bool:
        old = self._records.get(rec.n)
        if old is None or rec.better_than(old):
            self._records[rec.n] = rec
            return True
        return False

    @contextmanager
    def _locked(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.lock_path, "w") as lock:
            fcntl.flock(lock, fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(lock, fcntl.LOCK_UN)

    def get(self, n: int) -> FactorCacheRecord | None:
        return self._records.get(n)

    def upsert(self, rec: FactorCacheRecord) -> bool:
        """Store ``rec`` if it beats the current entry; True when it was written."""
        rec.validate()
        if not self._keep(rec):
            return False
        with self._locked():
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(rec.to_json() + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        self._lines += 1
        return True

    def compact(self) -> None:
        with self._locked():
            tmp = self.path.with_name(self.path.name + ".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                for n in sorted(self._records):
                    fh.write(self._records[n].to_json() + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.path)
        self._lines = len(self._records)

    def records(self) -> list[FactorCacheRecord]:
        return [self._records[n] for n in sorted(self._records)]

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, n: int) -> bool:
        return n in self._records


def open_cache(path: str | os.PathLike | None = None) -> FactorCache:
    return FactorCache(path)
