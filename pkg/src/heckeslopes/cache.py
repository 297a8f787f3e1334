"""Persistent characteristic-polynomial cache.

One JSON object per line, so the file can be streamed and appended to;
coefficients travel as decimal strings because they overflow 64 bits
around weight 20.  Every record carries a sha256 digest of its payload:
a record that fails to re-parse, re-verify, or match the schema version
is dropped with a warning and the polynomial is simply recomputed.
Writes go through a temporary file and os.replace, so readers never see
a half-written cache.
"""

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass

from .exact import IntPolynomial

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
_FIELDS = ("schema", "p", "level", "weight", "operator", "coeffs", "engine")


def operator_label(p, level):
    """Hecke operator name at this level: U when p divides it, T otherwise."""
    return "U" if level % p == 0 else "T"


@dataclass(frozen=True)
class CacheRecord:
    p: int
    level: int
    weight: int
    operator: str  # "T" or "U"
    coeffs: tuple  # integer coefficients of det(1 - TX), constant first, untrimmed
    engine: str  # "modsym" or "trace"

    @property
    def key(self):
        return (self.p, self.level, self.weight, self.operator, self.engine)

    def payload(self):
        return {
            "schema": SCHEMA_VERSION,
            "p": self.p,
            "level": self.level,
            "weight": self.weight,
            "operator": self.operator,
            "coeffs": [str(c) for c in self.coeffs],
            "engine": self.engine,
        }

    def digest(self):
        blob = json.dumps(self.payload(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("ascii")).hexdigest()

    def to_line(self):
        body = self.payload()
        body["digest"] = self.digest()
        return json.dumps(body, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_line(cls, line):
        """Parse and verify one cache line; ValueError describes any defect."""
        try:
            body = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError("unparsable record (%s)" % exc) from None
        if not isinstance(body, dict):
            raise ValueError("record is not an object")
        if body.get("schema") != SCHEMA_VERSION:
            raise ValueError("schema version %r, expected %d"
                             % (body.get("schema"), SCHEMA_VERSION))
        missing = [f for f in _FIELDS + ("digest",) if f not in body]
        if missing:
            raise ValueError("missing fields: %s" % ", ".join(missing))
        try:
            coeffs = tuple(int(c) for c in body["coeffs"])
            rec = cls(int(body["p"]), int(body["level"]), int(body["weight"]),
                      str(body["operator"]), coeffs, str(body["engine"]))
        except (TypeError, ValueError):
            raise ValueError("malformed field value") from None
        if rec.digest() != body["digest"]:
            raise ValueError("digest mismatch")
        return rec


class CharpolyCache:
    """Map from (p, level, weight, operator, engine) to cached polynomials.

    path=None keeps the cache purely in memory.  load() never raises on a
    damaged file: bad lines are collected in self.rejects and logged, and
    the affected entries get recomputed on demand.
    """

    def __init__(self, path=None):
        self.path = path
        self.records = {}
        self.rejects = []  # (line number, reason) from the last load
        self.hits = 0
        self.misses = 0
        if path is not None:
            self.load()

    def load(self):
        self.rejects = []
        if self.path is None or not os.path.exists(self.path):
            return 0
        kept = 0
        with open(self.path, "r", encoding="ascii") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = CacheRecord.from_line(line)
                except ValueError as exc:
                    self.rejects.append((lineno, str(exc)))
                    log.warning("cache %s line %d dropped: %s", self.path, lineno, exc)
                    continue
                self.records[rec.key] = rec
                kept += 1
        return kept

    def get(self, p, level, weight, engine):
        rec = self.records.get((p, level, weight, operator_label(p, level), engine))
        if rec is None:
            return None
        return IntPolynomial(rec.coeffs)

    def put(self, p, level, weight, engine, poly):
        rec = CacheRecord(p, level, weight, operator_label(p, level),
                          tuple(poly.coeffs), engine)
        self.records[rec.key] = rec
        return rec

    def fetch_or_compute(self, p, level, weight, engine, compute):
        got = self.get(p, level, weight, engine)
        if got is not None:
            self.hits += 1
            return got
        self.misses += 1
        poly = compute()
        self.put(p, level, weight, engine, poly)
        return poly

    def merge(self, records):
        for rec in records:
            self.records[rec.key] = rec

    def flush(self):
        """Rewrite the backing file atomically (no-op for in-memory caches)."""
        if self.path is None:
            return
        directory = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=".cache-", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="ascii") as fh:
                for key in sorted(self.records):
                    fh.write(self.records[key].to_line())
                    fh.write("\n")
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.path)
        except BaseException:
            os.unlink(tmp)
            raise


# Active cache used by the slope layer.  None means "just compute".
_ACTIVE = None


class activate:
    """Context manager installing a cache for all charpoly requests."""

    def __init__(self, cache):
        self.cache = cache
        self.prev = None

    def __enter__(self):
        global _ACTIVE
        self.prev = _ACTIVE
        _ACTIVE = self.cache
        return self.cache

    def __exit__(self, exc_type, exc, tb):
        global _ACTIVE
        _ACTIVE = self.prev
        if self.cache is not None:
            self.cache.flush()
        return False


def fetch_or_compute(p, level, weight, engine, compute):
    if _ACTIVE is None:
        return compute()
    return _ACTIVE.fetch_or_compute(p, level, weight, engine, compute)


def cache_roundtrip(record, path):
    """Write record into the cache at path and read it back from disk.

    Returns the reloaded record, or None when the stored line fails
    verification (the caller is expected to recompute in that case).
    """
    cache = CharpolyCache(path)
    cache.records[record.key] = record
    cache.flush()
    fresh = CharpolyCache(path)
    return fresh.records.get(record.key)
