"""Persistent memo store for computed differentials.

Entries are keyed by (curve kind, c**2, eps, g, n) and hold the coefficient
polynomial of dz1...dzn.  Disk persistence is optional: one JSON file per
entry, written atomically, carrying a metadata header so stale or foreign
files are ignored.  Reads may happen concurrently; writes are serialized by
a lock, and a cached entry is byte-identical to a fresh recomputation.
"""

from __future__ import annotations

import json
import os
import threading
from fractions import Fraction
from pathlib import Path

from .curves import CurveSpec
from .laurent import LaurentPolynomial

ENGINE_VERSION = "1"

ENV_CACHE_DIR = "SPECTRAL_CACHE"
DEFAULT_CACHE_DIR = ".cache"


def resolve_cache_dir(explicit: str | None = None) -> Path:
    """CLI resolution order: flag, then $SPECTRAL_CACHE, then ./.cache."""
    if explicit:
        return Path(explicit)
    return Path(os.environ.get(ENV_CACHE_DIR) or DEFAULT_CACHE_DIR)


def _filename(curve: CurveSpec, g: int, n: int) -> str:
    c2 = f"{curve.c2.numerator}_{curve.c2.denominator}"
    eps = "p1" if curve.eps == 1 else "m1"
    return f"{curve.kind}-c2_{c2}-eps_{eps}-g{g}-n{n}.json"


class MemoStore:
    """In-memory map with optional JSON-file persistence."""

    def __init__(self, directory: str | Path | None = None):
        self._memory: dict[tuple, LaurentPolynomial] = {}
        self._lock = threading.RLock()
        self.directory = Path(directory) if directory is not None else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(curve: CurveSpec, g: int, n: int) -> tuple:
        return curve.key() + (g, n)

    def get(self, curve: CurveSpec, g: int, n: int) -> LaurentPolynomial | None:
        k = self.key(curve, g, n)
        with self._lock:
            poly = self._memory.get(k)
        if poly is not None:
            return poly
        if self.directory is None:
            return None
        path = self.directory / _filename(curve, g, n)
        if not path.is_file():
            return None
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            return None
        if data.get("engine_version") != ENGINE_VERSION:
            return None
        if (data.get("curve"), data.get("c2"), data.get("eps"), data.get("g"),
                data.get("n")) != (curve.kind, str(curve.c2), curve.eps, g, n):
            return None
        poly = LaurentPolynomial.from_json_dict(data["poly"])
        with self._lock:
            self._memory[k] = poly
        return poly

    def put(self, curve: CurveSpec, g: int, n: int, poly: LaurentPolynomial) -> None:
        k = self.key(curve, g, n)
        with self._lock:
            self._memory[k] = poly
            if self.directory is None:
                return
            data = {
                "curve": curve.kind,
                "c2": str(curve.c2),
                "eps": curve.eps,
                "g": g,
                "n": n,
                "engine_version": ENGINE_VERSION,
                "poly": poly.to_json_dict(),
            }
            path = self.directory / _filename(curve, g, n)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n")
            tmp.replace(path)

    def cached_keys(self) -> list[tuple]:
        with self._lock:
            return sorted(self._memory.keys())

    def validate_one(self, recompute) -> bool:
        """Recompute the smallest cached entry from scratch and compare bytes.

        ``recompute(curve, g, n)`` must return the coefficient polynomial
        without consulting any cache.  Returns True when nothing is cached.
        """
        with self._lock:
            if not self._memory:
                return True
            k = min(self._memory, key=lambda key: (2 * key[3] - 2 + key[4], key))
            cached = self._memory[k]
        kind, c2, eps, g, n = k
        curve = CurveSpec(kind, Fraction(c2), eps)
        fresh = recompute(curve, g, n)
        return fresh.dumps() == cached.dumps()
