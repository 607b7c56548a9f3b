"""Per-character latency harness and power-log energy accounting.

Timing runs are single-threaded: each window is pushed through the full
predict path under a monotonic clock, warmup iterations are discarded, and
percentiles use the nearest-rank rule for cross-platform determinism.
Energy accounting parses tegrastats-style text lines for the VDD_IN rail.
"""
from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import NoReadingsError, NoWindowsError
from .model import PredictionResult
from .signals import CharacterWindow


@dataclass(frozen=True)
class StatSummary:
    mean: float
    p50: float
    p95: float
    min: float
    max: float

    def to_dict(self) -> dict:
        return {"mean": self.mean, "p50": self.p50, "p95": self.p95, "min": self.min, "max": self.max}


def nearest_rank(values: Sequence[float], pct: float) -> float:
    """Nearest-rank percentile: the ceil(pct/100 * n)-th smallest value."""
    data = sorted(values)
    if not data:
        raise ValueError("no values")
    rank = int(np.ceil(pct / 100.0 * len(data)))
    return data[max(rank, 1) - 1]


def _summarize(values: Sequence[float]) -> StatSummary:
    arr = list(values)
    return StatSummary(
        mean=float(np.mean(arr)),
        p50=nearest_rank(arr, 50.0),
        p95=nearest_rank(arr, 95.0),
        min=float(np.min(arr)),
        max=float(np.max(arr)),
    )


@dataclass(frozen=True)
class LatencyReport:
    n_windows: int
    total: StatSummary
    preprocess: StatSummary
    features: StatSummary
    model: StatSummary
    raw_total_ms: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "n_windows": self.n_windows,
            "total_ms": self.total.to_dict(),
            "preprocess_ms": self.preprocess.to_dict(),
            "features_ms": self.features.to_dict(),
            "model_ms": self.model.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def time_inference(
    windows: Sequence[CharacterWindow],
    predict: Callable[[CharacterWindow], PredictionResult],
    warmup: int = 3,
) -> LatencyReport:
    """Measure per-window wall time of `predict`, single-threaded.

    The first `warmup` windows prime caches and are excluded from the
    report; the remaining windows are each measured once.
    """
    if warmup < 0:
        raise ValueError("warmup must be >= 0")
    measured = windows[warmup:]
    if not measured:
        raise NoWindowsError(
            f"warmup of {warmup} leaves nothing to measure out of {len(windows)} windows"
        )
    for win in windows[:warmup]:
        predict(win)
    totals, pres, feats, models = [], [], [], []
    for win in measured:
        t0 = time.perf_counter()
        result = predict(win)
        elapsed = (time.perf_counter() - t0) * 1e3
        totals.append(elapsed)
        pres.append(result.timing.preprocess_ms)
        feats.append(result.timing.features_ms)
        models.append(result.timing.model_ms)
    return LatencyReport(
        n_windows=len(measured),
        total=_summarize(totals),
        preprocess=_summarize(pres),
        features=_summarize(feats),
        model=_summarize(models),
        raw_total_ms=tuple(totals),
    )


# --- power-log parsing ---------------------------------------------------------

_VDD_IN = re.compile(r"VDD_IN\s+(\d+(?:\.\d+)?)(?:mW)?/(\d+(?:\.\d+)?)(?:mW)?")


@dataclass(frozen=True)
class PowerLog:
    """(timestamp_ms, instant_mw, average_mw) rows at a nominal interval."""

    entries: tuple[tuple[float, float, float], ...]
    interval_ms: float = 100.0
    skipped_lines: int = 0

    @property
    def mean_instant_mw(self) -> float:
        return float(np.mean([e[1] for e in self.entries]))

    @property
    def mean_average_mw(self) -> float:
        return float(np.mean([e[2] for e in self.entries]))


def parse_power_log(lines: Iterable[str], interval_ms: float = 100.0) -> PowerLog:
    """Extract VDD_IN `instant/average` readings from tegrastats-style lines.

    Lines without the token are counted and skipped; timestamps are the
    line index times the sampling interval.
    """
    entries = []
    skipped = 0
    for i, line in enumerate(lines):
        match = _VDD_IN.search(line)
        if match:
            entries.append((i * interval_ms, float(match.group(1)), float(match.group(2))))
        else:
            skipped += 1
    if not entries:
        raise NoReadingsError("no VDD_IN readings found")
    return PowerLog(tuple(entries), interval_ms, skipped)


def energy_per_character(log: PowerLog, elapsed_s: float, n_windows: int) -> float:
    """Millijoules per character: mean instant power (mW) * elapsed / windows."""
    if not elapsed_s > 0:
        raise ValueError("elapsed time must be positive")
    if n_windows < 1:
        raise ValueError("need at least one window")
    return log.mean_instant_mw * elapsed_s / n_windows
