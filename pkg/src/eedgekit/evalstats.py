"""Evaluation machinery: classification metrics with confidence intervals,
reliability diagrams, Beta-Binomial predictive intervals, Gaussian-noise
robustness injection, and leave-one-subject-out splitting.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import betaln, gammaln
from scipy.stats import t as student_t

from .errors import (
    InvalidCountsError,
    LengthMismatchError,
    MissingSubjectIdError,
    TooFewRunsError,
)
from .signals import N_CLASSES, CharacterWindow


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    degenerate: bool = False  # zero support or zero predicted-positive


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision_weighted: float
    recall_weighted: float
    f1_weighted: float
    precision_macro: float
    recall_macro: float
    f1_macro: float
    per_class: tuple[ClassMetrics, ...]
    confusion: np.ndarray  # [true, predicted] counts

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision_weighted": self.precision_weighted,
            "recall_weighted": self.recall_weighted,
            "f1_weighted": self.f1_weighted,
            "precision_macro": self.precision_macro,
            "recall_macro": self.recall_macro,
            "f1_macro": self.f1_macro,
            "per_class": [
                {
                    "precision": c.precision,
                    "recall": c.recall,
                    "f1": c.f1,
                    "support": c.support,
                    "degenerate": c.degenerate,
                }
                for c in self.per_class
            ],
            "confusion": self.confusion.tolist(),
        }


def classification_metrics(
    y_true: Sequence[int], y_pred: Sequence[int], n_classes: int = N_CLASSES
) -> MetricsReport:
    """Confusion-matrix metrics with support-weighted and macro averages.

    Zero-support (or zero-predicted) classes contribute 0 and are flagged.
    Weighted recall equals accuracy exactly (support-weighted identity).
    """
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.size != y_pred.size:
        raise LengthMismatchError(f"{y_true.size} true vs {y_pred.size} predicted labels")
    if y_true.size == 0:
        raise LengthMismatchError("empty label lists")
    if (y_true < 0).any() or (y_true >= n_classes).any() or (y_pred < 0).any() or (y_pred >= n_classes).any():
        raise ValueError(f"labels must lie in 0..{n_classes - 1}")

    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(confusion, (y_true, y_pred), 1)

    tp = np.diag(confusion).astype(np.float64)
    support = confusion.sum(axis=1).astype(np.float64)
    predicted = confusion.sum(axis=0).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(predicted > 0, tp / predicted, 0.0)
        recall = np.where(support > 0, tp / support, 0.0)
        denom = precision + recall
        f1 = np.where(denom > 0, 2 * precision * recall / denom, 0.0)

    total = float(y_true.size)
    weights = support / total
    accuracy = float(tp.sum() / total)
    per_class = tuple(
        ClassMetrics(
            float(precision[c]),
            float(recall[c]),
            float(f1[c]),
            int(support[c]),
            degenerate=bool(support[c] == 0 or predicted[c] == 0),
        )
        for c in range(n_classes)
    )
    return MetricsReport(
        accuracy=accuracy,
        precision_weighted=float(np.sum(weights * precision)),
        recall_weighted=float(np.sum(weights * recall)),
        f1_weighted=float(np.sum(weights * f1)),
        precision_macro=float(precision.mean()),
        recall_macro=float(recall.mean()),
        f1_macro=float(f1.mean()),
        per_class=per_class,
        confusion=confusion,
    )


def run_ci(accuracies: Sequence[float], level: float = 0.95) -> tuple[float, float, float, float]:
    """Student-t interval over per-run accuracies: (mean, half_width, lo, hi)."""
    acc = np.asarray(accuracies, dtype=np.float64)
    if acc.size < 2:
        raise TooFewRunsError("confidence interval needs at least 2 runs")
    mean = float(acc.mean())
    s = float(acc.std(ddof=1))
    tq = float(student_t.ppf(0.5 + level / 2.0, acc.size - 1))
    half = tq * s / np.sqrt(acc.size)
    return mean, float(half), float(mean - half), float(mean + half)


@dataclass(frozen=True)
class ReliabilityBin:
    lo: float
    hi: float
    mean_confidence: float
    accuracy: float
    count: int


@dataclass(frozen=True)
class ReliabilityDiagram:
    bins: tuple[ReliabilityBin, ...]
    ece: float

    def to_dict(self) -> dict:
        return {
            "ece": self.ece,
            "bins": [
                {
                    "lo": b.lo,
                    "hi": b.hi,
                    "mean_confidence": b.mean_confidence,
                    "accuracy": b.accuracy,
                    "count": b.count,
                }
                for b in self.bins
            ],
        }


def reliability_diagram(
    confidences: Sequence[float], correctness: Sequence[bool], bins: int = 10
) -> ReliabilityDiagram:
    """Equal-width confidence bins over [0, 1] plus expected calibration error.

    Bin i covers [i/bins, (i+1)/bins), with the last bin closed at 1.
    """
    conf = np.asarray(confidences, dtype=np.float64)
    correct = np.asarray(correctness, dtype=bool)
    if conf.size != correct.size:
        raise LengthMismatchError("confidences and correctness differ in length")
    if conf.size and (conf.min() < 0.0 or conf.max() > 1.0):
        raise ValueError("confidences must lie in [0, 1]")
    idx = np.minimum((conf * bins).astype(int), bins - 1)
    out = []
    ece = 0.0
    n = max(conf.size, 1)
    for b in range(bins):
        mask = idx == b
        count = int(mask.sum())
        if count:
            mc = float(conf[mask].mean())
            acc = float(correct[mask].mean())
            ece += (count / n) * abs(acc - mc)
        else:
            mc, acc = 0.0, 0.0
        out.append(ReliabilityBin(b / bins, (b + 1) / bins, mc, acc, count))
    return ReliabilityDiagram(tuple(out), float(ece))


@dataclass(frozen=True)
class PredictiveInterval:
    k: int
    n: int
    m: int
    alpha: float
    lo: float  # fraction of m
    hi: float

    @property
    def mean(self) -> float:
        """Predictive mean fraction: (k + 1) / (n + 2)."""
        return (self.k + 1) / (self.n + 2)


def beta_binomial_pmf(m: int, a: float, b: float) -> np.ndarray:
    """pmf over x = 0..m of the Beta-Binomial(m, a, b), evaluated in log space."""
    x = np.arange(m + 1)
    log_pmf = (
        gammaln(m + 1)
        - gammaln(x + 1)
        - gammaln(m - x + 1)
        + betaln(x + a, m - x + b)
        - betaln(a, b)
    )
    return np.exp(log_pmf)


def beta_binomial_interval(k: int, n: int, m: int, alpha: float = 0.05) -> PredictiveInterval:
    """Central predictive interval for future successes out of m trials.

    A uniform prior updated by k successes in n trials gives posterior
    Beta(k+1, n-k+1); the interval endpoints are the alpha/2 and 1-alpha/2
    quantiles of the resulting Beta-Binomial, returned as fractions of m.
    """
    if not (0 <= k <= n) or m < 1:
        raise InvalidCountsError(f"need 0 <= k <= n and m >= 1, got k={k}, n={n}, m={m}")
    if not 0.0 < alpha < 1.0:
        raise InvalidCountsError("alpha must lie in (0, 1)")
    pmf = beta_binomial_pmf(m, k + 1.0, (n - k) + 1.0)
    cdf = np.cumsum(pmf)
    lo = int(np.searchsorted(cdf, alpha / 2.0))
    hi = int(np.searchsorted(cdf, 1.0 - alpha / 2.0))
    lo = min(lo, m)
    hi = min(hi, m)
    return PredictiveInterval(k, n, m, alpha, lo / m, hi / m)


def inject_gaussian_noise(
    win: CharacterWindow, level: float, seed: int = 0
) -> CharacterWindow:
    """Add per-channel noise with sigma = level * channel std; level 0 is identity."""
    if level < 0:
        raise ValueError("noise level must be non-negative")
    if level == 0.0:
        return win
    rng = np.random.default_rng(seed)
    data = np.array(win.data, copy=True)
    for c in range(win.n_channels):
        sigma = win.data[c].std()
        data[c] += rng.normal(0.0, level * sigma, size=win.n_samples)
    return CharacterWindow(data, win.window_index, label=win.label, subject_id=win.subject_id)


def split_loso(windows: Sequence[CharacterWindow]) -> list[tuple[str, list[int], list[int]]]:
    """One (subject, train_indices, test_indices) fold per distinct subject."""
    subjects = []
    for i, win in enumerate(windows):
        if win.subject_id is None:
            raise MissingSubjectIdError(f"window {i} has no subject_id")
        subjects.append(win.subject_id)
    folds = []
    for subject in sorted(set(subjects)):
        test = [i for i, s in enumerate(subjects) if s == subject]
        train = [i for i, s in enumerate(subjects) if s != subject]
        folds.append((subject, train, test))
    return folds
