"""Pearson-correlation redundancy analysis and compact-subset selection.

Per window, each feature pair is correlated across the channel axis; the
per-window matrices are aggregated by element-wise mean (Fisher-z mean
available as an option). Selection keeps features that participate in
strong negative correlations, prunes redundant (strongly positive) pairs,
and optionally truncates to the k strongest survivors.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    EmptyInputError,
    NoCandidatesError,
    TooFewChannelsError,
    UnknownFeatureError,
)
from .features.extract import FeatureMatrix

NEG_THRESHOLD = -0.4
POS_THRESHOLD = 0.7


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric feature-by-feature Pearson matrix with a degeneracy mask."""

    values: np.ndarray
    feature_names: tuple[str, ...]
    degenerate: np.ndarray  # True where either feature had zero variance
    n_windows_aggregated: int = 1

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        degenerate = np.asarray(self.degenerate, dtype=bool)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "degenerate", degenerate)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        if values.shape != degenerate.shape or values.shape[0] != values.shape[1]:
            raise ValueError("correlation and degeneracy matrices must be square and congruent")
        values.setflags(write=False)
        degenerate.setflags(write=False)

    @property
    def n_features(self) -> int:
        return self.values.shape[0]


def window_correlation(features: FeatureMatrix) -> CorrelationMatrix:
    """Pearson correlation of every feature pair across the channel axis.

    Pairs involving a zero-variance feature get r = 0 and a degeneracy flag.
    """
    if features.n_channels < 3:
        raise TooFewChannelsError("need at least 3 channels to correlate features")
    x = features.values  # [channel, feature]
    centered = x - x.mean(axis=0, keepdims=True)
    norms = np.sqrt((centered**2).sum(axis=0))
    degenerate_col = norms == 0.0
    safe = np.where(degenerate_col, 1.0, norms)
    unit = centered / safe
    corr = unit.T @ unit
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    deg = degenerate_col[:, None] | degenerate_col[None, :]
    corr[deg] = 0.0
    np.fill_diagonal(corr, np.where(degenerate_col, 0.0, 1.0))
    return CorrelationMatrix(corr, features.feature_names, deg)


def aggregate_correlations(
    mats: Sequence[CorrelationMatrix], fisher_z: bool = False
) -> CorrelationMatrix:
    """Element-wise mean across windows, skipping degenerate entries.

    `fisher_z=True` averages atanh(r) and maps back through tanh.
    """
    if not mats:
        raise EmptyInputError("no correlation matrices to aggregate")
    names = mats[0].feature_names
    for m in mats:
        if m.feature_names != names:
            raise ValueError("correlation matrices cover different feature sets")
    stack = np.stack([m.values for m in mats])
    valid = ~np.stack([m.degenerate for m in mats])
    counts = valid.sum(axis=0)
    if fisher_z:
        # clip away exact +/-1 to keep atanh finite
        z = np.arctanh(np.clip(stack, -1 + 1e-15, 1 - 1e-15))
        total = np.where(valid, z, 0.0).sum(axis=0)
        mean = np.tanh(np.divide(total, counts, out=np.zeros_like(total), where=counts > 0))
    else:
        total = np.where(valid, stack, 0.0).sum(axis=0)
        mean = np.divide(total, counts, out=np.zeros_like(total), where=counts > 0)
    deg = counts == 0
    mean[deg] = 0.0
    n_total = sum(m.n_windows_aggregated for m in mats)
    return CorrelationMatrix(mean, names, deg, n_windows_aggregated=n_total)


@dataclass(frozen=True)
class SelectionReport:
    kept: tuple[str, ...]
    dropped: tuple[tuple[str, str, float], ...]  # (feature, redundant-with, r)
    neg_threshold: float = NEG_THRESHOLD
    pos_threshold: float = POS_THRESHOLD

    def to_json(self) -> str:
        return json.dumps(
            {
                "kept": list(self.kept),
                "dropped": [
                    {"feature": f, "redundant_with": g, "r": r} for f, g, r in self.dropped
                ],
                "neg_threshold": self.neg_threshold,
                "pos_threshold": self.pos_threshold,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "SelectionReport":
        obj = json.loads(text)
        return cls(
            tuple(obj["kept"]),
            tuple((d["feature"], d["redundant_with"], d["r"]) for d in obj["dropped"]),
            obj.get("neg_threshold", NEG_THRESHOLD),
            obj.get("pos_threshold", POS_THRESHOLD),
        )


def select_features(
    corr: CorrelationMatrix,
    neg_threshold: float = NEG_THRESHOLD,
    pos_threshold: float = POS_THRESHOLD,
    target_k: Optional[int] = None,
) -> SelectionReport:
    """Negative-pair candidacy, redundancy pruning, optional truncation to k.

    1. Candidates: features in any pair with r < neg_threshold.
    2. While a kept pair has r > pos_threshold (strongest pair first), drop
       the member with the larger mean |r| to the remaining kept set;
       ties drop the larger catalog index.
    3. With target_k, rank survivors by descending mean |r| over their
       negative partners and keep the first k (ties by catalog index).
    """
    if not (-1.0 < neg_threshold < 0.0 and 0.0 < pos_threshold < 1.0):
        raise ValueError("thresholds must satisfy -1 < neg < 0 < pos < 1")
    r = corr.values
    n = corr.n_features
    neg_pairs = r < neg_threshold
    candidates = sorted(np.nonzero(neg_pairs.any(axis=1))[0])
    if not candidates:
        raise NoCandidatesError(
            f"no feature pair correlates below {neg_threshold}"
        )

    kept = list(candidates)
    dropped: list[tuple[str, str, float]] = []
    while True:
        sub = r[np.ix_(kept, kept)].copy()
        np.fill_diagonal(sub, 0.0)
        if sub.max(initial=0.0) <= pos_threshold:
            break
        a, b = np.unravel_index(int(np.argmax(sub)), sub.shape)
        pair_r = sub[a, b]
        # mean |r| of each member against the other kept features
        scores = []
        for member in (a, b):
            others = np.abs(sub[member])
            scores.append(others.sum() / (len(kept) - 1))
        if scores[0] > scores[1]:
            victim, keeper = a, b
        elif scores[1] > scores[0]:
            victim, keeper = b, a
        else:
            victim, keeper = (a, b) if kept[a] > kept[b] else (b, a)
        dropped.append(
            (
                corr.feature_names[kept[victim]],
                corr.feature_names[kept[keeper]],
                float(pair_r),
            )
        )
        kept.pop(victim)

    # rank survivors by the strength of their negative partnerships
    def negative_strength(idx: int) -> float:
        partners = np.nonzero(r[idx] < neg_threshold)[0]
        return float(np.abs(r[idx, partners]).mean()) if partners.size else 0.0

    kept.sort(key=lambda idx: (-negative_strength(idx), idx))
    if target_k is not None:
        kept = kept[:target_k]
    return SelectionReport(
        tuple(corr.feature_names[i] for i in kept),
        tuple(dropped),
        neg_threshold,
        pos_threshold,
    )


def project_features(features: FeatureMatrix, kept: Sequence[str]) -> FeatureMatrix:
    """Restrict the matrix columns to `kept`, in kept order."""
    name_to_col = {name: i for i, name in enumerate(features.feature_names)}
    cols = []
    for name in kept:
        if name not in name_to_col:
            raise UnknownFeatureError(name)
        cols.append(name_to_col[name])
    return FeatureMatrix(
        features.values[:, cols],
        tuple(kept),
        channel_names=features.channel_names,
        label=features.label,
        subject_id=features.subject_id,
        window_index=features.window_index,
    )
