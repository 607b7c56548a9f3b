"""Per-window feature extraction into the canonical 85-column matrix."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .. import tensorio
from ..signals import CharacterWindow
from .catalog import catalog_names
from .freqdomain import DEFAULT_BANDS, frequency_features
from .graphical import CTM_RADIUS_SCALE, graphical_features
from .timedomain import time_features


@dataclass(frozen=True)
class FeatureConfig:
    fs: float = 256.0
    wavelet: str = "db4"
    dwt_levels: int = 4
    poincare_lag: int = 1
    ctm_radius_scale: float = CTM_RADIUS_SCALE
    shannon_bins: int = 64
    sampen_m: int = 2
    perm_order: int = 3
    perm_delay: int = 1
    bands: tuple = DEFAULT_BANDS
    spectrum_power: bool = False


@dataclass(frozen=True)
class FeatureMatrix:
    """values[channel, feature], columns keyed by feature_names."""

    values: np.ndarray
    feature_names: tuple[str, ...]
    channel_names: Optional[tuple[str, ...]] = None
    label: Optional[int] = None
    subject_id: Optional[str] = None
    window_index: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        if values.ndim != 2 or values.shape[1] != len(self.feature_names):
            raise ValueError("values must be [n_channels, n_features] matching names")
        values.setflags(write=False)

    @property
    def n_channels(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]


def extract_features(win: CharacterWindow, config: FeatureConfig = FeatureConfig()) -> FeatureMatrix:
    """Compute the full catalog for every channel of one window."""
    rows = []
    for c in range(win.n_channels):
        x = win.data[c]
        t = time_features(
            x,
            shannon_bins=config.shannon_bins,
            sampen_m=config.sampen_m,
            perm_order=config.perm_order,
            perm_delay=config.perm_delay,
        ).as_array()
        f = frequency_features(x, config.fs, bands=config.bands, power=config.spectrum_power)
        g = graphical_features(
            x,
            wavelet=config.wavelet,
            levels=config.dwt_levels,
            lag=config.poincare_lag,
            ctm_radius_scale=config.ctm_radius_scale,
        )
        rows.append(np.concatenate([t, f, g]))
    return FeatureMatrix(
        np.array(rows),
        catalog_names(),
        label=win.label,
        subject_id=win.subject_id,
        window_index=win.window_index,
    )


# --- serialization -----------------------------------------------------------

def save_feature_matrices(path, mats: Sequence[FeatureMatrix]) -> None:
    """Stack per-window matrices into one [window, channel, feature] tensor."""
    if not mats:
        raise ValueError("nothing to save")
    names = mats[0].feature_names
    for m in mats:
        if m.feature_names != names:
            raise ValueError("inconsistent feature columns across windows")
    stack = np.stack([m.values for m in mats])
    meta = {
        "kind": "feature_matrix_stack",
        "feature_names": list(names),
        "labels": [m.label for m in mats],
        "subject_ids": [m.subject_id for m in mats],
        "window_indices": [m.window_index for m in mats],
    }
    tensorio.save_tensor(path, stack, meta)


def load_feature_matrices(path) -> list[FeatureMatrix]:
    stack, meta = tensorio.load_tensor(path)
    if stack.ndim == 2:
        stack = stack[None, :, :]
    names = tuple(meta["feature_names"])
    labels = meta.get("labels") or [None] * stack.shape[0]
    subjects = meta.get("subject_ids") or [None] * stack.shape[0]
    indices = meta.get("window_indices") or list(range(stack.shape[0]))
    return [
        FeatureMatrix(stack[i], names, label=labels[i], subject_id=subjects[i], window_index=indices[i])
        for i in range(stack.shape[0])
    ]


def export_features_csv(path, mats: Sequence[FeatureMatrix]) -> None:
    """Inspection-friendly long-format CSV: window, channel, then one column per feature."""
    if not mats:
        raise ValueError("nothing to export")
    names = mats[0].feature_names
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["window", "channel", "label"] + list(names))
        for m in mats:
            for c in range(m.n_channels):
                writer.writerow(
                    [m.window_index, c, "" if m.label is None else m.label]
                    + [f"{v:.12g}" for v in m.values[c]]
                )
