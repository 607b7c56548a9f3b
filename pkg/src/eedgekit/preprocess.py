"""Per-window denoising: Butterworth bandpass followed by simplified ASR.

The bandpass is designed as cascaded second-order sections; application is
zero-phase (forward-backward) by default, with a forward-only mode for
causal use. The simplified artifact-subspace-reconstruction step clips
per-channel z-score outliers and bridges the gaps by linear interpolation
with backward/forward fill at the edges.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .errors import AllSamplesRejectedError, InvalidBandError
from .signals import CharacterWindow


@dataclass(frozen=True)
class BandpassSpec:
    low_hz: float = 1.0
    high_hz: float = 50.0
    order: int = 4
    fs: float = 256.0

    def __post_init__(self):
        if not (0 < self.low_hz < self.high_hz < self.fs / 2):
            raise InvalidBandError(
                f"band edges ({self.low_hz}, {self.high_hz}) must satisfy "
                f"0 < low < high < fs/2 = {self.fs / 2}"
            )
        if self.order < 2 or self.order % 2 != 0:
            raise InvalidBandError("filter order must be even and >= 2")


@dataclass(frozen=True)
class AsrSpec:
    z_threshold: float = 3.0

    def __post_init__(self):
        if not self.z_threshold > 0:
            raise ValueError("z_threshold must be positive")


@dataclass(frozen=True)
class FilterCoefficients:
    """Cascaded biquads: sos[i] = (b0, b1, b2, a0, a1, a2), a0 = 1."""

    sos: np.ndarray
    spec: BandpassSpec

    def __post_init__(self):
        sos = np.asarray(self.sos, dtype=np.float64)
        object.__setattr__(self, "sos", sos)
        sos.setflags(write=False)

    @property
    def n_sections(self) -> int:
        return self.sos.shape[0]

    def response_at(self, freq_hz: float | np.ndarray) -> np.ndarray:
        """Complex response H(e^{j2*pi*f/fs}) by direct polynomial evaluation."""
        w = 2 * np.pi * np.atleast_1d(np.asarray(freq_hz, dtype=float)) / self.spec.fs
        zinv = np.exp(-1j * w)
        h = np.ones_like(zinv)
        for b0, b1, b2, a0, a1, a2 in self.sos:
            h *= (b0 + b1 * zinv + b2 * zinv**2) / (a0 + a1 * zinv + a2 * zinv**2)
        return h

    def to_json(self) -> str:
        return json.dumps(
            {
                "fs": self.spec.fs,
                "low_hz": self.spec.low_hz,
                "high_hz": self.spec.high_hz,
                "order": self.spec.order,
                "sections": self.sos.tolist(),
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "FilterCoefficients":
        obj = json.loads(text)
        spec = BandpassSpec(obj["low_hz"], obj["high_hz"], obj["order"], obj["fs"])
        return cls(np.array(obj["sections"], dtype=np.float64), spec)


def design_butterworth_bandpass(spec: BandpassSpec) -> FilterCoefficients:
    """Design the bandpass as order/2 second-order sections per band edge."""
    sos = sps.butter(
        spec.order,
        [spec.low_hz, spec.high_hz],
        btype="bandpass",
        fs=spec.fs,
        output="sos",
    )
    return FilterCoefficients(sos, spec)


def apply_filter(
    win: CharacterWindow, coeffs: FilterCoefficients, mode: str = "zero-phase"
) -> CharacterWindow:
    """Filter each channel independently; output has the same shape.

    `zero-phase` runs forward-backward with odd edge padding of
    3 * (2 * n_sections) samples; `forward` is single-pass causal.
    """
    if mode == "forward":
        data = sps.sosfilt(coeffs.sos, win.data, axis=1)
    elif mode == "zero-phase":
        padlen = 3 * (2 * coeffs.n_sections)
        data = sps.sosfiltfilt(coeffs.sos, win.data, axis=1, padlen=padlen)
    else:
        raise ValueError(f"unknown filter mode {mode!r}")
    return CharacterWindow(
        data, win.window_index, label=win.label, subject_id=win.subject_id
    )


def simplified_asr(win: CharacterWindow, spec: AsrSpec = AsrSpec()) -> CharacterWindow:
    """Clip per-channel z-score outliers and reconstruct the gaps.

    Per channel: samples with |x - mean| / std > z_threshold become missing,
    interior gaps are bridged by linear interpolation between the nearest
    surviving neighbors, and leading/trailing gaps take the first/last
    surviving value. Channels with zero variance pass through unchanged.
    """
    if win.n_samples == 0:
        raise ValueError("window is empty")
    out = np.array(win.data, dtype=np.float64, copy=True)
    for c in range(win.n_channels):
        x = out[c]
        mu = x.mean()
        sigma = x.std()  # population
        if sigma == 0.0:
            continue
        keep = np.abs(x - mu) / sigma <= spec.z_threshold
        if keep.all():
            continue
        if not keep.any():
            raise AllSamplesRejectedError(c)
        idx = np.arange(x.size)
        # np.interp gives linear interpolation interior and edge-value fill
        # outside the surviving range, which is exactly backward/forward fill.
        out[c] = np.interp(idx, idx[keep], x[keep])
    return CharacterWindow(
        out, win.window_index, label=win.label, subject_id=win.subject_id
    )


def preprocess_window(
    win: CharacterWindow,
    bandpass: BandpassSpec | FilterCoefficients = BandpassSpec(),
    asr: AsrSpec = AsrSpec(),
    mode: str = "zero-phase",
) -> CharacterWindow:
    """Bandpass then simplified ASR, in that order."""
    coeffs = (
        bandpass
        if isinstance(bandpass, FilterCoefficients)
        else design_butterworth_bandpass(bandpass)
    )
    return simplified_asr(apply_filter(win, coeffs, mode=mode), asr)
