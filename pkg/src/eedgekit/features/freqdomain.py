"""The 8 frequency-domain features, computed from the window's DFT.

The full window is transformed with no taper and no padding; the one-sided
magnitude spectrum is normalized into a probability distribution. Band
powers integrate that distribution with composite Simpson's rule; an odd
panel count falls back to a trapezoid on the final panel.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np

from ..errors import DegenerateSpectrumError, EmptyBandError, TooShortError


@dataclass(frozen=True)
class BandDef:
    name: str
    lo_hz: float
    hi_hz: float
    inclusive_high: bool = False

    def mask(self, freqs: np.ndarray) -> np.ndarray:
        if self.inclusive_high:
            return (freqs >= self.lo_hz) & (freqs <= self.hi_hz)
        return (freqs >= self.lo_hz) & (freqs < self.hi_hz)


DEFAULT_BANDS = (
    BandDef("delta", 0.5, 4.0),
    BandDef("theta", 4.0, 8.0),
    BandDef("alpha", 8.0, 13.0),
    BandDef("beta", 13.0, 30.0),
    BandDef("gamma", 30.0, 50.0, inclusive_high=True),
)

ANALYSIS_LO_HZ = 0.5
ANALYSIS_HI_HZ = 50.0


@dataclass(frozen=True)
class Spectrum:
    """One-sided spectrum: probs sums to 1; degenerate marks all-zero input."""

    freqs: np.ndarray
    probs: np.ndarray
    raw_magnitudes: np.ndarray
    degenerate: bool
    fs: float
    n_samples: int


def magnitude_spectrum(x, fs: float, power: bool = False) -> Spectrum:
    """Normalized one-sided magnitude spectrum of the full window.

    `power=True` normalizes squared magnitudes instead (sensitivity knob).
    An all-zero window yields a uniform distribution flagged degenerate.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size < 8:
        raise TooShortError("spectrum needs at least 8 samples")
    mags = np.abs(np.fft.rfft(x))
    weights = mags**2 if power else mags
    total = weights.sum()
    freqs = np.arange(mags.size) * (fs / x.size)
    if total == 0.0:
        probs = np.full(mags.size, 1.0 / mags.size)
        return Spectrum(freqs, probs, mags, True, fs, x.size)
    return Spectrum(freqs, weights / total, mags, False, fs, x.size)


def _composite_simpson(y: np.ndarray, h: float) -> float:
    # Uniform spacing; odd panel count -> Simpson prefix + trapezoid tail.
    n_panels = y.size - 1
    if n_panels <= 0:
        return 0.0
    if n_panels == 1:
        return float(h * (y[0] + y[1]) / 2.0)
    total = 0.0
    if n_panels % 2 == 1:
        total += h * (y[-2] + y[-1]) / 2.0
        y = y[:-1]
    total += h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum())
    return float(total)


def band_powers(spectrum: Spectrum, bands=DEFAULT_BANDS) -> dict[str, float]:
    """Simpson-integrated probability mass per frequency band."""
    h = spectrum.fs / spectrum.n_samples
    out: dict[str, float] = {}
    for band in bands:
        mask = band.mask(spectrum.freqs)
        if not mask.any():
            raise EmptyBandError(f"no spectrum bins in band {band.name} [{band.lo_hz}, {band.hi_hz})")
        out[band.name] = _composite_simpson(spectrum.probs[mask], h)
    return out


@dataclass(frozen=True)
class SpectralDescriptors:
    peak_frequency: float
    mean_dominant_frequency: float
    spectral_entropy: float  # normalized to [0, 1]
    spectral_entropy_raw: float  # nats, unnormalized


def spectral_descriptors(
    spectrum: Spectrum,
    lo_hz: float = ANALYSIS_LO_HZ,
    hi_hz: float = ANALYSIS_HI_HZ,
    allow_degenerate: bool = False,
) -> SpectralDescriptors:
    """Peak frequency, spectral centroid, and entropy over [lo_hz, hi_hz].

    The in-range mass is renormalized before the entropy so a flat spectrum
    scores exactly 1. Degenerate spectra raise unless `allow_degenerate`,
    in which case the flagged uniform distribution is evaluated as-is.
    """
    if spectrum.degenerate and not allow_degenerate:
        raise DegenerateSpectrumError("spectrum of an all-zero window")
    mask = (spectrum.freqs >= lo_hz) & (spectrum.freqs <= hi_hz)
    if not mask.any():
        raise EmptyBandError(f"no spectrum bins in [{lo_hz}, {hi_hz}] Hz")
    freqs = spectrum.freqs[mask]
    p = spectrum.probs[mask]
    total = p.sum()
    if total == 0.0:
        if not allow_degenerate:
            raise DegenerateSpectrumError("no spectral mass in the analysis range")
        p = np.full(p.size, 1.0 / p.size)
        total = 1.0
    q = p / total
    peak = float(freqs[int(np.argmax(q))])
    centroid = float(np.sum(freqs * q))
    nz = q[q > 0]
    raw = float(-np.sum(nz * np.log(nz)))
    norm = raw / log(q.size) if q.size > 1 else 0.0
    return SpectralDescriptors(peak, centroid, float(norm), raw)


def frequency_features(
    x, fs: float, bands=DEFAULT_BANDS, power: bool = False
) -> np.ndarray:
    """The 8 frequency features in catalog order for one channel."""
    spec = magnitude_spectrum(x, fs, power=power)
    powers = band_powers(spec, bands)
    desc = spectral_descriptors(spec, allow_degenerate=True)
    return np.array(
        [powers[b.name] for b in bands]
        + [desc.peak_frequency, desc.mean_dominant_frequency, desc.spectral_entropy]
    )
