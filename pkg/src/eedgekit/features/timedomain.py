"""The 12 time-domain features, computed per channel.

All statistics use population (divide-by-N) moments. Degenerate inputs
follow fixed conventions so the pipeline never emits NaN: constant
signals give zero skewness/kurtosis, zero Hjorth parameters, 0.5 Hurst,
and zero entropies.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from math import factorial, log

import numpy as np

from ..errors import TooShortError


@dataclass(frozen=True)
class TimeFeatureSet:
    mean: float
    variance: float
    skewness: float
    kurtosis: float
    rms: float
    ssc_count: float
    hjorth_mobility: float
    hjorth_complexity: float
    hurst: float
    shannon_entropy: float
    sample_entropy: float
    permutation_entropy: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)])


def moments(x) -> tuple[float, float, float, float]:
    """(mean, population variance, skewness, excess kurtosis)."""
    x = np.asarray(x, dtype=np.float64)
    if x.size < 2:
        raise TooShortError("moments need at least 2 samples")
    mu = x.mean()
    d = x - mu
    m2 = np.mean(d**2)
    if m2 == 0.0:
        return float(mu), 0.0, 0.0, 0.0
    m3 = np.mean(d**3)
    m4 = np.mean(d**4)
    return float(mu), float(m2), float(m3 / m2**1.5), float(m4 / m2**2 - 3.0)


def rms_ssc(x) -> tuple[float, int]:
    """(root mean square, slope-sign-change count with strict sign flips)."""
    x = np.asarray(x, dtype=np.float64)
    if x.size < 3:
        raise TooShortError("slope sign changes need at least 3 samples")
    rms = float(np.sqrt(np.mean(x**2)))
    d = np.diff(x)
    ssc = int(np.sum(d[:-1] * d[1:] < 0))
    return rms, ssc


def hjorth(x) -> tuple[float, float]:
    """(mobility, complexity) from variances of the signal and its differences."""
    x = np.asarray(x, dtype=np.float64)
    if x.size < 3:
        raise TooShortError("Hjorth parameters need at least 3 samples")
    v0 = np.var(x)
    if v0 == 0.0:
        return 0.0, 0.0
    dx = np.diff(x)
    v1 = np.var(dx)
    mobility = np.sqrt(v1 / v0)
    if v1 == 0.0:
        return float(mobility), 0.0
    v2 = np.var(np.diff(dx))
    complexity = np.sqrt(v2 / v1) / mobility
    return float(mobility), float(complexity)


def hurst_rs(x) -> float:
    """Single-scale rescaled-range exponent: log(R/S) / log(N).

    R is the range of the cumulative sum of deviations from the mean and
    S the population standard deviation; S = 0 returns 0.5.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size < 8:
        raise TooShortError("rescaled range needs at least 8 samples")
    s = x.std()
    if s == 0.0:
        return 0.5
    y = np.cumsum(x - x.mean())
    r = y.max() - y.min()
    if r == 0.0:
        return 0.5
    return float(np.log(r / s) / np.log(x.size))


def shannon_entropy(x, bins: int = 64) -> float:
    """Entropy (nats) of the amplitude histogram over [min, max]."""
    x = np.asarray(x, dtype=np.float64)
    if x.size < 1:
        raise TooShortError("entropy of an empty signal is undefined")
    lo, hi = x.min(), x.max()
    if lo == hi:
        return 0.0
    counts, _ = np.histogram(x, bins=bins, range=(lo, hi))
    p = counts[counts > 0] / x.size
    return float(-np.sum(p * np.log(p)))


def _chebyshev_match_count(x: np.ndarray, m: int, r: float) -> int:
    # Ordered pairs (i, j), i != j, with max-norm template distance <= r.
    t = np.lib.stride_tricks.sliding_window_view(x, m)
    dist = np.abs(t[:, None, :] - t[None, :, :]).max(axis=-1)
    return int(np.count_nonzero(dist <= r)) - t.shape[0]


def sample_entropy(x, m: int = 2, r_scale: float = 0.2) -> float:
    """Sample entropy with Chebyshev distance and tolerance r = r_scale * std.

    Match probabilities at template lengths m and m+1 each average the
    per-template match fraction over all available templates. When no
    templates match at length m+1, returns the resolution cap
    ln(N-m) + ln(N-m-1).
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n < m + 2:
        raise TooShortError(f"sample entropy needs at least {m + 2} samples")
    r = r_scale * x.std()
    count_m = _chebyshev_match_count(x, m, r)
    count_m1 = _chebyshev_match_count(x, m + 1, r)
    cap = log(n - m) + log(n - m - 1)
    if count_m1 == 0 or count_m == 0:
        return cap
    phi_m = count_m / ((n - m + 1) * (n - m))
    phi_m1 = count_m1 / ((n - m) * (n - m - 1))
    return float(-np.log(phi_m1 / phi_m))


def permutation_entropy(x, order: int = 3, delay: int = 1) -> float:
    """Normalized ordinal-pattern entropy in [0, 1]; ties break by index."""
    x = np.asarray(x, dtype=np.float64)
    span = order * delay + 1
    if x.size < span:
        raise TooShortError(f"permutation entropy needs at least {span} samples")
    windows = np.lib.stride_tricks.sliding_window_view(x, (order - 1) * delay + 1)[
        :, ::delay
    ]
    patterns = np.argsort(windows, axis=1, kind="stable")
    codes = (patterns * (order ** np.arange(order))).sum(axis=1)
    _, counts = np.unique(codes, return_counts=True)
    p = counts / counts.sum()
    h = -np.sum(p * np.log(p))
    return float(h / log(factorial(order)))


def time_features(
    x,
    shannon_bins: int = 64,
    sampen_m: int = 2,
    perm_order: int = 3,
    perm_delay: int = 1,
) -> TimeFeatureSet:
    """All 12 time-domain features for one channel."""
    mu, var, skew, kurt = moments(x)
    rms, ssc = rms_ssc(x)
    mob, comp = hjorth(x)
    return TimeFeatureSet(
        mean=mu,
        variance=var,
        skewness=skew,
        kurtosis=kurt,
        rms=rms,
        ssc_count=float(ssc),
        hjorth_mobility=mob,
        hjorth_complexity=comp,
        hurst=hurst_rs(x),
        shannon_entropy=shannon_entropy(x, bins=shannon_bins),
        sample_entropy=sample_entropy(x, m=sampen_m),
        permutation_entropy=permutation_entropy(x, order=perm_order, delay=perm_delay),
    )
