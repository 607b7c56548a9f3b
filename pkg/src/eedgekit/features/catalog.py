"""The canonical 85-entry feature catalog.

Order is fixed and load-bearing for every serialized feature matrix:
12 time-domain features, 8 frequency-domain features, then 13 Poincaré
descriptors for each wavelet sub-band A, D1, D2, D3, D4 (65 graphical
features).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

TIME_FEATURES = (
    "mean",
    "variance",
    "skewness",
    "kurtosis",
    "rms",
    "ssc_count",
    "hjorth_mobility",
    "hjorth_complexity",
    "hurst",
    "shannon_entropy",
    "sample_entropy",
    "permutation_entropy",
)

FREQUENCY_FEATURES = (
    "delta_power",
    "theta_power",
    "alpha_power",
    "beta_power",
    "gamma_power",
    "peak_frequency",
    "mean_dominant_frequency",
    "spectral_entropy",
)

POINCARE_DESCRIPTORS = (
    "ellipse_area",
    "eccentricity",
    "eig1",
    "eig2",
    "mean_dev_identity",
    "mean_dist_origin",
    "ssvl",
    "covariance",
    "mean_x",
    "mean_y",
    "std_x",
    "std_y",
    "ctm",
)

SUBBANDS = ("A", "D1", "D2", "D3", "D4")


@dataclass(frozen=True)
class FeatureId:
    index: int
    family: str  # time | frequency | graphical
    name: str


@lru_cache(maxsize=1)
def catalog() -> tuple[FeatureId, ...]:
    """All 85 feature identities in canonical order."""
    entries = []
    for name in TIME_FEATURES:
        entries.append(FeatureId(len(entries), "time", name))
    for name in FREQUENCY_FEATURES:
        entries.append(FeatureId(len(entries), "frequency", name))
    for band in SUBBANDS:
        for desc in POINCARE_DESCRIPTORS:
            entries.append(FeatureId(len(entries), "graphical", f"graphical_{band}_{desc}"))
    return tuple(entries)


@lru_cache(maxsize=1)
def catalog_names() -> tuple[str, ...]:
    return tuple(f.name for f in catalog())


def feature_index(name: str) -> int:
    try:
        return catalog_names().index(name)
    except ValueError:
        from ..errors import UnknownFeatureError

        raise UnknownFeatureError(name) from None
