"""Poincaré-plot descriptors of wavelet sub-band coefficients.

Each channel is decomposed into A, D1..D4 sub-bands; the lag-embedded
coefficient cloud of each sub-band yields 13 shape descriptors, for 65
graphical features per channel.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from ..errors import TooFewPointsError, TooShortError
from ..wavelet import dwt_decompose

CTM_RADIUS_SCALE = 0.2


@dataclass(frozen=True)
class PoincareDescriptors:
    ellipse_area: float
    eccentricity: float
    eig1: float
    eig2: float
    mean_dev_identity: float
    mean_dist_origin: float
    ssvl: float
    covariance: float
    mean_x: float
    mean_y: float
    std_x: float
    std_y: float
    ctm: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)])


def poincare_embed(c, lag: int = 1) -> np.ndarray:
    """Lag embedding: rows (c_k, c_{k+lag})."""
    c = np.asarray(c, dtype=np.float64)
    if c.size <= lag:
        raise TooShortError(f"need more than lag={lag} coefficients to embed")
    return np.column_stack([c[:-lag], c[lag:]])


def poincare_descriptors(
    points, ctm_radius_scale: float = CTM_RADIUS_SCALE
) -> PoincareDescriptors:
    """13 shape descriptors of a 2-D point cloud.

    Eigenvalues come from the population covariance matrix; the ellipse
    area is pi * sqrt(eig1 * eig2). Deviation from the identity line is the
    perpendicular distance |y - x| / sqrt(2). CTM counts the fraction of
    points strictly inside radius ctm_radius_scale * sqrt(eig1 + eig2)
    around the centroid.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("points must be an [n, 2] array")
    if points.shape[0] < 3:
        raise TooFewPointsError("need at least 3 points")
    x, y = points[:, 0], points[:, 1]
    mx, my = x.mean(), y.mean()
    dx, dy = x - mx, y - my
    sxx = np.mean(dx**2)
    syy = np.mean(dy**2)
    sxy = np.mean(dx * dy)
    half_tr = (sxx + syy) / 2.0
    disc = np.sqrt(((sxx - syy) / 2.0) ** 2 + sxy**2)
    eig1 = half_tr + disc
    eig2 = max(half_tr - disc, 0.0)
    area = np.pi * np.sqrt(max(eig1 * eig2, 0.0))
    ecc = np.sqrt(max(1.0 - eig2 / eig1, 0.0)) if eig1 > 0.0 else 0.0
    r = np.hypot(x, y)
    rho = ctm_radius_scale * np.sqrt(eig1 + eig2)
    centered = np.hypot(dx, dy)
    return PoincareDescriptors(
        ellipse_area=float(area),
        eccentricity=float(ecc),
        eig1=float(eig1),
        eig2=float(eig2),
        mean_dev_identity=float(np.mean(np.abs(y - x)) / np.sqrt(2.0)),
        mean_dist_origin=float(r.mean()),
        ssvl=float(r.std()),
        covariance=float(sxy),
        mean_x=float(mx),
        mean_y=float(my),
        std_x=float(np.sqrt(sxx)),
        std_y=float(np.sqrt(syy)),
        ctm=float(np.mean(centered < rho)),
    )


def graphical_features(
    x,
    wavelet: str = "db4",
    levels: int = 4,
    lag: int = 1,
    ctm_radius_scale: float = CTM_RADIUS_SCALE,
) -> np.ndarray:
    """All 65 graphical features for one channel, in catalog order."""
    x = np.asarray(x, dtype=np.float64)
    if x.size < 32:
        raise TooShortError("graphical features need at least 32 samples")
    decomp = dwt_decompose(x, wavelet=wavelet, levels=levels)
    blocks = []
    for _, coeffs in decomp.subbands():
        desc = poincare_descriptors(
            poincare_embed(coeffs, lag=lag), ctm_radius_scale=ctm_radius_scale
        )
        blocks.append(desc.as_array())
    return np.concatenate(blocks)
