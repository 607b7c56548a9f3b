"""Orthogonal discrete wavelet transform (Mallat cascade).

Decomposition uses symmetric (edge-repeating) boundary extension, which
makes sub-band lengths follow len_j = floor((len_{j-1} + L - 1) / 2) with
L the filter length. The transform is expansive, so the inverse cascade
reconstructs the input exactly.

Daubechies filters are generated by spectral factorization of the binomial
half-band polynomial, so any `dbN` wavelet is available by name.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import TooShortError


@dataclass(frozen=True)
class WaveletFilter:
    name: str
    dec_lo: np.ndarray
    dec_hi: np.ndarray
    rec_lo: np.ndarray
    rec_hi: np.ndarray

    @property
    def length(self) -> int:
        return len(self.dec_lo)


def daubechies_scaling(p: int) -> np.ndarray:
    """Length-2p orthonormal scaling filter with p vanishing moments.

    Minimum-phase (extremal) factorization; sums to sqrt(2).
    """
    if p < 1:
        raise ValueError("need at least one vanishing moment")
    if p == 1:
        return np.array([1.0, 1.0]) / np.sqrt(2.0)
    # Half-band polynomial P(y) = sum_k C(p-1+k, k) y^k, roots in y.
    coeffs = [comb(p - 1 + k, k) for k in range(p)]
    yroots = np.roots(coeffs[::-1])
    h = np.array([1.0 + 0.0j])
    for _ in range(p):
        h = np.convolve(h, [0.5, 0.5])
    for y in yroots:
        # y = (2 - z - 1/z)/4  =>  z^2 - (2 - 4y) z + 1 = 0; keep |z| < 1.
        zr = np.roots([1.0, -(2.0 - 4.0 * y), 1.0])
        z = zr[np.argmin(np.abs(zr))]
        h = np.convolve(h, [1.0, -z]) / (1.0 - z)
    h = np.real(h)
    h *= np.sqrt(2.0) / h.sum()
    # Extremal-phase convention: energy front-loaded.
    if np.argmax(np.abs(h)) > len(h) / 2:
        h = h[::-1]
    return h


@lru_cache(maxsize=None)
def get_wavelet(name: str = "db4") -> WaveletFilter:
    """Look up a wavelet by name: 'haar' or 'dbN' (N = vanishing moments)."""
    key = name.strip().lower()
    if key == "haar":
        key = "db1"
    if not key.startswith("db"):
        raise ValueError(f"unknown wavelet {name!r} (supported: haar, dbN)")
    try:
        p = int(key[2:])
    except ValueError:
        raise ValueError(f"unknown wavelet {name!r}") from None
    h = daubechies_scaling(p)
    signs = np.where(np.arange(len(h)) % 2 == 0, -1.0, 1.0)
    dec_hi = signs * h
    rec_lo = h.copy()
    dec_lo = h[::-1].copy()
    rec_hi = dec_hi[::-1].copy()
    for arr in (dec_lo, dec_hi, rec_lo, rec_hi):
        arr.setflags(write=False)
    return WaveletFilter(key, dec_lo, dec_hi, rec_lo, rec_hi)


def _symmetric_extend(x: np.ndarray, pad: int) -> np.ndarray:
    # Edge-repeating reflection: ... x1 x0 | x0 x1 ... xn | xn xn-1 ...
    return np.concatenate([x[:pad][::-1], x, x[-pad:][::-1]])


def dwt_single(x: np.ndarray, wav: WaveletFilter) -> tuple[np.ndarray, np.ndarray]:
    """One analysis step: (approximation, detail) coefficients."""
    x = np.asarray(x, dtype=np.float64)
    L = wav.length
    if x.size < L - 1 or x.size < 2:
        raise TooShortError(f"signal of length {x.size} too short for {wav.name}")
    ext = _symmetric_extend(x, L - 1)
    out_len = (x.size + L - 1) // 2
    take = slice(L, L + 2 * out_len - 1, 2)
    ca = np.convolve(ext, wav.dec_lo)[take]
    cd = np.convolve(ext, wav.dec_hi)[take]
    return ca, cd


def idwt_single(
    ca: np.ndarray, cd: np.ndarray, wav: WaveletFilter, out_len: int
) -> np.ndarray:
    """One synthesis step; `out_len` is the pre-analysis signal length."""
    ca = np.asarray(ca, dtype=np.float64)
    cd = np.asarray(cd, dtype=np.float64)
    if ca.size != cd.size:
        raise ValueError("coefficient vectors must have equal length")
    L = wav.length
    up_a = np.zeros(2 * ca.size - 1)
    up_a[::2] = ca
    up_d = np.zeros(2 * cd.size - 1)
    up_d[::2] = cd
    full = np.convolve(up_a, wav.rec_lo) + np.convolve(up_d, wav.rec_hi)
    rec = full[L - 2 : L - 2 + 2 * ca.size - L + 2]
    if rec.size < out_len:
        raise ValueError(f"cannot reconstruct {out_len} samples from {ca.size} coefficients")
    return rec[:out_len]


@dataclass(frozen=True)
class DwtDecomposition:
    """Four-level decomposition: approximation A and details D1 (finest)..D4."""

    approximation: np.ndarray
    details: tuple[np.ndarray, ...]  # (D1, D2, D3, D4)
    wavelet_name: str
    original_length: int

    @property
    def levels(self) -> int:
        return len(self.details)

    def subbands(self) -> list[tuple[str, np.ndarray]]:
        """Sub-bands in catalog order: A, D1, D2, ..."""
        out = [("A", self.approximation)]
        out += [(f"D{i + 1}", d) for i, d in enumerate(self.details)]
        return out


def dwt_decompose(x, wavelet: str = "db4", levels: int = 4) -> DwtDecomposition:
    """Cascade `levels` analysis steps; D1 is the finest detail band."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    wav = get_wavelet(wavelet)
    x = np.asarray(x, dtype=np.float64)
    approx = x
    details = []
    for _ in range(levels):
        approx, cd = dwt_single(approx, wav)
        details.append(cd)
    return DwtDecomposition(approx, tuple(details), wav.name, x.size)


def dwt_reconstruct(decomp: DwtDecomposition) -> np.ndarray:
    """Invert the cascade back to the original signal."""
    wav = get_wavelet(decomp.wavelet_name)
    lengths = [decomp.original_length]
    for _ in range(decomp.levels - 1):
        lengths.append((lengths[-1] + wav.length - 1) // 2)
    approx = decomp.approximation
    for cd, out_len in zip(reversed(decomp.details), reversed(lengths)):
        approx = idwt_single(approx, cd, wav, out_len)
    return approx
