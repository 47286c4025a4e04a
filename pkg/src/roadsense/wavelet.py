"""Orthonormal Haar analysis of fixed power-of-two windows.

The basis is kept as an explicit L x L orthonormal matrix B whose columns
are the sampled Haar functions; coefficients are B^T x. Column 0 is the
constant (approximation) vector; columns [L/2^j, L/2^(j-1)) hold the
scale-j details left to right, so scale 1 is the finest and fills the upper
half of the vector. Each scale-j basis vector is +2^(-j/2) on the first half
of its 2^j-sample support and -2^(-j/2) on the second half.

The forward transform evaluates those inner products with the pyramid
recursion instead of a matrix product. The two agree to rounding error, but
the pyramid forms each detail as one subtraction of two block averages, so a
constant window produces detail coefficients that are exactly zero rather
than summation-order residue. Several downstream contracts rely on that
(noise estimates of still segments, no phantom singularities).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ShapeError

_INV_SQRT2 = 2.0 ** -0.5


@dataclass(frozen=True)
class HaarBasis:
    size: int
    levels: int
    matrix: np.ndarray  # (size, size), orthonormal columns


@dataclass
class WaveletCoeffs:
    """Transform output: one approximation value plus details per scale.

    ``details[0]`` is the finest scale (j = 1, L/2 values); the last entry is
    the coarsest (a single value).
    """

    approx: float
    details: tuple[np.ndarray, ...]

    @property
    def levels(self) -> int:
        return len(self.details)


def build_haar_basis(size: int) -> HaarBasis:
    """Construct the orthonormal Haar basis for a power-of-two window."""
    if size < 2 or size & (size - 1):
        raise ConfigError(f"basis size must be a power of two >= 2, got {size}")
    levels = size.bit_length() - 1
    mat = np.zeros((size, size))
    mat[:, 0] = 1.0 / np.sqrt(size)
    for j in range(1, levels + 1):
        support = 1 << j
        half = support >> 1
        amp = 2.0 ** (-j / 2.0)
        for k in range(size >> j):
            col = (size >> j) + k
            start = k * support
            mat[start : start + half, col] = amp
            mat[start + half : start + support, col] = -amp
    return HaarBasis(size=size, levels=levels, matrix=mat)


def dwt(values: np.ndarray, basis: HaarBasis) -> WaveletCoeffs:
    """Analyze one window; input length must match the basis size.

    Computed with the pyramid recursion rather than the basis matrix: each
    detail is then a single subtraction of two block averages, so a constant
    window yields exact floating-point zeros at every scale instead of
    summation-order residue.
    """
    x = np.asarray(values, dtype=float)
    if x.shape != (basis.size,):
        raise ShapeError(f"expected {basis.size} values, got shape {x.shape}")
    details = []
    smooth = x
    for _ in range(basis.levels):
        even = smooth[0::2]
        odd = smooth[1::2]
        details.append((even - odd) * _INV_SQRT2)
        smooth = (even + odd) * _INV_SQRT2
    return WaveletCoeffs(approx=float(smooth[0]), details=tuple(details))


def coeff_vector(coeffs: WaveletCoeffs) -> np.ndarray:
    """Repack a WaveletCoeffs into the flat layout used by the basis matrix."""
    parts = [np.array([coeffs.approx])]
    parts.extend(coeffs.details[::-1])
    return np.concatenate(parts)


def idwt(coeffs: WaveletCoeffs, basis: HaarBasis) -> np.ndarray:
    """Reconstruct the window from its coefficients."""
    vec = coeff_vector(coeffs)
    if vec.shape != (basis.size,):
        raise ShapeError(f"coefficients do not match basis size {basis.size}")
    return basis.matrix @ vec


def detail_scale(coeffs: WaveletCoeffs, j: int) -> np.ndarray:
    """Detail coefficients at scale j (1 = finest); length is L / 2^j."""
    if not 1 <= j <= coeffs.levels:
        raise IndexError(f"scale {j} outside 1..{coeffs.levels}")
    return coeffs.details[j - 1]


def find_peaks(series: np.ndarray, plateau: str = "strict") -> tuple[np.ndarray, np.ndarray]:
    """Local maxima of a series; endpoints are never peaks.

    ``strict`` requires a sample greater than both neighbours, so flat tops
    and monotone runs yield nothing. ``left`` additionally accepts the
    leftmost sample of a flat top whose shoulders are both lower.
    Returns (values, indices).
    """
    s = np.asarray(series, dtype=float)
    n = s.size
    locs: list[int] = []
    if plateau == "strict":
        for i in range(1, n - 1):
            if s[i] > s[i - 1] and s[i] > s[i + 1]:
                locs.append(i)
    elif plateau == "left":
        i = 1
        while i < n - 1:
            if s[i] > s[i - 1]:
                right = i
                while right + 1 < n and s[right + 1] == s[i]:
                    right += 1
                if right < n - 1 and s[right + 1] < s[i]:
                    locs.append(i)
                i = right + 1
            else:
                i += 1
    else:
        raise ConfigError(f"unknown plateau policy: {plateau}")
    idx = np.array(locs, dtype=int)
    return s[idx], idx
