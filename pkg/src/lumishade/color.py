"""Color-space conversions and the CIEDE2000 perceptual color difference.

Conventions fixed for the whole package:

* Input imagery is 8-bit sRGB (IEC 61966-2-1 piecewise transfer curve).
* CIELAB uses the D65 white point (Xn=0.95047, Yn=1.0, Zn=1.08883),
  2-degree observer.
* CIEDE2000 uses parametric factors kL = kC = kH = 1.

All intermediate math runs in float64; images stay 8-bit at rest.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from lumishade.backends import kernels
from lumishade.types import LabColor, Rgb8

# 8-bit sRGB -> linear decode table (the decode side is a pure 256-entry LUT)
_DECODE_LUT = np.empty(256, dtype=np.float64)
_c = np.arange(256, dtype=np.float64) / 255.0
_DECODE_LUT[:] = np.where(_c <= 0.04045, _c / 12.92, ((_c + 0.055) / 1.055) ** 2.4)
del _c


def srgb_decode(img: np.ndarray) -> np.ndarray:
    """8-bit sRGB values (any shape) to linear RGB float64 in [0, 1]."""
    arr = np.asarray(img)
    if arr.dtype != np.uint8:
        if np.any((arr < 0) | (arr > 255)):
            raise ValueError("sRGB channel values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return _DECODE_LUT[arr]


def srgb_encode(linear: np.ndarray) -> np.ndarray:
    """Linear RGB float64 to 8-bit sRGB, clipping to [0, 1] and rounding half-up."""
    return kernels.srgb_encode(linear)


def srgb_to_lab_array(img: np.ndarray) -> np.ndarray:
    """Vectorized sRGB (..., 3) uint8 -> CIELAB (..., 3) float64."""
    return kernels.lab_from_linear(srgb_decode(img))


def srgb_to_lab(rgb: Rgb8 | Sequence[int]) -> LabColor:
    """Convert one 8-bit sRGB color to CIELAB (D65).

    Total function: every value with channels in [0, 255] converts; the white
    point maps to L=100 with |a|, |b| below 1e-2 and black maps to (0, 0, 0).
    """
    arr = np.asarray(rgb, dtype=np.float64)
    if arr.shape != (3,):
        raise ValueError("expected an (r, g, b) triple")
    lab = kernels.lab_from_linear(srgb_decode(arr.reshape(1, 3)))[0]
    return LabColor(float(lab[0]), float(lab[1]), float(lab[2]))


def ciede2000(x: LabColor | Sequence[float], y: LabColor | Sequence[float]) -> float:
    """CIEDE2000 color difference between two Lab colors (kL = kC = kH = 1).

    Symmetric, non-negative, zero for identical operands. Distances below 2
    are imperceptible to most observers; 2-5 reads as similar; above 10 the
    colors are clearly different.
    """
    a = np.asarray(x, dtype=np.float64).reshape(1, 3)
    b = np.asarray(y, dtype=np.float64).reshape(1, 3)
    return float(kernels.ciede2000_pairs(a, b)[0])


def ciede2000_matrix(labs_a: np.ndarray, labs_b: np.ndarray) -> np.ndarray:
    """All pairwise CIEDE2000 distances between rows of two (N, 3) Lab arrays."""
    a = np.asarray(labs_a, dtype=np.float64).reshape(-1, 3)
    b = np.asarray(labs_b, dtype=np.float64).reshape(-1, 3)
    return kernels.ciede2000_cross(a, b)
