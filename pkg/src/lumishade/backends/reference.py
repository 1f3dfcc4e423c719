"""Pure numpy implementations of the hot array kernels.

This is the fallback backend, always importable. The compiled core
(`lumishade.backends._core`) exposes the same five functions with the same
semantics; `lumishade.backends` picks one at import time. Keep the two in
lockstep: parity is enforced by tests/test_backends.py.

All kernels take and return float64 arrays except the 8-bit encode step.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

# sRGB <-> XYZ (D65, Lindbloom matrix; row sums reproduce the reference white)
_M_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_WHITE = np.array([0.95047, 1.00000, 1.08883])

# CIE f(t) breakpoints
_LAB_EPS = 216.0 / 24389.0
_LAB_KAPPA = 24389.0 / 27.0

# Real SH basis constants, coefficient order:
# Y00, Y1-1, Y10, Y11, Y2-2, Y2-1, Y20, Y21, Y22
SH_C0 = 0.28209479177387814  # 0.5*sqrt(1/pi)
SH_C1 = 0.4886025119029199  # sqrt(3/(4*pi))
SH_C2 = (
    1.0925484305920792,  # xy, yz, xz share this factor
    0.31539156525252005,  # (3z^2 - 1)
    0.5462742152960396,  # (x^2 - y^2)
)

_POW25_7 = 25.0 ** 7


def srgb_encode(linear: np.ndarray) -> np.ndarray:
    """Encode linear RGB in [0,1] to 8-bit sRGB (values clipped, round half-up)."""
    lin = np.clip(np.asarray(linear, dtype=np.float64), 0.0, 1.0)
    srgb = np.where(lin <= 0.0031308, lin * 12.92, 1.055 * lin ** (1.0 / 2.4) - 0.055)
    return np.floor(srgb * 255.0 + 0.5).astype(np.uint8)


def lab_from_linear(linear_rgb: np.ndarray) -> np.ndarray:
    """Convert linear RGB (..., 3) to CIELAB (..., 3), D65 reference white."""
    lin = np.asarray(linear_rgb, dtype=np.float64)
    xyz = lin @ _M_RGB_TO_XYZ.T / _WHITE
    f = np.where(xyz > _LAB_EPS, np.cbrt(xyz), (_LAB_KAPPA * xyz + 16.0) / 116.0)
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    out = np.empty_like(lin)
    out[..., 0] = 116.0 * fy - 16.0
    out[..., 1] = 500.0 * (fx - fy)
    out[..., 2] = 200.0 * (fy - fz)
    return out


def sh_basis(normals: np.ndarray) -> np.ndarray:
    """Evaluate the 9 real SH basis functions at unit vectors (..., 3)."""
    n = np.asarray(normals, dtype=np.float64)
    x, y, z = n[..., 0], n[..., 1], n[..., 2]
    return np.stack(
        [
            np.full(x.shape, SH_C0),
            SH_C1 * y,
            SH_C1 * z,
            SH_C1 * x,
            SH_C2[0] * x * y,
            SH_C2[0] * y * z,
            SH_C2[1] * (3.0 * z * z - 1.0),
            SH_C2[0] * x * z,
            SH_C2[2] * (x * x - y * y),
        ],
        axis=-1,
    )


def sh_shade(normals: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Raw (unclamped) shading factor: dot of the SH basis with 9 coefficients."""
    return sh_basis(normals) @ np.asarray(coeffs, dtype=np.float64)


def _ciede2000_core(lab1: np.ndarray, lab2: np.ndarray) -> np.ndarray:
    """CIEDE2000 over broadcastable (..., 3) Lab arrays, kL = kC = kH = 1.

    Follows the standard implementation notes: hue angles in degrees, the
    a'=b'=0 degenerate hue set to 0, and the documented mean-hue branch rules.
    """
    l1, a1, b1 = lab1[..., 0], lab1[..., 1], lab1[..., 2]
    l2, a2, b2 = lab2[..., 0], lab2[..., 1], lab2[..., 2]

    c1 = np.hypot(a1, b1)
    c2 = np.hypot(a2, b2)
    cbar = 0.5 * (c1 + c2)
    cbar7 = cbar ** 7
    g = 0.5 * (1.0 - np.sqrt(cbar7 / (cbar7 + _POW25_7)))

    a1p = (1.0 + g) * a1
    a2p = (1.0 + g) * a2
    c1p = np.hypot(a1p, b1)
    c2p = np.hypot(a2p, b2)

    h1p = np.degrees(np.arctan2(b1, a1p)) % 360.0
    h1p = np.where((a1p == 0.0) & (b1 == 0.0), 0.0, h1p)
    h2p = np.degrees(np.arctan2(b2, a2p)) % 360.0
    h2p = np.where((a2p == 0.0) & (b2 == 0.0), 0.0, h2p)

    dlp = l2 - l1
    dcp = c2p - c1p

    zero_chroma = c1p * c2p == 0.0
    hdiff = h2p - h1p
    dhp = np.where(hdiff > 180.0, hdiff - 360.0, hdiff)
    dhp = np.where(hdiff < -180.0, hdiff + 360.0, dhp)
    dhp = np.where(zero_chroma, 0.0, dhp)
    dbig_hp = 2.0 * np.sqrt(c1p * c2p) * np.sin(np.radians(dhp) / 2.0)

    lbar = 0.5 * (l1 + l2)
    cbarp = 0.5 * (c1p + c2p)

    hsum = h1p + h2p
    habs = np.abs(h1p - h2p)
    hbar = np.where(hsum < 360.0, (hsum + 360.0) / 2.0, (hsum - 360.0) / 2.0)
    hbar = np.where(habs <= 180.0, hsum / 2.0, hbar)
    hbar = np.where(zero_chroma, hsum, hbar)

    t = (
        1.0
        - 0.17 * np.cos(np.radians(hbar - 30.0))
        + 0.24 * np.cos(np.radians(2.0 * hbar))
        + 0.32 * np.cos(np.radians(3.0 * hbar + 6.0))
        - 0.20 * np.cos(np.radians(4.0 * hbar - 63.0))
    )
    dtheta = 30.0 * np.exp(-(((hbar - 275.0) / 25.0) ** 2))
    cbarp7 = cbarp ** 7
    rc = 2.0 * np.sqrt(cbarp7 / (cbarp7 + _POW25_7))
    lb50 = (lbar - 50.0) ** 2
    sl = 1.0 + 0.015 * lb50 / np.sqrt(20.0 + lb50)
    sc = 1.0 + 0.045 * cbarp
    sh = 1.0 + 0.015 * cbarp * t
    rt = -np.sin(np.radians(2.0 * dtheta)) * rc

    term_l = dlp / sl
    term_c = dcp / sc
    term_h = dbig_hp / sh
    return np.sqrt(term_l ** 2 + term_c ** 2 + term_h ** 2 + rt * term_c * term_h)


def ciede2000_pairs(lab1: np.ndarray, lab2: np.ndarray) -> np.ndarray:
    """Elementwise CIEDE2000 between matching rows of two (N, 3) Lab arrays."""
    a = np.asarray(lab1, dtype=np.float64)
    b = np.asarray(lab2, dtype=np.float64)
    return _ciede2000_core(a, b)


def ciede2000_cross(lab1: np.ndarray, lab2: np.ndarray) -> np.ndarray:
    """Full (N, M) CIEDE2000 distance block between two Lab arrays."""
    a = np.asarray(lab1, dtype=np.float64)
    b = np.asarray(lab2, dtype=np.float64)
    return _ciede2000_core(a[:, None, :], b[None, :, :])
