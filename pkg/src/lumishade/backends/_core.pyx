# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel core. Mirrors lumishade.backends.reference exactly."""

import numpy as np

from libc.math cimport atan2, cbrt, cos, exp, floor, hypot, pow, sin, sqrt

NAME = "native"

cdef double M00 = 0.4124564, M01 = 0.3575761, M02 = 0.1804375
cdef double M10 = 0.2126729, M11 = 0.7151522, M12 = 0.0721750
cdef double M20 = 0.0193339, M21 = 0.1191920, M22 = 0.9503041
cdef double WX = 0.95047, WY = 1.0, WZ = 1.08883
cdef double LAB_EPS = 216.0 / 24389.0
cdef double LAB_KAPPA = 24389.0 / 27.0

cdef double SH_C0 = 0.28209479177387814
cdef double SH_C1 = 0.4886025119029199
cdef double SH_C2A = 1.0925484305920792
cdef double SH_C2B = 0.31539156525252005
cdef double SH_C2C = 0.5462742152960396

cdef double POW25_7 = 6103515625.0  # 25**7
cdef double PI = 3.141592653589793
cdef double DEG = 180.0 / PI
cdef double RAD = PI / 180.0


def srgb_encode(linear):
    """Encode linear RGB in [0,1] to 8-bit sRGB (values clipped, round half-up)."""
    arr = np.ascontiguousarray(linear, dtype=np.float64)
    out_arr = np.empty(arr.shape, dtype=np.uint8)
    cdef double[::1] lin = arr.reshape(-1)
    cdef unsigned char[::1] out = out_arr.reshape(-1)
    cdef Py_ssize_t i, n = lin.shape[0]
    cdef double v
    with nogil:
        for i in range(n):
            v = lin[i]
            if v < 0.0:
                v = 0.0
            elif v > 1.0:
                v = 1.0
            if v <= 0.0031308:
                v = v * 12.92
            else:
                v = 1.055 * pow(v, 1.0 / 2.4) - 0.055
            out[i] = <unsigned char>floor(v * 255.0 + 0.5)
    return out_arr


cdef inline double lab_f(double t) nogil:
    if t > LAB_EPS:
        return cbrt(t)
    return (LAB_KAPPA * t + 16.0) / 116.0


def lab_from_linear(linear_rgb):
    """Convert linear RGB (..., 3) to CIELAB (..., 3), D65 reference white."""
    arr = np.ascontiguousarray(linear_rgb, dtype=np.float64)
    out_arr = np.empty_like(arr)
    cdef double[:, ::1] lin = arr.reshape(-1, 3)
    cdef double[:, ::1] out = out_arr.reshape(-1, 3)
    cdef Py_ssize_t i, n = lin.shape[0]
    cdef double r, g, b, fx, fy, fz
    with nogil:
        for i in range(n):
            r = lin[i, 0]
            g = lin[i, 1]
            b = lin[i, 2]
            fx = lab_f((M00 * r + M01 * g + M02 * b) / WX)
            fy = lab_f((M10 * r + M11 * g + M12 * b) / WY)
            fz = lab_f((M20 * r + M21 * g + M22 * b) / WZ)
            out[i, 0] = 116.0 * fy - 16.0
            out[i, 1] = 500.0 * (fx - fy)
            out[i, 2] = 200.0 * (fy - fz)
    return out_arr


def sh_basis(normals):
    """Evaluate the 9 real SH basis functions at unit vectors (..., 3)."""
    arr = np.ascontiguousarray(normals, dtype=np.float64)
    out_arr = np.empty(arr.shape[:-1] + (9,), dtype=np.float64)
    cdef double[:, ::1] n = arr.reshape(-1, 3)
    cdef double[:, ::1] out = out_arr.reshape(-1, 9)
    cdef Py_ssize_t i, m = n.shape[0]
    cdef double x, y, z
    with nogil:
        for i in range(m):
            x = n[i, 0]
            y = n[i, 1]
            z = n[i, 2]
            out[i, 0] = SH_C0
            out[i, 1] = SH_C1 * y
            out[i, 2] = SH_C1 * z
            out[i, 3] = SH_C1 * x
            out[i, 4] = SH_C2A * x * y
            out[i, 5] = SH_C2A * y * z
            out[i, 6] = SH_C2B * (3.0 * z * z - 1.0)
            out[i, 7] = SH_C2A * x * z
            out[i, 8] = SH_C2C * (x * x - y * y)
    return out_arr


def sh_shade(normals, coeffs):
    """Raw (unclamped) shading factor: dot of the SH basis with 9 coefficients."""
    arr = np.ascontiguousarray(normals, dtype=np.float64)
    carr = np.ascontiguousarray(coeffs, dtype=np.float64)
    out_arr = np.empty(arr.shape[:-1], dtype=np.float64)
    cdef double[:, ::1] n = arr.reshape(-1, 3)
    cdef double[::1] c = carr
    cdef double[::1] out = out_arr.reshape(-1)
    cdef Py_ssize_t i, m = n.shape[0]
    cdef double x, y, z, s
    with nogil:
        for i in range(m):
            x = n[i, 0]
            y = n[i, 1]
            z = n[i, 2]
            s = c[0] * SH_C0
            s += c[1] * SH_C1 * y
            s += c[2] * SH_C1 * z
            s += c[3] * SH_C1 * x
            s += c[4] * SH_C2A * x * y
            s += c[5] * SH_C2A * y * z
            s += c[6] * SH_C2B * (3.0 * z * z - 1.0)
            s += c[7] * SH_C2A * x * z
            s += c[8] * SH_C2C * (x * x - y * y)
            out[i] = s
    return out_arr


cdef double ciede2000_one(double l1, double a1, double b1,
                          double l2, double a2, double b2) nogil:
    cdef double c1 = hypot(a1, b1)
    cdef double c2 = hypot(a2, b2)
    cdef double cbar = 0.5 * (c1 + c2)
    cdef double cbar7 = pow(cbar, 7)
    cdef double g = 0.5 * (1.0 - sqrt(cbar7 / (cbar7 + POW25_7)))

    cdef double a1p = (1.0 + g) * a1
    cdef double a2p = (1.0 + g) * a2
    cdef double c1p = hypot(a1p, b1)
    cdef double c2p = hypot(a2p, b2)

    cdef double h1p = 0.0
    cdef double h2p = 0.0
    if a1p != 0.0 or b1 != 0.0:
        h1p = atan2(b1, a1p) * DEG
        if h1p < 0.0:
            h1p += 360.0
    if a2p != 0.0 or b2 != 0.0:
        h2p = atan2(b2, a2p) * DEG
        if h2p < 0.0:
            h2p += 360.0

    cdef double dlp = l2 - l1
    cdef double dcp = c2p - c1p

    cdef bint zero_chroma = c1p * c2p == 0.0
    cdef double dhp
    if zero_chroma:
        dhp = 0.0
    else:
        dhp = h2p - h1p
        if dhp > 180.0:
            dhp -= 360.0
        elif dhp < -180.0:
            dhp += 360.0
    cdef double dbig_hp = 2.0 * sqrt(c1p * c2p) * sin(dhp * RAD / 2.0)

    cdef double lbar = 0.5 * (l1 + l2)
    cdef double cbarp = 0.5 * (c1p + c2p)

    cdef double hsum = h1p + h2p
    cdef double habs = h1p - h2p if h1p >= h2p else h2p - h1p
    cdef double hbar
    if zero_chroma:
        hbar = hsum
    elif habs <= 180.0:
        hbar = hsum / 2.0
    elif hsum < 360.0:
        hbar = (hsum + 360.0) / 2.0
    else:
        hbar = (hsum - 360.0) / 2.0

    cdef double t = (1.0
                     - 0.17 * cos((hbar - 30.0) * RAD)
                     + 0.24 * cos(2.0 * hbar * RAD)
                     + 0.32 * cos((3.0 * hbar + 6.0) * RAD)
                     - 0.20 * cos((4.0 * hbar - 63.0) * RAD))
    cdef double dtheta = 30.0 * exp(-((hbar - 275.0) / 25.0) * ((hbar - 275.0) / 25.0))
    cdef double cbarp7 = pow(cbarp, 7)
    cdef double rc = 2.0 * sqrt(cbarp7 / (cbarp7 + POW25_7))
    cdef double lb50 = (lbar - 50.0) * (lbar - 50.0)
    cdef double sl = 1.0 + 0.015 * lb50 / sqrt(20.0 + lb50)
    cdef double sc = 1.0 + 0.045 * cbarp
    cdef double sh = 1.0 + 0.015 * cbarp * t
    cdef double rt = -sin(2.0 * dtheta * RAD) * rc

    cdef double term_l = dlp / sl
    cdef double term_c = dcp / sc
    cdef double term_h = dbig_hp / sh
    return sqrt(term_l * term_l + term_c * term_c + term_h * term_h
                + rt * term_c * term_h)


def ciede2000_pairs(lab1, lab2):
    """Elementwise CIEDE2000 between matching rows of two (N, 3) Lab arrays."""
    a1, a2 = np.broadcast_arrays(
        np.asarray(lab1, dtype=np.float64), np.asarray(lab2, dtype=np.float64)
    )
    flat1 = np.ascontiguousarray(a1).reshape(-1, 3)
    flat2 = np.ascontiguousarray(a2).reshape(-1, 3)
    out_arr = np.empty(flat1.shape[0], dtype=np.float64)
    cdef double[:, ::1] x = flat1
    cdef double[:, ::1] y = flat2
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, n = x.shape[0]
    with nogil:
        for i in range(n):
            out[i] = ciede2000_one(x[i, 0], x[i, 1], x[i, 2],
                                   y[i, 0], y[i, 1], y[i, 2])
    return out_arr.reshape(a1.shape[:-1])


def ciede2000_cross(lab1, lab2):
    """Full (N, M) CIEDE2000 distance block between two Lab arrays."""
    flat1 = np.ascontiguousarray(lab1, dtype=np.float64)
    flat2 = np.ascontiguousarray(lab2, dtype=np.float64)
    out_arr = np.empty((flat1.shape[0], flat2.shape[0]), dtype=np.float64)
    cdef double[:, ::1] x = flat1
    cdef double[:, ::1] y = flat2
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, n = x.shape[0], m = y.shape[0]
    with nogil:
        for i in range(n):
            for j in range(m):
                out[i, j] = ciede2000_one(x[i, 0], x[i, 1], x[i, 2],
                                          y[j, 0], y[j, 1], y[j, 2])
    return out_arr
