"""Raster primitives: masks, cumulative histograms, histogram matching,
K-means palette extraction, background removal, PNG I/O.

Images are numpy arrays of shape (H, W, 3), dtype uint8, sRGB encoded.
Masks are boolean arrays of shape (H, W); True selects a pixel. All
operations are pure: inputs are never mutated, outputs freshly allocated.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from PIL import Image
from scipy import ndimage

from lumishade.color import srgb_decode, srgb_encode
from lumishade.errors import (
    DimensionMismatchError,
    EmptyInputError,
    EmptyMaskError,
)
from lumishade.types import Rgb8

HISTOGRAM_BINS = 256  # one bin per 8-bit level: Eq. bin width V = 1

_KMEANS_MAX_ITER = 100
_KMEANS_TOL = 0.5  # centroid movement, in 8-bit-level units of linear RGB


@dataclass(frozen=True)
class ChannelCdf:
    """Cumulative histogram of one channel over a masked region.

    bins[k] = fraction of selected pixels with channel value <= k. The array
    is non-decreasing and ends at exactly 1.0; min_value is the lowest level
    with any mass.
    """

    channel: int
    bins: np.ndarray
    min_value: int

    def __post_init__(self):
        if self.bins.shape != (HISTOGRAM_BINS,):
            raise DimensionMismatchError("CDF must have 256 bins")


def _check_pair(img: np.ndarray, mask: np.ndarray) -> None:
    if img.ndim != 3 or img.shape[2] != 3:
        raise DimensionMismatchError(f"expected (H, W, 3) image, got {img.shape}")
    if mask.shape != img.shape[:2]:
        raise DimensionMismatchError(
            f"mask shape {mask.shape} does not match image {img.shape[:2]}"
        )


def cumulative_histogram(img: np.ndarray, mask: np.ndarray, channel: int) -> ChannelCdf:
    """Normalized cumulative histogram of one channel over the masked pixels."""
    _check_pair(img, mask)
    values = img[mask, channel]
    if values.size == 0:
        raise EmptyMaskError("cannot histogram an empty selection")
    counts = np.bincount(values, minlength=HISTOGRAM_BINS).astype(np.float64)
    bins = np.cumsum(counts) / values.size
    return ChannelCdf(channel=channel, bins=bins, min_value=int(values.min()))


def image_cdfs(img: np.ndarray, mask: np.ndarray) -> tuple[ChannelCdf, ChannelCdf, ChannelCdf]:
    """Per-channel CDFs of an image region (convenience for histogram_match)."""
    return tuple(cumulative_histogram(img, mask, ch) for ch in range(3))


def histogram_match(
    src: np.ndarray, src_mask: np.ndarray, ref_cdfs: Sequence[ChannelCdf]
) -> np.ndarray:
    """Remap masked pixels so each channel's cumulative histogram matches a reference.

    For a pixel value u the source quantile q = C_s(u) is pushed through the
    reverse lookup on the reference histogram: the output level is the
    smallest level whose cumulative reference frequency reaches q (ties at
    plateaus break toward the lower level). Matching against the source's own
    CDF is the identity. Unmasked pixels pass through untouched.
    """
    _check_pair(src, src_mask)
    if len(ref_cdfs) != 3:
        raise DimensionMismatchError("need one reference CDF per RGB channel")
    if not src_mask.any():
        raise EmptyMaskError("source mask selects no pixels")

    out = src.copy()
    for ch in range(3):
        src_cdf = cumulative_histogram(src, src_mask, ch)
        # LUT over all 256 levels: level -> smallest ref level with C_r >= C_s(level)
        lut = np.searchsorted(ref_cdfs[ch].bins, src_cdf.bins, side="left")
        lut = np.minimum(lut, HISTOGRAM_BINS - 1).astype(np.uint8)
        channel = out[..., ch]
        channel[src_mask] = lut[src[..., ch][src_mask]]
    return out


def _farthest_point_seeds(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Seed centroids: random first pick, then repeated farthest remaining point."""
    first = int(rng.integers(points.shape[0]))
    chosen = [first]
    d2 = np.sum((points - points[first]) ** 2, axis=1)
    for _ in range(1, k):
        nxt = int(np.argmax(d2))
        chosen.append(nxt)
        d2 = np.minimum(d2, np.sum((points - points[nxt]) ** 2, axis=1))
    return points[chosen].copy()


def _lloyd(points: np.ndarray, k: int, rng: np.random.Generator):
    """Standard Lloyd iterations; returns (centroids, assignment, inertia history)."""
    centroids = _farthest_point_seeds(np.unique(points, axis=0), k, rng)
    k = centroids.shape[0]
    history = []
    assign = np.zeros(points.shape[0], dtype=np.intp)
    for _ in range(_KMEANS_MAX_ITER):
        d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = np.argmin(d2, axis=1)
        history.append(float(d2[np.arange(points.shape[0]), assign].sum()))
        moved = 0.0
        for j in range(k):
            members = points[assign == j]
            if members.size == 0:
                continue  # keep the stale centroid; it is dropped if still empty at the end
            new_c = members.mean(axis=0)
            moved = max(moved, float(np.linalg.norm(new_c - centroids[j])))
            centroids[j] = new_c
        if moved < _KMEANS_TOL:
            break
    return centroids, assign, history


def kmeans_palette(
    pixels: Sequence[Rgb8] | np.ndarray, k: int, seed: int
) -> list[tuple[Rgb8, int]]:
    """Dominant colors by K-means in linear RGB, largest cluster first.

    Deterministic for a fixed seed (farthest-point seeding from one seeded
    random pick). If the input has fewer distinct colors than k, that many
    clusters come back. Counts sum to the number of input pixels.
    """
    arr = np.asarray(pixels, dtype=np.uint8).reshape(-1, 3)
    if arr.size == 0:
        raise EmptyInputError("no pixels to cluster")
    n_distinct = np.unique(arr, axis=0).shape[0]
    if k < 1:
        raise EmptyInputError("k must be >= 1")
    k = min(k, n_distinct)

    # linear RGB scaled to [0, 255] so the movement tolerance reads in levels
    points = srgb_decode(arr) * 255.0
    centroids, assign, _ = _lloyd(points, k, np.random.default_rng(seed))

    palette = []
    for j in range(centroids.shape[0]):
        count = int(np.sum(assign == j))
        if count == 0:
            continue
        rgb = srgb_encode(centroids[j] / 255.0)
        palette.append(((int(rgb[0]), int(rgb[1]), int(rgb[2])), count))
    palette.sort(key=lambda item: (-item[1], item[0]))
    return palette


def remove_background(img: np.ndarray, near_white_threshold: int = 240) -> np.ndarray:
    """Mask out the near-white background connected to the image border.

    A pixel is near-white when all channels reach the threshold. Near-white
    regions 4-connected to the border are background; interior near-white
    islands stay selected. Returns the foreground mask.
    """
    if img.ndim != 3 or img.shape[2] != 3:
        raise DimensionMismatchError(f"expected (H, W, 3) image, got {img.shape}")
    near_white = np.all(img >= near_white_threshold, axis=2)
    labels, _ = ndimage.label(near_white)  # default structure = 4-connectivity
    border = np.concatenate(
        [labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]]
    )
    border_ids = np.unique(border[border != 0])
    background = np.isin(labels, border_ids)
    return ~background


def mean_color(img: np.ndarray, mask: np.ndarray) -> Rgb8:
    """Per-channel arithmetic mean of the masked pixels, rounded half-up."""
    _check_pair(img, mask)
    selected = img[mask]
    if selected.size == 0:
        raise EmptyMaskError("cannot average an empty selection")
    means = np.floor(selected.mean(axis=0) + 0.5).astype(int)
    return (int(means[0]), int(means[1]), int(means[2]))


# ---------------------------------------------------------------------------
# PNG I/O: 8-bit RGB images; masks as single-channel PNG (0 = out, 255 = in)

def load_image(path: str | Path) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def save_image(img: np.ndarray, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.asarray(img, dtype=np.uint8), mode="RGB").save(path, format="PNG")


def load_mask(path: str | Path) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("L")) >= 128


def save_mask(mask: np.ndarray, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    data = np.where(mask, 255, 0).astype(np.uint8)
    Image.fromarray(data, mode="L").save(path, format="PNG")


def decode_png(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def decode_png_mask(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as im:
        return np.asarray(im.convert("L")) >= 128


def encode_png(img: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(np.asarray(img, dtype=np.uint8), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()
