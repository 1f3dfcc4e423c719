"""Procedural synthetic face assets: albedo, normal map, skin/neck masks.

The generator stands in for a 3D renderer. Geometry is a frontal ellipsoid
head over a cylindrical neck band; identity variation is limited to seeded
albedo noise, so every face of a given canvas size shares the same masks and
normals. Skin tone is a single blend coefficient t in [0, 1] interpolating
between a dark and a light base color in linear RGB.

Coordinate convention (shared with lumishade.relight): +x is the subject's
right (toward the image's left edge), +y is up, +z points out of the image
toward the camera.
"""

from __future__ import annotations

import functools
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from lumishade.color import srgb_decode, srgb_encode
from lumishade.errors import OutOfRangeError, SizeTooSmallError
from lumishade.imageops import load_image, load_mask, save_image, save_mask
from lumishade.types import Rgb8

DARK_BASE: Rgb8 = (54, 31, 22)
LIGHT_BASE: Rgb8 = (241, 194, 167)

MIN_SIZE = 64
NOISE_AMPLITUDE = 4  # albedo noise, 8-bit levels, uniform and zero-mean
BACKGROUND_GRAY = 128

# head ellipsoid, fractions of canvas size
_CENTER = (0.50, 0.46)
_HALF_AXES = (0.36, 0.45, 0.42)  # x, y, z
_NECK_HALF_WIDTH = 0.14


@dataclass(frozen=True)
class ToneSpec:
    """Skin tone blend: t=0 darkest base, t=1 lightest base."""

    t: float
    label: str

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise OutOfRangeError(f"tone blend t={self.t} outside [0, 1]")


def tone_spec(t: float) -> ToneSpec:
    return ToneSpec(t=t, label=f"t{int(round(t * 100)):03d}")


# the four-tone recipe (two light, two dark) used for classifier corpora
TONES_FOUR = (tone_spec(0.1), tone_spec(0.3), tone_spec(0.7), tone_spec(0.9))
# six tones spanning the Monk scale for the skin-tone variance study
TONES_SIX = (tone_spec(0.05), tone_spec(0.2), tone_spec(0.4), tone_spec(0.6), tone_spec(0.8), tone_spec(0.95))


@dataclass
class FaceAsset:
    """Flat-lit albedo plus per-pixel camera-space normals and region masks."""

    albedo: np.ndarray  # (H, W, 3) uint8
    normals: np.ndarray  # (H, W, 3) float32, unit length everywhere
    skin_mask: np.ndarray  # (H, W) bool
    neck_mask: np.ndarray  # (H, W) bool
    tone_id: str
    seed: int

    @property
    def size(self) -> int:
        return self.albedo.shape[0]


def blend_tone(t: float) -> Rgb8:
    """Interpolate the base skin colors in linear RGB and re-encode to sRGB."""
    if not 0.0 <= t <= 1.0:
        raise OutOfRangeError(f"tone blend t={t} outside [0, 1]")
    dark = srgb_decode(np.array(DARK_BASE, dtype=np.uint8))
    light = srgb_decode(np.array(LIGHT_BASE, dtype=np.uint8))
    mixed = srgb_encode((1.0 - t) * dark + t * light)
    return (int(mixed[0]), int(mixed[1]), int(mixed[2]))


@functools.lru_cache(maxsize=8)
def face_geometry(size: int):
    """Normals and masks for a given canvas size (shared by every identity).

    Returns (normals float32 (H, W, 3), skin_mask, neck_mask). Background
    normals are (0, 0, 1) so a shader can treat the whole canvas uniformly.
    """
    if size < MIN_SIZE:
        raise SizeTooSmallError(f"size {size} below minimum {MIN_SIZE}")

    cx = _CENTER[0] * size
    # snap the vertical center onto a pixel center; for odd sizes cx is one
    # too, which makes the frontal normal exactly (0, 0, 1) at the center
    cy = np.floor(_CENTER[1] * size) + 0.5
    rx, ry, rz = (a * size for a in _HALF_AXES)

    ys, xs = np.mgrid[0:size, 0:size]
    px = xs + 0.5  # pixel centers
    py = ys + 0.5
    # +x toward image left, +y up (rows grow downward)
    dx = (cx - px) / rx
    dy = (cy - py) / ry
    r2 = dx * dx + dy * dy
    skin = r2 <= 1.0

    # ellipsoid surface gradient, normalized
    z = rz * np.sqrt(np.clip(1.0 - r2, 0.0, None))
    normals = np.zeros((size, size, 3), dtype=np.float64)
    normals[..., 2] = 1.0
    gx = (cx - px) / (rx * rx)
    gy = (cy - py) / (ry * ry)
    gz = z / (rz * rz)
    norm = np.sqrt(gx * gx + gy * gy + gz * gz)
    for i, g in enumerate((gx, gy, gz)):
        normals[..., i] = np.where(skin, g / np.maximum(norm, 1e-12), normals[..., i])

    # neck: vertical band below the chin with cylindrical (vertical-axis) normals
    neck_r = _NECK_HALF_WIDTH * size
    band_top = cy + ry
    ndx = (cx - px) / neck_r
    neck = (py >= band_top) & (np.abs(ndx) <= 1.0) & ~skin
    nz = np.sqrt(np.clip(1.0 - ndx * ndx, 0.0, None))
    nlen = np.maximum(np.sqrt(ndx * ndx + nz * nz), 1e-12)
    normals[..., 0] = np.where(neck, ndx / nlen, normals[..., 0])
    normals[..., 1] = np.where(neck, 0.0, normals[..., 1])
    normals[..., 2] = np.where(neck, nz / nlen, normals[..., 2])

    return normals.astype(np.float32), skin, neck


def generate_face(seed: int, tone: ToneSpec, size: int) -> FaceAsset:
    """Deterministic face asset for (seed, tone, size)."""
    normals, skin, neck = face_geometry(size)

    base = np.array(blend_tone(tone.t), dtype=np.int16)
    rng = np.random.default_rng(seed)
    noise = rng.integers(-NOISE_AMPLITUDE, NOISE_AMPLITUDE + 1, size=(size, size))

    albedo = np.full((size, size, 3), BACKGROUND_GRAY, dtype=np.uint8)
    skin_area = skin | neck
    noisy = np.clip(base[None, None, :] + noise[:, :, None], 0, 255).astype(np.uint8)
    albedo[skin_area] = noisy[skin_area]

    return FaceAsset(
        albedo=albedo,
        normals=normals.copy(),
        skin_mask=skin.copy(),
        neck_mask=neck.copy(),
        tone_id=tone.label,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# persistence: a directory per asset

def _write_normals(normals: np.ndarray, path: Path) -> None:
    h, w = normals.shape[:2]
    with open(path, "wb") as fh:
        fh.write(struct.pack("<ii", w, h))
        fh.write(normals.astype("<f4").tobytes())


def _read_normals(path: Path) -> np.ndarray:
    with open(path, "rb") as fh:
        w, h = struct.unpack("<ii", fh.read(8))
        data = np.frombuffer(fh.read(), dtype="<f4")
    return data.reshape(h, w, 3).astype(np.float32)


def save_asset(asset: FaceAsset, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_image(asset.albedo, out / "albedo.png")
    _write_normals(asset.normals, out / "normals.bin")
    save_mask(asset.skin_mask, out / "skin_mask.png")
    save_mask(asset.neck_mask, out / "neck_mask.png")
    meta = {"seed": asset.seed, "tone_id": asset.tone_id, "size": asset.size}
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def load_asset(in_dir: str | Path) -> FaceAsset:
    src = Path(in_dir)
    meta = json.loads((src / "meta.json").read_text())
    return FaceAsset(
        albedo=load_image(src / "albedo.png"),
        normals=_read_normals(src / "normals.bin"),
        skin_mask=load_mask(src / "skin_mask.png"),
        neck_mask=load_mask(src / "neck_mask.png"),
        tone_id=meta["tone_id"],
        seed=meta["seed"],
    )
