"""Spherical-harmonic Lambertian relighting and labeled light patterns.

Lighting is grayscale and represented by 9 real SH coefficients (bands
l = 0..2, coefficient order Y00, Y1-1, Y10, Y11, Y2-2, Y2-1, Y20, Y21, Y22).
A directional light projects through the clamped-cosine kernel with the
standard band gains A0 = pi, A1 = 2*pi/3, A2 = pi/4; shading of a surface
point is the dot product of the coefficients with the basis at its normal.
The 9-term expansion dips slightly negative (about -4% of the light
intensity) opposite a light; shading is clamped to [0, 1] before it
multiplies albedo.

Light directions use the face-attached frame from lumishade.facegen:
+x = subject's right (image left), +y = up, +z = toward camera. Azimuth
rotates from +z toward +x; elevation raises toward +y.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from lumishade.backends import kernels
from lumishade.color import srgb_decode, srgb_encode
from lumishade.errors import EmptyMaskError, NonUnitDirectionError
from lumishade.facegen import FaceAsset, generate_face, tone_spec
from lumishade.types import Label

SH_Y00 = 0.28209479177387814
BAND_GAINS = np.array([math.pi] + [2.0 * math.pi / 3.0] * 3 + [math.pi / 4.0] * 5)

# pattern-grid constants: azimuth/elevation in degrees
GRID_AZIMUTHS = (-90.0, -45.0, 0.0, 45.0, 90.0)
GRID_ELEVATIONS = (-45.0, 0.0, 45.0, 60.0)
GRID_INTENSITIES = (0.3, 0.7, 1.1)
GRID_AMBIENTS = (0.05, 0.25)

CALIBRATION_SEED = 0
CALIBRATION_SIZE = 128


@dataclass(frozen=True)
class SpotLight:
    """Directional light: unit vector from the face toward the light."""

    direction: tuple[float, float, float]
    intensity: float

    def __post_init__(self):
        norm = math.sqrt(sum(c * c for c in self.direction))
        if abs(norm - 1.0) > 1e-6:
            raise NonUnitDirectionError(f"|direction| = {norm:.8f}, expected 1")
        if self.intensity < 0:
            raise NonUnitDirectionError("intensity must be >= 0")


@dataclass(frozen=True)
class ShCoefficients:
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != 9:
            raise ValueError("expected 9 SH coefficients")

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.float64)


@dataclass(frozen=True)
class LightPattern:
    id: str
    lights: tuple[SpotLight, ...]
    ambient: float
    sh: ShCoefficients
    label: Label


@dataclass(frozen=True)
class LabelThresholds:
    """Quality gates on the shading-factor field over the skin mask."""

    mean_range: tuple[float, float] = (0.45, 0.95)
    shadow_level: float = 0.25
    shadow_fraction: float = 0.05
    overexposure_fraction: float = 0.05
    asymmetry_limit: float = 0.25


DEFAULT_THRESHOLDS = LabelThresholds()


def light_direction(azimuth_deg: float, elevation_deg: float) -> tuple[float, float, float]:
    """Unit direction for grid coordinates (azimuth from +z toward +x)."""
    az = math.radians(azimuth_deg)
    el = math.radians(elevation_deg)
    return (math.sin(az) * math.cos(el), math.sin(el), math.cos(az) * math.cos(el))


def sh_from_lights(lights: Sequence[SpotLight], ambient: float) -> ShCoefficients:
    """Project spot lights plus an isotropic ambient term onto 9 SH coefficients.

    Additive in the lights; ambient contributes only to the l=0 coefficient.
    """
    coeffs = np.zeros(9)
    coeffs[0] = ambient * BAND_GAINS[0] * SH_Y00
    for light in lights:
        direction = np.asarray(light.direction, dtype=np.float64)
        norm = float(np.linalg.norm(direction))
        if abs(norm - 1.0) > 1e-6:
            raise NonUnitDirectionError(f"|direction| = {norm:.8f}, expected 1")
        coeffs += light.intensity * BAND_GAINS * kernels.sh_basis(direction)
    return ShCoefficients(values=tuple(float(c) for c in coeffs))


def identity_sh() -> ShCoefficients:
    """Lighting whose shading factor is exactly 1 for every normal."""
    return ShCoefficients(values=(1.0 / SH_Y00,) + (0.0,) * 8)


def shading_field(normals: np.ndarray, sh: ShCoefficients) -> np.ndarray:
    """Raw per-pixel shading factors (may exceed [0, 1]; not yet clamped)."""
    return kernels.sh_shade(normals, sh.as_array())


def shade(face: FaceAsset, sh: ShCoefficients) -> np.ndarray:
    """Render the asset under the given lighting; returns an sRGB uint8 image.

    Shading multiplies albedo in linear RGB after clamping to [0, 1];
    background normals are (0, 0, 1) so the canvas shades uniformly.
    """
    s = np.clip(shading_field(face.normals, sh), 0.0, 1.0)
    linear = srgb_decode(face.albedo) * s[..., None]
    return srgb_encode(linear)


@dataclass(frozen=True)
class ShadingStats:
    mean: float
    shadow_fraction: float
    overexposure_fraction: float
    asymmetry: float


def shading_stats(
    face: FaceAsset, sh: ShCoefficients, thresholds: LabelThresholds = DEFAULT_THRESHOLDS
) -> ShadingStats:
    """The four auto-label statistics over the skin mask.

    Mean/shadow/asymmetry use the [0, 1]-clamped field; overexposure counts
    pre-clamp factors >= 1. The left/right split is at the canvas midline.
    """
    mask = face.skin_mask
    if not mask.any():
        raise EmptyMaskError("skin mask selects no pixels")
    basis = kernels.sh_basis(face.normals.astype(np.float64)[mask])
    left = np.where(mask)[1] < mask.shape[1] // 2
    raw = basis @ sh.as_array()
    clamped = np.clip(raw, 0.0, 1.0)
    mean = float(clamped.mean())
    shadow = float((clamped < thresholds.shadow_level).mean())
    over = float((raw >= 1.0).mean())
    asym = abs(float(clamped[left].mean()) - float(clamped[~left].mean()))
    asym /= max(mean, 1e-9)
    return ShadingStats(mean, shadow, over, asym)


def auto_label(
    face: FaceAsset, sh: ShCoefficients, thresholds: LabelThresholds = DEFAULT_THRESHOLDS
) -> Label:
    """Label lighting quality from the shading field alone.

    The statistics depend only on geometry, never on albedo, so for a fixed
    canvas size the verdict is identical across all skin tones. That keeps
    ground-truth labels free of the skin-tone/illumination confound.
    """
    stats = shading_stats(face, sh, thresholds)
    lo, hi = thresholds.mean_range
    good = (
        lo <= stats.mean <= hi
        and stats.shadow_fraction < thresholds.shadow_fraction
        and stats.overexposure_fraction < thresholds.overexposure_fraction
        and stats.asymmetry < thresholds.asymmetry_limit
    )
    return Label.GOOD if good else Label.BAD


@functools.lru_cache(maxsize=1)
def calibration_face() -> FaceAsset:
    """The fixed face used to label light patterns (tone is irrelevant)."""
    return generate_face(CALIBRATION_SEED, tone_spec(0.5), CALIBRATION_SIZE)


def _fast_labeler(face: FaceAsset, thresholds: LabelThresholds = DEFAULT_THRESHOLDS):
    """Precompute the masked SH basis once so many patterns label quickly.

    Matches auto_label exactly; pattern_grid labels thousands of candidate
    configurations, so the per-call full-field evaluation would dominate.
    """
    mask = face.skin_mask
    basis = kernels.sh_basis(face.normals.astype(np.float64)[mask])
    cols = np.where(mask)[1]
    left = cols < mask.shape[1] // 2

    def label_of(sh: ShCoefficients) -> Label:
        raw = basis @ sh.as_array()
        clamped = np.clip(raw, 0.0, 1.0)
        mean = float(clamped.mean())
        lo, hi = thresholds.mean_range
        if not lo <= mean <= hi:
            return Label.BAD
        if float((clamped < thresholds.shadow_level).mean()) >= thresholds.shadow_fraction:
            return Label.BAD
        if float((raw >= 1.0).mean()) >= thresholds.overexposure_fraction:
            return Label.BAD
        asym = abs(float(clamped[left].mean()) - float(clamped[~left].mean()))
        if asym / max(mean, 1e-9) >= thresholds.asymmetry_limit:
            return Label.BAD
        return Label.GOOD

    return label_of


def _enumerate_grid():
    """All two-light configurations over the fixed direction/intensity grid.

    Configurations are canonical: the two (direction, intensity) slots are
    unordered, so each physical setup appears exactly once.
    """
    directions = [
        (az, el) for az in GRID_AZIMUTHS for el in GRID_ELEVATIONS
    ]
    configs = []
    for i, j in itertools.combinations_with_replacement(range(len(directions)), 2):
        for int_a, int_b in itertools.product(GRID_INTENSITIES, repeat=2):
            if i == j and int_a > int_b:
                continue
            for ambient in GRID_AMBIENTS:
                configs.append(((directions[i], int_a), (directions[j], int_b), ambient))
    return configs


def pattern_grid(
    n_good_target: int | None = None, seed: int = 0, count: int = 200
) -> list[LightPattern]:
    """Sample `count` labeled two-light patterns from the full grid.

    Labels come from auto_label on the calibration face. Sampling is
    stratified: n_good_target picks how many Good patterns to include
    (capped by availability, at least one of each label); None keeps the
    grid's natural proportion. Deterministic for a fixed seed.
    """
    configs = _enumerate_grid()
    entries = []
    face = calibration_face()
    label_of = _fast_labeler(face)
    for (dir_a, int_a), (dir_b, int_b), ambient in configs:
        lights = (
            SpotLight(light_direction(*dir_a), int_a),
            SpotLight(light_direction(*dir_b), int_b),
        )
        sh = sh_from_lights(lights, ambient)
        entries.append((lights, ambient, sh, label_of(sh)))

    good_pool = [e for e in entries if e[3] is Label.GOOD]
    bad_pool = [e for e in entries if e[3] is Label.BAD]
    count = min(count, len(entries))
    if n_good_target is None:
        n_good = round(count * len(good_pool) / len(entries))
    else:
        n_good = n_good_target
    n_good = max(1, min(n_good, len(good_pool), count - 1))
    n_good = max(n_good, count - len(bad_pool))

    rng = np.random.default_rng(seed)
    chosen = [good_pool[i] for i in rng.choice(len(good_pool), n_good, replace=False)]
    chosen += [bad_pool[i] for i in rng.choice(len(bad_pool), count - n_good, replace=False)]
    # interleave labels so any contiguous slice of the result stays mixed
    chosen = [chosen[i] for i in rng.permutation(len(chosen))]

    patterns = []
    for idx, (lights, ambient, sh, label) in enumerate(chosen):
        patterns.append(
            LightPattern(id=f"p{idx:03d}", lights=lights, ambient=ambient, sh=sh, label=label)
        )
    return patterns


# ---------------------------------------------------------------------------
# JSON serialization

def pattern_to_dict(p: LightPattern) -> dict:
    return {
        "id": p.id,
        "lights": [
            {"dir": list(l.direction), "intensity": l.intensity} for l in p.lights
        ],
        "ambient": p.ambient,
        "sh": list(p.sh.values),
        "label": p.label.value,
    }


def pattern_from_dict(d: dict) -> LightPattern:
    return LightPattern(
        id=d["id"],
        lights=tuple(
            SpotLight(tuple(l["dir"]), l["intensity"]) for l in d["lights"]
        ),
        ambient=d["ambient"],
        sh=ShCoefficients(values=tuple(d["sh"])),
        label=Label.parse(d["label"]),
    )


def save_patterns(patterns: Sequence[LightPattern], path: str | Path) -> None:
    data = [pattern_to_dict(p) for p in patterns]
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def load_patterns(path: str | Path) -> list[LightPattern]:
    data = json.loads(Path(path).read_text())
    return [pattern_from_dict(d) for d in data]
