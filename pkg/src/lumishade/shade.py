"""Foundation-shade catalog, skin-tone estimation and recommendation reports.

The estimated skin tone is the mean color of the face and front-neck pixels
exactly as they appear in the photo; it is a property of the photo, not of
the person, which is why gating on illumination quality matters. Shades are
compared with CIEDE2000 (below 2 reads as a near-exact match, 2-5 similar).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from lumishade.color import ciede2000_matrix, srgb_to_lab
from lumishade.errors import (
    EmptyCatalogError,
    EmptyGroupError,
    EmptyMaskError,
    NoForegroundError,
    NoInRangePixelsError,
)
from lumishade.imageops import kmeans_palette, mean_color, remove_background
from lumishade.types import Label, LabColor, Rgb8

# product swatch color gate: brown hue band in HSV
BROWN_HUE_RANGE = (10.0, 50.0)  # degrees
BROWN_SAT_MIN = 0.15
BROWN_VAL_RANGE = (0.10, 0.95)

_KMEANS_CLUSTERS = 5
_KMEANS_SEED = 20_000_000

DEFAULT_THRESHOLDS = (2.0, 5.0)


@dataclass(frozen=True)
class ProductShade:
    product_id: str
    shade_id: str
    name: str
    color: Rgb8
    lab: LabColor = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "lab", srgb_to_lab(self.color))


@dataclass
class Catalog:
    shades: list[ProductShade]

    def __post_init__(self):
        seen = set()
        for s in self.shades:
            key = (s.product_id, s.shade_id)
            if key in seen:
                raise EmptyCatalogError(f"duplicate shade {key}")
            seen.add(key)

    @property
    def product_ids(self) -> list[str]:
        out = []
        for s in self.shades:
            if s.product_id not in out:
                out.append(s.product_id)
        return out

    def for_product(self, product_id: str) -> "Catalog":
        subset = [s for s in self.shades if s.product_id == product_id]
        return Catalog(shades=subset)

    def lab_matrix(self) -> np.ndarray:
        return np.array([s.lab for s in self.shades], dtype=np.float64)


@dataclass(frozen=True)
class SkinEstimate:
    color: Rgb8
    lab: LabColor
    source_id: str = ""
    illumination: Label | None = None


@dataclass(frozen=True)
class Recommendation:
    """Shades ranked by ascending distance; ties break on (product, shade) id."""

    entries: list[tuple[ProductShade, float]]
    threshold: float

    def within_threshold(self) -> list[tuple[ProductShade, float]]:
        return [(s, d) for s, d in self.entries if d < self.threshold]


def load_catalog(path: str | Path) -> Catalog:
    """Read a catalog CSV with header product_id,shade_id,name,r,g,b."""
    shades = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            color = (int(row["r"]), int(row["g"]), int(row["b"]))
            for ch in color:
                if not 0 <= ch <= 255:
                    raise EmptyCatalogError(f"channel out of range in {row}")
            shades.append(
                ProductShade(
                    product_id=row["product_id"],
                    shade_id=row["shade_id"],
                    name=row["name"],
                    color=color,
                )
            )
    if not shades:
        raise EmptyCatalogError(f"no shades in {path}")
    return Catalog(shades=shades)


def save_catalog(catalog: Catalog, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["product_id", "shade_id", "name", "r", "g", "b"])
        for s in catalog.shades:
            writer.writerow([s.product_id, s.shade_id, s.name, *s.color])


def _rgb_to_hsv(img: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized RGB -> (hue degrees, saturation, value), all float64."""
    rgb = img.astype(np.float64) / 255.0
    maxc = rgb.max(axis=-1)
    minc = rgb.min(axis=-1)
    delta = maxc - minc
    sat = np.where(maxc > 0, delta / np.maximum(maxc, 1e-12), 0.0)

    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    safe = np.maximum(delta, 1e-12)
    hue = np.zeros_like(maxc)
    hue = np.where(maxc == r, (g - b) / safe % 6.0, hue)
    hue = np.where(maxc == g, (b - r) / safe + 2.0, hue)
    hue = np.where(maxc == b, (r - g) / safe + 4.0, hue)
    hue = np.where(delta == 0, 0.0, hue) * 60.0
    return hue, sat, maxc


def extract_product_color(img: np.ndarray) -> Rgb8:
    """Dominant brown of a product swatch photo.

    Pipeline: drop the border-connected near-white background, keep pixels in
    the fixed brown HSV range, K-means the survivors and take the largest
    cluster centroid.
    """
    foreground = remove_background(img)
    if not foreground.any():
        raise NoForegroundError("image is entirely background")

    hue, sat, val = _rgb_to_hsv(img)
    in_range = (
        (hue >= BROWN_HUE_RANGE[0])
        & (hue <= BROWN_HUE_RANGE[1])
        & (sat >= BROWN_SAT_MIN)
        & (val >= BROWN_VAL_RANGE[0])
        & (val <= BROWN_VAL_RANGE[1])
    )
    keep = foreground & in_range
    if not keep.any():
        raise NoInRangePixelsError("no pixels in the brown color range")

    palette = kmeans_palette(img[keep], _KMEANS_CLUSTERS, _KMEANS_SEED)
    return palette[0][0]


def estimate_skin_tone(
    img: np.ndarray,
    skin_mask: np.ndarray,
    neck_mask: np.ndarray,
    source_id: str = "",
    illumination: Label | None = None,
) -> SkinEstimate:
    """Mean color over the union of face and front-neck regions."""
    union = skin_mask | neck_mask
    if not union.any():
        raise EmptyMaskError("face and neck masks are both empty")
    color = mean_color(img, union)
    return SkinEstimate(
        color=color, lab=srgb_to_lab(color), source_id=source_id, illumination=illumination
    )


def recommend(
    catalog: Catalog, estimate: SkinEstimate, threshold: float = 5.0
) -> Recommendation:
    """Rank every shade by CIEDE2000 distance to the estimated skin tone."""
    if not catalog.shades:
        raise EmptyCatalogError("catalog is empty")
    distances = ciede2000_matrix(
        np.array([estimate.lab], dtype=np.float64), catalog.lab_matrix()
    )[0]
    order = sorted(
        range(len(catalog.shades)),
        key=lambda i: (distances[i], catalog.shades[i].product_id, catalog.shades[i].shade_id),
    )
    entries = [(catalog.shades[i], float(distances[i])) for i in order]
    return Recommendation(entries=entries, threshold=threshold)


def threshold_report(
    catalog: Catalog,
    groups: Mapping[str, Sequence[SkinEstimate]],
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
) -> dict:
    """Per product and group: how many shades fall within each distance threshold.

    Union semantics: a shade counts if it is within threshold of ANY estimate
    in the group, mirroring how a set of photos expands the matched-shade
    set. Also reports the good/bad overlap when both groups are present.
    """
    report: dict = {"thresholds": list(thresholds), "products": {}}
    shade_sets: dict[str, dict[float, dict[str, set]]] = {}

    for product_id in catalog.product_ids:
        sub = catalog.for_product(product_id)
        labs = sub.lab_matrix()
        per_product = {
            "total_shades": len(sub.shades),
            "groups": {},
        }
        shade_sets[product_id] = {}
        for thr in thresholds:
            shade_sets[product_id][thr] = {}
        for group_name, estimates in groups.items():
            if len(estimates) == 0:
                counts = {str(thr): 0 for thr in thresholds}
                per_product["groups"][group_name] = counts
                for thr in thresholds:
                    shade_sets[product_id][thr][group_name] = set()
                continue
            est_labs = np.array([e.lab for e in estimates], dtype=np.float64)
            dmat = ciede2000_matrix(est_labs, labs)
            min_d = dmat.min(axis=0)
            counts = {}
            for thr in thresholds:
                matched = {
                    sub.shades[i].shade_id for i in range(len(sub.shades)) if min_d[i] < thr
                }
                shade_sets[product_id][thr][group_name] = matched
                counts[str(thr)] = len(matched)
            per_product["groups"][group_name] = counts
        if "good" in groups and "bad" in groups:
            per_product["overlap_good_bad"] = {
                str(thr): len(
                    shade_sets[product_id][thr].get("good", set())
                    & shade_sets[product_id][thr].get("bad", set())
                )
                for thr in thresholds
            }
        report["products"][product_id] = per_product
    return report


def variance_report(
    estimates: Sequence[SkinEstimate],
    best: SkinEstimate,
    groups: Sequence[str] = ("good", "bad", "all"),
) -> dict:
    """Distance of each estimate to the best-illuminated estimate, per group.

    The best estimate itself is excluded from "the rest". Mean and population
    standard deviation of the CIEDE2000 distances are reported per group.
    """
    rest = [e for e in estimates if e is not best]
    if not rest:
        raise EmptyGroupError("no estimates besides the best one")
    labs = np.array([e.lab for e in rest], dtype=np.float64)
    dists = ciede2000_matrix(labs, np.array([best.lab], dtype=np.float64))[:, 0]

    report = {}
    for group in groups:
        if group == "all":
            sel = np.ones(len(rest), dtype=bool)
        else:
            wanted = Label.parse(group)
            sel = np.array([e.illumination is wanted for e in rest])
        if not sel.any():
            raise EmptyGroupError(f"group {group!r} has no estimates")
        values = dists[sel]
        report[group] = {
            "mean": float(values.mean()),
            "std": float(values.std()),
            "count": int(sel.sum()),
        }
    return report
