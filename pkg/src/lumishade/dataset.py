"""Corpus synthesis: faces x tones x patterns, manifest emission, splitting.

Every sample is a PNG render of one face identity, re-toned to one tone spec
and shaded by one light pattern. The sample label is the pattern label, so
label balance is identical for every tone by construction. Synthesis is
deterministic end to end: same seed, same bytes.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from lumishade import facegen, imageops, relight
from lumishade.errors import EmptyPatternListError, TooFewGroupsError
from lumishade.types import Label

MANIFEST_VERSION = 1
MANIFEST_NAME = "manifest.json"

_BASE_TONE_T = 0.5  # identity albedo is generated mid-tone, then re-toned
_SWATCH_SIZE = 64


@dataclass(frozen=True)
class Sample:
    image_path: str  # relative to the manifest location
    face_seed: int
    tone_id: str
    pattern_id: str
    label: Label


@dataclass
class DatasetManifest:
    samples: list[Sample]
    config: dict
    root: Path | None = None  # directory the image paths are relative to

    def counts(self) -> dict[tuple[str, str], int]:
        out: dict[tuple[str, str], int] = {}
        for s in self.samples:
            key = (s.tone_id, s.label.value)
            out[key] = out.get(key, 0) + 1
        return out

    def resolve(self, sample: Sample) -> Path:
        if self.root is None:
            return Path(sample.image_path)
        return self.root / sample.image_path

    @property
    def size(self) -> int:
        return int(self.config["size"])


def _tone_swatch(tone: facegen.ToneSpec) -> np.ndarray:
    """Reference swatch for re-toning: the tone color with generator noise.

    Seeded purely by the tone, so every face matches against the same
    reference distribution.
    """
    rng = np.random.default_rng(100_000 + int(round(tone.t * 1000)))
    base = np.array(facegen.blend_tone(tone.t), dtype=np.int16)
    noise = rng.integers(
        -facegen.NOISE_AMPLITUDE, facegen.NOISE_AMPLITUDE + 1, size=(_SWATCH_SIZE, _SWATCH_SIZE)
    )
    return np.clip(base[None, None, :] + noise[:, :, None], 0, 255).astype(np.uint8)


def retone_asset(asset: facegen.FaceAsset, tone: facegen.ToneSpec) -> facegen.FaceAsset:
    """Histogram-match the asset's skin+neck albedo onto a tone swatch."""
    region = asset.skin_mask | asset.neck_mask
    swatch = _tone_swatch(tone)
    ref_cdfs = imageops.image_cdfs(swatch, np.ones(swatch.shape[:2], dtype=bool))
    albedo = imageops.histogram_match(asset.albedo, region, ref_cdfs)
    return facegen.FaceAsset(
        albedo=albedo,
        normals=asset.normals,
        skin_mask=asset.skin_mask,
        neck_mask=asset.neck_mask,
        tone_id=tone.label,
        seed=asset.seed,
    )


def synthesize(
    n_faces: int,
    tones: Sequence[facegen.ToneSpec],
    patterns: Sequence[relight.LightPattern],
    out_dir: str | Path,
    seed: int,
    size: int = 128,
) -> DatasetManifest:
    """Generate the full corpus and write PNGs plus manifest.json.

    Per face seed a mid-tone base asset is generated once, re-toned to each
    ToneSpec by histogram matching against that tone's reference swatch, and
    then shaded by every pattern. Each tone is shaded directly (tones are
    never produced by transferring an already-lit render across tones).
    """
    if n_faces < 1 or not tones:
        raise ValueError("need at least one face and one tone")
    if not patterns:
        raise EmptyPatternListError("need at least one light pattern")

    out = Path(out_dir)
    (out / "images").mkdir(parents=True, exist_ok=True)

    samples: list[Sample] = []
    for index in range(n_faces):
        face_seed = seed * 1000 + index
        base = facegen.generate_face(face_seed, facegen.tone_spec(_BASE_TONE_T), size)
        for tone in tones:
            toned = retone_asset(base, tone)
            for pattern in patterns:
                name = f"face{face_seed}_{tone.label}_{pattern.id}.png"
                rel = f"images/{name}"
                imageops.save_image(relight.shade(toned, pattern.sh), out / rel)
                samples.append(
                    Sample(
                        image_path=rel,
                        face_seed=face_seed,
                        tone_id=tone.label,
                        pattern_id=pattern.id,
                        label=pattern.label,
                    )
                )

    manifest = DatasetManifest(
        samples=samples,
        config={
            "n_faces": n_faces,
            "tones": [{"t": t.t, "label": t.label} for t in tones],
            "n_patterns": len(patterns),
            "seed": seed,
            "size": size,
        },
        root=out,
    )
    save_manifest(manifest, out / MANIFEST_NAME)
    return manifest


def split(
    manifest: DatasetManifest, val_fraction: float = 0.2, seed: int = 0
) -> tuple[DatasetManifest, DatasetManifest]:
    """Identity-disjoint train/validation split.

    Whole face identities go to one side, so no identity leaks across the
    boundary; because every face carries the identical (tone, label) product,
    the split is stratified by construction.
    """
    seeds = sorted({s.face_seed for s in manifest.samples})
    if len(seeds) < 5:
        raise TooFewGroupsError(f"need >= 5 face identities, have {len(seeds)}")
    n_val = max(1, round(len(seeds) * val_fraction))
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(seeds))
    val_seeds = {seeds[i] for i in order[:n_val]}

    train_samples = [s for s in manifest.samples if s.face_seed not in val_seeds]
    val_samples = [s for s in manifest.samples if s.face_seed in val_seeds]
    train = DatasetManifest(train_samples, dict(manifest.config), manifest.root)
    val = DatasetManifest(val_samples, dict(manifest.config), manifest.root)
    return train, val


def face_masks(manifest: DatasetManifest) -> tuple[np.ndarray, np.ndarray]:
    """Skin and neck masks for the manifest's renders.

    Mask geometry depends only on canvas size (identity variation is albedo
    noise), so one pair serves every sample.
    """
    _, skin, neck = facegen.face_geometry(manifest.size)
    return skin, neck


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    """Write the manifest; image paths are rebased relative to its location."""
    path = Path(path)
    target_dir = path.resolve().parent

    def rebase(sample: Sample) -> str:
        resolved = manifest.resolve(sample).resolve()
        return os.path.relpath(resolved, target_dir)

    payload = {
        "version": MANIFEST_VERSION,
        "config": manifest.config,
        "samples": [
            {
                "image_path": rebase(s),
                "face_seed": s.face_seed,
                "tone_id": s.tone_id,
                "pattern_id": s.pattern_id,
                "label": s.label.value,
            }
            for s in manifest.samples
        ],
    }
    path.write_text(json.dumps(payload, indent=2) + "\n")


def load_manifest(path: str | Path) -> DatasetManifest:
    path = Path(path)
    payload = json.loads(path.read_text())
    samples = [
        Sample(
            image_path=d["image_path"],
            face_seed=d["face_seed"],
            tone_id=d["tone_id"],
            pattern_id=d["pattern_id"],
            label=Label.parse(d["label"]),
        )
        for d in payload["samples"]
    ]
    return DatasetManifest(samples=samples, config=payload["config"], root=path.parent)
