"""Illumination-quality classifier.

A linear model over 27 handcrafted shading features: a 5x5 grid of mean
luminance over the face crop (25 values), the global luminance standard
deviation, and the signed left-right mean-luminance asymmetry. Luminance is
CIELAB L of each pixel; all features are scaled by 1/100. Training is plain
mini-batch SGD on a class-weighted cross-entropy, with extra weight on the
Good class to counter the Bad-heavy pattern distribution.

The analytic gradient is deliberately simple enough to verify against
central finite differences (see tests).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from lumishade import dataset as dataset_mod
from lumishade.color import srgb_to_lab_array
from lumishade.errors import EmptyMaskError, SingleClassDataError
from lumishade.imageops import load_image
from lumishade.types import Label

GRID_CELLS = 5
FEATURE_COUNT = GRID_CELLS * GRID_CELLS + 2
MODEL_VERSION = 1

_CROP_DILATION = 0.10  # bounding-box growth around the skin mask
_MIN_MASK_PIXELS = 25
_STD_FLOOR = 1e-6
_LOG_CLAMP = 1e-12


@dataclass
class TrainConfig:
    epochs: int = 20
    batch_size: int = 64
    learning_rate: float = 0.2
    good_class_weight: float | None = None  # None -> inverse class frequency
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "good_class_weight": self.good_class_weight,
            "seed": self.seed,
        }


@dataclass
class ClassifierModel:
    weights: np.ndarray  # (27,)
    bias: float
    feature_mean: np.ndarray  # (27,) standardization constants
    feature_std: np.ndarray  # (27,)
    train_config: dict = field(default_factory=dict)
    version: int = MODEL_VERSION
    epoch_losses: list = field(default_factory=list, repr=False, compare=False)

    def normalize(self, features: np.ndarray) -> np.ndarray:
        return (np.asarray(features, dtype=np.float64) - self.feature_mean) / self.feature_std

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        """P(Good) for one feature vector or a batch of them."""
        x = self.normalize(features)
        z = x @ self.weights + self.bias
        return _sigmoid(z)

    def fingerprint(self) -> str:
        digest = hashlib.sha256(self.to_json().encode()).hexdigest()
        return digest[:12]

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "weights": [float(w) for w in self.weights],
            "bias": float(self.bias),
            "normalization": {
                "mean": [float(v) for v in self.feature_mean],
                "std": [float(v) for v in self.feature_std],
            },
            "train_config": self.train_config,
        }
        return json.dumps(payload, indent=2) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> "ClassifierModel":
        d = json.loads(Path(path).read_text())
        return cls(
            weights=np.array(d["weights"], dtype=np.float64),
            bias=float(d["bias"]),
            feature_mean=np.array(d["normalization"]["mean"], dtype=np.float64),
            feature_std=np.array(d["normalization"]["std"], dtype=np.float64),
            train_config=d.get("train_config", {}),
            version=d.get("version", MODEL_VERSION),
        )


@dataclass(frozen=True)
class MetricsReport:
    """Confusion counts and derived rates, Good as the positive class."""

    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def accuracy(self) -> float:
        total = self.tp + self.fp + self.tn + self.fn
        return (self.tp + self.tn) / total if total else 0.0

    @property
    def sensitivity(self) -> float:
        pos = self.tp + self.fn
        return self.tp / pos if pos else 0.0

    @property
    def specificity(self) -> float:
        neg = self.tn + self.fp
        return self.tn / neg if neg else 0.0

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "sensitivity": self.sensitivity,
            "specificity": self.specificity,
            "confusion": {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn},
        }


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # clamp keeps exp() in range; saturation error is ~1e-16, far below the
    # 1e-12 log clamp used by the loss
    z = np.clip(np.asarray(z, dtype=np.float64), -35.0, 35.0)
    return 1.0 / (1.0 + np.exp(-z))


def _crop_bounds(mask: np.ndarray) -> tuple[int, int, int, int]:
    ys, xs = np.where(mask)
    y0, y1 = int(ys.min()), int(ys.max())
    x0, x1 = int(xs.min()), int(xs.max())
    dy = int(round((y1 - y0 + 1) * _CROP_DILATION / 2))
    dx = int(round((x1 - x0 + 1) * _CROP_DILATION / 2))
    return (
        max(0, y0 - dy),
        min(mask.shape[0] - 1, y1 + dy),
        max(0, x0 - dx),
        min(mask.shape[1] - 1, x1 + dx),
    )


def extract_features(img: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """27 shading features over the dilated mask bounding box.

    Grid cells with no masked pixels take the global mean so the vector is
    always fully populated.
    """
    if mask.shape != img.shape[:2]:
        raise EmptyMaskError("mask shape does not match image")
    if int(mask.sum()) < _MIN_MASK_PIXELS:
        raise EmptyMaskError(f"mask must select at least {_MIN_MASK_PIXELS} pixels")

    y0, y1, x0, x1 = _crop_bounds(mask)
    crop = img[y0 : y1 + 1, x0 : x1 + 1]
    crop_mask = mask[y0 : y1 + 1, x0 : x1 + 1]
    lum = srgb_to_lab_array(crop)[..., 0]

    masked = lum[crop_mask]
    global_mean = float(masked.mean())

    features = np.empty(FEATURE_COUNT, dtype=np.float64)
    row_edges = np.linspace(0, crop.shape[0], GRID_CELLS + 1).astype(int)
    col_edges = np.linspace(0, crop.shape[1], GRID_CELLS + 1).astype(int)
    idx = 0
    for r in range(GRID_CELLS):
        for c in range(GRID_CELLS):
            cell_mask = crop_mask[row_edges[r] : row_edges[r + 1], col_edges[c] : col_edges[c + 1]]
            cell_lum = lum[row_edges[r] : row_edges[r + 1], col_edges[c] : col_edges[c + 1]]
            if cell_mask.any():
                features[idx] = float(cell_lum[cell_mask].mean())
            else:
                features[idx] = global_mean
            idx += 1

    features[25] = float(masked.std())
    half = crop.shape[1] // 2
    left = crop_mask.copy()
    left[:, half:] = False
    right = crop_mask.copy()
    right[:, :half] = False
    left_mean = float(lum[left].mean()) if left.any() else global_mean
    right_mean = float(lum[right].mean()) if right.any() else global_mean
    features[26] = left_mean - right_mean

    return features / 100.0


Batch = Sequence[tuple[np.ndarray, Label]]


def _batch_arrays(batch: Batch) -> tuple[np.ndarray, np.ndarray]:
    x = np.stack([np.asarray(f, dtype=np.float64) for f, _ in batch])
    y = np.array([1.0 if lbl is Label.GOOD else 0.0 for _, lbl in batch])
    return x, y


def weighted_ce_loss(model: ClassifierModel, batch: Batch) -> float:
    """Mean class-weighted cross-entropy of the model on a batch.

    Good samples weigh good_class_weight (from the model's train config,
    default 1), Bad samples weigh 1. Log arguments clamp at 1e-12.
    """
    x, y = _batch_arrays(batch)
    w = _class_weights(model, y)
    p = model.predict_proba(x)
    ll = y * np.log(np.maximum(p, _LOG_CLAMP)) + (1.0 - y) * np.log(
        np.maximum(1.0 - p, _LOG_CLAMP)
    )
    return float(np.mean(-w * ll))


def loss_gradient(model: ClassifierModel, batch: Batch) -> tuple[np.ndarray, float]:
    """Analytic gradient of weighted_ce_loss w.r.t. (weights, bias)."""
    x, y = _batch_arrays(batch)
    w = _class_weights(model, y)
    xn = model.normalize(x)
    p = _sigmoid(xn @ model.weights + model.bias)
    g = w * (p - y)
    grad_w = xn.T @ g / len(y)
    grad_b = float(g.mean())
    return grad_w, grad_b


def _class_weights(model: ClassifierModel, y: np.ndarray) -> np.ndarray:
    gcw = model.train_config.get("good_class_weight") or 1.0
    return np.where(y == 1.0, gcw, 1.0)


def train_on_features(
    x: np.ndarray, y: np.ndarray, config: TrainConfig
) -> ClassifierModel:
    """Mini-batch SGD over precomputed features. Deterministic per seed."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n_good = int(y.sum())
    n_bad = len(y) - n_good
    if n_good == 0 or n_bad == 0:
        raise SingleClassDataError("training data must contain both labels")

    gcw = config.good_class_weight
    if gcw is None:
        gcw = n_bad / n_good

    mean = x.mean(axis=0)
    std = np.maximum(x.std(axis=0), _STD_FLOOR)
    model = ClassifierModel(
        weights=np.zeros(x.shape[1]),
        bias=0.0,
        feature_mean=mean,
        feature_std=std,
        train_config={**config.to_dict(), "good_class_weight": float(gcw)},
    )

    xn = model.normalize(x)
    rng = np.random.default_rng(config.seed)
    sample_weights = np.where(y == 1.0, gcw, 1.0)
    for _ in range(config.epochs):
        order = rng.permutation(len(y))
        batch_losses = []
        for start in range(0, len(order), config.batch_size):
            sel = order[start : start + config.batch_size]
            p = _sigmoid(xn[sel] @ model.weights + model.bias)
            ll = y[sel] * np.log(np.maximum(p, _LOG_CLAMP)) + (1.0 - y[sel]) * np.log(
                np.maximum(1.0 - p, _LOG_CLAMP)
            )
            batch_losses.append(float(np.mean(-sample_weights[sel] * ll)))
            g = sample_weights[sel] * (p - y[sel])
            model.weights = model.weights - config.learning_rate * (xn[sel].T @ g) / len(sel)
            model.bias = model.bias - config.learning_rate * float(g.mean())
        model.epoch_losses.append(float(np.mean(batch_losses)))
    return model


def features_for_manifest(
    manifest: dataset_mod.DatasetManifest,
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Feature matrix, binary labels (Good=1) and tone ids for every sample."""
    skin, _ = dataset_mod.face_masks(manifest)
    xs, ys, tones = [], [], []
    for sample in manifest.samples:
        img = load_image(manifest.resolve(sample))
        xs.append(extract_features(img, skin))
        ys.append(1.0 if sample.label is Label.GOOD else 0.0)
        tones.append(sample.tone_id)
    return np.stack(xs), np.array(ys), tones


def train(manifest: dataset_mod.DatasetManifest, config: TrainConfig) -> ClassifierModel:
    """Train on a dataset manifest per the standard protocol."""
    x, y, _ = features_for_manifest(manifest)
    return train_on_features(x, y, config)


def predict(model: ClassifierModel, features: np.ndarray) -> tuple[Label, float]:
    """Label and P(Good) for one feature vector; Good on the 0.5 boundary."""
    p = float(model.predict_proba(np.asarray(features, dtype=np.float64)))
    return (Label.GOOD if p >= 0.5 else Label.BAD), p


def evaluate(model: ClassifierModel, manifest: dataset_mod.DatasetManifest) -> MetricsReport:
    """Confusion metrics of the model on a manifest (Good is positive)."""
    x, y, _ = features_for_manifest(manifest)
    pred = model.predict_proba(x) >= 0.5
    actual = y == 1.0
    return MetricsReport(
        tp=int(np.sum(pred & actual)),
        fp=int(np.sum(pred & ~actual)),
        tn=int(np.sum(~pred & ~actual)),
        fn=int(np.sum(~pred & actual)),
    )
