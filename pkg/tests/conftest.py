"""Shared fixtures. The desk corpus and its trained model are expensive
(half a minute), so they are built once per session and reused by the
classifier, service and acceptance tests."""

import csv
from pathlib import Path

import numpy as np
import pytest

from lumishade import dataset, facegen, illum, relight, shade

DATA_DIR = Path(__file__).parent / "data"

# the canonical desk-scale run: seeds fixed so every session trains the
# identical model
DESK_PATTERN_SEED = 7
DESK_GOOD_TARGET = 12
DESK_PATTERN_COUNT = 40
DESK_FACES = 20
DESK_SIZE = 128
DESK_SYNTH_SEED = 11
DESK_SPLIT_SEED = 1
DESK_TRAIN_SEED = 5


def load_conformance_pairs():
    pairs = []
    with open(DATA_DIR / "ciede2000_pairs.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            pairs.append(
                (
                    (float(row["l1"]), float(row["a1"]), float(row["b1"])),
                    (float(row["l2"]), float(row["a2"]), float(row["b2"])),
                    float(row["de00"]),
                )
            )
    return pairs


@pytest.fixture(scope="session")
def conformance_pairs():
    return load_conformance_pairs()


@pytest.fixture(scope="session")
def desk_patterns():
    return relight.pattern_grid(
        n_good_target=DESK_GOOD_TARGET, seed=DESK_PATTERN_SEED, count=DESK_PATTERN_COUNT
    )


TIMINGS: dict[str, float] = {}


@pytest.fixture(scope="session")
def desk_corpus(tmp_path_factory, desk_patterns):
    import time

    out = tmp_path_factory.mktemp("desk_corpus")
    start = time.perf_counter()
    manifest = dataset.synthesize(
        n_faces=DESK_FACES,
        tones=list(facegen.TONES_FOUR),
        patterns=desk_patterns,
        out_dir=out,
        seed=DESK_SYNTH_SEED,
        size=DESK_SIZE,
    )
    train, val = dataset.split(manifest, val_fraction=0.2, seed=DESK_SPLIT_SEED)
    TIMINGS["desk_synthesize"] = time.perf_counter() - start
    return manifest, train, val


@pytest.fixture(scope="session")
def desk_model(desk_corpus):
    import time

    _, train, _ = desk_corpus
    start = time.perf_counter()
    model = illum.train(train, illum.TrainConfig(seed=DESK_TRAIN_SEED))
    TIMINGS["desk_train"] = time.perf_counter() - start
    return model


@pytest.fixture(scope="session")
def desk_val_predictions(desk_model, desk_corpus):
    """(features, labels, tone ids, predicted-good) on the validation split."""
    _, _, val = desk_corpus
    x, y, tones = illum.features_for_manifest(val)
    pred = desk_model.predict_proba(x) >= 0.5
    return x, y, tones, pred


def make_catalog(shade_counts=(39, 12, 17), seed=0) -> shade.Catalog:
    """Synthetic brown-ish catalog with the given per-product shade counts."""
    rng = np.random.default_rng(seed)
    shades = []
    for p_idx, count in enumerate(shade_counts):
        product = f"P{chr(ord('A') + p_idx)}"
        for s_idx in range(count):
            # browns: r > g > b with varied lightness
            r = int(rng.integers(60, 250))
            g = int(r * rng.uniform(0.55, 0.85))
            b = int(g * rng.uniform(0.5, 0.9))
            shades.append(
                shade.ProductShade(
                    product_id=product,
                    shade_id=f"s{s_idx:02d}",
                    name=f"{product} shade {s_idx}",
                    color=(r, g, b),
                )
            )
    return shade.Catalog(shades=shades)


@pytest.fixture
def small_catalog():
    return make_catalog(shade_counts=(5, 3), seed=42)
