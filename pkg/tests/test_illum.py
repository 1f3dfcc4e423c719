import numpy as np
import pytest

from lumishade import illum
from lumishade.errors import EmptyMaskError, SingleClassDataError
from lumishade.illum import (
    ClassifierModel,
    MetricsReport,
    TrainConfig,
    extract_features,
    loss_gradient,
    predict,
    train_on_features,
    weighted_ce_loss,
)
from lumishade.types import Label


def make_model(weights=None, bias=0.0, good_weight=1.0, dim=27):
    if weights is None:
        weights = np.zeros(dim)
    return ClassifierModel(
        weights=np.asarray(weights, dtype=np.float64),
        bias=bias,
        feature_mean=np.zeros(dim),
        feature_std=np.ones(dim),
        train_config={"good_class_weight": good_weight},
    )


def separable_blobs(n=200, dim=27, seed=0, margin=10.0):
    """Two Gaussian blobs separated well beyond their spread."""
    rng = np.random.default_rng(seed)
    half = n // 2
    x = rng.normal(0.0, 1.0, size=(n, dim))
    x[:half] += margin
    x[half:] -= margin
    y = np.array([1.0] * half + [0.0] * (n - half))
    return x, y


class TestExtractFeatures:
    def test_uniform_gray(self):
        img = np.full((40, 40, 3), 120, dtype=np.uint8)
        mask = np.ones((40, 40), dtype=bool)
        f = extract_features(img, mask)
        assert f.shape == (27,)
        assert np.allclose(f[:25], f[0])
        assert f[25] == pytest.approx(0.0, abs=1e-12)
        assert f[26] == pytest.approx(0.0, abs=1e-12)

    def test_half_black_half_white_asymmetry(self):
        img = np.zeros((40, 40, 3), dtype=np.uint8)
        img[:, 20:] = 255
        mask = np.ones((40, 40), dtype=bool)
        f = extract_features(img, mask)
        assert f[26] == pytest.approx(-1.0, abs=1e-6)

    def test_grid_features_in_unit_range(self):
        rng = np.random.default_rng(1)
        img = rng.integers(0, 256, size=(50, 50, 3)).astype(np.uint8)
        mask = np.ones((50, 50), dtype=bool)
        f = extract_features(img, mask)
        assert np.all(f[:25] >= 0.0)
        assert np.all(f[:25] <= 1.0)

    def test_too_small_mask(self):
        img = np.full((40, 40, 3), 120, dtype=np.uint8)
        mask = np.zeros((40, 40), dtype=bool)
        mask[0, :24] = True
        with pytest.raises(EmptyMaskError):
            extract_features(img, mask)

    def test_exactly_25_pixels_ok(self):
        img = np.full((40, 40, 3), 120, dtype=np.uint8)
        mask = np.zeros((40, 40), dtype=bool)
        mask[5:10, 5:10] = True
        assert extract_features(img, mask).shape == (27,)


class TestWeightedCeLoss:
    def test_perfect_prediction_near_zero(self):
        model = make_model(weights=np.ones(2) * 20.0, dim=2)
        batch = [(np.array([1.0, 1.0]), Label.GOOD), (np.array([-1.0, -1.0]), Label.BAD)]
        assert weighted_ce_loss(model, batch) < 1e-8

    def test_good_weight_three_at_half(self):
        model = make_model(good_weight=3.0, dim=2)
        batch = [(np.zeros(2), Label.GOOD)]  # p = sigmoid(0) = 0.5
        assert weighted_ce_loss(model, batch) == pytest.approx(3.0 * np.log(2.0), rel=1e-12)

    def test_unit_weight_is_plain_cross_entropy(self):
        rng = np.random.default_rng(2)
        model = make_model(weights=rng.normal(size=5), bias=0.3, good_weight=1.0, dim=5)
        batch = [(rng.normal(size=5), Label.GOOD if i % 2 else Label.BAD) for i in range(8)]
        x = np.stack([f for f, _ in batch])
        y = np.array([1.0 if l is Label.GOOD else 0.0 for _, l in batch])
        p = model.predict_proba(x)
        plain = float(np.mean(-(y * np.log(p) + (1 - y) * np.log(1 - p))))
        assert weighted_ce_loss(model, batch) == pytest.approx(plain, rel=1e-12)


class TestGradient:
    def test_matches_central_differences(self):
        rng = np.random.default_rng(3)
        step = 1e-5
        for _ in range(100):
            dim = int(rng.integers(2, 9))
            model = make_model(
                weights=rng.normal(size=dim),
                bias=float(rng.normal()),
                good_weight=float(rng.uniform(1.0, 4.0)),
                dim=dim,
            )
            batch = [
                (rng.normal(size=dim), Label.GOOD if rng.random() < 0.5 else Label.BAD)
                for _ in range(int(rng.integers(1, 16)))
            ]
            grad_w, grad_b = loss_gradient(model, batch)

            for k in range(dim):
                bumped = make_model(model.weights.copy(), model.bias,
                                    model.train_config["good_class_weight"], dim)
                bumped.weights[k] += step
                up = weighted_ce_loss(bumped, batch)
                bumped.weights[k] -= 2 * step
                down = weighted_ce_loss(bumped, batch)
                fd = (up - down) / (2 * step)
                denom = max(abs(fd), abs(grad_w[k]), 1e-8)
                assert abs(fd - grad_w[k]) / denom < 1e-4

            bumped = make_model(model.weights.copy(), model.bias + step,
                                model.train_config["good_class_weight"], dim)
            up = weighted_ce_loss(bumped, batch)
            bumped = make_model(model.weights.copy(), model.bias - step,
                                model.train_config["good_class_weight"], dim)
            down = weighted_ce_loss(bumped, batch)
            fd = (up - down) / (2 * step)
            denom = max(abs(fd), abs(grad_b), 1e-8)
            assert abs(fd - grad_b) / denom < 1e-4


class TestTraining:
    def test_separable_blobs_perfect_train_accuracy(self):
        x, y = separable_blobs()
        model = train_on_features(x, y, TrainConfig(seed=1))
        pred = model.predict_proba(x) >= 0.5
        assert np.all(pred == (y == 1.0))

    def test_deterministic(self):
        x, y = separable_blobs(seed=4)
        a = train_on_features(x, y, TrainConfig(seed=7))
        b = train_on_features(x, y, TrainConfig(seed=7))
        assert np.array_equal(a.weights, b.weights)
        assert a.bias == b.bias

    def test_single_class_rejected(self):
        x = np.random.default_rng(0).normal(size=(10, 27))
        with pytest.raises(SingleClassDataError):
            train_on_features(x, np.ones(10), TrainConfig())

    def test_loss_nonincreasing_for_small_lr(self):
        x, y = separable_blobs(seed=5, margin=3.0)
        for lr in (0.05, 0.1):
            model = train_on_features(x, y, TrainConfig(learning_rate=lr, seed=2))
            losses = model.epoch_losses
            assert len(losses) == 20
            violations = sum(1 for a, b in zip(losses, losses[1:]) if b > a + 1e-12)
            assert violations <= 1

    def test_default_class_weight_is_inverse_frequency(self):
        x, y = separable_blobs(n=100, seed=6)
        y[:30] = 1.0
        y[30:] = 0.0
        model = train_on_features(x, y, TrainConfig(seed=0))
        assert model.train_config["good_class_weight"] == pytest.approx(70 / 30)

    def test_held_out_blobs(self):
        x, y = separable_blobs(n=200, seed=8)
        x_test, y_test = separable_blobs(n=60, seed=9)
        model = train_on_features(x, y, TrainConfig(seed=3))
        for features, truth in zip(x_test, y_test):
            label, _ = predict(model, features)
            assert (label is Label.GOOD) == bool(truth)


class TestPredict:
    def test_zero_model_boundary_is_good(self):
        model = make_model()
        label, p = predict(model, np.zeros(27))
        assert p == 0.5
        assert label is Label.GOOD

    def test_monotone_in_positive_weight(self):
        w = np.zeros(27)
        w[3] = 2.0
        model = make_model(weights=w)
        probs = []
        for v in np.linspace(-1, 1, 9):
            x = np.zeros(27)
            x[3] = v
            probs.append(predict(model, x)[1])
        assert all(b >= a for a, b in zip(probs, probs[1:]))

    def test_threshold_changes_labels_not_probabilities(self):
        rng = np.random.default_rng(11)
        model = make_model(weights=rng.normal(size=27))
        x = rng.normal(size=(50, 27))
        p_batch = model.predict_proba(x)
        # relabeling at another threshold is pure post-processing
        strict = p_batch >= 0.9
        assert np.array_equal(model.predict_proba(x), p_batch)
        assert strict.sum() <= (p_batch >= 0.5).sum()


class TestMetrics:
    def test_arithmetic_example(self):
        report = MetricsReport(tp=2, fn=1, tn=3, fp=0)
        assert report.sensitivity == pytest.approx(2 / 3, abs=1e-3)
        assert report.specificity == 1.0
        assert report.accuracy == pytest.approx(5 / 6, abs=1e-3)

    def test_perfect_predictor(self):
        report = MetricsReport(tp=10, fn=0, tn=20, fp=0)
        assert report.accuracy == report.sensitivity == report.specificity == 1.0

    def test_degenerate_all_bad_predictor(self):
        # mirrors the failure mode of an always-bad model on mixed data
        report = MetricsReport(tp=0, fn=12, tn=30, fp=0)
        assert report.sensitivity == 0.0
        assert report.specificity == 1.0


class TestModelIo:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(12)
        model = ClassifierModel(
            weights=rng.normal(size=27),
            bias=0.25,
            feature_mean=rng.normal(size=27),
            feature_std=np.abs(rng.normal(size=27)) + 0.1,
            train_config={"epochs": 20, "good_class_weight": 2.0},
        )
        path = tmp_path / "model.json"
        model.save(path)
        loaded = ClassifierModel.load(path)
        assert np.array_equal(loaded.weights, model.weights)
        assert loaded.bias == model.bias
        assert np.array_equal(loaded.feature_mean, model.feature_mean)
        assert np.array_equal(loaded.feature_std, model.feature_std)
        assert loaded.train_config == model.train_config


class TestOnDeskCorpus:
    def test_validation_quality(self, desk_model, desk_corpus):
        _, _, val = desk_corpus
        report = illum.evaluate(desk_model, val)
        assert report.accuracy >= 0.90
        assert report.sensitivity >= 0.85
        assert report.specificity >= 0.85

    def test_tone_fairness(self, desk_corpus, desk_val_predictions):
        manifest, _, _ = desk_corpus
        _, y, tones, pred = desk_val_predictions
        t_of = {t["label"]: t["t"] for t in manifest.config["tones"]}
        t_arr = np.array([t_of[t] for t in tones])
        dark = (t_arr <= 0.3) & (y == 1.0)
        light = (t_arr >= 0.7) & (y == 1.0)
        gap = abs(pred[dark].mean() - pred[light].mean())
        assert gap <= 0.10
