import numpy as np
import pytest

from conftest import make_catalog
from lumishade import dataset, facegen, relight
from lumishade.color import ciede2000, srgb_to_lab
from lumishade.errors import (
    EmptyCatalogError,
    EmptyGroupError,
    EmptyMaskError,
    NoForegroundError,
    NoInRangePixelsError,
)
from lumishade.shade import (
    Catalog,
    ProductShade,
    SkinEstimate,
    estimate_skin_tone,
    extract_product_color,
    load_catalog,
    recommend,
    save_catalog,
    threshold_report,
    variance_report,
)
from lumishade.types import Label


def swatch(color, size=60, pad=12):
    img = np.full((size, size, 3), 255, dtype=np.uint8)
    img[pad:-pad, pad:-pad] = color
    return img


def estimate_of(color, label=None):
    return SkinEstimate(color=color, lab=srgb_to_lab(color), illumination=label)


class TestExtractProductColor:
    def test_uniform_swatch(self):
        got = extract_product_color(swatch((150, 100, 70)))
        assert all(abs(g - e) <= 1 for g, e in zip(got, (150, 100, 70)))

    def test_dominant_cluster_wins(self):
        img = swatch((150, 100, 70), size=80, pad=10)
        img[60:70, 10:70] = (70, 40, 25)  # darker smear, ~20% of foreground
        got = extract_product_color(img)
        assert all(abs(g - e) <= 1 for g, e in zip(got, (150, 100, 70)))

    def test_all_white_rejected(self):
        with pytest.raises(NoForegroundError):
            extract_product_color(np.full((40, 40, 3), 255, dtype=np.uint8))

    def test_out_of_range_foreground_rejected(self):
        with pytest.raises(NoInRangePixelsError):
            extract_product_color(swatch((30, 30, 200)))  # blue, nowhere near brown

    def test_invariant_to_white_padding(self):
        small = swatch((170, 120, 90), size=50, pad=8)
        interior = small[8:-8, 8:-8]
        padded = np.full((120, 120, 3), 255, dtype=np.uint8)
        padded[30 : 30 + interior.shape[0], 40 : 40 + interior.shape[1]] = interior
        assert extract_product_color(small) == extract_product_color(padded)


class TestEstimateSkinTone:
    def test_identity_lit_face_matches_tone(self):
        spec = facegen.tone_spec(0.6)
        base = facegen.generate_face(31, facegen.tone_spec(0.5), 96)
        toned = dataset.retone_asset(base, spec)
        img = relight.shade(toned, relight.identity_sh())
        est = estimate_skin_tone(img, toned.skin_mask, toned.neck_mask)
        expected = facegen.blend_tone(spec.t)
        assert all(abs(g - e) <= 5 for g, e in zip(est.color, expected))

    def test_shadow_darkens_estimate(self):
        face = facegen.generate_face(32, facegen.tone_spec(0.7), 96)
        bright = relight.shade(face, relight.identity_sh())
        half = relight.ShCoefficients(values=(0.6 / relight.SH_Y00,) + (0.0,) * 8)
        dim = relight.shade(face, half)
        est_bright = estimate_skin_tone(bright, face.skin_mask, face.neck_mask)
        est_dim = estimate_skin_tone(dim, face.skin_mask, face.neck_mask)
        assert sum(est_dim.color) < sum(est_bright.color)

    def test_empty_masks(self):
        img = np.zeros((10, 10, 3), dtype=np.uint8)
        empty = np.zeros((10, 10), dtype=bool)
        with pytest.raises(EmptyMaskError):
            estimate_skin_tone(img, empty, empty)


class TestRecommend:
    def test_exact_match_first(self, small_catalog):
        target = small_catalog.shades[3]
        rec = recommend(small_catalog, estimate_of(target.color))
        first_shade, distance = rec.entries[0]
        assert (first_shade.product_id, first_shade.shade_id) == (
            target.product_id,
            target.shade_id,
        )
        assert distance == 0.0

    def test_matches_brute_force(self, small_catalog):
        est = estimate_of((150, 105, 80))
        rec = recommend(small_catalog, est)
        brute = sorted(
            (
                (ciede2000(est.lab, s.lab), s.product_id, s.shade_id)
                for s in small_catalog.shades
            ),
        )
        got = [(d, s.product_id, s.shade_id) for s, d in rec.entries]
        for (bd, bp, bs), (gd, gp, gs) in zip(brute, got):
            assert (bp, bs) == (gp, gs)
            assert gd == pytest.approx(bd, abs=1e-9)

    def test_tie_break_lexicographic(self):
        color = (140, 95, 70)
        catalog = Catalog(
            shades=[
                ProductShade("PB", "s1", "b", color),
                ProductShade("PA", "s2", "a2", color),
                ProductShade("PA", "s1", "a1", color),
            ]
        )
        rec = recommend(catalog, estimate_of(color))
        assert [(s.product_id, s.shade_id) for s, _ in rec.entries] == [
            ("PA", "s1"),
            ("PA", "s2"),
            ("PB", "s1"),
        ]

    def test_empty_catalog(self):
        with pytest.raises(EmptyCatalogError):
            recommend(Catalog(shades=[]), estimate_of((1, 2, 3)))

    def test_order_invariant_to_catalog_permutation(self, small_catalog):
        est = estimate_of((170, 120, 95))
        rec = recommend(small_catalog, est)
        shuffled = Catalog(shades=list(reversed(small_catalog.shades)))
        rec2 = recommend(shuffled, est)
        assert [(s.shade_id, d) for s, d in rec.entries] == [
            (s.shade_id, d) for s, d in rec2.entries
        ]


def brute_force_threshold_counts(catalog, estimates, threshold):
    """Independent oracle: scalar loops, no shared code with threshold_report."""
    counts = {}
    for product_id in catalog.product_ids:
        shades = [s for s in catalog.shades if s.product_id == product_id]
        matched = set()
        for s in shades:
            for e in estimates:
                if ciede2000(e.lab, s.lab) < threshold:
                    matched.add(s.shade_id)
                    break
        counts[product_id] = matched
    return counts


class TestThresholdReport:
    def test_exact_match_counted(self, small_catalog):
        target = small_catalog.shades[0]
        groups = {"good": [estimate_of(target.color, Label.GOOD)], "bad": [], "all": []}
        report = threshold_report(small_catalog, groups)
        assert report["products"][target.product_id]["groups"]["good"]["2.0"] >= 1

    def test_matches_brute_force(self):
        rng = np.random.default_rng(17)
        catalog = make_catalog(shade_counts=(9, 5), seed=3)
        estimates = [
            estimate_of(tuple(int(v) for v in rng.integers(40, 240, 3)), Label.GOOD)
            for _ in range(7)
        ]
        report = threshold_report(catalog, {"good": estimates}, thresholds=(2.0, 5.0, 9.0))
        for thr in (2.0, 5.0, 9.0):
            brute = brute_force_threshold_counts(catalog, estimates, thr)
            for product_id, matched in brute.items():
                got = report["products"][product_id]["groups"]["good"][str(thr)]
                assert got == len(matched)

    def test_monotone_in_threshold(self):
        rng = np.random.default_rng(18)
        catalog = make_catalog(shade_counts=(7, 4), seed=5)
        estimates = [
            estimate_of(tuple(int(v) for v in rng.integers(40, 240, 3)), Label.BAD)
            for _ in range(5)
        ]
        report = threshold_report(catalog, {"bad": estimates}, thresholds=(1.0, 2.0, 5.0, 20.0))
        for product_id in catalog.product_ids:
            counts = report["products"][product_id]["groups"]["bad"]
            values = [counts[str(t)] for t in (1.0, 2.0, 5.0, 20.0)]
            assert values == sorted(values)

    def test_union_semantics(self, small_catalog):
        # two estimates each matching a different shade: the group matches both
        a, b = small_catalog.shades[0], small_catalog.shades[1]
        groups = {
            "good": [estimate_of(a.color, Label.GOOD), estimate_of(b.color, Label.GOOD)]
        }
        report = threshold_report(small_catalog, groups, thresholds=(2.0,))
        assert report["products"][a.product_id]["groups"]["good"]["2.0"] >= 2

    def test_overlap_counts(self, small_catalog):
        target = small_catalog.shades[0]
        groups = {
            "good": [estimate_of(target.color, Label.GOOD)],
            "bad": [estimate_of(target.color, Label.BAD)],
        }
        report = threshold_report(small_catalog, groups, thresholds=(2.0,))
        assert report["products"][target.product_id]["overlap_good_bad"]["2.0"] >= 1


class TestVarianceReport:
    def test_all_identical_zero(self):
        best = estimate_of((150, 100, 80))
        estimates = [estimate_of((150, 100, 80), Label.GOOD) for _ in range(3)]
        estimates += [estimate_of((150, 100, 80), Label.BAD) for _ in range(2)]
        report = variance_report(estimates + [best], best)
        for group in ("good", "bad", "all"):
            assert report[group]["mean"] == 0.0
            assert report[group]["std"] == 0.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(19)
        best = estimate_of((160, 110, 85))
        estimates = [
            estimate_of(
                tuple(int(v) for v in rng.integers(30, 230, 3)),
                Label.GOOD if i % 3 == 0 else Label.BAD,
            )
            for i in range(9)
        ]
        report = variance_report(estimates + [best], best)
        for group, wanted in (("good", Label.GOOD), ("bad", Label.BAD), ("all", None)):
            dists = [
                ciede2000(e.lab, best.lab)
                for e in estimates
                if wanted is None or e.illumination is wanted
            ]
            assert report[group]["mean"] == pytest.approx(np.mean(dists), abs=1e-9)
            assert report[group]["std"] == pytest.approx(np.std(dists), abs=1e-9)
            assert report[group]["count"] == len(dists)

    def test_best_excluded_from_rest(self):
        best = estimate_of((150, 100, 80), Label.GOOD)
        other = estimate_of((120, 90, 70), Label.GOOD)
        report = variance_report([best, other], best, groups=("good", "all"))
        assert report["good"]["count"] == 1

    def test_empty_group_rejected(self):
        best = estimate_of((150, 100, 80))
        estimates = [estimate_of((140, 95, 75), Label.GOOD)]
        with pytest.raises(EmptyGroupError):
            variance_report(estimates + [best], best)


class TestCatalogIo:
    def test_roundtrip(self, tmp_path, small_catalog):
        path = tmp_path / "catalog.csv"
        save_catalog(small_catalog, path)
        loaded = load_catalog(path)
        assert [(s.product_id, s.shade_id, s.name, s.color) for s in loaded.shades] == [
            (s.product_id, s.shade_id, s.name, s.color) for s in small_catalog.shades
        ]

    def test_duplicate_rejected(self):
        with pytest.raises(EmptyCatalogError):
            Catalog(
                shades=[
                    ProductShade("P", "s1", "x", (1, 2, 3)),
                    ProductShade("P", "s1", "y", (4, 5, 6)),
                ]
            )
