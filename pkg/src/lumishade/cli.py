"""Command-line entry point: one executable, one subcommand per pipeline stage.

    facegen            generate a face asset directory
    patterns           sample labeled light patterns to JSON
    synth              synthesize a labeled corpus (faces x tones x patterns)
    train              split a manifest and train the classifier
    eval               confusion metrics of a model on a manifest
    extract-catalog    build a shade catalog CSV from swatch images
    recommend          rank catalog shades against a photo
    report-variance    per-identity color drift vs the best-illuminated photo
    report-thresholds  shades within distance thresholds, per product/group
    serve              run the HTTP service

Every stage is seeded and deterministic: identical flags produce identical
bytes. Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from lumishade import dataset, facegen, illum, relight, service, shade
from lumishade.errors import LumishadeError
from lumishade.imageops import load_image, load_mask
from lumishade.types import Label


def _emit(payload: dict | list, args, human=None) -> None:
    """Write --out if given; print JSON with --json, else the human rendering."""
    text = json.dumps(payload, indent=2)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    if getattr(args, "json", False):
        print(text)
    elif human is not None:
        human()
    elif not getattr(args, "out", None):
        print(text)


def _parse_tones(spec: str) -> list[facegen.ToneSpec]:
    if spec == "4":
        return list(facegen.TONES_FOUR)
    if spec == "6":
        return list(facegen.TONES_SIX)
    return [facegen.tone_spec(float(part)) for part in spec.split(",") if part]


def cmd_facegen(args) -> int:
    asset = facegen.generate_face(args.seed, facegen.tone_spec(args.tone), args.size)
    facegen.save_asset(asset, args.out)
    print(f"wrote face asset to {args.out}")
    return 0


def cmd_patterns(args) -> int:
    patterns = relight.pattern_grid(n_good_target=args.good, seed=args.seed, count=args.count)
    relight.save_patterns(patterns, args.out)
    n_good = sum(1 for p in patterns if p.label is Label.GOOD)
    print(f"wrote {len(patterns)} patterns ({n_good} good / {len(patterns) - n_good} bad) to {args.out}")
    return 0


def cmd_synth(args) -> int:
    patterns = relight.load_patterns(args.patterns)
    manifest = dataset.synthesize(
        n_faces=args.faces,
        tones=_parse_tones(args.tones),
        patterns=patterns,
        out_dir=args.out,
        seed=args.seed,
        size=args.size,
    )
    print(f"wrote {len(manifest.samples)} samples under {args.out}")
    return 0


def cmd_train(args) -> int:
    manifest = dataset.load_manifest(args.manifest)
    train_manifest, val_manifest = dataset.split(
        manifest, val_fraction=args.val_fraction, seed=args.seed
    )
    config = illum.TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch,
        learning_rate=args.lr,
        good_class_weight=args.good_weight,
        seed=args.seed,
    )
    model = illum.train(train_manifest, config)
    model.save(args.out)
    if args.train_out:
        dataset.save_manifest(train_manifest, args.train_out)
    if args.val_out:
        dataset.save_manifest(val_manifest, args.val_out)
    print(f"wrote model to {args.out} ({len(train_manifest.samples)} train / {len(val_manifest.samples)} val)")
    return 0


def cmd_eval(args) -> int:
    model = illum.ClassifierModel.load(args.model)
    manifest = dataset.load_manifest(args.manifest)
    report = illum.evaluate(model, manifest)

    def human():
        c = report.to_dict()["confusion"]
        print(
            f"accuracy={report.accuracy:.4f} sensitivity={report.sensitivity:.4f} "
            f"specificity={report.specificity:.4f} "
            f"(tp={c['tp']} fp={c['fp']} tn={c['tn']} fn={c['fn']})"
        )

    _emit(report.to_dict(), args, human=human)
    return 0


def cmd_extract_catalog(args) -> int:
    """Swatch files named <product_id>_<shade_id>_<name>.png become catalog rows."""
    shades = []
    for path in sorted(Path(args.images).glob("*.png")):
        parts = path.stem.split("_", 2)
        if len(parts) < 2:
            raise LumishadeError(f"swatch {path.name} not named product_shade[_name].png")
        product_id, shade_id = parts[0], parts[1]
        name = parts[2] if len(parts) > 2 else shade_id
        color = shade.extract_product_color(load_image(path))
        shades.append(
            shade.ProductShade(product_id=product_id, shade_id=shade_id, name=name, color=color)
        )
    if not shades:
        raise LumishadeError(f"no .png swatches under {args.images}")
    shade.save_catalog(shade.Catalog(shades=shades), args.out)
    print(f"wrote {len(shades)} shades to {args.out}")
    return 0


def cmd_recommend(args) -> int:
    catalog = shade.load_catalog(args.catalog)
    if args.product is not None:
        if args.product not in catalog.product_ids:
            raise LumishadeError(f"unknown product {args.product!r}")
        catalog = catalog.for_product(args.product)

    img = load_image(args.image)
    if args.mask:
        mask = load_mask(args.mask)
    else:
        mask = service.central_ellipse_mask(img.shape[0], img.shape[1])

    verdict = None
    if args.model:
        model = illum.ClassifierModel.load(args.model)
        verdict = service.assess_payload(model, img, mask)

    estimate = shade.estimate_skin_tone(img, mask, np.zeros_like(mask))
    ranking = shade.recommend(catalog, estimate, threshold=args.threshold)
    payload = service.recommendation_payload(estimate, ranking, verdict)

    def human():
        tone = payload["estimated_skin_tone"]["rgb"]
        print(f"estimated skin tone rgb{tuple(tone)}")
        if verdict is not None:
            print(f"illumination: {verdict['label']} (p={verdict['probability']:.2f})")
        for i, m in enumerate(payload["matches"][:10], 1):
            band = "very close" if m["within_2"] else "similar" if m["within_5"] else ""
            print(
                f"{i:2d}. {m['product_id']} {m['shade_id']} {m['name']}: "
                f"dE={m['distance']:.2f} {band}".rstrip()
            )

    _emit(payload, args, human=human)
    return 0


def _manifest_estimates(manifest, model_path: str | None):
    """One skin estimate per render; labels from the model if given, else ground truth."""
    skin, neck = dataset.face_masks(manifest)
    model = illum.ClassifierModel.load(model_path) if model_path else None
    estimates = []
    proba = []
    for sample in manifest.samples:
        img = load_image(manifest.resolve(sample))
        if model is not None:
            label, p = illum.predict(model, illum.extract_features(img, skin))
        else:
            label, p = sample.label, None
        estimates.append(
            shade.estimate_skin_tone(
                img, skin, neck, source_id=sample.image_path, illumination=label
            )
        )
        proba.append(p)
    return estimates, proba


def cmd_report_variance(args) -> int:
    manifest = dataset.load_manifest(args.manifest)
    tones_by_label = {t["label"]: t["t"] for t in manifest.config["tones"]}
    skin, neck = dataset.face_masks(manifest)
    estimates, proba = _manifest_estimates(manifest, args.model)

    by_identity: dict[tuple[int, str], list[int]] = {}
    for i, sample in enumerate(manifest.samples):
        by_identity.setdefault((sample.face_seed, sample.tone_id), []).append(i)

    report = {"identities": []}
    for (face_seed, tone_id), indices in sorted(by_identity.items()):
        ident_estimates = [estimates[i] for i in indices]
        if args.model:
            # real-input rule: best = photo the classifier scores most confidently good
            scores = np.asarray([proba[i] for i in indices], dtype=np.float64)
            best = ident_estimates[int(np.argmax(scores))]
        else:
            # synthetic rule: best = the same identity under identity lighting
            base = facegen.generate_face(face_seed, facegen.tone_spec(0.5), manifest.size)
            toned = dataset.retone_asset(
                base, facegen.ToneSpec(tones_by_label[tone_id], tone_id)
            )
            ideal = relight.shade(toned, relight.identity_sh())
            best = shade.estimate_skin_tone(ideal, skin, neck, source_id="identity-lighting")
            ident_estimates = ident_estimates + [best]

        groups = shade.variance_report(ident_estimates, best)
        report["identities"].append(
            {"face_seed": face_seed, "tone_id": tone_id, "groups": groups}
        )

    _emit(report, args, human=lambda: _print_variance_table(report))
    return 0


def _print_variance_table(report: dict) -> None:
    print(f"{'identity':<20} {'good':>16} {'bad':>16} {'all':>16}")
    for row in report["identities"]:
        cells = []
        for group in ("good", "bad", "all"):
            g = row["groups"].get(group)
            cells.append(f"{g['mean']:.2f}±{g['std']:.1f}" if g else "-")
        ident = f"{row['face_seed']}/{row['tone_id']}"
        print(f"{ident:<20} {cells[0]:>16} {cells[1]:>16} {cells[2]:>16}")


def cmd_report_thresholds(args) -> int:
    manifest = dataset.load_manifest(args.manifest)
    catalog = shade.load_catalog(args.catalog)
    thresholds = [float(part) for part in args.thresholds.split(",") if part]

    estimates, _ = _manifest_estimates(manifest, args.model)
    groups = {
        "good": [e for e in estimates if e.illumination is Label.GOOD],
        "bad": [e for e in estimates if e.illumination is Label.BAD],
        "all": estimates,
    }
    report = shade.threshold_report(catalog, groups, thresholds=thresholds)
    _emit(report, args, human=lambda: _print_threshold_table(report))
    return 0


def _print_threshold_table(report: dict) -> None:
    thresholds = report["thresholds"]
    headers = ["product", "shades"]
    for group in ("good", "bad", "all"):
        for thr in thresholds:
            headers.append(f"{group}<{thr:g}")
    for thr in thresholds:
        headers.append(f"overlap<{thr:g}")
    print(" ".join(f"{h:>10}" for h in headers))
    for product_id, info in report["products"].items():
        row = [product_id, str(info["total_shades"])]
        for group in ("good", "bad", "all"):
            for thr in thresholds:
                row.append(str(info["groups"][group][str(thr)]))
        overlap = info.get("overlap_good_bad", {})
        for thr in thresholds:
            row.append(str(overlap.get(str(thr), 0)))
        print(" ".join(f"{c:>10}" for c in row))


def cmd_serve(args) -> int:
    import uvicorn

    app = service.load_app(
        model_path=args.model,
        catalog_path=args.catalog,
        cors_origins=tuple(args.cors_origin or ()),
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lumishade", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("facegen", help="generate a face asset directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tone", type=float, default=0.5)
    p.add_argument("--size", type=int, default=128)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_facegen)

    p = sub.add_parser("patterns", help="sample labeled light patterns")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--good", type=int, default=None, help="target number of good patterns")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_patterns)

    p = sub.add_parser("synth", help="synthesize a labeled corpus")
    p.add_argument("--faces", type=int, default=20)
    p.add_argument("--tones", default="4", help="'4', '6', or comma-separated t values")
    p.add_argument("--patterns", required=True)
    p.add_argument("--size", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="split a manifest and train the classifier")
    p.add_argument("--manifest", required=True)
    p.add_argument("--val-fraction", type=float, default=0.2)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--lr", type=float, default=0.05)
    p.add_argument("--good-weight", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--train-out", default=None)
    p.add_argument("--val-out", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on a manifest")
    p.add_argument("--model", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("extract-catalog", help="extract shade colors from swatch images")
    p.add_argument("--images", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract_catalog)

    p = sub.add_parser("recommend", help="rank catalog shades against a photo")
    p.add_argument("--image", required=True)
    p.add_argument("--mask", default=None)
    p.add_argument("--catalog", required=True)
    p.add_argument("--model", default=None)
    p.add_argument("--product", default=None)
    p.add_argument("--threshold", type=float, default=5.0)
    p.add_argument("--out", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("report-variance", help="color drift vs best-illuminated photo")
    p.add_argument("--manifest", required=True)
    p.add_argument("--model", default=None, help="use classifier verdicts instead of ground truth")
    p.add_argument("--out", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report_variance)

    p = sub.add_parser("report-thresholds", help="shade counts within distance thresholds")
    p.add_argument("--manifest", required=True)
    p.add_argument("--catalog", required=True)
    p.add_argument("--model", default=None)
    p.add_argument("--thresholds", default="2,5")
    p.add_argument("--out", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report_thresholds)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--model", default=os.environ.get("LUMISHADE_MODEL"))
    p.add_argument("--catalog", default=os.environ.get("LUMISHADE_CATALOG"))
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=int(os.environ.get("LUMISHADE_PORT", "8080")))
    p.add_argument("--cors-origin", action="append", default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LumishadeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
