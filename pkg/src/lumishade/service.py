"""HTTP facade for live illumination assessment and shade recommendation.

Stateless request handling over immutable artifacts: the classifier model
and shade catalog are loaded once at startup and never mutated, so requests
need no locking and repeated requests return identical responses. Images
travel as raw PNG bodies (content-type image/png) or as multipart forms
with an optional mask part; nothing is written to disk.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from lumishade import illum, shade
from lumishade.errors import LumishadeError
from lumishade.imageops import decode_png, decode_png_mask

DEFAULT_MASK_FRACTION = 0.6  # central-ellipse diameter as fraction of min(H, W)


def central_ellipse_mask(height: int, width: int, fraction: float = DEFAULT_MASK_FRACTION) -> np.ndarray:
    """Fallback face region when the client sends no mask."""
    radius = fraction * min(height, width) / 2.0
    cy, cx = height / 2.0, width / 2.0
    ys, xs = np.mgrid[0:height, 0:width]
    dy = (ys + 0.5 - cy) / radius
    dx = (xs + 0.5 - cx) / radius
    return dx * dx + dy * dy <= 1.0


def assess_payload(model: illum.ClassifierModel, img, mask, debug: bool = False) -> dict:
    features = illum.extract_features(img, mask)
    label, probability = illum.predict(model, features)
    payload = {"label": label.value, "probability": probability}
    if debug:
        payload["features"] = [float(f) for f in features]
    return payload


def recommendation_payload(
    estimate: shade.SkinEstimate,
    recommendation: shade.Recommendation,
    illumination: dict | None,
) -> dict:
    """Response body shared verbatim by the service and the offline CLI."""
    return {
        "estimated_skin_tone": {
            "rgb": list(estimate.color),
            "lab": {"l": estimate.lab.l, "a": estimate.lab.a, "b": estimate.lab.b},
        },
        "illumination": illumination,
        "threshold": recommendation.threshold,
        "matches": [
            {
                "product_id": s.product_id,
                "shade_id": s.shade_id,
                "name": s.name,
                "rgb": list(s.color),
                "lab": {"l": s.lab.l, "a": s.lab.a, "b": s.lab.b},
                "distance": d,
                "within_2": d < 2.0,
                "within_5": d < 5.0,
            }
            for s, d in recommendation.entries
        ],
    }


async def _read_image_and_mask(request: Request):
    content_type = request.headers.get("content-type", "")
    mask_bytes = None
    if content_type.startswith("multipart/form-data"):
        form = await request.form()
        image_part = form.get("image")
        if image_part is None:
            raise HTTPException(status_code=400, detail="multipart body needs an 'image' part")
        image_bytes = await image_part.read()
        mask_part = form.get("mask")
        if mask_part is not None:
            mask_bytes = await mask_part.read()
    else:
        image_bytes = await request.body()

    try:
        img = decode_png(image_bytes)
    except Exception:
        raise HTTPException(status_code=400, detail="could not decode PNG image")

    mask = None
    if mask_bytes is not None:
        try:
            mask = decode_png_mask(mask_bytes)
        except Exception:
            raise HTTPException(status_code=400, detail="could not decode PNG mask")
        if mask.shape != img.shape[:2]:
            raise HTTPException(status_code=422, detail="mask dimensions do not match image")
        if not mask.any():
            raise HTTPException(status_code=422, detail="mask selects no pixels")
    return img, mask


def create_app(
    model: illum.ClassifierModel | None = None,
    catalog: shade.Catalog | None = None,
    cors_origins: tuple[str, ...] = (),
) -> FastAPI:
    app = FastAPI(title="lumishade", docs_url=None, redoc_url=None)
    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )
    app.state.model = model
    app.state.catalog = catalog

    def _require_model() -> illum.ClassifierModel:
        if app.state.model is None:
            raise HTTPException(status_code=503, detail="no model loaded")
        return app.state.model

    def _require_catalog() -> shade.Catalog:
        if app.state.catalog is None:
            raise HTTPException(status_code=503, detail="no catalog loaded")
        return app.state.catalog

    @app.get("/v1/health")
    def health():
        model = _require_model()
        return {"status": "ok", "model_version": model.fingerprint()}

    @app.get("/v1/catalog")
    def catalog_endpoint():
        catalog = _require_catalog()
        return {
            "shades": [
                {
                    "product_id": s.product_id,
                    "shade_id": s.shade_id,
                    "name": s.name,
                    "rgb": list(s.color),
                }
                for s in catalog.shades
            ]
        }

    @app.post("/v1/assess")
    async def assess(request: Request, debug: bool = False):
        model = _require_model()
        img, mask = await _read_image_and_mask(request)
        if mask is None:
            mask = central_ellipse_mask(img.shape[0], img.shape[1])
        try:
            return JSONResponse(assess_payload(model, img, mask, debug=debug))
        except LumishadeError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/v1/recommend")
    async def recommend(
        request: Request, product_id: str | None = None, threshold: float = 5.0
    ):
        model = _require_model()
        catalog = _require_catalog()
        if product_id is not None:
            if product_id not in catalog.product_ids:
                raise HTTPException(status_code=404, detail=f"unknown product {product_id!r}")
            catalog = catalog.for_product(product_id)

        img, mask = await _read_image_and_mask(request)
        if mask is None:
            mask = central_ellipse_mask(img.shape[0], img.shape[1])
        empty_neck = np.zeros_like(mask)
        try:
            verdict = assess_payload(model, img, mask)
            estimate = shade.estimate_skin_tone(img, mask, empty_neck)
            ranking = shade.recommend(catalog, estimate, threshold=threshold)
        except LumishadeError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return JSONResponse(recommendation_payload(estimate, ranking, verdict))

    return app


def load_app(
    model_path: str | None,
    catalog_path: str | None,
    cors_origins: tuple[str, ...] = (),
) -> FastAPI:
    model = illum.ClassifierModel.load(model_path) if model_path else None
    catalog = shade.load_catalog(catalog_path) if catalog_path else None
    return create_app(model=model, catalog=catalog, cors_origins=cors_origins)
