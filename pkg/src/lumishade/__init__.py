"""lumishade: face illumination assessment and foundation shade recommendation.

Pipeline modules:

* color     — sRGB/CIELAB conversion, CIEDE2000
* imageops  — histograms, histogram matching, K-means palettes, masks, PNG I/O
* facegen   — procedural face assets across a continuous skin-tone blend
* relight   — spherical-harmonic Lambertian shading and labeled light patterns
* dataset   — corpus synthesis, manifests, identity-disjoint splits
* illum     — feature extraction, weighted-CE logistic training, evaluation
* shade     — catalogs, skin-tone estimates, recommendations, reports
* service   — FastAPI app exposing /v1/assess and /v1/recommend
* cli       — `lumishade` executable

The per-pixel kernels run on a compiled core when built (see
lumishade.backends), falling back to numpy transparently.
"""

__version__ = "0.1.0"
