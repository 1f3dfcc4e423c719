"""Kernel backend selection.

The hot per-pixel kernels (sRGB encode, Lab conversion, SH shading,
CIEDE2000 blocks) exist twice: a compiled Cython core and a pure numpy
fallback with identical signatures. Selection happens once at import:

* ``LUMISHADE_BACKEND=auto`` (default) — compiled core if built, else numpy.
* ``LUMISHADE_BACKEND=native`` — require the compiled core.
* ``LUMISHADE_BACKEND=numpy``  — force the fallback.

``benchmarks/bench_backends.py`` compares the two.
"""

import os

from lumishade.backends import reference

_requested = os.environ.get("LUMISHADE_BACKEND", "auto").strip().lower()

if _requested in ("auto", "", "native"):
    try:
        from lumishade.backends import _core as kernels

        BACKEND_NAME = "native"
    except ImportError:
        if _requested == "native":
            raise
        kernels = reference
        BACKEND_NAME = "numpy"
elif _requested in ("numpy", "reference", "python"):
    kernels = reference
    BACKEND_NAME = "numpy"
else:
    raise ValueError(
        f"unknown LUMISHADE_BACKEND={_requested!r} (expected auto, native or numpy)"
    )


def backend_name() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND_NAME
