"""Quad index kernel selection.

The compiled Cython kernel is preferred when it was built; the
pure-Python kernel is the fallback. ``SEMWIKI_PURE_KERNEL=1`` forces the
fallback (useful for debugging and for the backend-comparison
benchmark).
"""

import os

from . import pure

WILDCARD = pure.WILDCARD

if os.environ.get("SEMWIKI_PURE_KERNEL"):
    QuadIndex = pure.QuadIndex
    BACKEND = "pure"
else:
    try:
        from . import _native

        QuadIndex = _native.QuadIndex
        BACKEND = "native"
    except ImportError:
        QuadIndex = pure.QuadIndex
        BACKEND = "pure"


def available_backends() -> dict[str, type]:
    """Importable kernels by name; used by tests and the benchmark."""
    backends = {"pure": pure.QuadIndex}
    try:
        from . import _native

        backends["native"] = _native.QuadIndex
    except ImportError:
        pass
    return backends
