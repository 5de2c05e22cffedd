"""Kernel backend selection.

The compiled extension is used when importable. Set ``COHLOSS_BACKEND`` to
``python`` to force the numpy fallback, or to ``cython`` to fail loudly when
the extension is missing.
"""
import importlib
import os

_MODULES = {"cython": "cohloss._ckernels", "python": "cohloss._pykernels"}


def load(name):
    """Import and return the kernel module registered under ``name``."""
    try:
        return importlib.import_module(_MODULES[name])
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(_MODULES)}") from None


def available():
    names = []
    for name in _MODULES:
        try:
            load(name)
        except ImportError:
            continue
        names.append(name)
    return names


def _select():
    forced = os.environ.get("COHLOSS_BACKEND", "").strip().lower()
    if forced:
        return load(forced)
    try:
        return load("cython")
    except ImportError:
        return load("python")


kernels = _select()
BACKEND = kernels.NAME
