"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
kernels take over.  ``MMWAVE_NORM_BACKEND=python`` forces the fallback.
"""

import importlib
import os

_CHOICES = {"cython": "._kernels", "python": "._pykernels"}


def load_backend(name):
    """Import a kernel module by backend name (``"cython"`` or ``"python"``)."""
    if name not in _CHOICES:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(_CHOICES)}")
    return importlib.import_module(_CHOICES[name], __package__)


def available_backends():
    names = []
    for name in _CHOICES:
        try:
            load_backend(name)
        except ImportError:
            continue
        names.append(name)
    return names


def _select():
    forced = os.environ.get("MMWAVE_NORM_BACKEND", "").strip().lower()
    if forced:
        return load_backend(forced)
    try:
        return load_backend("cython")
    except ImportError:
        return load_backend("python")


kernels = _select()
BACKEND = kernels.NAME
