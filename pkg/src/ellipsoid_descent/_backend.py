"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementation in ``_pykernels`` takes over. Callers reach kernels
through :data:`kernels` at call time so :func:`use_backend` takes effect
immediately.
"""

import contextlib

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_AVAILABLE = {"python": _pykernels}
if _ckernels is not None:
    _AVAILABLE["cython"] = _ckernels

kernels = _ckernels if _ckernels is not None else _pykernels


def available_backends():
    return sorted(_AVAILABLE)


def get_backend():
    return "cython" if kernels is _ckernels and _ckernels is not None else "python"


def set_backend(name):
    global kernels
    try:
        kernels = _AVAILABLE[name]
    except KeyError:
        raise ValueError(
            f"backend {name!r} unavailable; have {available_backends()}"
        ) from None


@contextlib.contextmanager
def use_backend(name):
    previous = get_backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)
