"""Conv kernel backend selection.

The compiled Cython kernels are preferred when the extension imported
cleanly; otherwise the NumPy implementation is used. Set
OPSALIGN_CONV_BACKEND=numpy|compiled to force one (forcing "compiled"
raises if the extension is unavailable).

Both backends compute the same quantities; they may differ in the last
floating-point digits because summation order differs. Within one backend
results are bit-reproducible.
"""

import os

from . import convops as _numpy_impl

try:
    from . import _convkernels as _compiled_impl
except ImportError:
    _compiled_impl = None

_requested = os.environ.get("OPSALIGN_CONV_BACKEND", "auto").strip().lower()

if _requested in ("", "auto"):
    _impl = _compiled_impl if _compiled_impl is not None else _numpy_impl
elif _requested == "numpy":
    _impl = _numpy_impl
elif _requested == "compiled":
    if _compiled_impl is None:
        raise ImportError(
            "OPSALIGN_CONV_BACKEND=compiled but the _convkernels extension "
            "is not built; reinstall with a C toolchain or unset the variable"
        )
    _impl = _compiled_impl
else:
    raise ValueError(f"unknown OPSALIGN_CONV_BACKEND value: {_requested!r}")

BACKEND = "compiled" if _impl is _compiled_impl and _compiled_impl is not None else "numpy"

conv1d_forward = _impl.conv1d_forward
conv1d_backward = _impl.conv1d_backward
same_padding = _numpy_impl.same_padding


def available_backends():
    names = ["numpy"]
    if _compiled_impl is not None:
        names.append("compiled")
    return names


def get_impl(name):
    """Return a specific backend module ("numpy" or "compiled")."""
    if name == "numpy":
        return _numpy_impl
    if name == "compiled":
        if _compiled_impl is None:
            raise ImportError("compiled conv backend not available")
        return _compiled_impl
    raise ValueError(f"unknown backend {name!r}")
