"""Hot-loop kernels, compiled when available.

The Cython extension is used if it was built; otherwise the numpy reference
implementation is loaded.  Set ``ANNIHILATOR_PURE_PYTHON=1`` to force the
fallback.
"""
import os

import numpy as np

from . import _pykernels

if os.environ.get("ANNIHILATOR_PURE_PYTHON") == "1":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.BACKEND


def _c(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def _i(a):
    return np.ascontiguousarray(a, dtype=np.int_)


def _resolve(impl):
    if impl is None:
        return _impl
    if isinstance(impl, str):
        found = available_backends()
        if impl not in found:
            raise ValueError(f"kernel backend {impl!r} not available; have {sorted(found)}")
        return found[impl]
    return impl


def character_sum(values, phase, roots, impl=None):
    impl = _resolve(impl)
    return impl.character_sum(_c(values), _i(phase), _c(roots))


def stft_table(f, g, diff, phase, roots, impl=None):
    impl = _resolve(impl)
    return impl.stft_table(_c(f), _c(g), _i(diff), _i(phase), _c(roots))


def soft_threshold(z, tau, impl=None):
    impl = _resolve(impl)
    return impl.soft_threshold(_c(z), float(tau))


def available_backends():
    """Return the kernel modules that can be imported, keyed by name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
