"""Backend selection for the batch kernels.

The compiled extension is used when it imports cleanly; setting
``CHFN_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if not os.environ.get("CHFN_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"


def _c2(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def herm_form_batch(z, w):
    return _impl.herm_form_batch(_c2(z), _c2(w))


def cross_ratio_triples(q):
    return _impl.cross_ratio_triples(_c2(q))


def cartan_batch(q):
    return _impl.cartan_batch(_c2(q))
