"""Pure numpy versions of the batch kernels (fallback backend)."""
import numpy as np


def herm_form_batch(z, w):
    z = np.asarray(z, dtype=np.complex128)
    w = np.conj(np.asarray(w, dtype=np.complex128))
    return z[:, 0] * w[:, 3] + z[:, 1] * w[:, 1] + z[:, 2] * w[:, 2] + z[:, 3] * w[:, 0]


def _cr(z1, z2, z3, z4):
    return (herm_form_batch(z3, z1) * herm_form_batch(z4, z2)) / (
        herm_form_batch(z4, z1) * herm_form_batch(z3, z2)
    )


def cross_ratio_triples(q):
    """(N, 4, 4) lifts -> (N, 3) cross-ratio triples."""
    q = np.asarray(q, dtype=np.complex128)
    z1, z2, z3, z4 = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    return np.stack([_cr(z1, z2, z3, z4), _cr(z1, z3, z2, z4), _cr(z2, z3, z1, z4)], axis=1)


def cartan_batch(q):
    """(N, 3, 4) lifts -> (N,) angular invariants."""
    q = np.asarray(q, dtype=np.complex128)
    z1, z2, z3 = q[:, 0], q[:, 1], q[:, 2]
    p = -(herm_form_batch(z1, z2) * herm_form_batch(z2, z3) * herm_form_batch(z3, z1))
    return np.angle(p)
