"""Linear algebra on C^{3,1} with the form <z, w> = w* H z.

H is the anti-diagonal-corner matrix pairing coordinates 1 and 4, so the two
distinguished null vectors are ``INFINITY = e1`` and ``ORIGIN = e4``. Vectors
are plain complex numpy arrays of shape (4,); group elements are 4x4 complex
arrays, optionally wrapped in :class:`GroupElement` once certified.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegeneratePair,
    DegenerateSpan,
    NotInClosedDomain,
    NotInGroup,
    NotNegative,
    ValidationError,
    ZeroVector,
)

DEFAULT_TOL = 1e-9

H = np.array(
    [[0, 0, 0, 1],
     [0, 1, 0, 0],
     [0, 0, 1, 0],
     [1, 0, 0, 0]],
    dtype=np.complex128,
)
INFINITY = np.array([1, 0, 0, 0], dtype=np.complex128)
ORIGIN = np.array([0, 0, 0, 1], dtype=np.complex128)
IDENTITY = np.eye(4, dtype=np.complex128)

# basis vectors tried (in this order) when spanning an orthogonal complement
_SEED_ORDER = (1, 2, 0, 3)


def as_vector(z):
    v = np.asarray(z, dtype=np.complex128)
    if v.shape != (4,):
        raise ValidationError(f"expected a vector of length 4, got shape {v.shape}")
    return v


def as_matrix(M):
    if isinstance(M, GroupElement):
        return M.matrix
    m = np.asarray(M, dtype=np.complex128)
    if m.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {m.shape}")
    return m


def herm_form(z, w):
    """Return <z, w> = z1 conj(w4) + z2 conj(w2) + z3 conj(w3) + z4 conj(w1)."""
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    return complex(z[0] * np.conj(w[3]) + z[1] * np.conj(w[1])
                   + z[2] * np.conj(w[2]) + z[3] * np.conj(w[0]))


def norm_sq(z):
    """Real value <z, z>."""
    return herm_form(z, z).real


def group_inverse(A):
    """Inverse of an element of U(3,1), computed as H A* H."""
    A = as_matrix(A)
    return H @ A.conj().T @ H


class Sign(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NULL = "null"


@dataclass(frozen=True)
class VectorClass:
    sign: Sign
    value: float
    tol: float


def classify_vector(z, tol=DEFAULT_TOL):
    """Sign class of <z, z> with a null band of width ``tol * |z|^2``."""
    z = as_vector(z)
    scale = float(np.vdot(z, z).real)
    if scale == 0.0:
        raise ZeroVector("cannot classify the zero vector")
    value = norm_sq(z)
    if abs(value) <= tol * scale:
        sign = Sign.NULL
    elif value > 0:
        sign = Sign.POSITIVE
    else:
        sign = Sign.NEGATIVE
    return VectorClass(sign, value, tol)


def is_null(z, tol=DEFAULT_TOL):
    return classify_vector(z, tol).sign is Sign.NULL


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A 4x4 matrix certified to lie in SU(3,1).

    Only :func:`certify_group_element` should construct these; the residuals
    are kept so callers can decide whether the certificate is tight enough.
    """

    matrix: np.ndarray
    form_residual: float
    det_residual: float

    @property
    def certified(self):
        return True

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __matmul__(self, other):
        return self.matrix @ as_matrix(other)

    def __rmatmul__(self, other):
        return as_matrix(other) @ self.matrix

    def inverse(self):
        return group_inverse(self.matrix)


def group_residuals(M):
    """(||M* H M - H||, |det M - 1|) with the Frobenius norm."""
    M = as_matrix(M)
    form = float(np.linalg.norm(M.conj().T @ H @ M - H))
    det = float(abs(np.linalg.det(M) - 1.0))
    return form, det


def certify_group_element(M, tol=DEFAULT_TOL):
    M = np.array(as_matrix(M), dtype=np.complex128)
    form, det = group_residuals(M)
    if form > tol or det > tol:
        raise NotInGroup(form, det)
    M.setflags(write=False)
    return GroupElement(M, form, det)


def standard_lift(p, tol=DEFAULT_TOL):
    """Lift a point of the closed Siegel domain to (z1, z2, z3, 1)."""
    p = np.asarray(p, dtype=np.complex128)
    if p.shape != (3,):
        raise ValidationError("expected three coordinates")
    defect = 2 * p[0].real + abs(p[1]) ** 2 + abs(p[2]) ** 2
    scale = 1.0 + float(np.vdot(p, p).real)
    if defect > tol * scale:
        raise NotInClosedDomain(f"2Re(z1)+|z2|^2+|z3|^2 = {defect:.3e} > 0")
    return np.array([p[0], p[1], p[2], 1.0], dtype=np.complex128)


def projectivize(z):
    """Inhomogeneous coordinates (z1/z4, z2/z4, z3/z4)."""
    z = as_vector(z)
    if z[3] == 0:
        raise ValidationError("vector has zero last coordinate (the point at infinity)")
    return z[:3] / z[3]


def bergman_distance(z, w, tol=DEFAULT_TOL):
    """Distance between the points of complex hyperbolic space lifted by z, w."""
    for v in (z, w):
        if classify_vector(v, tol).sign is not Sign.NEGATIVE:
            raise NotNegative("Bergman distance needs negative vectors")
    zw = herm_form(z, w)
    ratio = (zw * np.conj(zw)).real / (norm_sq(z) * norm_sq(w))
    return 2.0 * float(np.arccosh(np.sqrt(max(ratio, 1.0))))


def _fourth_root_phase(d):
    """Unit phase w with w^4 * d real positive, arg w in (-pi/4, pi/4]."""
    phi = -np.angle(d) / 4.0
    if phi <= -np.pi / 4:
        phi += np.pi / 2
    return np.exp(1j * phi)


def normalize_det(frame):
    """Scale all columns by a unit fourth root so the determinant becomes 1."""
    frame = np.asarray(frame, dtype=np.complex128)
    return frame * _fourth_root_phase(np.linalg.det(frame))


def form_complement(vectors, tol=DEFAULT_TOL):
    """Unit-Euclidean-norm vector w with <v, w> = 0 for the given 3 vectors."""
    M = np.column_stack([as_vector(v) for v in vectors])
    _, s, vh = np.linalg.svd(M.conj().T @ H)
    if s[-1] <= tol * s[0]:
        raise DegenerateSpan(f"columns span less than 3 dimensions (sv ratio {s[-1] / s[0]:.2e})")
    return vh[-1].conj()


def complete_frame(c1, c2, c4, tol=DEFAULT_TOL):
    """Third column of the unique SU(3,1) element with columns c1, c2, ., c4."""
    c1, c2, c4 = (as_vector(c) for c in (c1, c2, c4))
    scale = max(np.linalg.norm(c1) * np.linalg.norm(c4), 1.0)
    w = form_complement((c1, c2, c4), tol)
    if abs(norm_sq(w)) <= tol * float(np.vdot(w, w).real):
        raise DegenerateSpan("orthogonal complement is null")
    relations = (
        abs(norm_sq(c1)), abs(norm_sq(c4)), abs(herm_form(c4, c1) - 1),
        abs(norm_sq(c2) - 1), abs(herm_form(c2, c1)), abs(herm_form(c2, c4)),
    )
    if max(relations) > 1e3 * tol * scale:
        raise ValidationError(
            f"columns are not admissible frame columns (worst relation {max(relations):.2e})")
    d = np.linalg.det(np.column_stack([c1, c2, w, c4]))
    return w / d


def _complement_projector(a, r):
    """v -> component of v orthogonal to span(a, r); needs <r, a> = 1."""
    def project(v):
        return v - herm_form(v, r) * a - herm_form(v, a) * r
    return project


def orthonormal_complement(a, r):
    """Orthonormal positive basis (x, y) of {a, r}^perp for null a, r with <r, a> = 1.

    Seeds are standard basis vectors, chosen greedily by largest projected norm
    with ties resolved in the order e2, e3, e1, e4.
    """
    project = _complement_projector(a, r)
    basis = []
    for _ in range(2):
        best = None
        for k in _SEED_ORDER:
            v = project(IDENTITY[k])
            for b in basis:
                v = v - herm_form(v, b) * b
            n = norm_sq(v)
            if best is None or n > best[0] * (1 + 1e-12):
                best = (n, v)
        if best[0] <= 0:
            raise DegenerateSpan("could not span the orthogonal complement")
        basis.append(best[1] / np.sqrt(best[0]))
    return basis[0], basis[1]


def indefinite_gram_schmidt(a, r, tol=DEFAULT_TOL):
    """Frame (a', x, y, r') in SU(3,1) built on the null pair (a, r).

    r is rescaled so that <r', a> = 1, x and y complete an orthonormal basis of
    the complement and the whole frame is then multiplied by a unit fourth root
    of 1/det. Returns the 4x4 matrix whose columns are a', x, y, r'.
    """
    a, r = as_vector(a), as_vector(r)
    for v in (a, r):
        if classify_vector(v, tol).sign is not Sign.NULL:
            raise ValidationError("indefinite_gram_schmidt needs null vectors")
    s = herm_form(r, a)
    if abs(s) <= tol * np.linalg.norm(a) * np.linalg.norm(r):
        raise DegeneratePair("<a, r> vanishes: the null vectors are proportional")
    r = r / s
    x, y = orthonormal_complement(a, r)
    return normalize_det(np.column_stack([a, x, y, r]))


def standard_form_basis(Hp, tol=DEFAULT_TOL):
    """Matrix C with C* Hp C = H for a Hermitian Hp of signature (3, 1).

    The one supported change of basis: coordinates in which another
    signature-(3,1) form is used can be mapped to this module's convention.
    """
    Hp = np.asarray(Hp, dtype=np.complex128)
    if np.linalg.norm(Hp - Hp.conj().T) > tol * max(np.linalg.norm(Hp), 1.0):
        raise ValidationError("form matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(Hp)
    if np.sum(vals > 0) != 3 or np.sum(vals < 0) != 1:
        raise ValidationError("form does not have signature (3, 1)")
    order = np.argsort(-vals)  # three positive first, negative last
    vals, vecs = vals[order], vecs[:, order]
    T_p = vecs / np.sqrt(np.abs(vals))
    s = 1 / np.sqrt(2)
    T_H = np.array([[s, 0, 0, s], [0, 1, 0, 0], [0, 0, 1, 0], [s, 0, 0, -s]],
                   dtype=np.complex128)
    return T_p @ np.linalg.inv(T_H)
