"""Classification, loxodromic normal form and trace invariants.

A loxodromic A is written A = C E(r, theta, phi) C^-1 where

    E(r, theta, phi) = diag(r e^{i theta}, e^{i phi}, e^{-i(2 theta + phi)}, r^-1 e^{i theta})

and C has columns (a, x, y, r): attracting and repelling null eigenvectors
normalized by <r, a> = 1, and unit positive eigenvectors x, y.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DegenerateUnitEigenvalues,
    NearBoundaryAmbiguous,
    NotLoxodromic,
    OutOfRegion,
)
from .hermitian import (
    DEFAULT_TOL,
    H,
    as_matrix,
    certify_group_element,
    group_inverse,
    herm_form,
    norm_sq,
    orthonormal_complement,
)

# |lambda| - 1 band: above LOX_GAP is loxodromic, below UNIT_GAP is unit modulus
LOX_GAP = 1e-6
UNIT_GAP = 1e-7
# eigenvalues closer than this (relative) are treated as one cluster
CLUSTER_RADIUS = 1e-5
# two unit eigenvalues closer than this make the x/y frame non-unique
DEGENERATE_GAP = 1e-8
# first coordinate above this fraction of max|.| fixes the phase of x and y
_PHASE_THRESHOLD = 1e-6


class Kind(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    LOXODROMIC = "loxodromic"


@dataclass(frozen=True)
class IsometryClass:
    kind: Kind
    eigenvalues: np.ndarray
    boundary_fixed_points: tuple = ()
    attracting: np.ndarray = None
    repelling: np.ndarray = None
    interior_fixed_point: np.ndarray = None
    modulus_deviation: float = 0.0


@dataclass(frozen=True)
class TraceInvariants:
    tau: complex
    sigma: float
    sigma_imag_residual: float


@dataclass(frozen=True, eq=False)
class LoxodromicDecomposition:
    r: float
    theta: float
    phi: float
    frame: np.ndarray
    residual: float
    degenerate: bool = field(default=False)

    @property
    def a(self):
        return self.frame[:, 0]

    @property
    def x(self):
        return self.frame[:, 1]

    @property
    def y(self):
        return self.frame[:, 2]

    @property
    def rep(self):
        """Repelling null eigenvector (the frame's last column)."""
        return self.frame[:, 3]

    @property
    def lam(self):
        """Complex length ln r + i theta of the E(lambda, psi) form."""
        return complex(np.log(self.r), self.theta)

    @property
    def psi(self):
        return -self.phi - self.theta

    def normal_form(self):
        return normal_form_matrix(self.r, self.theta, self.phi)

    def matrix(self):
        return self.frame @ self.normal_form() @ group_inverse(self.frame)


def normal_form_matrix(r, theta, phi):
    return np.diag([
        r * np.exp(1j * theta),
        np.exp(1j * phi),
        np.exp(-1j * (2 * theta + phi)),
        np.exp(1j * theta) / r,
    ]).astype(np.complex128)


def normal_form(r, theta, phi, tol=DEFAULT_TOL):
    """Certified E(r, theta, phi); r must exceed 1."""
    if not r > 1:
        raise OutOfRegion(f"normal form needs r > 1, got {r}")
    return certify_group_element(normal_form_matrix(r, theta, phi), tol)


def complex_length_form(lam, psi):
    """E(lambda, psi) = diag(e^l, e^{-i psi - i Im l}, e^{i psi - i Im l}, e^{-conj l}).

    Unlike :func:`normal_form` no loxodromy is required: Re lambda = 0 gives a
    boundary elliptic element.
    """
    lam = complex(lam)
    shift = -1j * lam.imag
    return np.diag([
        np.exp(lam),
        np.exp(-1j * psi + shift),
        np.exp(1j * psi + shift),
        np.exp(-np.conj(lam)),
    ]).astype(np.complex128)


def _clusters(values, radius):
    """Single-linkage groups of indices whose values lie within ``radius``."""
    n = len(values)
    labels = list(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= radius * max(1.0, abs(values[i])):
                old, new = labels[j], labels[i]
                labels = [new if lab == old else lab for lab in labels]
    groups = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    return list(groups.values())


def _eigenspace(A, mu, tol):
    """Orthonormal (Euclidean) basis of ker(A - mu I)."""
    _, s, vh = np.linalg.svd(A - mu * np.eye(4))
    scale = max(1.0, s[0])
    k = int(np.sum(s <= tol * scale))
    return vh[4 - k:].conj().T if k else np.zeros((4, 0), dtype=np.complex128)


def classify_isometry(A, tol=DEFAULT_TOL):
    A = as_matrix(A)
    vals = np.linalg.eigvals(A)
    # perturbation seen by the eigenvalues grows with the conditioning ~ ||A||^2
    eps = np.finfo(float).eps * max(1.0, np.linalg.norm(A)) ** 2
    groups = _clusters(vals, max(CLUSTER_RADIUS, 10 * eps ** (1.0 / 3)))
    means = np.empty(4, dtype=np.complex128)
    for g in groups:
        means[g] = np.mean(vals[g])
    dev = float(np.max(np.abs(np.abs(means) - 1.0)))
    if dev >= LOX_GAP:
        order = np.argsort(np.abs(vals))
        a = _null_eigenvector(A, vals[order[-1]])
        r = _null_eigenvector(A, vals[order[0]])
        return IsometryClass(Kind.LOXODROMIC, vals, (a, r), a, r, None, dev)
    if dev > UNIT_GAP:
        raise NearBoundaryAmbiguous(
            f"eigenvalue moduli deviate from 1 by {dev:.2e}, inside the ambiguity band")
    # a cluster may hide a barely loxodromic pair r e^{it}, e^{it}/r; only
    # accept the spread a perturbed Jordan block of that size would show
    for g in groups:
        spread = float(np.max(np.abs(np.abs(vals[g]) - 1.0)))
        allowed = max(UNIT_GAP, 10 * eps ** (1.0 / len(g)))
        if spread > allowed:
            raise NearBoundaryAmbiguous(
                f"clustered eigenvalue moduli deviate from 1 by {spread:.2e}")

    null_points, negative, dims = [], None, 0
    for g in groups:
        basis = _eigenspace(A, means[g[0]], 1e-7)
        dims += basis.shape[1]
        if basis.shape[1] == 0:
            continue
        gram = basis.conj().T @ H @ basis
        w, u = np.linalg.eigh(gram)
        if w[0] < -tol:
            negative = basis @ u[:, 0]
        else:
            for k in np.flatnonzero(np.abs(w) <= 1e-7 * max(1.0, abs(w[-1]))):
                v = basis @ u[:, k]
                null_points.append(v / np.linalg.norm(v))
    if negative is not None:
        return IsometryClass(Kind.ELLIPTIC, vals, tuple(null_points), None, None,
                             negative / np.linalg.norm(negative), dev)
    return IsometryClass(Kind.PARABOLIC, vals, tuple(null_points), None, None, None, dev)


def _phase_fix(v):
    """Rotate v so its first significant coordinate is real positive."""
    big = np.max(np.abs(v))
    k = int(np.flatnonzero(np.abs(v) > _PHASE_THRESHOLD * big)[0])
    return v * (abs(v[k]) / v[k])


def _label_unit_eigenvalues(theta, args):
    """Index of the unit eigenvalue labeled e^{i phi}.

    Prefer the largest argument not exceeding theta (so theta >= phi); if
    neither qualifies take the smaller argument.
    """
    ok = [k for k in (0, 1) if args[k] <= theta + 1e-12]
    if ok:
        return max(ok, key=lambda k: args[k])
    return 0 if args[0] <= args[1] else 1


def _null_eigenvector(A, lam):
    _, _, vh = np.linalg.svd(A - lam * np.eye(4))
    return vh[-1].conj()


def decompose_loxodromic(A, tol=DEFAULT_TOL, allow_degenerate=False):
    """Eigen-data (r, theta, phi) and the frame C with A = C E C^-1.

    With ``allow_degenerate`` a repeated unit eigenvalue is accepted and x, y
    are taken as the canonical orthonormal basis of {a, r}^perp.
    """
    A = as_matrix(A)
    cls = classify_isometry(A, tol)
    if cls.kind is not Kind.LOXODROMIC:
        raise NotLoxodromic(f"element is {cls.kind.value}")
    vals = np.linalg.eigvals(A)
    order = np.argsort(np.abs(vals))
    lmax, lmin = vals[order[-1]], vals[order[0]]
    r = float(np.sqrt(abs(lmax) / abs(lmin)))
    if r - 1 < LOX_GAP:
        raise NearBoundaryAmbiguous(f"r - 1 = {r - 1:.2e}: too close to parabolic to decompose")
    theta = float(np.angle(lmax))
    units = vals[order[1:3]]
    a = _null_eigenvector(A, lmax)
    rv = _null_eigenvector(A, lmin)
    s = herm_form(rv, a)
    rv = rv / s
    scale = np.sqrt(np.linalg.norm(rv) / np.linalg.norm(a))
    a, rv = a * scale, rv / scale

    degenerate = abs(units[0] - units[1]) < DEGENERATE_GAP
    if degenerate:
        if not allow_degenerate:
            raise DegenerateUnitEigenvalues(
                "the two unit-modulus eigenvalues coincide; x and y are not unique")
        phi = float(np.angle(np.mean(units)))
        x, y = orthonormal_complement(a, rv)
    else:
        args = np.angle(units)
        k = _label_unit_eigenvalues(theta, args)
        phi = float(args[k])
        x = _null_eigenvector(A, units[k])
        y = _null_eigenvector(A, units[1 - k])
        x = x / np.sqrt(norm_sq(x))
        y = y / np.sqrt(norm_sq(y))
    x, y = _phase_fix(x), _phase_fix(y)

    frame = np.column_stack([a, x, y, rv])
    omega = -np.angle(np.linalg.det(frame)) / 2
    twist = np.exp(1j * omega)
    lead = a[int(np.flatnonzero(np.abs(a) > _PHASE_THRESHOLD * np.max(np.abs(a)))[0])]
    if not -np.pi / 2 < np.angle(lead * twist) <= np.pi / 2:
        twist = -twist
    frame[:, 0] *= twist
    frame[:, 3] *= twist
    E = normal_form_matrix(r, theta, phi)
    residual = float(np.linalg.norm(frame @ E @ group_inverse(frame) - A))
    frame.setflags(write=False)
    return LoxodromicDecomposition(r, theta, phi, frame, residual, degenerate)


def trace_invariants(A):
    A = as_matrix(A)
    tau = complex(np.trace(A))
    s = 0.5 * (tau * tau - np.trace(A @ A))
    return TraceInvariants(tau, float(s.real), float(abs(s.imag)))


def characteristic_coefficients(tau, sigma):
    """Coefficients of X^4 - tau X^3 + sigma X^2 - conj(tau) X + 1, highest first."""
    tau = complex(tau)
    return np.array([1.0, -tau, complex(sigma), -np.conj(tau), 1.0], dtype=np.complex128)


def cayley_hamilton_residual(A):
    """||chi_A(A)|| / max(1, ||A||)^4 with chi built from (tau, sigma)."""
    A = as_matrix(A)
    inv = trace_invariants(A)
    c = characteristic_coefficients(inv.tau, inv.sigma)
    P = np.zeros((4, 4), dtype=np.complex128)
    for coef in c:  # Horner
        P = P @ A + coef * np.eye(4)
    return float(np.linalg.norm(P) / max(1.0, np.linalg.norm(A)) ** 4)


def eigenvalues_from_invariants(tau, sigma):
    """Roots of the characteristic quartic, via companion matrix and Newton polish."""
    c = characteristic_coefficients(tau, sigma)
    roots = np.roots(c).astype(np.complex128)
    poly = np.poly1d(c)
    derivs = [poly.deriv(k) for k in range(4)]
    scale = float(np.sum(np.abs(c)))
    out = roots.copy()
    for g in _clusters(roots, 1e-3):
        if len(g) > 1:
            m = np.mean(roots[g])
            bound = 1e-8 * scale * max(1.0, abs(m)) ** 4
            if all(abs(derivs[k](m)) <= bound for k in range(len(g))):
                out[g] = m
                continue
        for i in g:
            x = roots[i]
            d = derivs[1](x)
            if d != 0:
                step = x - poly(x) / d
                if abs(poly(step)) < abs(poly(x)):
                    x = step
            out[i] = x
    return out


def loxodromic_conjugate(A, B, tol=DEFAULT_TOL):
    for M in (A, B):
        if classify_isometry(M).kind is not Kind.LOXODROMIC:
            raise NotLoxodromic("conjugacy test needs two loxodromics")
    ia, ib = trace_invariants(A), trace_invariants(B)
    return abs(ia.tau - ib.tau) <= tol and abs(ia.sigma - ib.sigma) <= tol
