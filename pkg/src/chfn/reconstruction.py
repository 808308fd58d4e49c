"""Build a canonical pair (A, B) from its coordinate record, and test pair conjugacy.

The direct pipeline places A in normal form with a_A = inf and r_A = o,
positions a_B and r_B from the cross-ratio triple, turns the e2-e3 plane so
that the beta equation holds, solves the alpha equation for x_B (or y_B) and
completes the frame of B. A Levenberg-Marquardt refinement over a conjugator
of B is run only if the direct result misses the record.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.optimize import least_squares

from .errors import (
    ChfnError,
    NoConvergence,
    NotNonSingular,
    NotNonSingularResult,
    NoValidAlpha,
    NoValidBeta,
    OffVariety,
    RealCrossRatioLocus,
    ValidationError,
)
from .hermitian import (
    DEFAULT_TOL,
    H,
    certify_group_element,
    complete_frame,
    group_inverse,
    herm_form,
    norm_sq,
    normalize_det,
    orthonormal_complement,
)
from .invariants import (
    HARD_REAL,
    PairInvariants,
    as_decomposition,
    pair_invariants,
    triple_from_values,
)
from .isometry import (
    _label_unit_eigenvalues,
    eigenvalues_from_invariants,
    normal_form_matrix,
)
from .nonsingular import is_nonsingular, require_nonsingular

# direct results whose record mismatch exceeds this are refined
REFINE_THRESHOLD = 1e-10
MAX_ITERATIONS = 200


@dataclass(frozen=True, eq=False)
class CanonicalPair:
    A: np.ndarray
    B: np.ndarray
    residuals: dict
    method: str

    @property
    def max_residual(self):
        return max(self.residuals.values())


def normal_parameters(tau, sigma):
    """(r, theta, phi) of a loxodromic with trace invariants (tau, sigma)."""
    roots = eigenvalues_from_invariants(tau, sigma)
    order = np.argsort(np.abs(roots))
    lmax, lmin = roots[order[-1]], roots[order[0]]
    r = float(np.sqrt(abs(lmax) / abs(lmin)))
    if not r > 1 + 1e-6:
        raise ValidationError("trace invariants do not describe a loxodromic element")
    theta = float(np.angle(lmax))
    units = roots[order[1:3]]
    args = np.angle(units)
    phi = float(args[_label_unit_eigenvalues(theta, args)])
    return r, theta, phi


def _check_variety(X, tol):
    scale = max(1.0, abs(X.X1) ** 2, abs(X.X2) ** 2)
    if X.variety_residual > 1e3 * tol * max(1.0, abs(X.X2)):
        raise OffVariety(f"|X2| - |X1||X3| = {X.variety_residual:.3e}")
    if X.inequality_slack < -1e3 * tol * scale:
        raise OffVariety(f"cross-ratio inequality violated (slack {X.inequality_slack:.3e})")
    if all(abs(v.imag) <= HARD_REAL * (1 + abs(v)) for v in X.values):
        raise RealCrossRatioLocus("all cross-ratios real: the configuration is not determined")


@dataclass(frozen=True)
class Quadruple:
    """Lifts (a_B, inf, o, r_B) with <r_B, a_B> = 1, plus the gauge data."""

    z1: np.ndarray
    z4: np.ndarray
    h: float
    p: complex
    q: float


def realize_quadruple(X, tol=DEFAULT_TOL):
    """Null lifts z1, z4 with [z1, inf, o, z4] etc. reproducing the triple X.

    Gauge: z1 = (1, h, 0, d1) with |d1| = 1 and Re d1 < 0, and
    z4 = (X2 / conj(d1), p, q, X1) with h, q >= 0.
    """
    if not hasattr(X, "X1"):
        X = triple_from_values(*X)
    _check_variety(X, tol)
    X1, X2, X3 = X.X1, X.X2, X.X3
    ratio = X1 * X3 / X2
    d1 = np.exp(0.5j * np.angle(ratio))
    if d1.real > 0:
        d1 = -d1
    if -d1.real <= tol:
        raise RealCrossRatioLocus("z1 lies on the chain through inf and o")
    h = np.sqrt(-2 * d1.real)
    xi4 = X2 / np.conj(d1)
    y4_sq = -2 * (xi4 * np.conj(X1)).real
    p = (1 - X1 - X2) / h
    q = np.sqrt(max(y4_sq - abs(p) ** 2, 0.0))
    z1 = np.array([1.0, h, 0.0, d1], dtype=np.complex128)
    z4 = np.array([xi4, p, q, X1], dtype=np.complex128)
    return Quadruple(z1, z4, float(h), complex(p), float(q))


def _plane_rotation(u):
    """SU(2) matrix with first column along u (second column fixed by det 1)."""
    u = u / np.linalg.norm(u)
    return np.array([[u[0], -np.conj(u[1])], [u[1], np.conj(u[0])]])


def _embed(W):
    G = np.eye(4, dtype=np.complex128)
    G[1:3, 1:3] = W
    return G


def _pin_a_frame(quad, beta, beta_index, tol):
    """Unit vector u in the e2-e3 plane solving the beta equation.

    beta = <u, r_B> <a_A, a_B> / (<a_A, r_B> <u, a_B>) with a_A = inf.
    """
    z1, z4 = quad.z1, quad.z4
    if quad.q <= tol:
        raise RealCrossRatioLocus("a_B, r_B and the axis of A lie on one complex line")
    w = beta * np.conj(z4[3]) / np.conj(z1[3])
    # <u, r_B> = u1 conj(p) + u2 q and <u, a_B> = u1 h, so u2 / u1 = (w h - conj p) / q
    u = np.array([1.0, (w * quad.h - np.conj(quad.p)) / quad.q])
    u = u / np.linalg.norm(u)
    if beta_index == 1:
        return _plane_rotation(u)
    # u is y_A; x_A is the other column of an SU(2) matrix
    return np.column_stack([np.array([np.conj(u[1]), -np.conj(u[0])]), u])


def _solve_positive_direction(a, r, k, tol):
    """Unit v in {a, r}^perp with v1 = k v4."""
    e, f = orthonormal_complement(a, r)
    ce, cf = e[0] - k * e[3], f[0] - k * f[3]
    c = np.array([cf, -ce])
    n = np.linalg.norm(c)
    if n <= tol:
        raise NoValidAlpha("alpha equation is degenerate on the complement plane")
    c /= n
    return c[0] * e + c[1] * f


def direct_pair(P, tol=DEFAULT_TOL):
    """The direct (non-iterative) reconstruction; returns (A, B)."""
    if P.alpha is None or abs(P.alpha) <= tol:
        raise NoValidAlpha("alpha entry is zero")
    if P.beta is None or abs(P.beta) <= tol:
        raise NoValidBeta("beta entry is zero")
    specA = normal_parameters(P.tauA, P.sigmaA)
    specB = normal_parameters(P.tauB, P.sigmaB)
    quad = realize_quadruple(triple_from_values(P.X1, P.X2, P.X3), tol)

    W = _pin_a_frame(quad, P.beta, P.beta_index, tol)
    G = _embed(W.conj().T)
    aB, rB = G @ quad.z1, G @ quad.z4

    # alpha = (x_B)_1 (a_B)_4 / ((a_B)_1 (x_B)_4)
    k = P.alpha * aB[0] / aB[3]
    v = _solve_positive_direction(aB, rB, k, tol)
    if P.alpha_index == 1:
        xB = v
        yB = complete_frame(aB, xB, rB, tol=1e-6)
    else:
        yB = v
        e, f = orthonormal_complement(aB, rB)
        xB = e - herm_form(e, yB) * yB
        xB = xB / np.sqrt(norm_sq(xB))
        d = np.linalg.det(np.column_stack([aB, xB, yB, rB]))
        xB = xB / d
    CB = np.column_stack([aB, xB, yB, rB])
    A = normal_form_matrix(*specA)
    B = CB @ normal_form_matrix(*specB) @ group_inverse(CB)
    return A, B


def record_residuals(P, Q):
    """Per-coordinate mismatch |p - q| / max(1, |p|) between two records."""
    out = {}
    for name in ("tauA", "tauB", "sigmaA", "sigmaB", "X1", "X2", "X3", "alpha", "beta"):
        p, q = getattr(P, name), getattr(Q, name)
        out[name] = float(abs(p - q) / max(1.0, abs(p)))
    return out


def _record_of(A, B, P, tol):
    return pair_invariants(A, B, tol, alpha_index=P.alpha_index, beta_index=P.beta_index)


def _anti_hermitian(params):
    """Anti-Hermitian 4x4 matrix from 16 real parameters."""
    S = np.zeros((4, 4), dtype=np.complex128)
    iu = np.triu_indices(4, 1)
    S[iu] = params[:6] + 1j * params[6:12]
    S = S - S.conj().T
    S[np.diag_indices(4)] = 1j * params[12:16]
    return S


def _refine(A, B0, P, tol):
    target = P.as_vector()
    scale = np.maximum(1.0, np.abs(target))

    def residual(params):
        G = expm(H @ _anti_hermitian(params))
        B = G @ B0 @ group_inverse(G)
        try:
            Q = _record_of(A, B, P, tol)
        except ChfnError:
            return np.full(target.shape, 1e3)
        return (Q.as_vector() - target) / scale

    sol = least_squares(residual, np.zeros(16), method="lm", xtol=1e-15, ftol=1e-15,
                        gtol=1e-15, max_nfev=MAX_ITERATIONS * 17)
    G = expm(H @ _anti_hermitian(sol.x))
    return G @ B0 @ group_inverse(G), float(np.max(np.abs(sol.fun)))


def canonical_pair_from_invariants(P, tol=DEFAULT_TOL, refine=True):
    A, B = direct_pair(P, tol)
    method = "direct"
    try:
        Q = _record_of(A, B, P, tol)
        worst = max(record_residuals(P, Q).values())
    except ChfnError:
        worst = np.inf
    if worst > REFINE_THRESHOLD and refine:
        B, best = _refine(A, B, P, tol)
        method = "refined"
        if best > 1e-10:
            raise NoConvergence("refinement did not reach the record", best)
    if not is_nonsingular(A, B, tol).overall:
        raise NotNonSingularResult("reconstructed pair is singular: inconsistent record")
    Q = _record_of(A, B, P, tol)
    A = certify_group_element(A, 1e-8).matrix
    B = certify_group_element(B, 1e-6).matrix
    return CanonicalPair(A, B, record_residuals(P, Q), method)


def _relative_close(p, q, tol):
    return abs(p - q) <= tol * max(1.0, abs(p))


def _frame_coordinates(F, v):
    """Coordinates of v in the frame F (columns a, x, y, r)."""
    return group_inverse(F) @ v


def _torus_between(dA1, dA2, dB1, dB2):
    """Diagonal D with D (F1^-1 b) proportional to F2^-1 b2 for the B-frame vectors."""
    rows = []
    cols1 = [_frame_coordinates(dA1.frame, v) for v in (dB1.a, dB1.rep, dB1.x, dB1.y)]
    cols2 = [_frame_coordinates(dA2.frame, v) for v in (dB2.a, dB2.rep, dB2.x, dB2.y)]
    # unknowns (d1..d4, c1..c4): d_i v_i - c_k w_i = 0
    for k, (v, w) in enumerate(zip(cols1, cols2)):
        for i in range(4):
            row = np.zeros(8, dtype=np.complex128)
            row[i] = v[i]
            row[4 + k] = -w[i]
            rows.append(row)
    M = np.array(rows)
    _, s, vh = np.linalg.svd(M)
    sol = vh[-1].conj()
    return np.diag(sol[:4]), float(s[-1] / s[0])


def pairs_conjugate(A, B, A2, B2, tol=1e-6):
    """(True, C) with C A C^-1 = A2 and C B C^-1 = B2, or (False, None)."""
    d = [as_decomposition(M) for M in (A, B, A2, B2)]
    for pair in ((d[0], d[1]), (d[2], d[3])):
        require_nonsingular(*pair)
    P = pair_invariants(d[0], d[1])
    try:
        P2 = pair_invariants(d[2], d[3], alpha_index=P.alpha_index, beta_index=P.beta_index)
    except (NoValidAlpha, NoValidBeta, NotNonSingular):
        return False, None
    if not all(_relative_close(getattr(P, n), getattr(P2, n), tol)
               for n in ("tauA", "tauB", "sigmaA", "sigmaB", "X1", "X2", "X3",
                         "alpha", "beta")):
        return False, None

    D, _ = _torus_between(d[0], d[2], d[1], d[3])
    C = d[2].frame @ D @ group_inverse(d[0].frame)
    mu = np.real(np.trace(C.conj().T @ H @ C @ H)) / 4
    if mu <= 0:
        return False, None
    C = normalize_det(C / np.sqrt(mu))
    A, B, A2, B2 = (np.asarray(M, dtype=np.complex128) for M in (A, B, A2, B2))
    Ci = group_inverse(C)
    scale = max(np.linalg.norm(A2), np.linalg.norm(B2))
    err = max(np.linalg.norm(C @ A @ Ci - A2), np.linalg.norm(C @ B @ Ci - B2)) / scale
    if err > 10 * tol:
        return False, None
    try:
        C = certify_group_element(C, max(tol, 1e-9)).matrix
    except ChfnError:
        return False, None
    return True, C


def record_from_pair(A, B, tol=DEFAULT_TOL):
    return pair_invariants(A, B, tol)


__all__ = [
    "CanonicalPair",
    "PairInvariants",
    "canonical_pair_from_invariants",
    "direct_pair",
    "normal_parameters",
    "pairs_conjugate",
    "realize_quadruple",
    "record_residuals",
]
