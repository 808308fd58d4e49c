"""Conjugation invariants of boundary quadruples and of loxodromic pairs.

Everything here is independent of the scaling of the lifts involved. Pair
invariants take :class:`~chfn.isometry.LoxodromicDecomposition` objects (or
plain matrices, which are decomposed on the fly).
"""
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import (
    DegeneratePairing,
    InconsistentRealCrossRatios,
    NoValidAlpha,
    NoValidBeta,
    RealCrossRatioCase,
    SharedFixedPoint,
    UndefinedInvariant,
)
from .hermitian import DEFAULT_TOL, as_vector, herm_form
from .isometry import LoxodromicDecomposition, decompose_loxodromic, trace_invariants

# |Im X| <= HARD_REAL * (1 + |X|) counts as real; up to SOFT_REAL only warns
HARD_REAL = 1e-8
SOFT_REAL = 1e-6


def _pairing(z, w, tol, what):
    """<z, w>, raising DegeneratePairing when it vanishes relative to |z||w|."""
    p = herm_form(z, w)
    if abs(p) <= tol * np.linalg.norm(z) * np.linalg.norm(w):
        raise DegeneratePairing(f"{what} vanishes: the value is projectively infinite")
    return p


def cross_ratio(z1, z2, z3, z4, tol=DEFAULT_TOL):
    """[z1, z2, z3, z4] = <z3, z1><z4, z2> / (<z4, z1><z3, z2>)."""
    z1, z2, z3, z4 = (as_vector(z) for z in (z1, z2, z3, z4))
    den = _pairing(z4, z1, tol, "<z4, z1>") * _pairing(z3, z2, tol, "<z3, z2>")
    return herm_form(z3, z1) * herm_form(z4, z2) / den


@dataclass(frozen=True)
class CrossRatioTriple:
    X1: complex
    X2: complex
    X3: complex
    variety_residual: float
    inequality_slack: float
    equality: bool

    @property
    def corollary_margin(self):
        """2 Re(X1 + X2) - 1, non-negative on the variety."""
        return 2 * (self.X1 + self.X2).real - 1

    @property
    def values(self):
        return (self.X1, self.X2, self.X3)


def variety_measures(X1, X2, X3):
    """(||X2| - |X1||X3||, inequality slack) for a candidate triple."""
    a1, a2 = abs(X1), abs(X2)
    residual = abs(a2 - a1 * abs(X3))
    slack = 2 * a1 ** 2 * X3.real - (a1 ** 2 + a2 ** 2 + 1 - 2 * (X1 + X2).real)
    return float(residual), float(slack)


def triple_from_values(X1, X2, X3, tol=DEFAULT_TOL):
    X1, X2, X3 = complex(X1), complex(X2), complex(X3)
    residual, slack = variety_measures(X1, X2, X3)
    scale = max(1.0, abs(X1) ** 2, abs(X2) ** 2)
    return CrossRatioTriple(X1, X2, X3, residual, slack, abs(slack) <= tol * scale)


def cross_ratio_triple(z1, z2, z3, z4, tol=DEFAULT_TOL):
    X1 = cross_ratio(z1, z2, z3, z4, tol)
    X2 = cross_ratio(z1, z3, z2, z4, tol)
    X3 = cross_ratio(z2, z3, z1, z4, tol)
    return triple_from_values(X1, X2, X3, tol)


def cross_ratio_triples_batch(quadruples):
    """(N, 4, 4) array of lifts -> (N, 3) cross-ratio triples; no degeneracy checks."""
    return kernels.cross_ratio_triples(quadruples)


def cartan_invariant(z1, z2, z3, tol=DEFAULT_TOL):
    """arg(-<z1, z2><z2, z3><z3, z1>), a value in [-pi/2, pi/2]."""
    z1, z2, z3 = (as_vector(z) for z in (z1, z2, z3))
    p = -(_pairing(z1, z2, tol, "<z1, z2>") * _pairing(z2, z3, tol, "<z2, z3>")
          * _pairing(z3, z1, tol, "<z3, z1>"))
    return float(np.angle(p))


def _wrap(angle):
    return float((angle + np.pi) % (2 * np.pi) - np.pi)


def angle_relations(z1, z2, z3, z4, tol=DEFAULT_TOL):
    """Residuals (mod 2 pi) of the two relations between Cartan angles and cross-ratios.

    With A1 = A(z4, z3, z2) and A2 = A(z3, z2, z1):
    A1 + A2 = arg(conj(X1) X2) and A1 - A2 = arg(X3). Only asserted when all
    three cross-ratios are non-real.
    """
    t = cross_ratio_triple(z1, z2, z3, z4, tol)
    for X in t.values:
        size = abs(X.imag) / (1 + abs(X))
        if size <= HARD_REAL:
            raise RealCrossRatioCase("a cross-ratio is real; the angle relations do not apply")
        if size <= SOFT_REAL:
            warnings.warn("cross-ratio is nearly real; angle relations are ill-conditioned",
                          RuntimeWarning, stacklevel=2)
    A1 = cartan_invariant(z4, z3, z2, tol)
    A2 = cartan_invariant(z3, z2, z1, tol)
    r1 = _wrap(A1 + A2 - np.angle(np.conj(t.X1) * t.X2))
    r2 = _wrap(A1 - A2 - np.angle(t.X3))
    return abs(r1), abs(r2)


class Coplanarity(Enum):
    CHAIN = "chain"
    TOTALLY_REAL = "totally_real"
    GENERIC = "generic"


def coplanarity_classify(z1, z2, z3, z4, tol=DEFAULT_TOL):
    t = cross_ratio_triple(z1, z2, z3, z4, tol)
    if any(abs(X.imag) > tol * (1 + abs(X)) for X in t.values):
        return Coplanarity.GENERIC
    ratio = t.X2 / t.X1
    scale = 1 + abs(ratio)
    if abs(t.X3 + ratio) <= tol * scale:
        return Coplanarity.CHAIN
    if abs(t.X3 - ratio) <= tol * scale:
        return Coplanarity.TOTALLY_REAL
    raise InconsistentRealCrossRatios("all cross-ratios real but neither sign relation holds")


# -- pair invariants ----------------------------------------------------------

def as_decomposition(A, tol=DEFAULT_TOL):
    if isinstance(A, LoxodromicDecomposition):
        return A
    return decompose_loxodromic(A, tol)


def line_angle(u, v):
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    c = np.vdot(u, v)
    # atan2 of the orthogonal part stays accurate for nearly equal lines
    return float(np.arctan2(np.linalg.norm(v - c * u), abs(c)))


def shared_fixed_points(dA, dB, tol=DEFAULT_TOL):
    """Fixed null lines of A that coincide (within angle ``tol``) with one of B."""
    found = []
    for u in (dA.a, dA.rep):
        for v in (dB.a, dB.rep):
            if line_angle(u, v) <= tol:
                found.append(u)
                break
    return found


def eta(a, r, x):
    """eta(a, r; x) = <a, x><x, r> / (<a, r><x, x>)."""
    return herm_form(a, x) * herm_form(x, r) / (herm_form(a, r) * herm_form(x, x))


@dataclass(frozen=True)
class EtaSet:
    eta1: complex
    eta2: complex
    nu1: complex
    nu2: complex
    zeta0_num: complex
    zeta0_den: complex
    # pairings scale-normalized so callers can apply vanishing thresholds
    eta_scales: tuple = (1.0, 1.0)
    nu_scales: tuple = (1.0, 1.0)

    @property
    def zeta0(self):
        if self.zeta0_den == 0:
            return complex("inf")
        return self.zeta0_num / self.zeta0_den

    def zeta0_is_zero(self, tol=DEFAULT_TOL):
        return abs(self.zeta0_num) <= tol * max(abs(self.zeta0_den), 1.0)

    def zeta0_is_infinite(self, tol=DEFAULT_TOL):
        return abs(self.zeta0_den) <= tol * max(abs(self.zeta0_num), 1.0)


def _require_distinct(dA, dB, tol):
    if shared_fixed_points(dA, dB, tol):
        raise SharedFixedPoint("the loxodromics share a fixed point")


def _unit(v):
    return v / np.linalg.norm(v)


def eta_invariants(A, B, tol=DEFAULT_TOL):
    """eta_i = eta(a_A, r_A; x_B / y_B), nu_i = eta(a_B, r_B; x_A / y_A) and zeta0."""
    dA, dB = as_decomposition(A, tol), as_decomposition(B, tol)
    _require_distinct(dA, dB, tol)
    aA, rA, aB, rB = (_unit(v) for v in (dA.a, dA.rep, dB.a, dB.rep))
    etas = (eta(aA, rA, dB.x), eta(aA, rA, dB.y))
    nus = (eta(aB, rB, dA.x), eta(aB, rB, dA.y))
    eta_scales = tuple(abs(herm_form(aA, rA)) ** -1 for _ in range(2))
    nu_scales = tuple(abs(herm_form(aB, rB)) ** -1 for _ in range(2))
    num = herm_form(dB.x, dA.y) * herm_form(dB.y, dA.x)
    den = herm_form(dB.x, dA.x) * herm_form(dB.y, dA.y)
    return EtaSet(etas[0], etas[1], nus[0], nus[1], num, den, eta_scales, nu_scales)


@dataclass(frozen=True)
class AlphaBeta:
    alpha1: complex = None
    alpha2: complex = None
    beta1: complex = None
    beta2: complex = None
    chosen_alpha_index: int = None
    chosen_beta_index: int = None

    def alpha(self, index=None):
        index = index or self.chosen_alpha_index
        return self.alpha1 if index == 1 else self.alpha2

    def beta(self, index=None):
        index = index or self.chosen_beta_index
        return self.beta1 if index == 1 else self.beta2


def _defined_cross_ratio(z1, z2, z3, z4, tol):
    """Cross-ratio, or None when one of its denominator pairings vanishes."""
    try:
        return cross_ratio(z1, z2, z3, z4, tol)
    except DegeneratePairing:
        return None


def alpha_values(dA, dB, tol=DEFAULT_TOL):
    """(alpha1, alpha2): X(r_A, a_A, x_B, a_B) and X(r_A, a_A, y_B, a_B)."""
    return tuple(_defined_cross_ratio(dA.rep, dA.a, v, dB.a, tol) for v in (dB.x, dB.y))


def beta_values(dA, dB, tol=DEFAULT_TOL):
    """(beta1, beta2): X(r_B, a_B, x_A, a_A) and X(r_B, a_B, y_A, a_A)."""
    return tuple(_defined_cross_ratio(dB.rep, dB.a, v, dA.a, tol) for v in (dA.x, dA.y))


def _valid(value, tol):
    return value is not None and abs(value) > tol


def alpha_beta_invariants(A, B, tol=DEFAULT_TOL):
    dA, dB = as_decomposition(A, tol), as_decomposition(B, tol)
    _require_distinct(dA, dB, tol)
    al, be = alpha_values(dA, dB, tol), beta_values(dA, dB, tol)
    ia = next((i + 1 for i in range(2) if _valid(al[i], tol)), None)
    ib = next((i + 1 for i in range(2) if _valid(be[i], tol)), None)
    if ia is None:
        raise NoValidAlpha("no alpha invariant is defined and non-zero")
    if ib is None:
        raise NoValidBeta("no beta invariant is defined and non-zero")
    return AlphaBeta(al[0], al[1], be[0], be[1], ia, ib)


@dataclass(frozen=True)
class PairInvariants:
    """The 15 real coordinates of a non-singular pair up to conjugacy."""

    tauA: complex
    tauB: complex
    sigmaA: float
    sigmaB: float
    X1: complex
    X2: complex
    X3: complex
    alpha_index: int
    alpha: complex
    beta_index: int
    beta: complex

    @property
    def cross_ratios(self):
        return triple_from_values(self.X1, self.X2, self.X3)

    def as_vector(self):
        """Real vector of the coordinates (16 entries; |X2| = |X1||X3| removes one)."""
        c = (self.tauA, self.tauB, self.X1, self.X2, self.X3, self.alpha, self.beta)
        out = [self.sigmaA, self.sigmaB]
        for z in c:
            out.extend((z.real, z.imag))
        return np.array(out)


def pair_cross_ratios(dA, dB, tol=DEFAULT_TOL):
    """X1 = [a_B, a_A, r_A, r_B], X2 = [a_B, r_A, a_A, r_B], X3 = [a_A, r_A, a_B, r_B]."""
    return cross_ratio_triple(dB.a, dA.a, dA.rep, dB.rep, tol)


def pair_invariants(A, B, tol=DEFAULT_TOL, alpha_index=None, beta_index=None):
    """Coordinate record of a non-singular pair.

    ``alpha_index`` / ``beta_index`` override the default (smallest valid index).
    """
    from .nonsingular import require_nonsingular

    dA, dB = as_decomposition(A, tol), as_decomposition(B, tol)
    require_nonsingular(dA, dB, tol)
    tA = trace_invariants(dA.matrix() if not _is_matrix(A) else A)
    tB = trace_invariants(dB.matrix() if not _is_matrix(B) else B)
    X = pair_cross_ratios(dA, dB, tol)
    ab = alpha_beta_invariants(dA, dB, tol)
    ia = alpha_index or ab.chosen_alpha_index
    ib = beta_index or ab.chosen_beta_index
    if not _valid(ab.alpha(ia), tol):
        raise NoValidAlpha(f"alpha{ia} is undefined or zero")
    if not _valid(ab.beta(ib), tol):
        raise NoValidBeta(f"beta{ib} is undefined or zero")
    return PairInvariants(tA.tau, tB.tau, tA.sigma, tB.sigma, X.X1, X.X2, X.X3,
                          ia, ab.alpha(ia), ib, ab.beta(ib))


def _is_matrix(A):
    return not isinstance(A, LoxodromicDecomposition)


def identity_relations(A, B, tol=DEFAULT_TOL):
    """Residuals of the four identities tying eta, nu, alpha, beta and X.

        eta1 conj(a1) + eta2 conj(a2) = -(X2 + conj(X3) conj(X1))
        nu1 conj(b1) + nu2 conj(b2)   = -(conj(X2) + X3 conj(X1))
        eta1 / a1 + eta2 / a2         = -(conj(X1) + X2 / X3)
        nu1 / b1 + nu2 / b2           = -(conj(X1) + conj(X2) / conj(X3))
    """
    dA, dB = as_decomposition(A, tol), as_decomposition(B, tol)
    _require_distinct(dA, dB, tol)
    e = eta_invariants(dA, dB, tol)
    al, be = alpha_values(dA, dB, tol), beta_values(dA, dB, tol)
    if any(v is None or abs(v) <= tol for v in al + be):
        raise UndefinedInvariant("an alpha or beta invariant is undefined or zero")
    X = pair_cross_ratios(dA, dB, tol)
    X1, X2, X3 = X.X1, X.X2, X.X3
    c = np.conj
    return (
        abs(e.eta1 * c(al[0]) + e.eta2 * c(al[1]) + (X2 + c(X3) * c(X1))),
        abs(e.nu1 * c(be[0]) + e.nu2 * c(be[1]) + (c(X2) + X3 * c(X1))),
        abs(e.eta1 / al[0] + e.eta2 / al[1] + (c(X1) + X2 / X3)),
        abs(e.nu1 / be[0] + e.nu2 / be[1] + (c(X1) + c(X2) / c(X3))),
    )
