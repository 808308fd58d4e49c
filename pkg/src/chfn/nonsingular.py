"""Non-singularity of loxodromic pairs and the C^2-plane reducibility detector."""
from dataclasses import dataclass, field

import numpy as np

from .errors import NotLoxodromic, NotNonSingular
from .hermitian import DEFAULT_TOL, form_complement, herm_form, norm_sq
from .invariants import as_decomposition, eta_invariants, line_angle, shared_fixed_points
from .isometry import LoxodromicDecomposition, decompose_loxodromic

# relative singular-value gap below which four fixed points span at most C^3
CHAIN_GAP = 1e-8
# a pairing <u, v> vanishes when |<u, v>| <= PAIRING_TOL * |u| |v|
PAIRING_TOL = 1e-9
# eta / nu / zeta0 vanishing threshold used by the reducibility detector
REDUCIBLE_TOL = 1e-7
# largest angle between the two eigenlines of a reported common eigenvector
WITNESS_ANGLE = 1e-6


@dataclass(frozen=True)
class ChainWitness:
    polar: np.ndarray
    gap: float


@dataclass(frozen=True)
class NonSingularityReport:
    condition_i: bool
    condition_ii: bool
    condition_iii: bool
    shared_points: tuple = ()
    chain_gap: float = 0.0
    polar: np.ndarray = None
    eta_indices: tuple = ()
    nu_indices: tuple = ()
    details: dict = field(default_factory=dict)

    @property
    def overall(self):
        return self.condition_i and self.condition_ii and self.condition_iii

    def failed_condition(self):
        for name, ok in (("i", self.condition_i), ("ii", self.condition_ii),
                         ("iii", self.condition_iii)):
            if not ok:
                return name
        return None


def _decompose(A, tol, fixed_points_only=False):
    try:
        if fixed_points_only and not isinstance(A, LoxodromicDecomposition):
            # a and r are well defined even when x and y are not
            return decompose_loxodromic(A, tol, allow_degenerate=True)
        return as_decomposition(A, tol)
    except NotLoxodromic:
        raise
    except Exception as exc:  # near-parabolic or degenerate frames
        if isinstance(A, LoxodromicDecomposition):
            raise
        raise NotLoxodromic(str(exc)) from exc


def common_fixed_point(A, B, tol=DEFAULT_TOL):
    """A shared fixed null line (as a unit vector), or None."""
    found = shared_fixed_points(_decompose(A, tol, True), _decompose(B, tol, True), tol)
    return found[0] if found else None


def _unit(v):
    return v / np.linalg.norm(v)


def chain_gap(dA, dB):
    """Ratio of smallest to largest singular value of [a_A, r_A, a_B, r_B]."""
    M = np.column_stack([_unit(v) for v in (dA.a, dA.rep, dB.a, dB.rep)])
    s = np.linalg.svd(M, compute_uv=False)
    return float(s[-1] / s[0])


def common_c2_chain(A, B, tol=CHAIN_GAP):
    """Polar vector of a C^2-chain through all four fixed points, or None."""
    dA, dB = _decompose(A, DEFAULT_TOL, True), _decompose(B, DEFAULT_TOL, True)
    M = np.column_stack([_unit(v) for v in (dA.a, dA.rep, dB.a, dB.rep)])
    u, s, _ = np.linalg.svd(M)
    gap = float(s[-1] / s[0])
    if gap > tol:
        return None
    c = form_complement([u[:, 0], u[:, 1], u[:, 2]], tol=0.0)
    if norm_sq(c) < 0:
        c = -c
    return ChainWitness(c / np.sqrt(abs(norm_sq(c))), gap)


def _pairing_nonzero(u, v):
    return abs(herm_form(u, v)) > PAIRING_TOL * np.linalg.norm(u) * np.linalg.norm(v)


def _valid_eta_indices(a, r, xs):
    return tuple(i + 1 for i, x in enumerate(xs)
                 if _pairing_nonzero(a, x) and _pairing_nonzero(x, r))


def nonsingularity_report(A, B, tol=DEFAULT_TOL):
    dA, dB = _decompose(A, tol), _decompose(B, tol)
    shared = tuple(shared_fixed_points(dA, dB, tol))
    gap = chain_gap(dA, dB)
    polar = None
    if gap <= CHAIN_GAP:
        polar = common_c2_chain(dA, dB).polar
    eta_idx = _valid_eta_indices(dA.a, dA.rep, (dB.x, dB.y))
    nu_idx = _valid_eta_indices(dB.a, dB.rep, (dA.x, dA.y))
    return NonSingularityReport(
        condition_i=not shared,
        condition_ii=gap > CHAIN_GAP,
        condition_iii=bool(eta_idx) and bool(nu_idx),
        shared_points=shared,
        chain_gap=gap,
        polar=polar,
        eta_indices=eta_idx,
        nu_indices=nu_idx,
    )


def is_nonsingular(A, B, tol=DEFAULT_TOL):
    """Full report; ``report.overall`` is the verdict."""
    return nonsingularity_report(A, B, tol)


def require_nonsingular(A, B, tol=DEFAULT_TOL):
    report = nonsingularity_report(A, B, tol)
    if not report.overall:
        raise NotNonSingular(report.failed_condition())
    return report


@dataclass(frozen=True)
class ReducibilityWitness:
    vector: np.ndarray
    case: str


def _small(value, tol):
    return abs(value) <= tol


def reducibility_witness(A, B, tol=REDUCIBLE_TOL):
    """Common positive eigenvector certified by the eta / nu / zeta0 pattern.

    Four cases are checked: zeta0 = 0 with (eta1, nu1) = 0 (x_A = x_B) or
    (eta2, nu2) = 0 (y_A = y_B); zeta0 = infinity with (eta1, nu2) = 0
    (x_B = y_A) or (eta2, nu1) = 0 (y_B = x_A).
    """
    dA, dB = _decompose(A, DEFAULT_TOL), _decompose(B, DEFAULT_TOL)
    e = eta_invariants(dA, dB, DEFAULT_TOL)
    candidates = []
    if e.zeta0_is_zero(tol):
        if _small(e.eta1, tol) and _small(e.nu1, tol):
            candidates.append(("x_A = x_B", dA.x, dB.x))
        if _small(e.eta2, tol) and _small(e.nu2, tol):
            candidates.append(("y_A = y_B", dA.y, dB.y))
    if e.zeta0_is_infinite(tol):
        if _small(e.eta1, tol) and _small(e.nu2, tol):
            candidates.append(("x_B = y_A", dA.y, dB.x))
        if _small(e.eta2, tol) and _small(e.nu1, tol):
            candidates.append(("y_B = x_A", dA.x, dB.y))
    for case, u, v in candidates:
        # the two eigenvectors must span one line
        if line_angle(u, v) <= WITNESS_ANGLE:
            return ReducibilityWitness(u / np.sqrt(norm_sq(u)), case)
    return None
