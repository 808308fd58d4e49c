"""Twist-bends, (0,4) and (1,1) groups, and assembly of closed-surface representations.

Conventions
-----------
* A twist-bend (kappa, psi) relative to a loxodromic A = Q E Q^-1 is the
  element K = Q E(kappa, psi) Q^-1. K only depends on the eigenlines of A, so
  any normalization of Q gives the same K.
* The tilde invariants recover (kappa, psi) up to the centre: (kappa, psi) and
  (kappa + i pi/2, psi - pi) give K and iK. Inversion returns the
  representative with Im kappa in (-pi/4, pi/4] and psi in (-pi, pi].
* Surfaces use a fixed pants graph (see :func:`assemble_surface`).
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BudgetMismatch,
    ChfnError,
    DegeneratePairing,
    IncompatibleBoundary,
    NotLoxodromic,
    NotNonSingular,
    PeripheralNotLoxodromic,
    ReconstructionFailure,
    ValidationError,
)
from .hermitian import DEFAULT_TOL, as_matrix, certify_group_element, group_inverse, herm_form
from .invariants import PairInvariants, as_decomposition, pair_invariants
from .isometry import (
    Kind,
    LoxodromicDecomposition,
    classify_isometry,
    complex_length_form,
    decompose_loxodromic,
    trace_invariants,
)
from .nonsingular import require_nonsingular
from .reconstruction import canonical_pair_from_invariants

CURVE_TOL = 1e-8
CENTER = (1, 1j, -1, -1j)


# -- twist-bends ------------------------------------------------------------

def _reference(A):
    if isinstance(A, LoxodromicDecomposition):
        return A
    try:
        return decompose_loxodromic(A, allow_degenerate=True)
    except NotLoxodromic:
        raise
    except ChfnError as exc:
        raise NotLoxodromic(str(exc)) from exc


@dataclass(frozen=True, eq=False)
class TwistBend:
    kappa: complex
    psi: float
    reference: LoxodromicDecomposition

    def matrix(self):
        Q = self.reference.frame
        return Q @ complex_length_form(self.kappa, self.psi) @ group_inverse(Q)


def twist_bend_element(A, kappa, psi, tol=DEFAULT_TOL):
    """K = Q E(kappa, psi) Q^-1 in the eigenframe Q of A (certified)."""
    K = TwistBend(complex(kappa), float(psi), _reference(A)).matrix()
    return certify_group_element(K, max(tol, 1e-9 * np.linalg.norm(K) ** 2)).matrix


def make_twist(A, kappa, psi):
    return TwistBend(complex(kappa), float(psi), _reference(A))


def canonical_twist(kappa, psi):
    """Representative of (kappa, psi) modulo the centre."""
    kappa, psi = complex(kappa), float(psi)
    k = np.floor((kappa.imag + np.pi / 4) / (np.pi / 2))
    im = kappa.imag - k * np.pi / 2
    if im <= -np.pi / 4:  # boundary case of the half-open interval
        im += np.pi / 2
        k -= 1
    psi = psi + k * np.pi
    psi = float(np.angle(np.exp(1j * psi)))
    return complex(kappa.real, im), psi


@dataclass(frozen=True)
class TildeInvariants:
    X1: complex
    X2: complex
    beta1: complex
    beta2: complex

    def as_tuple(self):
        return (self.X1, self.X2, self.beta1, self.beta2)


def _frame_data(A, B, C):
    dA = _reference(A)
    aB = as_decomposition(B).a
    rC = as_decomposition(C).rep
    Qi = group_inverse(dA.frame)
    return dA, Qi @ aB, Qi @ rC


def tilde_invariants(A, B, C, K, tol=DEFAULT_TOL):
    """Cross-ratios [a_B, a_A, r_A, K r_C], [a_B, r_A, a_A, K r_C] and the two beta-tildes.

    ``K`` is a :class:`TwistBend` oriented with A (or a (kappa, psi) tuple).
    """
    from .invariants import cross_ratio

    dA = _reference(A)
    if not isinstance(K, TwistBend):
        K = TwistBend(complex(K[0]), float(K[1]), dA)
    Km = K.matrix()
    aB = as_decomposition(B).a
    kr = Km @ as_decomposition(C).rep
    X1 = cross_ratio(aB, dA.a, dA.rep, kr, tol)
    X2 = cross_ratio(aB, dA.rep, dA.a, kr, tol)
    b1 = cross_ratio(kr, aB, dA.x, dA.a, tol)
    b2 = cross_ratio(kr, aB, dA.y, dA.a, tol)
    return TildeInvariants(X1, X2, b1, b2)


def twist_from_tilde(A, B, C, tilde, beta_index=None):
    """Recover (kappa, psi) (modulo the centre) from tilde invariants."""
    dA, b, c = _frame_data(A, B, C)
    # X1 / X2 = conj(b1) e^{-conj k} c4 / (conj(b4) e^{k} c1) = e^{-2 Re k} conj(b1) c4 / (conj(b4) c1)
    ratio = tilde.X1 / tilde.X2 * np.conj(b[3]) * c[0] / (np.conj(b[0]) * c[3])
    l = -0.5 * np.log(abs(ratio))
    if beta_index is None:
        beta_index = 1 if abs(c[1] * b[1]) >= abs(c[2] * b[2]) else 2
    if beta_index == 1:
        # beta1 = e^l e^{i(psi + 2 Im k)} conj(c2 / c4) conj(b4 / b2)
        s = np.angle(tilde.beta1 * np.conj(b[1]) * np.conj(c[3])
                     / (np.conj(b[3]) * np.conj(c[1])))
        known = np.exp(-1j * s) * c[1] * np.conj(b[1])
        free = np.exp(1j * s) * c[2] * np.conj(b[2])
    else:
        # beta2 = e^l e^{i(2 Im k - psi)} conj(c3 / c4) conj(b4 / b3)
        s = np.angle(tilde.beta2 * np.conj(b[2]) * np.conj(c[3])
                     / (np.conj(b[3]) * np.conj(c[2])))
        known = np.exp(-1j * s) * c[2] * np.conj(b[2])
        free = np.exp(1j * s) * c[1] * np.conj(b[1])
    # 1 / X1 = [e^l c1 conj(b4) + known + e^-l c4 conj(b1) + free w^-4] / (e^-l c4 conj(b1))
    base = np.exp(-l) * c[3] * np.conj(b[0])
    w_m4 = (base / tilde.X1 - np.exp(l) * c[0] * np.conj(b[3]) - known - base) / free
    im = -np.angle(w_m4) / 4
    psi = s - 2 * im if beta_index == 1 else 2 * im - s
    return canonical_twist(complex(l, im), psi)


# -- pants groups -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PantsGroup:
    A: np.ndarray
    B: np.ndarray
    invariants: PairInvariants

    @property
    def peripherals(self):
        return (self.A, self.B, group_inverse(self.B) @ group_inverse(self.A))


def _require_loxodromic(M, what):
    try:
        kind = classify_isometry(M).kind
    except ChfnError as exc:
        raise PeripheralNotLoxodromic(f"{what}: {exc}") from exc
    if kind is not Kind.LOXODROMIC:
        raise PeripheralNotLoxodromic(f"{what} is {kind.value}")


def make_pants(A, B, tol=DEFAULT_TOL):
    """Validated (0,3) group: A, B, AB loxodromic and the pair non-singular."""
    A, B = as_matrix(A), as_matrix(B)
    for M, what in ((A, "A"), (B, "B"), (A @ B, "AB")):
        _require_loxodromic(M, what)
    return PantsGroup(A, B, pair_invariants(A, B, tol))


@dataclass(frozen=True, eq=False)
class FourHoledGroup:
    generators: tuple
    peripherals: tuple
    records: tuple
    twist: TwistBend
    conjugator: np.ndarray

    @property
    def parameter_count(self):
        return 30


def _close(M, N, tol):
    return np.linalg.norm(M - N) <= tol * max(1.0, np.linalg.norm(M))


def attach_pants(P1, P2, K, tol=CURVE_TOL):
    """Glue P1 = <A, B> and P2 = <C, D> (with A = D^-1) after twisting P2 by K."""
    A, B = P1.A, P1.B
    C, D = P2.A, P2.B
    if not _close(A, group_inverse(D), tol):
        raise IncompatibleBoundary("A and D^-1 differ", curve=0)
    if not isinstance(K, TwistBend):
        K = make_twist(A, *K)
    Km = K.matrix()
    Ki = np.linalg.inv(Km)
    KCK = Km @ C @ Ki
    peripherals = (
        B,
        group_inverse(B) @ group_inverse(A),
        Km @ group_inverse(D) @ group_inverse(C) @ Ki,
        KCK,
    )
    names = ("B", "B^-1 A^-1", "K D^-1 C^-1 K^-1", "K C K^-1")
    for M, what in zip(peripherals, names):
        _require_loxodromic(M, what)
    return FourHoledGroup((A, B, KCK), peripherals, (P1.invariants, P2.invariants), K, Km)


@dataclass(frozen=True, eq=False)
class OneHandleGroup:
    A: np.ndarray
    B: np.ndarray
    commutator: np.ndarray
    twist: TwistBend
    record: PairInvariants


def close_handle(A, B, K, tol=DEFAULT_TOL):
    """The (1,1) group <A, B K> closed from the pants <A, B A^-1 B^-1>."""
    A, B = as_matrix(A), as_matrix(B)
    Bp = B @ group_inverse(A) @ group_inverse(B)
    try:
        record = pair_invariants(A, Bp, tol)
    except NotNonSingular:
        raise
    if abs(np.trace(Bp) - np.conj(np.trace(A))) > CURVE_TOL * max(1.0, abs(np.trace(A))):
        raise IncompatibleBoundary("tr(B A^-1 B^-1) differs from conj(tr A)", curve=0)
    if not isinstance(K, TwistBend):
        K = make_twist(A, *K)
    BK = B @ K.matrix()
    comm = A @ BK @ group_inverse(A) @ np.linalg.inv(BK)
    _require_loxodromic(comm, "commutator")
    return OneHandleGroup(A, BK, comm, K, record)


# -- frames and alignment ---------------------------------------------------

def frame_map(src, dst):
    """G with G src G^-1 = dst for conjugate loxodromics (frame of dst times frame of src^-1)."""
    ds, dd = _reference(src), _reference(dst)
    return dd.frame @ group_inverse(ds.frame)


def _compatible(M, N, tol=CURVE_TOL):
    """Whether M and N have equal (tau, sigma)."""
    tm, tn = trace_invariants(M), trace_invariants(N)
    scale = max(1.0, abs(tm.tau), abs(tm.sigma))
    return abs(tm.tau - tn.tau) <= tol * scale and abs(tm.sigma - tn.sigma) <= tol * scale


# -- surfaces ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SurfaceRep:
    genus: int
    pants: tuple
    twists: tuple
    generators: tuple
    relation_residual: float
    central_element: complex
    budget: dict = field(default_factory=dict)

    @property
    def budget_total(self):
        return self.budget["total"]


def parameter_budget(g):
    """Real-parameter itemization for genus g."""
    items = {
        "traces": 2 * (4 * g - 4),
        "sigmas": 4 * g - 4,
        "cross_ratio_points": 5 * (2 * g - 2),
        "alphas": 2 * (2 * g - 2),
        "betas": 2 * (2 * g - 2),
        "twist_bends": 3 * (3 * g - 3),
        "constraints": -3 * (3 * g - 3),
    }
    items["total"] = sum(items.values())
    return items


def budget_lines(g):
    """Human-readable itemization in the order of the theorem statement."""
    b = parameter_budget(g)
    return [
        f"{4 * g - 4} complex traces: {b['traces']}",
        f"{4 * g - 4} sigma invariants: {b['sigmas']}",
        f"{2 * g - 2} points on the 5-dimensional cross-ratio variety: {b['cross_ratio_points']}",
        f"{2 * g - 2} alpha invariants: {b['alphas']}",
        f"{2 * g - 2} beta invariants: {b['betas']}",
        f"{3 * g - 3} twist-bend parameters: {b['twist_bends']}",
        f"{3 * g - 3} compatibility constraints: {b['constraints']}",
        f"total: {b['total']}",
    ]


def curve_names(g):
    """Curve labels in twist order: handle curves, then connecting curves in fold order."""
    names = [f"a{i + 1}" for i in range(g)]
    if g == 2:
        return names + ["d1"]
    for k in range(1, g - 1):
        names += [f"d{k}", f"c{k + 1}"]
    return names + [f"d{g - 1}"]


class _Placed:
    """A reconstructed pants group with its peripheral triple (u, v, w), uvw = I."""

    def __init__(self, X, Y):
        self.u, self.v = X, Y
        self.w = group_inverse(Y) @ group_inverse(X)

    def conjugate(self, G):
        Gi = np.linalg.inv(G)
        self.u, self.v, self.w = (G @ M @ Gi for M in (self.u, self.v, self.w))


def _align(placed_A, incoming, peripheral, curve):
    """Conjugate ``incoming`` so its ``peripheral`` equals placed_A^-1."""
    target = group_inverse(placed_A)
    src = getattr(incoming, peripheral)
    if not _compatible(src, target):
        raise IncompatibleBoundary(f"boundary invariants differ along curve {curve}", curve)
    incoming.conjugate(frame_map(src, target))


def _glue(placed_owner, owner_attr, incoming, incoming_attr, twist, curve):
    """attach_pants along a curve: P1 = <A, B> with A the placed peripheral."""
    order = ("u", "v", "w")
    A = getattr(placed_owner, owner_attr)
    B = getattr(placed_owner, order[(order.index(owner_attr) + 1) % 3])
    _align(A, incoming, incoming_attr, curve)
    D = getattr(incoming, incoming_attr)
    C = getattr(incoming, order[(order.index(incoming_attr) - 1) % 3])
    P1 = PantsGroup(A, B, None)
    P2 = PantsGroup(C, D, None)
    try:
        glued = attach_pants(P1, P2, make_twist(A, *twist))
    except IncompatibleBoundary as exc:
        raise IncompatibleBoundary(str(exc), curve) from exc
    incoming.conjugate(glued.conjugator)


def _parse_twist(t):
    if isinstance(t, TwistBend):
        return t.kappa, t.psi
    if isinstance(t, dict):
        return complex(t["kappa"]), float(t["psi"])
    return complex(t[0]), float(t[1])


def assemble_surface(g, pants_params, twists, tol=DEFAULT_TOL):
    """Closed genus-g representation from 2g-2 pants records and 3g-3 twists.

    Pants graph (a caterpillar): records 1..g are handle pants <A_i, A_i'>
    with A_i' conjugate to A_i^-1 and third peripheral c_i^-1, c_i = A_i A_i';
    records g+1..2g-2 are connecting pants <d_k, c_{k+1}> whose third
    peripheral is d_{k+1}^-1. Twists: one per handle curve A_i, then one per
    connecting curve in fold order d1, c2, d2, c3, ..., d_{g-1}. Returns
    generators (A_1, B_1, ..., A_g, B_g) with prod [A_i, B_i] central.
    """
    if not isinstance(g, (int, np.integer)) or g < 2:
        raise ValidationError("genus must be an integer >= 2")
    if len(pants_params) != 2 * g - 2 or len(twists) != 3 * g - 3:
        raise BudgetMismatch(
            f"genus {g} needs {2 * g - 2} pants records and {3 * g - 3} twists, "
            f"got {len(pants_params)} and {len(twists)}")
    twists = [_parse_twist(t) for t in twists]
    pants = []
    for j, P in enumerate(pants_params):
        try:
            cp = canonical_pair_from_invariants(P, tol)
        except ChfnError as exc:
            raise ReconstructionFailure(f"pants {j}: {exc}") from exc
        pants.append(_Placed(cp.A, cp.B))
    handles, links = pants[:g], pants[g:]
    for i, h in enumerate(handles):
        if not _compatible(h.v, group_inverse(h.u)):
            raise IncompatibleBoundary(f"handle curve {i} is not self-compatible", i)

    # fold along the caterpillar; w of a handle pants is c_i^-1
    twist_iter = iter(twists[g:])
    curve = g
    if g == 2:
        _glue(handles[0], "w", handles[1], "w", next(twist_iter), curve)
    else:
        prev, prev_attr = handles[0], "w"
        for k in range(g - 2):
            _glue(prev, prev_attr, links[k], "u", next(twist_iter), curve)
            _glue(links[k], "v", handles[k + 1], "w", next(twist_iter), curve + 1)
            curve += 2
            prev, prev_attr = links[k], "w"
        _glue(prev, prev_attr, handles[g - 1], "w", next(twist_iter), curve)

    generators = []
    for i, h in enumerate(handles):
        B0 = frame_map(group_inverse(h.u), h.v)
        closed = close_handle(h.u, B0, make_twist(h.u, *twists[i]))
        generators += [closed.A, closed.B]

    R = np.eye(4, dtype=np.complex128)
    for i in range(g):
        a, b = generators[2 * i], generators[2 * i + 1]
        R = R @ a @ b @ np.linalg.inv(a) @ np.linalg.inv(b)
    dist = [np.linalg.norm(R - z * np.eye(4)) for z in CENTER]
    k = int(np.argmin(dist))
    return SurfaceRep(g, tuple(pants_params), tuple(twists), tuple(generators),
                      float(dist[k]), CENTER[k], parameter_budget(g))


def surface_relation(generators):
    """prod [a_i, b_i] for generators (a_1, b_1, ..., a_g, b_g)."""
    R = np.eye(4, dtype=np.complex128)
    for a, b in zip(generators[::2], generators[1::2]):
        R = R @ a @ b @ np.linalg.inv(a) @ np.linalg.inv(b)
    return R
