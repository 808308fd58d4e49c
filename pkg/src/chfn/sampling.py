"""Seeded random boundary points, group elements and non-singular pairs.

Not Haar sampling: frames are built from random null seeds with a bounded
spread so matrix norms stay moderate and the default tolerances stay
meaningful.
"""
from dataclasses import dataclass, replace

import numpy as np

from .errors import ChfnError, ResampleExhausted
from .hermitian import certify_group_element, group_inverse, indefinite_gram_schmidt
from .isometry import Kind, classify_isometry, normal_form_matrix

MIN_UNIT_GAP = 1e-2


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    r_range: tuple = (1.1, 5.0)
    angle_range: float = np.pi
    frame_spread: float = 1.0
    rejection_limit: int = 1000


@dataclass(frozen=True)
class PairSample:
    A: np.ndarray
    B: np.ndarray
    rejections: int


def child_config(cfg, stream):
    """Independent config for stream ``stream`` derived from (seed, stream)."""
    seed = np.random.SeedSequence([cfg.seed, stream]).generate_state(2, np.uint32)
    return replace(cfg, seed=int(seed[0]) << 32 | int(seed[1]))


class Sampler:
    """Stateful generator; identical configs produce identical streams."""

    def __init__(self, cfg=None, **kwargs):
        self.cfg = cfg if cfg is not None else SamplerConfig(**kwargs)
        self.rng = np.random.default_rng(self.cfg.seed)

    def _complex(self, size=None, scale=1.0):
        s = self.cfg.frame_spread * scale
        return self.rng.uniform(-s, s, size) + 1j * self.rng.uniform(-s, s, size)

    def null_vector(self):
        z2, z3 = self._complex(2)
        s = self.cfg.frame_spread
        z1 = -(abs(z2) ** 2 + abs(z3) ** 2) / 2 + 1j * self.rng.uniform(-s, s)
        return np.array([z1, z2, z3, 1.0], dtype=np.complex128)

    def su2(self):
        v = self.rng.normal(size=4)
        v /= np.linalg.norm(v)
        a, b = complex(v[0], v[1]), complex(v[2], v[3])
        return np.array([[a, -np.conj(b)], [b, np.conj(a)]])

    def group_element(self):
        for _ in range(self.cfg.rejection_limit):
            try:
                F = indefinite_gram_schmidt(self.null_vector(), self.null_vector())
            except ChfnError:
                continue
            t = np.exp(self.rng.uniform(-0.7, 0.7))
            F = F.copy()
            F[:, 0] *= t
            F[:, 3] /= t
            F[:, 1:3] = F[:, 1:3] @ self.su2()
            return certify_group_element(F).matrix
        raise ResampleExhausted("could not build a group element")

    def loxodromic_parameters(self):
        lo, hi = self.cfg.r_range
        a = self.cfg.angle_range
        while True:
            r = self.rng.uniform(lo, hi)
            theta, phi = self.rng.uniform(-a, a, 2)
            gap = abs(np.exp(1j * phi) - np.exp(-1j * (2 * theta + phi)))
            if gap > MIN_UNIT_GAP:
                return float(r), float(theta), float(phi)

    def loxodromic(self):
        C = self.group_element()
        E = normal_form_matrix(*self.loxodromic_parameters())
        return C @ E @ group_inverse(C)

    def nonsingular_pair(self):
        from .nonsingular import is_nonsingular

        for rejected in range(self.cfg.rejection_limit):
            A, B = self.loxodromic(), self.loxodromic()
            try:
                if not is_nonsingular(A, B).overall:
                    continue
                if classify_isometry(A @ B).kind is not Kind.LOXODROMIC:
                    continue
            except ChfnError:
                continue
            return PairSample(A, B, rejected)
        raise ResampleExhausted(
            f"no non-singular pair within {self.cfg.rejection_limit} attempts")


def random_null_vector(cfg):
    return Sampler(cfg).null_vector()


def random_group_element(cfg):
    return Sampler(cfg).group_element()


def random_nonsingular_pair(cfg):
    return Sampler(cfg).nonsingular_pair()


@dataclass(frozen=True)
class SurfaceSample:
    genus: int
    records: tuple
    twists: tuple
    source: tuple
    rejections: int


def _solve_last_handle(T, E, C0, rng):
    """A = C E C^-1 with A^-1 T conjugate to A^-1 (matching tau and sigma)."""
    from scipy.linalg import expm
    from scipy.optimize import least_squares

    from .hermitian import H
    from .isometry import trace_invariants
    from .reconstruction import _anti_hermitian

    def element(x):
        C = expm(H @ _anti_hermitian(x)) @ C0
        return C @ E @ group_inverse(C)

    def residual(x):
        A = element(x)
        Ai = group_inverse(A)
        t1, t2 = trace_invariants(Ai @ T), trace_invariants(Ai)
        d = t1.tau - t2.tau
        return [d.real, d.imag, t1.sigma - t2.sigma]

    x0 = rng.normal(scale=0.1, size=16)
    sol = least_squares(residual, x0, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                        max_nfev=2000)
    return element(sol.x), float(np.max(np.abs(sol.fun)))


def _twist_sample(rng):
    return {"kappa": complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)),
            "psi": float(rng.uniform(-1.0, 1.0))}


def random_surface(cfg, genus, max_residual=1e-11):
    """Pants records and twists of a genus-g surface group built from random handles.

    Handles 1..g-1 are random; handle g is solved so that the boundary
    product closes up. Records follow the caterpillar ordering used by
    :func:`chfn.gluing.assemble_surface`.
    """
    from .gluing import frame_map
    from .invariants import pair_invariants

    s = Sampler(cfg)
    for rejected in range(cfg.rejection_limit):
        try:
            handles = []
            for _ in range(genus - 1):
                A, B = s.loxodromic(), s.group_element()
                handles.append((A, B @ group_inverse(A) @ group_inverse(B), B))
            prod = np.eye(4, dtype=np.complex128)
            for A, Ap, _ in handles:
                prod = prod @ A @ Ap
            T = group_inverse(prod)
            E = normal_form_matrix(*s.loxodromic_parameters())
            A, res = _solve_last_handle(T, E, s.group_element(), s.rng)
            if res > max_residual:
                continue
            Ap = group_inverse(A) @ T
            B = frame_map(group_inverse(A), Ap)
            handles.append((A, B @ group_inverse(A) @ group_inverse(B), B))
            records = [pair_invariants(A, Ap) for A, Ap, _ in handles]
            d = handles[0][0] @ handles[0][1]
            for A, Ap, _ in handles[1:-1]:
                c = A @ Ap
                records.append(pair_invariants(d, c))
                d = d @ c
            for M in [A @ Ap for A, Ap, _ in handles] + [d]:
                if classify_isometry(M).kind is not Kind.LOXODROMIC:
                    raise ResampleExhausted("non-loxodromic boundary")
        except ChfnError:
            continue
        twists = tuple(_twist_sample(s.rng) for _ in range(3 * genus - 3))
        source = tuple(M for A, _, B in handles for M in (A, B))
        return SurfaceSample(genus, tuple(records), twists, source, rejected)
    raise ResampleExhausted(f"no genus-{genus} surface within {cfg.rejection_limit} attempts")


REDUCIBLE_CASES = ("x_A = x_B", "y_A = y_B", "x_B = y_A", "y_B = x_A")


@dataclass(frozen=True)
class ReduciblePair:
    A: np.ndarray
    B: np.ndarray
    case: str
    shared: np.ndarray


def _stabilizer(rng, keep):
    """Random group element fixing the basis vector e_keep (keep in {1, 2})."""
    from scipy.linalg import expm

    from .hermitian import H, normalize_det

    S = rng.normal(scale=0.4, size=(4, 4)) + 1j * rng.normal(scale=0.4, size=(4, 4))
    S = (S - S.conj().T) / 2
    S[keep, :] = 0
    S[:, keep] = 0
    return normalize_det(expm(H @ S))


def planted_reducible_pair(cfg, case):
    """Loxodromic pair sharing one positive eigenvector in the pattern ``case``.

    Both elements are built in the same frame up to a stabilizer of the
    shared column, then conjugated by a random group element.
    """
    s = Sampler(cfg)
    col_A = {"x_A = x_B": 1, "y_A = y_B": 2, "x_B = y_A": 2, "y_B = x_A": 1}[case]
    col_B = {"x_A = x_B": 1, "y_A = y_B": 2, "x_B = y_A": 1, "y_B = x_A": 2}[case]
    swap = np.eye(4, dtype=np.complex128)
    if col_A != col_B:
        swap[[1, 2]] = swap[[2, 1]]  # in U(3,1); conjugation by it stays in SU(3,1)
    for _ in range(cfg.rejection_limit):
        G = s.group_element()
        Q1 = _stabilizer(s.rng, col_A)
        Q2 = Q1 @ _stabilizer(s.rng, col_A) @ swap
        EA = normal_form_matrix(*s.loxodromic_parameters())
        EB = normal_form_matrix(*s.loxodromic_parameters())
        A = G @ Q1 @ EA @ group_inverse(Q1) @ group_inverse(G)
        B = G @ Q2 @ EB @ group_inverse(Q2) @ group_inverse(G)
        shared = G @ Q1[:, col_A]
        try:
            if classify_isometry(A).kind is Kind.LOXODROMIC and \
                    classify_isometry(B).kind is Kind.LOXODROMIC:
                return ReduciblePair(A, B, case, shared)
        except ChfnError:
            continue
    raise ResampleExhausted("could not plant a reducible pair")
