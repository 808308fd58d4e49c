"""Named property suites used by ``chfn verify``.

Each suite draws one sample from a stream-specific sampler and returns
whether every property holds at the suite's tolerance.
"""
import numpy as np

from .errors import ChfnError
from .hermitian import certify_group_element, group_inverse
from .invariants import identity_relations, line_angle, pair_invariants
from .isometry import cayley_hamilton_residual, trace_invariants
from .sampling import (
    REDUCIBLE_CASES,
    Sampler,
    SamplerConfig,
    child_config,
    planted_reducible_pair,
)


def relative_gap(P, Q):
    p, q = P.as_vector(), Q.as_vector()
    return float(np.max(np.abs(p - q) / np.maximum(1.0, np.abs(p))))


def group_sample(cfg):
    A = Sampler(cfg).group_element()
    certify_group_element(A, 1e-8)
    t = trace_invariants(A)
    return cayley_hamilton_residual(A) <= 1e-8 and t.sigma_imag_residual <= 1e-10


def variety_sample(cfg):
    from .invariants import cross_ratio_triple

    s = Sampler(cfg)
    T = cross_ratio_triple(*(s.null_vector() for _ in range(4)))
    return (T.variety_residual <= 1e-9 and T.inequality_slack >= -1e-9
            and T.corollary_margin >= -1e-9)


def identities_sample(cfg):
    p = Sampler(cfg).nonsingular_pair()
    return max(identity_relations(p.A, p.B)) < 1e-8


def roundtrip_sample(cfg):
    from .reconstruction import canonical_pair_from_invariants, pairs_conjugate

    p = Sampler(cfg).nonsingular_pair()
    P = pair_invariants(p.A, p.B)
    cp = canonical_pair_from_invariants(P)
    Q = pair_invariants(cp.A, cp.B, alpha_index=P.alpha_index, beta_index=P.beta_index)
    ok, C = pairs_conjugate(p.A, p.B, cp.A, cp.B, tol=1e-6)
    return relative_gap(P, Q) <= 1e-6 and ok


def detector_sample(cfg, index=0):
    from .nonsingular import reducibility_witness

    case = REDUCIBLE_CASES[index % 4]
    R = planted_reducible_pair(cfg, case)
    w = reducibility_witness(R.A, R.B)
    if w is None or line_angle(w.vector, R.shared) > 1e-7:
        return False
    p = Sampler(child_config(cfg, 1)).nonsingular_pair()
    return reducibility_witness(p.A, p.B) is None


def conjugation_sample(cfg):
    s = Sampler(cfg)
    p = s.nonsingular_pair()
    P = pair_invariants(p.A, p.B)
    for _ in range(20):
        G = s.group_element()
        Gi = group_inverse(G)
        Q = pair_invariants(G @ p.A @ Gi, G @ p.B @ Gi,
                            alpha_index=P.alpha_index, beta_index=P.beta_index)
        if relative_gap(P, Q) > 1e-8:
            return False
    return True


def twist_sample(cfg):
    from .gluing import canonical_twist, tilde_invariants, twist_from_tilde

    s = Sampler(cfg)
    A, B, C = s.loxodromic(), s.loxodromic(), s.loxodromic()
    kappa = complex(s.rng.uniform(-1, 1), s.rng.uniform(-np.pi / 4, np.pi / 4))
    psi = s.rng.uniform(-np.pi, np.pi)
    t = tilde_invariants(A, B, C, (kappa, psi))
    k, p = twist_from_tilde(A, B, C, t)
    k0, p0 = canonical_twist(kappa, psi)
    return abs(k - k0) <= 1e-8 and abs(np.angle(np.exp(1j * (p - p0)))) <= 1e-8


SUITES = {
    "group": group_sample,
    "variety": variety_sample,
    "identities": identities_sample,
    "roundtrip": roundtrip_sample,
    "detector": detector_sample,
    "conjugation": conjugation_sample,
    "twist": twist_sample,
}


def run_suite(name, samples, seed):
    """{"pass": n, "fail": m, "errors": k}; samples use independent child streams."""
    fn = SUITES[name]
    base = SamplerConfig(seed=seed)
    passed = failed = errors = 0
    for i in range(samples):
        cfg = child_config(base, i)
        try:
            ok = fn(cfg, i) if name == "detector" else fn(cfg)
        except ChfnError:
            ok, errors = False, errors + 1
        if ok:
            passed += 1
        else:
            failed += 1
    return {"suite": name, "samples": samples, "seed": seed,
            "pass": passed, "fail": failed, "errors": errors}
