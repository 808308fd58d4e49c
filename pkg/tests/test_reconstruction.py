import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _util import conjugate, rel_close, sampler_for
from chfn.errors import NoValidAlpha, OffVariety, RealCrossRatioLocus
from chfn.hermitian import INFINITY, ORIGIN, certify_group_element, group_inverse
from chfn.invariants import cartan_invariant, cross_ratio_triple, pair_invariants
from chfn.isometry import decompose_loxodromic, normal_form_matrix
from chfn.reconstruction import (
    canonical_pair_from_invariants,
    direct_pair,
    normal_parameters,
    pairs_conjugate,
    realize_quadruple,
    record_residuals,
)

seeds = st.integers(0, 2**32 - 1)
Z1 = np.array([-1, 1, 1, 1], dtype=complex)
Z4 = np.array([-0.5, 1j, 0, 1], dtype=complex)
WORKED = (Z1, INFINITY, ORIGIN, Z4)


def chain_point(s):
    return np.array([1j * s, 0, 0, 1], dtype=complex)


def round_trip(A, B):
    P = pair_invariants(A, B)
    cp = canonical_pair_from_invariants(P)
    Q = pair_invariants(cp.A, cp.B, alpha_index=P.alpha_index, beta_index=P.beta_index)
    return P, Q, cp


class TestNormalParameters:
    @pytest.mark.parametrize("r, theta, phi", [(2.0, 0.7, 0.2), (3.0, -1.0, -2.0), (1.5, 2.0, 1.0)])
    def test_recovers_normal_form(self, r, theta, phi):
        E = normal_form_matrix(r, theta, phi)
        d = decompose_loxodromic(E)
        tau, sigma = np.trace(E), (np.trace(E) ** 2 - np.trace(E @ E)).real / 2
        assert normal_parameters(tau, sigma) == pytest.approx((d.r, d.theta, d.phi))


class TestRealizeQuadruple:
    def test_worked_quadruple(self):
        T = cross_ratio_triple(*WORKED)
        q = realize_quadruple(T)
        T2 = cross_ratio_triple(q.z1, INFINITY, ORIGIN, q.z4)
        assert rel_close(T2.values, T.values, 1e-12)
        # the realized quadruple is congruent to the original: Cartan invariants agree
        for idx in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
            orig = cartan_invariant(*(WORKED[i] for i in idx))
            new = cartan_invariant(*((q.z1, INFINITY, ORIGIN, q.z4)[i] for i in idx))
            assert new == pytest.approx(orig, abs=1e-12)

    def test_gauge(self):
        q = realize_quadruple(cross_ratio_triple(*WORKED))
        assert q.z1[0] == 1 and q.h >= 0 and q.q >= 0
        assert q.z1[3].real < 0

    def test_off_variety(self):
        with pytest.raises(OffVariety):
            realize_quadruple((0.5 + 0.3j, 0.4 + 0.1j, 0.5))

    def test_chain_locus(self):
        T = cross_ratio_triple(*(chain_point(s) for s in (-1, 0.5, 2, 3)))
        with pytest.raises(RealCrossRatioLocus):
            realize_quadruple(T)

    @given(seeds)
    def test_sampled(self, seed):
        s = sampler_for(seed)
        T = cross_ratio_triple(*(s.null_vector() for _ in range(4)))
        q = realize_quadruple(T)
        T2 = cross_ratio_triple(q.z1, INFINITY, ORIGIN, q.z4)
        assert rel_close(T2.values, T.values, 1e-8)


class TestCanonicalPair:
    @settings(max_examples=15)
    @given(seeds)
    def test_round_trip(self, seed):
        p = sampler_for(seed).nonsingular_pair()
        P, Q, cp = round_trip(p.A, p.B)
        assert rel_close(P.as_vector(), Q.as_vector(), 1e-6)
        assert pairs_conjugate(p.A, p.B, cp.A, cp.B)[0]

    def test_a_in_normal_form(self, pairs):
        _, _, cp = round_trip(pairs[0].A, pairs[0].B)
        assert np.allclose(cp.A, np.diag(np.diag(cp.A)), atol=1e-12)
        assert abs(cp.A[0, 0]) > 1

    def test_fixed_point_of_pipeline(self, pairs):
        _, _, cp = round_trip(pairs[2].A, pairs[2].B)
        _, _, cp2 = round_trip(cp.A, cp.B)
        assert np.allclose(cp2.A, cp.A, atol=1e-10)
        assert np.allclose(cp2.B, cp.B, atol=1e-8 * np.linalg.norm(cp.B))

    def test_deterministic(self, pairs):
        P = pair_invariants(pairs[3].A, pairs[3].B)
        a, b = canonical_pair_from_invariants(P), canonical_pair_from_invariants(P)
        assert np.array_equal(a.A, b.A) and np.array_equal(a.B, b.B)

    @pytest.mark.parametrize("alpha_index, beta_index", [(1, 2), (2, 1), (2, 2)])
    def test_other_indices(self, pairs, alpha_index, beta_index):
        p = pairs[4]
        P = pair_invariants(p.A, p.B, alpha_index=alpha_index, beta_index=beta_index)
        cp = canonical_pair_from_invariants(P)
        Q = pair_invariants(cp.A, cp.B, alpha_index=alpha_index, beta_index=beta_index)
        assert rel_close(P.as_vector(), Q.as_vector(), 1e-6)
        assert pairs_conjugate(p.A, p.B, cp.A, cp.B)[0]

    def test_zero_alpha(self, pairs):
        P = dataclasses.replace(pair_invariants(pairs[0].A, pairs[0].B), alpha=0j)
        with pytest.raises(NoValidAlpha):
            canonical_pair_from_invariants(P)

    def test_residuals_reported(self, pairs):
        P = pair_invariants(pairs[1].A, pairs[1].B)
        cp = canonical_pair_from_invariants(P)
        assert cp.max_residual < 1e-6 and cp.method in ("direct", "refined")
        assert set(record_residuals(P, P).values()) == {0.0}

    def test_direct_pair_certified(self, pairs):
        A, B = direct_pair(pair_invariants(pairs[5].A, pairs[5].B))
        certify_group_element(A, 1e-8)
        certify_group_element(B, 1e-6)


class TestPairsConjugate:
    def test_conjugated_pair(self, pairs, sampler):
        p = pairs[0]
        G = sampler.group_element()
        ok, C = pairs_conjugate(p.A, p.B, *conjugate(G, p.A, p.B))
        assert ok
        # C agrees with G up to a fourth root of unity
        w = np.trace(group_inverse(G) @ C) / 4
        assert abs(w ** 4 - 1) < 1e-6
        assert np.allclose(C, w * G, atol=1e-6 * np.linalg.norm(G))

    def test_conjugator_maps_frames(self, pairs, sampler):
        p = pairs[1]
        A2, B2 = conjugate(sampler.group_element(), p.A, p.B)
        ok, C = pairs_conjugate(p.A, p.B, A2, B2)
        Ci = group_inverse(C)
        scale = np.linalg.norm(A2) + np.linalg.norm(B2)
        assert ok
        assert np.linalg.norm(C @ p.A @ Ci - A2) <= 1e-5 * scale
        assert np.linalg.norm(C @ p.B @ Ci - B2) <= 1e-5 * scale

    def test_sigma_perturbation(self, pairs):
        p = pairs[2]
        d = decompose_loxodromic(p.B)
        B2 = conjugate(d.frame, normal_form_matrix(d.r, d.theta, d.phi + 1e-3))
        assert pairs_conjugate(p.A, p.B, p.A, B2, tol=1e-6) == (False, None)

    def test_different_alpha(self, pairs):
        # turn B's positive eigenvectors inside their plane: traces and
        # cross-ratios are unchanged, alpha is not
        p = pairs[3]
        d = decompose_loxodromic(p.B)
        c, s = np.cos(0.4), np.sin(0.4)
        R = np.eye(4, dtype=complex)
        R[1:3, 1:3] = [[c, -s], [s, c]]
        B2 = conjugate(d.frame @ R, normal_form_matrix(d.r, d.theta, d.phi))
        P, Q = pair_invariants(p.A, p.B), pair_invariants(p.A, B2)
        assert rel_close([P.tauB, P.X1, P.X2, P.X3], [Q.tauB, Q.X1, Q.X2, Q.X3], 1e-8)
        assert pairs_conjugate(p.A, p.B, p.A, B2) == (False, None)
