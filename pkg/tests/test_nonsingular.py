import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from _util import conjugate, same_line
from chfn.errors import NotLoxodromic, NotNonSingular
from chfn.hermitian import INFINITY, ORIGIN, H, normalize_det
from chfn.isometry import normal_form_matrix
from chfn.nonsingular import (
    common_c2_chain,
    common_fixed_point,
    eta_invariants,
    is_nonsingular,
    reducibility_witness,
    require_nonsingular,
)
from chfn.sampling import REDUCIBLE_CASES, SamplerConfig, child_config, planted_reducible_pair

seeds = st.integers(0, 2**32 - 1)
E2 = np.eye(4, dtype=complex)[1]
E3 = np.eye(4, dtype=complex)[2]


def block_element(rng, fixed):
    S = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    S = (S - S.conj().T) / 2
    for k in fixed:
        S[k, :] = 0
        S[:, k] = 0
    return normalize_det(expm(H @ S))


def sharing_pair(seed, fixed=(1,)):
    """A = E(2, 0.7, 0.2); B in a frame fixing the basis vectors ``fixed``."""
    C = block_element(np.random.default_rng(seed), fixed)
    return normal_form_matrix(2.0, 0.7, 0.2), conjugate(C, normal_form_matrix(3.0, 0.5, 0.1))


class TestCommonFixedPoint:
    def test_diagonal_pair(self):
        p = common_fixed_point(normal_form_matrix(2, 0, 0), normal_form_matrix(3, 0, 0))
        assert p is not None
        assert same_line(p, INFINITY) or same_line(p, ORIGIN)

    def test_generic_conjugate(self, sampler):
        E = normal_form_matrix(2, 0, 0)
        assert common_fixed_point(E, conjugate(sampler.group_element(), E)) is None

    def test_tiny_perturbation_still_shared(self):
        A = normal_form_matrix(2.0, 0.7, 0.2)
        S = np.zeros((4, 4), dtype=complex)
        S[1, 3], S[3, 1] = 1e-12, -1e-12  # anti-Hermitian; moves infinity by ~1e-12
        G = expm(H @ S)
        B = conjugate(G, normal_form_matrix(3.0, 0.5, 0.1))
        assert common_fixed_point(A, B) is not None


class TestCommonChain:
    @pytest.mark.parametrize("seed", range(5))
    def test_constructed_chain(self, seed):
        A, B = sharing_pair(seed, fixed=(2,))
        w = common_c2_chain(A, B)
        assert w is not None
        assert same_line(w.polar, E3, 1e-7)
        assert w.gap < 1e-12

    def test_generic_pair(self, pairs):
        for p in pairs:
            assert common_c2_chain(p.A, p.B) is None

    def test_gap_reported(self):
        A, B = sharing_pair(0, fixed=(2,))
        report = is_nonsingular(A, B)
        assert not report.condition_ii
        assert report.chain_gap < 1e-12
        assert report.polar is not None


class TestIsNonsingular:
    def test_sampled_pairs(self, pairs):
        for p in pairs:
            assert is_nonsingular(p.A, p.B).overall

    def test_shared_x(self):
        A, B = sharing_pair(3)
        report = is_nonsingular(A, B)
        assert not report.overall
        e = eta_invariants(A, B)
        assert min(abs(e.eta1), abs(e.nu1)) < 1e-12

    def test_shared_fixed_point(self):
        A = normal_form_matrix(2.0, 0.7, 0.2)
        report = is_nonsingular(A, normal_form_matrix(3.0, 0.5, 0.1))
        assert not report.condition_i
        assert report.failed_condition() == "i"

    def test_require_names_condition(self):
        A = normal_form_matrix(2.0, 0.7, 0.2)
        with pytest.raises(NotNonSingular) as info:
            require_nonsingular(A, normal_form_matrix(3.0, 0.5, 0.1))
        assert info.value.condition == "i"

    def test_not_loxodromic(self, pairs):
        with pytest.raises(NotLoxodromic):
            is_nonsingular(np.eye(4), pairs[0].B)


class TestReducibility:
    def test_block_diagonal_pair(self):
        A, B = sharing_pair(7)
        w = reducibility_witness(A, B)
        assert w is not None
        assert w.case == "x_A = x_B"
        assert same_line(w.vector, E2, 1e-7)

    def test_nonsingular_pairs_have_no_witness(self, pairs):
        for p in pairs:
            assert reducibility_witness(p.A, p.B) is None

    def test_conjugated_witness(self, sampler):
        A, B = sharing_pair(7)
        G = sampler.group_element()
        w = reducibility_witness(*conjugate(G, A, B))
        assert w is not None and same_line(w.vector, G @ E2, 1e-7)

    @pytest.mark.parametrize("case", REDUCIBLE_CASES)
    @given(seed=seeds)
    def test_planted_cases(self, case, seed):
        R = planted_reducible_pair(child_config(SamplerConfig(seed=seed), 0), case)
        w = reducibility_witness(R.A, R.B)
        assert w is not None and same_line(w.vector, R.shared, 1e-7)
