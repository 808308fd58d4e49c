import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _util import sampler_for
from chfn.errors import (
    DegeneratePair,
    DegenerateSpan,
    NotInClosedDomain,
    NotInGroup,
    NotNegative,
    ZeroVector,
)
from chfn.hermitian import (
    H,
    INFINITY,
    ORIGIN,
    Sign,
    bergman_distance,
    certify_group_element,
    classify_vector,
    complete_frame,
    group_inverse,
    herm_form,
    indefinite_gram_schmidt,
    normalize_det,
    orthonormal_complement,
    standard_form_basis,
    standard_lift,
)

E = np.eye(4, dtype=np.complex128)
seeds = st.integers(0, 2**32 - 1)


class TestHermForm:
    @pytest.mark.parametrize("z, w, expected", [
        (ORIGIN, INFINITY, 1),
        ((-1, 1, 1, 1), (-1, 1, 1, 1), 0),
        (E[1], E[1], 1),
    ])
    def test_examples(self, z, w, expected):
        assert herm_form(z, w) == pytest.approx(expected)

    def test_matches_matrix_definition(self, sampler):
        z, w = sampler._complex(4), sampler._complex(4)
        assert herm_form(z, w) == pytest.approx(np.conj(w) @ H @ z)

    @given(seeds)
    def test_hermitian_symmetry(self, seed):
        s = sampler_for(seed)
        z, w = s._complex(4), s._complex(4)
        assert herm_form(z, w) == pytest.approx(np.conj(herm_form(w, z)))


class TestClassifyVector:
    @pytest.mark.parametrize("z, sign", [
        ((0, 1, 0, 0), Sign.POSITIVE),
        ((1, 0, 0, 0), Sign.NULL),
        ((-1, 0, 0, 1), Sign.NEGATIVE),
    ])
    def test_examples(self, z, sign):
        assert classify_vector(z).sign is sign

    def test_negative_value(self):
        assert classify_vector((-1, 0, 0, 1)).value == pytest.approx(-2)

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            classify_vector(np.zeros(4))

    @given(seeds)
    def test_sampled_null_vectors(self, seed):
        assert classify_vector(sampler_for(seed).null_vector()).sign is Sign.NULL


class TestCertify:
    @pytest.mark.parametrize("diag", [(2, 1, 1, 0.5), (1, 1, 1, 1)])
    def test_certified(self, diag):
        g = certify_group_element(np.diag(diag))
        assert g.form_residual == pytest.approx(0) and g.det_residual == pytest.approx(0)

    def test_not_in_group_carries_residuals(self):
        with pytest.raises(NotInGroup) as info:
            certify_group_element(np.diag([2, 1, 1, 1]))
        assert info.value.form_residual > 0 and info.value.det_residual > 0

    def test_read_only(self):
        g = certify_group_element(np.eye(4))
        with pytest.raises(ValueError):
            g.matrix[0, 0] = 2

    @given(seeds)
    def test_inverse_formula(self, seed):
        A = sampler_for(seed).group_element()
        assert np.allclose(group_inverse(A) @ A, np.eye(4), atol=1e-9)


class TestStandardLift:
    def test_boundary_point(self):
        z = standard_lift((-1, 1, 1))
        assert np.allclose(z, (-1, 1, 1, 1))
        assert classify_vector(z).sign is Sign.NULL

    def test_interior_point(self):
        z = standard_lift((-1, 0, 0))
        assert np.allclose(z, (-1, 0, 0, 1))
        assert classify_vector(z).sign is Sign.NEGATIVE

    def test_outside(self):
        with pytest.raises(NotInClosedDomain):
            standard_lift((1, 0, 0))


class TestBergmanDistance:
    z = np.array([-1, 0, 0, 1], dtype=complex)

    def test_zero(self):
        assert bergman_distance(self.z, self.z) == pytest.approx(0, abs=1e-7)

    def test_translation_length(self):
        w = np.array([-2, 0, 0, 0.5])
        assert bergman_distance(self.z, w) == pytest.approx(2 * np.log(2))

    def test_lift_independence(self):
        w = np.array([-2, 0, 0, 0.5])
        assert bergman_distance(self.z, 3j * w) == pytest.approx(bergman_distance(self.z, w))

    def test_needs_negative(self):
        with pytest.raises(NotNegative):
            bergman_distance(self.z, INFINITY)

    @given(seeds)
    def test_group_invariance(self, seed):
        s = sampler_for(seed)
        A = s.group_element()
        w = np.array([-1.5, 0.3, 0.2j, 1])
        assert bergman_distance(A @ self.z, A @ w) == pytest.approx(
            bergman_distance(self.z, w), abs=1e-7)


class TestCompleteFrame:
    def test_identity(self):
        assert np.allclose(complete_frame(E[0], E[1], E[3]), E[2])

    def test_degenerate(self):
        with pytest.raises(DegenerateSpan):
            complete_frame(E[0], E[1], E[0])

    @given(seeds)
    def test_recovers_column(self, seed):
        G = sampler_for(seed).group_element()
        assert np.allclose(complete_frame(G[:, 0], G[:, 1], G[:, 3]), G[:, 2], atol=1e-8)


class TestGramSchmidt:
    def test_standard_pair(self):
        F = indefinite_gram_schmidt(INFINITY, ORIGIN)
        assert np.allclose(F, np.eye(4))

    def test_degenerate(self):
        with pytest.raises(DegeneratePair):
            indefinite_gram_schmidt(INFINITY, INFINITY)

    @given(seeds)
    def test_certified_frame(self, seed):
        s = sampler_for(seed)
        a, r = s.null_vector(), s.null_vector()
        F = indefinite_gram_schmidt(a, r)
        certify_group_element(F, 1e-8)
        # first column spans the same null line as a
        assert np.linalg.matrix_rank(np.column_stack([F[:, 0], a]), tol=1e-8) == 1

    @given(seeds)
    def test_complement_orthonormal(self, seed):
        s = sampler_for(seed)
        a, r = s.null_vector(), s.null_vector()
        r = r / herm_form(r, a)
        x, y = orthonormal_complement(a, r)
        gram = np.array([[herm_form(u, v) for v in (x, y, a, r)] for u in (x, y)])
        assert np.allclose(gram, [[1, 0, 0, 0], [0, 1, 0, 0]], atol=1e-9)


class TestNormalizeDet:
    @given(seeds)
    def test_unit_determinant(self, seed):
        G = sampler_for(seed).group_element() * np.exp(0.7j)
        assert np.linalg.det(normalize_det(G)) == pytest.approx(1)


class TestStandardFormBasis:
    def test_diagonal_form(self):
        Hp = np.diag([1.0, 1.0, 1.0, -1.0])
        C = standard_form_basis(Hp)
        assert np.allclose(C.conj().T @ Hp @ C, H)
