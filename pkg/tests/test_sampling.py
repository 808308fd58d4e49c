import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chfn.errors import ResampleExhausted
from chfn.hermitian import Sign, certify_group_element, classify_vector
from chfn.invariants import pair_invariants
from chfn.isometry import Kind, classify_isometry
from chfn.nonsingular import is_nonsingular
from chfn.sampling import (
    Sampler,
    SamplerConfig,
    child_config,
    random_group_element,
    random_nonsingular_pair,
    random_null_vector,
    random_surface,
)

seeds = st.integers(0, 2**32 - 1)

# mean |tr| over 10^4 default-config elements; reference runs (seeds 0, 1, 2)
# gave 1.910, 1.883, 1.895 with standard error about 0.01
TRACE_BAND = (1.85, 1.95)


class TestDeterminism:
    def test_seed_42(self):
        cfg = SamplerConfig(seed=42)
        assert np.array_equal(random_null_vector(cfg), random_null_vector(cfg))
        assert np.array_equal(random_group_element(cfg), random_group_element(cfg))

    def test_distinct_seeds(self):
        a = random_group_element(SamplerConfig(seed=1))
        b = random_group_element(SamplerConfig(seed=2))
        assert not np.allclose(a, b)

    def test_child_streams(self):
        base = SamplerConfig(seed=7)
        assert child_config(base, 3) == child_config(base, 3)
        assert child_config(base, 3).seed != child_config(base, 4).seed

    def test_pairs_reproducible(self):
        p, q = (random_nonsingular_pair(SamplerConfig(seed=5)) for _ in range(2))
        assert np.array_equal(p.A, q.A) and np.array_equal(p.B, q.B)


class TestNullVectors:
    @given(seeds)
    def test_null(self, seed):
        z = random_null_vector(SamplerConfig(seed=seed))
        assert classify_vector(z).sign is Sign.NULL

    def test_no_collisions(self):
        s = Sampler(seed=0)
        zs = np.array([s.null_vector() for _ in range(10_000)])
        # lifts are normalized to z4 = 1, so projective equality is equality
        assert np.all(zs[:, 3] == 1)
        keys = np.round(zs[:, :3], 9)
        assert len({tuple(k) for k in keys}) == len(zs)


class TestGroupElements:
    @given(seeds)
    def test_certified(self, seed):
        certify_group_element(random_group_element(SamplerConfig(seed=seed)), 1e-9)

    def test_trace_band(self):
        s = Sampler(seed=0)
        mean = np.mean([abs(np.trace(s.group_element())) for _ in range(10_000)])
        assert TRACE_BAND[0] <= mean <= TRACE_BAND[1]

    def test_norms_moderate(self):
        s = Sampler(seed=3)
        assert max(np.linalg.norm(s.loxodromic()) for _ in range(200)) < 1e2

    @given(seeds)
    def test_loxodromic(self, seed):
        assert classify_isometry(Sampler(seed=seed).loxodromic()).kind is Kind.LOXODROMIC


class TestPairs:
    @given(seeds)
    def test_nonsingular(self, seed):
        p = random_nonsingular_pair(SamplerConfig(seed=seed))
        assert is_nonsingular(p.A, p.B).overall
        assert classify_isometry(p.A @ p.B).kind is Kind.LOXODROMIC

    def test_rejection_rate_low(self):
        s = Sampler(seed=11)
        assert np.mean([s.nonsingular_pair().rejections for _ in range(50)]) < 0.5

    def test_exhaustion(self):
        cfg = SamplerConfig(seed=0, r_range=(1.0, 1.0 + 1e-9), rejection_limit=3)
        with pytest.raises(ResampleExhausted):
            Sampler(cfg).nonsingular_pair()

    def test_invariants_not_constant(self):
        s = Sampler(seed=4)
        records = [pair_invariants(p.A, p.B) for p in (s.nonsingular_pair() for _ in range(10))]
        V = np.array([P.as_vector() for P in records])
        assert np.all(np.std(V, axis=0) > 1e-3)


class TestSurfaces:
    @pytest.mark.parametrize("genus", [2, 3])
    def test_counts(self, genus):
        S = random_surface(SamplerConfig(seed=genus), genus)
        assert len(S.records) == 2 * genus - 2
        assert len(S.twists) == 3 * genus - 3
        assert len(S.source) == 2 * genus
