import numpy as np
import pytest

from algorithms.metrics import sinr_vector
from algorithms.nullspace import RankDeficientChannelError, effective_covariance, effective_noise, null_projector
from models import SystemConfig
from tests.conftest import make_solution
from utils.rng import complex_gaussian
from utils.scenario_factory import sample_scenario


class TestNullProjector:
    def test_single_user_hand_example(self):
        projector = null_projector(np.array([[1, 0]], dtype=complex))
        np.testing.assert_allclose(projector.matrix, np.diag([0, 1]), atol=1e-12)
        assert projector.source_rank == 1

    def test_square_full_rank_gives_zero(self, rng):
        projector = null_projector(complex_gaussian(rng, (4, 4)))
        np.testing.assert_allclose(projector.matrix, np.zeros((4, 4)), atol=1e-10)

    def test_random_channels(self, rng):
        shapes = [(k, n_tx) for k in (2, 4, 8) for n_tx in (8, 16, 18) if k < n_tx]
        assert len(shapes) == 8
        for k, n_tx in shapes:
            for _ in range(125):
                channels = complex_gaussian(rng, (k, n_tx))
                p = null_projector(channels).matrix
                frob = np.linalg.norm(channels)
                assert np.linalg.norm(channels @ p) <= 1e-10 * frob, 'rows must be annihilated'
                assert np.allclose(p, p.conj().T, atol=1e-10), 'projector must be Hermitian'
                assert np.linalg.norm(p @ p - p) <= 1e-10 * max(1.0, np.linalg.norm(p)), 'projector must be idempotent'
                assert abs(np.trace(p).real - (n_tx - k)) <= 1e-8

    def test_rank_deficient_raises_with_ratio(self):
        row = np.array([1, 2j, 3], dtype=complex)
        with pytest.raises(RankDeficientChannelError) as info:
            null_projector(np.vstack([row, 2 * row]))
        assert info.value.ratio <= 1e-10

    def test_more_users_than_antennas_raises(self, rng):
        with pytest.raises(RankDeficientChannelError):
            null_projector(complex_gaussian(rng, (3, 2)))


class TestEffectiveNoise:
    def test_hand_example(self):
        projector = null_projector(np.array([[1, 0]], dtype=complex))
        np.testing.assert_allclose(effective_noise(projector, np.array([3, 4], dtype=complex)), [0, 4], atol=1e-12)

    def test_null_space_vector_unchanged(self, rng):
        channels = complex_gaussian(rng, (3, 8))
        projector = null_projector(channels)
        inside = projector.apply(complex_gaussian(rng, 8))
        again = effective_noise(projector, inside)
        assert np.linalg.norm(again - inside) <= 1e-10 * np.linalg.norm(inside)

    def test_row_space_annihilated(self, rng):
        channels = complex_gaussian(rng, (3, 8))
        result = effective_noise(null_projector(channels), channels.conj().T @ complex_gaussian(rng, 3))
        assert np.linalg.norm(result) <= 1e-10

    def test_orthogonal_to_every_user(self, rng):
        channels = complex_gaussian(rng, (4, 16))
        result = effective_noise(null_projector(channels), complex_gaussian(rng, 16))
        for h in channels:
            assert abs(h @ result) <= 1e-9 * np.linalg.norm(h) * np.linalg.norm(result)


class TestEffectiveCovariance:
    def test_identity_hand_example(self):
        projector = null_projector(np.array([[1, 0]], dtype=complex))
        np.testing.assert_allclose(effective_covariance(projector, np.eye(2)), np.diag([0, 1]), atol=1e-12)

    def test_rank_one_identity(self, rng):
        projector = null_projector(complex_gaussian(rng, (2, 6)))
        n = complex_gaussian(rng, 6)
        expected = np.outer(projector.apply(n), projector.apply(n).conj())
        np.testing.assert_allclose(effective_covariance(projector, np.outer(n, n.conj())), expected, atol=1e-10)

    def test_result_is_psd(self, rng):
        projector = null_projector(complex_gaussian(rng, (2, 6)))
        root = complex_gaussian(rng, (6, 6))
        result = effective_covariance(projector, root @ root.conj().T)
        assert np.linalg.eigvalsh(result).min() >= -1e-10

    def test_non_hermitian_rejected(self):
        projector = null_projector(np.array([[1, 0]], dtype=complex))
        with pytest.raises(ValueError):
            effective_covariance(projector, np.array([[1, 1], [0, 1]], dtype=complex))


class TestArtificialNoiseInvariance:
    def test_scaling_an_leaves_user_sinr_unchanged(self, rng):
        scenario = sample_scenario(SystemConfig.table_one(n_tx=8, n_users=3), 3)
        projector = null_projector(scenario.channels)
        beams = complex_gaussian(rng, (8, 3))
        an = complex_gaussian(rng, 8)
        reference = sinr_vector(scenario, make_solution(beams))
        for scale in (0.1, 1.0, 7.5, 100.0):
            an_eff = projector.apply(scale * an)
            assert np.max(np.abs(scenario.channels @ an_eff) ** 2) <= 1e-16 * max(1.0, scale ** 2)
            np.testing.assert_allclose(sinr_vector(scenario, make_solution(beams, an_eff)), reference, rtol=1e-10)
