import numpy as np
import pytest

from ia3cell.errors import ConfigurationError
from ia3cell.network import (
    ChannelSet,
    NetworkConfig,
    channels_from_json,
    channels_to_json,
    combine_channels,
    generate_channels,
    stacked_interference_matrix,
)
from ia3cell.numerics import numerical_rank, right_null_basis


class TestNetworkConfig:
    def test_valid(self):
        cfg = NetworkConfig(16, 8, 2, 3)
        assert (cfg.M, cfg.N, cfg.K, cfg.d) == (16, 8, 2, 3)

    @pytest.mark.parametrize(
        "M,N,K,d",
        [
            (8, 8, 2, 1),   # M must exceed N
            (16, 8, 1, 1),  # K must be > 1
            (16, 8, 2, 0),  # d must be >= 1
            (17, 8, 2, 1),  # M must not exceed KN
            (4, 0, 2, 1),   # N must be >= 1
        ],
    )
    def test_invalid(self, M, N, K, d):
        with pytest.raises(ConfigurationError):
            NetworkConfig(M, N, K, d)


class TestGenerateChannels:
    def test_count_and_shape_motivating_example(self):
        ch = generate_channels(NetworkConfig(16, 8, 2, 3), seed=1)
        assert len(ch.H) == 18
        assert all(mat.shape == (16, 8) for mat in ch.H.values())

    def test_same_seed_reproduces_bit_for_bit(self):
        cfg = NetworkConfig(16, 8, 2, 3)
        a = generate_channels(cfg, 123)
        b = generate_channels(cfg, 123)
        for key in a.H:
            np.testing.assert_array_equal(a.H[key], b.H[key])

    def test_different_seeds_differ(self):
        cfg = NetworkConfig(16, 8, 2, 3)
        a = generate_channels(cfg, 1)
        b = generate_channels(cfg, 2)
        assert not np.array_equal(a.H[(1, 1, 1)], b.H[(1, 1, 1)])

    def test_three_user_case_full_rank(self):
        ch = generate_channels(NetworkConfig(8, 4, 3, 1), seed=2)
        assert len(ch.H) == 27
        for mat in ch.H.values():
            assert mat.shape == (8, 4)
            assert numerical_rank(mat) == 4

    def test_unit_variance(self):
        ch = generate_channels(NetworkConfig(16, 8, 2, 3), seed=3)
        entries = np.concatenate([m.ravel() for m in ch.H.values()])
        assert abs(np.mean(np.abs(entries) ** 2) - 1.0) < 0.1


class TestCombineChannels:
    def test_first_block_is_first_user(self):
        ch = generate_channels(NetworkConfig(16, 8, 2, 3), seed=1)
        G = combine_channels(ch, 1, 2)
        np.testing.assert_array_equal(G[:, :8], ch.H[(1, 2, 1)])
        np.testing.assert_array_equal(G[:, 8:], ch.H[(1, 2, 2)])

    def test_square_and_invertible_when_M_equals_KN(self):
        ch = generate_channels(NetworkConfig(16, 8, 2, 3), seed=1)
        G = combine_channels(ch, 2, 3)
        assert G.shape == (16, 16)
        assert numerical_rank(G) == 16

    def test_rectangular_shape(self):
        ch = generate_channels(NetworkConfig(8, 4, 3, 1), seed=2)
        assert combine_channels(ch, 1, 2).shape == (8, 12)

    def test_index_out_of_range(self):
        ch = generate_channels(NetworkConfig(8, 4, 3, 1), seed=2)
        with pytest.raises(IndexError):
            combine_channels(ch, 4, 1)


class TestStackedInterferenceMatrix:
    def test_shape_and_exact_zero_blocks(self):
        cfg = NetworkConfig(8, 4, 3, 1)
        ch = generate_channels(cfg, seed=2)
        H_bar = stacked_interference_matrix(ch)
        assert H_bar.shape == (24, 36)
        for i in range(3):
            block = H_bar[8 * i : 8 * (i + 1), 12 * i : 12 * (i + 1)]
            assert np.all(block == 0)

    def test_off_diagonal_blocks_match_channels(self):
        ch = generate_channels(NetworkConfig(8, 4, 3, 1), seed=2)
        H_bar = stacked_interference_matrix(ch)
        np.testing.assert_array_equal(H_bar[:8, 12:16], ch.H[(1, 2, 1)])
        np.testing.assert_array_equal(H_bar[16:24, 0:4], ch.H[(3, 1, 1)])

    def test_full_row_rank_for_generic_channels(self):
        ch = generate_channels(NetworkConfig(8, 4, 3, 1), seed=2)
        assert numerical_rank(stacked_interference_matrix(ch)) == 24

    def test_null_space_dimension(self):
        cfg = NetworkConfig(8, 4, 3, 1)
        ch = generate_channels(cfg, seed=2)
        ns = right_null_basis(stacked_interference_matrix(ch))
        assert ns.shape[1] == 3 * (cfg.K * cfg.N - cfg.M)  # 12


class TestChannelJson:
    def test_round_trip(self):
        cfg = NetworkConfig(6, 4, 2, 1)
        ch = generate_channels(cfg, seed=9)
        restored = channels_from_json(channels_to_json(ch))
        assert restored.config == cfg
        assert restored.seed == 9
        for key in ch.H:
            np.testing.assert_allclose(restored.H[key], ch.H[key])

    def test_schema_fields(self):
        import json

        ch = generate_channels(NetworkConfig(6, 4, 2, 1), seed=9)
        payload = json.loads(channels_to_json(ch))
        assert payload["config"] == {"M": 6, "N": 4, "K": 2, "d": 1}
        assert payload["seed"] == 9
        assert "1,2,1" in payload["H"]
        assert len(payload["H"]["1,2,1"]) == 24  # M*N row-major [re, im] pairs
