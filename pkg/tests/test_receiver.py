import numpy as np
import pytest

from ia3cell.alignment import Method, PrecoderSolution, design_precoders
from ia3cell.errors import DegenerateChannelError, FeasibilityError
from ia3cell.network import ChannelSet, NetworkConfig, generate_channels
from ia3cell.numerics import numerical_rank
from ia3cell.receiver import (
    design_ici_eliminator,
    design_iui_eliminator,
    design_receivers,
    effective_channel,
    end_to_end_leakage,
    interference_images,
)

EIGEN_CFG = NetworkConfig(16, 8, 2, 3)
NULL_CFG = NetworkConfig(8, 4, 3, 1)


@pytest.fixture(scope="module")
def eigen_case():
    ch = generate_channels(EIGEN_CFG, 1)
    sol = design_precoders(ch)
    return ch, sol


@pytest.fixture(scope="module")
def null_case():
    ch = generate_channels(NULL_CFG, 2)
    sol = design_precoders(ch)
    return ch, sol


class TestIciEliminator:
    def test_shape_motivating_example(self, eigen_case):
        ch, sol = eigen_case
        V = design_ici_eliminator(ch, sol, 1)
        assert V.shape == (16, 6)  # M x Kd, from a 7-dim free space

    def test_shape_nullspace_example(self, null_case):
        ch, sol = null_case
        V = design_ici_eliminator(ch, sol, 2)
        assert V.shape == (8, 3)  # free space exactly consumed

    def test_orthonormal_and_low_leakage(self, eigen_case):
        ch, sol = eigen_case
        for bs in (1, 2, 3):
            V = design_ici_eliminator(ch, sol, bs)
            np.testing.assert_allclose(V.conj().T @ V, np.eye(6), atol=1e-12)
            J = interference_images(ch, sol, bs)
            assert np.linalg.norm(V.conj().T @ J) <= 1e-10 * np.linalg.norm(J)

    def test_insufficient_dimensions_raises(self):
        # d above the Theorem bound: M - (2K-1)d < Kd
        cfg = NetworkConfig(16, 8, 2, 3)
        ch = generate_channels(cfg, 1)
        sol = design_precoders(ch)
        fat = {k: np.hstack([W, W]) for k, W in sol.per_user_W.items()}
        fat_cfg = NetworkConfig(16, 8, 2, 6)
        fat_ch = ChannelSet(config=fat_cfg, seed=ch.seed, H=ch.H)
        fat_sol = PrecoderSolution(per_user_W=fat, combined_W={},
                                   method=Method.EIGEN)
        with pytest.raises(FeasibilityError):
            design_ici_eliminator(fat_ch, fat_sol, 1)


class TestIuiEliminator:
    def test_two_user_case(self, eigen_case):
        ch, sol = eigen_case
        V = design_ici_eliminator(ch, sol, 1)
        eff = {
            j: V.conj().T @ ch.H[(1, 1, j)] @ sol.per_user_W[(1, j)]
            for j in (1, 2)
        }
        P = design_iui_eliminator(eff, 1)
        assert P.shape == (6, 3)
        np.testing.assert_allclose(P.conj().T @ P, np.eye(3), atol=1e-12)
        assert np.linalg.norm(P.conj().T @ eff[2]) <= \
            1e-10 * np.linalg.norm(eff[2])

    def test_three_user_case(self, null_case):
        ch, sol = null_case
        V = design_ici_eliminator(ch, sol, 1)
        eff = {
            j: V.conj().T @ ch.H[(1, 1, j)] @ sol.per_user_W[(1, j)]
            for j in (1, 2, 3)
        }
        P = design_iui_eliminator(eff, 2)
        assert P.shape == (3, 1)
        others = np.hstack([eff[1], eff[3]])
        assert np.linalg.norm(P.conj().T @ others) <= \
            1e-10 * np.linalg.norm(others)

    def test_rank_deficient_other_users_raises(self):
        eff = {1: np.zeros((6, 3), complex), 2: np.eye(6, 3).astype(complex)}
        with pytest.raises(DegenerateChannelError):
            design_iui_eliminator(eff, 2)


class TestEffectiveChannel:
    def test_full_rank_desired_channel(self, eigen_case):
        ch, sol = eigen_case
        rx = design_receivers(ch, sol)
        for (i, j), H_eff in rx.H_eff.items():
            assert H_eff.shape == (3, 3)
            assert numerical_rank(H_eff) == 3
            np.testing.assert_allclose(
                H_eff,
                effective_channel(ch, sol, rx.V[i], rx.P[(i, j)], i, j),
            )

    def test_cross_user_terms_vanish(self, eigen_case):
        ch, sol = eigen_case
        rx = design_receivers(ch, sol)
        for i in (1, 2, 3):
            for j in (1, 2):
                other = 3 - j
                cross = rx.P[(i, j)].conj().T @ rx.V[i].conj().T @ \
                    ch.H[(i, i, other)] @ sol.per_user_W[(i, other)]
                assert np.linalg.norm(cross) <= 1e-8

    def test_cross_cell_terms_vanish(self, eigen_case):
        ch, sol = eigen_case
        rx = design_receivers(ch, sol)
        for i in (1, 2, 3):
            for j in (1, 2):
                for k in (1, 2, 3):
                    if k == i:
                        continue
                    for jj in (1, 2):
                        cross = rx.P[(i, j)].conj().T @ rx.V[i].conj().T @ \
                            ch.H[(i, k, jj)] @ sol.per_user_W[(k, jj)]
                        assert np.linalg.norm(cross) <= 1e-8


class TestEndToEndLeakage:
    def test_aligned_solution_is_clean(self, eigen_case):
        ch, sol = eigen_case
        rx = design_receivers(ch, sol)
        ici, iui = end_to_end_leakage(ch, sol, rx)
        assert all(v <= 1e-10 for v in ici.values())
        assert all(v <= 1e-10 for v in iui.values())

    def test_random_precoders_leak(self, eigen_case):
        ch, sol = eigen_case
        rx = design_receivers(ch, sol)
        rng = np.random.default_rng(5)
        per_user = {}
        for key in sol.per_user_W:
            W = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
            per_user[key] = W / np.linalg.norm(W, axis=0)
        bad = PrecoderSolution(per_user_W=per_user, combined_W={},
                               method=Method.EIGEN)
        ici, _ = end_to_end_leakage(ch, bad, rx)
        assert max(ici.values()) > 0.1

    def test_zero_interference_reports_zero(self, eigen_case):
        ch, sol = eigen_case
        rx = design_receivers(ch, sol)
        H = dict(ch.H)
        for (i, k, j) in list(H):
            if i != k:
                H[(i, k, j)] = np.zeros_like(H[(i, k, j)])
        quiet = ChannelSet(config=ch.config, seed=ch.seed, H=H)
        ici, _ = end_to_end_leakage(quiet, sol, rx)
        assert all(v == 0.0 for v in ici.values())


class TestNullspaceReceiver:
    def test_all_nine_streams_decodable(self, null_case):
        ch, sol = null_case
        rx = design_receivers(ch, sol)
        assert len(rx.H_eff) == 9
        for H_eff in rx.H_eff.values():
            assert H_eff.shape == (1, 1)
            assert numerical_rank(H_eff) == 1
