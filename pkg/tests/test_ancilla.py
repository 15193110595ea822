import math

import numpy as np
import pytest

from latsearch import (
    AncillaParams,
    LatticeConfig,
    Mode,
    StateVector,
    WalkParams,
    apply_controlled_oracle,
    apply_controlled_walk_power,
    apply_oracle,
    apply_walk_power,
    apply_x_delta,
    apply_zbar,
    norm,
    site_index,
    tulsi_iteration,
    uniform_state,
)

S_HALF = 1.0 / math.sqrt(2.0)


def random_ancilla_state(L, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(2 * L * L)
    v /= np.linalg.norm(v)
    return StateVector(Mode.ANCILLA, L, v)


class TestAncillaParams:
    def test_cos_delta_range(self):
        assert AncillaParams(0.0).cos_delta == 1.0
        assert AncillaParams(math.pi / 2).cos_delta == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("delta", [-0.1, math.pi / 2 + 0.1])
    def test_delta_out_of_range(self, delta):
        with pytest.raises(ValueError, match="delta"):
            AncillaParams(delta)


class TestOracle:
    def test_uniform_state_flip(self):
        cfg = LatticeConfig(L=4, marked=(1, 2))
        state = uniform_state(cfg)
        apply_oracle(state, cfg)
        grid = state.sector()
        assert grid[2, 1] == pytest.approx(-0.25)
        mask = np.ones((4, 4), bool)
        mask[2, 1] = False
        np.testing.assert_allclose(grid[mask], 0.25)

    def test_involution(self):
        cfg = LatticeConfig(L=4)
        state = uniform_state(cfg)
        before = state.amplitudes.copy()
        apply_oracle(state, cfg)
        apply_oracle(state, cfg)
        np.testing.assert_array_equal(state.amplitudes, before)

    def test_norm_unchanged(self):
        cfg = LatticeConfig(L=6, marked=(5, 5))
        state = uniform_state(cfg)
        apply_oracle(state, cfg)
        assert norm(state) == pytest.approx(1.0, abs=1e-15)

    def test_rejects_ancilla_mode(self):
        cfg = LatticeConfig(L=4, mode=Mode.ANCILLA)
        with pytest.raises(ValueError, match="plain"):
            apply_oracle(uniform_state(cfg), cfg)


class TestXDelta:
    def test_half_pi_swaps_sectors(self):
        cfg = LatticeConfig(L=4, mode=Mode.ANCILLA)
        state = uniform_state(cfg)
        apply_x_delta(state, AncillaParams(math.pi / 2))
        np.testing.assert_allclose(state.sector(0), 0.25, atol=1e-16)
        np.testing.assert_allclose(state.sector(1), 0.0, atol=1e-16)

    def test_adjoint_inverts(self):
        state = random_ancilla_state(4, seed=7)
        before = state.amplitudes.copy()
        params = AncillaParams(0.9)
        apply_x_delta(state, params)
        apply_x_delta(state, params, adjoint=True)
        assert np.abs(state.amplitudes - before).max() < 1e-15

    def test_delta_zero_is_identity(self):
        state = random_ancilla_state(4, seed=8)
        before = state.amplitudes.copy()
        apply_x_delta(state, AncillaParams(0.0))
        np.testing.assert_array_equal(state.amplitudes, before)

    def test_rejects_plain(self):
        cfg = LatticeConfig(L=4)
        with pytest.raises(ValueError, match="ancilla"):
            apply_x_delta(uniform_state(cfg), AncillaParams(0.1))


class TestZbar:
    def test_initial_state_unchanged(self):
        cfg = LatticeConfig(L=4, mode=Mode.ANCILLA)
        state = uniform_state(cfg)
        before = state.amplitudes.copy()
        apply_zbar(state)
        np.testing.assert_array_equal(state.amplitudes, before)

    def test_negates_a0_sector(self):
        cfg = LatticeConfig(L=4, mode=Mode.ANCILLA)
        v = np.zeros(32)
        v[site_index(cfg, 2, 1, a=0)] = 1.0
        state = StateVector(Mode.ANCILLA, 4, v)
        apply_zbar(state)
        assert state.amplitudes[site_index(cfg, 2, 1, a=0)] == -1.0

    def test_involution(self):
        state = random_ancilla_state(4, seed=9)
        before = state.amplitudes.copy()
        apply_zbar(apply_zbar(state))
        np.testing.assert_array_equal(state.amplitudes, before)


class TestControlledOracle:
    def test_flips_only_marked_in_a1(self):
        cfg = LatticeConfig(L=4, mode=Mode.ANCILLA)
        state = uniform_state(cfg)
        apply_controlled_oracle(state, cfg)
        idx = site_index(cfg, 0, 0, a=1)
        assert state.amplitudes[idx] == pytest.approx(-0.25)
        others = np.delete(state.amplitudes, idx)
        np.testing.assert_allclose(others[16:], 0.25)

    def test_a0_marked_untouched(self):
        cfg = LatticeConfig(L=4, mode=Mode.ANCILLA)
        v = np.zeros(32)
        v[site_index(cfg, 0, 0, a=0)] = 1.0
        state = StateVector(Mode.ANCILLA, 4, v)
        apply_controlled_oracle(state, cfg)
        assert state.amplitudes[site_index(cfg, 0, 0, a=0)] == 1.0

    def test_involution(self):
        cfg = LatticeConfig(L=4, mode=Mode.ANCILLA)
        state = random_ancilla_state(4, seed=10)
        before = state.amplitudes.copy()
        apply_controlled_oracle(state, cfg)
        apply_controlled_oracle(state, cfg)
        np.testing.assert_array_equal(state.amplitudes, before)


class TestControlledWalk:
    def test_a0_only_state_unchanged(self):
        cfg = LatticeConfig(L=4, mode=Mode.ANCILLA)
        rng = np.random.default_rng(2)
        v = np.zeros(32)
        v[:16] = rng.standard_normal(16)
        state = StateVector(Mode.ANCILLA, 4, v.copy())
        apply_controlled_walk_power(state, WalkParams(s=S_HALF, t1=2))
        np.testing.assert_array_equal(state.amplitudes, v)

    def test_a1_sector_evolves_like_plain(self):
        rng = np.random.default_rng(3)
        grid = rng.standard_normal(16)
        grid /= np.linalg.norm(grid)
        plain = StateVector(Mode.PLAIN, 4, grid.copy())
        v = np.zeros(32)
        v[16:] = grid
        ctrl = StateVector(Mode.ANCILLA, 4, v)
        wparams = WalkParams(s=S_HALF, t1=3)
        apply_walk_power(plain, wparams)
        apply_controlled_walk_power(ctrl, wparams)
        np.testing.assert_array_equal(ctrl.sector(1).ravel(), plain.amplitudes)
        np.testing.assert_array_equal(ctrl.sector(0), 0.0)

    def test_matches_dense_block_structure(self):
        from latsearch import dense_walk_matrix

        cfg = LatticeConfig(L=4, mode=Mode.ANCILLA)
        wparams = WalkParams(s=S_HALF, t1=2)
        wmat = dense_walk_matrix(LatticeConfig(L=4), wparams).m
        big = np.eye(32, dtype=complex)
        big[16:, 16:] = np.linalg.matrix_power(wmat, 2)
        state = random_ancilla_state(4, seed=12)
        expected = (big @ state.amplitudes).real
        apply_controlled_walk_power(state, wparams)
        assert np.abs(state.amplitudes - expected).max() < 1e-12


class TestTulsiIteration:
    def test_delta_zero_reduces_to_plain_step(self):
        cfg = LatticeConfig(L=8, mode=Mode.ANCILLA)
        plain_cfg = LatticeConfig(L=8)
        wparams = WalkParams(s=S_HALF, t1=3)
        ctrl = uniform_state(cfg)
        plain = uniform_state(plain_cfg)
        tulsi_iteration(ctrl, cfg, wparams, AncillaParams(0.0))
        apply_oracle(plain, plain_cfg)
        apply_walk_power(plain, wparams)
        assert np.abs(ctrl.sector(1).ravel() - plain.amplitudes).max() < 1e-15
        np.testing.assert_array_equal(ctrl.sector(0), 0.0)

    def test_half_pi_decouples_sectors(self):
        # At delta = pi/2 the marked-vertex ancilla map is diagonal, so the
        # a=0 sector stays exactly zero everywhere.
        cfg = LatticeConfig(L=8, mode=Mode.ANCILLA)
        wparams = WalkParams(s=S_HALF, t1=3)
        state = uniform_state(cfg)
        for _ in range(10):
            tulsi_iteration(state, cfg, wparams, AncillaParams(math.pi / 2))
        assert np.abs(state.sector(0)).max() < 1e-15

    @pytest.mark.parametrize("delta", [0.2, 0.7, 1.2])
    def test_marked_vertex_ancilla_map(self, delta):
        # Composite map X_d^T diag(1,-1) X_d at the marked vertex equals
        # diag(1,-1) times the rotation by 2*delta.
        c, s = math.cos(delta), math.sin(delta)
        x_d = np.array([[c, s], [-s, c]])
        composite = x_d.T @ np.diag([1.0, -1.0]) @ x_d
        c2, s2 = math.cos(2 * delta), math.sin(2 * delta)
        expected = np.diag([1.0, -1.0]) @ np.array([[c2, s2], [-s2, c2]])
        assert np.abs(composite - expected).max() < 1e-14

    @pytest.mark.parametrize("L", [4, 8, 16])
    @pytest.mark.parametrize("delta", [0.3, 1.0, 1.4])
    def test_zero_sector_conservation(self, L, delta):
        cfg = LatticeConfig(L=L, mode=Mode.ANCILLA)
        wparams = WalkParams(s=S_HALF, t1=3)
        aparams = AncillaParams(delta)
        state = uniform_state(cfg)
        m1, m2 = cfg.marked
        worst = 0.0
        for _ in range(50):
            tulsi_iteration(state, cfg, wparams, aparams)
            off_marked = state.sector(0).copy()
            off_marked[m2, m1] = 0.0
            worst = max(worst, float(np.abs(off_marked).max()))
        assert worst < 1e-12

    def test_norm_preserved(self):
        cfg = LatticeConfig(L=16, mode=Mode.ANCILLA)
        state = uniform_state(cfg)
        for _ in range(100):
            tulsi_iteration(
                state, cfg, WalkParams(s=S_HALF, t1=3), AncillaParams(1.0)
            )
        assert abs(norm(state) - 1.0) < 1e-12


class TestGateNormPreservation:
    @pytest.mark.parametrize("seed", range(5))
    def test_all_gates(self, seed):
        cfg = LatticeConfig(L=8, mode=Mode.ANCILLA)
        wparams = WalkParams(s=0.6, t1=2)
        aparams = AncillaParams(0.8)
        state = random_ancilla_state(8, seed=seed)
        for op in (
            lambda st: apply_x_delta(st, aparams),
            lambda st: apply_controlled_oracle(st, cfg),
            lambda st: apply_x_delta(st, aparams, adjoint=True),
            lambda st: apply_controlled_walk_power(st, wparams),
            apply_zbar,
        ):
            before = norm(state)
            op(state)
            assert abs(norm(state) - before) < 1e-13

    def test_plain_oracle_norm(self):
        cfg = LatticeConfig(L=8)
        rng = np.random.default_rng(33)
        v = rng.standard_normal(64)
        v /= np.linalg.norm(v)
        state = StateVector(Mode.PLAIN, 8, v)
        apply_oracle(state, cfg)
        assert abs(norm(state) - 1.0) < 1e-13
