import numpy as np
import pytest

from edgesync import (
    EmptyWindowError,
    NotPositiveDefiniteError,
    Trajectory,
    WeightedGraph,
    build_matrices,
    check_monotone,
    edge_energy,
    fit_decay_rate,
    make_monitors,
    sync_error,
)

from helpers import C3, P3


def synthetic_traj(times, values, name="V"):
    times = np.asarray(times, dtype=float)
    return Trajectory(
        times=times,
        states=np.zeros((times.size, 1)),
        inputs=np.zeros((times.size, 1)),
        monitors={name: np.asarray(values, dtype=float)},
        metadata={},
    )


class TestSyncError:
    def test_all_equal(self):
        assert sync_error(np.tile([1.0, 2.0], (4, 1))) == 0.0

    def test_single_pair_scalar(self):
        assert sync_error(np.array([[0.0], [3.0]])) == 3.0

    def test_three_scalars(self):
        assert sync_error(np.array([[0.0], [1.0], [3.0]])) == 6.0

    def test_vector_states(self):
        states = np.array([[0.0, 0.0], [3.0, 4.0]])
        assert sync_error(states) == pytest.approx(5.0)


class TestEdgeEnergy:
    def test_zero_on_agreement(self):
        out = edge_energy(np.tile([2.0, -1.0], (3, 1)), C3, np.eye(2))
        assert out.edge_energy == 0.0
        assert np.array_equal(out.per_edge, np.zeros(3))

    def test_single_edge_by_hand(self):
        g = WeightedGraph(2, ((1, 2, 2.0),))
        out = edge_energy(np.array([[0.0], [1.0]]), g, np.eye(1))
        assert out.edge_energy == 2.0
        assert out.per_edge[0] == 1.0
        assert out.sync_error == 1.0

    def test_matches_kron_form(self):
        rng = np.random.default_rng(6)
        p = np.array([[2.0, 0.5], [0.5, 1.0]])
        m = build_matrices(C3)
        for _ in range(10):
            xs = rng.standard_normal((3, 2))
            out = edge_energy(xs, C3, p)
            big = np.kron(m.laplacian, p)
            oracle = float(xs.reshape(-1) @ big @ xs.reshape(-1))
            assert abs(out.edge_energy - oracle) <= 1e-10 * max(1.0, abs(oracle))

    def test_rejects_indefinite_metric(self):
        with pytest.raises(NotPositiveDefiniteError):
            edge_energy(np.zeros((3, 2)), C3, np.diag([1.0, -1.0]))


class TestMonitors:
    def test_channels_present(self):
        mon = make_monitors(P3, np.eye(2))
        assert set(mon) == {"V", "sync_error"}
        xs = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
        assert mon["V"](xs) == edge_energy(xs, P3, np.eye(2)).edge_energy
        assert mon["sync_error"](xs) == sync_error(xs)


class TestFitDecayRate:
    def test_exact_exponential(self):
        t = np.linspace(0.0, 5.0, 200)
        traj = synthetic_traj(t, 5.0 * np.exp(-2.0 * t))
        fit = fit_decay_rate(traj, "V", (0.0, 5.0))
        assert fit.rate == pytest.approx(2.0, abs=1e-9)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert not fit.clipped

    def test_constant_channel(self):
        t = np.linspace(0.0, 1.0, 50)
        fit = fit_decay_rate(synthetic_traj(t, np.full(50, 3.0)), "V", (0.0, 1.0))
        assert fit.rate == pytest.approx(0.0, abs=1e-12)
        assert fit.r_squared == 1.0

    def test_window_restricts_samples(self):
        t = np.linspace(0.0, 10.0, 101)
        v = np.exp(-t)
        v[:50] = 1.0  # flat early segment outside the window
        fit = fit_decay_rate(synthetic_traj(t, v), "V", (5.0, 10.0))
        assert fit.rate == pytest.approx(1.0, abs=1e-9)
        assert fit.window[0] >= 5.0

    def test_clips_at_nonpositive(self):
        t = np.linspace(0.0, 4.0, 41)
        v = np.exp(-t)
        v[30:] = 0.0
        fit = fit_decay_rate(synthetic_traj(t, v), "V", (0.0, 4.0))
        assert fit.clipped
        assert fit.rate == pytest.approx(1.0, abs=1e-9)

    def test_empty_window(self):
        t = np.linspace(0.0, 1.0, 10)
        with pytest.raises(EmptyWindowError):
            fit_decay_rate(synthetic_traj(t, np.exp(-t)), "V", (5.0, 6.0))

    def test_all_nonpositive(self):
        t = np.linspace(0.0, 1.0, 10)
        with pytest.raises(EmptyWindowError):
            fit_decay_rate(synthetic_traj(t, np.zeros(10)), "V", (0.0, 1.0))


class TestCheckMonotone:
    def test_strict_decay_negative(self):
        t = np.linspace(0.0, 2.0, 30)
        assert check_monotone(synthetic_traj(t, np.exp(-t)), "V") < 0.0

    def test_constant_zero(self):
        t = np.linspace(0.0, 1.0, 5)
        assert check_monotone(synthetic_traj(t, np.ones(5)), "V") == 0.0

    def test_uptick_measured_relative(self):
        traj = synthetic_traj([0.0, 1.0, 2.0], [10.0, 4.0, 4.2])
        # jump of 0.2 against max(1, 4)
        assert check_monotone(traj, "V") == pytest.approx(0.05)
