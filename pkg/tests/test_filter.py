from dataclasses import replace

import numpy as np
import pytest

from conftest import central_difference, empirical_initial_cov, empirical_noise_hat, random_spd, rel_err
from twoframes.filter import (
    FilterState,
    NoiseModel,
    SingularInnovationCovariance,
    correct,
    error_propagate,
    error_update,
    gain,
    generic_frame_jacobian_imu,
    initial_covariance,
    innovation,
    innovation_from_error,
    jacobians,
    noise_hat,
    output_jacobian,
    propagate,
    state_error,
    update,
)
from twoframes.group import TfgElement, TfgShape, distance, exp_tfg, identity, log_tfg, random_element
from twoframes.lie import exp_rot
from twoframes.system import (
    FrameMismatch,
    GenericFrame,
    OutputModel,
    TwoFramesSystem,
    VectorDynamics,
    evaluate_output,
    random_natural_system,
    random_output,
    random_shape,
)

SIDES = [("left", "fixed"), ("right", "body")]


def systems(count, seed):
    rng = np.random.default_rng(seed)
    for k in range(count):
        shape = random_shape(rng)
        side, frame = SIDES[k % 2]
        yield rng, shape, side, random_natural_system(shape, 1000 * seed + k, frame)


class TestInnovation:
    @pytest.mark.parametrize("side,frame", SIDES)
    def test_depends_on_error_only(self, rng, side, frame):
        for _ in range(20):
            shape = random_shape(rng)
            om = random_output(shape, rng, frame)
            est, true = random_element(shape, rng), random_element(shape, rng)
            z = innovation(om, est, evaluate_output(om, true))
            np.testing.assert_allclose(z, innovation_from_error(om, state_error(est, true, side)), atol=1e-11)

    @pytest.mark.parametrize("side,frame", SIDES)
    def test_zero_at_truth(self, rng, side, frame):
        shape = TfgShape(3, 2, 1)
        om = random_output(shape, rng, frame)
        chi = random_element(shape, rng)
        np.testing.assert_allclose(innovation(om, chi, evaluate_output(om, chi)), 0, atol=1e-12)

    @pytest.mark.parametrize("side,frame", SIDES)
    def test_output_jacobian_fd(self, rng, side, frame):
        shape = TfgShape(3, 2, 2)
        om = random_output(shape, rng, frame, m=3)
        fd = central_difference(lambda xi: innovation_from_error(om, exp_tfg(xi, shape)), np.zeros(shape.dim))
        assert rel_err(fd, output_jacobian(om, shape, side)) < 1e-5

    def test_frame_mismatch(self, rng):
        om = random_output(TfgShape(3, 1, 1), rng, "body")
        with pytest.raises(FrameMismatch):
            output_jacobian(om, TfgShape(3, 1, 1), "left")


class TestJacobians:
    @pytest.mark.parametrize("seed", range(6))
    def test_finite_difference(self, seed):
        for rng, shape, side, system in systems(10, seed):
            J = jacobians(system, 3, side)
            f = lambda xi: log_tfg(error_propagate(exp_tfg(xi, shape), system, 3, side))
            assert rel_err(central_difference(f, np.zeros(shape.dim)), J.A) < 1e-5

    @pytest.mark.parametrize("seed", range(4))
    def test_log_linear(self, seed):
        for rng, shape, side, system in systems(10, seed):
            xi = rng.uniform(-1, 1, shape.dim)
            xi *= 0.5 / np.linalg.norm(xi)
            out = log_tfg(error_propagate(exp_tfg(xi, shape), system, 0, side))
            np.testing.assert_allclose(out, jacobians(system, 0, side).A @ xi, atol=1e-9)

    def test_error_independent_of_estimate(self, rng):
        shape = TfgShape(3, 2, 2)
        system = random_natural_system(shape, 5, "fixed")
        E = random_element(shape, rng, 0.3)
        a = error_propagate(E, system, 0, "left", est=random_element(shape, rng))
        b = error_propagate(E, system, 0, "left", est=random_element(shape, rng))
        assert distance(a, b) < 1e-10

    @pytest.mark.parametrize("side", ["left", "right"])
    def test_two_paths(self, rng, side):
        for _ in range(20):
            shape = random_shape(rng)
            system = random_natural_system(shape, int(rng.integers(1 << 30)), "fixed" if side == "left" else "body")
            E, L = random_element(shape, rng), random_element(shape, rng)
            g = error_propagate(E, system, 1, side, "group")
            c = error_propagate(E, system, 1, side, "components")
            assert distance(g, c) < 1e-11
            assert distance(error_update(E, L, side, "group"), error_update(E, L, side, "components")) < 1e-11

    def test_imu_frame_jacobian_fd(self, rng):
        shape, dt = TfgShape(3, 2, 2), 0.01
        from twoframes.group import compose, inverse

        for _ in range(5):
            omega = rng.standard_normal(3)
            pre = random_element(shape, rng)
            sR = lambda chi: chi.R @ exp_rot(dt * (omega + chi.X[:3]))
            post = TfgElement(sR(pre), pre.x, pre.X)

            def f(xi):
                true = compose(exp_tfg(xi, shape), pre)
                return log_tfg(compose(TfgElement(sR(true), true.x, true.X), inverse(post)))

            A = generic_frame_jacobian_imu(pre, post, omega, dt)
            assert rel_err(central_difference(f, np.zeros(15)), A) < 1e-5

    def test_generic_frame_needs_hook(self):
        shape = TfgShape(3, 1, 1)
        system = TwoFramesSystem(shape, lambda n: (VectorDynamics.identity(shape), GenericFrame(lambda c: c.R)))
        with pytest.raises(ValueError):
            jacobians(system, 0, "right")


class TestNoise:
    @pytest.mark.parametrize("side", ["left", "right"])
    @pytest.mark.parametrize("shape", [TfgShape(3, 2, 2), TfgShape(2, 1, 2)], ids=["d3", "d2"])
    def test_noise_hat_sampling(self, rng, side, shape):
        est = random_element(shape, rng)
        Gx, GX = rng.standard_normal((shape.q, shape.q)), rng.standard_normal((shape.r, shape.r))
        noise = NoiseModel(
            random_spd(rng, shape.dr), random_spd(rng, shape.q), random_spd(rng, shape.r),
            lambda chi: Gx, lambda chi: GX,
        )
        Q, _ = noise_hat(noise, est, side)
        emp = empirical_noise_hat(noise, est, side, 5000, rng)
        assert rel_err(emp, Q) < 1e-4

    def test_left_cross_block_sign(self, rng):
        # Single body vector, unit rotation noise: the cross block is -skew(X)
        X = np.array([1.0, 2.0, 3.0])
        est = TfgElement(np.eye(3), np.zeros(0), X)
        Q, _ = noise_hat(NoiseModel(np.eye(3), np.zeros((0, 0)), np.zeros((3, 3))), est, "left")
        np.testing.assert_allclose(Q[3:, :3], [[0, 3, -2], [-3, 0, 1], [2, -1, 0]])

    @pytest.mark.parametrize("side", ["left", "right"])
    def test_observation_noise(self, rng, side):
        est = random_element(TfgShape(3, 1, 1), rng)
        N = random_spd(rng, 6)
        _, Nh = noise_hat(NoiseModel.zero(est.shape), est, side, N)
        R = est.R.T if side == "left" else est.R
        T = np.kron(np.eye(2), R)
        np.testing.assert_allclose(Nh, T @ N @ T.T, atol=1e-12)

    @pytest.mark.parametrize("side", ["left", "right"])
    def test_initial_covariance_sampling(self, rng, side):
        shape = TfgShape(3, 2, 2)
        est = random_element(shape, rng)
        Pbar = random_spd(rng, shape.dim)
        emp = empirical_initial_cov(Pbar, est, side, 5000, rng)
        assert rel_err(emp, initial_covariance(Pbar, est, side)) < 1e-4


class TestUpdate:
    def test_half_gain_averages(self, rng):
        est = TfgElement(np.eye(3), rng.standard_normal(3), np.zeros(0))
        om = OutputModel("fixed", np.eye(3), np.zeros((3, 0)), np.zeros(3))
        y = rng.standard_normal(3)
        K = np.vstack([np.zeros((3, 3)), 0.5 * np.eye(3)])
        new = correct(est, om, y, K, "left")
        np.testing.assert_allclose(new.x, 0.5 * (est.x + y), atol=1e-15)
        np.testing.assert_array_equal(new.R, np.eye(3))

    def test_scalar_gain_value(self):
        # P = I, N = I and H = [0, I] give K = [0; I/2]
        shape = TfgShape(3, 1, 0)
        state = FilterState(identity(shape), np.eye(6), "left")
        om = OutputModel("fixed", np.eye(3), np.zeros((3, 0)), np.zeros(3))
        K, H = gain(state, om, np.eye(3))
        np.testing.assert_allclose(K, np.vstack([np.zeros((3, 3)), 0.5 * np.eye(3)]), atol=1e-15)
        new = update(state, om, np.eye(3), np.ones(3))
        np.testing.assert_allclose(new.est.x, 0.5 * np.ones(3))
        np.testing.assert_allclose(new.P, np.diag([1, 1, 1, 0.5, 0.5, 0.5]))

    def test_gain_override(self):
        shape = TfgShape(3, 1, 0)
        state = FilterState(identity(shape), np.eye(6), "left")
        om = OutputModel("fixed", np.eye(3), np.zeros((3, 0)), np.zeros(3))
        new = update(state, om, np.eye(3), np.ones(3), K=np.zeros((6, 3)))
        assert distance(new.est, state.est) == 0.0

    def test_wrong_side(self, rng):
        shape = TfgShape(3, 1, 1)
        state = FilterState(identity(shape), np.eye(6), "left")
        with pytest.raises(FrameMismatch):
            gain(state, random_output(shape, rng, "body"), np.eye(6))

    def test_singular_innovation(self, rng):
        shape = TfgShape(3, 1, 1)
        state = FilterState(identity(shape), np.zeros((9, 9)), "left")
        with pytest.raises(SingularInnovationCovariance):
            gain(state, random_output(shape, rng, "fixed"), np.zeros((6, 6)))

    @pytest.mark.parametrize("side,frame", SIDES)
    def test_error_after_update(self, rng, side, frame):
        shape = TfgShape(3, 2, 1)
        om = random_output(shape, rng, frame)
        est, true = random_element(shape, rng), random_element(shape, rng)
        K = 0.1 * rng.standard_normal((shape.dim, om.dim))
        new = correct(est, om, evaluate_output(om, true), K, side)
        z = innovation_from_error(om, state_error(est, true, side))
        expected = error_update(state_error(est, true, side), exp_tfg(K @ z, shape), side)
        assert distance(state_error(new, true, side), expected) < 1e-10


def stable_system(shape, seed, frame):
    """Random natural system rescaled so the vector dynamics are contracting."""
    base = random_natural_system(shape, seed, frame)

    def provider(n):
        vd, fd = base.dynamics(n)
        A = np.block([[vd.F, vd.C], [vd.Gamma, vd.Phi]])
        c = 0.95 / max(1.0, np.abs(np.linalg.eigvals(A)).max())
        return replace(vd, F=c * vd.F, C=c * vd.C, Gamma=c * vd.Gamma, Phi=c * vd.Phi), fd

    return TwoFramesSystem(shape, provider, base.outputs)


@pytest.mark.parametrize("side,frame", SIDES)
def test_riccati_stays_psd(side, frame):
    shape = TfgShape(2, 1, 1)
    rng = np.random.default_rng(7)
    system = stable_system(shape, 11, frame)
    noise = NoiseModel(1e-3 * np.eye(1), 1e-3 * np.eye(2), 1e-3 * np.eye(2))
    state = FilterState(random_element(shape, rng), np.eye(shape.dim), side)
    om = system.outputs[0]
    N = 0.1 * np.eye(om.dim)
    worst = np.inf
    for n in range(10_000):
        state = propagate(state, system, noise, n % 50)
        state = update(state, om, N, evaluate_output(om, state.est) + 0.1 * rng.standard_normal(om.dim))
        worst = min(worst, np.linalg.eigvalsh(state.P).min())
        np.testing.assert_array_equal(state.P, state.P.T)
    assert worst > -1e-12
    assert np.all(np.isfinite(state.P))
