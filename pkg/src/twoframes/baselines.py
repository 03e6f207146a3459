"""Reference filters for the inertial-navigation comparison.

``mekf_step``
    Multiplicative EKF on SO(3) x R^12 with the body-frame attitude error
    ``R = R_est exp(dtheta)`` and additive errors elsewhere.
``imperfect_iekf_step``
    Right-invariant EKF on SE_2(3) for ``(R, v, p)`` with additive bias errors.

Both share the batched :class:`~twoframes.nav.NavState` layout and step
interface with :func:`twoframes.nav.tfg_step`.

:class:`SEk` is a small homogeneous-matrix implementation of SE_k(d) used to
cross-check the two-frames group law.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import expm, logm

from .lie import exp_rot, hat, nu, project_rotation, right_jacobian, skew
from .nav import (
    DIM,
    I3,
    Imu,
    LandmarkObs,
    NavParams,
    NavState,
    _landmark_innovation_right,
    _right_process_noise,
    _vector_jacobian_right,
    kalman_gain,
    landmark_jacobian_right,
    mv,
    nav_dynamics,
    sym,
)

# MEKF


def mekf_transition(s: NavState, imu: Imu, prm: NavParams):
    B = s.R.shape[0]
    dt = prm.dt
    mu = dt * (imu.gyro + s.bw)
    mean = nav_dynamics(s.R, s.x, s.X, imu, prm)
    A = np.tile(np.eye(DIM), (B, 1, 1))
    A[:, 0:3, 0:3] = np.swapaxes(exp_rot(mu), -1, -2)
    A[:, 0:3, 9:12] = dt * right_jacobian(mu)
    A[:, 3:6, 0:3] = -dt * s.R @ skew(imu.acc + s.ba)
    A[:, 3:6, 12:15] = dt * s.R
    A[:, 6:9, 3:6] = dt * I3
    return mean, A


def mekf_propagate(s: NavState, imu: Imu, prm: NavParams) -> NavState:
    dt = prm.dt
    (R_new, x_new, X_new), A = mekf_transition(s, imu, prm)
    Q = np.diag(
        np.r_[
            np.full(3, (dt * prm.sigma_gyro) ** 2),
            np.full(3, (dt * prm.sigma_accel) ** 2),
            np.full(3, prm.q_pos),
            np.full(3, prm.q_bias_w),
            np.full(3, prm.q_bias_a),
        ]
    )
    P = sym(A @ s.P @ np.swapaxes(A, -1, -2) + Q)
    return NavState(R_new, x_new, X_new, P)


def mekf_update(s: NavState, obs: LandmarkObs, prm: NavParams) -> NavState:
    B, M = s.R.shape[0], len(obs.r)
    Rt = np.swapaxes(s.R, -1, -2)
    Yhat = np.einsum("bij,bmj->bmi", Rt, obs.r[None] - s.p[:, None, :])
    H = np.zeros((B, 3 * M, DIM))
    for m in range(M):
        H[:, 3 * m : 3 * m + 3, 0:3] = skew(Yhat[:, m])
        H[:, 3 * m : 3 * m + 3, 6:9] = -Rt
    z = (obs.Y - Yhat).reshape(B, -1)
    K = kalman_gain(s.P, H, prm.sigma_landmark**2 * np.eye(3 * M))
    delta = mv(K, z)
    R_new = project_rotation(s.R @ exp_rot(delta[:, 0:3]))
    P = sym((np.eye(DIM) - K @ H) @ s.P)
    return NavState(R_new, s.x + delta[:, 3:9], s.X + delta[:, 9:15], P)


def mekf_step(s: NavState, imu: Imu, obs: LandmarkObs | None, prm: NavParams) -> NavState:
    s = mekf_propagate(s, imu, prm)
    if obs is not None:
        s = mekf_update(s, obs, prm)
    return s


def mekf_initial_covariance(R, x, Pbar):
    B = R.shape[0]
    return np.broadcast_to(Pbar, (B, DIM, DIM)).copy()


# Imperfect IEKF


def imperfect_transition(s: NavState, imu: Imu, prm: NavParams):
    """Transition for the right SE_2(3) error with additive bias errors."""
    B = s.R.shape[0]
    dt = prm.dt
    R_new, x_new, X_new = nav_dynamics(s.R, s.x, s.X, imu, prm)
    Av = _vector_jacobian_right(B, prm)
    Av[:, 3:6, 12:15] = dt * s.R
    M1 = dt * R_new @ right_jacobian(dt * (imu.gyro + s.bw))
    As = np.tile(np.eye(DIM), (B, 1, 1))
    As[:, 0:3, 9:12] = M1
    As[:, 3:6, 9:12] = skew(x_new[:, :3]) @ M1
    As[:, 6:9, 9:12] = skew(x_new[:, 3:]) @ M1
    return (R_new, x_new, X_new), As @ Av


def imperfect_propagate(s: NavState, imu: Imu, prm: NavParams) -> NavState:
    (R_new, x_new, X_new), A = imperfect_transition(s, imu, prm)
    Q = _right_process_noise(R_new, x_new, prm, rotate_bias=False)
    P = sym(A @ s.P @ np.swapaxes(A, -1, -2) + Q)
    return NavState(R_new, x_new, X_new, P)


def imperfect_update(s: NavState, obs: LandmarkObs, prm: NavParams) -> NavState:
    H = landmark_jacobian_right(obs.r)
    z = _landmark_innovation_right(s, obs)
    K = kalman_gain(s.P, H, prm.sigma_landmark**2 * np.eye(H.shape[0]))
    delta = mv(K, z)
    dR = delta[:, 0:3]
    LR = exp_rot(dR)
    V = nu(dR)
    x_new = np.concatenate(
        [mv(V, delta[:, 3:6]) + mv(LR, s.v), mv(V, delta[:, 6:9]) + mv(LR, s.p)], axis=1
    )
    R_new = project_rotation(LR @ s.R)
    P = sym((np.eye(DIM) - K @ H) @ s.P)
    return NavState(R_new, x_new, s.X + delta[:, 9:15], P)


def imperfect_iekf_step(s: NavState, imu: Imu, obs: LandmarkObs | None, prm: NavParams) -> NavState:
    s = imperfect_propagate(s, imu, prm)
    if obs is not None:
        s = imperfect_update(s, obs, prm)
    return s


def imperfect_initial_covariance(R, x, Pbar):
    B = R.shape[0]
    L = np.tile(np.eye(DIM), (B, 1, 1))
    L[:, 3:6, 0:3] = skew(x[:, :3])
    L[:, 6:9, 0:3] = skew(x[:, 3:])
    return sym(L @ Pbar @ np.swapaxes(L, -1, -2))


# SE_k(d) as homogeneous matrices


class SEk:
    """Element of SE_k(d) stored as the (d + k) x (d + k) matrix ``[[R, t], [0, I_k]]``."""

    def __init__(self, M, d: int = 3):
        self.M = np.asarray(M, dtype=float)
        self.d = d

    @classmethod
    def from_parts(cls, R, cols):
        R = np.asarray(R, dtype=float)
        d = R.shape[0]
        cols = np.asarray(cols, dtype=float).reshape(-1, d)
        k = len(cols)
        M = np.eye(d + k)
        M[:d, :d] = R
        M[:d, d:] = cols.T
        return cls(M, d)

    @property
    def R(self):
        return self.M[: self.d, : self.d]

    @property
    def t(self):
        return self.M[: self.d, self.d :].T.reshape(-1)

    def __matmul__(self, other: "SEk") -> "SEk":
        return SEk(self.M @ other.M, self.d)

    def inverse(self) -> "SEk":
        return SEk(np.linalg.inv(self.M), self.d)

    @classmethod
    def exp(cls, xi_R, xi_t, d=3):
        xi_t = np.asarray(xi_t, dtype=float).reshape(-1, d)
        k = len(xi_t)
        A = np.zeros((d + k, d + k))
        A[:d, :d] = hat(np.asarray(xi_R, dtype=float))
        A[:d, d:] = xi_t.T
        return cls(expm(A), d)

    def log(self):
        d = self.d
        A = np.real(logm(self.M))
        if d == 3:
            xi_R = np.array([A[2, 1], A[0, 2], A[1, 0]])
        else:
            xi_R = np.array([A[1, 0]])
        return xi_R, A[:d, d:].T.reshape(-1)


__all__ = [
    "mekf_transition",
    "imperfect_transition",
    "mekf_step",
    "mekf_propagate",
    "mekf_update",
    "mekf_initial_covariance",
    "imperfect_iekf_step",
    "imperfect_propagate",
    "imperfect_update",
    "imperfect_initial_covariance",
    "SEk",
]
