"""Flat-earth inertial navigation with IMU biases, batched over Monte-Carlo runs.

State ``(R, v, p, b_w, b_a)`` with dynamics

    R <- R exp(dt (omega + b_w))
    v <- v + dt (g + R (a + b_a))
    p <- p + dt v

and body-frame landmark observations ``Y = R^T (r - p)``.

All arrays carry a leading run axis ``B``. The TFG filter here is a
vectorized transcription of :mod:`twoframes.filter` specialized to this
system; the tests pin the two together.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie import exp_rot, nu, project_rotation, right_jacobian, skew

DIM = 15
I3 = np.eye(3)


@dataclass(frozen=True)
class NavParams:
    dt: float
    g: np.ndarray
    sigma_gyro: float
    sigma_accel: float
    sigma_landmark: float
    q_pos: float = 1e-10
    q_bias_w: float = 1e-12
    q_bias_a: float = 1e-10


@dataclass(frozen=True)
class NavState:
    """Batched estimate. ``x = (v, p)``, ``X = (b_w, b_a)``; ``P`` is (B, 15, 15)."""

    R: np.ndarray
    x: np.ndarray
    X: np.ndarray
    P: np.ndarray

    @property
    def v(self):
        return self.x[:, :3]

    @property
    def p(self):
        return self.x[:, 3:]

    @property
    def bw(self):
        return self.X[:, :3]

    @property
    def ba(self):
        return self.X[:, 3:]


@dataclass(frozen=True)
class Imu:
    gyro: np.ndarray
    acc: np.ndarray


@dataclass(frozen=True)
class LandmarkObs:
    """Landmarks ``r`` (M, 3) seen as ``Y`` (B, M, 3) in the body frame."""

    r: np.ndarray
    Y: np.ndarray


def mv(A, b):
    return np.einsum("...ij,...j->...i", A, b)


def sym(P):
    return 0.5 * (P + np.swapaxes(P, -1, -2))


def nav_dynamics(R, x, X, imu: Imu, prm: NavParams):
    dt = prm.dt
    v, p = x[:, :3], x[:, 3:]
    bw, ba = X[:, :3], X[:, 3:]
    R_new = R @ exp_rot(dt * (imu.gyro + bw))
    v_new = v + dt * (prm.g + mv(R, imu.acc + ba))
    p_new = p + dt * v
    return R_new, np.concatenate([v_new, p_new], axis=1), X


def attitude_error_deg(R, R_est):
    """Rotation angle of ``R R_est^T`` in degrees, without the log's pi guard."""
    E = R @ np.swapaxes(R_est, -1, -2)
    w = np.stack([E[..., 2, 1] - E[..., 1, 2], E[..., 0, 2] - E[..., 2, 0], E[..., 1, 0] - E[..., 0, 1]], -1)
    c = 0.5 * (np.trace(E, axis1=-2, axis2=-1) - 1.0)
    return np.degrees(np.arctan2(0.5 * np.linalg.norm(w, axis=-1), c))


def _vector_jacobian_right(B, prm: NavParams):
    dt = prm.dt
    A = np.tile(np.eye(DIM), (B, 1, 1))
    A[:, 3:6, 0:3] = dt * skew(prm.g)
    A[:, 3:6, 12:15] = dt * I3
    A[:, 6:9, 3:6] = dt * I3
    return A


def _right_process_noise(R, x, prm: NavParams, rotate_bias=True):
    """Right-error process noise for ``w_R ~ (dt sigma_g)^2 I`` etc.

    ``G_x = diag(R, I)`` maps accelerometer noise on velocity.
    """
    B = R.shape[0]
    dt = prm.dt
    QR = (dt * prm.sigma_gyro) ** 2 * I3
    Qx = np.diag(np.r_[np.full(3, (dt * prm.sigma_accel) ** 2), np.full(3, prm.q_pos)])
    QX = np.diag(np.r_[np.full(3, prm.q_bias_w), np.full(3, prm.q_bias_a)])
    Gx = np.zeros((B, 6, 6))
    Gx[:, :3, :3] = R
    Gx[:, 3:, 3:] = I3
    D = np.concatenate([skew(x[:, :3]), skew(x[:, 3:])], axis=1) @ R  # dg(x) Ad_R
    Q = np.zeros((B, DIM, DIM))
    Q[:, 0:3, 0:3] = R @ QR @ np.swapaxes(R, -1, -2)
    Q[:, 3:9, 0:3] = D @ QR @ np.swapaxes(R, -1, -2)
    Q[:, 0:3, 3:9] = np.swapaxes(Q[:, 3:9, 0:3], -1, -2)
    Q[:, 3:9, 3:9] = D @ QR @ np.swapaxes(D, -1, -2) + Gx @ Qx @ np.swapaxes(Gx, -1, -2)
    if rotate_bias:
        RB = np.zeros((B, 6, 6))
        RB[:, :3, :3] = R
        RB[:, 3:, 3:] = R
        Q[:, 9:, 9:] = RB @ QX @ np.swapaxes(RB, -1, -2)
    else:
        Q[:, 9:, 9:] = QX
    return sym(Q)


def landmark_jacobian_right(r):
    """Rows ``[(r)x, 0, -I, 0, 0]`` per landmark."""
    M = len(r)
    H = np.zeros((3 * M, DIM))
    for m in range(M):
        H[3 * m : 3 * m + 3, 0:3] = skew(r[m])
        H[3 * m : 3 * m + 3, 6:9] = -I3
    return H


def kalman_gain(P, H, Nhat):
    """``K = P H^T S^-1`` for a batch, through a Cholesky factor of ``S``."""
    S = sym(H @ P @ np.swapaxes(H, -1, -2) + Nhat)
    L = np.linalg.cholesky(S)
    HP = H @ P
    Y = np.linalg.solve(L, HP)
    return np.swapaxes(np.linalg.solve(np.swapaxes(L, -1, -2), Y), -1, -2)


# TFG-IEKF


def tfg_initial_covariance(R, x, Pbar):
    """``L Pbar L^T`` for the right error; ``Pbar`` is (B, 15, 15) or (15, 15)."""
    B = R.shape[0]
    L = np.tile(np.eye(DIM), (B, 1, 1))
    L[:, 3:6, 0:3] = skew(x[:, :3])
    L[:, 6:9, 0:3] = skew(x[:, 3:])
    L[:, 9:12, 9:12] = R
    L[:, 12:15, 12:15] = R
    return sym(L @ Pbar @ np.swapaxes(L, -1, -2))


def tfg_transition(s: NavState, imu: Imu, prm: NavParams):
    """Propagated mean and the right-error transition matrix ``A = A_s A_v``."""
    B = s.R.shape[0]
    dt = prm.dt
    R_new, x_new, X_new = nav_dynamics(s.R, s.x, s.X, imu, prm)
    Av = _vector_jacobian_right(B, prm)
    M1 = dt * R_new @ right_jacobian(dt * (imu.gyro + s.bw)) @ np.swapaxes(s.R, -1, -2)
    M2 = R_new @ np.swapaxes(s.R, -1, -2)
    As = np.tile(np.eye(DIM), (B, 1, 1))
    As[:, 0:3, 9:12] = M1
    As[:, 3:6, 9:12] = skew(x_new[:, :3]) @ M1
    As[:, 6:9, 9:12] = skew(x_new[:, 3:]) @ M1
    As[:, 9:12, 9:12] = M2
    As[:, 12:15, 12:15] = M2
    return (R_new, x_new, X_new), As @ Av


def tfg_propagate(s: NavState, imu: Imu, prm: NavParams) -> NavState:
    (R_new, x_new, X_new), A = tfg_transition(s, imu, prm)
    Q = _right_process_noise(R_new, x_new, prm)
    P = sym(A @ s.P @ np.swapaxes(A, -1, -2) + Q)
    return NavState(R_new, x_new, X_new, P)


def _landmark_innovation_right(s: NavState, obs: LandmarkObs):
    # z = R Y + p - r
    z = np.einsum("bij,bmj->bmi", s.R, obs.Y) + s.p[:, None, :] - obs.r[None]
    return z.reshape(z.shape[0], -1)


def tfg_update(s: NavState, obs: LandmarkObs, prm: NavParams) -> NavState:
    H = landmark_jacobian_right(obs.r)
    z = _landmark_innovation_right(s, obs)
    # rep(R) sigma^2 I rep(R)^T is isotropic
    Nhat = prm.sigma_landmark**2 * np.eye(H.shape[0])
    K = kalman_gain(s.P, H, Nhat)
    delta = mv(K, z)
    dR = delta[:, 0:3]
    LR = exp_rot(dR)
    V = nu(dR)
    W = nu(-dR)
    Lx = np.concatenate([mv(V, delta[:, 3:6]), mv(V, delta[:, 6:9])], axis=1)
    LX = np.concatenate([mv(W, delta[:, 9:12]), mv(W, delta[:, 12:15])], axis=1)
    R_new = project_rotation(LR @ s.R)
    x_new = Lx + np.concatenate([mv(LR, s.v), mv(LR, s.p)], axis=1)
    Rt = np.swapaxes(s.R, -1, -2)
    X_new = s.X + np.concatenate([mv(Rt, LX[:, :3]), mv(Rt, LX[:, 3:])], axis=1)
    P = sym((np.eye(DIM) - K @ H) @ s.P)
    return NavState(R_new, x_new, X_new, P)


def tfg_step(s: NavState, imu: Imu, obs: LandmarkObs | None, prm: NavParams) -> NavState:
    s = tfg_propagate(s, imu, prm)
    if obs is not None:
        s = tfg_update(s, obs, prm)
    return s
