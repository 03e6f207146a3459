"""Invariant extended Kalman filter on two-frames groups.

Fixed-frame observations are processed with the left error
``E = est^-1 o true``, body-frame observations with the right error
``e = true o est^-1``. The covariance ``P`` describes the exponential
coordinates of that error.

Besides the filter itself this module carries the exact nonlinear error
recursions, which the tests use as oracles for the linearizations.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy.linalg import block_diag, cho_factor, cho_solve

from .group import TfgElement, TfgShape, compose, exp_tfg, identity, inverse
from .lie import act, adjoint, dg_operator, project_rotation, rep_matrix, right_jacobian, skew
from .system import (
    FrameMismatch,
    NaturalFrame,
    OutputModel,
    TwoFramesSystem,
    VectorDynamics,
    apply_frame_dynamics,
    apply_vector_dynamics,
)

COND_MAX = 1e12


class SingularInnovationCovariance(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class FilterState:
    est: TfgElement
    P: np.ndarray
    side: str

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError(f"unknown error side {self.side!r}")


@dataclass(frozen=True)
class NoiseModel:
    """Process noise ``(Q_R, Q_x, Q_X)`` with gain maps ``G_x(chi)``, ``G_X(chi)``.

    The noisy dynamics are ``R <- s_R(chi) exp(w_R)``, ``x <- f_x + G_x w_x``
    and ``X <- f_X + G_X w_X``. Missing gain maps default to identity.
    """

    QR: np.ndarray
    Qx: np.ndarray
    QX: np.ndarray
    Gx: Optional[Callable[[TfgElement], np.ndarray]] = None
    GX: Optional[Callable[[TfgElement], np.ndarray]] = None

    def gains(self, est: TfgElement):
        Gx = self.Gx(est) if self.Gx is not None else np.eye(est.x.size)
        GX = self.GX(est) if self.GX is not None else np.eye(est.X.size)
        return np.asarray(Gx), np.asarray(GX)

    @classmethod
    def zero(cls, shape: TfgShape) -> "NoiseModel":
        return cls(np.zeros((shape.dr, shape.dr)), np.zeros((shape.q, shape.q)), np.zeros((shape.r, shape.r)))


@dataclass(frozen=True)
class JacobianSet:
    As: np.ndarray
    Av: np.ndarray
    H: Optional[np.ndarray] = None

    @property
    def A(self) -> np.ndarray:
        return self.As @ self.Av


def _symmetrize(P):
    return 0.5 * (P + P.T)


def _require_side(om: OutputModel, side: str):
    if om.side != side:
        raise FrameMismatch(f"{om.frame}-frame output needs the {om.side} error, filter uses {side}")


# Innovations


def innovation(om: OutputModel, est: TfgElement, measured):
    """Measurement residual as a function of the invariant error only.

    fixed: ``Z = R^-1 * (y - Hx x) - HX X - B``
    body:  ``z = R * (Y + HX X) + Hx x - b``
    """
    y = np.asarray(measured, dtype=float)
    if om.frame == "fixed":
        return act(est.R.T, y - om.Hx @ est.x) - om.HX @ est.X - om.offset
    return act(est.R, y + om.HX @ est.X) + om.Hx @ est.x - om.offset


def innovation_from_error(om: OutputModel, err: TfgElement):
    """Innovation written through the invariant error (left for fixed, right for body)."""
    if om.frame == "fixed":
        return om.Hx @ err.x + om.HX @ act(err.R, err.X) + act(err.R, om.offset) - om.offset
    Ri = err.R.T
    return -om.HX @ err.X - om.Hx @ act(Ri, err.x) + act(Ri, om.offset) - om.offset


# Jacobians


def vector_jacobian(vd: VectorDynamics, shape: TfgShape, side: str) -> np.ndarray:
    d, dr, q, r = shape.d, shape.dr, shape.q, shape.r
    if side == "left":
        col_x, col_X = -dg_operator(vd.u_bodyside, d), -dg_operator(vd.d_bodyside, d)
    else:
        col_x, col_X = dg_operator(vd.d_fix, d), dg_operator(vd.u_fix, d)
    return np.block(
        [
            [np.eye(dr), np.zeros((dr, q)), np.zeros((dr, r))],
            [col_x.reshape(q, dr), vd.F.reshape(q, q), vd.C.reshape(q, r)],
            [col_X.reshape(r, dr), vd.Gamma.reshape(r, q), vd.Phi.reshape(r, r)],
        ]
    )


def frame_jacobian(fd: NaturalFrame, shape: TfgShape, side: str) -> np.ndarray:
    O, W = fd.O, fd.Omega
    if side == "left":
        return block_diag(
            adjoint(W.T), rep_matrix(W.T @ O.T, shape.n1), np.eye(shape.r)
        ).reshape(shape.dim, shape.dim)
    return block_diag(adjoint(O), np.eye(shape.q), rep_matrix(O @ W, shape.n2)).reshape(shape.dim, shape.dim)


def output_jacobian(om: OutputModel, shape: TfgShape, side: Optional[str] = None) -> np.ndarray:
    if side is not None:
        _require_side(om, side)
    m = om.dim
    Hx = om.Hx.reshape(m, shape.q)
    HX = om.HX.reshape(m, shape.r)
    D = dg_operator(om.offset, shape.d)
    if om.frame == "fixed":
        return np.hstack([-D, Hx, HX])
    return np.hstack([D, -Hx, -HX])


def jacobians(system: TwoFramesSystem, n: int, side: str, est_pre=None, est_post=None) -> JacobianSet:
    """Error-propagation Jacobians of step ``n``.

    Generic frame dynamics delegate ``A_s`` to their hook, which needs the
    estimate after the vector step (``est_pre``) and after the frame step.
    """
    vd, fd = system.dynamics(n)
    Av = vector_jacobian(vd, system.shape, side)
    if isinstance(fd, NaturalFrame):
        As = frame_jacobian(fd, system.shape, side)
    else:
        if fd.jacobian is None or est_pre is None:
            raise ValueError("generic frame dynamics need a jacobian hook and the estimate")
        if est_post is None:
            est_post = apply_frame_dynamics(fd, est_pre)
        As = np.asarray(fd.jacobian(est_pre, est_post))
    H = None
    if len(system.outputs) == 1 and system.outputs[0].side == side:
        H = output_jacobian(system.outputs[0], system.shape)
    return JacobianSet(As, Av, H)


def jacobians_left(system, n, **kw) -> JacobianSet:
    return jacobians(system, n, "left", **kw)


def jacobians_right(system, n, **kw) -> JacobianSet:
    return jacobians(system, n, "right", **kw)


def generic_frame_jacobian_imu(est_pre: TfgElement, est_post: TfgElement, omega, dt: float) -> np.ndarray:
    """Right-error Jacobian of ``R <- R exp(dt (omega + b_w))`` on SO(3)^+_{2,2}.

    The state is laid out ``(R, v, p, b_w, b_a)``. With
    ``M1 = dt R_post J_r(dt (omega + b_w)) R_pre^T`` and ``M2 = R_post R_pre^T``
    the bias errors feed the attitude through ``M1`` and are themselves
    rotated by ``M2``.
    """
    mu = dt * (np.asarray(omega, dtype=float) + est_pre.X[:3])
    M1 = dt * est_post.R @ right_jacobian(mu) @ est_pre.R.T
    M2 = est_post.R @ est_pre.R.T
    v, p = est_pre.x[:3], est_pre.x[3:6]
    A = np.eye(15)
    A[0:3, 9:12] = M1
    A[3:6, 9:12] = skew(v) @ M1
    A[6:9, 9:12] = skew(p) @ M1
    A[9:12, 9:12] = M2
    A[12:15, 12:15] = M2
    return A


# Noise


def noise_hat(noise: NoiseModel, est: TfgElement, side: str, N=None):
    """Process and observation covariances seen by the invariant error."""
    shape = est.shape
    d, n1, n2 = shape.d, shape.n1, shape.n2
    dr, q, r = shape.dr, shape.q, shape.r
    QR, Qx, QX = (np.atleast_2d(np.asarray(m, dtype=float)) for m in (noise.QR, noise.Qx, noise.QX))
    Gx, GX = noise.gains(est)
    Q = np.zeros((shape.dim, shape.dim))
    sR, sx, sX = shape.slices
    if side == "left":
        DX = dg_operator(est.X, d).reshape(r, dr)
        Ri = rep_matrix(est.R.T, n1)
        Q[sR, sR] = QR
        Q[sx, sx] = Ri @ Gx @ Qx @ Gx.T @ Ri.T
        Q[sX, sR] = -DX @ QR
        Q[sR, sX] = Q[sX, sR].T
        Q[sX, sX] = DX @ QR @ DX.T + GX @ QX @ GX.T
    else:
        Ad = adjoint(est.R)
        B = dg_operator(est.x, d).reshape(q, dr) @ Ad
        RB = rep_matrix(est.R, n2)
        Q[sR, sR] = Ad @ QR @ Ad.T
        Q[sx, sR] = B @ QR @ Ad.T
        Q[sR, sx] = Q[sx, sR].T
        Q[sx, sx] = B @ QR @ B.T + Gx @ Qx @ Gx.T
        Q[sX, sX] = RB @ GX @ QX @ GX.T @ RB.T
    Q = _symmetrize(Q)
    if N is None:
        return Q, None
    N = np.atleast_2d(np.asarray(N, dtype=float))
    rot = est.R.T if side == "left" else est.R
    T = rep_matrix(rot, N.shape[0] // d)
    return Q, _symmetrize(T @ N @ T.T)


def initial_covariance(Pbar, est: TfgElement, side: str) -> np.ndarray:
    """Map a covariance of ``(log(R_est^-1 R) or log(R R_est^-1), x - x_est, X - X_est)``.

    The first form pairs with the left error, the second with the right error.
    """
    shape = est.shape
    d, dr, q, r = shape.d, shape.dr, shape.q, shape.r
    L = np.eye(shape.dim)
    sR, sx, sX = shape.slices
    if side == "left":
        L[sx, sx] = rep_matrix(est.R.T, shape.n1)
        L[sX, sR] = -dg_operator(est.X, d).reshape(r, dr)
    else:
        L[sx, sR] = dg_operator(est.x, d).reshape(q, dr)
        L[sX, sX] = rep_matrix(est.R, shape.n2)
    return _symmetrize(L @ np.asarray(Pbar, dtype=float) @ L.T)


# Filter steps


def propagate(state: FilterState, system: TwoFramesSystem, noise: NoiseModel, n: int) -> FilterState:
    vd, fd = system.dynamics(n)
    mid = apply_vector_dynamics(vd, state.est)
    post = apply_frame_dynamics(fd, mid)
    J = jacobians(system, n, state.side, est_pre=mid, est_post=post)
    A = J.A
    Q, _ = noise_hat(noise, post, state.side)
    return FilterState(post, _symmetrize(A @ state.P @ A.T + Q), state.side)


def gain(state: FilterState, om: OutputModel, N):
    """Kalman gain ``K = P H^T S^-1`` and the output Jacobian ``H``."""
    _require_side(om, state.side)
    H = output_jacobian(om, state.est.shape)
    _, Nhat = noise_hat(NoiseModel.zero(state.est.shape), state.est, state.side, N)
    S = _symmetrize(H @ state.P @ H.T + Nhat)
    if np.linalg.cond(S) > COND_MAX:
        raise SingularInnovationCovariance("innovation covariance is numerically singular")
    K = cho_solve(cho_factor(S), H @ state.P).T
    return K, H


def correct(est: TfgElement, om: OutputModel, measured, K, side: str) -> TfgElement:
    """Apply ``exp(K z)`` on the side matching the error, then re-orthonormalize."""
    z = innovation(om, est, measured)
    L = exp_tfg(K @ z, est.shape)
    new = compose(est, L) if side == "left" else compose(L, est)
    return TfgElement(project_rotation(new.R), new.x, new.X)


def update(state: FilterState, om: OutputModel, N, measured, K=None) -> FilterState:
    """Measurement update. A supplied ``K`` replaces the Riccati gain."""
    K_riccati, H = gain(state, om, N)
    K = K_riccati if K is None else np.asarray(K)
    est = correct(state.est, om, measured, K, state.side)
    P = (np.eye(state.P.shape[0]) - K @ H) @ state.P
    return FilterState(est, _symmetrize(P), state.side)


# Exact error recursions


def _phi(system, n):
    return system.phi(n)


def error_propagate(err: TfgElement, system: TwoFramesSystem, n: int, side: str, method: str = "group", est=None):
    """Propagate an invariant error through step ``n`` without linearizing.

    ``method="group"`` evaluates ``phi(Id)^-1 o phi(E)`` (left) or
    ``phi(e) o phi(Id)^-1`` (right); with ``est`` given it uses the states
    directly, which also covers generic frame dynamics. ``method="components"``
    applies the closed-form component recursions (natural systems only).
    """
    phi = _phi(system, n)
    if method == "group":
        if est is not None:
            if side == "left":
                return compose(inverse(phi(est)), phi(compose(est, err)))
            return compose(phi(compose(err, est)), inverse(phi(est)))
        ref = inverse(phi(identity(system.shape)))
        return compose(ref, phi(err)) if side == "left" else compose(phi(err), ref)
    if method != "components":
        raise ValueError(f"unknown method {method!r}")
    vd, fd = system.dynamics(n)
    if not isinstance(fd, NaturalFrame):
        raise ValueError("component recursion only covers natural frame dynamics")
    return error_frame_step(error_vector_step(err, vd, side), fd, side)


def error_vector_step(err: TfgElement, vd: VectorDynamics, side: str) -> TfgElement:
    ER, Ex, EX = err.R, err.x, err.X
    if side == "left":
        x = vd.F @ Ex + vd.C @ act(ER, EX) + act(ER, vd.u_bodyside) - vd.u_bodyside
        X = vd.Phi @ EX + vd.d_bodyside - act(ER.T, vd.d_bodyside) + vd.Gamma @ act(ER.T, Ex)
    else:
        x = vd.F @ Ex + vd.C @ act(ER, EX) + vd.d_fix - act(ER, vd.d_fix)
        X = vd.Phi @ EX + vd.Gamma @ act(ER.T, Ex) + act(ER.T, vd.u_fix) - vd.u_fix
    return TfgElement(ER, x, X)


def error_frame_step(err: TfgElement, fd: NaturalFrame, side: str) -> TfgElement:
    O, W = fd.O, fd.Omega
    if side == "left":
        return TfgElement(W.T @ err.R @ W, act(W.T @ O.T, err.x), err.X)
    return TfgElement(O @ err.R @ O.T, err.x, act(O @ W, err.X))


def error_update(err: TfgElement, L: TfgElement, side: str, method: str = "group") -> TfgElement:
    """Error after the correction ``L``: ``L^-1 o E`` (left) or ``e o L^-1`` (right)."""
    if method == "group":
        Li = inverse(L)
        return compose(Li, err) if side == "left" else compose(err, Li)
    LR = L.R
    if side == "left":
        return TfgElement(
            LR.T @ err.R,
            act(LR.T, err.x - L.x),
            err.X - act(err.R.T @ LR, L.X),
        )
    return TfgElement(
        err.R @ LR.T,
        err.x - act(err.R @ LR.T, L.x),
        act(LR, err.X - L.X),
    )


def state_error(est: TfgElement, true: TfgElement, side: str) -> TfgElement:
    if side == "left":
        return compose(inverse(est), true)
    return compose(true, inverse(est))


def with_est(state: FilterState, est: TfgElement) -> FilterState:
    return replace(state, est=est)
