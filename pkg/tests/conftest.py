import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def central_difference(f, x0, h=1e-6):
    x0 = np.asarray(x0, dtype=float)
    cols = []
    for i in range(x0.size):
        e = np.zeros_like(x0)
        e[i] = h
        cols.append((np.asarray(f(x0 + e)) - np.asarray(f(x0 - e))) / (2 * h))
    return np.stack(cols, axis=-1)


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


def matched_normal(rng, n, dim):
    """``n`` samples whose sample mean is 0 and sample covariance is exactly I."""
    W = rng.standard_normal((n, dim))
    W -= W.mean(axis=0)
    C = np.cov(W, rowvar=False, bias=True)
    return W @ np.linalg.inv(np.linalg.cholesky(C)).T


def empirical_noise_hat(noise, est, side, n, rng, eps=1e-5):
    """Covariance of the invariant-error log when ``est`` is hit by one step of process noise."""
    from twoframes.group import TfgElement, log_tfg
    from twoframes.filter import state_error
    from twoframes.lie import exp_rot

    s = est.shape
    QR, Qx, QX = (np.atleast_2d(noise.QR), np.atleast_2d(noise.Qx), np.atleast_2d(noise.QX))
    Gx, GX = noise.gains(est)
    blocks = [QR, Qx, QX]
    sizes = [s.dr, s.q, s.r]
    W = matched_normal(rng, n, sum(sizes))
    cols, k = [], 0
    for Q, m in zip(blocks, sizes):
        cols.append(W[:, k : k + m] @ np.linalg.cholesky(Q).T if m else W[:, k:k])
        k += m
    logs = np.empty((n, s.dim))
    for i in range(n):
        wR, wx, wX = (eps * c[i] for c in cols)
        true = TfgElement(est.R @ exp_rot(wR), est.x + Gx @ wx, est.X + GX @ wX)
        logs[i] = log_tfg(state_error(est, true, side))
    return logs.T @ logs / (n * eps**2)


def empirical_initial_cov(Pbar, est, side, n, rng, eps=1e-5):
    from twoframes.group import TfgElement, log_tfg
    from twoframes.filter import state_error
    from twoframes.lie import exp_rot

    s = est.shape
    sR, sx, sX = s.slices
    D = matched_normal(rng, n, s.dim) @ np.linalg.cholesky(Pbar).T * eps
    logs = np.empty((n, s.dim))
    for i in range(n):
        dR = exp_rot(D[i, sR])
        R = est.R @ dR if side == "left" else dR @ est.R
        true = TfgElement(R, est.x + D[i, sx], est.X + D[i, sX])
        logs[i] = log_tfg(state_error(est, true, side))
    return logs.T @ logs / (n * eps**2)


def random_spd(rng, m, scale=1.0):
    A = rng.standard_normal((m, m))
    return scale * (A @ A.T / m + 0.1 * np.eye(m))


def _rho(t):
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s], [s, c]])


def _nu2(t):
    if abs(t) < 1e-9:
        return np.eye(2) + 0.5 * t * np.array([[0.0, -1.0], [1.0, 0.0]])
    return np.array([[np.sin(t), np.cos(t) - 1.0], [1.0 - np.cos(t), np.sin(t)]]) / t


def lever_arm_error_step(theta, ex, eX, u, omega, K):
    """Hand-written left-error recursion of the planar car with GNSS on the lever arm.

    Propagation ``ex <- rho(omega)^T (ex + (rho(theta) - I) u)``; the antenna
    innovation is ``z = ex + rho(theta) eX``; the correction ``K z`` is mapped
    through the planar exponential and removed on the left.
    """
    r = _rho(omega)
    ex = r.T @ (ex + (_rho(theta) - np.eye(2)) @ u)
    z = ex + _rho(theta) @ eX
    k = K @ z
    tl = k[0]
    lx, lX = _nu2(tl) @ k[1:3], _nu2(-tl) @ k[3:5]
    theta_new = theta - tl
    ex = _rho(-tl) @ (ex - lx)
    eX = eX - _rho(-theta) @ _rho(tl) @ lX
    return theta_new, ex, eX


def riccati_gains(system, side, steps, q=1e-3, r=1.0):
    """Kalman gain schedule of a natural system; it does not depend on the trajectory."""
    from twoframes.filter import jacobians, output_jacobian
    from twoframes.system import stack_outputs

    om = stack_outputs(system.outputs)
    H = output_jacobian(om, system.shape)
    P = np.eye(system.shape.dim)
    gains = []
    for n in range(steps):
        A = jacobians(system, n, side).A
        P = A @ P @ A.T + q * np.eye(len(P))
        S = H @ P @ H.T + r * np.eye(len(H))
        K = np.linalg.solve(S, H @ P).T
        P = (np.eye(len(P)) - K @ H) @ P
        P = 0.5 * (P + P.T)
        gains.append(K)
    return gains
