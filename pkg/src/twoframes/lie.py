"""Rotation groups SO(2) and SO(3) with the pieces needed by two-frames groups.

Rotations are plain ``numpy`` arrays of shape ``(..., d, d)``. Lie-algebra
coordinates have length ``d'`` = 1 (planar angle) or 3 (rotation vector).
Multi-vectors are flat arrays of ``N * d`` entries holding ``N`` stacked
``d``-vectors, acted on term by term.

Most functions accept leading batch dimensions so the Monte-Carlo filters can
process all runs at once.
"""
from __future__ import annotations

import numpy as np

SMALL_ANGLE = 1e-7
# (theta - sin theta) / theta**3 loses all digits well above SMALL_ANGLE
SERIES_ANGLE = 1e-3
NEAR_PI = 1e-6

J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


class AngleNearPi(ValueError):
    """Raised when a rotation logarithm is requested too close to angle pi."""


def algebra_dim(d: int) -> int:
    if d == 2:
        return 1
    if d == 3:
        return 3
    raise ValueError(f"unsupported rotation dimension {d}")


def skew(v):
    """Skew-symmetric matrix ``(v)x`` such that ``skew(v) @ w == cross(v, w)``."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def vee(m):
    m = np.asarray(m, dtype=float)
    if m.shape[-1] == 2:
        return 0.5 * (m[..., 1, 0] - m[..., 0, 1])[..., None]
    return 0.5 * np.stack(
        [m[..., 2, 1] - m[..., 1, 2], m[..., 0, 2] - m[..., 2, 0], m[..., 1, 0] - m[..., 0, 1]],
        axis=-1,
    )


def hat(xi):
    """Algebra element as a ``d x d`` skew matrix (``theta * J`` in the plane)."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] == 1:
        return xi[..., None] * J2
    return skew(xi)


def _coefficients(theta):
    """Return sin(t)/t, (1-cos t)/t**2 and (t-sin t)/t**3 with series fallbacks."""
    t2 = theta * theta
    small = theta < SMALL_ANGLE
    mid = theta < SERIES_ANGLE
    safe = np.where(small, 1.0, theta)
    a = np.where(small, 1.0 - t2 / 6.0 + t2 * t2 / 120.0, np.sin(safe) / safe)
    half = np.sin(0.5 * safe) / safe
    b = np.where(small, 0.5 - t2 / 24.0 + t2 * t2 / 720.0, 2.0 * half * half)
    safe_mid = np.where(mid, 1.0, theta)
    c = np.where(
        mid,
        1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0,
        (safe_mid - np.sin(safe_mid)) / safe_mid**3,
    )
    return a, b, c


def _planar(theta):
    """Return sin(t)/t and (1-cos t)/t for a signed planar angle."""
    t2 = theta * theta
    small = np.abs(theta) < SMALL_ANGLE
    safe = np.where(small, 1.0, theta)
    s = np.where(small, 1.0 - t2 / 6.0 + t2 * t2 / 120.0, np.sin(safe) / safe)
    half = np.sin(0.5 * safe)
    c = np.where(small, theta / 2.0 - theta * t2 / 24.0, 2.0 * half * half / safe)
    return s, c


def rot2(theta):
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def exp_rot(xi):
    """Exponential map of SO(2) (length-1 input) or SO(3) (length-3 input)."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape[-1] == 1:
        return rot2(xi[..., 0])
    theta = np.linalg.norm(xi, axis=-1)
    a, b, _ = _coefficients(theta)
    K = skew(xi)
    eye = np.broadcast_to(np.eye(3), K.shape)
    return eye + a[..., None, None] * K + b[..., None, None] * (K @ K)


def log_rot(R):
    """Principal logarithm; inverse of :func:`exp_rot`.

    Raises :class:`AngleNearPi` when the SO(3) angle is within ``1e-6`` of pi,
    where the rotation axis is ill-conditioned.
    """
    R = np.asarray(R, dtype=float)
    if R.shape[-1] == 2:
        return np.arctan2(R[..., 1, 0], R[..., 0, 0])[..., None]
    w = vee(R - np.swapaxes(R, -1, -2))  # 2 sin(theta) * axis
    s = np.linalg.norm(w, axis=-1)
    c = 0.5 * (np.trace(R, axis1=-2, axis2=-1) - 1.0)
    theta = np.arctan2(0.5 * s, c)
    if np.any(theta > np.pi - NEAR_PI):
        raise AngleNearPi("rotation angle within 1e-6 of pi; logarithm is ill-conditioned")
    small = theta < SMALL_ANGLE
    safe = np.where(small, 1.0, theta)
    factor = np.where(small, 0.5 + theta * theta / 12.0, 0.5 * safe / np.sin(safe))
    return factor[..., None] * w


def adjoint(R):
    """Adjoint on the algebra: ``R exp(xi) R^-1 = exp(adjoint(R) xi)``."""
    R = np.asarray(R, dtype=float)
    if R.shape[-1] == 2:
        return np.ones(R.shape[:-2] + (1, 1))
    return R.copy()


def nu(xi, d=None):
    """Translation factor of the two-frames exponential.

    For SO(3): ``I + (1-cos t)/t^2 (xi)x + (t-sin t)/t^3 (xi)x^2``; in the
    plane ``sin(t)/t I + (1-cos t)/t J`` with the signed angle ``t``.
    """
    xi = np.asarray(xi, dtype=float)
    if d is None:
        d = 2 if xi.shape[-1] == 1 else 3
    if d == 2:
        s, c = _planar(xi[..., 0])
        return s[..., None, None] * np.eye(2) + c[..., None, None] * J2
    theta = np.linalg.norm(xi, axis=-1)
    _, b, c = _coefficients(theta)
    K = skew(xi)
    eye = np.broadcast_to(np.eye(3), K.shape)
    return eye + b[..., None, None] * K + c[..., None, None] * (K @ K)


def right_jacobian(mu):
    """Right Jacobian of SO(3): ``exp(a + b) ~= exp(a) exp(right_jacobian(a) b)``."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape[-1] == 1:
        return np.ones(mu.shape[:-1] + (1, 1))
    theta = np.linalg.norm(mu, axis=-1)
    _, b, c = _coefficients(theta)
    K = skew(mu)
    eye = np.broadcast_to(np.eye(3), K.shape)
    return eye - b[..., None, None] * K + c[..., None, None] * (K @ K)


def act(R, w):
    """Term-by-term rotation of the stacked ``d``-vectors in ``w``."""
    R = np.asarray(R, dtype=float)
    w = np.asarray(w, dtype=float)
    d = R.shape[-1]
    if w.shape[-1] == 0:
        return np.zeros(np.broadcast_shapes(R.shape[:-2], w.shape[:-1]) + (0,))
    blocks = w.reshape(w.shape[:-1] + (-1, d))
    out = np.einsum("...ij,...nj->...ni", R, blocks)
    return out.reshape(out.shape[:-2] + (-1,))


def rep_matrix(R, n):
    """Matrix of the term-by-term action on ``n`` stacked vectors."""
    return np.kron(np.eye(n), np.asarray(R, dtype=float))


def dg_operator(w, d):
    """Matrix ``D`` with ``act(exp_rot(xi), w) = w - D @ xi + O(|xi|^2)``."""
    w = np.asarray(w, dtype=float)
    blocks = w.reshape(-1, d)
    if d == 3:
        return skew(blocks).reshape(-1, 3)
    return -(blocks @ J2.T).reshape(-1, 1)


def project_rotation(R):
    """Closest rotation in Frobenius norm (polar factor)."""
    u, _, vt = np.linalg.svd(R)
    det = np.linalg.det(u @ vt)
    u = u.copy()
    u[..., :, -1] *= np.sign(det)[..., None]
    return u @ vt


def random_rotation(d, rng, scale=np.pi):
    """Rotation with algebra coordinates drawn uniformly in ``[-scale, scale]``."""
    xi = rng.uniform(-scale, scale, size=algebra_dim(d))
    if d == 3 and np.linalg.norm(xi) > np.pi - 1e-3:
        xi *= (np.pi - 1e-3) / np.linalg.norm(xi)
    return exp_rot(xi)
