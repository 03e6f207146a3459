"""The two-frames group SO(d)^+_{N1,N2}.

An element ``(R, x, X)`` holds a rotation, ``N1`` fixed-frame vectors ``x``
and ``N2`` body-frame vectors ``X``. The composition law is

    (R1, x1, X1) o (R2, x2, X2) = (R1 R2, x1 + R1 * x2, X2 + R2^-1 * X1)

Tangent vectors are flat arrays laid out as ``(xi_R, xi_x, xi_X)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie import act, algebra_dim, exp_rot, hat, log_rot, nu, rep_matrix


class ShapeMismatch(ValueError):
    pass


class SingularNu(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class TfgShape:
    d: int
    n1: int
    n2: int

    def __post_init__(self):
        algebra_dim(self.d)
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("vector counts must be non-negative")

    @property
    def dr(self) -> int:
        """Dimension of the rotation algebra."""
        return algebra_dim(self.d)

    @property
    def q(self) -> int:
        return self.d * self.n1

    @property
    def r(self) -> int:
        return self.d * self.n2

    @property
    def dim(self) -> int:
        return self.dr + self.q + self.r

    @property
    def slices(self) -> tuple[slice, slice, slice]:
        a, b = self.dr, self.dr + self.q
        return slice(0, a), slice(a, b), slice(b, b + self.r)

    def split(self, xi):
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != self.dim:
            raise ShapeMismatch(f"tangent of length {xi.shape[-1]}, expected {self.dim}")
        sR, sx, sX = self.slices
        return xi[..., sR], xi[..., sx], xi[..., sX]


@dataclass(frozen=True)
class TfgElement:
    R: np.ndarray
    x: np.ndarray
    X: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R, dtype=float)
        x = np.asarray(self.x, dtype=float).reshape(-1)
        X = np.asarray(self.X, dtype=float).reshape(-1)
        d = R.shape[-1]
        if R.shape != (d, d) or len(x) % d or len(X) % d:
            raise ShapeMismatch("inconsistent element dimensions")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "X", X)

    @property
    def shape(self) -> TfgShape:
        d = self.R.shape[0]
        return TfgShape(d, len(self.x) // d, len(self.X) // d)

    def __matmul__(self, other: "TfgElement") -> "TfgElement":
        return compose(self, other)


def _check(a: TfgElement, b: TfgElement):
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")


def identity(shape: TfgShape) -> TfgElement:
    return TfgElement(np.eye(shape.d), np.zeros(shape.q), np.zeros(shape.r))


def compose(a: TfgElement, b: TfgElement) -> TfgElement:
    _check(a, b)
    return TfgElement(a.R @ b.R, a.x + act(a.R, b.x), b.X + act(b.R.T, a.X))


def inverse(a: TfgElement) -> TfgElement:
    return TfgElement(a.R.T, -act(a.R.T, a.x), -act(a.R, a.X))


def left_error(est: TfgElement, true: TfgElement) -> TfgElement:
    """``est^-1 o true``; paired with fixed-frame observations."""
    return compose(inverse(est), true)


def right_error(est: TfgElement, true: TfgElement) -> TfgElement:
    """``true o est^-1``; paired with body-frame observations."""
    return compose(true, inverse(est))


def exp_tfg(xi, shape: TfgShape) -> TfgElement:
    """Closed-form exponential: ``x_i = nu(xi_R) xi_x_i``, ``X_j = nu(-xi_R) xi_X_j``."""
    xR, xx, xX = shape.split(xi)
    d = shape.d
    V = nu(xR, d)
    W = nu(-xR, d)
    x = (xx.reshape(-1, d) @ V.T).reshape(-1)
    X = (xX.reshape(-1, d) @ W.T).reshape(-1)
    return TfgElement(exp_rot(xR), x, X)


def log_tfg(a: TfgElement) -> np.ndarray:
    """Inverse of :func:`exp_tfg` on the principal domain."""
    d = a.shape.d
    xR = log_rot(a.R)
    out = [xR]
    for sign, vec in ((1.0, a.x), (-1.0, a.X)):
        if vec.size == 0:
            continue
        V = nu(sign * xR, d)
        if abs(np.linalg.det(V)) < 1e-14:
            raise SingularNu("nu matrix is not invertible")
        out.append(np.linalg.solve(V, vec.reshape(-1, d).T).T.reshape(-1))
    return np.concatenate(out)


def distance(a: TfgElement, b: TfgElement) -> float:
    """Largest of the Frobenius gap on ``R`` and the Euclidean gaps on ``x`` and ``X``."""
    _check(a, b)
    return max(
        float(np.linalg.norm(a.R - b.R)),
        float(np.linalg.norm(a.x - b.x)),
        float(np.linalg.norm(a.X - b.X)),
    )


def star_action(a: TfgElement, beta, Hx, HX):
    """``a * beta = Hx x + R * (HX X + beta)``."""
    beta = np.asarray(beta, dtype=float)
    return np.asarray(Hx) @ a.x + act(a.R, np.asarray(HX) @ a.X + beta)


# Matrix embedding. Used as an independent oracle; production code never goes
# through it.


def embed_matrix(a: TfgElement) -> np.ndarray:
    """Block-diagonal ``[[rep(R), x], [0, 1]] (+) [[rep(R), rep(R) X], [0, 1]]``."""
    s = a.shape
    q, r = s.q, s.r
    M = np.zeros((q + r + 2, q + r + 2))
    M[:q, :q] = rep_matrix(a.R, s.n1)
    M[:q, q] = a.x
    M[q, q] = 1.0
    B = rep_matrix(a.R, s.n2)
    M[q + 1 : q + 1 + r, q + 1 : q + 1 + r] = B
    M[q + 1 : q + 1 + r, -1] = B @ a.X
    M[-1, -1] = 1.0
    return M


def unembed_matrix(M: np.ndarray, shape: TfgShape) -> TfgElement:
    d, q, r = shape.d, shape.q, shape.r
    if shape.n1:
        R = M[:d, :d]
    elif shape.n2:
        R = M[q + 1 : q + 1 + d, q + 1 : q + 1 + d]
    else:
        raise ShapeMismatch("embedding of SO(d)^+_{0,0} does not carry R")
    x = M[:q, q]
    B = M[q + 1 : q + 1 + r, q + 1 : q + 1 + r]
    X = np.linalg.solve(B, M[q + 1 : q + 1 + r, -1]) if r else np.zeros(0)
    return TfgElement(R, x, X)


def embed_algebra(xi, shape: TfgShape) -> np.ndarray:
    """Algebra element whose matrix exponential is ``embed_matrix(exp_tfg(xi))``."""
    xR, xx, xX = shape.split(xi)
    q, r = shape.q, shape.r
    A = hat(xR)
    M = np.zeros((q + r + 2, q + r + 2))
    M[:q, :q] = rep_matrix(A, shape.n1)
    M[:q, q] = xx
    M[q + 1 : q + 1 + r, q + 1 : q + 1 + r] = rep_matrix(A, shape.n2)
    M[q + 1 : q + 1 + r, -1] = xX
    return M


def random_element(shape: TfgShape, rng, scale: float = 1.0) -> TfgElement:
    """Random element; rotation angle below pi, vector entries ~ N(0, scale^2)."""
    xi = rng.uniform(-1.0, 1.0, size=shape.dr)
    if shape.d == 3:
        xi *= rng.uniform(0.0, 3.0) / max(np.linalg.norm(xi), 1e-12)
    else:
        xi *= 3.0
    return TfgElement(
        exp_rot(xi),
        scale * rng.standard_normal(shape.q),
        scale * rng.standard_normal(shape.r),
    )


@dataclass(frozen=True)
class TfgTangent:
    """Structured view of a flat tangent vector."""

    xi_R: np.ndarray
    xi_x: np.ndarray
    xi_X: np.ndarray

    @classmethod
    def from_flat(cls, xi, shape: TfgShape) -> "TfgTangent":
        return cls(*shape.split(xi))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.xi_R, self.xi_x, self.xi_X])
