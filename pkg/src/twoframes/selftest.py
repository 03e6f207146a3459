"""Oracle suites runnable from the command line.

Each suite returns its worst residual; the caller compares it with a
tolerance. Kept deliberately small so ``selftest`` finishes in seconds.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import expm

from . import filter as flt
from .group import (
    TfgElement,
    TfgShape,
    compose,
    distance,
    embed_algebra,
    embed_matrix,
    exp_tfg,
    inverse,
    log_tfg,
    random_element,
)
from .lie import exp_rot
from .system import random_natural_system, random_shape

SHAPES = (TfgShape(3, 2, 2), TfgShape(2, 1, 1))


@dataclass(frozen=True)
class SuiteResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tol)


def central_difference(f: Callable, x0, h: float = 1e-6) -> np.ndarray:
    x0 = np.asarray(x0, dtype=float)
    cols = []
    for i in range(x0.size):
        e = np.zeros_like(x0)
        e[i] = h
        cols.append((np.asarray(f(x0 + e)) - np.asarray(f(x0 - e))) / (2 * h))
    return np.stack(cols, axis=-1)


def relative_error(approx, exact) -> float:
    return float(np.linalg.norm(approx - exact) / max(np.linalg.norm(exact), 1e-12))


def exp_embedding(n: int = 200, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for shape in SHAPES:
        for _ in range(n):
            a, b = random_element(shape, rng), random_element(shape, rng)
            xi = rng.uniform(-1, 1, shape.dim)
            xi *= 2.0 * rng.uniform() / np.linalg.norm(xi)
            Ea, Eb = embed_matrix(a), embed_matrix(b)
            worst = max(
                worst,
                np.abs(embed_matrix(compose(a, b)) - Ea @ Eb).max(),
                np.abs(embed_matrix(inverse(a)) - np.linalg.inv(Ea)).max(),
                np.abs(embed_matrix(exp_tfg(xi, shape)) - expm(embed_algebra(xi, shape))).max(),
            )
    return float(worst)


def _random_cases(n, seed):
    rng = np.random.default_rng(seed)
    for k in range(n):
        shape = random_shape(rng)
        side = "left" if k % 2 == 0 else "right"
        system = random_natural_system(shape, seed * 100003 + k, "fixed" if side == "left" else "body")
        yield rng, shape, side, system


def error_two_path(n: int = 50, seed: int = 1) -> float:
    worst = 0.0
    for rng, shape, side, system in _random_cases(n, seed):
        E = random_element(shape, rng, 0.5)
        L = random_element(shape, rng, 0.5)
        worst = max(
            worst,
            distance(
                flt.error_propagate(E, system, 0, side, "group"),
                flt.error_propagate(E, system, 0, side, "components"),
            ),
            distance(flt.error_update(E, L, side, "group"), flt.error_update(E, L, side, "components")),
        )
    return float(worst)


def log_linearity(n: int = 50, seed: int = 2) -> float:
    worst = 0.0
    for rng, shape, side, system in _random_cases(n, seed):
        xi = rng.uniform(-1, 1, shape.dim)
        xi *= 0.5 * rng.uniform() / np.linalg.norm(xi)
        A = flt.jacobians(system, 0, side).A
        out = log_tfg(flt.error_propagate(exp_tfg(xi, shape), system, 0, side))
        worst = max(worst, np.abs(out - A @ xi).max())
    return float(worst)


def jacobian_fd(n: int = 20, seed: int = 3) -> float:
    worst = 0.0
    for rng, shape, side, system in _random_cases(n, seed):
        J = flt.jacobians(system, 0, side)
        prop = lambda xi: log_tfg(flt.error_propagate(exp_tfg(xi, shape), system, 0, side))
        worst = max(worst, relative_error(central_difference(prop, np.zeros(shape.dim)), J.A))
        om = system.outputs[0]
        H = flt.output_jacobian(om, shape, side)
        inn = lambda xi: flt.innovation_from_error(om, exp_tfg(xi, shape))
        worst = max(worst, relative_error(central_difference(inn, np.zeros(shape.dim)), H))
    return float(worst)


def imu_jacobian_fd(n: int = 10, seed: int = 4) -> float:
    rng = np.random.default_rng(seed)
    shape = TfgShape(3, 2, 2)
    worst = 0.0
    for _ in range(n):
        dt = 0.05
        omega = rng.standard_normal(3)
        pre = random_element(shape, rng)
        sR = lambda chi: chi.R @ exp_rot(dt * (omega + chi.X[:3]))
        post = TfgElement(sR(pre), pre.x, pre.X)

        def frame_error(xi):
            e = exp_tfg(xi, shape)
            true = compose(e, pre)
            true_post = TfgElement(sR(true), true.x, true.X)
            return log_tfg(compose(true_post, inverse(post)))

        A = flt.generic_frame_jacobian_imu(pre, post, omega, dt)
        worst = max(worst, relative_error(central_difference(frame_error, np.zeros(15)), A))
    return float(worst)


SUITES = {
    "exp_embedding": (exp_embedding, 1e-9),
    "error_two_path": (error_two_path, 1e-11),
    "log_linearity": (log_linearity, 1e-9),
    "jacobian_fd": (jacobian_fd, 1e-5),
    "imu_jacobian_fd": (imu_jacobian_fd, 1e-5),
}


def run_all(tol: float | None = None) -> list[SuiteResult]:
    out = []
    for name, (fn, default) in SUITES.items():
        try:
            res = fn()
        except (np.linalg.LinAlgError, FloatingPointError, ValueError):
            res = float("inf")
        out.append(SuiteResult(name, res, default if tol is None else tol))
    return out
