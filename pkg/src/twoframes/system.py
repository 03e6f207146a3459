"""Two-frames observed systems: vector dynamics, frame dynamics and outputs.

A step of the system is ``chi_n = s_n(f_n(chi_{n-1}))`` where ``f_n`` is a
vector dynamics

    x <- [F x + d] + R * [C X + u_bar]
    X <- [Phi X + d_bar] + R^-1 * [Gamma x + u]

and ``s_n`` changes the frame, either ``R <- O R Omega`` (natural) or through an
arbitrary user map (generic).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .group import (
    ShapeMismatch,
    TfgElement,
    TfgShape,
    compose,
    distance,
    identity,
    inverse,
    random_element,
    star_action,
)
from .lie import act, random_rotation

COMMUTE_TOL = 1e-10


class FrameMismatch(ValueError):
    """Fixed-frame and body-frame observations mixed where one side is required."""


@dataclass(frozen=True)
class VectorDynamics:
    F: np.ndarray
    C: np.ndarray
    d_fix: np.ndarray
    u_bodyside: np.ndarray
    Phi: np.ndarray
    Gamma: np.ndarray
    d_bodyside: np.ndarray
    u_fix: np.ndarray

    @classmethod
    def identity(cls, shape: TfgShape) -> "VectorDynamics":
        q, r = shape.q, shape.r
        return cls(
            F=np.eye(q),
            C=np.zeros((q, r)),
            d_fix=np.zeros(q),
            u_bodyside=np.zeros(q),
            Phi=np.eye(r),
            Gamma=np.zeros((r, q)),
            d_bodyside=np.zeros(r),
            u_fix=np.zeros(r),
        )

    def check_shape(self, shape: TfgShape):
        q, r = shape.q, shape.r
        expected = {
            "F": (q, q),
            "C": (q, r),
            "d_fix": (q,),
            "u_bodyside": (q,),
            "Phi": (r, r),
            "Gamma": (r, q),
            "d_bodyside": (r,),
            "u_fix": (r,),
        }
        for name, shp in expected.items():
            if np.shape(getattr(self, name)) != shp:
                raise ShapeMismatch(f"{name} has shape {np.shape(getattr(self, name))}, expected {shp}")


@dataclass(frozen=True)
class NaturalFrame:
    """``R <- O R Omega``."""

    O: np.ndarray
    Omega: np.ndarray


@dataclass(frozen=True)
class GenericFrame:
    """``R <- sR(chi)``.

    ``jacobian(est_pre, est_post)`` returns the error-propagation matrix of the
    frame step, linearized at the estimate before and after the step.
    """

    sR: Callable[[TfgElement], np.ndarray]
    jacobian: Optional[Callable[[TfgElement, TfgElement], np.ndarray]] = None
    label: str = "generic"


FrameDynamics = Union[NaturalFrame, GenericFrame]


@dataclass(frozen=True)
class OutputModel:
    """Natural output.

    fixed frame: ``y = Hx x + R * (HX X + offset)``
    body frame:  ``Y = R^-1 * (offset - Hx x) - HX X``
    """

    frame: str
    Hx: np.ndarray
    HX: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        if self.frame not in ("fixed", "body"):
            raise ValueError(f"unknown output frame {self.frame!r}")
        object.__setattr__(self, "Hx", np.atleast_2d(np.asarray(self.Hx, dtype=float)))
        object.__setattr__(self, "HX", np.atleast_2d(np.asarray(self.HX, dtype=float)))
        object.__setattr__(self, "offset", np.asarray(self.offset, dtype=float).reshape(-1))
        if not (self.Hx.shape[0] == self.HX.shape[0] == self.offset.size):
            raise ShapeMismatch("output blocks disagree on output dimension")

    @property
    def side(self) -> str:
        return "left" if self.frame == "fixed" else "right"

    @property
    def dim(self) -> int:
        return self.offset.size


def stack_outputs(models: Sequence[OutputModel]) -> OutputModel:
    """One tall output model from several of the same frame."""
    frames = {m.frame for m in models}
    if len(frames) != 1:
        raise FrameMismatch("cannot stack fixed-frame and body-frame outputs")
    return OutputModel(
        frames.pop(),
        np.vstack([m.Hx for m in models]),
        np.vstack([m.HX for m in models]),
        np.concatenate([m.offset for m in models]),
    )


Provider = Callable[[int], "tuple[VectorDynamics, FrameDynamics]"]


@dataclass
class TwoFramesSystem:
    shape: TfgShape
    provider: Provider
    outputs: list = field(default_factory=list)
    name: str = "system"
    vector_natural: Optional[bool] = None
    frame_natural: Optional[bool] = None

    def dynamics(self, n: int):
        return self.provider(n)

    def step(self, chi: TfgElement, n: int) -> TfgElement:
        vd, fd = self.provider(n)
        return apply_frame_dynamics(fd, apply_vector_dynamics(vd, chi))

    def phi(self, n: int) -> Callable[[TfgElement], TfgElement]:
        return lambda chi: self.step(chi, n)


def apply_vector_dynamics(vd: VectorDynamics, chi: TfgElement) -> TfgElement:
    R, x, X = chi.R, chi.x, chi.X
    x_new = vd.F @ x + vd.d_fix + act(R, vd.C @ X + vd.u_bodyside)
    X_new = vd.Phi @ X + vd.d_bodyside + act(R.T, vd.Gamma @ x + vd.u_fix)
    return TfgElement(R, x_new, X_new)


def apply_frame_dynamics(fd: FrameDynamics, chi: TfgElement) -> TfgElement:
    if isinstance(fd, NaturalFrame):
        R = fd.O @ chi.R @ fd.Omega
    else:
        R = np.asarray(fd.sR(chi), dtype=float)
    return TfgElement(R, chi.x, chi.X)


def evaluate_output(om: OutputModel, chi: TfgElement):
    if om.frame == "fixed":
        return star_action(chi, om.offset, om.Hx, om.HX)
    return star_action(inverse(chi), om.offset, om.Hx, om.HX)


# Validators


@dataclass(frozen=True)
class CommutationResult:
    ok: bool
    residual: float
    block_structure: bool

    def __bool__(self):
        return self.ok


def _is_scalar_blocks(M, d):
    """True when ``M = kron(alpha, I_d)`` for some matrix ``alpha``."""
    m, n = M.shape
    if m % d or n % d:
        return False
    blocks = M.reshape(m // d, d, n // d, d)
    diag = np.einsum("iaja->ija", blocks)
    alpha = diag[..., 0]
    expected = np.kron(alpha, np.eye(d))
    return bool(np.abs(M - expected).max(initial=0.0) < COMMUTE_TOL)


def check_commutation(M, d: int, trials: int = 20, rng=None) -> CommutationResult:
    """Test ``R * (M w) == M (R * w)`` on random rotations and vectors."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    rng = np.random.default_rng(0) if rng is None else rng
    m, n = M.shape
    if m % d or n % d:
        return CommutationResult(False, np.inf, False)
    residual = 0.0
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    for _ in range(trials):
        R = random_rotation(d, rng)
        w = rng.standard_normal(n)
        gap = act(R, M @ w) - M @ act(R, w)
        residual = max(residual, float(np.abs(gap).max(initial=0.0)) / scale)
    return CommutationResult(residual < COMMUTE_TOL, residual, _is_scalar_blocks(M, d))


class FrameClass(enum.Enum):
    CaseA = "CaseA"
    CaseB = "CaseB"
    CaseC = "CaseC"
    Abelian = "Abelian"
    NotNatural = "NotNatural"

    @property
    def natural(self) -> bool:
        return self is not FrameClass.NotNatural


def _commutes_with_rotations(G, d, rng, trials):
    for _ in range(trials):
        R = random_rotation(d, rng)
        if np.abs(G @ R - R @ G).max() > COMMUTE_TOL:
            return False
    return True


def check_natural_frame(fd: FrameDynamics, shape: TfgShape, trials: int = 10, rng=None) -> FrameClass:
    """Classify frame dynamics against the cases where they are natural.

    The requirement is that ``x -> O * x`` and ``X -> Omega * X`` commute with
    the rotation action on the spaces that are actually present.
    """
    if not isinstance(fd, NaturalFrame):
        return FrameClass.NotNatural
    rng = np.random.default_rng(0) if rng is None else rng
    O_ok = shape.n1 == 0 or _commutes_with_rotations(fd.O, shape.d, rng, trials)
    W_ok = shape.n2 == 0 or _commutes_with_rotations(fd.Omega, shape.d, rng, trials)
    if not (O_ok and W_ok):
        return FrameClass.NotNatural
    if shape.d == 2:
        return FrameClass.Abelian
    O_id = np.allclose(fd.O, np.eye(3), atol=COMMUTE_TOL)
    W_id = np.allclose(fd.Omega, np.eye(3), atol=COMMUTE_TOL)
    if shape.n2 == 0 and O_id:
        return FrameClass.CaseB
    if shape.n1 == 0 and W_id:
        return FrameClass.CaseA
    if O_id and W_id:
        return FrameClass.CaseC
    return FrameClass.NotNatural


def check_vector_natural(vd: VectorDynamics, d: int, trials: int = 10, rng=None) -> bool:
    return all(
        check_commutation(M, d, trials, rng)
        for M in (vd.F, vd.C, vd.Phi, vd.Gamma)
        if np.size(M)
    )


def check_group_affine(phi, shape: TfgShape, trials: int = 20, rng=None, scale: float = 1.0) -> float:
    """Largest gap in ``phi(a o b) = phi(a) o phi(Id)^-1 o phi(b)`` over random pairs."""
    rng = np.random.default_rng(0) if rng is None else rng
    inv_id = inverse(phi(identity(shape)))
    worst = 0.0
    for _ in range(trials):
        a = random_element(shape, rng, scale)
        b = random_element(shape, rng, scale)
        lhs = phi(compose(a, b))
        rhs = compose(compose(phi(a), inv_id), phi(b))
        worst = max(worst, distance(lhs, rhs))
    return worst


def validate_system(system: TwoFramesSystem, steps: Sequence[int] = (0, 1), rng=None):
    """Run the commutation, frame and group-affine checks; store the flags."""
    rng = np.random.default_rng(0) if rng is None else rng
    shape = system.shape
    vec_ok, frame_classes, residual = True, [], 0.0
    for n in steps:
        vd, fd = system.dynamics(n)
        vec_ok &= check_vector_natural(vd, shape.d, rng=rng)
        frame_classes.append(check_natural_frame(fd, shape, rng=rng))
        residual = max(residual, check_group_affine(system.phi(n), shape, rng=rng))
    out_ok = all(
        check_commutation(om.Hx, shape.d, rng=rng) and check_commutation(om.HX, shape.d, rng=rng)
        for om in system.outputs
    )
    system.vector_natural = bool(vec_ok)
    system.frame_natural = all(c.natural for c in frame_classes)
    return {
        "vector_natural": bool(vec_ok),
        "outputs_natural": bool(out_ok),
        "frame_class": frame_classes[0],
        "frame_natural": system.frame_natural,
        "group_affine_residual": residual,
    }


# Random natural systems for property tests


def random_natural_matrix(m: int, n: int, d: int, rng) -> np.ndarray:
    """``kron(alpha, I_d)`` with ``alpha`` uniform in [-2, 2]."""
    return np.kron(rng.uniform(-2.0, 2.0, size=(m, n)), np.eye(d))


def random_vector_dynamics(shape: TfgShape, rng) -> VectorDynamics:
    n1, n2, d = shape.n1, shape.n2, shape.d
    return VectorDynamics(
        F=random_natural_matrix(n1, n1, d, rng),
        C=random_natural_matrix(n1, n2, d, rng),
        d_fix=rng.standard_normal(shape.q),
        u_bodyside=rng.standard_normal(shape.q),
        Phi=random_natural_matrix(n2, n2, d, rng),
        Gamma=random_natural_matrix(n2, n1, d, rng),
        d_bodyside=rng.standard_normal(shape.r),
        u_fix=rng.standard_normal(shape.r),
    )


def random_natural_frame(shape: TfgShape, rng) -> NaturalFrame:
    d = shape.d
    I = np.eye(d)
    if d == 2:
        return NaturalFrame(random_rotation(2, rng), random_rotation(2, rng))
    if shape.n1 == 0:
        return NaturalFrame(random_rotation(3, rng), I)
    if shape.n2 == 0:
        return NaturalFrame(I, random_rotation(3, rng))
    return NaturalFrame(I, I)


def random_output(shape: TfgShape, rng, frame: str, m: int = 2) -> OutputModel:
    d = shape.d
    return OutputModel(
        frame,
        random_natural_matrix(m, shape.n1, d, rng),
        random_natural_matrix(m, shape.n2, d, rng),
        rng.standard_normal(m * d),
    )


def random_natural_system(shape: TfgShape, seed: int, frame: str = "fixed") -> TwoFramesSystem:
    """Random time-varying natural system; step ``n`` depends only on ``(seed, n)``."""

    def provider(n):
        rng = np.random.default_rng([seed, n])
        return random_vector_dynamics(shape, rng), random_natural_frame(shape, rng)

    out_rng = np.random.default_rng([seed, 2**31])
    return TwoFramesSystem(shape, provider, [random_output(shape, out_rng, frame)], name=f"random-{seed}")


def random_shape(rng) -> TfgShape:
    d = int(rng.choice([2, 3]))
    n1, n2 = (int(v) for v in rng.integers(0, 3, size=2))
    if n1 + n2 == 0:
        n1 = 1
    return TfgShape(d, n1, n2)


__all__ = [
    "VectorDynamics",
    "NaturalFrame",
    "GenericFrame",
    "OutputModel",
    "TwoFramesSystem",
    "FrameClass",
    "FrameMismatch",
    "CommutationResult",
    "apply_vector_dynamics",
    "apply_frame_dynamics",
    "evaluate_output",
    "stack_outputs",
    "check_commutation",
    "check_natural_frame",
    "check_vector_natural",
    "check_group_affine",
    "validate_system",
    "random_natural_system",
    "random_natural_matrix",
    "random_vector_dynamics",
    "random_natural_frame",
    "random_output",
    "random_shape",
]
