"""Ready-made systems, truth simulation and the Monte-Carlo benchmark.

Three families are provided:

* ``inertial_nav``: flat-earth IMU navigation with gyro and accelerometer
  biases on SO(3)^+_{2,2}, observing known landmarks in the body frame.
* ``lever_arm_car``: planar odometry with an unknown GNSS lever arm on
  SO(2)^+_{1,1}, observing the antenna position in the fixed frame.
* ``slammot``: inertial SLAM with static features and moving targets on
  SO(3)^+_{2+K+2I,0} (``+3I`` with Singer accelerations).
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import block_diag

from .baselines import (
    imperfect_initial_covariance,
    imperfect_iekf_step,
    mekf_initial_covariance,
    mekf_step,
)
from .filter import NoiseModel, generic_frame_jacobian_imu
from .group import TfgElement, TfgShape
from .lie import exp_rot, rot2
from .nav import (
    DIM,
    Imu,
    LandmarkObs,
    NavParams,
    NavState,
    attitude_error_deg,
    tfg_initial_covariance,
    tfg_step,
)
from .system import (
    GenericFrame,
    NaturalFrame,
    OutputModel,
    TwoFramesSystem,
    VectorDynamics,
    evaluate_output,
)

SCENARIOS = ("inertial_nav", "lever_arm_car", "slammot")
FILTERS = ("tfg", "imperfect", "mekf")
METRICS = ("rmse_att_deg", "rmse_vel", "rmse_pos", "rmse_bw_degps", "rmse_ba")


class ConfigError(ValueError):
    pass


def _sec(name, default, **kw):
    if isinstance(default, list):
        return field(default_factory=lambda: list(default), metadata={"section": name})
    return field(default=default, metadata={"section": name})


@dataclass
class ScenarioConfig:
    """All scenario parameters. Units are part of every key name."""

    id: str = _sec("scenario", "inertial_nav")
    dt_s: float = _sec("scenario", 0.01)
    duration_s: float = _sec("scenario", 80.0)
    obs_rate_hz: float = _sec("scenario", 10.0)
    gravity_mps2: float = _sec("scenario", 9.81)

    radius_m: float = _sec("trajectory", 200.0)
    speed_mps: float = _sec("trajectory", 20.0)
    altitude_m: float = _sec("trajectory", 100.0)
    yaw_rate_rad_s: float = _sec("trajectory", 0.1)
    lever_arm_m: list = _sec("trajectory", [0.5, -0.3])

    positions_m: list = _sec("landmarks", [[200.0, 0.0, 0.0], [0.0, 200.0, 50.0], [0.0, -200.0, 50.0]])
    visible_from_s: list = _sec("landmarks", [0.0, 20.0, 20.0])
    visible_until_s: list = _sec("landmarks", [80.0, 80.0, 80.0])

    n_static: int = _sec("slammot", 2)
    n_moving: int = _sec("slammot", 1)
    singer: bool = _sec("slammot", False)
    singer_gamma_per_s: float = _sec("slammot", 0.1)

    sigma_gyro_rad_s: float = _sec("noise", 0.01)
    sigma_accel_mps2: float = _sec("noise", 0.05)
    sigma_landmark_m: float = _sec("noise", 1.0)
    sigma_odo_m: float = _sec("noise", 0.01)
    sigma_odo_rad: float = _sec("noise", 0.001)
    sigma_gnss_m: float = _sec("noise", 1.0)
    sigma_feature_m: float = _sec("noise", 0.5)
    q_pos_m2: float = _sec("noise", 1e-10)
    q_bias_w_rad2_s2: float = _sec("noise", 1e-12)
    q_bias_a_m2_s4: float = _sec("noise", 1e-10)

    sigma_att_deg: float = _sec("initial", 30.0)
    sigma_bw_degps: float = _sec("initial", 1.0)
    sigma_ba_mps2: float = _sec("initial", 0.981)
    sigma_v_mps: float = _sec("initial", 0.1)
    sigma_p_m: float = _sec("initial", 1.0)

    runs: int = _sec("montecarlo", 100)
    seed: int = _sec("montecarlo", 0)
    filters: list = _sec("montecarlo", list(FILTERS))

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.id not in SCENARIOS:
            raise ConfigError(f"unknown scenario id {self.id!r}")
        if not self.dt_s > 0 or not self.duration_s > 0:
            raise ConfigError("dt_s and duration_s must be positive")
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")
        for f in fields(self):
            if f.name.startswith(("sigma_", "q_")) and getattr(self, f.name) < 0:
                raise ConfigError(f"{f.name} must be non-negative")
        n = len(self.positions_m)
        if not (len(self.visible_from_s) == len(self.visible_until_s) == n):
            raise ConfigError("landmark schedule lengths differ from landmark count")
        bad = [f for f in self.filters if f not in FILTERS]
        if bad:
            raise ConfigError(f"unknown filters {bad}")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration_s / self.dt_s))

    @property
    def obs_every(self) -> int:
        return max(1, int(round(1.0 / (self.obs_rate_hz * self.dt_s))))

    @property
    def g(self) -> np.ndarray:
        return np.array([0.0, 0.0, -self.gravity_mps2])

    def to_sections(self) -> dict:
        out: dict = {}
        for f in fields(self):
            out.setdefault(f.metadata["section"], {})[f.name] = getattr(self, f.name)
        return out

    @classmethod
    def from_sections(cls, data: dict) -> "ScenarioConfig":
        known = {f.name: f.metadata["section"] for f in fields(cls)}
        kwargs = {}
        for section, values in data.items():
            if not isinstance(values, dict):
                raise ConfigError(f"top-level key {section!r} must be a section")
            for key, value in values.items():
                if known.get(key) != section:
                    raise ConfigError(f"unknown key {section}.{key}")
                kwargs[key] = value
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def replace(self, **changes) -> "ScenarioConfig":
        d = asdict(self)
        d.update(changes)
        return ScenarioConfig(**d)

    def nav_params(self) -> NavParams:
        return NavParams(
            dt=self.dt_s,
            g=self.g,
            sigma_gyro=self.sigma_gyro_rad_s,
            sigma_accel=self.sigma_accel_mps2,
            sigma_landmark=self.sigma_landmark_m,
            q_pos=self.q_pos_m2,
            q_bias_w=self.q_bias_w_rad2_s2,
            q_bias_a=self.q_bias_a_m2_s4,
        )


# Builders


def _landmark_output(r) -> OutputModel:
    Hx = np.hstack([np.zeros((3, 3)), np.eye(3)])
    return OutputModel("body", Hx, np.zeros((3, 6)), np.asarray(r, dtype=float))


def nav_vector_dynamics(dt, g, acc) -> VectorDynamics:
    I, Z = np.eye(3), np.zeros((3, 3))
    return VectorDynamics(
        F=np.block([[I, Z], [dt * I, I]]),
        C=np.block([[Z, dt * I], [Z, Z]]),
        d_fix=np.r_[dt * np.asarray(g, dtype=float), np.zeros(3)],
        u_bodyside=np.r_[dt * np.asarray(acc, dtype=float), np.zeros(3)],
        Phi=np.eye(6),
        Gamma=np.zeros((6, 6)),
        d_bodyside=np.zeros(6),
        u_fix=np.zeros(6),
    )


def imu_frame(omega, dt) -> GenericFrame:
    omega = np.asarray(omega, dtype=float)
    return GenericFrame(
        sR=lambda chi: chi.R @ exp_rot(dt * (omega + chi.X[:3])),
        jacobian=lambda pre, post: generic_frame_jacobian_imu(pre, post, omega, dt),
        label="gyro bias in frame dynamics",
    )


def build_inertial_nav(
    cfg: ScenarioConfig,
    gyro=None,
    acc=None,
    gyro_bias_in_frame: bool = True,
) -> TwoFramesSystem:
    """SO(3)^+_{2,2} with ``x = (v, p)``, ``X = (b_w, b_a)`` and landmark outputs.

    ``gyro`` and ``acc`` are (n, 3) IMU sequences indexed by step; zeros when
    omitted. With ``gyro_bias_in_frame=False`` the frame step is the natural
    ``R <- R exp(dt omega)``, i.e. the gyro bias is treated as known zero.
    """
    dt = cfg.dt_s
    g = cfg.g

    def provider(n):
        a = np.zeros(3) if acc is None else acc[n]
        w = np.zeros(3) if gyro is None else gyro[n]
        vd = nav_vector_dynamics(dt, g, a)
        fd = imu_frame(w, dt) if gyro_bias_in_frame else NaturalFrame(np.eye(3), exp_rot(dt * w))
        return vd, fd

    outputs = [_landmark_output(r) for r in cfg.positions_m]
    return TwoFramesSystem(TfgShape(3, 2, 2), provider, outputs, name="inertial_nav")


def nav_noise_model(cfg: ScenarioConfig) -> NoiseModel:
    dt = cfg.dt_s
    return NoiseModel(
        QR=(dt * cfg.sigma_gyro_rad_s) ** 2 * np.eye(3),
        Qx=np.diag(np.r_[np.full(3, (dt * cfg.sigma_accel_mps2) ** 2), np.full(3, cfg.q_pos_m2)]),
        QX=np.diag(np.r_[np.full(3, cfg.q_bias_w_rad2_s2), np.full(3, cfg.q_bias_a_m2_s4)]),
        Gx=lambda chi: block_diag(chi.R, np.eye(3)),
    )


def lever_arm_inputs(cfg: ScenarioConfig, n_steps: int):
    """Constant-speed arc: odometry displacement and heading increment per step."""
    dt = cfg.dt_s
    odo = np.tile([cfg.speed_mps * dt, 0.0], (n_steps, 1))
    omega = np.full(n_steps, cfg.yaw_rate_rad_s * dt)
    return odo, omega


def build_lever_arm_car(
    cfg: ScenarioConfig,
    odo=None,
    omega=None,
    scaled_rotation: bool = False,
) -> TwoFramesSystem:
    """SO(2)^+_{1,1}: ``R <- R rho(omega)``, ``x <- x + R u``, lever arm ``X`` constant.

    The fixed-frame output ``y = x + R X`` is the GNSS antenna position.
    ``scaled_rotation`` only tags the system; an odometry scale factor keeps
    the frame group abelian, so the classification is unchanged.
    """
    if odo is None or omega is None:
        odo, omega = lever_arm_inputs(cfg, max(cfg.n_steps, 1))
    odo = np.asarray(odo, dtype=float)
    omega = np.asarray(omega, dtype=float)
    I2, Z2 = np.eye(2), np.zeros((2, 2))

    def provider(n):
        vd = VectorDynamics(I2, Z2, np.zeros(2), odo[n], I2, Z2, np.zeros(2), np.zeros(2))
        return vd, NaturalFrame(I2, rot2(omega[n]))

    out = OutputModel("fixed", I2, I2, np.zeros(2))
    name = "lever_arm_car (scaled rotations)" if scaled_rotation else "lever_arm_car"
    return TwoFramesSystem(TfgShape(2, 1, 1), provider, [out], name=name)


@dataclass(frozen=True)
class SlammotLayout:
    """Index of each 3-vector inside ``x`` for the SLAMMOT state."""

    n_static: int
    n_moving: int
    singer: bool

    @property
    def per_target(self) -> int:
        return 3 if self.singer else 2

    @property
    def n1(self) -> int:
        return 2 + self.n_static + self.per_target * self.n_moving

    def static(self, k):
        return 2 + k

    def target(self, i):
        return 2 + self.n_static + self.per_target * i

    def velocity(self, i):
        return self.target(i) + 1

    def accel(self, i):
        return self.target(i) + 2


def slammot_inputs(cfg: ScenarioConfig, n_steps: int, rng):
    """Preintegrated factors ``(Omega, a_v, a_p)`` for a gently manoeuvring robot."""
    dt = cfg.dt_s
    rates = 0.2 * rng.standard_normal(3) + 0.05 * rng.standard_normal((n_steps, 3))
    Omega = exp_rot(dt * rates)
    acc = rng.standard_normal(3) + 0.5 * rng.standard_normal((n_steps, 3))
    return Omega, dt * acc, 0.5 * dt * dt * acc


def build_slammot(cfg: ScenarioConfig, Omega=None, a_v=None, a_p=None, landmarks=None) -> TwoFramesSystem:
    """Inertial SLAM with moving targets.

    ``x = (v, p, l_1..l_K, q_1, c_1[, a_1], ...)`` and dynamics
    ``R <- R Omega``, ``v <- v + dt g + R a_v``,
    ``p <- p + dt v + dt^2/2 g + R a_p``, ``q <- q + dt c``, and with Singer
    accelerations ``c <- c + dt a``, ``a <- (1 - dt gamma) a``.

    Outputs are body-frame: static features ``R^T (l - p)``, targets
    ``R^T (q - p)`` and known landmarks ``R^T (r - p)``.
    """
    lay = SlammotLayout(cfg.n_static, cfg.n_moving, cfg.singer)
    n1 = lay.n1
    dt = cfg.dt_s
    g = cfg.g
    if Omega is None:
        Omega, a_v, a_p = slammot_inputs(cfg, max(cfg.n_steps, 1), np.random.default_rng(cfg.seed))
    alpha = np.eye(n1)
    alpha[1, 0] = dt
    for i in range(lay.n_moving):
        alpha[lay.target(i), lay.velocity(i)] = dt
        if lay.singer:
            alpha[lay.velocity(i), lay.accel(i)] = dt
            alpha[lay.accel(i), lay.accel(i)] = 1.0 - dt * cfg.singer_gamma_per_s
    F = np.kron(alpha, np.eye(3))
    d = np.zeros(3 * n1)
    d[0:3] = dt * g
    d[3:6] = 0.5 * dt * dt * g
    empty = np.zeros((0, 0))

    def provider(n):
        u = np.zeros(3 * n1)
        u[0:3] = a_v[n]
        u[3:6] = a_p[n]
        vd = VectorDynamics(F, np.zeros((3 * n1, 0)), d, u, empty, np.zeros((0, 3 * n1)), np.zeros(0), np.zeros(0))
        return vd, NaturalFrame(np.eye(3), Omega[n])

    def selector(idx_plus, idx_minus):
        row = np.zeros((1, n1))
        row[0, idx_plus] = 1.0
        if idx_minus is not None:
            row[0, idx_minus] = -1.0
        return np.kron(row, np.eye(3))

    outputs = []
    for k in range(lay.n_static):
        outputs.append(OutputModel("body", selector(1, lay.static(k)), np.zeros((3, 0)), np.zeros(3)))
    for i in range(lay.n_moving):
        outputs.append(OutputModel("body", selector(1, lay.target(i)), np.zeros((3, 0)), np.zeros(3)))
    for r in cfg.positions_m if landmarks is None else landmarks:
        outputs.append(OutputModel("body", selector(1, None), np.zeros((3, 0)), np.asarray(r, dtype=float)))
    sys_ = TwoFramesSystem(TfgShape(3, n1, 0), provider, outputs, name="slammot")
    sys_.layout = lay
    return sys_


def build_system(cfg: ScenarioConfig) -> TwoFramesSystem:
    if cfg.id == "inertial_nav":
        truth = nav_truth(cfg)
        return build_inertial_nav(cfg, truth.gyro, truth.acc)
    if cfg.id == "lever_arm_car":
        return build_lever_arm_car(cfg)
    return build_slammot(cfg)


# Truth and logs


@dataclass(frozen=True)
class NavTruth:
    """Noise-free loop trajectory and the true angular rates / specific forces."""

    t: np.ndarray
    R: np.ndarray
    v: np.ndarray
    p: np.ndarray
    gyro: np.ndarray
    acc: np.ndarray


def nav_truth(cfg: ScenarioConfig) -> NavTruth:
    """Horizontal circle flown with the body x-axis along the velocity.

    Specific forces are chosen so that the discrete dynamics reproduce the
    designed velocity samples exactly; positions follow from the dynamics.
    """
    n, dt = cfg.n_steps, cfg.dt_s
    rate = cfg.speed_mps / cfg.radius_m
    t = dt * np.arange(n + 1)
    psi = rate * t
    v_des = cfg.speed_mps * np.stack([-np.sin(psi), np.cos(psi), np.zeros_like(psi)], -1)
    gyro = np.tile([0.0, 0.0, rate], (n, 1))
    steps = exp_rot(dt * gyro)
    R = np.empty((n + 1, 3, 3))
    v = np.empty((n + 1, 3))
    p = np.empty((n + 1, 3))
    acc = np.empty((n, 3))
    R[0] = exp_rot([0.0, 0.0, np.pi / 2])
    v[0] = v_des[0]
    p[0] = [cfg.radius_m, 0.0, cfg.altitude_m]
    g = cfg.g
    for k in range(n):
        acc[k] = R[k].T @ ((v_des[k + 1] - v[k]) / dt - g)
        R[k + 1] = R[k] @ steps[k]
        v[k + 1] = v[k] + dt * (g + R[k] @ acc[k])
        p[k + 1] = p[k] + dt * v[k]
    return NavTruth(t, R, v, p, gyro, acc)


@dataclass(frozen=True)
class SimLog:
    """One run: truth, IMU stream, landmark measurements and the initial estimate.

    ``obs_steps[j]`` is the step at which ``obs_Y[j]`` (visible, 3) was taken
    of landmarks ``obs_ids[j]``.
    """

    t: np.ndarray
    R: np.ndarray
    x: np.ndarray
    X: np.ndarray
    gyro: np.ndarray
    acc: np.ndarray
    obs_steps: np.ndarray
    obs_ids: list
    obs_Y: list
    est0: TfgElement


def observation_schedule(cfg: ScenarioConfig):
    """Steps with landmark observations and the landmark ids seen at each."""
    t_from = np.asarray(cfg.visible_from_s, dtype=float)
    t_until = np.asarray(cfg.visible_until_s, dtype=float)
    steps, ids = [], []
    eps = 1e-9 * cfg.dt_s
    for k in range(cfg.obs_every, cfg.n_steps + 1, cfg.obs_every):
        tk = k * cfg.dt_s
        vis = np.flatnonzero((t_from <= tk + eps) & (tk <= t_until + eps))
        if vis.size:
            steps.append(k)
            ids.append(vis)
    return np.array(steps, dtype=int), ids


def run_rng(seed: int, run: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(run)]))


def simulate(cfg: ScenarioConfig, rng: np.random.Generator, truth: Optional[NavTruth] = None) -> SimLog:
    """Draw biases, sensor noise and the initial estimate for one inertial-nav run.

    Measured rates and forces are ``truth - bias + noise`` so that feeding
    them back through the dynamics with the true biases gives the truth up
    to process noise.
    """
    if cfg.id != "inertial_nav":
        raise ConfigError("simulate() covers the inertial_nav scenario; use simulate_system for others")
    truth = nav_truth(cfg) if truth is None else truth
    n = cfg.n_steps
    bw = np.radians(cfg.sigma_bw_degps) * rng.standard_normal(3)
    ba = cfg.sigma_ba_mps2 * rng.standard_normal(3)
    dtheta = np.radians(cfg.sigma_att_deg) * rng.standard_normal(3)
    gyro = truth.gyro - bw + cfg.sigma_gyro_rad_s * rng.standard_normal((n, 3))
    acc = truth.acc - ba + cfg.sigma_accel_mps2 * rng.standard_normal((n, 3))
    steps, ids = observation_schedule(cfg)
    r = np.asarray(cfg.positions_m, dtype=float)
    obs_Y = []
    for k, vis in zip(steps, ids):
        Y = (r[vis] - truth.p[k]) @ truth.R[k]
        obs_Y.append(Y + cfg.sigma_landmark_m * rng.standard_normal(Y.shape))
    est0 = TfgElement(exp_rot(-dtheta) @ truth.R[0], np.r_[truth.v[0], truth.p[0]], np.zeros(6))
    x = np.concatenate([truth.v, truth.p], axis=1)
    return SimLog(truth.t, truth.R, x, np.r_[bw, ba], gyro, acc, steps, ids, obs_Y, est0)


def simulate_system(system: TwoFramesSystem, chi0: TfgElement, n_steps: int, rng=None, sigma_obs: float = 0.0):
    """Propagate the truth of any system and sample all its outputs each step."""
    truth = [chi0]
    outputs = []
    for n in range(n_steps):
        chi = system.step(truth[-1], n)
        truth.append(chi)
        ys = []
        for om in system.outputs:
            y = evaluate_output(om, chi)
            if sigma_obs and rng is not None:
                y = y + sigma_obs * rng.standard_normal(y.shape)
            ys.append(y)
        outputs.append(ys)
    return truth, outputs


# Monte Carlo


@dataclass
class MonteCarloResult:
    """Per-run error norms and their RMSE across runs, per filter and metric."""

    t: np.ndarray
    errors: dict
    rmse: dict
    runtime_s: dict = field(default_factory=dict)

    def final(self, filt: str, metric: str) -> float:
        return float(self.rmse[filt][metric][-1])


def rmse(err: np.ndarray) -> np.ndarray:
    """Root mean square over the run axis (axis 0)."""
    return np.sqrt(np.mean(np.square(err), axis=0))


STEPPERS = {"tfg": tfg_step, "imperfect": imperfect_iekf_step, "mekf": mekf_step}
INIT_COV = {
    "tfg": tfg_initial_covariance,
    "imperfect": imperfect_initial_covariance,
    "mekf": mekf_initial_covariance,
}


def prior_covariance(cfg: ScenarioConfig) -> np.ndarray:
    return np.diag(
        np.r_[
            np.full(3, np.radians(cfg.sigma_att_deg) ** 2),
            np.full(3, cfg.sigma_v_mps**2),
            np.full(3, cfg.sigma_p_m**2),
            np.full(3, np.radians(cfg.sigma_bw_degps) ** 2),
            np.full(3, cfg.sigma_ba_mps2**2),
        ]
    )


def _errors(state: NavState, R, x, X):
    return (
        attitude_error_deg(R, state.R),
        np.linalg.norm(x[..., :3] - state.v, axis=-1),
        np.linalg.norm(x[..., 3:] - state.p, axis=-1),
        np.degrees(np.linalg.norm(X[:, :3] - state.bw, axis=-1)),
        np.linalg.norm(X[:, 3:] - state.ba, axis=-1),
    )


def run_filters(cfg: ScenarioConfig, logs: Sequence[SimLog], filters: Sequence[str] = FILTERS) -> MonteCarloResult:
    """Run the requested filters on identical, stacked logs."""
    prm = cfg.nav_params()
    B, n = len(logs), cfg.n_steps
    gyro = np.stack([lg.gyro for lg in logs], axis=1)  # (n, B, 3)
    acc = np.stack([lg.acc for lg in logs], axis=1)
    X_true = np.stack([lg.X for lg in logs])
    R_true, x_true = logs[0].R, logs[0].x
    steps = logs[0].obs_steps
    obs_at = {int(k): j for j, k in enumerate(steps)}
    r_all = np.asarray(cfg.positions_m, dtype=float)
    R0 = np.stack([lg.est0.R for lg in logs])
    x0 = np.stack([lg.est0.x for lg in logs])
    X0 = np.stack([lg.est0.X for lg in logs])
    Pbar = prior_covariance(cfg)
    errors, curves, runtime = {}, {}, {}
    for name in filters:
        start = time.perf_counter()
        step = STEPPERS[name]
        state = NavState(R0, x0, X0, INIT_COV[name](R0, x0, Pbar))
        err = np.empty((len(METRICS), B, n + 1))
        err[:, :, 0] = _errors(state, R_true[0], x_true[0], X_true)
        for k in range(1, n + 1):
            obs = None
            j = obs_at.get(k)
            if j is not None:
                ids = logs[0].obs_ids[j]
                obs = LandmarkObs(r_all[ids], np.stack([lg.obs_Y[j] for lg in logs]))
            state = step(state, Imu(gyro[k - 1], acc[k - 1]), obs, prm)
            err[:, :, k] = _errors(state, R_true[k], x_true[k], X_true)
        runtime[name] = time.perf_counter() - start
        errors[name] = dict(zip(METRICS, err))
        curves[name] = {m: rmse(e) for m, e in errors[name].items()}
    return MonteCarloResult(logs[0].t, errors, curves, runtime)


def run_monte_carlo(cfg: ScenarioConfig, filters: Optional[Sequence[str]] = None) -> MonteCarloResult:
    """Simulate ``cfg.runs`` runs (seeded from ``(cfg.seed, run)``) and run every filter."""
    if cfg.id != "inertial_nav":
        raise ConfigError("the Monte-Carlo benchmark is defined for inertial_nav")
    truth = nav_truth(cfg)
    logs = [simulate(cfg, run_rng(cfg.seed, k), truth) for k in range(cfg.runs)]
    return run_filters(cfg, logs, cfg.filters if filters is None else filters)


__all__ = [
    "ScenarioConfig",
    "ConfigError",
    "SimLog",
    "NavTruth",
    "MonteCarloResult",
    "SlammotLayout",
    "build_inertial_nav",
    "build_lever_arm_car",
    "build_slammot",
    "build_system",
    "nav_noise_model",
    "nav_vector_dynamics",
    "nav_truth",
    "simulate",
    "simulate_system",
    "observation_schedule",
    "run_rng",
    "run_filters",
    "run_monte_carlo",
    "rmse",
    "prior_covariance",
    "DIM",
]
