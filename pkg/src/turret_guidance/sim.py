"""Nonlinear closed-loop engagement simulator.

Integrates the full planar kinematics of a constant-speed pursuer (with
turret and actuator dynamics) against a constant-speed, constantly
maneuvering target, under the cooperative guidance law.  At every guidance
update the engagement is re-linearized about the instantaneous geometry,
the terminal program is re-solved, and the commands are held (zero-order
hold) until the next update.  Integration is fixed-step RK4; the update
interval must be an integer multiple of the integration step so that
refining the step leaves the command schedule structurally unchanged.

The run terminates at the first instant the range rate becomes
non-negative (closest approach) or the predicted time-to-go falls below
the terminal guard, and the capture box is evaluated there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .errors import NoClosureError, RunawayError
from .guidance import (DEFAULT_T_GO_MIN, GuidanceCommand, apn_reference,
                       guidance_general, saturate_command)
from .linearize import (CollisionTriangle, assemble_linear_model,
                        closing_speed, los_polar, wrap_angle)
from .lti import LtiRealization, expand_preset
from .terminal_qp import DEFAULT_QUAD_NODES, EffortWeights, compute_g, solve_terminal_qp
from .zem import measured_transform, phi_blocks

if TYPE_CHECKING:  # pragma: no cover
    from .config import ScenarioConfig

__all__ = [
    "VehicleParams",
    "EngagementState",
    "CaptureVerdict",
    "TrajectoryLog",
    "GuidanceSettings",
    "initial_engagement_state",
    "step",
    "capture_check",
    "run_engagement",
]

LOG_COLUMNS = (
    "t", "x_p", "y_p", "theta_p", "psi", "omega", "x_t", "y_t", "theta_t",
    "r", "gamma", "gamma_dot", "t_go", "z_d", "z_psi",
    "c_d_star", "c_psi_star", "u1", "u2", "a_p", "tau", "j_running",
)

# Range growing past this multiple of the initial range is treated as a
# diverged engagement.
RUNAWAY_RANGE_FACTOR = 10.0


@dataclass(frozen=True)
class VehicleParams:
    """Constant speeds and actuator realizations of the truth model."""

    v_p: float
    v_t: float
    pursuer_dyn: LtiRealization
    turret_dyn: LtiRealization


@dataclass(frozen=True, eq=False)
class EngagementState:
    """Full world state at one instant; angles wrapped to (-pi, pi]."""

    t: float
    x_p: float
    y_p: float
    theta_p: float
    psi: float
    omega: float
    x_t: float
    y_t: float
    theta_t: float
    x_p_act: np.ndarray = field(default_factory=lambda: np.zeros(0))
    x_c_act: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "theta_p", wrap_angle(self.theta_p))
        object.__setattr__(self, "psi", wrap_angle(self.psi))
        object.__setattr__(self, "theta_t", wrap_angle(self.theta_t))
        object.__setattr__(self, "x_p_act", np.asarray(self.x_p_act, float))
        object.__setattr__(self, "x_c_act", np.asarray(self.x_c_act, float))


@dataclass(frozen=True)
class CaptureVerdict:
    """Terminal evaluation against the turret's range and FOV limits."""

    captured: bool
    t_end: float
    r_end: float
    pointing_err_end: float
    normalized_range: float
    normalized_orientation: float


class TrajectoryLog:
    """Fixed-rate samples of the engagement plus guidance internals."""

    columns = LOG_COLUMNS

    def __init__(self, log_dt: float):
        self.log_dt = float(log_dt)
        self.rows: list[tuple[float, ...]] = []

    def append(self, row):
        self.rows.append(tuple(row))

    def column(self, name: str) -> np.ndarray:
        idx = self.columns.index(name)
        return np.array([row[idx] for row in self.rows])

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class GuidanceSettings:
    """Law selection and the knobs of the per-update guidance pipeline."""

    weights: EffortWeights
    law: str = "cooperative"
    t_go_min: float = DEFAULT_T_GO_MIN
    saturation: bool = False
    quad_nodes: int = DEFAULT_QUAD_NODES
    guidance_dt: float | None = None

    @classmethod
    def from_scenario(cls, scenario) -> "GuidanceSettings":
        return cls(
            weights=EffortWeights(scenario.alpha, scenario.u1_max,
                                  scenario.u2_max),
            law=scenario.law,
            t_go_min=scenario.t_go_min,
            saturation=scenario.saturation,
            quad_nodes=scenario.quad_nodes,
            guidance_dt=scenario.guidance_dt,
        )


def initial_engagement_state(scenario) -> EngagementState:
    """Initial world state from a scenario, with actuators at rest."""
    p_dyn = expand_preset(scenario.pursuer_actuator)
    c_dyn = expand_preset(scenario.turret_actuator)
    return EngagementState(
        t=0.0,
        x_p=scenario.pursuer_x,
        y_p=scenario.pursuer_y,
        theta_p=scenario.pursuer_heading,
        psi=scenario.psi0,
        omega=scenario.omega0,
        x_t=scenario.target_x,
        y_t=scenario.target_y,
        theta_t=scenario.target_heading,
        x_p_act=np.zeros(p_dyn.n),
        x_c_act=np.zeros(c_dyn.n),
    )


def _pack(state: EngagementState) -> np.ndarray:
    return np.concatenate((
        [state.x_p, state.y_p, state.theta_p, state.psi, state.omega,
         state.x_t, state.y_t, state.theta_t],
        state.x_p_act, state.x_c_act,
    ))


def _unpack(y: np.ndarray, t: float, n_p: int) -> EngagementState:
    return EngagementState(
        t=t,
        x_p=y[0], y_p=y[1], theta_p=y[2], psi=y[3], omega=y[4],
        x_t=y[5], y_t=y[6], theta_t=y[7],
        x_p_act=y[8:8 + n_p].copy(),
        x_c_act=y[8 + n_p:].copy(),
    )


def _derivative(y, u1, u2, a_t, params: VehicleParams, n_p: int):
    dy = np.empty_like(y)
    v_p = params.v_p
    v_t = params.v_t
    x_p_act = y[8:8 + n_p]
    x_c_act = y[8 + n_p:]
    a_p = params.pursuer_dyn.output(x_p_act, u1)
    tau = params.turret_dyn.output(x_c_act, u2)
    theta_p = y[2]
    theta_t = y[7]
    dy[0] = v_p * math.cos(theta_p)
    dy[1] = v_p * math.sin(theta_p)
    dy[2] = a_p / v_p
    dy[3] = a_p / v_p + y[4]
    dy[4] = tau
    dy[5] = v_t * math.cos(theta_t)
    dy[6] = v_t * math.sin(theta_t)
    dy[7] = a_t / v_t
    if n_p:
        dy[8:8 + n_p] = params.pursuer_dyn.derivative(x_p_act, u1)
    if x_c_act.size:
        dy[8 + n_p:] = params.turret_dyn.derivative(x_c_act, u2)
    return dy


def _rk4_step(y, u1, u2, a_t, dt, params, n_p):
    k1 = _derivative(y, u1, u2, a_t, params, n_p)
    k2 = _derivative(y + 0.5 * dt * k1, u1, u2, a_t, params, n_p)
    k3 = _derivative(y + 0.5 * dt * k2, u1, u2, a_t, params, n_p)
    k4 = _derivative(y + dt * k3, u1, u2, a_t, params, n_p)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step(state: EngagementState, u1: float, u2: float, a_t: float,
         dt: float, params: VehicleParams) -> EngagementState:
    """One fixed-step RK4 advance with both commands held over the step."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if params.v_p <= 0.0 or params.v_t <= 0.0:
        raise ValueError("vehicle speeds must be positive")
    y = _rk4_step(_pack(state), u1, u2, a_t, dt, params,
                  params.pursuer_dyn.n)
    return _unpack(y, state.t + dt, params.pursuer_dyn.n)


def capture_check(state: EngagementState, r_max: float,
                  fov: float) -> CaptureVerdict:
    """Evaluate the capture box at a state: range and pointing error."""
    r, gamma = los_polar((state.x_p, state.y_p), (state.x_t, state.y_t))
    pointing = wrap_angle(gamma - state.psi)
    normalized_range = r / r_max
    normalized_orientation = pointing / fov
    return CaptureVerdict(
        captured=(normalized_range <= 1.0
                  and abs(normalized_orientation) <= 1.0),
        t_end=state.t,
        r_end=r,
        pointing_err_end=pointing,
        normalized_range=normalized_range,
        normalized_orientation=normalized_orientation,
    )


def _steps_per(interval: float, dt: float, name: str) -> int:
    ratio = interval / dt
    count = round(ratio)
    if count < 1 or abs(ratio - count) > 1e-9 * max(1.0, ratio):
        raise ValueError(f"{name} ({interval}) must be a positive integer "
                         f"multiple of dt ({dt})")
    return count


def run_engagement(initial: EngagementState, guidance: GuidanceSettings,
                   scenario) -> tuple[TrajectoryLog, CaptureVerdict]:
    """Run the closed-loop engagement until closest approach.

    Per guidance update: recompute the line of sight and its rate, freeze
    the collision triangle, rebuild the linear model, form the measured
    transformed state, recompute the effort Gramian, re-solve the terminal
    program, and emit (optionally saturated) commands.  The loop ends at
    the first update where the range rate is non-negative or the predicted
    time-to-go is below the guard, and the capture verdict is evaluated
    there.

    Raises
    ------
    NoClosureError
        If the geometry is not closing at the initial instant.
    RunawayError
        If the range grows past ten times its initial value (carries the
        partial log).
    """
    dt = scenario.dt
    p_dyn = expand_preset(scenario.pursuer_actuator)
    c_dyn = expand_preset(scenario.turret_actuator)
    params = VehicleParams(scenario.v_p, scenario.v_t, p_dyn, c_dyn)
    weights = guidance.weights
    a_t = scenario.a_t
    v_p, v_t = params.v_p, params.v_t
    n_p = p_dyn.n

    guidance_dt = guidance.guidance_dt if guidance.guidance_dt else dt
    steps_per_update = _steps_per(guidance_dt, dt, "guidance_dt")
    steps_per_log = _steps_per(scenario.log_dt, dt, "log_dt")

    y = _pack(initial)
    t0 = initial.t
    r0, gamma = los_polar((y[0], y[1]), (y[5], y[6]))
    v_c0 = closing_speed(v_p, y[2], v_t, y[7], gamma)
    if v_c0 <= 0.0:
        raise NoClosureError(
            f"initial closing speed {v_c0:.3f} m/s is not positive"
        )
    max_t = max(100.0, 50.0 * r0 / v_c0)

    log = TrajectoryLog(scenario.log_dt)
    j_running = 0.0
    u1 = u2 = 0.0
    r = r0
    gamma_dot = 0.0
    t_go = r0 / v_c0
    cmd = GuidanceCommand(0.0, 0.0, 0.0, 0.0, t_go)
    k = 0
    while True:
        t = t0 + k * dt
        if k % steps_per_update == 0:
            r, gamma = los_polar((y[0], y[1]), (y[5], y[6]))
            if r > RUNAWAY_RANGE_FACTOR * r0 or t - t0 > max_t:
                raise RunawayError(
                    f"range {r:.1f} m diverged from initial {r0:.1f} m", log
                )
            v_c = closing_speed(v_p, y[2], v_t, y[7], gamma)
            if v_c <= 0.0:
                break  # closest approach: range rate is -v_c >= 0
            t_go = r / v_c
            if t_go < guidance.t_go_min:
                break
            gamma_dot = (v_t * math.sin(y[7] - gamma)
                         - v_p * math.sin(y[2] - gamma)) / r
            triangle = CollisionTriangle(
                gamma0=gamma, r0=r, theta_p0=y[2], theta_t0=y[7],
                v_c=v_c, t_f=t + t_go,
            )
            model = assemble_linear_model(triangle, p_dyn, c_dyn, v_p)
            blocks = phi_blocks(model, t_go)
            z = measured_transform(
                r, gamma, gamma_dot, y[3], y[4],
                y[8:8 + n_p], y[8 + n_p:], v_c, a_t, model, blocks=blocks,
            )
            g = compute_g(model, weights, t_go, guidance.quad_nodes)
            sol = solve_terminal_qp(z, g, scenario.r_max, scenario.fov)
            if guidance.law == "apn":
                cmd = GuidanceCommand(
                    u1=apn_reference(z.z_d, t_go, triangle.lead_p),
                    u2=0.0,
                    c_d_star=sol.c_d_star, c_psi_star=sol.c_psi_star,
                    t_go=t_go,
                )
            else:
                cmd = guidance_general(z, model, weights, g, sol, blocks,
                                       t_go_min=guidance.t_go_min)
            if guidance.saturation:
                cmd = saturate_command(cmd, weights)
            u1, u2 = cmd.u1, cmd.u2
        if k % steps_per_log == 0:
            log.append((
                t, y[0], y[1], wrap_angle(y[2]), wrap_angle(y[3]), y[4],
                y[5], y[6], wrap_angle(y[7]),
                r, wrap_angle(gamma), gamma_dot, cmd.t_go, z.z_d, z.z_psi,
                cmd.c_d_star, cmd.c_psi_star, u1, u2,
                p_dyn.output(y[8:8 + n_p], u1),
                c_dyn.output(y[8 + n_p:], u2),
                j_running,
            ))
        y = _rk4_step(y, u1, u2, a_t, dt, params, n_p)
        j_running += dt * weights.running_cost(u1, u2)
        k += 1

    final = _unpack(y, t0 + k * dt, n_p)
    return log, capture_check(final, scenario.r_max, scenario.fov)
