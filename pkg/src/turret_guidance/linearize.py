"""Collision-triangle linearization of the planar engagement.

At a chosen instant the engagement is frozen: the line of sight defines a
reference direction, the closing speed fixes the predicted intercept time,
and the relative motion perpendicular to that reference is modeled as a
double integrator driven by the two actuator channels.  The resulting
linear system

    x' = A x + B1 u + B2 a_t,   x = [d_perp, d_perp', psi, omega, x_p, x_c]

is rebuilt from scratch at every guidance update (recursive linearization),
so construction is kept cheap and nothing is cached across updates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoClosureError
from .lti import LtiRealization

__all__ = [
    "wrap_angle",
    "los_polar",
    "closing_speed",
    "terminal_time",
    "CollisionTriangle",
    "freeze_triangle",
    "LinearizedModel",
    "assemble_linear_model",
]

_TAU = 2.0 * math.pi


def wrap_angle(angle: float) -> float:
    """Wrap an angle to the interval (-pi, pi]."""
    wrapped = math.remainder(angle, _TAU)
    if wrapped <= -math.pi:
        wrapped += _TAU
    return wrapped


def los_polar(pursuer_pos, target_pos) -> tuple[float, float]:
    """Line-of-sight range and angle from pursuer to target.

    Returns ``(r, gamma)`` with ``gamma`` in (-pi, pi].  Coincident
    positions return ``(0.0, 0.0)`` by convention.
    """
    dx = target_pos[0] - pursuer_pos[0]
    dy = target_pos[1] - pursuer_pos[1]
    r = math.hypot(dx, dy)
    if r == 0.0:
        return 0.0, 0.0
    return r, math.atan2(dy, dx)


def closing_speed(v_p, theta_p, v_t, theta_t, gamma) -> float:
    """Rate of range decrease for the given headings and LOS angle.

    v_p * cos(theta_p - gamma) - v_t * cos(theta_t - gamma).  May be
    non-positive; callers decide how to treat a non-closing geometry.
    """
    return v_p * math.cos(theta_p - gamma) - v_t * math.cos(theta_t - gamma)


def terminal_time(r0: float, v_c: float) -> float:
    """Predicted time to intercept, r0 / v_c.

    Raises :class:`NoClosureError` when ``v_c <= 0`` since the linear
    model then has no terminal time.
    """
    if v_c <= 0.0:
        raise NoClosureError(f"closing speed {v_c} is not positive")
    return r0 / v_c


@dataclass(frozen=True)
class CollisionTriangle:
    """Frozen engagement geometry at the linearization instant.

    ``t_f`` is the absolute predicted intercept time; the invariant
    ``t_f - t_now == r0 / v_c`` holds at construction.  Angles are
    wrapped to (-pi, pi].
    """

    gamma0: float
    r0: float
    theta_p0: float
    theta_t0: float
    v_c: float
    t_f: float

    def __post_init__(self):
        if self.r0 < 0.0:
            raise ValueError(f"range must be non-negative, got {self.r0}")
        object.__setattr__(self, "gamma0", wrap_angle(self.gamma0))
        object.__setattr__(self, "theta_p0", wrap_angle(self.theta_p0))
        object.__setattr__(self, "theta_t0", wrap_angle(self.theta_t0))

    @property
    def lead_p(self) -> float:
        """Pursuer lead angle theta_p0 - gamma0, wrapped."""
        return wrap_angle(self.theta_p0 - self.gamma0)

    @property
    def lead_t(self) -> float:
        """Target lead angle theta_t0 - gamma0, wrapped."""
        return wrap_angle(self.theta_t0 - self.gamma0)


def freeze_triangle(t_now, pursuer_pos, theta_p, v_p, target_pos, theta_t,
                    v_t) -> CollisionTriangle:
    """Freeze the collision triangle from instantaneous vehicle states."""
    r, gamma = los_polar(pursuer_pos, target_pos)
    v_c = closing_speed(v_p, theta_p, v_t, theta_t, gamma)
    return CollisionTriangle(
        gamma0=gamma,
        r0=r,
        theta_p0=theta_p,
        theta_t0=theta_t,
        v_c=v_c,
        t_f=t_now + terminal_time(r, v_c),
    )


@dataclass(frozen=True, eq=False)
class LinearizedModel:
    """Assembled linear engagement dynamics about a collision triangle.

    State ordering is [d_perp, d_perp_dot, psi, omega, x_p (n_p), x_c (n_c)].
    ``d_p``/``d_c`` are the actuator feedthroughs and ``v_p`` the pursuer
    speed, kept here because the transformed input map needs them.
    """

    triangle: CollisionTriangle
    a_matrix: np.ndarray
    b1_matrix: np.ndarray
    b2_vector: np.ndarray
    n_p: int
    n_c: int
    d_p: float
    d_c: float
    v_p: float

    @property
    def n(self) -> int:
        """Full state dimension 4 + n_p + n_c."""
        return 4 + self.n_p + self.n_c

    @property
    def b_p(self) -> np.ndarray:
        """Pursuer-actuator input map (slice of column 1 of B1)."""
        return self.b1_matrix[4:4 + self.n_p, 0]

    @property
    def b_c(self) -> np.ndarray:
        """Turret-actuator input map (slice of column 2 of B1)."""
        return self.b1_matrix[4 + self.n_p:, 1]


def assemble_linear_model(triangle: CollisionTriangle,
                          pursuer_dyn: LtiRealization,
                          turret_dyn: LtiRealization,
                          v_p: float) -> LinearizedModel:
    """Build A, B1, B2 for the frozen triangle and actuator realizations.

    Row layout follows the state order [d_perp, d_perp', psi, omega,
    x_p, x_c]: the d_perp'' row carries -cos(lead_p) times the pursuer
    actuator output, the psi row carries the same output scaled by 1/v_p,
    the omega row carries the turret actuator output, and the actuator
    blocks sit on the diagonal.  Pure function; identical inputs produce
    bit-identical matrices.
    """
    n_p, n_c = pursuer_dyn.n, turret_dyn.n
    n = 4 + n_p + n_c
    cos_p = math.cos(triangle.lead_p)
    cos_t = math.cos(triangle.lead_t)

    a = np.zeros((n, n))
    a[0, 1] = 1.0
    a[2, 3] = 1.0
    a[1, 4:4 + n_p] = -cos_p * pursuer_dyn.c
    a[2, 4:4 + n_p] = pursuer_dyn.c / v_p
    a[3, 4 + n_p:] = turret_dyn.c
    a[4:4 + n_p, 4:4 + n_p] = pursuer_dyn.a
    a[4 + n_p:, 4 + n_p:] = turret_dyn.a

    b1 = np.zeros((n, 2))
    b1[1, 0] = -cos_p * pursuer_dyn.d
    b1[2, 0] = pursuer_dyn.d / v_p
    b1[3, 1] = turret_dyn.d
    b1[4:4 + n_p, 0] = pursuer_dyn.b
    b1[4 + n_p:, 1] = turret_dyn.b

    b2 = np.zeros(n)
    b2[1] = cos_t

    a.setflags(write=False)
    b1.setflags(write=False)
    b2.setflags(write=False)
    return LinearizedModel(
        triangle=triangle,
        a_matrix=a,
        b1_matrix=b1,
        b2_vector=b2,
        n_p=n_p,
        n_c=n_c,
        d_p=pursuer_dyn.d,
        d_c=turret_dyn.d,
        v_p=float(v_p),
    )
