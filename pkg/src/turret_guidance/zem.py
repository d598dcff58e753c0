"""Terminal projection onto the zero-effort miss and pointing states.

The two terminal constraints only involve the perpendicular separation and
the turret pointing error at the predicted intercept time, so the full
linear state is collapsed to the pair

    z_d   : perpendicular miss at t_f if no control is applied,
    z_psi : LOS-minus-boresight angle at t_f if no control is applied,

using rows of the state-transition matrix exp(A * t_go).  Along controlled
trajectories the pair evolves as z' = B_z(t) u with no drift term, which is
what makes the terminal optimization tractable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoClosureError
from .linearize import LinearizedModel, wrap_angle
from .lti import matrix_exponential

__all__ = [
    "TransformedState",
    "PhiBlocks",
    "phi_blocks",
    "exact_transform",
    "bz_matrix",
    "measured_transform",
]


@dataclass(frozen=True)
class TransformedState:
    """Zero-effort miss distance, pointing error, and the t_go used."""

    z_d: float
    z_psi: float
    t_go: float

    def __post_init__(self):
        if not (math.isfinite(self.z_d) and math.isfinite(self.z_psi)
                and math.isfinite(self.t_go)):
            raise ValueError("transformed state must be finite")
        if self.t_go < 0.0:
            raise ValueError(f"t_go must be non-negative, got {self.t_go}")


@dataclass(frozen=True, eq=False)
class PhiBlocks:
    """Named row slices of the state-transition matrix exp(A * t_go).

    ``phi15``/``phi25``/``phi35`` couple the pursuer actuator states into
    d_perp, d_perp', and psi; ``phi36`` couples the turret actuator states
    into psi.  ``full_phi`` is the whole matrix the slices come from.
    """

    phi15: np.ndarray
    phi25: np.ndarray
    phi35: np.ndarray
    phi36: np.ndarray
    full_phi: np.ndarray


def phi_blocks(model: LinearizedModel, t_go: float) -> PhiBlocks:
    """State-transition matrix at horizon ``t_go`` with its named blocks."""
    if t_go < 0.0:
        raise ValueError(f"t_go must be non-negative, got {t_go}")
    full = matrix_exponential(model.a_matrix * t_go)
    full.setflags(write=False)
    i0 = 4
    i1 = 4 + model.n_p
    return PhiBlocks(
        phi15=full[0, i0:i1],
        phi25=full[1, i0:i1],
        phi35=full[2, i0:i1],
        phi36=full[2, i1:],
        full_phi=full,
    )


def _phi_actuator_products(model: LinearizedModel, t_go_values):
    """(phi15 . b_p, phi35 . b_p, phi36 . b_c) at each horizon value.

    Vectorized over ``t_go_values``; skips the matrix exponential entirely
    when both actuators are feedthrough-only.
    """
    s = np.atleast_1d(np.asarray(t_go_values, dtype=float))
    if model.n_p == 0 and model.n_c == 0:
        zero = np.zeros(s.shape)
        return zero, zero, zero
    phi = matrix_exponential(model.a_matrix * s[:, None, None])
    i0 = 4
    i1 = 4 + model.n_p
    p15b = phi[:, 0, i0:i1] @ model.b_p
    p35b = phi[:, 2, i0:i1] @ model.b_p
    p36b = phi[:, 2, i1:] @ model.b_c
    return p15b, p35b, p36b


def _bz_entries(model: LinearizedModel, t_go_values):
    """Nonzero entries (row1-col1, row2-col1, row2-col2) of B_z, vectorized."""
    s = np.atleast_1d(np.asarray(t_go_values, dtype=float))
    p15b, p35b, p36b = _phi_actuator_products(model, s)
    cos_p = math.cos(model.triangle.lead_p)
    g1 = -model.d_p * cos_p * s + p15b
    g2 = -p35b - model.d_p / model.v_p
    g3 = -p36b - model.d_c * s
    return g1, g2, g3


def bz_matrix(model: LinearizedModel, t_go: float,
              blocks: PhiBlocks) -> np.ndarray:
    """Input map of the transformed dynamics z' = B_z(t) u at one instant."""
    if t_go < 0.0:
        raise ValueError(f"t_go must be non-negative, got {t_go}")
    cos_p = math.cos(model.triangle.lead_p)
    g1 = -model.d_p * t_go * cos_p + float(blocks.phi15 @ model.b_p)
    g2 = -float(blocks.phi35 @ model.b_p) - model.d_p / model.v_p
    g3 = -float(blocks.phi36 @ model.b_c) - t_go * model.d_c
    return np.array([[g1, 0.0], [g2, g3]])


def exact_transform(x, model: LinearizedModel, t_go: float,
                    a_t: float) -> TransformedState:
    """Terminal projection of a full linear state vector.

    ``z_d`` adds the ballistic miss growth, the pursuer-actuator tail, and
    the known target-maneuver contribution; ``z_psi`` is the frozen LOS
    angle minus the coasting turret prediction.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (model.n,):
        raise ValueError(
            f"state dimension {x.shape} does not match model dimension ({model.n},)"
        )
    blocks = phi_blocks(model, t_go)
    i0 = 4
    i1 = 4 + model.n_p
    x_p = x[i0:i1]
    x_c = x[i1:]
    cos_t = math.cos(model.triangle.lead_t)
    z_d = (x[0] + x[1] * t_go + float(blocks.phi15 @ x_p)
           + 0.5 * a_t * cos_t * t_go ** 2)
    z_psi = (model.triangle.gamma0 - x[2] - x[3] * t_go
             - float(blocks.phi35 @ x_p) - float(blocks.phi36 @ x_c))
    return TransformedState(z_d=z_d, z_psi=z_psi, t_go=t_go)


def measured_transform(r, gamma, gamma_dot, psi, omega, x_p, x_c, v_c, a_t,
                       model: LinearizedModel,
                       blocks: PhiBlocks | None = None) -> TransformedState:
    """Terminal projection approximated from measured engagement quantities.

    ``t_go`` is r / v_c.  The miss uses the LOS-rate identity
    d_perp + d_perp' t_go = gamma_dot v_c t_go**2, and the pointing error
    uses a first-order prediction of the LOS angle, gamma + gamma_dot t_go.
    The pointing difference gamma - psi is wrapped to (-pi, pi] before the
    rate terms are added.

    Raises :class:`NoClosureError` when ``v_c <= 0``.
    """
    if v_c <= 0.0:
        raise NoClosureError(f"closing speed {v_c} is not positive")
    t_go = r / v_c
    if blocks is None:
        p15b, p35b, p36b = _phi_actuator_at(model, t_go, x_p, x_c)
    else:
        p15b = float(blocks.phi15 @ x_p)
        p35b = float(blocks.phi35 @ x_p)
        p36b = float(blocks.phi36 @ x_c)
    cos_t = math.cos(model.triangle.lead_t)
    z_d = (gamma_dot * v_c * t_go ** 2
           + 0.5 * a_t * cos_t * t_go ** 2
           + p15b)
    z_psi = (wrap_angle(gamma - psi) + (gamma_dot - omega) * t_go
             - p35b - p36b)
    return TransformedState(z_d=z_d, z_psi=z_psi, t_go=t_go)


def _phi_actuator_at(model, t_go, x_p, x_c):
    """phi-block dot products with actuator states at a single horizon."""
    if model.n_p == 0 and model.n_c == 0:
        return 0.0, 0.0, 0.0
    blocks = phi_blocks(model, t_go)
    return (float(blocks.phi15 @ x_p),
            float(blocks.phi35 @ x_p),
            float(blocks.phi36 @ x_c))
