"""Closed-loop two-channel guidance commands.

The optimal command for the transformed dynamics is the state feedback

    u(t) = -Sigma^{-1} B_z(t)^T G(t)^{-1} (c* - z(t)),

re-evaluated at every update with the freshly linearized model.  For
feedthrough-only actuators the same law collapses to a closed form in
(t_go, lead angle, speed, sigma); both paths are provided and agree
exactly.  In the limit of a freely slewing turret and a vanishing capture
radius, the pursuer channel reduces to the classical augmented
proportional navigation command, which is also exposed as a reference law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NumericDomainError, TerminalPhase
from .linearize import LinearizedModel
from .terminal_qp import EffortWeights, GramianG, TerminalSolution
from .zem import PhiBlocks, TransformedState, bz_matrix

__all__ = [
    "DEFAULT_T_GO_MIN",
    "GuidanceCommand",
    "guidance_general",
    "guidance_ideal",
    "apn_reference",
    "saturate_command",
]

# Below this horizon the law divides by vanishing powers of t_go; callers
# freeze the last command instead.
DEFAULT_T_GO_MIN = 0.01

_BEAM_ATTACK_COS_MIN = 1e-6


@dataclass(frozen=True)
class GuidanceCommand:
    """Commanded channel inputs plus the solution context they came from."""

    u1: float
    u2: float
    c_d_star: float
    c_psi_star: float
    t_go: float
    saturated: tuple[bool, bool] = (False, False)


def guidance_general(z: TransformedState, model: LinearizedModel,
                     weights: EffortWeights, g: GramianG,
                     sol: TerminalSolution, blocks: PhiBlocks,
                     t_go_min: float = DEFAULT_T_GO_MIN) -> GuidanceCommand:
    """Feedback command for arbitrary-order actuator dynamics.

    Raises :class:`TerminalPhase` when ``z.t_go`` is below ``t_go_min``.
    """
    t_go = z.t_go
    if t_go < t_go_min:
        raise TerminalPhase(f"t_go {t_go} below guard {t_go_min}")
    bz = bz_matrix(model, t_go, blocks)
    p_d, p_psi = g.solve(sol.c_d_star - z.z_d, sol.c_psi_star - z.z_psi)
    u1 = -weights.inv_w1 * (bz[0, 0] * p_d + bz[1, 0] * p_psi)
    u2 = -weights.inv_w2 * (bz[1, 1] * p_psi)
    return GuidanceCommand(
        u1=u1,
        u2=u2,
        c_d_star=sol.c_d_star,
        c_psi_star=sol.c_psi_star,
        t_go=t_go,
    )


def guidance_ideal(z: TransformedState, v_p: float, lead_p: float,
                   sigma: float, sol: TerminalSolution,
                   t_go_min: float = DEFAULT_T_GO_MIN) -> GuidanceCommand:
    """Closed-form command for feedthrough-only actuator channels.

    ``sigma`` is the relative torque penalty (1-alpha) u1_max^2 /
    (alpha u2_max^2).  As sigma grows the torque channel shuts off and the
    pursuer maneuvers to point the turret; as sigma vanishes the pursuer
    channel reduces to augmented proportional navigation toward c_d*.

    Raises :class:`TerminalPhase` below the horizon guard and
    :class:`NumericDomainError` for a beam attack (cos(lead_p) ~ 0).
    """
    t_go = z.t_go
    if t_go < t_go_min:
        raise TerminalPhase(f"t_go {t_go} below guard {t_go_min}")
    cos_p = math.cos(lead_p)
    if abs(cos_p) < _BEAM_ATTACK_COS_MIN:
        raise NumericDomainError(
            f"beam attack: |cos(lead_p)| = {abs(cos_p)} is singular"
        )
    e_d = sol.c_d_star - z.z_d
    e_psi = sol.c_psi_star - z.z_psi
    den = 3.0 * sigma + 4.0 * v_p ** 2 * t_go ** 2
    a_p = -((18.0 * sigma + 12.0 * v_p ** 2 * t_go ** 2) * e_d
            - 6.0 * sigma * cos_p * v_p * t_go * e_psi) / (cos_p * t_go ** 2 * den)
    tau = (18.0 * v_p * e_d
           - 12.0 * cos_p * t_go * v_p ** 2 * e_psi) / (cos_p * t_go * den)
    return GuidanceCommand(
        u1=a_p,
        u2=tau,
        c_d_star=sol.c_d_star,
        c_psi_star=sol.c_psi_star,
        t_go=t_go,
    )


def apn_reference(z_d: float, t_go: float, lead_p: float) -> float:
    """Augmented proportional navigation acceleration, 3 z_d / (cos t_go^2).

    Baseline law recovered from the cooperative command when the turret
    slews freely and the capture radius shrinks to a point.
    """
    return 3.0 * z_d / (math.cos(lead_p) * t_go ** 2)


def saturate_command(cmd: GuidanceCommand,
                     weights: EffortWeights) -> GuidanceCommand:
    """Clamp each channel independently at its command scale."""
    u1 = min(max(cmd.u1, -weights.u1_max), weights.u1_max)
    u2 = min(max(cmd.u2, -weights.u2_max), weights.u2_max)
    return replace(cmd, u1=u1, u2=u2,
                   saturated=(u1 != cmd.u1, u2 != cmd.u2))
