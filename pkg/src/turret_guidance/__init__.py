"""Minimum-effort cooperative guidance for a pursuer-turret assembly.

A planar pursuer carries a rotating turret whose sensing region is limited
in range and field of view.  This package linearizes the engagement about
the instantaneous collision triangle, projects the state onto the two
terminal quantities the capture box constrains (zero-effort miss and
zero-effort pointing error), solves the box-constrained terminal program
by enumerating its nine candidate solutions, and feeds the resulting
two-channel command back through a nonlinear engagement simulator.
"""

from .errors import (GuidanceError, InvalidConfigError, NoClosureError,
                     NumericDomainError, RunawayError, TerminalPhase)
from .lti import (ActuatorPreset, LtiRealization, expand_preset,
                  matrix_exponential)
from .linearize import (CollisionTriangle, LinearizedModel,
                        assemble_linear_model, closing_speed,
                        freeze_triangle, los_polar, terminal_time,
                        wrap_angle)
from .zem import (PhiBlocks, TransformedState, bz_matrix, exact_transform,
                  measured_transform, phi_blocks)
from .terminal_qp import (EffortWeights, GramianG, TerminalCase,
                          TerminalSolution, compute_g, predicted_cost,
                          solve_terminal_qp)
from .guidance import (DEFAULT_T_GO_MIN, GuidanceCommand, apn_reference,
                       guidance_general, guidance_ideal, saturate_command)
from .sim import (CaptureVerdict, EngagementState, GuidanceSettings,
                  TrajectoryLog, VehicleParams, capture_check,
                  initial_engagement_state, run_engagement, step)
from .config import (ScenarioConfig, SweepSpec, apply_sweep_value,
                     config_from_mapping, parse_config)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "GuidanceError", "InvalidConfigError", "NumericDomainError",
    "NoClosureError", "TerminalPhase", "RunawayError",
    # actuator models
    "LtiRealization", "ActuatorPreset", "expand_preset",
    "matrix_exponential",
    # linearization
    "wrap_angle", "los_polar", "closing_speed", "terminal_time",
    "CollisionTriangle", "freeze_triangle", "LinearizedModel",
    "assemble_linear_model",
    # terminal projection
    "TransformedState", "PhiBlocks", "phi_blocks", "exact_transform",
    "bz_matrix", "measured_transform",
    # terminal program
    "EffortWeights", "GramianG", "TerminalCase", "TerminalSolution",
    "compute_g", "solve_terminal_qp", "predicted_cost",
    # guidance laws
    "DEFAULT_T_GO_MIN", "GuidanceCommand", "guidance_general",
    "guidance_ideal", "apn_reference", "saturate_command",
    # simulator
    "VehicleParams", "EngagementState", "CaptureVerdict", "TrajectoryLog",
    "GuidanceSettings", "initial_engagement_state", "step", "capture_check",
    "run_engagement",
    # configuration
    "ScenarioConfig", "SweepSpec", "parse_config", "config_from_mapping",
    "apply_sweep_value",
]
