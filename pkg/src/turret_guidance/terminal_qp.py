"""Effort Gramian and the nine-case box-constrained terminal program.

Minimum-effort transfer of the transformed state to a terminal pair
(c_d, c_psi) inside the capture box |c_d| <= R, |c_psi| <= delta costs

    J(c) = -1/2 (c - z0)^T G^{-1} (c - z0),

where G integrates -B_z Sigma^{-1} B_z^T over the remaining horizon and is
negative definite whenever the horizon is positive.  Because the objective
is a convex quadratic over a box, the minimizer is the interior point, one
of four edge projections, or one of four corners; the solver enumerates
exactly those nine candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import InvalidConfigError, NoClosureError, NumericDomainError
from .linearize import LinearizedModel
from .zem import TransformedState, _bz_entries

__all__ = [
    "EffortWeights",
    "GramianG",
    "TerminalCase",
    "TerminalSolution",
    "FEASIBILITY_SLACK",
    "compute_g",
    "solve_terminal_qp",
    "predicted_cost",
]

# Edge projections computed in floating point may land epsilon outside the
# box; feasibility checks allow this much absolute slack.
FEASIBILITY_SLACK = 1e-12

DEFAULT_QUAD_NODES = 32


@dataclass(frozen=True)
class EffortWeights:
    """Cost weights: alpha splits effort between the two channels.

    The running cost is  1/2 [alpha (u1/u1_max)^2 + (1-alpha) (u2/u2_max)^2],
    so ``alpha -> 1`` makes pursuer acceleration expensive (the turret does
    the pointing work) and ``alpha -> 0`` makes turret torque expensive
    (the pursuer maneuvers instead).
    """

    alpha: float
    u1_max: float
    u2_max: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.u1_max <= 0.0 or self.u2_max <= 0.0:
            raise InvalidConfigError(
                f"command scales must be positive, got {self.u1_max}, {self.u2_max}"
            )

    @property
    def inv_w1(self) -> float:
        """First diagonal entry of Sigma^{-1}: u1_max**2 / alpha."""
        return self.u1_max ** 2 / self.alpha

    @property
    def inv_w2(self) -> float:
        """Second diagonal entry of Sigma^{-1}: u2_max**2 / (1 - alpha)."""
        return self.u2_max ** 2 / (1.0 - self.alpha)

    @property
    def sigma(self) -> float:
        """Relative torque penalty (1-alpha) u1_max^2 / (alpha u2_max^2)."""
        return self.inv_w1 / self.inv_w2

    def running_cost(self, u1: float, u2: float) -> float:
        """Instantaneous cost integrand for a command pair."""
        return 0.5 * (self.alpha * (u1 / self.u1_max) ** 2
                      + (1.0 - self.alpha) * (u2 / self.u2_max) ** 2)


@dataclass(frozen=True)
class GramianG:
    """Symmetric 2x2 effort Gramian; negative definite for t_go > 0."""

    g11: float
    g12: float
    g22: float

    @property
    def delta(self) -> float:
        """Determinant g11 * g22 - g12**2."""
        return self.g11 * self.g22 - self.g12 ** 2

    @property
    def is_negative_definite(self) -> bool:
        return self.g11 < 0.0 and self.delta > 0.0

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.g11, self.g12], [self.g12, self.g22]])

    def solve(self, e_d: float, e_psi: float) -> tuple[float, float]:
        """G^{-1} e via the adjugate of the 2x2 matrix."""
        delta = self.delta
        return ((self.g22 * e_d - self.g12 * e_psi) / delta,
                (-self.g12 * e_d + self.g11 * e_psi) / delta)

    def quad(self, e_d: float, e_psi: float) -> float:
        """Quadratic form e^T G^{-1} e."""
        return (self.g22 * e_d * e_d - 2.0 * self.g12 * e_d * e_psi
                + self.g11 * e_psi * e_psi) / self.delta


class TerminalCase(Enum):
    """Which constraint pattern produced the optimal terminal pair."""

    INTERIOR = "interior"
    MISS_MAX = "miss_max"          # c_d pinned at +R
    MISS_MIN = "miss_min"          # c_d pinned at -R
    POINT_MAX = "point_max"        # c_psi pinned at +delta
    POINT_MIN = "point_min"        # c_psi pinned at -delta
    CORNER_MAX_MAX = "corner_max_max"
    CORNER_MAX_MIN = "corner_max_min"
    CORNER_MIN_MAX = "corner_min_max"
    CORNER_MIN_MIN = "corner_min_min"


@dataclass(frozen=True)
class TerminalSolution:
    """Optimal terminal pair, constant costate, and predicted cost."""

    c_d_star: float
    c_psi_star: float
    costate: tuple[float, float]
    cost: float
    active_case: TerminalCase


@lru_cache(maxsize=8)
def _gauss_legendre(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def compute_g(model: LinearizedModel, weights: EffortWeights, t_go: float,
              quad_nodes: int = DEFAULT_QUAD_NODES) -> GramianG:
    """Gauss-Legendre quadrature of -B_z Sigma^{-1} B_z^T over the horizon.

    One code path serves all actuator orders; for feedthrough-only
    actuators the integrand is polynomial and the quadrature is exact.
    """
    if t_go <= 0.0:
        raise NoClosureError(f"t_go must be positive, got {t_go}")
    if quad_nodes < 8:
        raise ValueError(f"quad_nodes must be >= 8, got {quad_nodes}")
    base_nodes, base_weights = _gauss_legendre(quad_nodes)
    s = 0.5 * t_go * (base_nodes + 1.0)
    w = 0.5 * t_go * base_weights
    g1, g2, g3 = _bz_entries(model, s)
    s1 = weights.inv_w1
    s2 = weights.inv_w2
    g11 = -float(w @ (s1 * g1 * g1))
    g12 = -float(w @ (s1 * g1 * g2))
    g22 = -float(w @ (s1 * g2 * g2 + s2 * g3 * g3))
    return GramianG(g11=g11, g12=g12, g22=g22)


def predicted_cost(z0: TransformedState, c_star, g: GramianG) -> float:
    """Minimum effort to move the transformed state from z0 to c_star."""
    e_d = c_star[0] - z0.z_d
    e_psi = c_star[1] - z0.z_psi
    return -0.5 * g.quad(e_d, e_psi)


def solve_terminal_qp(z0: TransformedState, g: GramianG, r_max: float,
                      fov: float) -> TerminalSolution:
    """Pick the cheapest reachable terminal pair inside the capture box.

    Candidates are the unconstrained optimum (z0 itself when feasible),
    the four edge projections

        c_psi(+-R)     = z_psi0 + (g12/g11)(+-R - z_d0)
        c_d(+-delta)   = z_d0 + (g12/g22)(+-delta - z_psi0)

    kept only when the free coordinate stays in the box, and the four
    corners.  Ties prefer interior over edge over corner, then the
    lexicographically smaller (c_d, c_psi).

    Raises :class:`NumericDomainError` when ``g`` is not negative definite.
    """
    if not g.is_negative_definite:
        raise NumericDomainError(
            f"gramian must be negative definite (g11={g.g11}, delta={g.delta})"
        )
    if r_max <= 0.0:
        raise ValueError(f"r_max must be positive, got {r_max}")
    if not 0.0 < fov < math.pi:
        raise ValueError(f"fov must be in (0, pi), got {fov}")

    z_d0, z_psi0 = z0.z_d, z0.z_psi
    slack = FEASIBILITY_SLACK

    if abs(z_d0) <= r_max + slack and abs(z_psi0) <= fov + slack:
        return TerminalSolution(
            c_d_star=z_d0,
            c_psi_star=z_psi0,
            costate=(0.0, 0.0),
            cost=0.0,
            active_case=TerminalCase.INTERIOR,
        )

    edges = []
    for c_d, case in ((r_max, TerminalCase.MISS_MAX),
                      (-r_max, TerminalCase.MISS_MIN)):
        c_psi = z_psi0 + (g.g12 / g.g11) * (c_d - z_d0)
        if abs(c_psi) <= fov + slack:
            edges.append((c_d, c_psi, case))
    for c_psi, case in ((fov, TerminalCase.POINT_MAX),
                        (-fov, TerminalCase.POINT_MIN)):
        c_d = z_d0 + (g.g12 / g.g22) * (c_psi - z_psi0)
        if abs(c_d) <= r_max + slack:
            edges.append((c_d, c_psi, case))
    edges.sort(key=lambda cand: (cand[0], cand[1]))

    corners = [
        (-r_max, -fov, TerminalCase.CORNER_MIN_MIN),
        (-r_max, fov, TerminalCase.CORNER_MIN_MAX),
        (r_max, -fov, TerminalCase.CORNER_MAX_MIN),
        (r_max, fov, TerminalCase.CORNER_MAX_MAX),
    ]

    best = None
    best_cost = math.inf
    for c_d, c_psi, case in edges + corners:
        cost = -0.5 * g.quad(c_d - z_d0, c_psi - z_psi0)
        if cost < best_cost:
            best = (c_d, c_psi, case)
            best_cost = cost
    c_d, c_psi, case = best
    return TerminalSolution(
        c_d_star=c_d,
        c_psi_star=c_psi,
        costate=g.solve(c_d - z_d0, c_psi - z_psi0),
        cost=best_cost,
        active_case=case,
    )
