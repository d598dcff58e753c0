"""Continuous-time LTI actuator models and the matrix exponential.

The pursuer's lateral-acceleration channel and the turret's torque channel
are each represented by a state-space realization (A, b, c, d) mapping a
scalar command to a scalar output.  A realization may have zero states,
in which case the channel is pure feedthrough (output = d * command).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, NumericDomainError

__all__ = [
    "LtiRealization",
    "ActuatorPreset",
    "expand_preset",
    "matrix_exponential",
]


def _readonly(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LtiRealization:
    """State-space quadruple for one scalar-in, scalar-out actuator channel.

    Parameters
    ----------
    a : (n, n) ndarray
        State matrix.
    b : (n,) ndarray
        Input map.
    c : (n,) ndarray
        Output map.
    d : float
        Direct feedthrough.

    ``n = 0`` is legal and means pure feedthrough.  Arrays are stored
    read-only; instances are immutable and safe to share across threads.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: float

    def __post_init__(self):
        a = _readonly(np.atleast_2d(self.a) if np.size(self.a) else
                      np.zeros((0, 0)))
        b = _readonly(np.ravel(self.b))
        c = _readonly(np.ravel(self.c))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidConfigError(f"state matrix must be square, got {a.shape}")
        n = a.shape[0]
        if b.shape != (n,) or c.shape != (n,):
            raise InvalidConfigError(
                f"inconsistent realization dimensions: a {a.shape}, b {b.shape}, c {c.shape}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", float(self.d))

    @property
    def n(self) -> int:
        """Number of internal states."""
        return self.a.shape[0]

    def output(self, x, u):
        """Channel output c @ x + d * u for state ``x`` and command ``u``."""
        if self.n == 0:
            return self.d * u
        return float(self.c @ x) + self.d * u

    def derivative(self, x, u):
        """State derivative a @ x + b * u."""
        return self.a @ x + self.b * u


_IDEAL = "ideal"
_FIRST_ORDER_LAG = "first_order_lag"
_CUSTOM = "custom"


@dataclass(frozen=True)
class ActuatorPreset:
    """Named actuator model expanded to an :class:`LtiRealization`.

    Use the classmethods ``ideal()``, ``first_order_lag(tc)``, or
    ``custom(realization)`` rather than the constructor.
    """

    kind: str
    time_constant: float | None = None
    realization: LtiRealization | None = None

    @classmethod
    def ideal(cls) -> "ActuatorPreset":
        return cls(_IDEAL)

    @classmethod
    def first_order_lag(cls, time_constant: float) -> "ActuatorPreset":
        return cls(_FIRST_ORDER_LAG, time_constant=float(time_constant))

    @classmethod
    def custom(cls, realization: LtiRealization) -> "ActuatorPreset":
        return cls(_CUSTOM, realization=realization)

    @classmethod
    def parse(cls, text: str) -> "ActuatorPreset":
        """Parse a config-file actuator spec, e.g. ``first_order_lag:0.2``."""
        name, _, arg = text.strip().partition(":")
        name = name.strip().lower()
        if name == _IDEAL:
            return cls.ideal()
        if name == _FIRST_ORDER_LAG:
            try:
                tc = float(arg)
            except ValueError:
                raise InvalidConfigError(
                    f"first_order_lag needs a numeric time constant, got {arg!r}"
                ) from None
            return cls.first_order_lag(tc)
        raise InvalidConfigError(f"unknown actuator preset {text!r}")


def expand_preset(preset: ActuatorPreset) -> LtiRealization:
    """Expand an actuator preset into its state-space realization.

    ``ideal`` expands to a zero-state unit feedthrough.  A first-order
    lag with time constant ``T > 0`` expands to a = -1/T, b = 1/T, c = 1,
    d = 0.  Raises :class:`InvalidConfigError` for a non-positive time
    constant.
    """
    if preset.kind == _IDEAL:
        return LtiRealization(np.zeros((0, 0)), np.zeros(0), np.zeros(0), 1.0)
    if preset.kind == _FIRST_ORDER_LAG:
        tc = preset.time_constant
        if tc is None or not tc > 0.0:
            raise InvalidConfigError(
                f"first-order-lag time constant must be > 0, got {tc}"
            )
        return LtiRealization([[-1.0 / tc]], [1.0 / tc], [1.0], 0.0)
    if preset.kind == _CUSTOM:
        if preset.realization is None:
            raise InvalidConfigError("custom preset is missing its realization")
        return preset.realization
    raise InvalidConfigError(f"unknown actuator preset kind {preset.kind!r}")


# Degree-13 Pade approximant coefficients for exp(x) (numerators of p13;
# q13 shares them with alternating signs through the U/V split below).
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_PADE13_THETA = 5.371920351148152


def matrix_exponential(m) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a degree-13 Pade step.

    Accepts a single square matrix or a stack of them with shape
    ``(..., n, n)``; the exponential is taken over the trailing two axes.
    Accuracy is far better than 1e-10 relative for norms up to 50.

    Raises
    ------
    NumericDomainError
        If any entry is not finite.
    ValueError
        If the trailing axes are not square.
    """
    a = np.asarray(m, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    n = a.shape[-1]
    if n == 0:
        return a.copy()
    if not np.isfinite(a).all():
        raise NumericDomainError("matrix exponential of non-finite entries")

    # One scaling exponent for the whole stack keeps the squaring loop shared.
    norm = float(np.max(np.abs(a).sum(axis=-2))) if a.size else 0.0
    squarings = max(0, int(math.ceil(math.log2(norm / _PADE13_THETA)))) if norm > _PADE13_THETA else 0
    a = a / (2.0 ** squarings)

    b = _PADE13
    ident = np.broadcast_to(np.eye(n), a.shape)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    result = np.linalg.solve(v - u, v + u)
    for _ in range(squarings):
        result = result @ result
    return result
