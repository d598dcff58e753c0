"""Scenario configuration: flat dotted-key text files with validation.

The file format is one ``key = value`` pair per line; ``#`` starts a
comment.  Numeric values may use ``pi`` in simple arithmetic expressions
(e.g. ``3*pi/4``).  Every key is optional; absent keys take the default
engagement (the reference head-on-crossing scenario).  Unknown keys are
hard errors, and validation failures name the offending key.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, fields, replace

from .errors import InvalidConfigError
from .lti import ActuatorPreset

__all__ = [
    "ScenarioConfig",
    "SweepSpec",
    "SWEEP_PARAMETERS",
    "parse_config",
    "config_from_mapping",
    "apply_sweep_value",
]

# config-file key -> dataclass field
KEY_TO_FIELD = {
    "pursuer.x": "pursuer_x",
    "pursuer.y": "pursuer_y",
    "pursuer.heading": "pursuer_heading",
    "target.x": "target_x",
    "target.y": "target_y",
    "target.heading": "target_heading",
    "v_p": "v_p",
    "v_t": "v_t",
    "psi0": "psi0",
    "omega0": "omega0",
    "alpha": "alpha",
    "r_max": "r_max",
    "fov": "fov",
    "u1_max": "u1_max",
    "u2_max": "u2_max",
    "a_t": "a_t",
    "actuator.pursuer": "pursuer_actuator",
    "actuator.turret": "turret_actuator",
    "dt": "dt",
    "log_dt": "log_dt",
    "guidance_dt": "guidance_dt",
    "t_go_min": "t_go_min",
    "saturation": "saturation",
    "quad_nodes": "quad_nodes",
    "seed": "seed",
    "law": "law",
}
FIELD_TO_KEY = {f: k for k, f in KEY_TO_FIELD.items()}

_INT_FIELDS = {"quad_nodes", "seed"}
_BOOL_FIELDS = {"saturation"}
_ACTUATOR_FIELDS = {"pursuer_actuator", "turret_actuator"}
_STR_FIELDS = {"law"}

_NUMERIC_EXPR = re.compile(r"^[0-9eE\s\.\+\-\*/\(\)pi]*$")


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated engagement scenario; defaults are the reference scenario."""

    pursuer_x: float = 0.0
    pursuer_y: float = 0.0
    pursuer_heading: float = math.pi / 4.0
    target_x: float = 5000.0
    target_y: float = 0.0
    target_heading: float = 3.0 * math.pi / 4.0
    v_p: float = 400.0
    v_t: float = 350.0
    psi0: float = math.pi / 2.0
    omega0: float = 0.0
    alpha: float = 0.5
    r_max: float = 500.0
    fov: float = math.pi / 4.0
    u1_max: float = 1.0
    u2_max: float = 1e-4
    a_t: float = 0.0
    pursuer_actuator: ActuatorPreset = ActuatorPreset.ideal()
    turret_actuator: ActuatorPreset = ActuatorPreset.ideal()
    dt: float = 1e-3
    log_dt: float = 1e-2
    guidance_dt: float | None = None
    t_go_min: float = 0.01
    saturation: bool = False
    quad_nodes: int = 32
    seed: int = 0
    law: str = "cooperative"

    def __post_init__(self):
        def bad(field_name, message):
            return InvalidConfigError(f"{FIELD_TO_KEY[field_name]}: {message}")

        if not 0.0 < self.alpha < 1.0:
            raise bad("alpha", f"must be in (0, 1), got {self.alpha}")
        if not 0.0 < self.fov < math.pi:
            raise bad("fov", f"must be in (0, pi), got {self.fov}")
        if self.r_max <= 0.0:
            raise bad("r_max", f"must be positive, got {self.r_max}")
        if self.v_p <= 0.0:
            raise bad("v_p", f"must be positive, got {self.v_p}")
        if self.v_t <= 0.0:
            raise bad("v_t", f"must be positive, got {self.v_t}")
        if self.u1_max <= 0.0:
            raise bad("u1_max", f"must be positive, got {self.u1_max}")
        if self.u2_max <= 0.0:
            raise bad("u2_max", f"must be positive, got {self.u2_max}")
        if self.dt <= 0.0:
            raise bad("dt", f"must be positive, got {self.dt}")
        if self.log_dt <= 0.0:
            raise bad("log_dt", f"must be positive, got {self.log_dt}")
        if self.guidance_dt is not None and self.guidance_dt <= 0.0:
            raise bad("guidance_dt", f"must be positive, got {self.guidance_dt}")
        if self.t_go_min <= 0.0:
            raise bad("t_go_min", f"must be positive, got {self.t_go_min}")
        if self.quad_nodes < 8:
            raise bad("quad_nodes", f"must be >= 8, got {self.quad_nodes}")
        if self.law not in ("cooperative", "apn"):
            raise bad("law", f"must be 'cooperative' or 'apn', got {self.law!r}")


def _parse_number(key: str, text: str) -> float:
    text = text.strip()
    if not text or not _NUMERIC_EXPR.match(text):
        raise InvalidConfigError(f"{key}: cannot parse numeric value {text!r}")
    try:
        value = eval(text, {"__builtins__": {}}, {"pi": math.pi})  # noqa: S307
    except Exception:
        raise InvalidConfigError(
            f"{key}: cannot parse numeric value {text!r}"
        ) from None
    if not isinstance(value, (int, float)):
        raise InvalidConfigError(f"{key}: value {text!r} is not a number")
    return float(value)


def _convert(key: str, field_name: str, raw: str):
    raw = raw.strip()
    if field_name in _BOOL_FIELDS:
        lowered = raw.lower()
        if lowered in ("true", "on", "yes", "1"):
            return True
        if lowered in ("false", "off", "no", "0"):
            return False
        raise InvalidConfigError(f"{key}: expected a boolean, got {raw!r}")
    if field_name in _INT_FIELDS:
        value = _parse_number(key, raw)
        if value != int(value):
            raise InvalidConfigError(f"{key}: expected an integer, got {raw!r}")
        return int(value)
    if field_name in _ACTUATOR_FIELDS:
        try:
            return ActuatorPreset.parse(raw)
        except InvalidConfigError as exc:
            raise InvalidConfigError(f"{key}: {exc}") from None
    if field_name in _STR_FIELDS:
        return raw
    return _parse_number(key, raw)


def config_from_mapping(mapping: dict) -> ScenarioConfig:
    """Build a validated config from config-file keys and string values."""
    values = {}
    for key, raw in mapping.items():
        field_name = KEY_TO_FIELD.get(key)
        if field_name is None:
            raise InvalidConfigError(f"unknown configuration key {key!r}")
        values[field_name] = _convert(key, field_name, str(raw))
    return ScenarioConfig(**values)


def parse_config(path) -> ScenarioConfig:
    """Parse and validate a scenario file; defaults fill absent keys."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise InvalidConfigError(f"cannot read config file {path}: {exc}") from None
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, value = text.partition("=")
        if not sep:
            raise InvalidConfigError(
                f"{path}:{lineno}: expected 'key = value', got {line.strip()!r}"
            )
        key = key.strip()
        if key in mapping:
            raise InvalidConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        mapping[key] = value.strip()
    return config_from_mapping(mapping)


SWEEP_PARAMETERS = {
    "alpha": "alpha",
    "v_t": "v_t",
    "a_t": "a_t",
    "theta_t0": "target_heading",
    "r_max": "r_max",
    "fov": "fov",
}


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter and the values to run it at."""

    parameter: str
    values: tuple[float, ...]
    parallel: bool = False

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise InvalidConfigError(
                f"sweep parameter must be one of {sorted(SWEEP_PARAMETERS)}, "
                f"got {self.parameter!r}"
            )
        if not self.values:
            raise InvalidConfigError("sweep values list must not be empty")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))


def apply_sweep_value(config: ScenarioConfig, parameter: str,
                      value: float) -> ScenarioConfig:
    """Return a copy of ``config`` with one swept parameter replaced."""
    field_name = SWEEP_PARAMETERS.get(parameter)
    if field_name is None:
        raise InvalidConfigError(f"unknown sweep parameter {parameter!r}")
    return replace(config, **{field_name: float(value)})


def config_field_names() -> tuple[str, ...]:
    return tuple(f.name for f in fields(ScenarioConfig))
