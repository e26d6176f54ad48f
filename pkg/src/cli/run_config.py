"""
Run configuration: INI (or JSON) file, overridden by command-line flags.
"""

import configparser
import json
import logging
import os
from dataclasses import dataclass, field, fields
from typing import Any, Callable, Dict, Optional, Tuple

from src.fields import (
    Cutoff,
    PerturbationField,
    make_constant_field,
    make_homogeneous_field,
    make_stream_field,
    make_tabulated_field,
    zero_field,
)
from src.forms import HermitianCoupling
from src.spectral import RadialGrid
from src.utils.constants import DEFAULT_TOLERANCES, SPECTRAL_MIN_N, Tolerances
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

FIELD_TYPES = ("zero", "homogeneous", "constant", "stream", "tabulated")


def _float_list(value: Any) -> Tuple[float, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(float(v) for v in value)
    return tuple(float(v) for v in str(value).replace(",", " ").split())


def _int_list(value: Any) -> Tuple[int, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    return tuple(int(v) for v in str(value).replace(",", " ").split())


def _boolean(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value}")


# section -> key -> (RunConfig attribute, converter)
SCHEMA: Dict[str, Dict[str, Tuple[str, Callable[[Any], Any]]]] = {
    "flux": {
        "raw": ("raw", float),
        "alpha": ("alpha", float),
        "alphas": ("alphas", _float_list),
        "k": ("k", int),
        "ks": ("ks", _int_list),
    },
    "field": {
        "type": ("field_type", str),
        "b": ("B", float),
        "cap_radius": ("cap_radius", float),
        "path": ("field_path", str),
        "s0x": ("s0x", float),
        "s0y": ("s0y", float),
    },
    "cutoff": {
        "a": ("cutoff_a", float),
        "b": ("cutoff_b", float),
        "a2": ("cutoff_a2", float),
        "b2": ("cutoff_b2", float),
    },
    "beta": {
        "b00": ("b00", float),
        "b11": ("b11", float),
        "b01_re": ("b01_re", float),
        "b01_im": ("b01_im", float),
    },
    "lambda": {
        "value": ("lam", float),
        "second": ("lam2", float),
        "values": ("lambdas", _float_list),
        "bracket_min": ("bracket_min", float),
        "bracket_max": ("bracket_max", float),
        "z": ("z", float),
    },
    "grid": {
        "r_max": ("r_max", float),
        "n": ("n", int),
        "grading": ("grading", float),
        "count": ("count", int),
        "radii": ("radii", _float_list),
    },
    "trial": {
        "seed": ("seed", int),
        "count": ("trials", int),
    },
    "output": {
        "path": ("output", str),
        "verbose": ("verbose", _boolean),
    },
}


@dataclass
class RunConfig:
    """Validated settings of one CLI run."""

    command: str = ""
    raw: Optional[float] = None
    alpha: float = 0.5
    alphas: Tuple[float, ...] = ()
    k: int = 0
    ks: Tuple[int, ...] = ()
    field_type: str = "zero"
    B: float = 1.0
    cap_radius: Optional[float] = None
    field_path: Optional[str] = None
    s0x: float = 0.0
    s0y: float = 0.0
    cutoff_a: float = 1.0
    cutoff_b: float = 2.0
    cutoff_a2: float = 1.0
    cutoff_b2: float = 3.0
    b00: float = 1.0
    b11: float = 1.0
    b01_re: float = 0.0
    b01_im: float = 0.0
    lam: float = 1.0
    lam2: float = 2.0
    lambdas: Tuple[float, ...] = ()
    bracket_min: float = 0.1
    bracket_max: float = 10.0
    z: float = -1.0
    r_max: float = 20.0
    n: int = 400
    grading: float = 2.0
    count: int = 3
    radii: Tuple[float, ...] = ()
    seed: int = 0
    trials: int = 10
    output: Optional[str] = None
    verbose: bool = False
    tolerances: Tolerances = field(default=DEFAULT_TOLERANCES)

    @property
    def cutoff(self) -> Cutoff:
        return Cutoff(self.cutoff_a, self.cutoff_b)

    @property
    def second_cutoff(self) -> Cutoff:
        return Cutoff(self.cutoff_a2, self.cutoff_b2)

    @property
    def beta(self) -> HermitianCoupling:
        return HermitianCoupling(self.b00, self.b11, complex(self.b01_re, self.b01_im))

    @property
    def bracket(self) -> Tuple[float, float]:
        return (self.bracket_min, self.bracket_max)

    @property
    def radial_grid(self) -> RadialGrid:
        return RadialGrid(self.r_max, self.n, self.grading)

    @property
    def alpha_values(self) -> Tuple[float, ...]:
        return self.alphas or (self.alpha,)

    @property
    def k_values(self) -> Tuple[int, ...]:
        return self.ks or (self.k,)

    @property
    def lambda_values(self) -> Tuple[float, ...]:
        return self.lambdas or (self.lam,)

    def build_field(self) -> PerturbationField:
        """Perturbation field described by the [field] section."""
        if self.field_type == "zero":
            return zero_field()
        if self.field_type == "homogeneous":
            return make_homogeneous_field(self.B, self.cap_radius)
        if self.field_type == "constant":
            return make_constant_field((self.s0x, self.s0y))
        if self.field_type == "stream":
            return make_stream_field()
        return make_tabulated_field(self.field_path)

    def output_path(self, suffix: str = ".csv") -> str:
        if self.output:
            return self.output
        return os.path.join("output", f"{self.command.replace('-', '_')}{suffix}")

    def validate(self):
        """
        Range checks run before any computation.

        Raises:
            ConfigError: Naming the offending key
        """
        # the free magnetic operator alpha = 0 is a valid spectrum anchor
        lowest = 0.0 if self.command == "spectrum" else None
        for alpha in self.alpha_values:
            if not (0.0 < alpha < 1.0 or alpha == lowest):
                raise ConfigError(f"alpha must lie in (0,1), got {alpha}", key="flux.alpha")
        if self.field_type not in FIELD_TYPES:
            raise ConfigError(f"unknown field type '{self.field_type}'", key="field.type")
        if self.field_type == "tabulated" and not self.field_path:
            raise ConfigError("tabulated field needs a path", key="field.path")
        if self.cap_radius is not None and not self.cap_radius > 0.0:
            raise ConfigError(f"cap radius must be positive, got {self.cap_radius}",
                              key="field.cap_radius")
        for name, (a, b) in (("cutoff", (self.cutoff_a, self.cutoff_b)),
                             ("cutoff2", (self.cutoff_a2, self.cutoff_b2))):
            if not 0.0 < a < b:
                raise ConfigError(f"need 0 < a < b, got ({a}, {b})", key=f"{name}.a")
        for lam in self.lambda_values + (self.lam2,):
            if not lam > 0.0:
                raise ConfigError(f"lambda must be positive, got {lam}", key="lambda.value")
        if not 0.0 < self.bracket_min < self.bracket_max:
            raise ConfigError(f"invalid bracket {self.bracket}", key="lambda.bracket_min")
        if self.z >= 0.0:
            raise ConfigError(f"z must be negative, got {self.z}", key="lambda.z")
        if self.n < SPECTRAL_MIN_N:
            raise ConfigError(f"need n >= {SPECTRAL_MIN_N}, got {self.n}", key="grid.n")
        if self.grading < 1.0 or not self.r_max > 0.0:
            raise ConfigError("need grading >= 1 and r_max > 0", key="grid.grading")
        if not 1 <= self.count <= 10:
            raise ConfigError(f"count must lie in [1, 10], got {self.count}", key="grid.count")
        if any(r <= 0.0 for r in self.radii):
            raise ConfigError("radii must be positive", key="grid.radii")
        if self.trials < 1:
            raise ConfigError(f"need at least one trial, got {self.trials}", key="trial.count")
        if self.command in ("green", "norms"):
            for k in self.k_values:
                if k not in (0, -1):
                    raise ConfigError(f"channel must be 0 or -1, got {k}", key="flux.k")


def _read_file(path: str) -> Dict[str, Dict[str, Any]]:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}", key="config")
    if path.endswith(".json"):
        with open(path, "r") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"invalid JSON: {e}", key="config") from e
        if not isinstance(data, dict) or not all(isinstance(v, dict) for v in data.values()):
            raise ConfigError("JSON config must map sections to objects", key="config")
        return {section.lower(): {str(k).lower(): v for k, v in values.items()}
                for section, values in data.items()}

    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as e:
        raise ConfigError(f"invalid INI file: {e}", key="config") from e
    return {section.lower(): dict(parser.items(section)) for section in parser.sections()}


def _apply(config: RunConfig, section: str, key: str, value: Any):
    if section == "tolerances":
        try:
            config.tolerances = config.tolerances.override({key: value})
        except KeyError:
            raise ConfigError(f"unknown tolerance '{key}'", key=f"tolerances.{key}") from None
        except ValueError as e:
            raise ConfigError(str(e), key=f"tolerances.{key}") from e
        return
    if section not in SCHEMA:
        raise ConfigError(f"unknown section '{section}'", key=section)
    if key not in SCHEMA[section]:
        raise ConfigError(f"unknown key '{key}'", key=f"{section}.{key}")
    attribute, convert = SCHEMA[section][key]
    try:
        setattr(config, attribute, convert(value))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"cannot parse '{value}': {e}", key=f"{section}.{key}") from e


def load_run_config(command: str, path: Optional[str] = None,
                    overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Build and validate the configuration of one subcommand.

    Args:
        command: Subcommand name
        path: INI or JSON file (optional)
        overrides: "section.key" -> value from command-line flags; None values are skipped

    Returns:
        The validated RunConfig

    Raises:
        ConfigError: On unknown keys, unparsable values or out-of-range settings
    """
    config = RunConfig(command=command)
    if path:
        for section, values in _read_file(path).items():
            for key, value in values.items():
                _apply(config, section, key, value)
        logger.info("loaded configuration from %s", path)
    for dotted, value in (overrides or {}).items():
        if value is None or value == ():
            continue
        section, key = dotted.split(".", 1)
        _apply(config, section, key, value)
    config.validate()
    return config


def config_keys() -> Dict[str, Tuple[str, ...]]:
    """Every accepted key per section."""
    keys = {section: tuple(entries) for section, entries in SCHEMA.items()}
    keys["tolerances"] = tuple(f.name for f in fields(Tolerances))
    return keys
