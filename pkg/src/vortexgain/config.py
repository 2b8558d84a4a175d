"""Plain-text run configuration: ``key = value`` entries under ``[section]``
headers, UTF-8, ``#`` comments. Unknown sections or keys are rejected and
every physical invariant is re-validated at parse time.

Sections and defaults are listed in the README; :func:`format_config`
serializes the fully resolved configuration back to text, and
parse(format(parse(text))) is the identity.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, fields, replace

from .doublet import DoubletParams, default_doublet_params
from .errors import ConfigError, SimulationError
from .fieldgrid import GridSpec
from .singlet import BeamSpec, SingletParams

EXPERIMENTS = ("propagate", "exchange", "oracle-compare", "detect", "dispersion", "sweep")
SCHEMES = ("singlet", "doublet")
SWEEP_AXES = ("l1", "strength_ratio", "delta_2f", "delta", "z")


@dataclass(frozen=True)
class SingletSettings:
    strength1: float = 1.0
    l1: int = 0
    strength2: float = 1.0
    l2: int = 0
    delta_1f: float = 1.0
    delta_2f: float = 4.0
    z: float = 1.0
    gain_scale: float = 1.0

    def params(self) -> SingletParams:
        return SingletParams(
            beam1=BeamSpec(self.strength1, self.l1),
            beam2=BeamSpec(self.strength2, self.l2),
            delta_1f=self.delta_1f,
            delta_2f=self.delta_2f,
            z=self.z,
            gain_scale=self.gain_scale,
        )


@dataclass(frozen=True)
class DoubletSettings:
    l: int = 1
    strength1: float = 1.0
    strength2: float = 1.0
    line_ratio: float = 1.0
    delta: float = 4.0
    delta_1f: float = 1.0
    delta_2f: float = 0.0
    z: float = 1.0
    gain_scale: float = 1.0

    def params(self) -> DoubletParams:
        return default_doublet_params(
            l=self.l,
            strength1=self.strength1,
            strength2=self.strength2,
            line_ratio=self.line_ratio,
            delta=self.delta,
            delta_1f=self.delta_1f,
            delta_2f=self.delta_2f,
            z=self.z,
            gain_scale=self.gain_scale,
        )


@dataclass(frozen=True)
class DispersionSettings:
    delta_2f_min: float = -6.0
    delta_2f_max: float = 6.0
    samples: int = 121
    radius: str = "peak"

    def radius_value(self) -> float | None:
        """None means: evaluate at the radius of peak total pump strength."""
        return None if self.radius == "peak" else float(self.radius)


@dataclass(frozen=True)
class SweepSettings:
    axis: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class RunConfig:
    scheme: str = "singlet"
    experiment: str = "propagate"
    output_dir: str = "out"
    grid: GridSpec = GridSpec()
    singlet: SingletSettings = SingletSettings()
    doublet: DoubletSettings = DoubletSettings()
    steps: int = 1000
    tolerance: float = 1e-6
    amplitude: complex = 1.0 + 0.0j
    dispersion: DispersionSettings = DispersionSettings()
    sweep: SweepSettings | None = None


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} must be an integer, got {raw!r}") from None


def _parse_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} must be a number, got {raw!r}") from None


def _parse_choice(section: str, key: str, raw: str, choices: tuple[str, ...]) -> str:
    if raw not in choices:
        raise ConfigError(f"[{section}] {key} must be one of {', '.join(choices)}; got {raw!r}")
    return raw


def _parse_values(section: str, key: str, raw: str) -> tuple[float, ...]:
    items = [item.strip() for item in raw.split(",")]
    items = [item for item in items if item]
    if not items:
        raise ConfigError(f"[{section}] {key} must list at least one value")
    return tuple(_parse_float(section, key, item) for item in items)


_SCHEMA: dict[str, dict[str, str]] = {
    "run": {"scheme": "scheme", "experiment": "experiment", "output_dir": "str"},
    "grid": {"nx": "int", "ny": "int", "half_extent": "float"},
    "singlet": {
        "strength1": "float",
        "l1": "int",
        "strength2": "float",
        "l2": "int",
        "delta_1f": "float",
        "delta_2f": "float",
        "z": "float",
        "gain_scale": "float",
    },
    "doublet": {
        "l": "int",
        "strength1": "float",
        "strength2": "float",
        "line_ratio": "float",
        "delta": "float",
        "delta_1f": "float",
        "delta_2f": "float",
        "z": "float",
        "gain_scale": "float",
    },
    "oracle": {"steps": "int", "tolerance": "float"},
    "exchange": {"amplitude_re": "float", "amplitude_im": "float"},
    "dispersion": {
        "delta_2f_min": "float",
        "delta_2f_max": "float",
        "samples": "int",
        "radius": "radius",
    },
    "sweep": {"axis": "axis", "values": "values"},
}


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a configuration document."""
    parser = configparser.ConfigParser(
        delimiters=("=",),
        comment_prefixes=("#",),
        inline_comment_prefixes=("#",),
        interpolation=None,
        strict=True,
    )
    parser.optionxform = str  # keep keys case-sensitive
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from None
    if parser.defaults():
        raise ConfigError("entries before the first [section] header are not allowed")

    raw: dict[str, dict[str, str]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(
                f"unknown section [{section}]; expected one of {', '.join(_SCHEMA)}"
            )
        raw[section] = {}
        for key, value in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(
                    f"unknown key {key!r} in [{section}]; expected one of "
                    f"{', '.join(_SCHEMA[section])}"
                )
            raw[section][key] = value

    def take(section: str, key: str, default):
        if section not in raw or key not in raw[section]:
            return default
        value = raw[section][key]
        kind = _SCHEMA[section][key]
        if kind == "int":
            return _parse_int(section, key, value)
        if kind == "float":
            return _parse_float(section, key, value)
        if kind == "scheme":
            return _parse_choice(section, key, value, SCHEMES)
        if kind == "experiment":
            return _parse_choice(section, key, value, EXPERIMENTS)
        if kind == "axis":
            return _parse_choice(section, key, value, SWEEP_AXES)
        if kind == "values":
            return _parse_values(section, key, value)
        if kind == "radius":
            return value if value == "peak" else repr(_parse_float(section, key, value))
        return value

    defaults = RunConfig()
    try:
        grid = GridSpec(
            nx=take("grid", "nx", defaults.grid.nx),
            ny=take("grid", "ny", defaults.grid.ny),
            half_extent=take("grid", "half_extent", defaults.grid.half_extent),
        )
    except ValueError as exc:
        raise ConfigError(f"[grid] {exc}") from None

    singlet = SingletSettings(
        **{f.name: take("singlet", f.name, getattr(defaults.singlet, f.name)) for f in fields(SingletSettings)}
    )
    doublet = DoubletSettings(
        **{f.name: take("doublet", f.name, getattr(defaults.doublet, f.name)) for f in fields(DoubletSettings)}
    )
    dispersion = DispersionSettings(
        **{
            f.name: take("dispersion", f.name, getattr(defaults.dispersion, f.name))
            for f in fields(DispersionSettings)
        }
    )

    sweep = None
    if "sweep" in raw:
        if "axis" not in raw["sweep"] or "values" not in raw["sweep"]:
            raise ConfigError("[sweep] needs both `axis` and `values`")
        sweep = SweepSettings(axis=take("sweep", "axis", None), values=take("sweep", "values", None))

    config = RunConfig(
        scheme=take("run", "scheme", defaults.scheme),
        experiment=take("run", "experiment", defaults.experiment),
        output_dir=take("run", "output_dir", defaults.output_dir),
        grid=grid,
        singlet=singlet,
        doublet=doublet,
        steps=take("oracle", "steps", defaults.steps),
        tolerance=take("oracle", "tolerance", defaults.tolerance),
        amplitude=complex(
            take("exchange", "amplitude_re", 1.0), take("exchange", "amplitude_im", 0.0)
        ),
        dispersion=dispersion,
        sweep=sweep,
    )
    validate_config(config)
    return config


def validate_config(config: RunConfig) -> None:
    """Re-run every physical invariant of the underlying parameter types."""
    if config.steps < 1:
        raise ConfigError(f"[oracle] steps must be >= 1, got {config.steps}")
    if not config.tolerance > 0:
        raise ConfigError(f"[oracle] tolerance must be positive, got {config.tolerance}")
    if config.dispersion.samples < 2:
        raise ConfigError(f"[dispersion] samples must be >= 2, got {config.dispersion.samples}")
    try:
        if config.scheme == "singlet":
            config.singlet.params()
        else:
            params = config.doublet.params()
            from .doublet import validate_matching

            report = validate_matching(params, config.grid)
            if not report.passed:
                raise ConfigError(
                    f"[doublet] pump lines mismatch at {report.max_mismatch:.3g} relative"
                )
    except (ValueError, SimulationError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[{config.scheme}] {exc}") from None
    if config.experiment == "sweep":
        if config.sweep is None:
            raise ConfigError("experiment = sweep requires a [sweep] section")
        if config.sweep.axis == "l1":
            for v in config.sweep.values:
                if v != int(v):
                    raise ConfigError(f"[sweep] l1 values must be integers, got {v!r}")
        if config.sweep.axis == "delta" and config.scheme == "singlet":
            raise ConfigError("[sweep] axis `delta` applies to the doublet scheme only")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(config: RunConfig) -> str:
    """Serialize the fully resolved configuration; parse(format(c)) == c."""
    lines = [
        "[run]",
        f"scheme = {config.scheme}",
        f"experiment = {config.experiment}",
        f"output_dir = {config.output_dir}",
        "",
        "[grid]",
        f"nx = {config.grid.nx}",
        f"ny = {config.grid.ny}",
        f"half_extent = {_fmt(config.grid.half_extent)}",
        "",
        "[singlet]",
    ]
    for f in fields(SingletSettings):
        lines.append(f"{f.name} = {_fmt(getattr(config.singlet, f.name))}")
    lines.append("")
    lines.append("[doublet]")
    for f in fields(DoubletSettings):
        lines.append(f"{f.name} = {_fmt(getattr(config.doublet, f.name))}")
    lines += [
        "",
        "[oracle]",
        f"steps = {config.steps}",
        f"tolerance = {_fmt(config.tolerance)}",
        "",
        "[exchange]",
        f"amplitude_re = {_fmt(config.amplitude.real)}",
        f"amplitude_im = {_fmt(config.amplitude.imag)}",
        "",
        "[dispersion]",
        f"delta_2f_min = {_fmt(config.dispersion.delta_2f_min)}",
        f"delta_2f_max = {_fmt(config.dispersion.delta_2f_max)}",
        f"samples = {config.dispersion.samples}",
        f"radius = {config.dispersion.radius}",
    ]
    if config.sweep is not None:
        lines += [
            "",
            "[sweep]",
            f"axis = {config.sweep.axis}",
            f"values = {', '.join(_fmt(v) for v in config.sweep.values)}",
        ]
    return "\n".join(lines) + "\n"


def with_overrides(
    config: RunConfig,
    output_dir: str | None = None,
    experiment: str | None = None,
    steps: int | None = None,
) -> RunConfig:
    """Apply command-line overrides and re-validate."""
    if output_dir is not None:
        config = replace(config, output_dir=output_dir)
    if experiment is not None:
        if experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {experiment!r}")
        config = replace(config, experiment=experiment)
    if steps is not None:
        config = replace(config, steps=steps)
    validate_config(config)
    return config
