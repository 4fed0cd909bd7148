"""Experiment configuration: a line-based ``key = value`` file merged with
command-line flags (flags win)."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

from .errors import ConfigError, DomainError
from .lattice import PeriodicPattern
from .moments import window_index

__all__ = ["ExperimentConfig", "COMMANDS", "parse_config", "parse_config_text", "read_config_file"]

log = logging.getLogger(__name__)

COMMANDS = ("front", "moments", "rmt", "initstate", "verify")
_FRONT_SCALED = ("moments", "initstate")

# key -> ExperimentConfig field
_KEYS = {
    "command": "command",
    "t": "t_list",
    "s": "s_grid",
    "lambda": "lambda_list",
    "pattern": "patterns",
    "nodes": "nodes",
    "out": "output_path",
    "verbose": "verbose",
    "jobs": "jobs",
    "sites": "sites",
}


@dataclass(frozen=True)
class ExperimentConfig:
    command: str = "moments"
    t_list: tuple[float, ...] = (100.0,)
    s_grid: tuple[float, float, float] = (-6.0, 4.0, 0.5)
    lambda_list: tuple[float, ...] = (0.25, 0.5, 1.0)
    patterns: tuple[str, ...] = ("10",)
    output_path: str = "-"
    nodes: int = 64
    verbose: bool = False
    jobs: int = 1
    sites: int = 0
    sources: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def pattern(self) -> str:
        return self.patterns[0]

    def s_values(self) -> list[float]:
        lo, hi, step = self.s_grid
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return [lo + k * step for k in range(count)]

    def describe(self) -> str:
        lo, hi, step = self.s_grid
        return (
            f"command={self.command} t={','.join(_fmt(t) for t in self.t_list)} "
            f"s={_fmt(lo)}:{_fmt(hi)}:{_fmt(step)} lambda={','.join(_fmt(x) for x in self.lambda_list)} "
            f"pattern={','.join(self.patterns)} nodes={self.nodes} sites={self.sites}"
        )


def _fmt(x: float) -> str:
    return repr(float(x)) if not float(x).is_integer() else str(int(x))


# ---------------------------------------------------------------------------
# value parsers; each raises ValueError with a readable message
# ---------------------------------------------------------------------------


def _floats(text: str) -> tuple[float, ...]:
    items = [p.strip() for p in str(text).split(",")]
    if not all(items):
        raise ValueError(f"empty entry in list {text!r}")
    out = tuple(float(p) for p in items)
    if not all(math.isfinite(x) for x in out):
        raise ValueError(f"non-finite value in {text!r}")
    return out


def _range(text: str) -> tuple[float, float, float]:
    parts = str(text).split(":")
    if len(parts) == 1:
        # a single position is a one-point grid
        parts = [parts[0], parts[0], "1"]
    if len(parts) != 3:
        raise ValueError(f"range must look like min:max:step or a single value, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise ValueError(f"range must look like min:max:step or a single value, got {text!r}") from None
    if not step > 0:
        raise ValueError(f"range step must be > 0, got {step}")
    if hi < lo:
        raise ValueError(f"range max {hi} is below min {lo}")
    return lo, hi, step


def _patterns(text: str) -> tuple[str, ...]:
    out = []
    for item in str(text).split(","):
        try:
            out.append(str(PeriodicPattern.from_string(item)))
        except DomainError as exc:
            raise ValueError(str(exc)) from None
    return tuple(out)


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    key = str(text).strip().lower()
    if key in ("1", "true", "yes", "on"):
        return True
    if key in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _command(text: str) -> str:
    key = str(text).strip()
    if key not in COMMANDS:
        raise ValueError(f"unknown command {key!r}, expected one of {', '.join(COMMANDS)}")
    return key


_PARSERS = {
    "command": _command,
    "t_list": _floats,
    "s_grid": _range,
    "lambda_list": _floats,
    "patterns": _patterns,
    "nodes": int,
    "output_path": lambda v: str(v).strip(),
    "verbose": _bool,
    "jobs": int,
    "sites": int,
}


def read_config_file(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def parse_config_text(text: str) -> tuple[dict, list[str]]:
    """Raw ``key -> value`` strings from config text, plus syntax errors."""
    values, errors = {}, []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            errors.append(f"line {lineno}: expected 'key = value', got {line!r}")
            continue
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _KEYS:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        values[key] = value
    return values, errors


def parse_config(path=None, flags: dict | None = None, text: str | None = None) -> ExperimentConfig:
    """Build a validated config from a file (or raw text) and flag overrides.

    ``flags`` maps config keys to raw values; ``None`` entries are ignored.
    All problems are collected and raised together as one :class:`ConfigError`.
    OSError from reading ``path`` propagates unchanged.
    """
    errors = []
    file_values = {}
    if path is not None:
        text = read_config_file(path)
    if text is not None:
        file_values, errors = parse_config_text(text)

    flag_values = {}
    for key, value in (flags or {}).items():
        if value is None:
            continue
        if key not in _KEYS:
            errors.append(f"unknown option {key!r}")
            continue
        flag_values[key] = value

    merged = dict(file_values)
    for key, value in flag_values.items():
        if key in file_values and str(file_values[key]) != str(value):
            log.info("flag --%s=%s overrides config value %s", key, value, file_values[key])
        merged[key] = value

    kwargs, sources = {}, {}
    for key, raw in merged.items():
        name = _KEYS[key]
        try:
            kwargs[name] = _PARSERS[name](raw)
        except ValueError as exc:
            errors.append(f"{key}: {exc}")
            continue
        sources[name] = "flag" if key in flag_values else "file"

    cfg = replace(ExperimentConfig(), **kwargs)
    object.__setattr__(cfg, "sources", sources)
    errors.extend(_validate(cfg, failed={_KEYS[k] for k in merged} - set(kwargs)))
    if errors:
        raise ConfigError(errors)
    return cfg


def _validate(cfg: ExperimentConfig, failed=frozenset()) -> list[str]:
    errors = []
    if not 16 <= cfg.nodes <= 256:
        errors.append(f"nodes: must lie in [16, 256], got {cfg.nodes}")
    if not 1 <= cfg.jobs <= 64:
        errors.append(f"jobs: must lie in [1, 64], got {cfg.jobs}")
    if cfg.sites < 0:
        errors.append(f"sites: must be >= 0, got {cfg.sites}")
    if not cfg.output_path:
        errors.append("out: empty output path")
    if any(t < 0 for t in cfg.t_list):
        errors.append(f"t: times must be >= 0, got {cfg.t_list}")
    cmd = cfg.command
    if cmd in _FRONT_SCALED:
        if any(t < 2 for t in cfg.t_list):
            errors.append(f"t: {cmd} needs every t >= 2, got {cfg.t_list}")
        elif "s_grid" not in failed:
            lo = cfg.s_grid[0]
            bad = [t for t in cfg.t_list if window_index(t, lo) < 1]
            if bad:
                errors.append(f"s: min {lo} puts the window below site 1 for t = {bad}")
    if cmd == "rmt":
        if "s_grid" not in failed and cfg.s_grid[0] < -12:
            errors.append(f"s: rmt needs s >= -12, got min {cfg.s_grid[0]}")
        if any(not 0 <= x < 2 for x in cfg.lambda_list):
            errors.append(f"lambda: rmt needs 0 <= lambda < 2, got {cfg.lambda_list}")
    if cmd in ("front", "moments") and len(cfg.patterns) != 1:
        errors.append(f"pattern: {cmd} takes a single pattern, got {len(cfg.patterns)}")
    if cmd == "front" and cfg.sites > 2000:
        errors.append(f"sites: front grids are capped at 2000 sites, got {cfg.sites}")
    return errors
