"""Line-oriented ``key = value`` configuration files.

Blank lines and everything after ``#`` are ignored.  Keys:

    experiment    example1 | example2 | custom            (required)
    N             truncation degree                       (required)
    N1            diagnostic cutoff, default 3N/4
    N0            top degree of the Example 1 solution, default N
    nu, omega     viscosity and rotation rate
    t_end         final time
    rtol, atol    integration tolerances
    seed          RNG seed for Example 2 phases
    output_times  comma-separated times; default ten evenly spaced
    output_dir    directory for CSV and snapshot output
    dump_grid     true | false, write grid-field CSVs at output times
    restart       snapshot path; start from its state and time
    forcing       none | example2                         (custom only)

``custom`` runs take their initial state from ``restart``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields

EXPERIMENTS = ("example1", "example2", "custom")

_DEFAULTS = {
    "example1": dict(nu=0.1, omega=1.0, t_end=2.0, rtol=1e-6, atol=1e-10),
    "example2": dict(nu=1e-4, omega=1.0, t_end=2.0, rtol=1e-3, atol=1e-6),
    "custom": dict(nu=1e-4, omega=1.0, t_end=2.0, rtol=1e-3, atol=1e-6),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimulationConfig:
    experiment: str
    N: int
    N1: int
    nu: float
    omega: float
    t_end: float
    rtol: float
    atol: float
    seed: int = 0
    N0: int | None = None
    output_times: tuple[float, ...] = ()
    output_dir: str = "output"
    dump_grid: bool = False
    restart: str | None = None
    forcing: str = "none"

    def canonical(self) -> str:
        """Stable text form of every setting that affects the numbers."""
        skip = {"output_dir"}
        return "\n".join(f"{f.name}={getattr(self, f.name)!r}" for f in fields(self) if f.name not in skip)

    def digest(self) -> bytes:
        return hashlib.sha256(self.canonical().encode()).digest()


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_times(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.replace(",", " ").split())


_PARSERS = {
    "experiment": str,
    "N": int,
    "N1": int,
    "N0": int,
    "nu": float,
    "omega": float,
    "t_end": float,
    "rtol": float,
    "atol": float,
    "seed": int,
    "output_times": _parse_times,
    "output_dir": str,
    "dump_grid": _parse_bool,
    "restart": str,
    "forcing": str,
}


def parse_config(text: str) -> SimulationConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None

    for key in ("N", "N1", "N0"):
        if key in values and values[key] < 1:
            raise ConfigError(f"{key} must be >= 1, got {values[key]}")
    if "experiment" not in values:
        raise ConfigError("experiment required")
    experiment = values["experiment"]
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {experiment!r}")
    if "N" not in values:
        raise ConfigError("N required")
    merged = dict(_DEFAULTS[experiment])
    merged.update(values)
    N = merged["N"]
    merged.setdefault("N1", max(1, (3 * N) // 4))
    if not 1 <= merged["N1"] <= N:
        raise ConfigError(f"N1 must satisfy 1 <= N1 <= N, got {merged['N1']}")
    if experiment == "example1":
        merged.setdefault("N0", N)
        if merged["N0"] < 2:
            raise ConfigError(f"N0 must be >= 2, got {merged['N0']}")
    elif "N0" in values:
        raise ConfigError("N0 only applies to example1")
    for key in ("rtol", "atol", "t_end", "nu"):
        if not merged[key] > 0:
            raise ConfigError(f"{key} must be positive, got {merged[key]}")
    if merged.get("forcing", "none") not in ("none", "example2"):
        raise ConfigError(f"forcing must be none or example2, got {merged['forcing']!r}")
    if "forcing" in values and experiment != "custom":
        raise ConfigError("forcing only applies to custom experiments")
    if experiment == "custom" and "restart" not in merged:
        raise ConfigError("custom experiments need a restart snapshot as initial state")
    if any(t < 0 or t > merged["t_end"] for t in merged.get("output_times", ())):
        raise ConfigError("output_times must lie in [0, t_end]")
    return SimulationConfig(**merged)


def load_config(path) -> SimulationConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
