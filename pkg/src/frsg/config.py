"""Strict JSON run-configuration parsing.

Schema (unknown keys are rejected):

    {
      "scenario":     "smooth2d" | ... (catalog name, required)
      "alpha":        float in (1, 2]                  (required)
      "epsilon":      float in (0, 1]                  (required)
      "tau":          float > 0                        (default 1e-3)
      "horizon":      {"t": T} or {"longTime": T}      (required)
      "gridOverride": int or [int per axis]            (optional)
      "variant":      "real" | "complex" | "oscillatory" (default: scenario's)
      "p":            int >= 1, oscillatory only       (default 1)
      "snapshots":    [times...] each in [0, horizon]  (default [])
      "outputs":      directory path                   (default "out")
    }

For the oscillatory variant ``tau`` and the horizon are read in the slow
clock and mapped to the native run internally.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from .dynamics import Variant
from .experiments import Horizon
from .scenarios import SCENARIO_NAMES, _CATALOG


class ConfigError(ValueError):
    """Validation failure; the message names the offending key (and line)."""


_ALLOWED = {
    "scenario",
    "alpha",
    "epsilon",
    "tau",
    "horizon",
    "gridOverride",
    "variant",
    "p",
    "snapshots",
    "outputs",
}

_VARIANTS = {v.value: v for v in Variant}


@dataclass
class RunConfig:
    scenario: str
    alpha: float
    epsilon: float
    tau: float
    horizon_t: float | None
    horizon_long_time: float | None
    grid_override: tuple[int, ...] | None
    variant: str
    p: int
    snapshots: tuple[float, ...]
    outputs: str

    @property
    def horizon(self) -> Horizon:
        return Horizon(time=self.horizon_t, long_time=self.horizon_long_time)

    def end_time(self) -> float:
        return self.horizon.end_time(self.epsilon)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _line_of(text: str, key: str) -> str:
    for lineno, line in enumerate(text.splitlines(), start=1):
        if f'"{key}"' in line:
            return f" (line {lineno})"
    return ""


def parse_config(path: str | Path) -> RunConfig:
    """Load and validate a run configuration file."""
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")

    for key in raw:
        if key not in _ALLOWED:
            raise ConfigError(f"{path}: unknown key {key!r}{_line_of(text, key)}")
    for key in ("scenario", "alpha", "epsilon", "horizon"):
        if key not in raw:
            raise ConfigError(f"{path}: missing required key {key!r}")

    def fail(key: str, why: str) -> ConfigError:
        return ConfigError(f"{path}: key {key!r}{_line_of(text, key)}: {why}")

    scenario = raw["scenario"]
    if scenario not in SCENARIO_NAMES:
        raise fail("scenario", f"unknown scenario {scenario!r}")
    entry = _CATALOG[scenario]
    dim = len(entry.intervals)

    alpha = float(raw["alpha"])
    if not 1.0 < alpha <= 2.0:
        raise fail("alpha", f"alpha must be in (1, 2], got {alpha}")
    epsilon = float(raw["epsilon"])
    if not 0.0 < epsilon <= 1.0:
        raise fail("epsilon", f"epsilon must be in (0, 1], got {epsilon}")
    tau = float(raw.get("tau", 1e-3))
    if not tau > 0.0:
        raise fail("tau", f"tau must be positive, got {tau}")

    horizon = raw["horizon"]
    if (
        not isinstance(horizon, dict)
        or len(horizon) != 1
        or next(iter(horizon)) not in ("t", "longTime")
    ):
        raise fail("horizon", 'must be {"t": T} or {"longTime": T}')
    hkey, hval = next(iter(horizon.items()))
    hval = float(hval)
    if not hval > 0.0:
        raise fail("horizon", f"horizon must be positive, got {hval}")
    horizon_t = hval if hkey == "t" else None
    horizon_long = hval if hkey == "longTime" else None

    override = raw.get("gridOverride")
    grid_override: tuple[int, ...] | None = None
    if override is not None:
        if isinstance(override, int):
            grid_override = (override,) * dim
        elif isinstance(override, list) and all(isinstance(n, int) for n in override):
            grid_override = tuple(override)
        else:
            raise fail("gridOverride", "must be an int or a list of ints")
        if len(grid_override) != dim:
            raise fail("gridOverride", f"scenario is {dim}-dimensional")
        for n in grid_override:
            if n < 4 or n % 2:
                raise fail("gridOverride", f"point counts must be even and >= 4, got {n}")

    variant = raw.get("variant", entry.variant.value)
    if variant not in _VARIANTS:
        raise fail("variant", f"must be one of {sorted(_VARIANTS)}, got {variant!r}")
    p = raw.get("p", 1)
    if not isinstance(p, int) or p < 1:
        raise fail("p", f"must be an integer >= 1, got {p!r}")
    if "p" in raw and variant != "oscillatory":
        raise fail("p", "only meaningful for the oscillatory variant")

    snapshots_raw = raw.get("snapshots", [])
    if not isinstance(snapshots_raw, list):
        raise fail("snapshots", "must be a list of times")
    snapshots = tuple(float(t) for t in snapshots_raw)
    end = hval if hkey == "t" else hval / epsilon**2
    if variant == "oscillatory":
        end = hval  # slow-clock times
    for t in snapshots:
        if not 0.0 <= t <= end + 1e-12:
            raise fail("snapshots", f"time {t} outside [0, {end}]")

    outputs = raw.get("outputs", "out")
    if not isinstance(outputs, str) or not outputs:
        raise fail("outputs", "must be a non-empty path string")

    return RunConfig(
        scenario=scenario,
        alpha=alpha,
        epsilon=epsilon,
        tau=tau,
        horizon_t=horizon_t,
        horizon_long_time=horizon_long,
        grid_override=grid_override,
        variant=variant,
        p=p,
        snapshots=snapshots,
        outputs=outputs,
    )
