"""Reference-solution cache and the convergence / energy sweep harnesses.

Sweeps follow the self-convergence protocol: a fine reference run (default
desk scale: 64 nodes per axis, reference step 2.5e-4) stands in for the
exact solution, and every report records the reference identity.  Errors
are measured in the H^(alpha/2) norm of the displacement.  Failed cells
(blow-ups) are reported, never dropped.  Runs declare their step budgets up
front and refuse budgets beyond the guardrail.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import time as _time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .dynamics import (
    MAX_STEPS,
    BlowUpError,
    ModelParams,
    State,
    Variant,
    evolve,
    initial_state,
    oscillatory_wrap,
    reconstruct_uv,
)
from .observables import EnergySample, EnergyTracker, error_norm
from .scenarios import make_scenario
from .snapshots import SnapshotError, read_snapshot, snapshot_meta, write_snapshot
from .spectral import Field, GridSpec, Space

log = logging.getLogger(__name__)

DESK_N_REF_2D = 64
DESK_N_REF_3D = 32
DESK_TAU_REF = 2.5e-4


@dataclass(frozen=True)
class Horizon:
    """Terminal time, either fixed or scaled by 1/epsilon^2."""

    time: float | None = None
    long_time: float | None = None

    def __post_init__(self) -> None:
        if (self.time is None) == (self.long_time is None):
            raise ValueError("specify exactly one of time / long_time")

    def end_time(self, epsilon: float) -> float:
        if self.time is not None:
            return self.time
        assert self.long_time is not None
        return self.long_time / epsilon**2

    def describe(self) -> dict:
        if self.time is not None:
            return {"t": self.time}
        return {"longTime": self.long_time}


def steps_for(t_end: float, tau: float) -> int:
    """Step count for an exactly representable horizon, guardrail-checked."""
    n = round(t_end / tau)
    if n < 1 or abs(n * tau - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ValueError(f"horizon {t_end} is not an integer multiple of tau={tau}")
    if n > MAX_STEPS:
        raise ValueError(f"step budget {n} exceeds guardrail {MAX_STEPS}")
    return n


@dataclass(frozen=True)
class SweepPlan:
    """One sweep: scenario, fractional order, parameter ladders, reference.

    ``nonlinearity`` is the test hook forwarded to the solver; hooked sweeps
    compute their references inline and never touch the persistent cache.
    """

    scenario: str
    alpha: float
    epsilons: tuple[float, ...]
    horizon: Horizon
    taus: tuple[float, ...] = ()
    point_ladder: tuple[int, ...] = ()
    n_ref: int = DESK_N_REF_2D
    tau_ref: float = DESK_TAU_REF
    grid_points: int | None = None  # resolution of temporal runs; default n_ref
    nonlinearity: object | None = None

    def __post_init__(self) -> None:
        if self.taus and any(
            b >= a for a, b in zip(self.taus, self.taus[1:])
        ):
            raise ValueError("tau ladder must be strictly decreasing")
        if self.point_ladder and any(
            b <= a for a, b in zip(self.point_ladder, self.point_ladder[1:])
        ):
            raise ValueError("resolution ladder must be strictly increasing")
        if not self.epsilons:
            raise ValueError("at least one epsilon is required")


@dataclass
class ConvergenceReport:
    """Structured sweep results: error/order matrices plus provenance."""

    kind: str
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    errors: np.ndarray
    orders: np.ndarray
    failed: np.ndarray
    ladder_ratio: float
    metadata: dict
    diagonal: np.ndarray | None = None
    extra: dict = field(default_factory=dict)


def observed_order(e_coarse: float, e_fine: float, ratio: float) -> float:
    """log(e_coarse/e_fine) / log(ratio); NaN when either error is not > 0."""
    if ratio <= 1.0:
        raise ValueError("ladder ratio must exceed 1")
    if not (e_coarse > 0.0 and e_fine > 0.0):
        return math.nan
    if not (math.isfinite(e_coarse) and math.isfinite(e_fine)):
        return math.nan
    return math.log(e_coarse / e_fine) / math.log(ratio)


def _orders_along_rows(errors: np.ndarray, ratio: float) -> np.ndarray:
    orders = np.full_like(errors, np.nan)
    for i in range(errors.shape[0]):
        for j in range(1, errors.shape[1]):
            e0, e1 = errors[i, j - 1], errors[i, j]
            if np.isfinite(e0) and np.isfinite(e1):
                orders[i, j] = observed_order(float(e0), float(e1), ratio)
    return orders


class ReferenceCache:
    """Content-addressed store of reference (u, v) terminal snapshots.

    Layout: ``<root>/<sha256-of-params>/meta.json`` plus snapshot files.
    A corrupt entry (parameter mismatch or unreadable snapshot) triggers a
    recompute with a warning.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(params: dict) -> str:
        canonical = json.dumps(params, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def _load(self, entry: Path, params: dict) -> tuple[Field, Field] | None:
        meta_path = entry / "meta.json"
        try:
            meta = json.loads(meta_path.read_text())
        except (OSError, ValueError):
            log.warning("reference cache %s: unreadable meta.json, recomputing", entry.name)
            return None
        if meta.get("params") != params:
            log.warning("reference cache %s: parameter mismatch, recomputing", entry.name)
            return None
        try:
            u, _ = read_snapshot(entry / "u.frsg")
            v, _ = read_snapshot(entry / "v.frsg")
        except (OSError, SnapshotError):
            log.warning("reference cache %s: unreadable snapshot, recomputing", entry.name)
            return None
        return u, v

    def get_or_compute(self, params: dict, compute) -> tuple[Field, Field]:
        entry = self.root / self.key(params)
        if entry.exists():
            loaded = self._load(entry, params)
            if loaded is not None:
                return loaded
        u, v = compute()
        entry.mkdir(parents=True, exist_ok=True)
        meta = snapshot_meta(
            u, params.get("alpha", 0.0), params.get("epsilon", 0.0),
            params.get("t_end", 0.0), "u",
        )
        write_snapshot(entry / "u.frsg", u, meta)
        meta_v = snapshot_meta(
            v, params.get("alpha", 0.0), params.get("epsilon", 0.0),
            params.get("t_end", 0.0), "v",
        )
        write_snapshot(entry / "v.frsg", v, meta_v)
        (entry / "meta.json").write_text(json.dumps({"params": params}, indent=1))
        return u, v


def run_trajectory(
    scenario: str,
    points: int | Sequence[int] | None,
    params: ModelParams,
    tau: float,
    steps: int,
    observers: Sequence = (),
) -> State:
    """Sample a catalog scenario and evolve it for ``steps`` steps."""
    _, u0, u1 = make_scenario(scenario, points)
    state = initial_state(params, u0.grid, u0, u1)
    return evolve(state, tau, steps, observers)


def _terminal_uv(
    scenario: str, points, params: ModelParams, tau: float, steps: int
) -> tuple[Field, Field]:
    final = run_trajectory(scenario, points, params, tau, steps)
    return reconstruct_uv(final)


def reference_solution(
    cache: ReferenceCache,
    scenario: str,
    alpha: float,
    epsilon: float,
    t_end: float,
    tau: float,
    points: int,
    variant: Variant = Variant.REAL,
) -> tuple[Field, Field]:
    """Terminal (u, v) of the fine run, served from the cache when warm.

    Complex-data scenarios are cached as real/imaginary component snapshots.
    """
    steps = steps_for(t_end, tau)
    params = ModelParams(alpha=alpha, epsilon=epsilon, variant=variant)
    key_params = {
        "scenario": scenario,
        "points": int(points),
        "alpha": float(alpha),
        "epsilon": float(epsilon),
        "tau": float(tau),
        "t_end": float(t_end),
        "steps": steps,
        "variant": variant.value,
    }
    if variant is Variant.REAL:
        return cache.get_or_compute(
            key_params, lambda: _terminal_uv(scenario, points, params, tau, steps)
        )

    # Complex variant: cache four real component fields.
    entry = cache.root / ReferenceCache.key(key_params)
    names = ("u_re", "u_im", "v_re", "v_im")
    if entry.exists():
        try:
            meta = json.loads((entry / "meta.json").read_text())
            if meta.get("params") == key_params:
                parts = [read_snapshot(entry / f"{n}.frsg")[0] for n in names]
                u = Field(parts[0].grid, Space.PHYSICAL,
                          parts[0].values.real + 1j * parts[1].values.real)
                v = Field(parts[2].grid, Space.PHYSICAL,
                          parts[2].values.real + 1j * parts[3].values.real)
                return u, v
            log.warning("reference cache %s: parameter mismatch, recomputing", entry.name)
        except (OSError, ValueError, SnapshotError):
            log.warning("reference cache %s: unreadable entry, recomputing", entry.name)
    u, v = _terminal_uv(scenario, points, params, tau, steps)
    entry.mkdir(parents=True, exist_ok=True)
    comps = {
        "u_re": (u, u.values.real, "phi_re"),
        "u_im": (u, u.values.imag, "phi_im"),
        "v_re": (v, v.values.real, "phi_re"),
        "v_im": (v, v.values.imag, "phi_im"),
    }
    for name, (ref_field, vals, kind) in comps.items():
        comp = Field(ref_field.grid, Space.PHYSICAL, vals)
        write_snapshot(
            entry / f"{name}.frsg",
            comp,
            snapshot_meta(comp, alpha, epsilon, t_end, kind),
        )
    (entry / "meta.json").write_text(json.dumps({"params": key_params}, indent=1))
    return u, v


def _declare_budget(step_counts: Sequence[int]) -> None:
    for n in step_counts:
        if n > MAX_STEPS:
            raise ValueError(f"declared step budget {n} exceeds guardrail {MAX_STEPS}")


def _sweep_reference(
    plan: SweepPlan, cache: ReferenceCache, eps: float, t_end: float
) -> Field:
    """Reference displacement for one sweep row (cache bypassed when hooked)."""
    if plan.nonlinearity is not None:
        params = ModelParams(
            alpha=plan.alpha, epsilon=eps, nonlinearity=plan.nonlinearity
        )
        steps = steps_for(t_end, plan.tau_ref)
        u, _ = _terminal_uv(plan.scenario, plan.n_ref, params, plan.tau_ref, steps)
        return u
    u, _ = reference_solution(
        cache, plan.scenario, plan.alpha, eps, t_end, plan.tau_ref, plan.n_ref
    )
    return u


def temporal_sweep(plan: SweepPlan, cache: ReferenceCache) -> ConvergenceReport:
    """Errors vs the time-step ladder, one row per epsilon.

    Also emits the fixed-tau ratio matrix error(eps)/error(eps/2) between
    adjacent rows (``extra["epsilon_ratios"]``).
    """
    if not plan.taus:
        raise ValueError("temporal sweep needs a tau ladder")
    t0 = _time.perf_counter()
    n_run = plan.grid_points or plan.n_ref
    budgets = []
    for eps in plan.epsilons:
        t_end = plan.horizon.end_time(eps)
        budgets.append(steps_for(t_end, plan.tau_ref))
        budgets.extend(steps_for(t_end, tau) for tau in plan.taus)
    _declare_budget(budgets)

    shape = (len(plan.epsilons), len(plan.taus))
    errors = np.full(shape, np.nan)
    failed = np.zeros(shape, dtype=bool)
    s_norm = plan.alpha / 2.0
    for i, eps in enumerate(plan.epsilons):
        t_end = plan.horizon.end_time(eps)
        u_ref = _sweep_reference(plan, cache, eps, t_end)
        params = ModelParams(
            alpha=plan.alpha, epsilon=eps, nonlinearity=plan.nonlinearity
        )
        for j, tau in enumerate(plan.taus):
            steps = steps_for(t_end, tau)
            try:
                final = run_trajectory(plan.scenario, n_run, params, tau, steps)
            except BlowUpError as exc:
                log.warning("cell (eps=%g, tau=%g) blew up: %s", eps, tau, exc)
                failed[i, j] = True
                continue
            u_num, _ = reconstruct_uv(final)
            errors[i, j] = error_norm(u_num, u_ref, s_norm)

    ratio = plan.taus[0] / plan.taus[1] if len(plan.taus) > 1 else 2.0
    report = ConvergenceReport(
        kind="temporal",
        row_labels=tuple(f"eps={eps:g}" for eps in plan.epsilons),
        col_labels=tuple(f"tau={tau:g}" for tau in plan.taus),
        errors=errors,
        orders=_orders_along_rows(errors, ratio),
        failed=failed,
        ladder_ratio=ratio,
        metadata={
            "scenario": plan.scenario,
            "alpha": plan.alpha,
            "horizon": plan.horizon.describe(),
            "grid_points": n_run,
            "reference": {"n_ref": plan.n_ref, "tau_ref": plan.tau_ref},
            "norm_exponent": s_norm,
            "hooked": plan.nonlinearity is not None,
            "wall_time_s": 0.0,
        },
    )
    if len(plan.epsilons) > 1:
        report.extra["epsilon_ratios"] = errors[:-1, :] / errors[1:, :]
    report.metadata["wall_time_s"] = _time.perf_counter() - t0
    return report


SPECTRAL_FLOOR = 1e-8
SPECTRAL_DROP = 10.0


def spatial_sweep(plan: SweepPlan, cache: ReferenceCache) -> ConvergenceReport:
    """Errors vs the resolution ladder at the reference time step.

    ``extra["spectral"]`` flags rows whose errors drop by >= 10x per rung
    until reaching the 1e-8 floor.
    """
    if not plan.point_ladder:
        raise ValueError("spatial sweep needs a resolution ladder")
    t0 = _time.perf_counter()
    budgets = []
    for eps in plan.epsilons:
        t_end = plan.horizon.end_time(eps)
        budgets.append(steps_for(t_end, plan.tau_ref))
        budgets.extend([steps_for(t_end, plan.tau_ref)] * len(plan.point_ladder))
    _declare_budget(budgets)

    shape = (len(plan.epsilons), len(plan.point_ladder))
    errors = np.full(shape, np.nan)
    failed = np.zeros(shape, dtype=bool)
    s_norm = plan.alpha / 2.0
    for i, eps in enumerate(plan.epsilons):
        t_end = plan.horizon.end_time(eps)
        steps = steps_for(t_end, plan.tau_ref)
        u_ref = _sweep_reference(plan, cache, eps, t_end)
        params = ModelParams(
            alpha=plan.alpha, epsilon=eps, nonlinearity=plan.nonlinearity
        )
        for j, n in enumerate(plan.point_ladder):
            try:
                final = run_trajectory(plan.scenario, n, params, plan.tau_ref, steps)
            except BlowUpError as exc:
                log.warning("cell (eps=%g, N=%d) blew up: %s", eps, n, exc)
                failed[i, j] = True
                continue
            u_num, _ = reconstruct_uv(final)
            errors[i, j] = error_norm(u_num, u_ref, s_norm)

    spectral_flags = []
    for i in range(shape[0]):
        row = errors[i]
        ok = True
        for j in range(1, len(row)):
            if not np.isfinite(row[j - 1]) or not np.isfinite(row[j]):
                ok = False
                break
            if row[j - 1] <= SPECTRAL_FLOOR:
                break
            if not (row[j] <= row[j - 1] / SPECTRAL_DROP or row[j] <= SPECTRAL_FLOOR):
                ok = False
                break
        spectral_flags.append(ok)

    report = ConvergenceReport(
        kind="spatial",
        row_labels=tuple(f"eps={eps:g}" for eps in plan.epsilons),
        col_labels=tuple(f"N={n}" for n in plan.point_ladder),
        errors=errors,
        orders=np.full(shape, np.nan),
        failed=failed,
        ladder_ratio=2.0,
        metadata={
            "scenario": plan.scenario,
            "alpha": plan.alpha,
            "horizon": plan.horizon.describe(),
            "reference": {"n_ref": plan.n_ref, "tau_ref": plan.tau_ref},
            "norm_exponent": s_norm,
            "hooked": plan.nonlinearity is not None,
            "wall_time_s": 0.0,
        },
        extra={"spectral": spectral_flags},
    )
    report.metadata["wall_time_s"] = _time.perf_counter() - t0
    return report


def osc_order_table(
    cache: ReferenceCache,
    alpha: float,
    lambda0: float = 0.05,
    depth: int = 5,
    epsilon_depth: int = 5,
    p: int = 1,
    lambda_ref: float = 1e-4,
    points: int = DESK_N_REF_2D,
    s_end: float = 1.0,
    scenario: str = "osc-complex-2d",
) -> ConvergenceReport:
    """Slow-clock step-ladder table for the complex oscillatory problem.

    Rows are eps = 1/2^r, columns the ladder lambda0/4^j; each cell is the
    slow-clock displacement error at s = s_end against the lambda_ref
    reference on the same grid.  Diagonal cells (r == j) are marked the way
    the printed tables highlight them; the rate-error matrix is stored in
    ``extra["rate_errors"]``.
    """
    if depth < 1 or depth > 5:
        raise ValueError("ladder depth must lie in 1..5")
    if epsilon_depth < 1:
        raise ValueError("epsilon_depth must be >= 1")
    t0 = _time.perf_counter()
    lambdas = [lambda0 / 4**j for j in range(depth)]
    epsilons = [1.0 / 2**r for r in range(epsilon_depth)]

    budgets = []
    for lam in lambdas + [lambda_ref]:
        budgets.append(steps_for(s_end, lam))
    _declare_budget(budgets)

    shape = (len(epsilons), len(lambdas))
    errors = np.full(shape, np.nan)
    rate_errors = np.full(shape, np.nan)
    failed = np.zeros(shape, dtype=bool)
    s_norm = alpha / 2.0
    for i, eps in enumerate(epsilons):
        base = ModelParams(alpha=alpha, epsilon=eps, variant=Variant.OSCILLATORY, p=p)
        native_ref, map_ref = oscillatory_wrap(base, lambda_ref, s_end)
        u_ref, v_ref = reference_solution(
            cache,
            scenario,
            alpha,
            eps,
            map_ref.t_end,
            map_ref.tau,
            points,
            variant=Variant.COMPLEX,
        )
        for j, lam in enumerate(lambdas):
            native, mapping = oscillatory_wrap(base, lam, s_end)
            try:
                final = run_trajectory(
                    scenario, points, native, mapping.tau, mapping.steps
                )
            except BlowUpError as exc:
                log.warning("cell (eps=%g, lambda=%g) blew up: %s", eps, lam, exc)
                failed[i, j] = True
                continue
            u_num, v_num = reconstruct_uv(final)
            errors[i, j] = error_norm(u_num, u_ref, s_norm)
            rate_errors[i, j] = error_norm(v_num, v_ref, 0.0)

    diagonal = np.zeros(shape, dtype=bool)
    for r in range(min(shape)):
        diagonal[r, r] = True

    report = ConvergenceReport(
        kind="osc-table",
        row_labels=tuple(f"eps=1/{2**r}" if r else "eps=1" for r in range(epsilon_depth)),
        col_labels=tuple(f"lambda={lam:g}" for lam in lambdas),
        errors=errors,
        orders=_orders_along_rows(errors, 4.0),
        failed=failed,
        ladder_ratio=4.0,
        metadata={
            "scenario": scenario,
            "alpha": alpha,
            "p": p,
            "s_end": s_end,
            "grid_points": points,
            "reference": {"n_ref": points, "lambda_ref": lambda_ref},
            "norm_exponent": s_norm,
            "wall_time_s": 0.0,
        },
        diagonal=diagonal,
        extra={"rate_errors": rate_errors},
    )
    report.metadata["wall_time_s"] = _time.perf_counter() - t0
    return report


def energy_drift_series(
    scenario: str,
    points: int | None,
    alpha: float,
    epsilon: float,
    tau: float,
    t_end: float,
    stride: int = 1,
) -> list[EnergySample]:
    """Discrete-energy drift along one real-variant trajectory."""
    steps = steps_for(t_end, tau)
    tracker = EnergyTracker(stride=stride)
    run_trajectory(
        scenario,
        points,
        ModelParams(alpha=alpha, epsilon=epsilon),
        tau,
        steps,
        observers=(tracker,),
    )
    return tracker.samples
