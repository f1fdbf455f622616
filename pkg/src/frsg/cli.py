"""Command-line front end.

Subcommands: ``run``, ``converge-space``, ``converge-time``, ``energy``,
``osc-table``, ``export``.  Exit codes: 0 success, 1 validation error,
2 numerical blow-up, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, parse_config
from .dynamics import (
    BlowUpError,
    ModelParams,
    Variant,
    evolve,
    initial_state,
    oscillatory_wrap,
    reconstruct_uv,
)
from .experiments import (
    DESK_N_REF_2D,
    DESK_TAU_REF,
    Horizon,
    ReferenceCache,
    SweepPlan,
    energy_drift_series,
    osc_order_table,
    spatial_sweep,
    steps_for,
    temporal_sweep,
)
from .reports import write_energy_csv, write_report_csv
from .scenarios import make_scenario
from .snapshots import SnapshotError, snapshot_meta, write_snapshot
from .spectral import Field, Space
from .vtk import QUANTITIES, export_structured_grid

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BLOWUP = 2
EXIT_IO = 3


class CliError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we want exit 1
        raise CliError(message)


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x)
    except ValueError as exc:
        raise CliError(f"bad number list {text!r}") from exc


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError as exc:
        raise CliError(f"bad integer list {text!r}") from exc


def build_parser() -> _Parser:
    parser = _Parser(prog="frsg", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_run = sub.add_parser("run", help="single trajectory with snapshots")
    p_run.add_argument("--config", required=True, help="JSON run configuration")
    p_run.add_argument("--cache", default=".frsg-cache")

    def add_sweep_common(p):
        p.add_argument("--scenario", default="smooth2d")
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--epsilons", type=_floats, default=(0.5,))
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--fixed-t", type=float, dest="fixed_t")
        group.add_argument("--long-time", type=float, dest="long_time")
        p.add_argument("--n-ref", type=int, default=DESK_N_REF_2D)
        p.add_argument("--tau-ref", type=float, default=DESK_TAU_REF)
        p.add_argument("--out", default="out")
        p.add_argument("--cache", default=".frsg-cache")

    p_time = sub.add_parser("converge-time", help="temporal convergence sweep")
    add_sweep_common(p_time)
    p_time.add_argument("--taus", type=_floats, default=(4e-2, 2e-2, 1e-2, 5e-3))
    p_time.add_argument("--n", type=int, default=None, help="run resolution (default n-ref)")

    p_space = sub.add_parser("converge-space", help="spatial convergence sweep")
    add_sweep_common(p_space)
    p_space.add_argument("--n-ladder", type=_ints, default=(8, 16, 24, 32))

    p_energy = sub.add_parser("energy", help="discrete-energy drift series")
    p_energy.add_argument("--scenario", default="smooth2d")
    p_energy.add_argument("--alpha", type=float, required=True)
    p_energy.add_argument("--epsilon", type=float, required=True)
    p_energy.add_argument("--tau", type=float, required=True)
    group = p_energy.add_mutually_exclusive_group(required=True)
    group.add_argument("--fixed-t", type=float, dest="fixed_t")
    group.add_argument("--long-time", type=float, dest="long_time")
    p_energy.add_argument("--n", type=int, default=DESK_N_REF_2D)
    p_energy.add_argument("--stride", type=int, default=1)
    p_energy.add_argument("--out", default="out")

    p_osc = sub.add_parser("osc-table", help="slow-clock order table")
    p_osc.add_argument("--alpha", type=float, required=True)
    p_osc.add_argument("--paper-scale", action="store_true",
                       help="N=128, lambda_ref=1e-5, 5 epsilon rows")
    p_osc.add_argument("--desk-scale", action="store_true",
                       help="N=64, lambda_ref=1e-4, 3 epsilon rows (default)")
    p_osc.add_argument("--lambda0", type=float, default=0.05)
    p_osc.add_argument("--depth", type=int, default=5)
    p_osc.add_argument("--eps-depth", type=int, default=None)
    p_osc.add_argument("--lambda-ref", type=float, default=None)
    p_osc.add_argument("--n", type=int, default=None)
    p_osc.add_argument("--p", type=int, default=1)
    p_osc.add_argument("--out", default="out")
    p_osc.add_argument("--cache", default=".frsg-cache")

    p_export = sub.add_parser("export", help="snapshot to VTK structured points")
    p_export.add_argument("snapshot")
    p_export.add_argument("output")
    p_export.add_argument("--quantity", choices=QUANTITIES, default="sin(u/2)")

    return parser


def _horizon(args) -> Horizon:
    if getattr(args, "fixed_t", None) is not None:
        return Horizon(time=args.fixed_t)
    return Horizon(long_time=args.long_time)


class _SnapshotWriter:
    """Observer writing u/v snapshots at requested step indices."""

    def __init__(self, outdir: Path, cfg: RunConfig, times: dict[int, float]):
        self.outdir = outdir
        self.cfg = cfg
        self.times = times

    def _write(self, field: Field, kind: str, label: str, t: float) -> None:
        meta = snapshot_meta(field, self.cfg.alpha, self.cfg.epsilon, t, kind)
        write_snapshot(self.outdir / f"{label}_t{t:.6f}.frsg", field, meta)

    def __call__(self, step_index: int, state) -> None:
        if step_index not in self.times:
            return
        t = self.times[step_index]
        u, v = reconstruct_uv(state)
        if state.is_coupled:
            for label, vals, kind in (
                ("u_re", u.values.real, "phi_re"),
                ("u_im", u.values.imag, "phi_im"),
                ("v_re", v.values.real, "phi_re"),
                ("v_im", v.values.imag, "phi_im"),
            ):
                self._write(Field(u.grid, Space.PHYSICAL, vals), kind, label, t)
        else:
            self._write(u, "u", "u", t)
            self._write(v, "v", "v", t)


def cmd_run(args) -> int:
    cfg = parse_config(args.config)
    outdir = Path(cfg.outputs)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config.json").write_text(cfg.to_json())

    variant = Variant(cfg.variant)
    params = ModelParams(
        alpha=cfg.alpha, epsilon=cfg.epsilon, variant=variant, p=cfg.p
    )
    if variant is Variant.OSCILLATORY:
        s_end = cfg.horizon_t if cfg.horizon_t is not None else cfg.end_time()
        params, mapping = oscillatory_wrap(params, cfg.tau, s_end)
        tau, steps = mapping.tau, mapping.steps
        step_of = {round(s / cfg.tau): s for s in cfg.snapshots}  # slow-clock labels
        step_of[steps] = s_end
    else:
        t_end = cfg.end_time()
        tau = cfg.tau
        steps = steps_for(t_end, tau)
        step_of = {}
        for t in cfg.snapshots:
            idx = round(t / tau)
            if abs(idx * tau - t) > 1e-9 * max(1.0, t):
                raise ConfigError(f"snapshot time {t} is not a multiple of tau={tau}")
            step_of[idx] = t
        step_of[steps] = t_end

    _, u0, u1 = make_scenario(cfg.scenario, cfg.grid_override)
    state = initial_state(params, u0.grid, u0, u1)
    writer = _SnapshotWriter(outdir, cfg, step_of)
    evolve(state, tau, steps, observers=(writer,))
    print(f"run complete: {steps} steps, outputs in {outdir}")
    return EXIT_OK


def cmd_converge_time(args) -> int:
    plan = SweepPlan(
        scenario=args.scenario,
        alpha=args.alpha,
        epsilons=args.epsilons,
        horizon=_horizon(args),
        taus=args.taus,
        n_ref=args.n_ref,
        tau_ref=args.tau_ref,
        grid_points=args.n,
    )
    report = temporal_sweep(plan, ReferenceCache(args.cache))
    path = write_report_csv(report, Path(args.out) / f"converge-time_alpha{args.alpha:g}.csv")
    print(f"temporal sweep written to {path}")
    return EXIT_OK


def cmd_converge_space(args) -> int:
    plan = SweepPlan(
        scenario=args.scenario,
        alpha=args.alpha,
        epsilons=args.epsilons,
        horizon=_horizon(args),
        point_ladder=args.n_ladder,
        n_ref=args.n_ref,
        tau_ref=args.tau_ref,
    )
    report = spatial_sweep(plan, ReferenceCache(args.cache))
    path = write_report_csv(report, Path(args.out) / f"converge-space_alpha{args.alpha:g}.csv")
    print(f"spatial sweep written to {path} (spectral flags: {report.extra['spectral']})")
    return EXIT_OK


def cmd_energy(args) -> int:
    t_end = _horizon(args).end_time(args.epsilon)
    samples = energy_drift_series(
        args.scenario, args.n, args.alpha, args.epsilon, args.tau, t_end,
        stride=args.stride,
    )
    path = write_energy_csv(samples, Path(args.out) / "energy.csv")
    drift = max(abs(s.drift) for s in samples)
    print(f"energy series written to {path} (max |drift| = {drift:.4e})")
    return EXIT_OK


def cmd_osc_table(args) -> int:
    if args.paper_scale and args.desk_scale:
        raise CliError("choose at most one of --paper-scale / --desk-scale")
    if args.paper_scale:
        n = 128 if args.n is None else args.n
        lam_ref = 1e-5 if args.lambda_ref is None else args.lambda_ref
        eps_depth = 5 if args.eps_depth is None else args.eps_depth
    else:
        n = DESK_N_REF_2D if args.n is None else args.n
        lam_ref = 1e-4 if args.lambda_ref is None else args.lambda_ref
        eps_depth = 3 if args.eps_depth is None else args.eps_depth
    report = osc_order_table(
        ReferenceCache(args.cache),
        alpha=args.alpha,
        lambda0=args.lambda0,
        depth=args.depth,
        epsilon_depth=eps_depth,
        p=args.p,
        lambda_ref=lam_ref,
        points=n,
    )
    path = write_report_csv(report, Path(args.out) / f"osc-table_alpha{args.alpha:g}.csv")
    print(f"oscillatory order table written to {path}")
    return EXIT_OK


def cmd_export(args) -> int:
    out = export_structured_grid(args.snapshot, args.output, args.quantity)
    print(f"exported {args.quantity} to {out}")
    return EXIT_OK


_COMMANDS = {
    "run": cmd_run,
    "converge-time": cmd_converge_time,
    "converge-space": cmd_converge_space,
    "energy": cmd_energy,
    "osc-table": cmd_osc_table,
    "export": cmd_export,
}


def cli_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_VALIDATION
        return _COMMANDS[args.command](args)
    except BlowUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except (SnapshotError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CliError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
