"""
GIANTWAVE CLI Handler
=====================
Command-line entry point.

    giantwave run fig2a --out runs/fig2a
    giantwave run poles --preset fig6a --out runs/poles
    giantwave run dynamics --config my_atom.json --out runs/dyn --steps-per-tau0 400
    giantwave scan --n-points 3 --omega0-pi 1.9 2.1 201 --gamma-pi 0.05 0.05 1 --out runs/scan
    giantwave presets
"""

import argparse
import sys
from typing import List, Optional

from giantwave.common.constants import DEFAULT_STEPS_PER_TAU0, EXIT_OK, VERSION
from giantwave.common.errors import ValidationError, handle_errors
from giantwave.common.logger import get_logger, set_level
from giantwave.common.utility_helpers import json_dumps, load_json_file
from giantwave.cli.experiments import ExperimentKind, ExperimentSpec, GridRange, execute
from giantwave.cli.presets import PRESETS, preset_table

log = get_logger(__file__)

HANDLER = 'cli'

KIND_NAMES = {
    "dynamics": ExperimentKind.DYNAMICS,
    "ensemble": ExperimentKind.ENSEMBLE,
    "fieldmap": ExperimentKind.FIELD_MAP,
    "poles": ExperimentKind.POLES,
    "multiatom": ExperimentKind.MULTI_ATOM,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="giantwave", description="Giant-atom bound-state experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment or figure preset")
    run.add_argument("target", help=f"experiment kind ({', '.join(KIND_NAMES)}) or preset name (fig2a ...)")
    run.add_argument("--preset", help="preset supplying the configuration")
    run.add_argument("--config", help="JSON config file (frequencies in units of pi)")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--steps-per-tau0", type=int, default=DEFAULT_STEPS_PER_TAU0)
    run.add_argument("--horizon-gamma-t", type=float, default=None)
    run.add_argument("--ntraj", type=int, default=100)
    run.add_argument("--stride", type=int, default=1)
    run.add_argument("--dx", type=float, default=None)
    run.add_argument("--x-max", type=float, default=None)

    scan = sub.add_parser("scan", help="classify a grid of configurations")
    scan.add_argument("--n-points", type=int, nargs="+", required=True)
    scan.add_argument("--omega0-pi", type=float, nargs=3, metavar=("START", "STOP", "NUM"), required=True)
    scan.add_argument("--gamma-pi", type=float, nargs=3, metavar=("START", "STOP", "NUM"), required=True)
    scan.add_argument("--chunk-size", type=int, default=100)
    scan.add_argument("--out", required=True)

    sub.add_parser("presets", help="print the preset table")
    return parser


def _grid(values: List[float]) -> GridRange:
    return GridRange(start=values[0], stop=values[1], num=int(values[2]))


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    """Translate parsed arguments into an ExperimentSpec."""
    if args.command == "scan":
        return ExperimentSpec.create(
            kind=ExperimentKind.BOUND_STATE_SCAN,
            out=args.out,
            scan_n_points=args.n_points,
            scan_omega0_pi=_grid(args.omega0_pi),
            scan_gamma_pi=_grid(args.gamma_pi),
            chunk_size=args.chunk_size,
        )

    target = args.target.lower()
    preset = args.preset
    if target in KIND_NAMES:
        kind = KIND_NAMES[target]
    elif target in PRESETS:
        if preset is not None and preset.lower() != target:
            raise ValidationError(f"target {target} conflicts with --preset {preset}", handler=HANDLER,
                                  function="spec_from_args", field="preset")
        kind, preset = ExperimentKind.FIGURE_PRESET, target
    else:
        raise ValidationError(f"Unknown target '{args.target}'", handler=HANDLER,
                              function="spec_from_args", field="target")

    values = dict(
        kind=kind,
        out=args.out,
        preset=preset,
        config=load_json_file(args.config) if args.config else None,
        seed=args.seed,
        steps_per_tau0=args.steps_per_tau0,
        horizon_gamma_t=args.horizon_gamma_t,
        n_traj=args.ntraj,
        stride=args.stride,
        x_max=args.x_max,
    )
    if args.dx is not None:
        values["dx"] = args.dx
    return ExperimentSpec.create(**values)


@handle_errors(HANDLER)
def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)

    if args.log_level:
        set_level(args.log_level)

    if args.command == "presets":
        print(json_dumps(preset_table()))
        return EXIT_OK

    spec = spec_from_args(args)
    execute(spec)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
