"""weakbem command-line entry point.

Runs the weak-Dirichlet experiments on the unit sphere and writes CSV results:
    python -m weakbem.main solve --k 3 --beta-re 1 --beta-im -1 --level 3
    python -m weakbem.main sweep-k --k-min 2.5 --k-max 3.0 --k-step 0.01 --beta-im 0
    python -m weakbem.main converge --levels 1,2,3,4 --out tmp/converge.csv

Exit codes: 0 success, 1 configuration error, 2 some grid point did not converge.
"""
import argparse
import sys
import uuid
from typing import Any, Dict, List, Optional

from weakbem import __version__
from weakbem.config.logging_config import get_logger, setup_logging
from weakbem.config.settings import get_settings
from weakbem.exceptions import ConfigurationError, WeakBemError
from weakbem.geometry.icosphere import build_icosphere, refinement_level_for_h
from weakbem.geometry.mesh import mesh_stats
from weakbem.geometry.mesh_io import read_mesh
from weakbem.models.enums import ExperimentKind
from weakbem.analytic.robin import robin_wavenumber_oracle
from weakbem.experiments.config import build_config, read_config_file
from weakbem.experiments.results_io import write_results
from weakbem.experiments.runner import convergence_summary, run_experiment

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 2

_EXPERIMENT_COMMANDS = {
    "solve": ExperimentKind.SOLVE,
    "sweep-k": ExperimentKind.SWEEP_K,
    "sweep-beta-real": ExperimentKind.SWEEP_BETA_REAL,
    "sweep-beta-imag": ExperimentKind.SWEEP_BETA_IMAG,
    "converge": ExperimentKind.CONVERGE,
}

# CLI destination -> ExperimentConfig field
_CONFIG_FLAGS = (
    "k", "k_min", "k_max", "k_step",
    "beta_re", "beta_im", "beta_scaling", "beta_min", "beta_max", "beta_count",
    "level", "h_target", "levels", "mesh",
    "space", "quad_order", "singular_order", "near_field_factor",
    "gmres_tol", "maxiter", "threads", "out", "dump_dir",
)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--log-level", type=str.upper, choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], default=None)
    parser.add_argument("--log-file", default=None, help="JSON log file name under ./tmp/")


def _add_mesh_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--level", type=int, default=None, help="Icosphere refinement level")
    group.add_argument("--h-target", type=float, default=None, help="Smallest level with h_max <= target")
    parser.add_argument("--mesh", default=None, help="Mesh file ('nv nt', vertices, triangles)")


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    _add_common(parser)
    _add_mesh_flags(parser)
    parser.add_argument("--config", default=None, help="'key = value' config file")
    parser.add_argument("--k", type=float, default=None, help="Wavenumber")
    parser.add_argument("--k-min", type=float, default=None)
    parser.add_argument("--k-max", type=float, default=None)
    parser.add_argument("--k-step", type=float, default=None)
    parser.add_argument("--beta-re", type=float, default=None, help="Re(beta_D), default 1")
    parser.add_argument("--beta-im", type=float, default=None, help="Im(beta_D), default -1")
    parser.add_argument("--beta-scaling", choices=["constant", "inverse_h"], default=None)
    parser.add_argument("--beta-min", type=float, default=None, help="Smallest |beta| of a beta sweep")
    parser.add_argument("--beta-max", type=float, default=None, help="Largest |beta| of a beta sweep")
    parser.add_argument("--beta-count", type=int, default=None, help="Logarithmic points of a beta sweep")
    parser.add_argument("--levels", default=None, help="Comma-separated levels of a convergence study")
    parser.add_argument("--space", default=None, help="u:p1,l:p1 or u:p1,l:dp0")
    parser.add_argument("--quad-order", type=int, default=None)
    parser.add_argument("--singular-order", type=int, default=None)
    parser.add_argument("--near-field-factor", type=float, default=None)
    parser.add_argument("--gmres-tol", type=float, default=None)
    parser.add_argument("--maxiter", type=int, default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--out", default=None, help="CSV path (stdout when omitted)")
    parser.add_argument("--dump-dir", default=None, help="Write V, K and W matrix dumps of a solve run here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakbem",
        description="Weak Dirichlet boundary element experiments for the exterior Helmholtz problem",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    for name in _EXPERIMENT_COMMANDS:
        _add_experiment_flags(commands.add_parser(name, help=f"Run the {name} experiment"))

    info = commands.add_parser("mesh-info", help="Print mesh statistics as JSON")
    _add_common(info)
    _add_mesh_flags(info)

    robin = commands.add_parser("robin", help="Print Robin wavenumbers of the unit ball for a real beta")
    _add_common(robin)
    robin.add_argument("--beta-re", type=float, default=1.0)
    robin.add_argument("--beta-im", type=float, default=0.0)
    robin.add_argument("--l-max", type=int, default=3)
    return parser


def _cli_values(args: argparse.Namespace) -> Dict[str, Any]:
    values = {name: getattr(args, name, None) for name in _CONFIG_FLAGS}
    values["space_lambda"] = values.pop("space")
    return {key: value for key, value in values.items() if value is not None}


def _run_experiment_command(args: argparse.Namespace) -> int:
    file_values = read_config_file(args.config) if args.config else {}
    config = build_config(_EXPERIMENT_COMMANDS[args.command], file_values, _cli_values(args))
    rows = run_experiment(config)

    summary: List[str] = []
    if config.experiment == ExperimentKind.CONVERGE:
        _, summary = convergence_summary(rows)
    write_results(rows, config.out if config.out is not None else sys.stdout, summary)

    failed = sum(not row.converged for row in rows)
    logger.info("Experiment finished", rows=len(rows), not_converged=failed)
    return EXIT_NOT_CONVERGED if failed else EXIT_OK


def _run_mesh_info(args: argparse.Namespace) -> int:
    try:
        if args.mesh:
            mesh = read_mesh(args.mesh)
        elif args.h_target is not None:
            mesh = build_icosphere(refinement_level_for_h(args.h_target))
        else:
            mesh = build_icosphere(args.level if args.level is not None else 0)
    except WeakBemError as e:
        raise ConfigurationError(str(e)) from e
    print(mesh_stats(mesh).model_dump_json())
    return EXIT_OK


def _run_robin(args: argparse.Namespace) -> int:
    beta = complex(args.beta_re, args.beta_im)
    print("l,k")
    for l in range(args.l_max + 1):
        root = robin_wavenumber_oracle(l, beta)
        print(f"{l},{'none' if root is None else format(root, '.12g')}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    setup_logging(log_level=args.log_level or settings.log_level, log_file=args.log_file or settings.log_file)

    try:
        if args.command == "mesh-info":
            return _run_mesh_info(args)
        if args.command == "robin":
            return _run_robin(args)
        return _run_experiment_command(args)
    except ConfigurationError as e:
        logger.error("Configuration error", error=str(e))
        return EXIT_CONFIG
    except Exception as e:
        error_id = str(uuid.uuid4())[:8]
        logger.error("Unhandled exception", error_id=error_id, error=str(e), exc_info=True)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
