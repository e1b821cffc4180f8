"""
qdeform command line.

    qdeform grid --dist wigner --n 1 --h 0.6 --format csv --out w1.csv
    qdeform moments --n 2 --h 1.6 --oracle
    qdeform spectrum --n 5 --q 0.5
    qdeform verify --suite trace

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 internal consistency failure.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, List, Optional, TextIO

from src.cli import APP_VERSION_LABEL
from src.cli.grid import DISTRIBUTIONS, FORM_CHOICES, GridSpec, evaluate_grid
from src.cli.verify import SUITES, run_suites
from src.core.errors import DomainError, InternalConsistencyError, QDeformError
from src.oscillator.model import ModelParams, QuantumState, energy
from src.phasespace.moments import mean_momentum, mean_position
from src.quadrature.oracles import MomentKind, moment_oracle
from src.utils.config import ConfigManager

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _format(value: float) -> str:
    # 12 significant digits; -0 prints as 0
    return f"{value + 0.0:.12g}"


def _params_from_args(args, config: ConfigManager) -> ModelParams:
    units = config.get_units()
    m = args.m if args.m is not None else units.get("m", 1.0)
    omega = args.omega if args.omega is not None else units.get("omega", 1.0)
    hbar = args.hbar if args.hbar is not None else units.get("hbar", 1.0)
    if args.q is not None:
        return ModelParams.from_q(args.q, m, omega, hbar)
    return ModelParams(m, omega, hbar, args.h if args.h is not None else 0.0)


def _open_output(path: Optional[str]) -> TextIO:
    if path is None:
        return sys.stdout
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True)
    return open(target, "w", encoding="utf-8", newline="")


# ============================================================================
# Commands
# ============================================================================

def cmd_grid(args, config: ConfigManager) -> int:
    """Evaluate a distribution over a grid and write CSV or JSON"""
    params = _params_from_args(args, config)
    grid = config.get_grid()
    spec = GridSpec(
        args.pmin if args.pmin is not None else grid["pmin"],
        args.pmax if args.pmax is not None else grid["pmax"],
        args.xmin if args.xmin is not None else grid["xmin"],
        args.xmax if args.xmax is not None else grid["xmax"],
        args.np if args.np is not None else grid["np"],
        args.nx if args.nx is not None else grid["nx"],
    )
    workers = args.workers if args.workers is not None else config.get_workers()
    if workers < 1:
        raise DomainError(f"--workers must be at least 1, got {workers}")
    output = evaluate_grid(spec, QuantumState(args.n), params, dist=args.dist, form=args.form, workers=workers)

    fmt = args.format or config.get_output_format()
    text = output.to_json() if fmt == "json" else output.to_csv()
    stream = _open_output(args.out)
    try:
        stream.write(text)
    finally:
        if stream is not sys.stdout:
            stream.close()
    if args.out:
        log.info(f"Wrote {spec.n_p * spec.n_x} values to {args.out}")
    return EXIT_OK


def cmd_moments(args, config: ConfigManager) -> int:
    """Print closed-form averages and energy, optionally with quadrature checks"""
    params = _params_from_args(args, config)
    state = QuantumState(args.n)
    x_mean = mean_position(state, params)
    p_mean = mean_momentum(state, params)
    print(f"x_mean = {_format(x_mean)}")
    print(f"p_mean = {_format(p_mean)}")
    print(f"E = {_format(energy(state, params).value)}")
    if args.oracle:
        for label, kind, closed in (("x_mean", MomentKind.X, x_mean), ("p_mean", MomentKind.P, p_mean),
                                    ("norm", MomentKind.NORM, 1.0)):
            value = moment_oracle(state, params, kind)
            print(f"{label}_oracle = {_format(value)} deviation = {abs(value - closed):.3e}")
    return EXIT_OK


def cmd_spectrum(args, config: ConfigManager) -> int:
    """Print E_{n,q} next to the classical hbar omega (n + 1/2) for levels 0..n"""
    params = _params_from_args(args, config)
    quantum = params.hbar * params.omega
    print("n,E,E_classical")
    for level in range(QuantumState(args.n).n + 1):
        print(f"{level},{_format(energy(level, params).value)},{_format(quantum * (level + 0.5))}")
    return EXIT_OK


def cmd_verify(args, config: ConfigManager) -> int:
    """Run verification suites; exit 1 when any check fails"""
    names = args.suite or config.get_verify_suites()
    try:
        results = run_suites(names)
    except KeyError as e:
        raise DomainError(e.args[0]) from None
    failed = [r for r in results if not r.passed]
    if failed:
        log.error(f"{len(failed)} of {len(results)} checks failed")
        return EXIT_VERIFY_FAILED
    return EXIT_OK


# ============================================================================
# Parser
# ============================================================================

def _model_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--n", type=int, default=0, help="Photon number (default: 0)")
    deformation = parent.add_mutually_exclusive_group()
    deformation.add_argument("--h", type=float, default=None, help="Deformation step h >= 0 (default: 0)")
    deformation.add_argument("--q", type=float, default=None, help="Deformation q in (0, 1], h = sqrt(-ln q / lambda)")
    parent.add_argument("--m", type=float, default=None, help="Mass (default: config or 1)")
    parent.add_argument("--omega", type=float, default=None, help="Frequency (default: config or 1)")
    parent.add_argument("--hbar", type=float, default=None, help="Reduced Planck constant (default: config or 1)")
    _logging_options(parent)
    return parent


def _logging_options(parser: argparse.ArgumentParser):
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="Warnings and errors only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdeform",
        description="Wigner and Husimi distributions of the q-deformed harmonic oscillator",
    )
    parser.add_argument("--version", action="version", version=APP_VERSION_LABEL)
    subparsers = parser.add_subparsers(dest="command", required=True)
    model = _model_options()

    grid = subparsers.add_parser("grid", parents=[model], help="Evaluate a distribution on a grid")
    grid.add_argument("--dist", choices=DISTRIBUTIONS, default="wigner", help="Distribution (default: wigner)")
    grid.add_argument("--form", choices=FORM_CHOICES, default="dsum",
                      help="Closed form, integral oracle, or all closed forms (default: dsum)")
    for name in ("pmin", "pmax", "xmin", "xmax"):
        grid.add_argument(f"--{name}", type=float, default=None, help=f"Grid {name} (default: config or +-6)")
    grid.add_argument("--np", type=int, default=None, help="Points along p (default: config or 200)")
    grid.add_argument("--nx", type=int, default=None, help="Points along x (default: config or 200)")
    grid.add_argument("--format", choices=("csv", "json"), default=None, help="Output format (default: config or csv)")
    grid.add_argument("--out", default=None, help="Output path (default: standard output)")
    grid.add_argument("--workers", type=int, default=None, help="Threads evaluating grid rows (default: config or 1)")
    grid.set_defaults(handler=cmd_grid, parser=grid)

    moments = subparsers.add_parser("moments", parents=[model], help="Print averages and energy")
    moments.add_argument("--oracle", action="store_true", help="Also integrate the moments by quadrature")
    moments.set_defaults(handler=cmd_moments, parser=moments)

    spectrum = subparsers.add_parser("spectrum", parents=[model], help="Print energy levels 0..n")
    spectrum.set_defaults(handler=cmd_spectrum, parser=spectrum)

    verify = subparsers.add_parser("verify", help="Run the verification suites")
    verify.add_argument("--suite", action="append", choices=list(SUITES), default=None,
                        help="Suite to run; repeatable (default: config or all)")
    _logging_options(verify)
    verify.set_defaults(handler=cmd_verify, parser=verify)
    return parser


def _configure_logging(args):
    level = logging.INFO
    if getattr(args, "verbose", False):
        level = logging.DEBUG
    elif getattr(args, "quiet", False):
        level = logging.WARNING
    logging.getLogger().setLevel(level)


def run(argv: Optional[List[str]] = None, config: Optional[ConfigManager] = None) -> int:
    """Parse argv, dispatch the command and map errors to exit codes"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    _configure_logging(args)
    config = config or ConfigManager()
    handler: Callable = args.handler
    try:
        return handler(args, config)
    except InternalConsistencyError as e:
        log.error(f"Internal consistency failure: {e}")
        return EXIT_INTERNAL
    except DomainError as e:
        args.parser.print_usage(sys.stderr)
        print(f"{args.parser.prog}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except QDeformError as e:
        log.error(f"{type(e).__name__}: {e}")
        return EXIT_INTERNAL
