"""Command-line front end.

    ssnmbounds bounds eval --N 5 --S 1 --x 2,0,0,0,0
    ssnmbounds risk mc --config run.json --estimator ht --n-trials 100000 --seed 3
    ssnmbounds figure fig1 --out fig1.csv
    ssnmbounds selftest

Results go to ``--out`` or standard output; logs go to standard error.
"""
import argparse
import logging
import sys

import numpy as np

from ssnmbounds import __version__
from ssnmbounds.config.logging_config import setup_logging
from ssnmbounds.config.run_config import RunConfig
from ssnmbounds.config.settings import Config
from ssnmbounds.errors import ConfigError, SSNMError, ValidationError
from ssnmbounds.estimators.factory import ESTIMATOR_KINDS, build_estimator
from ssnmbounds.experiments.evaluations import (bounds_eval, bounds_sweep, risk_ht_exact, risk_mc,
                                                risk_ml_exact)
from ssnmbounds.experiments.figures import FIG34_GRID_DB, FIGURE_KEYS, FIGURES
from ssnmbounds.experiments.selftest import run_selftest
from ssnmbounds.model.problem import ProblemConfig, validate_param

logger = logging.getLogger('ssnmbounds')

DEFAULT_MC_TRIALS = 100000
U64_MAX = 2 ** 64 - 1


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _seed(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2^64 - 1]")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _common_parser():
    """Flags accepted both before and after the subcommand."""
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    group = common.add_argument_group("global options")
    group.add_argument("--config", help="JSON run configuration (schema_version 1)")
    group.add_argument("--seed", type=_seed, help="Master seed, unsigned 64-bit")
    group.add_argument("--out", help="Output file; standard output if omitted")
    group.add_argument("--format", choices=("csv", "json"), help="Output format (default csv)")
    group.add_argument("--threads", type=_positive_int, help="Worker threads (default: available CPUs)")
    group.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING or ERROR")
    group.add_argument("--no-log-file", dest="no_log_file", action="store_true",
                       help="Log to standard error only")

    problem = common.add_argument_group("problem options")
    problem.add_argument("--N", dest="N", type=_positive_int, help="Dimension")
    problem.add_argument("--S", dest="S", type=_positive_int, help="Sparsity level")
    problem.add_argument("--sigma2", type=float, help="Noise variance")
    problem.add_argument("--x", type=_float_list,
                         help="Parameter vector, e.g. 2,0,0,0,0 (write --x=-1,0 when it starts negative)")
    problem.add_argument("--snr-db", dest="snr_grid_db", type=_float_list,
                         help="SNR grid in dB, e.g. --snr-db=-10,0,10")
    problem.add_argument("--snr-ratios", dest="snr_ratios", type=_float_list, help="xi^2/sigma^2 values (fig2)")
    problem.add_argument("--Q", dest="Q", type=int, help="Cells per dimension for BB'_c")
    problem.add_argument("--alpha", type=float, help="Offset of the extended HCRB test points")
    problem.add_argument("--t", dest="t", type=float, help="Step of the finite-t HCRB test points")
    problem.add_argument("--n-trials", dest="n_trials", type=int, help="Monte Carlo trials")
    problem.add_argument("--n-vectors", dest="n_vectors", type=int, help="Random parameters per ratio (fig2)")
    problem.add_argument("--threshold", type=float, help="Hard-thresholding level T")
    problem.add_argument("--estimator", choices=ESTIMATOR_KINDS,
                         help="Estimator kind; use --config for estimator parameters")
    problem.add_argument("--point-constraints-only", dest="point_constraints_only", action="store_true",
                         help="Drop the exact marginal rows from the BB'_c constraints")
    return common


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="ssnmbounds", parents=[common],
        description="Barankin-bound bounds and estimator risks for the sparse signal in noise model")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    bounds = commands.add_parser("bounds", help="Lower and upper bounds on the Barankin bound")
    bounds_sub = bounds.add_subparsers(dest="action", required=True)
    bounds_sub.add_parser("eval", parents=[common], help="All bounds at one parameter --x")
    bounds_sub.add_parser("sweep", parents=[common], help="Bounds along the ray through --x over --snr-db")

    risk = commands.add_parser("risk", help="Estimator risk")
    risk_sub = risk.add_subparsers(dest="action", required=True)
    risk_sub.add_parser("mc", parents=[common], help="Monte Carlo risk of --estimator at --x")
    risk_sub.add_parser("ml-exact", parents=[common], help="Exact ML risk by quadrature")
    risk_sub.add_parser("ht-exact", parents=[common], help="Exact hard-thresholding risk")

    figure = commands.add_parser("figure", parents=[common], help="Data behind one of the four figures")
    figure.add_argument("name", choices=sorted(FIGURES))

    commands.add_parser("selftest", parents=[common], help="Quick property checks")
    return parser


def load_run_config(args):
    """The --config file (if any) with every command-line flag laid over it."""
    run = RunConfig.from_file(args.config) if getattr(args, "config", None) else RunConfig()
    estimator = getattr(args, "estimator", None)
    if estimator and not (run.estimator and run.estimator.get("kind") == estimator):
        estimator = {"kind": estimator}
    else:
        estimator = None
    return run.override(
        N=getattr(args, "N", None),
        S=getattr(args, "S", None),
        sigma2=getattr(args, "sigma2", None),
        x=getattr(args, "x", None),
        snr_grid_db=getattr(args, "snr_grid_db", None),
        snr_ratios=getattr(args, "snr_ratios", None),
        Q=getattr(args, "Q", None),
        alpha=getattr(args, "alpha", None),
        t=getattr(args, "t", None),
        n_trials=getattr(args, "n_trials", None),
        n_vectors=getattr(args, "n_vectors", None),
        threshold=getattr(args, "threshold", None),
        estimator=estimator,
        seed=getattr(args, "seed", None),
        threads=getattr(args, "threads", None),
        exact_marginals=False if getattr(args, "point_constraints_only", False) else None,
    )


def _problem(run):
    """ProblemConfig and SparseParam from N, S, sigma2 and x. N defaults to len(x), S to ||x||_0."""
    if run.x is None:
        raise ConfigError("this command needs a parameter vector (--x or \"x\" in --config)")
    values = np.asarray(run.x, dtype=float)
    N = run.get("N", values.size)
    S = run.get("S", max(1, int(np.count_nonzero(values))))
    config = ProblemConfig(N=N, S=S, sigma2=run.get("sigma2", 1.0))
    return config, validate_param(values, config)


def _bounds(args, run, threads):
    config, x = _problem(run)
    kwargs = dict(quad=run.quadrature, Q=run.get("Q", 20), alpha=run.alpha, t=run.t,
                  exact_marginals=run.get("exact_marginals", True), seed=run.seed, threads=threads)
    if args.action == "eval":
        return bounds_eval(x, config, **kwargs)
    return bounds_sweep(x.values, config, run.get("snr_grid_db", FIG34_GRID_DB), **kwargs)


def _risk(args, run, threads):
    config, x = _problem(run)
    if args.action == "mc":
        est = build_estimator(run.get("estimator", {"kind": "ml"}), config, x=x, quad=run.quadrature)
        return risk_mc(est, x, config, run.get("n_trials", DEFAULT_MC_TRIALS), run.get("seed", 0), threads)
    if args.action == "ml-exact":
        return risk_ml_exact(x, config, run.quadrature, seed=run.seed, threads=threads)
    return risk_ht_exact(x, config, threshold=run.threshold, seed=run.seed, threads=threads)


def _figure(args, run, threads):
    kwargs = {key: getattr(run, key) for key in FIGURE_KEYS[args.name] if getattr(run, key) is not None}
    ignored = [key for key in ("x", "t", "n_trials", "estimator") if getattr(run, key) is not None]
    if ignored:
        logger.warning(f"figure {args.name} ignores {', '.join(ignored)}")
    return FIGURES[args.name](quad=run.quadrature, threads=threads, **kwargs)


def _selftest():
    results = run_selftest()
    for name, passed, message in results:
        print(f"{'PASS' if passed else 'FAIL'} {name}: {message}")
    failed = [name for name, passed, _ in results if not passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 0 if not failed else 1


def _emit(result, args):
    fmt = getattr(args, "format", "csv")
    out = getattr(args, "out", None)
    if out:
        result.write(out, fmt)
    else:
        sys.stdout.write(result.render(fmt))
        sys.stdout.flush()


def cli_main(argv=None):
    """
    Parse ``argv``, run one command and map failures to exit codes.

    Returns:
        int: 0 on success, 2 for invalid input, 3 for numerical failure.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    setup_logging(level=getattr(args, "log_level", None),
                  log_to_file=False if getattr(args, "no_log_file", False) else None)
    command = args.command if args.command in ("figure", "selftest") else f"{args.command} {args.action}"
    logger.info(f"ssnmbounds {__version__}: {command}")

    try:
        if args.command == "selftest":
            return _selftest()
        run = load_run_config(args)
        threads = run.get("threads", Config.DEFAULT_THREADS)
        if args.command == "bounds":
            result = _bounds(args, run, threads)
        elif args.command == "risk":
            result = _risk(args, run, threads)
        else:
            result = _figure(args, run, threads)
        _emit(result, args)
    except SSNMError as e:
        kind = "rejected its input" if isinstance(e, ValidationError) else "failed"
        logger.error(f"{command} {kind}: {e}")
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error(f"{command} could not write its output: {e}")
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
