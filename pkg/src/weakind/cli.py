"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 numerical non-convergence,
4 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .binomials import ResourceLimit
from .datafiles import ParseError, read_model, read_table_csv
from .exact_test import EmptyBasis, InvalidParams, RngSpec, mcmc_exact_test
from .fitting import Inconsistent, NoConvergence, fit_mle
from .markov_basis import NotApplicable, compute_basis, verify_connectivity
from .report import assemble, basis_section, fit_section, model_section, tests_section, write
from .suffstat import generators
from .table_model import ModelError, decompose

log = logging.getLogger("weakind")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOCONV = 3
EXIT_RESOURCE = 4


def _seed(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be a decimal integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakind",
        description="Weakened independence models for two-way contingency tables.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_arg(p):
        p.add_argument("--model", required=True, help="model JSON file (or name of a bundled one)")

    def table_arg(p):
        p.add_argument("--table", required=True, help="table CSV file (or name of a bundled one)")

    def json_arg(p):
        p.add_argument("--json", action="store_true", help="write the JSON report instead of text")

    def fit_args(p):
        p.add_argument("--tol", type=float, default=1e-10, help="Birch residual tolerance, relative to n")
        p.add_argument("--max-iter", type=_positive, default=100_000)

    def basis_args(p):
        p.add_argument("--degree-cap", type=_positive, default=20, help="largest binomial degree allowed")

    def exact_args(p, required):
        p.add_argument("--stat", choices=["c2", "g2"], default=None if required else "c2", required=required)
        p.add_argument("--samples", type=_positive, default=10_000)
        p.add_argument("--burnin", type=_nonneg, default=50_000)
        p.add_argument("--thin", type=_positive, default=50)
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--chains", type=_positive, default=1)

    def verify_args(p):
        p.add_argument("--verify", type=_nonneg, metavar="N", default=None,
                       help="check fiber connectivity for tables with total up to N")
        p.add_argument("--node-budget", type=_positive, default=10**6)
        p.add_argument("--verify-samples", type=_positive, default=200,
                       help="random fibers checked when exhaustive enumeration is too large")

    p = sub.add_parser("suffstat", help="decomposition, sufficient statistic and parametrization")
    model_arg(p)
    json_arg(p)

    p = sub.add_parser("basis", help="Markov basis of the model")
    model_arg(p)
    verify_args(p)
    basis_args(p)
    json_arg(p)

    p = sub.add_parser("fit", help="maximum-likelihood fit and asymptotic tests")
    model_arg(p)
    table_arg(p)
    fit_args(p)
    json_arg(p)

    p = sub.add_parser("exact", help="Monte Carlo exact goodness-of-fit test")
    model_arg(p)
    table_arg(p)
    exact_args(p, required=True)
    fit_args(p)
    basis_args(p)
    json_arg(p)

    p = sub.add_parser("report", help="everything above as one JSON document")
    model_arg(p)
    table_arg(p)
    exact_args(p, required=False)
    p.add_argument("--no-exact", action="store_true", help="skip the Monte Carlo test")
    verify_args(p)
    fit_args(p)
    basis_args(p)
    return parser


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("command", "verbose")}


def _run(args) -> int:
    model = read_model(args.model)
    decomp = decompose(model)
    a = generators(model, decomp)
    sections = {"model": model_section(model, decomp, a)}
    status = EXIT_OK
    as_json = getattr(args, "json", False) or args.command == "report"

    if args.command in ("basis", "exact", "report"):
        log.info("computing Markov basis")
        basis = compute_basis(a, degree_cap=args.degree_cap)
        verified = None
        n_max = getattr(args, "verify", None)
        if n_max is not None:
            log.info("verifying connectivity up to n = %d", n_max)
            verified = verify_connectivity(basis, a, n_max, node_budget=args.node_budget,
                                           samples=args.verify_samples)
        sections["basis"] = basis_section(basis, verified, n_max)

    if args.command in ("fit", "exact", "report"):
        h = read_table_csv(args.table)
        if h.shape != model.shape:
            raise ParseError(f"table is {h.shape} but the model is {model.shape}")
        fit = fit_mle(a, h, tol=args.tol, max_iter=args.max_iter)
        sections["fit"] = fit_section(h, fit, args.tol)
        exact = None
        if not fit.converged:
            status = EXIT_NOCONV
        elif args.command == "exact" or (args.command == "report" and not args.no_exact):
            log.info("running %d chain(s)", args.chains)
            exact = mcmc_exact_test(a, basis, h, args.stat, samples=args.samples, burn_in=args.burnin,
                                    thinning=args.thin, rng=RngSpec(args.seed), chains=args.chains, fit=fit)
        sections["tests"] = tests_section(h, fit, len(model), exact)

    report = assemble(args.command, _params(args), **sections)
    write(report, as_json)
    if status == EXIT_NOCONV:
        print(f"error: fit did not converge in {fit.iterations} cycles", file=sys.stderr)
    return status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except (ModelError, ParseError, FileNotFoundError, InvalidParams, NotApplicable, Inconsistent,
            EmptyBasis, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
