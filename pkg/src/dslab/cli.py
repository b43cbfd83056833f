"""
Command-line front end.

    dslab verify {integrals,laplace,gamma,walks,genfun,all}
    dslab pmf {S,T,bridge,negbin}
    dslab simulate {S,T,bridge}
    dslab series {G,T}

Exit status: 0 when every check passed, 1 when any failed, 2 on usage,
configuration or precondition errors. Reports go to -o PATH or standard
output; diagnostics go to standard error.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from . import __version__, exact_arith
from .config import load_config
from .errors import ConfigError, DslabError
from .exact_arith import parse_rational
from .genfun import series_for
from .montecarlo import SimConfig, simulate_and_check
from .reports import SweepSummary, VerificationReport, write_reports
from .suites import SUITES, run_suite
from .walks import WalkKind, WalkParams, bridge_first_passage, bridge_return_law, pmf_S, pmf_T, pmf_negative_binomial

logger = logging.getLogger(__name__)

GENERATOR = "dslab"
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


@dataclass
class RunManifest:
    command: str
    config_path: Optional[str]
    output_path: Optional[str]
    format: Optional[str]
    seed: Optional[int]
    threads: Optional[int]
    overrides: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def __post_init__(self):
        if self.format is not None and self.format not in ("json", "csv"):
            raise ValueError(f"Unknown output format '{self.format}', expected json or csv")

    @classmethod
    def from_args(cls, args: argparse.Namespace, argv: Sequence[str]) -> "RunManifest":
        overrides: Dict[str, Dict[str, Any]] = {
            "general": {"threads": args.threads, "seed": args.seed, "log_level": args.log_level},
            "montecarlo": {"seed": args.seed},
        }
        if args.command == "verify":
            overrides["gamma"] = {"mu_max": args.mu_max, "nu_max": args.nu_max, "r_max": args.r_max}
            overrides["genfun"] = {"order": args.order}
        return cls(
            command=" ".join(["dslab", *argv]),
            config_path=args.config,
            output_path=args.output,
            format=args.format,
            seed=args.seed,
            threads=args.threads,
            overrides=overrides,
        )

    def header(self, **extra: Any) -> Dict[str, Any]:
        return {
            "command": self.command,
            "generator": GENERATOR,
            "version": __version__,
            "config_path": self.config_path,
            **extra,
        }


def rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a rational 'num/den', got {text!r}") from e


def seed_arg(text: str) -> int:
    try:
        seed = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an unsigned 64-bit integer, got {text!r}") from e
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed {seed} is outside [0, 2^64)")
    return seed


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", default=None, help="Write the report here instead of standard output")
    common.add_argument("--format", choices=["json", "csv"], default=None, help="Output format")
    common.add_argument("--config", default=None, help="YAML or JSON config file with one section per suite")
    common.add_argument("--threads", type=int, default=None, help="Worker threads (falls back to DSLAB_THREADS)")
    common.add_argument("--seed", type=seed_arg, default=None, help="Seed for simulations")
    common.add_argument("--log-level", dest="log_level", default=None, help="Logging level")

    walk = argparse.ArgumentParser(add_help=False)
    walk.add_argument("--kind", type=WalkKind.parse, default=WalkKind.PLUS_MINUS, help="pm (±1 steps) or nd (0/1 steps)")
    walk.add_argument("--p", type=rational_arg, default=Fraction(1, 2), help="Up-step probability as num/den")

    parser = argparse.ArgumentParser(prog="dslab", description="Exact and numerical checks of walk and Bessel identities")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", parents=[common], help="Run verification suites")
    verify.add_argument("suite", choices=[*SUITES, "all"])
    verify.add_argument("--mu-max", dest="mu_max", type=int, default=None)
    verify.add_argument("--nu-max", dest="nu_max", type=int, default=None)
    verify.add_argument("--r-max", dest="r_max", type=int, default=None)
    verify.add_argument("--order", type=int, default=None, help="Generating-function series order")

    pmf = commands.add_parser("pmf", parents=[common, walk], help="Print an exact law")
    pmf.add_argument("law", choices=["S", "T", "bridge", "negbin"])
    pmf.add_argument("--n", type=int, default=None)
    pmf.add_argument("--a", type=int, default=None)
    pmf.add_argument("--mu", type=int, default=None)
    pmf.add_argument("--nu", type=int, default=0)
    pmf.add_argument("--r", type=int, default=None)
    pmf.add_argument("--horizon", type=int, default=None)

    simulate = commands.add_parser("simulate", parents=[common, walk], help="Simulate a law and test it against the exact one")
    simulate.add_argument("law", choices=["S", "T", "bridge"])
    simulate.add_argument("--n", type=int, default=None)
    simulate.add_argument("--a", type=int, default=None)
    simulate.add_argument("--r", type=int, default=None)
    simulate.add_argument("--samples", type=int, default=None)
    simulate.add_argument("--horizon", type=int, default=None)
    simulate.add_argument("--alpha", type=float, default=None, help="Chi-square significance level")

    series = commands.add_parser("series", parents=[common, walk], help="Dump a generating-function series")
    series.add_argument("law", choices=["G", "T"])
    series.add_argument("--index", type=int, required=True, help="Level j for G, a for T")
    series.add_argument("--order", type=int, default=None)

    return parser.parse_args(argv)


def _require(value: Optional[int], flag: str, law: str) -> int:
    if value is None:
        raise ValueError(f"{law} needs --{flag}")
    return value


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args: argparse.Namespace, manifest: RunManifest, config: Dict[str, Dict[str, Any]]) -> int:
    threads = config["general"]["threads"]
    results = run_suite(args.suite, config, threads)

    reports: List[VerificationReport] = []
    summaries = []
    for suite, suite_reports in results.items():
        reports += suite_reports
        summaries.append(SweepSummary.from_reports(suite, suite_reports))

    text = write_reports(reports, None, manifest.format, manifest.header(suite=args.suite), summaries)
    _emit(text, manifest.output_path)
    failures = sum(s.failures for s in summaries)
    logger.info(f"verify {args.suite}: {len(reports)} checks, {failures} failures")
    return EXIT_OK if failures == 0 else EXIT_FAILED


def cmd_pmf(args: argparse.Namespace, manifest: RunManifest, config: Dict[str, Dict[str, Any]]) -> int:
    params = WalkParams(args.p, args.kind)
    if args.law == "S":
        law = pmf_S(params, _require(args.n, "n", "pmf S"))
    elif args.law == "T":
        a = _require(args.a, "a", "pmf T")
        horizon = args.horizon if args.horizon is not None else config["walks"]["n_max"]
        law = pmf_T(params, a, horizon)
    elif args.law == "bridge":
        mu, r = _require(args.mu, "mu", "pmf bridge"), _require(args.r, "r", "pmf bridge")
        law = bridge_return_law(params, r) if (mu, args.nu) == (1, 0) else bridge_first_passage(params, mu, args.nu, r)
    else:
        mu = _require(args.mu, "mu", "pmf negbin")
        law = pmf_negative_binomial(mu, params.p, _require(args.horizon, "horizon", "pmf negbin"))

    if manifest.format == "csv":
        text = law.to_frame().to_csv(index=False)
    else:
        text = json.dumps(law.to_dict(), indent=2) + "\n"
    _emit(text, manifest.output_path)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, manifest: RunManifest, config: Dict[str, Dict[str, Any]]) -> int:
    section = config["montecarlo"]
    horizon = args.horizon if args.horizon is not None else section["horizon"]
    cfg = SimConfig(
        seed=section["seed"] if section["seed"] is not None else config["general"]["seed"],
        samples=args.samples if args.samples is not None else section["samples"],
        horizon=horizon,
        params=WalkParams(args.p, args.kind),
        chunk_size=section["chunk_size"],
        threads=config["general"]["threads"],
    )
    alpha = args.alpha if args.alpha is not None else section["alpha_level"]

    if args.law == "S":
        emp, reports = simulate_and_check(cfg, "S", alpha, n=_require(args.n, "n", "simulate S"))
    elif args.law == "T":
        emp, reports = simulate_and_check(cfg, "T", alpha, a=_require(args.a, "a", "simulate T"))
    else:
        r = args.r if args.r is not None else section["bridge_r"]
        emp, reports = simulate_and_check(cfg, "bridge", alpha, r=r)

    summary = SweepSummary.from_reports(f"simulate-{args.law}", reports)
    header = manifest.header(suite=f"simulate-{args.law}", seed=cfg.seed, rng=cfg.rng_header(),
                             empirical=emp.to_dict())
    _emit(write_reports(reports, None, manifest.format, header, [summary]), manifest.output_path)
    return EXIT_OK if summary.passed else EXIT_FAILED


def cmd_series(args: argparse.Namespace, manifest: RunManifest, config: Dict[str, Dict[str, Any]]) -> int:
    order = args.order if args.order is not None else config["genfun"]["order"]
    series = series_for(WalkParams(args.p, args.kind), args.law, args.index, order)
    _emit(series.dumps(), manifest.output_path)
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "pmf": cmd_pmf, "simulate": cmd_simulate, "series": cmd_series}


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    logging.basicConfig(
        level=(args.log_level or "INFO").upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()],
    )

    try:
        manifest = RunManifest.from_args(args, argv)
        config = load_config(manifest.config_path, manifest.overrides)
        if manifest.format is None:
            manifest.format = config["general"]["format"]
        if args.log_level is None:
            logging.getLogger().setLevel(str(config["general"]["log_level"]).upper())
        exact_arith.set_factorial_cap(config["general"]["factorial_cache"])
        return COMMANDS[args.command](args, manifest, config)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_USAGE
    except (ValueError, DslabError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_USAGE


def main():
    """Main entry point for the package."""
    sys.exit(run())
