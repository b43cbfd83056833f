"""
Verification suites driven by the configuration sections.

Each runner returns the list of reports for its suite; per-case errors are
turned into failed reports so one bad case never stops a sweep.
"""

import logging
from fractions import Fraction
from typing import Any, Callable, Dict, List

from . import bessel, exact_arith, gamma_identities, genfun, integral_verify, walks
from .errors import DslabError
from .exact_arith import parse_rational
from .integral_verify import QuadratureConfig
from .reports import SweepSummary, VerificationReport
from .walks import WalkKind, WalkParams

logger = logging.getLogger(__name__)

Config = Dict[str, Dict[str, Any]]

BESSEL_RECURRENCE_ORDERS = (2.0, 2.5, 3.0, 4.5)
BESSEL_RECURRENCE_ARGUMENTS = (0.5, 1.0, 2.0, 5.0, 10.0)
SEMIGROUP_ORDERS = (0.5, 1.0, 2.0)
SEMIGROUP_ARGUMENTS = (0.5, 1.0, 2.0)
DUPLICATION_MAX_K = 40
CONDITIONAL_GRID_MAX = 8
UNIVERSALITY_R_MAX = 8
COROLLARY_R_MAX = 8


def _guarded(identity_id: str, params: Dict[str, Any], method: str,
             check: Callable[[], Any]) -> List[VerificationReport]:
    """Run one check; an exception becomes a failed report."""
    try:
        result = check()
    except (DslabError, ValueError, ArithmeticError) as e:
        logger.warning(f"{identity_id} {params} raised: {e}")
        return [VerificationReport.failure(identity_id, params, method, e)]
    return result if isinstance(result, list) else [result]


def p_values(config: Config) -> List[Fraction]:
    return [parse_rational(str(p)) for p in config["walks"]["p_values"]]


def run_integrals(config: Config, threads: int = 1) -> List[VerificationReport]:
    cfg = QuadratureConfig.from_config(config["integrals"])
    reports = integral_verify.sweep(integral_verify.default_convolution_grid(), cfg, threads, suite="integrals")

    for mu in SEMIGROUP_ORDERS:
        for nu in SEMIGROUP_ORDERS:
            for a in SEMIGROUP_ARGUMENTS:
                reports += _guarded("SEMIGROUP_RATIO", {"mu": mu, "nu": nu, "a": a}, "quadrature",
                                    lambda: integral_verify.check_semigroup_ratio(mu, nu, a, cfg))

    for mu in BESSEL_RECURRENCE_ORDERS:
        for x in BESSEL_RECURRENCE_ARGUMENTS:
            reports += _guarded("BESSEL_RECURRENCES", {"mu": mu, "x": x}, "series",
                                lambda: bessel.check_recurrences(mu, x, tol=cfg.bessel_tol))
    return reports


def run_laplace(config: Config, threads: int = 1) -> List[VerificationReport]:
    cfg = QuadratureConfig.from_config(config["integrals"])
    reports = integral_verify.sweep(integral_verify.default_laplace_grid(), cfg, threads, suite="laplace")

    for nu in integral_verify.LAPLACE_GRID_ORDERS:
        for beta in integral_verify.LAPLACE_GRID_RATES:
            alpha0 = integral_verify.LAPLACE_GRID_RATES[0]
            reports += _guarded("LAPLACE_CONSISTENCY", {"nu": nu, "alpha0": alpha0, "beta": beta}, "quadrature",
                                lambda: integral_verify.check_laplace_consistency(nu, alpha0, beta, cfg))
    return reports


def run_gamma(config: Config, threads: int = 1) -> List[VerificationReport]:
    section = config["gamma"]
    mu_max, nu_max, r_max = section["mu_max"], section["nu_max"], section["r_max"]
    reports = gamma_identities.identity_sweep(mu_max, nu_max, r_max, workers=threads)

    small = min(CONDITIONAL_GRID_MAX, mu_max, nu_max, r_max)
    reports += gamma_identities.normalization_sweep(max(small, 1), small, small)
    for mu in range(1, max(small, 1) + 1):
        for nu in range(1, max(small, 1) + 1):
            for r in range(small + 1):
                reports.append(gamma_identities.check_b_symmetry(mu, nu, r))
                reports.append(gamma_identities.check_binomial_rewrite(mu, nu, r))

    reports += [exact_arith.check_duplication(Fraction(k, 2)) for k in range(1, DUPLICATION_MAX_K + 1)]
    return reports


def _walk_params(config: Config) -> List[WalkParams]:
    return [WalkParams(p, kind) for p in p_values(config) for kind in WalkKind]


def run_walks(config: Config, threads: int = 1) -> List[VerificationReport]:
    section = config["walks"]
    a_max, n_max = section["a_max"], section["n_max"]
    reports: List[VerificationReport] = []

    for params in _walk_params(config):
        base = params.to_dict()
        for a in range(1, a_max + 1):
            for b in range(0, a_max + 1):
                for n in range(max(a + b, 1), n_max + 1):
                    reports += _guarded("DARLING_SIEGERT", {**base, "a": a, "b": b, "n": n}, "exact",
                                        lambda: walks.check_darling_siegert(params, a, b, n))
                    if params.kind is WalkKind.PLUS_MINUS:
                        reports += _guarded("DARLING_SIEGERT", {**base, "a": -a, "b": -b, "n": n}, "exact",
                                            lambda: walks.check_darling_siegert(params, -a, -b, n))
                    if b >= 1 and n >= a + b:
                        reports += _guarded("DS_EQUIVALENCE", {**base, "a": a, "b": b, "n": n}, "exact",
                                            lambda: walks.check_ds_equivalence(params, a, b, n))

        for mu in range(1, a_max + 1):
            for nu in range(0, a_max + 1):
                for r in range(COROLLARY_R_MAX + 1):
                    reports += _guarded("DS_COROLLARY", {**base, "mu": mu, "nu": nu, "r": r}, "exact",
                                        lambda: walks.check_ds_corollaries(params, mu, nu, r))

        for n in range(1, section["oracle_n_max"] + 1):
            reports += _guarded("ENUMERATION_ORACLE", {**base, "n": n}, "enumeration",
                                lambda: walks.check_oracle(params, n))

        if params.kind is WalkKind.PLUS_MINUS:
            reports += _plus_minus_checks(params, section)
        else:
            for mu in range(1, a_max + 1):
                for nu in range(1, a_max + 1):
                    reports.append(walks.check_negative_binomial_additivity(mu, nu, params.p, n_max))

    reports += _bridge_independence(config)
    SweepSummary.from_reports("walks", reports).log()
    return reports


def _plus_minus_checks(params: WalkParams, section: Dict[str, Any]) -> List[VerificationReport]:
    base = params.to_dict()
    reports: List[VerificationReport] = []
    for j in range(1, section["a_max"] + 1):
        for n in range(j, section["n_max"] + 1, 2):
            reports.append(walks.check_reflection(params, j, n))

    for mu in range(1, section["a_max"] + 1):
        for nu in range(1, section["a_max"] + 1):
            for r in range(UNIVERSALITY_R_MAX + 1):
                reports.append(walks.check_universality(params, mu, nu, r))

    for r in range(1, section["bridge_r_max"] + 1):
        reports += _guarded("BRIDGE_MIRROR", {**base, "r": r}, "exact", lambda: walks.check_bridge_mirror(params, r))

    # the symmetric walk's tail decays like n^(-1/2), far too slowly for the horizon
    if params.p != Fraction(1, 2):
        reports += _guarded("HITTING_PARTIAL_SUM", {**base, "a": 1}, "exact",
                            lambda: walks.check_hitting_partial_sum(params, 1, section["hitting_horizon"]))
    return reports


def _bridge_independence(config: Config) -> List[VerificationReport]:
    section = config["walks"]
    values = p_values(config)
    reports: List[VerificationReport] = []
    first = WalkParams(values[0])
    for other in values[1:]:
        second = WalkParams(other)
        for mu in range(1, 3):
            for nu in range(0, 3):
                for r in range(section["bridge_r_max"] + 1):
                    params = {"p": first.p, "p_other": second.p, "mu": mu, "nu": nu, "r": r}
                    reports += _guarded("BRIDGE_P_INDEPENDENCE", params, "exact",
                                        lambda: walks.check_bridge_p_independence(first, second, mu, nu, r))
    return reports


def run_genfun(config: Config, threads: int = 1) -> List[VerificationReport]:
    section = config["genfun"]
    return genfun.genfun_sweep(p_values(config), section["index_max"], section["order"])


SUITES: Dict[str, Callable[[Config, int], List[VerificationReport]]] = {
    "integrals": run_integrals,
    "laplace": run_laplace,
    "gamma": run_gamma,
    "walks": run_walks,
    "genfun": run_genfun,
}


def run_suite(name: str, config: Config, threads: int = 1) -> Dict[str, List[VerificationReport]]:
    """Reports per suite name; 'all' runs every suite in declaration order."""
    names = list(SUITES) if name == "all" else [name]
    results = {}
    for suite in names:
        if suite not in SUITES:
            raise ValueError(f"Unknown suite '{suite}', expected one of {sorted(SUITES) + ['all']}")
        logger.info(f"Running suite {suite}")
        results[suite] = SUITES[suite](config, threads)
    return results
