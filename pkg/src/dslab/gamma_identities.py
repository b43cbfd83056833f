"""
Exact checks of the Gamma-function sum identities over integer parameters.

For positive integers mu, nu and r >= 0:

  EQ_S   sum_k Γ(2k+μ)/(k!Γ(k+μ+1)) Γ(2r-2k+ν)/((r-k)!Γ(r-k+ν))   = (1/μ) Γ(2r+μ+ν)/(r!Γ(r+μ+ν))
  EQ_D   sum_k Γ(2k+μ)/(k!Γ(k+μ+1)) Γ(2r-2k+ν)/((r-k)!Γ(r-k+ν+1)) = (1/μ+1/ν) Γ(2r+μ+ν)/(r!Γ(r+μ+ν+1))
  EQ_B   sum_k Γ(k+μ)/k! Γ(r-k+ν)/(r-k)!                           = Γ(μ)Γ(ν)/Γ(μ+ν) Γ(r+μ+ν)/r!
  EQ_BINOM        sum_k C(k+μ-1, μ-1) C(r-k+ν-1, ν-1) = C(r+μ+ν-1, μ+ν-1)
  EQ_PASCAL_CONV  sum_{k=μ}^{n-ν} C(k-1, μ-1) C(n-k, ν) = C(n, μ+ν),  n = r+μ+ν

Every side is evaluated in exact rationals; the residual must be exactly zero.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import List

from . import exact_arith
from .exact_arith import binomial, gamma_int
from .reports import SweepSummary, VerificationReport, exact_report, stopwatch

logger = logging.getLogger(__name__)


class GammaIdentity(str, Enum):
    EQ_S = "EQ_S"
    EQ_D = "EQ_D"
    EQ_B = "EQ_B"
    EQ_BINOM = "EQ_BINOM"
    EQ_PASCAL_CONV = "EQ_PASCAL_CONV"


@dataclass(frozen=True)
class IdentityInstance:
    identity_id: GammaIdentity
    mu: int
    nu: int
    r: int

    def __post_init__(self):
        object.__setattr__(self, "identity_id", GammaIdentity(self.identity_id))
        if self.mu < 1 or self.nu < 1:
            raise ValueError(f"{self.identity_id.value} needs mu, nu >= 1, got mu={self.mu}, nu={self.nu}")
        if self.r < 0:
            raise ValueError(f"{self.identity_id.value} needs r >= 0, got r={self.r}")

    def params(self) -> dict:
        return {"mu": self.mu, "nu": self.nu, "r": self.r}


# Summand factors, shared with the random-walk universality check

@lru_cache(maxsize=None)
def first_passage_factor(mu: int, k: int) -> Fraction:
    """Γ(2k+μ)/(k! Γ(k+μ+1))."""
    return gamma_int(2 * k + mu) / (exact_arith.factorial(k) * gamma_int(k + mu + 1))


@lru_cache(maxsize=None)
def occupation_factor(nu: int, m: int) -> Fraction:
    """Γ(2m+ν)/(m! Γ(m+ν))."""
    return gamma_int(2 * m + nu) / (exact_arith.factorial(m) * gamma_int(m + nu))


@lru_cache(maxsize=None)
def second_passage_factor(nu: int, m: int) -> Fraction:
    """Γ(2m+ν)/(m! Γ(m+ν+1))."""
    return gamma_int(2 * m + nu) / (exact_arith.factorial(m) * gamma_int(m + nu + 1))


def s_terms(mu: int, nu: int, r: int) -> List[Fraction]:
    return [first_passage_factor(mu, k) * occupation_factor(nu, r - k) for k in range(r + 1)]


def s_rhs(mu: int, nu: int, r: int) -> Fraction:
    return Fraction(1, mu) * gamma_int(2 * r + mu + nu) / (exact_arith.factorial(r) * gamma_int(r + mu + nu))


def d_terms(mu: int, nu: int, r: int) -> List[Fraction]:
    return [first_passage_factor(mu, k) * second_passage_factor(nu, r - k) for k in range(r + 1)]


def d_rhs(mu: int, nu: int, r: int) -> Fraction:
    return (
        (Fraction(1, mu) + Fraction(1, nu))
        * gamma_int(2 * r + mu + nu)
        / (exact_arith.factorial(r) * gamma_int(r + mu + nu + 1))
    )


def b_terms(mu: int, nu: int, r: int) -> List[Fraction]:
    # Γ(k+μ)/k! is an integer for integer μ
    return [
        Fraction(exact_arith.factorial(k + mu - 1) // exact_arith.factorial(k)
                 * (exact_arith.factorial(r - k + nu - 1) // exact_arith.factorial(r - k)))
        for k in range(r + 1)
    ]


def b_rhs(mu: int, nu: int, r: int) -> Fraction:
    return gamma_int(mu) * gamma_int(nu) / gamma_int(mu + nu) * gamma_int(r + mu + nu) / exact_arith.factorial(r)


def binom_terms(mu: int, nu: int, r: int) -> List[Fraction]:
    return [binomial(k + mu - 1, mu - 1) * binomial(r - k + nu - 1, nu - 1) for k in range(r + 1)]


def binom_rhs(mu: int, nu: int, r: int) -> Fraction:
    return binomial(r + mu + nu - 1, mu + nu - 1)


def pascal_terms(mu: int, nu: int, r: int) -> List[Fraction]:
    n = r + mu + nu
    return [binomial(k - 1, mu - 1) * binomial(n - k, nu) for k in range(mu, n - nu + 1)]


def pascal_rhs(mu: int, nu: int, r: int) -> Fraction:
    return binomial(r + mu + nu, mu + nu)


_SIDES = {
    GammaIdentity.EQ_S: (s_terms, s_rhs),
    GammaIdentity.EQ_D: (d_terms, d_rhs),
    GammaIdentity.EQ_B: (b_terms, b_rhs),
    GammaIdentity.EQ_BINOM: (binom_terms, binom_rhs),
    GammaIdentity.EQ_PASCAL_CONV: (pascal_terms, pascal_rhs),
}


def check_identity(inst: IdentityInstance) -> VerificationReport:
    terms_fn, rhs_fn = _SIDES[inst.identity_id]
    with stopwatch() as timing:
        terms = terms_fn(inst.mu, inst.nu, inst.r)
        lhs = sum(terms, Fraction(0))
        rhs = rhs_fn(inst.mu, inst.nu, inst.r)
    report = exact_report(inst.identity_id.value, inst.params(), lhs, rhs, details={"terms": len(terms)})
    report.runtime_ms = timing["runtime_ms"]
    return report


def conditional_masses(mu: int, nu: int, r: int) -> List[Fraction]:
    """p_k = C(r,k) C(r+μ+ν, k+μ) / C(2r+μ+ν, 2k+μ) * μ/(2k+μ), k = 0..r."""
    if mu < 1:
        raise ValueError(f"conditional_masses needs mu >= 1, got {mu}")
    if nu < 0 or r < 0:
        raise ValueError(f"conditional_masses needs nu, r >= 0, got nu={nu}, r={r}")
    return [
        binomial(r, k) * binomial(r + mu + nu, k + mu) / binomial(2 * r + mu + nu, 2 * k + mu)
        * Fraction(mu, 2 * k + mu)
        for k in range(r + 1)
    ]


def check_conditional_normalization(mu: int, nu: int, r: int) -> VerificationReport:
    masses = conditional_masses(mu, nu, r)
    total = sum(masses, Fraction(0))
    nonnegative = all(m >= 0 for m in masses)
    report = exact_report(
        "CONDITIONAL_NORMALIZATION",
        {"mu": mu, "nu": nu, "r": r},
        total,
        Fraction(1),
        details={"support": len(masses), "nonnegative": nonnegative},
    )
    report.passed = report.passed and nonnegative
    return report


def check_b_symmetry(mu: int, nu: int, r: int) -> VerificationReport:
    """Swapping μ and ν keeps the right side and reverses the summands."""
    forward = b_terms(mu, nu, r)
    swapped = b_terms(nu, mu, r)
    reversed_ok = forward == swapped[::-1]
    report = exact_report(
        "EQ_B_SYMMETRY",
        {"mu": mu, "nu": nu, "r": r},
        b_rhs(mu, nu, r),
        b_rhs(nu, mu, r),
        details={"summands_reversed": reversed_ok},
    )
    report.passed = report.passed and reversed_ok
    return report


def check_binomial_rewrite(mu: int, nu: int, r: int) -> VerificationReport:
    """EQ_B divided by (μ-1)!(ν-1)! is EQ_BINOM, summand by summand."""
    scale = gamma_int(mu) * gamma_int(nu)
    rescaled = [term / scale for term in b_terms(mu, nu, r)]
    termwise = rescaled == binom_terms(mu, nu, r)
    report = exact_report(
        "EQ_B_BINOM_REWRITE",
        {"mu": mu, "nu": nu, "r": r},
        b_rhs(mu, nu, r) / scale,
        binom_rhs(mu, nu, r),
        details={"summands_match": termwise},
    )
    report.passed = report.passed and termwise
    return report


def _sweep_mu(mu: int, nu_max: int, r_max: int) -> List[VerificationReport]:
    reports = []
    for nu in range(1, nu_max + 1):
        for r in range(r_max + 1):
            for ident in GammaIdentity:
                reports.append(check_identity(IdentityInstance(ident, mu, nu, r)))
    return reports


def identity_sweep(mu_max: int, nu_max: int, r_max: int, workers: int = 1) -> List[VerificationReport]:
    """All five identities on mu in [1, mu_max], nu in [1, nu_max], r in [0, r_max]."""
    if mu_max < 1 or nu_max < 1:
        raise ValueError(f"identity_sweep needs mu_max, nu_max >= 1, got {mu_max}, {nu_max}")
    if r_max < 0:
        raise ValueError(f"identity_sweep needs r_max >= 0, got {r_max}")

    mus = list(range(1, mu_max + 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_mu, mus, [nu_max] * len(mus), [r_max] * len(mus)))
    else:
        chunks = [_sweep_mu(mu, nu_max, r_max) for mu in mus]

    reports = [report for chunk in chunks for report in chunk]
    SweepSummary.from_reports("gamma", reports).log()
    return reports


def normalization_sweep(mu_max: int, nu_max: int, r_max: int) -> List[VerificationReport]:
    reports = [
        check_conditional_normalization(mu, nu, r)
        for mu in range(1, mu_max + 1)
        for nu in range(0, nu_max + 1)
        for r in range(r_max + 1)
    ]
    SweepSummary.from_reports("gamma-conditional", reports).log()
    return reports
