"""
Quadrature checks of the Bessel convolution integrals and the Laplace
transforms of J_nu against their closed forms.

Integrands are evaluated with scipy.special.jv; closed-form sides use the
series in dslab.bessel and the exact Gamma representations, so the two sides
share no code path.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from scipy import integrate, special

from .bessel import bessel_j_value, gamma_value
from .errors import DslabError, QuadratureError, TruncationTooShort
from .exact_arith import gamma_at_half_multiple
from .reports import SweepSummary, VerificationReport, stopwatch

logger = logging.getLogger(__name__)

CONVOLUTION_GRID_ORDERS = (0.5, 1.0, 2.0, 3.5)
CONVOLUTION_GRID_ARGUMENTS = (0.5, 1.0, 2.0, 5.0)
LAPLACE_GRID_ORDERS = (0.5, 1.0, 2.0, 3.0)
LAPLACE_GRID_RATES = (0.5, 1.0, 2.0)

# Laplace integrals are cut no earlier than this many e-folds of exp(-alpha x)
LAPLACE_EFOLDS = 40.0


class IdentityId(str, Enum):
    CONV_16_38 = "CONV_16_38"
    CONV_16_39 = "CONV_16_39"
    CONV_16_40A = "CONV_16_40A"
    CONV_16_40B = "CONV_16_40B"
    LAP_19_45 = "LAP_19_45"
    LAP_19_46 = "LAP_19_46"
    LAP_19_47 = "LAP_19_47"
    LAP_19_47A = "LAP_19_47A"

    @property
    def is_convolution(self) -> bool:
        return self.value.startswith("CONV")


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 500
    laplace_truncation: float = 100.0
    bessel_tol: float = 1e-14

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError(f"Tolerances must be positive, got rel_tol={self.rel_tol}, abs_tol={self.abs_tol}")
        if self.max_subdivisions < 1:
            raise ValueError(f"max_subdivisions must be at least 1, got {self.max_subdivisions}")
        if self.laplace_truncation <= 0:
            raise ValueError(f"laplace_truncation must be positive, got {self.laplace_truncation}")

    @classmethod
    def from_config(cls, section: Dict[str, Any]) -> "QuadratureConfig":
        return cls(
            rel_tol=float(section.get("rel_tol", cls.rel_tol)),
            abs_tol=float(section.get("abs_tol", cls.abs_tol)),
            max_subdivisions=int(section.get("max_subdivisions", cls.max_subdivisions)),
            laplace_truncation=float(section.get("laplace_truncation", cls.laplace_truncation)),
            bessel_tol=float(section.get("bessel_tol", cls.bessel_tol)),
        )


@dataclass(frozen=True)
class IntegralCase:
    """One parameter point. `nu` is ignored by Laplace cases, `beta` by convolutions."""

    identity_id: IdentityId
    mu: float
    a_or_alpha: float
    nu: Optional[float] = None
    beta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "identity_id", IdentityId(self.identity_id))
        if self.mu <= 0:
            raise ValueError(f"{self.identity_id.value} needs mu > 0, got {self.mu}")
        if self.a_or_alpha <= 0:
            raise ValueError(f"{self.identity_id.value} needs a positive a/alpha, got {self.a_or_alpha}")
        if self.identity_id.is_convolution:
            if self.nu is None or self.nu <= 0:
                raise ValueError(f"{self.identity_id.value} needs nu > 0, got {self.nu}")
        elif self.beta is None or self.beta <= 0:
            raise ValueError(f"{self.identity_id.value} needs beta > 0, got {self.beta}")

    def params(self) -> Dict[str, Any]:
        if self.identity_id.is_convolution:
            return {"mu": self.mu, "nu": self.nu, "a": self.a_or_alpha}
        return {"nu": self.mu, "alpha": self.a_or_alpha, "beta": self.beta}


@dataclass
class QuadratureResult:
    value: float
    abserr: float
    subdivisions: int


def _gamma_over_sqrt_pi(x: float) -> float:
    """Γ(x)/sqrt(pi), exact until the final conversion when x is a half-odd integer."""
    twice = 2.0 * x
    if 0 < twice <= 339 and twice == int(twice) and int(twice) % 2 == 1:
        return float(gamma_at_half_multiple(int(twice)).divide_sqrt_pi().coefficient)
    return gamma_value(x) / math.sqrt(math.pi)


def _quad(func: Callable[[float], float], lo: float, hi: float, cfg: QuadratureConfig) -> QuadratureResult:
    """scipy QUADPACK (qags) with subdivision accounting."""
    result = integrate.quad(
        func, lo, hi,
        epsabs=cfg.abs_tol * 0.1,
        epsrel=cfg.rel_tol * 1e-2,
        limit=cfg.max_subdivisions,
        full_output=1,
    )
    value, abserr, info = result[0], result[1], result[2]
    if len(result) > 3:
        message = str(result[3])
        if "maximum number of subdivisions" in message:
            raise QuadratureError(f"Subdivision limit {cfg.max_subdivisions} reached on [{lo}, {hi}]")
        logger.warning(f"Quadrature on [{lo}, {hi}] flagged: {message.splitlines()[0]}")
    return QuadratureResult(value, abserr, int(info.get("last", 0)))


def _endpoint_integral(func: Callable[[float], float], endpoint: float, length: float, exponent: float,
                       direction: int, cfg: QuadratureConfig) -> QuadratureResult:
    """Integrate func over [endpoint, endpoint + direction*length].

    func behaves like |x - endpoint|**exponent at the endpoint. A negative
    exponent is removed by x = endpoint + direction * t**(1/(exponent+1)),
    which leaves a bounded integrand in t.
    """
    if exponent >= 0:
        lo, hi = sorted((endpoint, endpoint + direction * length))
        return _quad(func, lo, hi, cfg)

    lam = exponent + 1.0
    if lam <= 0:
        raise ValueError(f"Endpoint exponent {exponent} is not integrable")
    power = 1.0 / lam

    def transformed(t: float) -> float:
        x = endpoint + direction * t ** power
        return func(x) * power * t ** (power - 1.0)

    return _quad(transformed, 0.0, length ** lam, cfg)


# integrand with its leading exponents at x = 0 and x = a
def _convolution_integrand(case: IntegralCase) -> Tuple[Callable[[float], float], float, float]:
    mu, nu, a = case.mu, case.nu, case.a_or_alpha
    ident = case.identity_id

    if ident is IdentityId.CONV_16_38:
        return (lambda x: special.jv(mu, x) * special.jv(nu, a - x) / x), mu - 1.0, nu
    if ident is IdentityId.CONV_16_39:
        return (lambda x: special.jv(mu, x) * special.jv(nu, a - x) / (x * (a - x))), mu - 1.0, nu - 1.0
    if ident is IdentityId.CONV_16_40A:
        return (lambda x: x ** mu * (a - x) ** nu * special.jv(mu, x) * special.jv(nu, a - x)), 2 * mu, 2 * nu
    if ident is IdentityId.CONV_16_40B:
        return (lambda x: x ** mu * (a - x) ** nu * special.jv(mu - 1.0, x) * special.jv(nu, a - x)), 2 * mu - 1.0, 2 * nu
    raise ValueError(f"{ident.value} is not a convolution identity")


def convolution_rhs(case: IntegralCase, bessel_tol: float = 1e-14) -> float:
    mu, nu, a = case.mu, case.nu, case.a_or_alpha
    ident = case.identity_id

    if ident is IdentityId.CONV_16_38:
        return bessel_j_value(mu + nu, a, bessel_tol) / mu
    if ident is IdentityId.CONV_16_39:
        return (1.0 / mu + 1.0 / nu) * bessel_j_value(mu + nu, a, bessel_tol) / a

    prefactor = (
        _gamma_over_sqrt_pi(mu + 0.5) * _gamma_over_sqrt_pi(nu + 0.5) * math.sqrt(math.pi)
        / (math.sqrt(2.0) * gamma_value(mu + nu + 1.0))
    )
    scale = a ** (mu + nu + 0.5)
    if ident is IdentityId.CONV_16_40A:
        return prefactor * scale * bessel_j_value(mu + nu + 0.5, a, bessel_tol)
    if ident is IdentityId.CONV_16_40B:
        return prefactor * scale * bessel_j_value(mu + nu - 0.5, a, bessel_tol)
    raise ValueError(f"{ident.value} is not a convolution identity")


def convolution_lhs(case: IntegralCase, cfg: QuadratureConfig) -> QuadratureResult:
    """LHS integral over [0, a], split at a/2 so each half sees one endpoint singularity."""
    func, left_exponent, right_exponent = _convolution_integrand(case)
    half = case.a_or_alpha / 2.0
    left = _endpoint_integral(func, 0.0, half, left_exponent, +1, cfg)
    right = _endpoint_integral(func, case.a_or_alpha, half, right_exponent, -1, cfg)
    return QuadratureResult(
        value=left.value + right.value,
        abserr=left.abserr + right.abserr,
        subdivisions=left.subdivisions + right.subdivisions,
    )


def verify_convolution(case: IntegralCase, cfg: QuadratureConfig) -> VerificationReport:
    if not case.identity_id.is_convolution:
        raise ValueError(f"verify_convolution got Laplace identity {case.identity_id.value}")

    with stopwatch() as timing:
        lhs = convolution_lhs(case, cfg)
        rhs = convolution_rhs(case, cfg.bessel_tol)

    residual = abs(lhs.value - rhs)
    tolerance = cfg.rel_tol * abs(rhs) + cfg.abs_tol
    return VerificationReport(
        identity_id=case.identity_id.value,
        params=case.params(),
        lhs=lhs.value,
        rhs=rhs,
        residual=residual,
        tolerance=tolerance,
        passed=residual <= tolerance,
        method="quadrature",
        subdivisions=lhs.subdivisions,
        runtime_ms=timing["runtime_ms"],
        details={
            "quadrature_abserr": lhs.abserr,
            "relative_residual": residual / abs(rhs) if rhs else None,
        },
    )


# Laplace integrands are e^{-alpha x} x**power J_order(beta x)
def _laplace_shape(case: IntegralCase) -> Tuple[float, float]:
    nu = case.mu
    ident = case.identity_id
    if ident is IdentityId.LAP_19_45:
        return nu, 0.0
    if ident is IdentityId.LAP_19_46:
        return nu, -1.0
    if ident is IdentityId.LAP_19_47:
        return nu, nu
    if ident is IdentityId.LAP_19_47A:
        return nu - 1.0, nu
    raise ValueError(f"{ident.value} is not a Laplace identity")


def laplace_rhs(case: IntegralCase) -> float:
    nu, alpha, beta = case.mu, case.a_or_alpha, case.beta
    radius = math.hypot(alpha, beta)
    # radius - alpha without cancellation at large alpha
    gap = beta * beta / (radius + alpha)
    ident = case.identity_id

    if ident is IdentityId.LAP_19_45:
        return gap ** nu / (beta ** nu * radius)
    if ident is IdentityId.LAP_19_46:
        return gap ** nu / (nu * beta ** nu)

    shared = 2.0 ** nu * _gamma_over_sqrt_pi(nu + 0.5) / radius ** (2.0 * nu + 1.0)
    if ident is IdentityId.LAP_19_47:
        return shared * beta ** nu
    if ident is IdentityId.LAP_19_47A:
        return shared * alpha * beta ** (nu - 1.0)
    raise ValueError(f"{ident.value} is not a Laplace identity")


def laplace_cutoff(alpha: float, cfg: QuadratureConfig) -> float:
    return max(LAPLACE_EFOLDS / alpha, cfg.laplace_truncation)


def laplace_tail_bound(case: IntegralCase, cutoff: float) -> float:
    """Bound on |int_T^inf e^{-alpha x} x**k J_order(beta x) dx|.

    |J_order| <= 1 for order >= 0; for order in (-1, 0) the bound
    sqrt(2/(pi beta T)) holds beyond the cutoff (the half-order case is exact).
    """
    order, power = _laplace_shape(case)
    alpha, beta = case.a_or_alpha, case.beta
    envelope = 1.0 if order >= 0 else math.sqrt(2.0 / (math.pi * beta * cutoff))

    z = alpha * cutoff
    if power == -1.0:
        moment = float(special.exp1(z))
    else:
        k = power + 1.0
        moment = float(special.gamma(k) * special.gammaincc(k, z)) / alpha ** k
    return envelope * moment


def laplace_lhs(case: IntegralCase, cfg: QuadratureConfig, cutoff: Optional[float] = None) -> QuadratureResult:
    order, power = _laplace_shape(case)
    alpha, beta = case.a_or_alpha, case.beta
    cutoff = cutoff if cutoff is not None else laplace_cutoff(alpha, cfg)

    def integrand(x: float) -> float:
        return math.exp(-alpha * x) * x ** power * special.jv(order, beta * x)

    # leading behaviour at 0 is x**(power + order)
    exponent = power + order
    split = min(1.0, cutoff / 2.0)
    head = _endpoint_integral(integrand, 0.0, split, exponent, +1, cfg)
    body = _quad(integrand, split, cutoff, cfg)
    return QuadratureResult(
        value=head.value + body.value,
        abserr=head.abserr + body.abserr,
        subdivisions=head.subdivisions + body.subdivisions,
    )


def verify_laplace(case: IntegralCase, cfg: QuadratureConfig) -> VerificationReport:
    if case.identity_id.is_convolution:
        raise ValueError(f"verify_laplace got convolution identity {case.identity_id.value}")

    with stopwatch() as timing:
        cutoff = laplace_cutoff(case.a_or_alpha, cfg)
        tail = laplace_tail_bound(case, cutoff)
        if tail > cfg.abs_tol:
            raise TruncationTooShort(
                f"{case.identity_id.value} tail bound {tail:.3e} beyond T={cutoff} exceeds abs_tol {cfg.abs_tol}"
            )
        lhs = laplace_lhs(case, cfg, cutoff)
        rhs = laplace_rhs(case)

    residual = abs(lhs.value - rhs)
    tolerance = cfg.rel_tol * abs(rhs) + cfg.abs_tol + tail
    return VerificationReport(
        identity_id=case.identity_id.value,
        params=case.params(),
        lhs=lhs.value,
        rhs=rhs,
        residual=residual,
        tolerance=tolerance,
        passed=residual <= tolerance,
        method="quadrature",
        subdivisions=lhs.subdivisions,
        runtime_ms=timing["runtime_ms"],
        details={
            "truncation": cutoff,
            "tail_bound": tail,
            "quadrature_abserr": lhs.abserr,
            "relative_residual": residual / abs(rhs) if rhs else None,
        },
    )


def verify_case(case: IntegralCase, cfg: QuadratureConfig) -> VerificationReport:
    """Dispatch one case; failures become reports instead of exceptions."""
    try:
        if case.identity_id.is_convolution:
            return verify_convolution(case, cfg)
        return verify_laplace(case, cfg)
    except (DslabError, ValueError, ArithmeticError) as e:
        logger.warning(f"{case.identity_id.value} {case.params()} raised: {e}")
        return VerificationReport.failure(case.identity_id.value, case.params(), "quadrature", e)


def sweep(grid: Sequence[IntegralCase], cfg: QuadratureConfig, threads: int = 1,
          suite: str = "integrals") -> List[VerificationReport]:
    """Verify every case, in grid order; per-case errors are reported, not raised."""
    if not grid:
        raise ValueError("sweep needs a non-empty grid")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda c: verify_case(c, cfg), grid))
    else:
        reports = [verify_case(case, cfg) for case in grid]

    SweepSummary.from_reports(suite, reports).log()
    return reports


def default_convolution_grid() -> List[IntegralCase]:
    grid = []
    for ident in (IdentityId.CONV_16_38, IdentityId.CONV_16_39, IdentityId.CONV_16_40A, IdentityId.CONV_16_40B):
        for mu in CONVOLUTION_GRID_ORDERS:
            for nu in CONVOLUTION_GRID_ORDERS:
                for a in CONVOLUTION_GRID_ARGUMENTS:
                    grid.append(IntegralCase(ident, mu=mu, nu=nu, a_or_alpha=a))
    return grid


def default_laplace_grid() -> List[IntegralCase]:
    grid = []
    for ident in (IdentityId.LAP_19_45, IdentityId.LAP_19_46, IdentityId.LAP_19_47, IdentityId.LAP_19_47A):
        for nu in LAPLACE_GRID_ORDERS:
            for alpha in LAPLACE_GRID_RATES:
                for beta in LAPLACE_GRID_RATES:
                    grid.append(IntegralCase(ident, mu=nu, a_or_alpha=alpha, beta=beta))
    return grid


def check_semigroup_ratio(mu: float, nu: float, a: float, cfg: QuadratureConfig,
                          rel_tol: float = 1e-7) -> VerificationReport:
    """The two x^mu (a-x)^nu convolutions differ only in the final Bessel order.

    Their quadrature ratio must equal J_{mu+nu+1/2}(a) / J_{mu+nu-1/2}(a).
    """
    denominator = bessel_j_value(mu + nu - 0.5, a, cfg.bessel_tol)
    if abs(denominator) < 1e-6:
        raise ValueError(f"J_{mu + nu - 0.5}({a}) is too close to a zero for a ratio check")

    with stopwatch() as timing:
        upper = convolution_lhs(IntegralCase(IdentityId.CONV_16_40A, mu=mu, nu=nu, a_or_alpha=a), cfg)
        lower = convolution_lhs(IntegralCase(IdentityId.CONV_16_40B, mu=mu, nu=nu, a_or_alpha=a), cfg)

    lhs = upper.value / lower.value
    rhs = bessel_j_value(mu + nu + 0.5, a, cfg.bessel_tol) / denominator
    residual = abs(lhs - rhs)
    tolerance = rel_tol * abs(rhs) + cfg.abs_tol
    return VerificationReport(
        identity_id="SEMIGROUP_RATIO",
        params={"mu": mu, "nu": nu, "a": a},
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        tolerance=tolerance,
        passed=residual <= tolerance,
        method="quadrature",
        subdivisions=upper.subdivisions + lower.subdivisions,
        runtime_ms=timing["runtime_ms"],
    )


def check_laplace_consistency(nu: float, alpha0: float, beta: float, cfg: QuadratureConfig,
                              rel_tol: float = 1e-6) -> VerificationReport:
    """Integrating the plain transform of J_nu(beta x) over alpha in [alpha0, inf)
    must give the transform of J_nu(beta x)/x at alpha0."""
    plain = IntegralCase(IdentityId.LAP_19_45, mu=nu, a_or_alpha=alpha0, beta=beta)
    divided = IntegralCase(IdentityId.LAP_19_46, mu=nu, a_or_alpha=alpha0, beta=beta)

    def transform(alpha: float) -> float:
        return laplace_rhs(replace(plain, a_or_alpha=alpha))

    with stopwatch() as timing:
        result = _quad(transform, alpha0, math.inf, cfg)

    rhs = laplace_rhs(divided)
    residual = abs(result.value - rhs)
    tolerance = rel_tol * abs(rhs)
    return VerificationReport(
        identity_id="LAPLACE_CONSISTENCY",
        params={"nu": nu, "alpha0": alpha0, "beta": beta},
        lhs=result.value,
        rhs=rhs,
        residual=residual,
        tolerance=tolerance,
        passed=residual <= tolerance,
        method="quadrature",
        subdivisions=result.subdivisions,
        runtime_ms=timing["runtime_ms"],
    )
