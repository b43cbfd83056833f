"""
Floating-point Bessel functions of the first kind.

J_mu(x) is summed from its power series using the term ratio
    t_{n+1} / t_n = -(x/2)^2 / ((n+1)(n+mu+1))
so no factorial or Gamma is evaluated per term. The alternating tail is
bounded by the first omitted term once the terms are monotonically decreasing.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import ArgumentOutOfRange, QuadratureError
from .exact_arith import gamma_at_half_multiple
from .reports import VerificationReport

logger = logging.getLogger(__name__)

ARGUMENT_CAP = 200.0
TERM_CAP = 400
DEFAULT_TOL = 1e-14
EXACT_GAMMA_CAP = 340
# largest x with a finite double Γ(x)
GAMMA_FLOAT_MAX = 171.6243769563027


@dataclass(frozen=True)
class BesselEval:
    order: float
    argument: float
    value: float
    terms_used: int
    truncation_bound: float
    rounding_bound: float = 0.0


def gamma_value(x: float) -> float:
    """Γ(x) as a float; exact symbolic route when 2x is a positive integer."""
    if x > GAMMA_FLOAT_MAX:
        raise ArgumentOutOfRange(f"Γ({x}) overflows a double; x must be at most {GAMMA_FLOAT_MAX}")
    if x <= 0 and x == math.floor(x):
        raise ArgumentOutOfRange(f"Γ has a pole at {x}")
    twice = 2.0 * x
    if 0 < twice <= EXACT_GAMMA_CAP and twice == int(twice):
        return gamma_at_half_multiple(int(twice)).to_float()
    return float(special.gamma(x))


def bessel_j(mu: float, x: float, tol: float = DEFAULT_TOL,
             argument_cap: float = ARGUMENT_CAP, term_cap: int = TERM_CAP) -> BesselEval:
    """J_mu(x) by truncated power series with |error| <= truncation_bound <= tol.

    Orders in (-1, 0) are accepted for x > 0 since the series is valid there.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if x < 0:
        raise ValueError(f"bessel_j needs x >= 0, got {x}")
    if mu <= -1:
        raise ValueError(f"bessel_j needs order > -1, got {mu}")
    if x > argument_cap:
        raise ArgumentOutOfRange(f"Argument {x} exceeds the series cap {argument_cap}")

    if x == 0:
        if mu == 0:
            return BesselEval(mu, x, 1.0, 1, 0.0)
        if mu > 0:
            return BesselEval(mu, x, 0.0, 1, 0.0)
        raise ArgumentOutOfRange(f"J_{mu}(0) is infinite for negative order")

    half_sq = (x / 2.0) ** 2
    term = (x / 2.0) ** mu / gamma_value(mu + 1.0)
    total = term
    magnitude = abs(term)
    n = 0
    while True:
        ratio = half_sq / ((n + 1) * (n + mu + 1))
        next_term = -term * ratio
        # stop only once the terms are decreasing, so the next term bounds the tail
        if ratio < 1.0 and abs(next_term) < tol:
            rounding = np.finfo(float).eps * (magnitude + abs(total))
            return BesselEval(mu, x, total, n + 1, abs(next_term), rounding)
        n += 1
        if n >= term_cap:
            raise ArgumentOutOfRange(
                f"J_{mu}({x}) did not converge within {term_cap} terms at tol {tol}"
            )
        term = next_term
        total += term
        magnitude += abs(term)


def bessel_j_value(mu: float, x: float, tol: float = DEFAULT_TOL) -> float:
    return bessel_j(mu, x, tol).value


def bessel_j_integral_form(mu: int, x: float, epsabs: float = 1e-13, epsrel: float = 1e-12,
                           limit: int = 200) -> float:
    """J_mu(x) for integer mu as (1/pi) * int_0^pi cos(x sin(t) - mu t) dt."""
    if int(mu) != mu or mu < 0:
        raise ValueError(f"The integral representation is used for non-negative integer order, got {mu}")
    if x < 0:
        raise ValueError(f"bessel_j_integral_form needs x >= 0, got {x}")

    def integrand(theta: float) -> float:
        return math.cos(x * math.sin(theta) - mu * theta)

    result = integrate.quad(integrand, 0.0, math.pi, epsabs=epsabs, epsrel=epsrel,
                            limit=limit, full_output=1)
    if len(result) == 4:
        raise QuadratureError(f"Integral form of J_{mu}({x}) did not meet tolerance: {result[3]}")
    return result[0] / math.pi


def _scaled(mu: float, x: float, tol: float) -> float:
    """x^mu J_mu(x)."""
    return x ** mu * bessel_j(mu, x, tol).value


def derivative_residuals(mu: float, x: float, h: float = 1e-3, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Central-difference residuals of d/dx (x^mu J_mu(x)) = x^mu J_{mu-1}(x) at steps h and h/2."""
    if x - h <= 0:
        raise ValueError(f"Finite-difference step {h} too large for x={x}")
    exact_derivative = x ** mu * bessel_j(mu - 1, x, tol).value
    residuals = []
    for step in (h, h / 2.0):
        fd = (_scaled(mu, x + step, tol) - _scaled(mu, x - step, tol)) / (2.0 * step)
        residuals.append(abs(fd - exact_derivative))
    return residuals[0], residuals[1]


def check_recurrences(mu: float, x: float, h: float = 1e-3, tol: float = DEFAULT_TOL,
                      rel_tol: float = 1e-9) -> VerificationReport:
    """Three-term recurrence and derivative identity at unit frequency.

    (i)  J_mu(x) = 2(mu-1)/x J_{mu-1}(x) - J_{mu-2}(x)
    (ii) d/dx (x^mu J_mu(x)) = x^mu J_{mu-1}(x), by central differences at h
         and h/2; the residual ratio must be near 4 (second order).
    """
    if x <= 0:
        raise ValueError(f"check_recurrences needs x > 0, got {x}")
    if mu < 2:
        raise ValueError(f"check_recurrences needs mu >= 2, got {mu}")

    lhs = bessel_j(mu, x, tol).value
    rhs = 2.0 * (mu - 1.0) / x * bessel_j(mu - 1, x, tol).value - bessel_j(mu - 2, x, tol).value
    residual = abs(lhs - rhs)
    tolerance = rel_tol * max(abs(lhs), abs(rhs)) + 1e-13
    recurrence_ok = residual <= tolerance

    fd_h, fd_h2 = derivative_residuals(mu, x, h, tol)
    ratio = fd_h / fd_h2 if fd_h2 > 0 else None
    # halving h divides a second-order error by about four
    derivative_ok = fd_h < 1e-11 or (ratio is not None and 3.0 <= ratio <= 5.0)

    if not recurrence_ok or not derivative_ok:
        logger.warning(f"Recurrence check failed at mu={mu}, x={x}: residual={residual}, fd_ratio={ratio}")

    return VerificationReport(
        identity_id="BESSEL_RECURRENCES",
        params={"mu": mu, "x": x, "h": h},
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        tolerance=tolerance,
        passed=recurrence_ok and derivative_ok,
        method="series",
        details={
            "recurrence_pass": recurrence_ok,
            "derivative_pass": derivative_ok,
            "fd_residual_h": fd_h,
            "fd_residual_h2": fd_h2,
            "fd_ratio": ratio,
        },
    )
