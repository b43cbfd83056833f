"""
Exact arithmetic: rationals, factorials, binomials and Gamma at integer and
half-integer arguments.

Rationals are `fractions.Fraction` (always reduced, positive denominator).
Gamma at half-integers is kept symbolic as coefficient * sqrt(pi)**power so
that identities mixing Γ(x) and Γ(x + 1/2) can be checked with zero tolerance.
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Union

logger = logging.getLogger(__name__)

BigRational = Fraction

DEFAULT_FACTORIAL_CAP = 512

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def format_rational(value: Union[Fraction, int]) -> str:
    """Serialize as "numerator/denominator", e.g. "-3/7" or "5/1"."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse "num/den" (or a bare integer) into a reduced rational."""
    match = _RATIONAL_RE.match(text)
    if not match:
        raise ValueError(f"Malformed rational '{text}', expected num/den")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ValueError(f"Malformed rational '{text}': zero denominator")
    return Fraction(numerator, denominator)


class FactorialTable:
    """Factorials memoized up to `cap`; larger arguments are computed on demand."""

    def __init__(self, cap: int = DEFAULT_FACTORIAL_CAP):
        if cap < 1:
            raise ValueError(f"Factorial cache cap must be positive, got {cap}")
        self.cap = cap
        self._table: List[int] = [1]

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"Factorial of negative integer {n}")
        if n > self.cap:
            return math.factorial(n)
        while len(self._table) <= n:
            self._table.append(self._table[-1] * len(self._table))
        return self._table[n]


factorial = FactorialTable()


def set_factorial_cap(cap: int) -> None:
    """Replace the shared factorial table (configured from general.factorial_cache)."""
    global factorial
    factorial = FactorialTable(cap)
    logger.debug(f"Factorial cache cap set to {cap}")


def gamma_int(n: int) -> Fraction:
    """Γ(n) = (n-1)! for integer n >= 1."""
    if n <= 0:
        raise ValueError(f"Gamma has a pole at non-positive integer {n}")
    return Fraction(factorial(n - 1))


def binomial(n: int, k: int) -> Fraction:
    """C(n, k), zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError(f"binomial needs non-negative n, got {n}")
    if k < 0 or k > n:
        return Fraction(0)
    return Fraction(math.comb(n, k))


@dataclass(frozen=True)
class HalfIntGamma:
    """coefficient * sqrt(pi)**sqrt_pi_power, with sqrt_pi_power in {0, 1}."""

    coefficient: Fraction
    sqrt_pi_power: int = 0

    def __post_init__(self):
        if self.sqrt_pi_power not in (0, 1):
            raise ValueError(f"sqrt_pi_power must be 0 or 1, got {self.sqrt_pi_power}")
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))

    def __mul__(self, other: Union["HalfIntGamma", Fraction, int]) -> "HalfIntGamma":
        if isinstance(other, HalfIntGamma):
            power = self.sqrt_pi_power + other.sqrt_pi_power
            if power > 1:
                raise ValueError("Product carries a factor of pi, not representable as HalfIntGamma")
            return HalfIntGamma(self.coefficient * other.coefficient, power)
        return HalfIntGamma(self.coefficient * Fraction(other), self.sqrt_pi_power)

    __rmul__ = __mul__

    def divide_sqrt_pi(self) -> "HalfIntGamma":
        if self.sqrt_pi_power == 0:
            raise ValueError("No sqrt(pi) factor to divide out")
        return HalfIntGamma(self.coefficient, 0)

    def to_float(self) -> float:
        return float(self.coefficient) * math.sqrt(math.pi) ** self.sqrt_pi_power

    def to_dict(self) -> dict:
        return {"coeff": format_rational(self.coefficient), "sqrt_pi": self.sqrt_pi_power}


def gamma_half(m: int) -> HalfIntGamma:
    """Γ(m/2) for odd m >= 1, built up from Γ(1/2) = sqrt(pi) by Γ(x+1) = xΓ(x)."""
    if m < 1 or m % 2 == 0:
        raise ValueError(f"gamma_half needs a positive odd integer, got {m}")
    coefficient = Fraction(1)
    for j in range(1, m - 1, 2):
        coefficient *= Fraction(j, 2)
    return HalfIntGamma(coefficient, 1)


def gamma_at_half_multiple(k: int) -> HalfIntGamma:
    """Γ(k/2) for any integer k >= 1 in the symbolic representation."""
    if k < 1:
        raise ValueError(f"Gamma has a pole at {Fraction(k, 2)}")
    if k % 2 == 0:
        return HalfIntGamma(gamma_int(k // 2), 0)
    return gamma_half(k)


def check_duplication(x: Fraction):
    """Exact check of Γ(2x) = 2^(2x-1)/sqrt(pi) * Γ(x) Γ(x + 1/2) for half-integer x >= 1/2."""
    from .reports import exact_report

    x = Fraction(x)
    twice = 2 * x
    if twice.denominator != 1 or twice < 1:
        raise ValueError(f"check_duplication needs 2x a positive integer, got x={x}")
    k = int(twice)

    lhs = gamma_int(k)
    # exactly one of Γ(x), Γ(x+1/2) carries sqrt(pi); the prefactor removes it
    product = gamma_at_half_multiple(k) * gamma_at_half_multiple(k + 1)
    rhs = (Fraction(2) ** (k - 1) * product).divide_sqrt_pi().coefficient

    return exact_report(
        "DUPLICATION",
        {"x": x},
        lhs,
        rhs,
        details={
            "gamma_x": gamma_at_half_multiple(k).to_dict(),
            "gamma_x_plus_half": gamma_at_half_multiple(k + 1).to_dict(),
        },
    )
