"""
Truncated formal power series over exact rationals, and the walk generating
functions built from them.

A series of order N holds the coefficients of ξ^0..ξ^N; every operation is
exact modulo ξ^(N+1).
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from .errors import InconsistencyError
from .exact_arith import binomial, format_rational
from .reports import SweepSummary, VerificationReport
from .walks import WalkKind, WalkParams, hitting_probability, prob_S, prob_T

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, int]


@dataclass(frozen=True)
class TruncatedSeries:
    coefficients: tuple
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError(f"Series order must be non-negative, got {self.order}")
        coeffs = [Fraction(c) for c in self.coefficients][: self.order + 1]
        coeffs += [Fraction(0)] * (self.order + 1 - len(coeffs))
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def constant(cls, value: Scalar, order: int) -> "TruncatedSeries":
        return cls((value,), order)

    @classmethod
    def monomial(cls, value: Scalar, power: int, order: int) -> "TruncatedSeries":
        coeffs = [Fraction(0)] * (order + 1)
        if power <= order:
            coeffs[power] = Fraction(value)
        return cls(tuple(coeffs), order)

    def __getitem__(self, n: int) -> Fraction:
        if 0 <= n <= self.order:
            return self.coefficients[n]
        return Fraction(0)

    def _common(self, other: "TruncatedSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other: Union["TruncatedSeries", Scalar]) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.order)
        order = self._common(other)
        return TruncatedSeries(tuple(self[n] + other[n] for n in range(order + 1)), order)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-c for c in self.coefficients), self.order)

    def __sub__(self, other: Union["TruncatedSeries", Scalar]) -> "TruncatedSeries":
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other: Union["TruncatedSeries", Scalar]) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            factor = Fraction(other)
            return TruncatedSeries(tuple(c * factor for c in self.coefficients), self.order)
        order = self._common(other)
        left = [c for c in self.coefficients[: order + 1]]
        right = [c for c in other.coefficients[: order + 1]]
        product = [Fraction(0)] * (order + 1)
        for i, a in enumerate(left):
            if not a:
                continue
            for j in range(order + 1 - i):
                if right[j]:
                    product[i + j] += a * right[j]
        return TruncatedSeries(tuple(product), order)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "TruncatedSeries":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = TruncatedSeries.constant(1, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "TruncatedSeries":
        """1/f for f with a non-zero constant term."""
        a0 = self.coefficients[0]
        if a0 == 0:
            raise ZeroDivisionError("Series with zero constant term has no inverse")
        inv = [Fraction(1) / a0]
        for n in range(1, self.order + 1):
            acc = sum((self.coefficients[k] * inv[n - k] for k in range(1, n + 1)), Fraction(0))
            inv.append(-acc / a0)
        return TruncatedSeries(tuple(inv), self.order)

    def sqrt(self) -> "TruncatedSeries":
        """Square root of a series with constant term 1, by Newton iteration y <- (y + f/y)/2."""
        if self.coefficients[0] != 1:
            raise ValueError(f"sqrt needs constant term 1, got {self.coefficients[0]}")
        root = TruncatedSeries.constant(1, self.order)
        correct = 1
        while correct <= self.order:
            root = (root + self * root.inverse()) * Fraction(1, 2)
            correct *= 2
        return root

    def shift_down(self, k: int) -> "TruncatedSeries":
        """Divide by ξ^k; the coefficients below ξ^k must be exactly zero."""
        if k < 0 or k > self.order:
            raise ValueError(f"Cannot divide an order-{self.order} series by ξ^{k}")
        for n in range(k):
            if self.coefficients[n] != 0:
                raise InconsistencyError(
                    f"Division by ξ^{k} leaves a remainder: coefficient of ξ^{n} is {self.coefficients[n]}"
                )
        return TruncatedSeries(self.coefficients[k:], self.order - k)

    def shift_up(self, k: int) -> "TruncatedSeries":
        """Multiply by ξ^k, keeping the order."""
        if k < 0:
            raise ValueError(f"shift_up needs k >= 0, got {k}")
        return TruncatedSeries((Fraction(0),) * k + self.coefficients, self.order)

    def substitute_square(self) -> "TruncatedSeries":
        """f(ξ^2), keeping the order."""
        coeffs = [Fraction(0)] * (self.order + 1)
        for n, c in enumerate(self.coefficients):
            if 2 * n > self.order:
                break
            coeffs[2 * n] = c
        return TruncatedSeries(tuple(coeffs), self.order)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coefficients, min(order, self.order))

    def partial_sum(self) -> Fraction:
        """Value of the truncated polynomial at ξ = 1."""
        return sum(self.coefficients, Fraction(0))

    def to_dict(self) -> Dict[str, Any]:
        return {"order": self.order, "coefficients": [format_rational(c) for c in self.coefficients]}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


@lru_cache(maxsize=256)
def sqrt_one_minus(c: Scalar, N: int) -> TruncatedSeries:
    """(1 - c ξ^2)^(1/2) by Newton iteration, checked against
    1 - 2 sum_n (1/n) C(2n-2, n-1) (c/4)^n ξ^(2n)."""
    if N < 0:
        raise ValueError(f"Series order must be non-negative, got {N}")
    c = Fraction(c)
    base = TruncatedSeries((1, 0, -c), N)
    root = base.sqrt()

    quarter = c / 4
    for n in range(1, N // 2 + 1):
        explicit = -2 * Fraction(1, n) * binomial(2 * n - 2, n - 1) * quarter ** n
        if root[2 * n] != explicit:
            raise InconsistencyError(f"sqrt(1 - {c} ξ^2): Newton coefficient of ξ^{2 * n} disagrees")
    return root


@lru_cache(maxsize=256)
def inv_sqrt_one_minus(c: Scalar, N: int) -> TruncatedSeries:
    """(1 - c ξ^2)^(-1/2) = sum_n C(2n, n) (c/4)^n ξ^(2n)."""
    if N < 0:
        raise ValueError(f"Series order must be non-negative, got {N}")
    quarter = Fraction(c) / 4
    in_square = TruncatedSeries(tuple(binomial(2 * n, n) * quarter ** n for n in range(N + 1)), N)
    return in_square.substitute_square()


def _passage_numerator(params: WalkParams, level: int, N: int) -> TruncatedSeries:
    """((1 - sqrt(1 - 4pq ξ^2)) / (2q ξ))^level for level >= 1 (2p for the negative side)."""
    span = abs(level)
    root = sqrt_one_minus(4 * params.p * params.q, N + span)
    divisor = 2 * params.q if level > 0 else 2 * params.p
    numerator = ((1 - root) * (1 / divisor)) ** span
    return numerator.shift_down(span)


def genfun_G(params: WalkParams, j: int, N: int) -> TruncatedSeries:
    """sum_n P{S_n = j} ξ^n to order N."""
    if N < abs(j):
        raise ValueError(f"genfun_G needs N >= |j|, got N={N}, j={j}")
    p, q = params.p, params.q

    if params.kind is WalkKind.NON_DECREASING:
        if j < 0:
            raise ValueError(f"The non-decreasing walk never reaches level {j}")
        geometric = (1 - TruncatedSeries.monomial(q, 1, N)).inverse()
        return (geometric ** (j + 1) * p ** j).shift_up(j)

    base = inv_sqrt_one_minus(4 * p * q, N)
    if j == 0:
        return base
    return base * _passage_numerator(params, j, N)


def genfun_T(params: WalkParams, a: int, N: int) -> TruncatedSeries:
    """sum_n P{T_a = n} ξ^n to order N (defective when p != 1/2)."""
    if params.kind is WalkKind.NON_DECREASING:
        if a < 1:
            raise ValueError(f"Non-decreasing walk hitting times need a >= 1, got a={a}")
        if N < a:
            raise ValueError(f"genfun_T needs N >= a, got N={N}, a={a}")
        geometric = (1 - TruncatedSeries.monomial(params.q, 1, N)).inverse()
        return (geometric ** a * params.p ** a).shift_up(a)

    if a == 0:
        if N < 2:
            raise ValueError(f"genfun_T for the return time needs N >= 2, got {N}")
        return 1 - sqrt_one_minus(4 * params.p * params.q, N)
    if N < abs(a):
        raise ValueError(f"genfun_T needs N >= |a|, got N={N}, a={a}")
    return _passage_numerator(params, a, N)


def _first_mismatch(left: TruncatedSeries, right: TruncatedSeries) -> Optional[int]:
    order = min(left.order, right.order)
    for n in range(order + 1):
        if left[n] != right[n]:
            return n
    return None


def _series_report(identity_id: str, params: Dict[str, Any], left: TruncatedSeries,
                   right: TruncatedSeries) -> VerificationReport:
    order = min(left.order, right.order)
    residual = max((abs(left[n] - right[n]) for n in range(order + 1)), default=Fraction(0))
    mismatch = _first_mismatch(left, right)
    return VerificationReport(
        identity_id=identity_id,
        params=params,
        lhs=left.truncate(order).partial_sum(),
        rhs=right.truncate(order).partial_sum(),
        residual=residual,
        tolerance=Fraction(0),
        passed=mismatch is None,
        method="series-arithmetic",
        details={"order": order, "first_mismatch": mismatch},
    )


def _base_params(params: WalkParams, **extra: Any) -> Dict[str, Any]:
    return {"kind": params.kind.value, "p": params.p, **extra}


def check_quotient_relation(params: WalkParams, a: int, N: int) -> VerificationReport:
    """G(ξ, a) = G(ξ, 0) * E(ξ^T_a)."""
    if a == 0:
        raise ValueError("check_quotient_relation needs a != 0")
    if N < abs(a) + 2:
        raise ValueError(f"check_quotient_relation needs N >= |a| + 2, got N={N}")
    product = genfun_G(params, 0, N) * genfun_T(params, a, N)
    return _series_report("GENFUN_QUOTIENT", _base_params(params, a=a, N=N), genfun_G(params, a, N), product)


def check_coefficients(params: WalkParams, index: int, N: int, law: str = "G") -> VerificationReport:
    """Series coefficients against the exact masses P{S_n = index} or P{T_index = n}."""
    if law == "G":
        series = genfun_G(params, index, N)
        masses = TruncatedSeries(tuple(prob_S(params, n, index) for n in range(N + 1)), N)
    elif law == "T":
        series = genfun_T(params, index, N)
        masses = TruncatedSeries(tuple(prob_T(params, index, n) for n in range(N + 1)), N)
    else:
        raise ValueError(f"Unknown generating function '{law}', expected G or T")
    return _series_report(f"GENFUN_COEFFICIENTS_{law}", _base_params(params, index=index, N=N), series, masses)


def check_recurrence_G(params: WalkParams, j: int, N: int) -> VerificationReport:
    """G(j) - [j=0] = pξ G(j-1) + qξ G(j+1) for the ±1 walk, and
    G(j) - [j=0] = pξ G(j-1) + qξ G(j) for the 0/1 walk."""
    p, q = params.p, params.q
    left = genfun_G(params, j, N)
    if j == 0:
        left = left - 1

    if params.kind is WalkKind.NON_DECREASING:
        below = genfun_G(params, j - 1, N) if j >= 1 else TruncatedSeries.constant(0, N)
        right = (below * p).shift_up(1) + (genfun_G(params, j, N) * q).shift_up(1)
    else:
        if N < abs(j) + 1:
            raise ValueError(f"check_recurrence_G needs N >= |j| + 1, got N={N}")
        right = (genfun_G(params, j - 1, N) * p).shift_up(1) + (genfun_G(params, j + 1, N) * q).shift_up(1)
    return _series_report("GENFUN_RECURRENCE", _base_params(params, j=j, N=N), left, right)


def check_convolution_product(params: WalkParams, a: int, b: int, N: int) -> VerificationReport:
    """E(ξ^T_a) E(ξ^T_b) = E(ξ^T_{a+b}) for same-sign levels."""
    if a == 0 or b == 0 or (a > 0) != (b > 0):
        raise ValueError(f"check_convolution_product needs non-zero levels of one sign, got a={a}, b={b}")
    product = genfun_T(params, a, N) * genfun_T(params, b, N)
    return _series_report("GENFUN_CONVOLUTION", _base_params(params, a=a, b=b, N=N), product,
                          genfun_T(params, a + b, N))


def check_series_hitting_bound(params: WalkParams, a: int, orders: Iterable[int]) -> VerificationReport:
    """Partial sums of E(ξ^T_a) coefficients increase with N and stay below P{T_a < inf}."""
    limit = hitting_probability(params, a)
    sums = [genfun_T(params, a, N).partial_sum() for N in sorted(orders)]
    monotone = all(x <= y for x, y in zip(sums, sums[1:]))
    bounded = all(s <= limit for s in sums)
    # residual is the overshoot above the bound, zero while it holds
    overshoot = max(max(sums) - limit, Fraction(0))
    return VerificationReport(
        identity_id="GENFUN_HITTING_BOUND",
        params=_base_params(params, a=a, orders=sorted(orders)),
        lhs=sums[-1],
        rhs=limit,
        residual=overshoot,
        tolerance=Fraction(0),
        passed=monotone and bounded,
        method="series-arithmetic",
        details={"monotone": monotone, "bounded": bounded, "gap": limit - sums[-1], "partial_sums": sums},
    )


def series_for(params: WalkParams, law: str, index: int, N: int) -> TruncatedSeries:
    if law == "G":
        return genfun_G(params, index, N)
    if law == "T":
        return genfun_T(params, index, N)
    raise ValueError(f"Unknown generating function '{law}', expected G or T")


def check_square_root(c: Scalar, N: int) -> VerificationReport:
    """sqrt_one_minus(c, N)^2 = 1 - c ξ^2 exactly."""
    root = sqrt_one_minus(c, N)
    target = TruncatedSeries((1, 0, -Fraction(c)), N)
    return _series_report("GENFUN_SQRT", {"c": Fraction(c), "N": N}, root * root, target)


def genfun_sweep(p_values: Sequence[Fraction], index_max: int, N: int) -> List[VerificationReport]:
    """Coefficient, quotient, recurrence and product checks for both walks at every p."""
    reports = []
    for p in p_values:
        for kind in WalkKind:
            params = WalkParams(p, kind)
            low = -index_max if kind is WalkKind.PLUS_MINUS else 0
            for index in range(low, index_max + 1):
                reports.append(check_coefficients(params, index, N, "G"))
                reports.append(check_recurrence_G(params, index, N))
                if kind is WalkKind.NON_DECREASING and index < 1:
                    continue
                reports.append(check_coefficients(params, index, N, "T"))
                if index != 0:
                    reports.append(check_quotient_relation(params, index, N))
            reports.append(check_convolution_product(params, 1, 2, N))
            reports.append(check_series_hitting_bound(params, 1, (N // 4, N // 2, N)))
        reports.append(check_square_root(4 * Fraction(p) * (1 - Fraction(p)), N))
    SweepSummary.from_reports("genfun", reports).log()
    return reports
