"""
Exact laws of the ±1 random walk and the non-decreasing 0/1 walk.

All probabilities are rationals. Laws with infinite support (first-passage
times) are cut at an explicit horizon and carry the mass beyond it as a tail
bound, so defective laws (p != 1/2) stay visible instead of being renormalized.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from .errors import InconsistencyError
from .exact_arith import binomial, format_rational, parse_rational
from .gamma_identities import conditional_masses, d_rhs, d_terms, s_rhs, s_terms
from .reports import VerificationReport, exact_report

logger = logging.getLogger(__name__)

ORACLE_MAX_STEPS = 20


class WalkKind(str, Enum):
    PLUS_MINUS = "PLUS_MINUS"
    NON_DECREASING = "NON_DECREASING"

    @classmethod
    def parse(cls, text: Union[str, "WalkKind"]) -> "WalkKind":
        """Accept the enum name or the short CLI forms pm / nd."""
        if isinstance(text, WalkKind):
            return text
        aliases = {"pm": cls.PLUS_MINUS, "nd": cls.NON_DECREASING}
        key = text.strip()
        if key.lower() in aliases:
            return aliases[key.lower()]
        return cls(key.upper())


@dataclass(frozen=True)
class WalkParams:
    p: Fraction
    kind: WalkKind = WalkKind.PLUS_MINUS

    def __post_init__(self):
        p = parse_rational(self.p) if isinstance(self.p, str) else Fraction(self.p)
        if not 0 < p < 1:
            raise ValueError(f"Step probability must lie in (0, 1), got p={p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "kind", WalkKind.parse(self.kind))

    @property
    def q(self) -> Fraction:
        return 1 - self.p

    def to_dict(self) -> Dict[str, str]:
        return {"p": format_rational(self.p), "kind": self.kind.value}


@dataclass
class Pmf:
    """Finite map from integer support points to exact masses."""

    law: str
    p: Fraction
    kind: Optional[WalkKind]
    params: Dict[str, Any]
    mass: Dict[int, Fraction]
    truncated: bool = False
    tail_bound: Fraction = Fraction(0)

    @property
    def support(self) -> List[int]:
        return sorted(self.mass)

    def __getitem__(self, point: int) -> Fraction:
        return self.mass.get(point, Fraction(0))

    def total(self) -> Fraction:
        return sum(self.mass.values(), Fraction(0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value if self.kind else None,
            "p": format_rational(self.p),
            "law": self.law,
            "params": self.params,
            "masses": [{"n": n, "mass": format_rational(self.mass[n])} for n in self.support],
            "truncated": self.truncated,
            "tail_bound": format_rational(self.tail_bound),
        }

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"n": n, "mass_rational": format_rational(self.mass[n]), "mass_float": float(self.mass[n])}
            for n in self.support
        ]
        return pd.DataFrame(rows, columns=["n", "mass_rational", "mass_float"])


def _require_plus_minus(params: WalkParams, operation: str) -> None:
    if params.kind is not WalkKind.PLUS_MINUS:
        raise ValueError(f"{operation} is defined for the PLUS_MINUS walk only")


@lru_cache(maxsize=65536)
def prob_S(params: WalkParams, n: int, j: int) -> Fraction:
    """P{S_n = j}; zero off the support."""
    if n < 0:
        raise ValueError(f"Walk length must be non-negative, got n={n}")
    p, q = params.p, params.q
    if params.kind is WalkKind.NON_DECREASING:
        if j < 0 or j > n:
            return Fraction(0)
        return binomial(n, j) * p ** j * q ** (n - j)
    if abs(j) > n or (n + j) % 2:
        return Fraction(0)
    ups = (n + j) // 2
    return binomial(n, ups) * p ** ups * q ** (n - ups)


@lru_cache(maxsize=65536)
def prob_T(params: WalkParams, a: int, n: int) -> Fraction:
    """P{T_a = n} with T_a = min{n >= 1: S_n = a}; T_0 is the first return."""
    if params.kind is WalkKind.NON_DECREASING:
        if a < 1:
            raise ValueError(f"Non-decreasing walk hitting times need a >= 1, got a={a}")
        if n < a:
            return Fraction(0)
        return binomial(n - 1, a - 1) * params.p ** a * params.q ** (n - a)

    if n < 1 or (n + a) % 2:
        return Fraction(0)
    if a == 0:
        half = n // 2
        return binomial(n, half) * (params.p * params.q) ** half / (n - 1)
    if abs(a) > n:
        return Fraction(0)
    return Fraction(abs(a), n) * prob_S(params, n, a)


def hitting_probability(params: WalkParams, a: int) -> Fraction:
    """P{T_a < inf}; exact because |p - q| is rational."""
    if params.kind is WalkKind.NON_DECREASING:
        if a < 1:
            raise ValueError(f"Non-decreasing walk hitting times need a >= 1, got a={a}")
        return Fraction(1)
    drift = abs(params.p - params.q)
    if a == 0:
        return 1 - drift
    if a > 0:
        return ((1 - drift) / (2 * params.q)) ** a
    return ((1 - drift) / (2 * params.p)) ** (-a)


def pmf_S(params: WalkParams, n: int) -> Pmf:
    if n < 0:
        raise ValueError(f"pmf_S needs n >= 0, got {n}")
    points = range(0, n + 1) if params.kind is WalkKind.NON_DECREASING else range(-n, n + 1, 2)
    mass = {j: prob_S(params, n, j) for j in points}
    return Pmf(law="S", p=params.p, kind=params.kind, params={"n": n}, mass=mass)


def pmf_T(params: WalkParams, a: int, horizon: int) -> Pmf:
    if horizon < max(abs(a), 1):
        raise ValueError(f"pmf_T needs horizon >= max(|a|, 1), got horizon={horizon} for a={a}")
    if params.kind is WalkKind.NON_DECREASING and a == 0:
        raise ValueError("The non-decreasing walk has no return time; a must be >= 1")

    mass = {}
    for n in range(1, horizon + 1):
        m = prob_T(params, a, n)
        if m:
            mass[n] = m
    captured = sum(mass.values(), Fraction(0))
    tail = hitting_probability(params, a) - captured
    if tail < 0:
        raise InconsistencyError(f"T_{a} masses up to {horizon} exceed the hitting probability")
    return Pmf(
        law="T",
        p=params.p,
        kind=params.kind,
        params={"a": a, "horizon": horizon},
        mass=mass,
        truncated=True,
        tail_bound=tail,
    )


def hitting_partial_sum(params: WalkParams, a: int, horizon: int) -> Tuple[Fraction, Fraction]:
    """(sum_{n<=horizon} P{T_a=n}, P{T_a<inf}) for a != 0.

    Masses are stepped n -> n+2 by their ratio n(n+1)pq / ((k+1)(n-k+1)),
    k = (n+a)/2, so no binomial is recomputed over long horizons.
    """
    _require_plus_minus(params, "hitting_partial_sum")
    if a == 0:
        raise ValueError("hitting_partial_sum needs a != 0")
    level = abs(a)
    n = level
    mass = prob_T(params, a, n)
    ups = (n + a) // 2
    downs = n - ups
    pq = params.p * params.q
    total = Fraction(0)
    while n <= horizon:
        total += mass
        mass = mass * n * (n + 1) * pq / ((ups + 1) * (downs + 1))
        n += 2
        ups += 1
        downs += 1
    return total, hitting_probability(params, a)


def check_hitting_partial_sum(params: WalkParams, a: int, horizon: int, tol: Fraction = Fraction(1, 10 ** 6)) -> VerificationReport:
    partial, limit = hitting_partial_sum(params, a, horizon)
    gap = limit - partial
    # distance outside [0, tol]; the gap itself goes to details
    violation = max(-gap, gap - tol, Fraction(0))
    return VerificationReport(
        identity_id="HITTING_PARTIAL_SUM",
        params={"p": params.p, "a": a, "horizon": horizon},
        lhs=float(partial),
        rhs=limit,
        residual=float(violation),
        tolerance=0.0,
        passed=violation == 0,
        method="exact",
        details={"gap": float(gap), "gap_tolerance": float(tol)},
    )


def check_reflection(params: WalkParams, j: int, n: int) -> VerificationReport:
    """P{S_n=-j} = (q/p)^j P{S_n=j} and P{T_-j=n} = (q/p)^j P{T_j=n}."""
    _require_plus_minus(params, "check_reflection")
    if j < 1 or n < 1:
        raise ValueError(f"check_reflection needs j, n >= 1, got j={j}, n={n}")
    factor = (params.q / params.p) ** j
    passage_lhs = prob_T(params, -j, n)
    passage_rhs = factor * prob_T(params, j, n)
    report = exact_report(
        "REFLECTION",
        {"p": params.p, "j": j, "n": n},
        prob_S(params, n, -j),
        factor * prob_S(params, n, j),
        details={"passage_lhs": passage_lhs, "passage_rhs": passage_rhs},
    )
    report.passed = report.passed and passage_lhs == passage_rhs
    return report


def _check_levels(params: WalkParams, a: int, b: int) -> None:
    if params.kind is WalkKind.NON_DECREASING:
        if a < 1 or b < 0:
            raise ValueError(f"Non-decreasing walk needs a >= 1, b >= 0, got a={a}, b={b}")
        return
    if not ((a >= 1 and b >= 0) or (a <= -1 and b <= 0)):
        raise ValueError(f"Levels a={a}, b={b} must share a sign (a >= 1, b >= 0 or a <= -1, b <= 0)")


def check_darling_siegert(params: WalkParams, a: int, b: int, n: int) -> VerificationReport:
    """P{S_n=a+b} = sum_k P{T_a=k} P{S_{n-k}=b} and, for b != 0,
    P{T_{a+b}=n} = sum_k P{T_a=k} P{T_b=n-k}."""
    _check_levels(params, a, b)
    if n < abs(a + b) or n < 1:
        raise ValueError(f"check_darling_siegert needs n >= |a+b|, got n={n}")

    occupation = sum((prob_T(params, a, k) * prob_S(params, n - k, b) for k in range(1, n + 1)), Fraction(0))
    details: Dict[str, Any] = {}
    passage_ok = True
    if b != 0:
        passage = sum((prob_T(params, a, k) * prob_T(params, b, n - k) for k in range(1, n)), Fraction(0))
        target = prob_T(params, a + b, n)
        passage_ok = passage == target
        details = {"passage_lhs": target, "passage_rhs": passage}

    report = exact_report(
        "DARLING_SIEGERT",
        {"kind": params.kind.value, "p": params.p, "a": a, "b": b, "n": n},
        prob_S(params, n, a + b),
        occupation,
        details=details,
    )
    report.passed = report.passed and passage_ok
    return report


def check_ds_corollaries(params: WalkParams, mu: int, nu: int, r: int) -> List[VerificationReport]:
    """The indexed forms: hitting times 2k+mu (±1 walk) or k+mu (0/1 walk), k = 0..r."""
    stride = 2 if params.kind is WalkKind.PLUS_MINUS else 1
    if mu < 1 or r < 0:
        raise ValueError(f"check_ds_corollaries needs mu >= 1, r >= 0, got mu={mu}, r={r}")
    if nu < 0:
        raise ValueError(f"check_ds_corollaries needs nu >= 0, got nu={nu}")

    total = stride * r + mu + nu
    base = {"kind": params.kind.value, "p": params.p, "mu": mu, "nu": nu, "r": r}
    occupation = sum(
        (prob_T(params, mu, stride * k + mu) * prob_S(params, stride * (r - k) + nu, nu) for k in range(r + 1)),
        Fraction(0),
    )
    reports = [exact_report("DS_COROLLARY_OCCUPATION", base, occupation, prob_S(params, total, mu + nu))]
    if nu >= 1:
        passage = sum(
            (prob_T(params, mu, stride * k + mu) * prob_T(params, nu, stride * (r - k) + nu) for k in range(r + 1)),
            Fraction(0),
        )
        reports.append(exact_report("DS_COROLLARY_PASSAGE", base, passage, prob_T(params, mu + nu, total)))
    return reports


def check_universality(params: WalkParams, mu: int, nu: int, r: int) -> VerificationReport:
    """Rebuild the Gamma quotients of EQ_S and EQ_D from walk masses at this p."""
    _require_plus_minus(params, "check_universality")
    if mu < 1 or nu < 1 or r < 0:
        raise ValueError(f"check_universality needs mu, nu >= 1 and r >= 0, got {mu}, {nu}, {r}")
    p, q = params.p, params.q

    def passage_quotient(level: int, k: int) -> Fraction:
        return prob_T(params, level, 2 * k + level) / (level * p ** (k + level) * q ** k)

    def occupation_quotient(level: int, k: int) -> Fraction:
        return prob_S(params, 2 * k + level, level) / (p ** (k + level) * q ** k)

    s_rebuilt = [passage_quotient(mu, k) * occupation_quotient(nu - 1, r - k) for k in range(r + 1)]
    s_right = Fraction(1, mu) * occupation_quotient(mu + nu - 1, r)
    d_rebuilt = [passage_quotient(mu, k) * passage_quotient(nu, r - k) for k in range(r + 1)]
    d_right = (Fraction(1, mu) + Fraction(1, nu)) * passage_quotient(mu + nu, r)

    s_match = s_rebuilt == s_terms(mu, nu, r)
    d_match = d_rebuilt == d_terms(mu, nu, r) and d_right == d_rhs(mu, nu, r)
    report = exact_report(
        "UNIVERSALITY",
        {"p": p, "mu": mu, "nu": nu, "r": r},
        s_right,
        s_rhs(mu, nu, r),
        details={"s_summands_match": s_match, "d_match": d_match},
    )
    report.passed = report.passed and s_match and d_match
    return report


def bridge_first_passage(params: WalkParams, mu: int, nu: int, r: int) -> Pmf:
    """P{T_mu = 2k+mu | S_{2r+mu+nu} = mu+nu}, keyed by the hitting time 2k+mu.

    The quotient is cross-checked against the closed binomial form.
    """
    _require_plus_minus(params, "bridge_first_passage")
    if mu < 1 or nu < 0 or r < 0:
        raise ValueError(f"bridge_first_passage needs mu >= 1, nu >= 0, r >= 0, got {mu}, {nu}, {r}")
    length = 2 * r + mu + nu
    condition = prob_S(params, length, mu + nu)
    if condition == 0:
        raise ValueError(f"Conditioning event S_{length} = {mu + nu} has probability zero")

    quotients = [
        prob_T(params, mu, 2 * k + mu) * prob_S(params, 2 * (r - k) + nu, nu) / condition
        for k in range(r + 1)
    ]
    closed = conditional_masses(mu, nu, r)
    if quotients != closed:
        raise InconsistencyError(f"Bridge quotient disagrees with the closed form at mu={mu}, nu={nu}, r={r}")

    return Pmf(
        law="bridge_first_passage",
        p=params.p,
        kind=params.kind,
        params={"mu": mu, "nu": nu, "r": r},
        mass={2 * k + mu: m for k, m in enumerate(quotients)},
    )


def bridge_return_law(params: WalkParams, r: int) -> Pmf:
    """q_k^r = P{T_0 = 2k | S_{2r} = 0}, keyed by the return time 2k.

    Must equal the first-passage bridge law with mu=1, nu=0 and r-1 shifted by one.
    """
    _require_plus_minus(params, "bridge_return_law")
    if r < 1:
        raise ValueError(f"bridge_return_law needs r >= 1, got {r}")
    condition = prob_S(params, 2 * r, 0)
    mass = {
        2 * k: prob_T(params, 0, 2 * k) * prob_S(params, 2 * (r - k), 0) / condition
        for k in range(1, r + 1)
    }
    shifted = bridge_first_passage(params, 1, 0, r - 1)
    for k in range(1, r + 1):
        if mass[2 * k] != shifted[2 * (k - 1) + 1]:
            raise InconsistencyError(f"Return law of the length-{2 * r} bridge disagrees at k={k}")
    return Pmf(law="bridge_return", p=params.p, kind=params.kind, params={"r": r}, mass=mass)


def check_bridge_mirror(params: WalkParams, r: int) -> VerificationReport:
    """q_k^r is the hitting law of ±1 under either pinning S_{2r-1} = ±1."""
    returns = bridge_return_law(params, r)
    up = prob_S(params, 2 * r - 1, 1)
    down = prob_S(params, 2 * r - 1, -1)
    upper = [prob_T(params, 1, 2 * k - 1) * prob_S(params, 2 * (r - k), 0) / up for k in range(1, r + 1)]
    lower = [prob_T(params, -1, 2 * k - 1) * prob_S(params, 2 * (r - k), 0) / down for k in range(1, r + 1)]
    expected = [returns[2 * k] for k in range(1, r + 1)]
    report = exact_report(
        "BRIDGE_MIRROR",
        {"p": params.p, "r": r},
        sum(lower, Fraction(0)),
        sum(expected, Fraction(0)),
        details={"upper_match": upper == expected, "lower_match": lower == expected},
    )
    report.passed = upper == expected and lower == expected
    return report


def check_bridge_p_independence(first: WalkParams, second: WalkParams, mu: int, nu: int, r: int) -> VerificationReport:
    law_a = bridge_first_passage(first, mu, nu, r)
    law_b = bridge_first_passage(second, mu, nu, r)
    support = sorted(set(law_a.mass) | set(law_b.mass))
    largest = max((abs(law_a[n] - law_b[n]) for n in support), default=Fraction(0))
    return exact_report(
        "BRIDGE_P_INDEPENDENCE",
        {"p": first.p, "p_other": second.p, "mu": mu, "nu": nu, "r": r},
        largest,
        Fraction(0),
        details={
            "masses": [law_a[n] for n in support],
            "masses_other": [law_b[n] for n in support],
            "support": support,
        },
    )


def pmf_negative_binomial(mu: int, p: Fraction, horizon: int) -> Pmf:
    """P{N = n} = C(n+mu-1, n) p^n q^mu, n = 0..horizon."""
    if mu < 1:
        raise ValueError(f"Negative binomial needs mu >= 1, got {mu}")
    if horizon < 0:
        raise ValueError(f"pmf_negative_binomial needs horizon >= 0, got {horizon}")
    params = WalkParams(p, WalkKind.NON_DECREASING)
    mass = {n: binomial(n + mu - 1, n) * params.p ** n * params.q ** mu for n in range(horizon + 1)}
    return Pmf(
        law="negbin",
        p=params.p,
        kind=None,
        params={"mu": mu, "horizon": horizon},
        mass=mass,
        truncated=True,
        tail_bound=1 - sum(mass.values(), Fraction(0)),
    )


def check_negative_binomial_additivity(mu: int, nu: int, p: Fraction, r: int) -> VerificationReport:
    left = pmf_negative_binomial(mu, p, r)
    right = pmf_negative_binomial(nu, p, r)
    combined = pmf_negative_binomial(mu + nu, p, r)
    convolution = sum((left[k] * right[r - k] for k in range(r + 1)), Fraction(0))
    return exact_report("NEGBIN_ADDITIVITY", {"p": Fraction(p), "mu": mu, "nu": nu, "r": r}, convolution, combined[r])


def check_ds_equivalence(params: WalkParams, a: int, b: int, n: int) -> VerificationReport:
    """The a/n relation and the weighted convolutions it turns one formula into."""
    if a < 1 or b < 1:
        raise ValueError(f"check_ds_equivalence needs a, b >= 1, got a={a}, b={b}")
    if n < a + b:
        raise ValueError(f"check_ds_equivalence needs n >= a+b, got n={n}")

    ratio_ok = prob_T(params, a, n) == Fraction(a, n) * prob_S(params, n, a)
    target = prob_T(params, a + b, n)
    weighted = sum((k * prob_T(params, a, k) * prob_T(params, b, n - k) for k in range(1, n)), Fraction(0))
    complement = sum(((n - k) * prob_T(params, a, k) * prob_T(params, b, n - k) for k in range(1, n)), Fraction(0))
    complement_ok = complement == Fraction(b * n, a + b) * target

    report = exact_report(
        "DS_EQUIVALENCE",
        {"kind": params.kind.value, "p": params.p, "a": a, "b": b, "n": n},
        weighted,
        Fraction(a * n, a + b) * target,
        details={"ratio_relation": ratio_ok, "complement_relation": complement_ok},
    )
    report.passed = report.passed and ratio_ok and complement_ok
    return report


@dataclass
class PathCensus:
    """Every step sequence of length n, enumerated.

    Each path is reduced to its number of up-steps, so any event's probability
    at any p is sum_u count_u p^u q^(n-u) with exact counts.
    """

    kind: WalkKind
    n: int
    positions: np.ndarray = field(init=False, repr=False)
    ups: np.ndarray = field(init=False, repr=False)
    _hits: Dict[int, np.ndarray] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        self.kind = WalkKind.parse(self.kind)
        if not 0 <= self.n <= ORACLE_MAX_STEPS:
            raise ValueError(f"PathCensus enumerates at most {ORACLE_MAX_STEPS} steps, got {self.n}")
        codes = np.arange(2 ** self.n, dtype=np.int64)
        bits = (codes[:, None] >> np.arange(self.n, dtype=np.int64)) & 1
        steps = 2 * bits - 1 if self.kind is WalkKind.PLUS_MINUS else bits
        walk = np.cumsum(steps, axis=1)
        self.positions = np.concatenate([np.zeros((len(codes), 1), dtype=np.int64), walk], axis=1)
        self.ups = bits.sum(axis=1)

    def _weigh(self, mask: np.ndarray, params: WalkParams) -> Fraction:
        counts = np.bincount(self.ups[mask], minlength=self.n + 1)
        p, q = params.p, params.q
        return sum((int(c) * p ** u * q ** (self.n - u) for u, c in enumerate(counts) if c), Fraction(0))

    def first_hits(self, a: int) -> np.ndarray:
        """First time t >= 1 with S_t = a, or 0 when the path never gets there."""
        if a not in self._hits:
            hits = self.positions[:, 1:] == a
            self._hits[a] = np.where(hits.any(axis=1), hits.argmax(axis=1) + 1, 0)
        return self._hits[a]

    def prob_S(self, params: WalkParams, j: int) -> Fraction:
        return self._weigh(self.positions[:, -1] == j, params)

    def prob_T(self, params: WalkParams, a: int, t: int) -> Fraction:
        return self._weigh(self.first_hits(a) == t, params)

    def prob_T_given_S(self, params: WalkParams, a: int, t: int, j: int) -> Fraction:
        end = self.positions[:, -1] == j
        return self._weigh(end & (self.first_hits(a) == t), params) / self._weigh(end, params)


def check_oracle(params: WalkParams, n: int) -> VerificationReport:
    """Brute-force enumeration against pmf_S, pmf_T and the bridge laws at length n."""
    census = PathCensus(params.kind, n)
    mismatches: List[str] = []
    checks = 0

    def compare(label: str, enumerated: Fraction, closed: Fraction) -> None:
        nonlocal checks
        checks += 1
        if enumerated != closed:
            mismatches.append(f"{label}: enumerated {enumerated} != {closed}")

    for j, m in pmf_S(params, n).mass.items():
        compare(f"S_{n}={j}", census.prob_S(params, j), m)

    if params.kind is WalkKind.PLUS_MINUS:
        levels = list(range(-n, n + 1))
    else:
        levels = list(range(1, n + 1))
    for a in levels:
        for t in range(1, n + 1):
            compare(f"T_{a}={t}", census.prob_T(params, a, t), prob_T(params, a, t))

    if params.kind is WalkKind.PLUS_MINUS and n >= 2 and n % 2 == 0:
        returns = bridge_return_law(params, n // 2)
        for t, m in returns.mass.items():
            compare(f"T_0={t}|S_{n}=0", census.prob_T_given_S(params, 0, t, 0), m)
    if params.kind is WalkKind.PLUS_MINUS and n >= 1:
        for mu in range(1, n + 1):
            for nu in range(0, n - mu + 1):
                if (n - mu - nu) % 2:
                    continue
                law = bridge_first_passage(params, mu, nu, (n - mu - nu) // 2)
                for t, m in law.mass.items():
                    compare(f"T_{mu}={t}|S_{n}={mu + nu}", census.prob_T_given_S(params, mu, t, mu + nu), m)

    if mismatches:
        logger.warning(f"Enumeration oracle at n={n}, p={params.p}: {len(mismatches)} mismatches")
    return VerificationReport(
        identity_id="ENUMERATION_ORACLE",
        params={"kind": params.kind.value, "p": params.p, "n": n},
        lhs=checks - len(mismatches),
        rhs=checks,
        residual=len(mismatches),
        tolerance=0,
        passed=not mismatches,
        method="enumeration",
        details={"mismatches": mismatches[:10]},
    )
