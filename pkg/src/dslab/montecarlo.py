"""
Seeded simulation of both walk kinds and statistical comparison with the exact laws.

Samples are split into fixed-size chunks. Chunk i always draws from stream i
of SeedSequence(seed).spawn(n_chunks) fed to a Philox generator, and chunk
results are merged in chunk order, so counts do not depend on the thread count.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from .reports import VerificationReport
from .walks import Pmf, WalkKind, WalkParams, bridge_return_law, pmf_S, pmf_T

logger = logging.getLogger(__name__)

GENERATOR_FAMILY = "numpy.random.Philox"
SEEDING = "SeedSequence(seed).spawn(n_chunks), one stream per chunk, merged in chunk order"
STEP_BLOCK = 64
MIN_EXPECTED = 5.0
CENSORING_SIGMAS = 5.0


@dataclass(frozen=True)
class SimConfig:
    seed: int
    samples: int
    horizon: int
    params: WalkParams
    chunk_size: int = 65536
    threads: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"Seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.chunk_size < 1 or self.threads < 1:
            raise ValueError(f"chunk_size and threads must be >= 1, got {self.chunk_size}, {self.threads}")

    @property
    def chunk_sizes(self) -> List[int]:
        full, rest = divmod(self.samples, self.chunk_size)
        return [self.chunk_size] * full + ([rest] if rest else [])

    def generators(self) -> List[np.random.Generator]:
        children = np.random.SeedSequence(self.seed).spawn(len(self.chunk_sizes))
        return [np.random.Generator(np.random.Philox(child)) for child in children]

    def rng_header(self) -> Dict[str, Any]:
        return {
            "generator": GENERATOR_FAMILY,
            "seeding": SEEDING,
            "seed": self.seed,
            "chunks": len(self.chunk_sizes),
            "chunk_size": self.chunk_size,
        }


@dataclass
class EmpiricalLaw:
    law: str
    params: Dict[str, Any]
    counts: Dict[int, int]
    censored: int
    samples: int
    seed: int
    horizon: int
    proposals: Optional[int] = None
    rng: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if sum(self.counts.values()) + self.censored != self.samples:
            raise ValueError(
                f"Empirical counts ({sum(self.counts.values())}) plus censored ({self.censored}) "
                f"do not add up to {self.samples} samples"
            )

    def frequency(self, point: int) -> float:
        return self.counts.get(point, 0) / self.samples

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "law": self.law,
            "params": self.params,
            "seed": self.seed,
            "samples": self.samples,
            "horizon": self.horizon,
            "counts": [{"n": n, "count": self.counts[n]} for n in sorted(self.counts)],
            "censored": self.censored,
            "rng": self.rng,
        }
        if self.proposals is not None:
            data["proposals"] = self.proposals
        return data


def _up_steps(rng: np.random.Generator, shape: Tuple[int, int], p: float) -> np.ndarray:
    return rng.random(shape) < p


def _steps(rng: np.random.Generator, shape: Tuple[int, int], params: WalkParams) -> np.ndarray:
    ups = _up_steps(rng, shape, float(params.p))
    if params.kind is WalkKind.PLUS_MINUS:
        return np.where(ups, 1, -1).astype(np.int64)
    return ups.astype(np.int64)


def _tally(values: np.ndarray) -> Dict[int, int]:
    points, counts = np.unique(values, return_counts=True)
    return {int(v): int(c) for v, c in zip(points, counts)}


def _run_chunks(cfg: SimConfig, worker: Callable[[np.random.Generator, int], Tuple[Dict[int, int], int, int]]
                ) -> Tuple[Dict[int, int], int, int]:
    """Run worker(rng, size) on every chunk and merge (counts, censored, proposals) in chunk order."""
    jobs = list(zip(cfg.generators(), cfg.chunk_sizes))
    if cfg.threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda job: worker(*job), jobs))
    else:
        results = [worker(rng, size) for rng, size in jobs]

    counts: Dict[int, int] = {}
    censored = 0
    proposals = 0
    for chunk_counts, chunk_censored, chunk_proposals in results:
        for point, count in chunk_counts.items():
            counts[point] = counts.get(point, 0) + count
        censored += chunk_censored
        proposals += chunk_proposals
    return counts, censored, proposals


def _law_params(cfg: SimConfig, **extra: Any) -> Dict[str, Any]:
    return {"kind": cfg.params.kind.value, "p": cfg.params.p, **extra}


def simulate_S(cfg: SimConfig, n: int) -> EmpiricalLaw:
    """Empirical law of S_n over cfg.samples trajectories."""
    if n < 0 or n > cfg.horizon:
        raise ValueError(f"simulate_S needs 0 <= n <= horizon, got n={n}, horizon={cfg.horizon}")

    def worker(rng: np.random.Generator, size: int) -> Tuple[Dict[int, int], int, int]:
        position = np.zeros(size, dtype=np.int64)
        done = 0
        while done < n:
            width = min(STEP_BLOCK, n - done)
            position += _steps(rng, (size, width), cfg.params).sum(axis=1)
            done += width
        return _tally(position), 0, size

    counts, censored, _ = _run_chunks(cfg, worker)
    logger.debug(f"Simulated S_{n} with {cfg.samples} samples")
    return EmpiricalLaw("S", _law_params(cfg, n=n), counts, censored, cfg.samples, cfg.seed, cfg.horizon,
                        rng=cfg.rng_header())


def simulate_T(cfg: SimConfig, a: int) -> EmpiricalLaw:
    """Empirical law of T_a, censored at cfg.horizon."""
    if cfg.params.kind is WalkKind.NON_DECREASING and a < 1:
        raise ValueError(f"Non-decreasing walk hitting times need a >= 1, got a={a}")
    if cfg.horizon < max(abs(a), 1):
        raise ValueError(f"simulate_T needs horizon >= max(|a|, 1), got horizon={cfg.horizon} for a={a}")

    def worker(rng: np.random.Generator, size: int) -> Tuple[Dict[int, int], int, int]:
        position = np.zeros(size, dtype=np.int64)
        hit = np.zeros(size, dtype=np.int64)
        active = np.arange(size)
        t = 0
        while active.size and t < cfg.horizon:
            width = min(STEP_BLOCK, cfg.horizon - t)
            path = position[active, None] + np.cumsum(_steps(rng, (active.size, width), cfg.params), axis=1)
            reached = path == a
            found = reached.any(axis=1)
            hit[active[found]] = t + reached[found].argmax(axis=1) + 1
            position[active] = path[:, -1]
            active = active[~found]
            t += width
        return _tally(hit[hit > 0]), int((hit == 0).sum()), size

    counts, censored, _ = _run_chunks(cfg, worker)
    logger.debug(f"Simulated T_{a}: {censored} of {cfg.samples} censored at {cfg.horizon}")
    return EmpiricalLaw("T", _law_params(cfg, a=a), counts, censored, cfg.samples, cfg.seed, cfg.horizon,
                        rng=cfg.rng_header())


def simulate_bridge(cfg: SimConfig, r: int) -> EmpiricalLaw:
    """First-return times of length-2r paths kept only when S_2r = 0."""
    if cfg.params.kind is not WalkKind.PLUS_MINUS:
        raise ValueError("simulate_bridge is defined for the PLUS_MINUS walk only")
    if r < 1:
        raise ValueError(f"simulate_bridge needs r >= 1, got {r}")
    length = 2 * r

    def worker(rng: np.random.Generator, size: int) -> Tuple[Dict[int, int], int, int]:
        returns: List[np.ndarray] = []
        kept = 0
        proposals = 0
        while kept < size:
            batch = max(size - kept, 256) * 2
            path = np.cumsum(_steps(rng, (batch, length), cfg.params), axis=1)
            bridges = path[path[:, -1] == 0][: size - kept]
            proposals += batch
            returns.append((bridges == 0).argmax(axis=1) + 1)
            kept += len(bridges)
        return _tally(np.concatenate(returns)), 0, proposals

    counts, censored, proposals = _run_chunks(cfg, worker)
    logger.debug(f"Bridge of length {length}: {cfg.samples} kept from {proposals} proposals")
    return EmpiricalLaw("bridge", _law_params(cfg, r=r), counts, censored, cfg.samples, cfg.seed, length,
                        proposals=proposals, rng=cfg.rng_header())


def sample_from_pmf(cfg: SimConfig, pmf: Pmf) -> EmpiricalLaw:
    """Inverse-CDF draws from an exact law; mass beyond the support lands in censored."""
    support = np.array(pmf.support, dtype=np.int64)
    cumulative = np.cumsum([float(pmf[n]) for n in pmf.support])
    if not pmf.truncated and pmf.total() == 1:
        cumulative[-1] = 1.0

    def worker(rng: np.random.Generator, size: int) -> Tuple[Dict[int, int], int, int]:
        index = np.searchsorted(cumulative, rng.random(size), side="right")
        inside = index < len(support)
        return _tally(support[index[inside]]), int((~inside).sum()), size

    counts, censored, _ = _run_chunks(cfg, worker)
    return EmpiricalLaw(pmf.law, dict(pmf.params), counts, censored, cfg.samples, cfg.seed, cfg.horizon,
                        rng=cfg.rng_header())


def _pool_bins(observed: List[int], expected: List[float]) -> Tuple[List[int], List[float]]:
    """Merge neighbouring bins until each expects at least MIN_EXPECTED counts."""
    pooled_obs: List[int] = []
    pooled_exp: List[float] = []
    acc_obs, acc_exp = 0, 0.0
    for o, e in zip(observed, expected):
        acc_obs += o
        acc_exp += e
        if acc_exp >= MIN_EXPECTED:
            pooled_obs.append(acc_obs)
            pooled_exp.append(acc_exp)
            acc_obs, acc_exp = 0, 0.0
    if acc_exp > 0 or acc_obs > 0:
        if pooled_exp:
            pooled_obs[-1] += acc_obs
            pooled_exp[-1] += acc_exp
        else:
            pooled_obs.append(acc_obs)
            pooled_exp.append(acc_exp)
    return pooled_obs, pooled_exp


def chi_square_check(emp: EmpiricalLaw, exact: Pmf, alpha_level: float) -> VerificationReport:
    """Pearson chi-square of empirical counts against exact masses.

    Mass the exact law leaves uncovered (defect or truncation tail) forms a
    final bin together with the censored count.
    """
    if not 0 < alpha_level < 1:
        raise ValueError(f"alpha_level must lie in (0, 1), got {alpha_level}")
    outside = [n for n, c in emp.counts.items() if c and n not in exact.mass]
    if outside:
        raise ValueError(f"Exact law does not cover empirical support points {sorted(outside)[:10]}")

    observed = [emp.counts.get(n, 0) for n in exact.support]
    expected = [emp.samples * float(exact[n]) for n in exact.support]
    tail_mass = max(1.0 - float(exact.total()), 0.0)
    if tail_mass > 0 or emp.censored:
        observed.append(emp.censored)
        expected.append(emp.samples * tail_mass)

    impossible = sum(o for o, e in zip(observed, expected) if e == 0)
    nonzero = [(o, e) for o, e in zip(observed, expected) if e > 0]
    obs, exp = _pool_bins([o for o, _ in nonzero], [e for _, e in nonzero])
    merges = len(nonzero) - len(exp)
    if merges:
        logger.debug(f"Chi-square for {emp.law}: pooled {len(nonzero)} bins into {len(exp)}")

    params = {**emp.params, "samples": emp.samples, "seed": emp.seed, "alpha_level": alpha_level}
    identity_id = f"CHI_SQUARE_{emp.law.upper()}"
    if len(exp) <= 1 and not impossible:
        logger.warning(f"Chi-square for {emp.law} has a single bin; passing trivially")
        return VerificationReport(
            identity_id=identity_id, params=params, lhs=0.0, rhs=None, residual=0.0, tolerance=None,
            passed=True, method="chi-square",
            details={"statistic": 0.0, "dof": 0, "threshold": None, "bins": len(exp), "degenerate": True},
        )

    dof = len(exp) - 1
    threshold = float(stats.chi2.ppf(1.0 - alpha_level, dof))
    if impossible:
        # any draw on a zero-mass point rejects outright; no finite statistic
        statistic, p_value, passed = None, 0.0, False
        logger.warning(f"Chi-square for {emp.law} failed: {impossible} observations where the exact mass is 0")
    else:
        result = stats.chisquare(obs, exp)
        statistic, p_value = float(result.statistic), float(result.pvalue)
        passed = statistic < threshold
        if not passed:
            logger.warning(
                f"Chi-square for {emp.law} failed: statistic {statistic:.3f} >= {threshold:.3f} (dof {dof})"
            )
    return VerificationReport(
        identity_id=identity_id,
        params=params,
        lhs=statistic,
        rhs=threshold,
        residual=statistic,
        tolerance=threshold,
        passed=passed,
        method="chi-square",
        details={
            "statistic": statistic,
            "dof": dof,
            "threshold": threshold,
            "p_value": p_value,
            "bins": len(exp),
            "pooled": merges,
            "impossible_observations": impossible,
            "degenerate": False,
        },
    )


def check_censoring(emp: EmpiricalLaw, exact_tail: Fraction) -> VerificationReport:
    """|censored/samples - tail| within CENSORING_SIGMAS binomial standard errors."""
    tail = float(exact_tail)
    observed = emp.censored / emp.samples
    sigma = math.sqrt(tail * (1.0 - tail) / emp.samples)
    gap = abs(observed - tail)
    bound = CENSORING_SIGMAS * sigma
    return VerificationReport(
        identity_id="CENSORING",
        params={**emp.params, "samples": emp.samples, "seed": emp.seed, "horizon": emp.horizon},
        lhs=observed,
        rhs=tail,
        residual=gap,
        tolerance=bound,
        passed=gap <= bound if sigma > 0 else emp.censored == 0 and tail == 0.0,
        method="normal-bound",
        details={"sigma": sigma, "censored": emp.censored},
    )


def exact_law_for(cfg: SimConfig, law: str, **kwargs: int) -> Pmf:
    if law == "S":
        return pmf_S(cfg.params, kwargs["n"])
    if law == "T":
        return pmf_T(cfg.params, kwargs["a"], cfg.horizon)
    if law == "bridge":
        return bridge_return_law(cfg.params, kwargs["r"])
    raise ValueError(f"Unknown simulated law '{law}', expected S, T or bridge")


def simulate_and_check(cfg: SimConfig, law: str, alpha_level: float, **kwargs: int
                       ) -> Tuple[EmpiricalLaw, List[VerificationReport]]:
    """Simulate one law and hold it against the exact one; T laws also get the censoring check."""
    exact = exact_law_for(cfg, law, **kwargs)
    if law == "S":
        emp = simulate_S(cfg, kwargs["n"])
    elif law == "T":
        emp = simulate_T(cfg, kwargs["a"])
    else:
        emp = simulate_bridge(cfg, kwargs["r"])

    reports = [chi_square_check(emp, exact, alpha_level)]
    if law == "T":
        reports.append(check_censoring(emp, 1 - exact.total()))
    return emp, reports
