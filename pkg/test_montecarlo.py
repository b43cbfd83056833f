#!/usr/bin/env python3
"""Tests for seeded simulation and the chi-square comparison with exact laws"""

import math
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from dslab.montecarlo import (EmpiricalLaw, SimConfig, check_censoring, chi_square_check, sample_from_pmf,
                              simulate_and_check, simulate_bridge, simulate_S, simulate_T)
from dslab.walks import Pmf, WalkKind, WalkParams, bridge_return_law, pmf_negative_binomial, pmf_S, pmf_T

ALPHA = 1e-3


def config(p="1/2", kind="pm", samples=20000, horizon=200, threads=1, seed=20240607, chunk_size=4096):
    return SimConfig(seed=seed, samples=samples, horizon=horizon, params=WalkParams(p, kind),
                     chunk_size=chunk_size, threads=threads)


def test_sim_config():
    """Test configuration validation and chunking"""
    print("Testing SimConfig...")

    cfg = config(samples=10000, chunk_size=4096)
    assert cfg.chunk_sizes == [4096, 4096, 1808]
    assert len(cfg.generators()) == 3
    header = cfg.rng_header()
    assert header["generator"] == "numpy.random.Philox" and header["chunks"] == 3
    print("   ✓ Chunks and RNG header")

    for kwargs in ({"seed": -1}, {"seed": 2 ** 64}, {"samples": 0}, {"horizon": 0}, {"threads": 0}):
        try:
            config(**kwargs)
            assert False, f"{kwargs} should be rejected"
        except ValueError:
            pass
    print("   ✓ Invalid settings rejected")


def test_determinism_across_threads():
    """Test that counts depend on the seed only, never on the thread count"""
    print("\nTesting determinism...")

    single = simulate_T(config(samples=9000, horizon=100, threads=1, chunk_size=1000), 1)
    pooled = simulate_T(config(samples=9000, horizon=100, threads=4, chunk_size=1000), 1)
    assert single.counts == pooled.counts and single.censored == pooled.censored
    again = simulate_S(config(samples=5000, threads=3, chunk_size=700), 10)
    assert again.counts == simulate_S(config(samples=5000, threads=1, chunk_size=700), 10).counts
    other = simulate_S(config(samples=5000, seed=7, chunk_size=700), 10)
    assert other.counts != again.counts
    print("   ✓ Identical counts for 1, 3 and 4 threads")


def test_simulate_S():
    """Test the occupation law against exact masses"""
    print("\nTesting simulate_S...")

    zero = simulate_S(config(samples=1000), 0)
    assert zero.counts == {0: 1000} and zero.censored == 0
    report = chi_square_check(zero, pmf_S(WalkParams(Fraction(1, 2)), 0), ALPHA)
    assert report.passed and report.details["degenerate"]
    print("   ✓ n = 0 is a point mass")

    cfg = config(p="1/3")
    emp = simulate_S(cfg, 6)
    exact = pmf_S(cfg.params, 6)
    for j, mass in exact.mass.items():
        m = float(mass)
        assert abs(emp.frequency(j) - m) <= 4 * math.sqrt(m * (1 - m) / cfg.samples)
    assert chi_square_check(emp, exact, ALPHA).passed
    print("   ✓ Frequencies within 4 standard errors, chi-square passes")

    nd = config(p="2/5", kind="nd")
    emp, reports = simulate_and_check(nd, "S", ALPHA, n=12)
    assert emp.law == "S" and all(r.passed for r in reports)
    print("   ✓ Non-decreasing walk")


def test_wrong_p_detected():
    """Test that the chi-square check rejects a law at the wrong p"""
    print("\nTesting chi-square power...")

    emp = simulate_S(config(), 20)
    report = chi_square_check(emp, pmf_S(WalkParams(Fraction(3, 5)), 20), ALPHA)
    assert not report.passed and report.details["p_value"] < ALPHA
    print("   ✓ p = 1/2 samples rejected against p = 3/5")


def test_simulate_T():
    """Test hitting times with censoring at the horizon"""
    print("\nTesting simulate_T...")

    cfg = config(horizon=200)
    emp, reports = simulate_and_check(cfg, "T", ALPHA, a=1)
    assert [r.identity_id for r in reports] == ["CHI_SQUARE_T", "CENSORING"]
    assert all(r.passed for r in reports)
    assert emp.censored > 0
    assert sum(emp.counts.values()) + emp.censored == cfg.samples
    assert all(n % 2 == 1 for n in emp.counts)
    print("   ✓ ±1 walk, a = 1")

    cfg = config(p="2/5", horizon=150)
    _, reports = simulate_and_check(cfg, "T", ALPHA, a=-2)
    assert all(r.passed for r in reports)
    _, reports = simulate_and_check(cfg, "T", ALPHA, a=0)
    assert all(r.passed for r in reports)
    print("   ✓ Negative level and return time")

    cfg = config(kind="nd", horizon=60)
    _, reports = simulate_and_check(cfg, "T", ALPHA, a=2)
    assert all(r.passed for r in reports)
    print("   ✓ Non-decreasing walk")

    for bad in ((config(kind="nd"), 0), (config(horizon=3), 5)):
        try:
            simulate_T(*bad)
            assert False, f"{bad} should be rejected"
        except ValueError:
            pass


def test_simulate_bridge():
    """Test that the bridge return law is the same at two values of p"""
    print("\nTesting simulate_bridge...")

    for p in ("1/2", "1/3"):
        cfg = config(p=p, samples=10000)
        emp = simulate_bridge(cfg, 3)
        assert emp.proposals >= cfg.samples
        assert set(emp.counts) <= {2, 4, 6}
        assert chi_square_check(emp, bridge_return_law(cfg.params, 3), ALPHA).passed
        assert emp.to_dict()["proposals"] == emp.proposals
    print("   ✓ Return law of the length-6 bridge at p = 1/2 and 1/3")

    try:
        simulate_bridge(config(kind="nd"), 2)
        assert False, "bridges need the ±1 walk"
    except ValueError:
        pass


def test_sample_from_pmf():
    """Test inverse-CDF sampling against the law it samples"""
    print("\nTesting sample_from_pmf...")

    law = pmf_negative_binomial(2, Fraction(1, 3), 40)
    emp = sample_from_pmf(config(horizon=40), law)
    assert chi_square_check(emp, law, ALPHA).passed
    other = pmf_negative_binomial(3, Fraction(1, 3), 40)
    assert not chi_square_check(emp, other, ALPHA).passed
    print("   ✓ Self-consistent and discriminating")


def test_acceptance_runs():
    """Test S_10, T_1 and the length-8 bridge at seed 42 with a million samples"""
    print("\nTesting acceptance runs...")

    cases = [("S", {"n": 10}), ("T", {"a": 1}), ("bridge", {"r": 4})]
    for law, kwargs in cases:
        cfg = config(samples=10 ** 6, horizon=1000, seed=42, chunk_size=65536)
        emp, reports = simulate_and_check(cfg, law, ALPHA, **kwargs)
        chi = reports[0]
        assert chi.method == "chi-square" and not chi.details["degenerate"]
        assert chi.details["statistic"] < chi.details["threshold"], chi.details
        assert all(report.passed for report in reports)
        if law == "T":
            assert emp.censored > 0 and reports[1].identity_id == "CENSORING"

        rerun, _ = simulate_and_check(config(samples=10 ** 6, horizon=1000, seed=42, chunk_size=65536, threads=4),
                                      law, ALPHA, **kwargs)
        assert rerun.counts == emp.counts and rerun.censored == emp.censored
        print(f"   ✓ {law} {kwargs}: statistic {chi.details['statistic']:.2f} below {chi.details['threshold']:.2f}")


def test_censoring_and_invariants():
    """Test the censoring bound, impossible observations and count invariants"""
    print("\nTesting censoring and invariants...")

    emp = EmpiricalLaw("T", {"a": 1}, {1: 900}, 100, 1000, 0, 10)
    assert check_censoring(emp, Fraction(1, 10)).passed
    assert not check_censoring(emp, Fraction(1, 2)).passed
    assert check_censoring(emp, Fraction(1, 2)).method == "normal-bound"

    try:
        EmpiricalLaw("T", {}, {1: 10}, 5, 100, 0, 10)
        assert False, "counts must add up to the sample size"
    except ValueError:
        pass

    params = WalkParams(Fraction(1, 2))
    gapped = Pmf("S", params.p, params.kind, {}, {0: Fraction(1, 2), 1: Fraction(0), 2: Fraction(1, 2)})
    emp = EmpiricalLaw("S", {}, {0: 500, 1: 3, 2: 497}, 0, 1000, 0, 2)
    report = chi_square_check(emp, gapped, ALPHA)
    assert not report.passed and report.details["impossible_observations"] == 3
    assert report.details["statistic"] is None and report.details["p_value"] == 0.0

    coin = EmpiricalLaw("S", {"n": 1}, {-1: 260, 1: 240}, 0, 500, 0, 1)
    report = chi_square_check(coin, pmf_S(params, 1), ALPHA)
    # (10^2 + 10^2) / 250
    assert math.isclose(report.details["statistic"], 0.8) and report.details["dof"] == 1
    assert 0.37 < report.details["p_value"] < 0.372 and report.passed

    for alpha in (0.0, 1.0):
        try:
            chi_square_check(emp, gapped, alpha)
            assert False, "alpha must lie in (0, 1)"
        except ValueError:
            pass
    try:
        chi_square_check(EmpiricalLaw("S", {}, {99: 10}, 0, 10, 0, 2), gapped, ALPHA)
        assert False, "uncovered support should be rejected"
    except ValueError:
        pass
    print("   ✓ Censoring bound, impossible counts and preconditions")


if __name__ == "__main__":
    print("Running Monte Carlo tests\n")
    print("=" * 50)

    try:
        test_sim_config()
        test_determinism_across_threads()
        test_simulate_S()
        test_wrong_p_detected()
        test_simulate_T()
        test_simulate_bridge()
        test_sample_from_pmf()
        test_censoring_and_invariants()
        test_acceptance_runs()
        print("\n" + "=" * 50)
        print("All tests passed! ✓✓✓")
    except Exception as e:
        print(f"\nTest failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
