#!/usr/bin/env python3
"""Tests for the Bessel convolution and Laplace transform quadrature checks"""

import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from dslab.bessel import bessel_j_value
from dslab.errors import TruncationTooShort
from dslab.integral_verify import (IdentityId, IntegralCase, QuadratureConfig, check_laplace_consistency,
                                   check_semigroup_ratio, convolution_lhs, convolution_rhs, default_convolution_grid,
                                   default_laplace_grid, laplace_cutoff, laplace_lhs, laplace_rhs,
                                   laplace_tail_bound, sweep, verify_case, verify_convolution, verify_laplace)

CFG = QuadratureConfig()


def test_convolution_examples():
    """Test the documented convolution cases"""
    print("Testing verify_convolution...")

    report = verify_convolution(IntegralCase(IdentityId.CONV_16_38, mu=1, nu=1, a_or_alpha=2), CFG)
    assert report.passed and report.residual < 1e-8
    assert abs(report.rhs - bessel_j_value(2, 2.0)) < 1e-15
    print("   ✓ CONV_16_38 at mu=nu=1, a=2")

    report = verify_convolution(IntegralCase(IdentityId.CONV_16_39, mu=1, nu=1, a_or_alpha=1), CFG)
    assert report.passed and abs(report.rhs - 2 * bessel_j_value(2, 1.0)) < 1e-15
    print("   ✓ CONV_16_39 at mu=nu=1, a=1")

    report = verify_convolution(IntegralCase(IdentityId.CONV_16_40A, mu=1, nu=1, a_or_alpha=1), CFG)
    expected = (math.sqrt(math.pi) / 2) ** 2 / (math.sqrt(2 * math.pi) * 2) * bessel_j_value(2.5, 1.0)
    assert report.passed and abs(report.rhs - expected) < 1e-14
    print("   ✓ CONV_16_40A at mu=nu=1, a=1")


def test_endpoint_singularities():
    """Test orders below one, where x^(mu-1) blows up at the origin"""
    print("\nTesting endpoint singularities...")

    case = IntegralCase(IdentityId.CONV_16_38, mu=0.5, nu=0.5, a_or_alpha=0.01)
    report = verify_convolution(case, CFG)
    assert report.passed, report.details
    print("   ✓ Small-argument case with mu = 0.5")

    case = IntegralCase(IdentityId.CONV_16_39, mu=0.5, nu=0.5, a_or_alpha=2.0)
    full = convolution_lhs(case, CFG).value
    halved = convolution_lhs(case, QuadratureConfig(max_subdivisions=CFG.max_subdivisions // 2)).value
    assert abs(full - halved) <= 10 * CFG.rel_tol * abs(full)
    print("   ✓ Result stable when the subdivision limit is halved")


def test_laplace_examples():
    """Test the documented Laplace transform values"""
    print("\nTesting verify_laplace...")

    report = verify_laplace(IntegralCase(IdentityId.LAP_19_45, mu=1, a_or_alpha=1, beta=1), CFG)
    assert report.passed and abs(report.rhs - (math.sqrt(2) - 1) / math.sqrt(2)) < 1e-14
    report = verify_laplace(IntegralCase(IdentityId.LAP_19_46, mu=2, a_or_alpha=1, beta=1), CFG)
    assert report.passed and abs(report.rhs - (math.sqrt(2) - 1) ** 2 / 2) < 1e-14
    report = verify_laplace(IntegralCase(IdentityId.LAP_19_47, mu=1, a_or_alpha=2, beta=1), CFG)
    assert report.passed and abs(report.rhs - 5 ** -1.5) < 1e-14
    print("   ✓ Closed forms and quadrature agree")


def test_laplace_tail():
    """Test the truncation point and its tail bound"""
    print("\nTesting Laplace truncation...")

    case = IntegralCase(IdentityId.LAP_19_45, mu=0.5, a_or_alpha=0.5, beta=2.0)
    cutoff = laplace_cutoff(case.a_or_alpha, CFG)
    assert cutoff == 100.0
    assert laplace_tail_bound(case, cutoff) < CFG.abs_tol
    near = laplace_lhs(case, CFG, cutoff).value
    far = laplace_lhs(case, CFG, 2 * cutoff).value
    assert abs(near - far) < 1e-11
    print("   ✓ Doubling the cutoff changes nothing above abs_tol")

    strict = QuadratureConfig(abs_tol=1e-30)
    try:
        verify_laplace(case, strict)
        assert False, "tail above abs_tol should raise"
    except TruncationTooShort:
        print("   ✓ Tail above abs_tol raises")

    report = verify_case(case, strict)
    assert not report.passed and "TruncationTooShort" in report.error
    print("   ✓ verify_case turns the error into a failed report")


def test_subdivision_limit():
    """Test that running out of subdivisions fails the case without raising"""
    print("\nTesting subdivision limit...")

    case = IntegralCase(IdentityId.LAP_19_45, mu=1, a_or_alpha=0.5, beta=2.0)
    report = verify_case(case, QuadratureConfig(max_subdivisions=1))
    assert not report.passed
    print(f"   ✓ Reported: {report.error}")


def test_parameter_validation():
    """Test rejection of non-positive parameters"""
    print("\nTesting parameter validation...")

    bad_cases = [
        dict(identity_id=IdentityId.CONV_16_38, mu=0, nu=1, a_or_alpha=1),
        dict(identity_id=IdentityId.CONV_16_38, mu=1, nu=-1, a_or_alpha=1),
        dict(identity_id=IdentityId.LAP_19_45, mu=1, a_or_alpha=1, beta=0),
        dict(identity_id="NOT_AN_IDENTITY", mu=1, a_or_alpha=1),
    ]
    for kwargs in bad_cases:
        try:
            IntegralCase(**kwargs)
            assert False, f"{kwargs} should be rejected"
        except ValueError:
            pass
    print("   ✓ Invalid cases rejected")


def test_semigroup_and_consistency():
    """Test the cross-identity checks"""
    print("\nTesting semigroup ratio and Laplace consistency...")

    for mu, nu, a in ((0.5, 1.0, 1.0), (1.0, 2.0, 2.0), (2.0, 2.0, 3.0)):
        report = check_semigroup_ratio(mu, nu, a, CFG)
        assert report.passed, report.to_dict()
    print("   ✓ Ratio of the two semigroup convolutions")

    for nu, alpha0, beta in ((1.0, 1.0, 1.0), (2.0, 0.5, 2.0)):
        report = check_laplace_consistency(nu, alpha0, beta, CFG)
        assert report.passed, report.to_dict()
    print("   ✓ Integrating one transform over alpha gives the other")


def test_default_sweeps():
    """Test the full default grids"""
    print("\nTesting default sweeps...")

    convolutions = default_convolution_grid()
    laplace = default_laplace_grid()
    assert len(convolutions) == 4 * 4 * 4 * 4
    assert len(laplace) == 4 * 4 * 3 * 3

    for grid in (convolutions, laplace):
        reports = sweep(grid, CFG)
        assert len(reports) == len(grid)
        failed = [r.to_dict() for r in reports if not r.passed]
        assert not failed, failed[:3]
        for report in reports:
            if abs(report.rhs) > 1e-3:
                assert report.details["relative_residual"] <= 1e-8, report.to_dict()
    print("   ✓ Every grid case passes")

    single = sweep([IntegralCase(IdentityId.CONV_16_38, mu=2, nu=3.5, a_or_alpha=5)], CFG)
    assert len(single) == 1
    assert convolution_rhs(IntegralCase(IdentityId.CONV_16_38, mu=2, nu=3.5, a_or_alpha=5)) == single[0].rhs
    assert laplace_rhs(IntegralCase(IdentityId.LAP_19_47A, mu=1, a_or_alpha=1, beta=1)) > 0

    try:
        sweep([], CFG)
        assert False, "empty grid should be rejected"
    except ValueError:
        print("   ✓ Empty grid rejected")


if __name__ == "__main__":
    print("Running integral verification tests\n")
    print("=" * 50)

    try:
        test_convolution_examples()
        test_endpoint_singularities()
        test_laplace_examples()
        test_laplace_tail()
        test_subdivision_limit()
        test_parameter_validation()
        test_semigroup_and_consistency()
        test_default_sweeps()
        print("\n" + "=" * 50)
        print("All tests passed! ✓✓✓")
    except Exception as e:
        print(f"\nTest failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
