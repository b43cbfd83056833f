#!/usr/bin/env python3
"""Tests for truncated series and the walk generating functions"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from dslab.errors import InconsistencyError
from dslab.exact_arith import binomial
from dslab.genfun import (TruncatedSeries, check_coefficients, check_convolution_product, check_quotient_relation,
                          check_recurrence_G, check_series_hitting_bound, check_square_root, genfun_G, genfun_sweep,
                          genfun_T, inv_sqrt_one_minus, sqrt_one_minus)
from dslab.walks import WalkKind, WalkParams

HALF = WalkParams(Fraction(1, 2))


def test_series_arithmetic():
    """Test ring operations modulo ξ^(N+1)"""
    print("Testing TruncatedSeries arithmetic...")

    x = TruncatedSeries.monomial(1, 1, 5)
    geometric = (1 - x).inverse()
    assert geometric.coefficients == tuple(Fraction(1) for _ in range(6))
    assert (geometric * (1 - x)).coefficients == TruncatedSeries.constant(1, 5).coefficients
    assert ((1 + x) ** 3).coefficients[:4] == (1, 3, 3, 1)
    assert ((1 - x) ** -2)[4] == 5
    assert (x * 3 - x)[1] == 2
    print("   ✓ Inverse, powers and scalars")

    mixed = TruncatedSeries((1, 2, 3), 2) + TruncatedSeries((1, 1, 1, 1, 1), 4)
    assert mixed.order == 2 and mixed.coefficients == (2, 3, 4)
    print("   ✓ Mixed orders truncate to the smaller one")

    try:
        TruncatedSeries((0, 1), 3).inverse()
        assert False, "zero constant term has no inverse"
    except ZeroDivisionError:
        pass
    try:
        TruncatedSeries((1, 1), 3).shift_down(1)
        assert False, "non-zero low coefficient should be reported"
    except InconsistencyError:
        pass
    shifted = TruncatedSeries((0, 0, 5, 7), 3).shift_down(2)
    assert shifted.order == 1 and shifted.coefficients == (5, 7)
    print("   ✓ Inverse and shift preconditions")


def test_square_roots():
    """Test (1 - cξ^2)^(±1/2) against their binomial coefficients"""
    print("\nTesting square-root series...")

    root = sqrt_one_minus(1, 8)
    assert root.coefficients[:5] == (1, 0, Fraction(-1, 2), 0, Fraction(-1, 8))
    inverse = inv_sqrt_one_minus(1, 10)
    for n in range(6):
        assert inverse[2 * n] == binomial(2 * n, n) / Fraction(4) ** n
        assert inverse[2 * n + 1] == 0
    assert (root * root).coefficients == TruncatedSeries((1, 0, -1), 8).coefficients
    assert (root * inverse.truncate(8)).coefficients == TruncatedSeries.constant(1, 8).coefficients
    print("   ✓ Explicit coefficients and products")

    for c in (Fraction(1), Fraction(8, 9), Fraction(24, 25)):
        assert check_square_root(c, 40).passed
    try:
        TruncatedSeries((2, 1), 3).sqrt()
        assert False, "sqrt needs constant term 1"
    except ValueError:
        print("   ✓ Constant term other than 1 rejected")


def test_occupation_series():
    """Test documented coefficients of G(ξ, j)"""
    print("\nTesting genfun_G...")

    g0 = genfun_G(HALF, 0, 4)
    assert g0.coefficients == (1, 0, Fraction(1, 2), 0, Fraction(3, 8))
    assert genfun_G(HALF, 1, 5)[3] == Fraction(3, 8)
    nd = genfun_G(WalkParams(Fraction(1, 3), WalkKind.NON_DECREASING), 0, 10)
    assert all(nd[n] == Fraction(2, 3) ** n for n in range(11))
    print("   ✓ Documented values")

    for p in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)):
        for kind in WalkKind:
            params = WalkParams(p, kind)
            low = -3 if kind is WalkKind.PLUS_MINUS else 0
            for j in range(low, 4):
                assert check_coefficients(params, j, 30, "G").passed
                assert check_recurrence_G(params, j, 30).passed
    print("   ✓ Coefficients and recurrence match the exact masses")

    try:
        genfun_G(WalkParams(Fraction(1, 2), WalkKind.NON_DECREASING), -1, 10)
        assert False, "negative level for the 0/1 walk"
    except ValueError:
        pass


def test_passage_series():
    """Test documented coefficients of E(ξ^T_a)"""
    print("\nTesting genfun_T...")

    t1 = genfun_T(HALF, 1, 5)
    assert (t1[1], t1[3], t1[5]) == (Fraction(1, 2), Fraction(1, 8), Fraction(1, 16))
    assert t1[0] == t1[2] == t1[4] == 0
    assert genfun_T(WalkParams(Fraction(1, 3)), 0, 4)[2] == Fraction(4, 9)
    nd = genfun_T(WalkParams(Fraction(1, 2), WalkKind.NON_DECREASING), 1, 12)
    assert all(nd[n] == Fraction(1, 2 ** n) for n in range(1, 13))
    print("   ✓ Documented values")

    for p in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)):
        for a in (-3, -2, -1, 0, 1, 2, 3):
            assert check_coefficients(WalkParams(p), a, 30, "T").passed
        for a in (1, 2, 3):
            assert check_coefficients(WalkParams(p, WalkKind.NON_DECREASING), a, 30, "T").passed
    print("   ✓ Coefficients match the exact masses")

    for bad in ((WalkParams(Fraction(1, 2), WalkKind.NON_DECREASING), 0, 10), (HALF, 0, 1), (HALF, 4, 3)):
        try:
            genfun_T(*bad)
            assert False, f"{bad} should be rejected"
        except ValueError:
            pass


def test_quotient_relation():
    """Test G(ξ, a) = G(ξ, 0) E(ξ^T_a) coefficient by coefficient"""
    print("\nTesting check_quotient_relation...")

    assert check_quotient_relation(HALF, 1, 20).passed
    assert check_quotient_relation(WalkParams(Fraction(2, 5)), -2, 20).passed
    report = check_quotient_relation(WalkParams(Fraction(1, 3), WalkKind.NON_DECREASING), 3, 20)
    assert report.passed and report.details["first_mismatch"] is None
    print("   ✓ Holds for both walks")

    for bad in ((HALF, 0, 20), (HALF, 3, 4)):
        try:
            check_quotient_relation(*bad)
            assert False, f"{bad} should be rejected"
        except ValueError:
            pass


def test_products_and_bounds():
    """Test E(ξ^T_a)E(ξ^T_b) = E(ξ^T_{a+b}) and the partial-sum bound"""
    print("\nTesting products and hitting bounds...")

    for params in (HALF, WalkParams(Fraction(1, 3)), WalkParams(Fraction(1, 3), WalkKind.NON_DECREASING)):
        assert check_convolution_product(params, 1, 2, 30).passed
        assert check_convolution_product(params, 2, 2, 30).passed
    assert check_convolution_product(WalkParams(Fraction(2, 5)), -1, -3, 30).passed

    report = check_series_hitting_bound(WalkParams(Fraction(2, 5)), 1, (10, 20, 40))
    assert report.passed and report.rhs == Fraction(2, 3)
    assert report.lhs < Fraction(2, 3)
    assert report.residual == 0 and report.details["gap"] == Fraction(2, 3) - report.lhs > 0
    assert report.details["partial_sums"][-1] == report.lhs
    print("   ✓ Products exact, partial sums increase below P{T_1 < inf}")

    try:
        check_convolution_product(HALF, 1, -1, 10)
        assert False, "mixed signs should be rejected"
    except ValueError:
        pass


def test_genfun_sweep():
    """Test the full sweep at order 60"""
    print("\nTesting genfun_sweep...")

    reports = genfun_sweep([Fraction(1, 2), Fraction(2, 5)], 3, 60)
    failed = [r.params for r in reports if not r.passed]
    assert not failed, failed
    assert {r.identity_id for r in reports} >= {"GENFUN_COEFFICIENTS_G", "GENFUN_COEFFICIENTS_T",
                                               "GENFUN_QUOTIENT", "GENFUN_RECURRENCE", "GENFUN_SQRT"}
    print(f"   ✓ {len(reports)} series checks passed")


if __name__ == "__main__":
    print("Running generating function tests\n")
    print("=" * 50)

    try:
        test_series_arithmetic()
        test_square_roots()
        test_occupation_series()
        test_passage_series()
        test_quotient_relation()
        test_products_and_bounds()
        test_genfun_sweep()
        print("\n" + "=" * 50)
        print("All tests passed! ✓✓✓")
    except Exception as e:
        print(f"\nTest failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
