#!/usr/bin/env python3
"""Tests for exact rationals, factorials, binomials and half-integer Gamma"""

import os
import random
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from dslab.exact_arith import (FactorialTable, HalfIntGamma, binomial, check_duplication, format_rational,
                               gamma_at_half_multiple, gamma_half, gamma_int, parse_rational)


def test_gamma_int():
    """Test Γ at positive integers"""
    print("Testing gamma_int...")

    assert gamma_int(1) == 1
    assert gamma_int(5) == 24
    assert gamma_int(21) == 2432902008176640000
    for n in range(1, 60):
        assert gamma_int(n + 1) == n * gamma_int(n)
    print("   ✓ Γ(n+1) = nΓ(n)")

    for bad in (0, -3):
        try:
            gamma_int(bad)
            assert False, f"gamma_int({bad}) should be rejected"
        except ValueError:
            pass
    print("   ✓ Poles rejected")


def test_gamma_half():
    """Test Γ at half-integers in the symbolic √π form"""
    print("\nTesting gamma_half...")

    assert gamma_half(1) == HalfIntGamma(Fraction(1), 1)
    assert gamma_half(3) == HalfIntGamma(Fraction(1, 2), 1)
    assert gamma_half(5) == HalfIntGamma(Fraction(3, 4), 1)
    for m in range(1, 80, 2):
        assert gamma_half(m + 2).coefficient == Fraction(m, 2) * gamma_half(m).coefficient
    print("   ✓ Recurrence on odd arguments holds")

    for bad in (0, 2, -1):
        try:
            gamma_half(bad)
            assert False, f"gamma_half({bad}) should be rejected"
        except ValueError:
            pass

    assert gamma_at_half_multiple(4) == HalfIntGamma(Fraction(1), 0)
    assert gamma_at_half_multiple(7).sqrt_pi_power == 1
    assert abs(gamma_at_half_multiple(5).to_float() - 1.329340388179137) < 1e-14
    print("   ✓ Even and odd multiples of 1/2")


def test_duplication():
    """Test the duplication formula at every half-integer up to 20"""
    print("\nTesting check_duplication...")

    for x in (Fraction(2), Fraction(1, 2), Fraction(3)):
        report = check_duplication(x)
        assert report.passed, f"Duplication failed at x={x}"
    assert check_duplication(Fraction(2)).lhs == 6
    assert check_duplication(Fraction(3)).rhs == 120

    for k in range(1, 41):
        report = check_duplication(Fraction(k, 2))
        assert report.passed and report.residual == 0, f"k={k}"
    print("   ✓ Zero residual for x = k/2, k = 1..40")

    try:
        check_duplication(Fraction(1, 3))
        assert False, "x=1/3 should be rejected"
    except ValueError:
        print("   ✓ Non half-integer rejected")


def test_binomial():
    """Test binomials and the out-of-range convention"""
    print("\nTesting binomial...")

    assert binomial(4, 2) == 6
    assert binomial(0, 0) == 1
    assert binomial(10, -1) == 0
    assert binomial(3, 5) == 0
    for n in range(1, 65):
        for k in range(0, n + 1):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)
    print("   ✓ Pascal rule up to n = 64")


def test_rationals():
    """Test rational arithmetic laws and the num/den codec"""
    print("\nTesting rationals...")

    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (Fraction(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert parse_rational(format_rational(a)) == a

    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert format_rational(5) == "5/1"
    assert parse_rational("2/5") == Fraction(2, 5)
    assert parse_rational("7") == 7
    for bad in ("1/0", "abc", "1.5", "1//2"):
        try:
            parse_rational(bad)
            assert False, f"'{bad}' should not parse"
        except ValueError:
            pass
    print("   ✓ Codec and malformed input")


def test_factorial_table():
    """Test the factorial cache and its cap"""
    print("\nTesting FactorialTable...")

    table = FactorialTable(cap=10)
    assert table(0) == 1
    assert table(10) == 3628800
    assert table(12) == 479001600
    assert len(table._table) == 11
    print("   ✓ Arguments above the cap are computed on demand")


if __name__ == "__main__":
    print("Running exact arithmetic tests\n")
    print("=" * 50)

    try:
        test_gamma_int()
        test_gamma_half()
        test_duplication()
        test_binomial()
        test_rationals()
        test_factorial_table()
        print("\n" + "=" * 50)
        print("All tests passed! ✓✓✓")
    except Exception as e:
        print(f"\nTest failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
