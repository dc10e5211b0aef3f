from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from cipolla.errors import DomainError, OutOfRange, PrecisionExhausted
from cipolla.numerics import ali, li
from cipolla.polyengine import poly_P
from cipolla.primes import (
    PrimeTable,
    ali_float,
    check_classical,
    check_schoenfeld,
    check_tdistance,
    decimal_digits,
    li_float,
    nth_prime,
    prime_pi,
    r3_window,
    real_roots,
    s_N,
    tdistance_radius,
)
from cipolla.sturm import count_roots, isolate, sturm_sequence

from helpers import matches_rounded
from reference_values import (
    ALI_R3_DIGITS,
    ODD_ROOTS,
    R3_THRESHOLD,
    ROOT_PAIRS,
    S3_DIGITS,
    UPPER_R3_DIGITS,
    Y0,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


class TestSieve:
    def test_small(self):
        t = PrimeTable(50)
        assert list(t.primes()) == SMALL_PRIMES
        assert t.count == 15
        assert [t.nth(k) for k in range(1, 16)] == SMALL_PRIMES

    def test_nth(self):
        assert nth_prime(1) == 2
        assert nth_prime(6) == 13
        assert nth_prime(10**6) == 15485863

    def test_segment_sizes_agree(self):
        a = PrimeTable(16 * 10**6, segment=1 << 16)
        b = PrimeTable(16 * 10**6, segment=99991)
        assert a.nth(10**6) == b.nth(10**6) == 15485863
        assert a.count == b.count
        assert np.array_equal(a.primes(10**5), b.primes(10**5))

    def test_pi(self):
        assert prime_pi(2657) == 384
        assert prime_pi(10**6) == 78498
        assert prime_pi(1) == 0 and prime_pi(2) == 1

    def test_out_of_range(self):
        t = PrimeTable(100)
        with pytest.raises(OutOfRange):
            t.nth(26)
        with pytest.raises(OutOfRange):
            nth_prime(10**6, max_limit=10**6)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=2, max_value=20000))
    def test_matches_trial_division(self, n):
        t = PrimeTable(20000, segment=777)
        is_prime = all(n % d for d in range(2, int(n**0.5) + 1))
        assert (t.pi(n) - t.pi(n - 1) == 1) == is_prime


class TestSN:
    def test_s0(self):
        with mp.workdps(40):
            assert abs(s_N(100, 0) - 100 * mp.log(100)) < mpf("1e-25")

    def test_s1(self):
        with mp.workdps(40):
            n = mpf(12345)
            x = mp.log(n)
            assert abs(s_N(n, 1) - n * (x + mp.log(x) - 1)) < mpf("1e-25")

    def test_n2_allowed(self):
        # log log 2 < 0, so the expansion is finite but negative here
        assert mp.isfinite(s_N(2, 3)) and s_N(2, 3) < 0

    def test_domain(self):
        with pytest.raises(DomainError):
            s_N(1, 2)


class TestSweeps:
    def test_tdistance_small(self):
        rep = check_tdistance(1, 385)
        assert rep.violations == [1, 3, 5, 6, 7, 10]
        assert max(rep.violations) < 11

    def test_tdistance_eleven(self):
        assert check_tdistance(11, 11).passed

    @pytest.mark.slow
    def test_tdistance_sweep(self):
        assert check_tdistance(11, 10**6).passed

    def test_classical(self):
        rep = check_classical(10**6)
        assert rep.passed and rep.details["upper_checked"] == 10**6 - 688383 + 1

    def test_classical_threshold(self):
        with mp.workdps(30):
            n = 688383
            x = mp.log(n)
            y = mp.log(x)
            assert nth_prime(n) <= n * (x + y - 1 + (y - 2) / x)

    def test_schoenfeld(self):
        rep = check_schoenfeld(10**6)
        assert rep.passed and rep.details["pi_2657"] == 384

    def test_schoenfeld_2658(self):
        with mp.workdps(30):
            x = 2658
            assert abs(prime_pi(x) - li(x)) < mp.sqrt(x) * mp.log(x) / (8 * mp.pi)

    def test_float_screen(self):
        u = np.array([10.0, 1e3, 1e6])
        with mp.workdps(30):
            exact = [float(ali(v)) for v in (10, 1000, 10**6)]
        assert np.allclose(ali_float(u), exact, rtol=1e-13)
        assert np.allclose(li_float(np.array(exact)), u, rtol=1e-13)


class TestRoots:
    @pytest.mark.parametrize("n", sorted(ODD_ROOTS))
    def test_odd(self, n):
        e = real_roots(n)
        assert len(e.roots) == 1
        printed = ODD_ROOTS[n]
        assert matches_rounded(e.roots[0].mid, printed, len(printed.split(".")[1]) if "." in printed else 0)

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_none(self, n):
        assert real_roots(n).roots == ()

    @pytest.mark.parametrize("n", sorted(ROOT_PAIRS))
    def test_pairs(self, n):
        e = real_roots(n)
        assert len(e.roots) == 2
        for r, printed in zip(e.roots, ROOT_PAIRS[n]):
            assert r.lo > 0
            assert matches_rounded(r.mid, printed, len(printed.split(".")[1]))

    def test_enclosures(self):
        for n in range(1, 24):
            p = poly_P(n)
            e = real_roots(n, 15)
            for r in e.roots:
                assert r.hi - r.lo <= Fraction(1, 10**17)
                assert count_roots(p.scaled_coeffs, r.lo - Fraction(1, 10**17), r.hi) == 1
            assert len(e.roots) == count_roots(p.scaled_coeffs)

    def test_p10_sign_window(self):
        lo, hi = (r.mid for r in real_roots(10).roots)
        P = poly_P(10)
        with mp.workdps(30):
            assert P((lo + hi) / 2) > 0
            assert P(lo / 2) < 0 and P(hi + 1) < 0 and P(mpf(30)) < 0

    def test_sturm_basics(self):
        assert count_roots([-2, 0, 1]) == 2
        assert count_roots([1, -2, 1]) == 1  # double root counted once
        assert count_roots([1, 0, 1]) == 0
        assert len(isolate([0, -1, 0, 1])) == 3
        assert len(sturm_sequence([-1, 0, 0, 1])) >= 2


class TestR3:
    @staticmethod
    @pytest.fixture(scope="class")
    def rep():
        return r3_window(50)

    def test_y0(self, rep):
        assert abs(rep.y0 - mpf(Y0)) < mpf("1e-8")
        assert rep.y0_hi - rep.y0_lo < mpf("1e-9")

    def test_threshold(self, rep):
        with mp.workdps(40):
            assert abs(rep.threshold / mpf(R3_THRESHOLD) - 1) < mpf("1e-17")

    def test_digits(self, rep):
        assert decimal_digits(rep.s3, len(S3_DIGITS)) == S3_DIGITS
        assert decimal_digits(rep.ali_n, len(ALI_R3_DIGITS)) == ALI_R3_DIGITS
        assert decimal_digits(rep.upper, len(UPPER_R3_DIGITS)) == UPPER_R3_DIGITS
        assert rep.upper_below_s3

    def test_needs_digits(self):
        with pytest.raises(PrecisionExhausted):
            r3_window(20)


def test_tdistance_radius():
    with mp.workdps(30):
        assert tdistance_radius(1) == 0
        assert abs(tdistance_radius(100) - 10 * mp.log(100) ** 2.5 / mp.pi) < mpf("1e-20")
