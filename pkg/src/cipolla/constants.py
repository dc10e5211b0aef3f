"""Explicit thresholds c_N, d_N, x_N, v_N, M_n, z'_N and z_N.

Every constant is the root of a function that is monotone on the search
domain, so plain bisection on a bracket gives a certified enclosure.
Precision is ``digits + GUARD`` throughout, raised further wherever the
defining expression cancels.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import mpmath
from mpmath import mp, mpf

from . import __version__
from .errors import PrecisionExhausted, QuadratureFailure
from .numerics import ali, f_N_value, li
from .polyengine import a_sequence, poly_P
from .report import CheckReport
from .sturm import real_roots

GUARD = 10
MAX_DIGITS = 2000

TABULATED_N = tuple(range(1, 16)) + (20, 30, 40, 50, 60)


def _check_digits(digits):
    if digits < 6:
        raise ValueError("digits must be >= 6")
    if digits > MAX_DIGITS:
        raise PrecisionExhausted(f"{digits} digits exceeds the configured maximum {MAX_DIGITS}")


def _bisect(f, lo, hi, digits, increasing=True):
    """Root of a monotone ``f`` on [lo, hi] with relative width 10^-(digits+5)."""
    lo, hi = mpf(lo), mpf(hi)
    eps = mpf(10) ** (-(digits + 5))
    while hi - lo > eps * max(1, abs(hi)):
        mid = (lo + hi) / 2
        v = f(mid)
        if (v < 0) == increasing:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _factorials(N):
    out = [1]
    for n in range(1, N + 2):
        out.append(out[-1] * n)
    return out


def _factorial_sum(x, N):
    """sum_{n=1}^N n!/x^n."""
    s = mpf(0)
    fact = 1
    xp = mpf(1)
    for n in range(1, N + 1):
        fact *= n
        xp *= x
        s += fact / xp
    return s


# ---------------------------------------------------------------------------
# c_N, sigma_N, d_N


@lru_cache(maxsize=None)
def solve_c(N: int, digits: int = 30) -> mpf:
    """The root x > 1 of x (1 - sum_{n<=N} n!/x^n) = 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    _check_digits(digits)
    with mp.workdps(digits + GUARD):

        def g(x):
            # x - sum n!/x^(n-1) - 1 is increasing on x > 0
            return x - x * _factorial_sum(x, N) - 1

        lo = 1 + mpf(2) ** -20
        hi = mpf(2)
        while g(hi) < 0:
            lo, hi = hi, 2 * hi
        return _bisect(g, lo, hi, digits)


@lru_cache(maxsize=None)
def solve_sigma(N: int, digits: int = 30) -> mpf:
    """The root of sum_{n<=N} n!/x^n = 1, the left end of the domain of d_N's equation."""
    with mp.workdps(digits + GUARD):

        def g(x):
            return 1 - _factorial_sum(x, N)

        lo, hi = mpf(1) / 2, mpf(2)
        while g(hi) < 0:
            lo, hi = hi, 2 * hi
        return _bisect(g, lo, hi, digits)


def _d_function(x, N, digits, a):
    """[-log(1 - S) - sum a_n/n x^-n] (N+1) x^(N+1)/a_(N+1) - 1; the bracket is a tail of size x^-(N+1)."""
    with mp.workdps(20):
        lost = (N + 1) * float(mpmath.log10(max(abs(mpf(x)), 1)))
    with mp.workdps(digits + GUARD + 10 + int(lost)):
        x = mpf(x)
        S = _factorial_sum(x, N)
        head = mpf(0)
        xp = mpf(1)
        for n in range(1, N + 1):
            xp *= x
            head += mpf(a[n]) / n / xp
        tail = -mp.log(1 - S) - head
        return +(tail * (N + 1) * x ** (N + 1) / a[N + 1] - 1)


@lru_cache(maxsize=None)
def solve_d(N: int, digits: int = 30) -> mpf:
    """Solution of the defining equation of d_N on x > sigma_N (the left side decreases there)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    _check_digits(digits)
    a = a_sequence(N + 1)
    sigma = solve_sigma(N, digits + 10)
    with mp.workdps(digits + GUARD):

        def F(x):
            return _d_function(x, N, digits, a)

        # F -> +inf at sigma+, and tends to b_(N+1)/a_(N+1) - 1 < 0 at infinity
        eps = mpf(2) ** -10
        lo = sigma * (1 + eps)
        while F(lo) < 0:
            eps /= 2
            lo = sigma * (1 + eps)
            if eps < mpf(10) ** (-digits):
                raise PrecisionExhausted(f"no bracket for d_{N} near sigma_{N}")
        hi = lo + 1
        while F(hi) > 0:
            lo, hi = hi, 2 * hi
        return _bisect(F, lo, hi, digits, increasing=False)


def c_residual(N, x, digits=30):
    with mp.workdps(digits + GUARD):
        return abs(x * (1 - _factorial_sum(x, N)) - 1)


def d_residual(N, x, digits=30):
    return abs(_d_function(x, N, digits, a_sequence(N + 1)))


# ---------------------------------------------------------------------------
# rows


@dataclass(frozen=True)
class ConstantsRow:
    N: int
    c_N: mpf
    d_N: mpf
    alpha_N: mpf
    beta_N: mpf
    f_N: Fraction
    x_N: mpf
    precision_digits: int

    def to_json_obj(self) -> dict:
        def s(v):
            return mpmath.nstr(v, self.precision_digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)

        return {
            "N": self.N,
            "c_N": s(self.c_N),
            "d_N": s(self.d_N),
            "alpha_N": s(self.alpha_N),
            "beta_N": s(self.beta_N),
            "f_N": f"{self.f_N.numerator}/{self.f_N.denominator}",
            "x_N": s(self.x_N),
            "precision_digits": self.precision_digits,
        }

    @classmethod
    def from_json_obj(cls, obj) -> "ConstantsRow":
        d = obj["precision_digits"]
        with mp.workdps(d + GUARD):
            return cls(
                N=obj["N"],
                c_N=mpf(obj["c_N"]),
                d_N=mpf(obj["d_N"]),
                alpha_N=mpf(obj["alpha_N"]),
                beta_N=mpf(obj["beta_N"]),
                f_N=Fraction(obj["f_N"]),
                x_N=mpf(obj["x_N"]),
                precision_digits=d,
            )


def solve_beta(alpha, digits=30) -> mpf:
    """The x >= e with x / log x = alpha (x/log x increases on x > e)."""
    with mp.workdps(digits + GUARD):
        alpha = mpf(alpha)
        if alpha <= mp.e:
            return +mp.e
        lo, hi = +mp.e, 2 * mp.e
        while hi / mp.log(hi) < alpha:
            lo, hi = hi, 2 * hi
        return _bisect(lambda x: x / mp.log(x) - alpha, lo, hi, digits)


@lru_cache(maxsize=None)
def x_const(N: int, digits: int = 30) -> ConstantsRow:
    c = solve_c(N, digits)
    d = solve_d(N, digits)
    with mp.workdps(digits + GUARD):
        alpha = max(+mp.e, c, d)
        beta = solve_beta(alpha, digits)
        f = Fraction(4 * (N + 1), 3)
        x = max(beta, mpf(f.numerator) / f.denominator, mp.e**2)
    return ConstantsRow(N, c, d, alpha, beta, f, x, digits)


def _cache_path(cache_dir, N, digits) -> Path:
    return Path(cache_dir) / f"constants-v{__version__}-N{N}-d{digits}.json"


def constants_row(N: int, digits: int = 30, cache_dir=None) -> ConstantsRow:
    """``x_const`` backed by a write-once JSON file per (version, N, digits)."""
    if cache_dir is None:
        return x_const(N, digits)
    path = _cache_path(cache_dir, N, digits)
    if path.exists():
        return ConstantsRow.from_json_obj(json.loads(path.read_text()))
    row = x_const(N, digits)
    os.makedirs(cache_dir, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(row.to_json_obj(), indent=2) + "\n")
    os.replace(tmp, path)
    return row


# ---------------------------------------------------------------------------
# v_N


def _tmain_scale(u, N):
    """(N+1)! u (log log u)^N / log^(N+1) u, increasing for u > e^(f_N)."""
    x = mp.log(u)
    return math.factorial(N + 1) * u * mp.log(x) ** N / x ** (N + 1)


def H(u, N, digits=30) -> mpf:
    """H_N(u) = li(f_N(u)) - u."""
    with mp.workdps(digits + GUARD):
        return li(f_N_value(u, N, digits + 5), digits + 5) - u


@lru_cache(maxsize=None)
def v_const(N: int, digits: int = 30) -> mpf:
    """u_N = e^(x_N) when |H_N(u_N)| is below the majorant there, otherwise doubled until it is."""
    row = x_const(N, max(digits, 6))
    with mp.workdps(digits + GUARD):
        uN = mp.exp(row.x_N)
        h = abs(H(uN, N, digits))
        v = uN
        while _tmain_scale(v, N) < h:
            v *= 2
        return v


# ---------------------------------------------------------------------------
# M_n, z'_N, z_N


def m_max(n: int, digits: int = 30, lower=None) -> mpf:
    """sup over t > log(lower) of |P_(n-1)(t)| / t^(n-1); ``lower`` defaults to x_10."""
    if n < 2:
        raise ValueError("n must be >= 2")
    with mp.workdps(digits + GUARD):
        lower = x_const(10, max(digits, 6)).x_N if lower is None else mpf(lower)
        t0 = mp.log(lower)
        m = n - 1
        P = poly_P(m)
        s = P.scaled_coeffs
        # critical points of P(t)/t^m are the roots of t P' - m P
        crit = [(k - m) * c for k, c in enumerate(s)]

        def val(t):
            return abs(P(t)) / t**m

        best = abs(mpf(s[m]) / P.denom)  # the limit at infinity
        best = max(best, val(t0))
        t0_q = Fraction(int(mpmath.floor(t0 * 2**64)), 2**64)
        if any(crit):
            for a, b in real_roots(crit, Fraction(1, 2 ** (4 * (digits + GUARD))), lo=t0_q):
                t = (mpf(a.numerator) / a.denominator + mpf(b.numerator) / b.denominator) / 2
                if t > t0:
                    best = max(best, val(t))
        return +best


def concrete_coefficient(N) -> mpf:
    """20 (N / (e log N))^N."""
    return 20 * (mpf(N) / (mp.e * mp.log(N))) ** N


def _z_prime_setup(N):
    if not 2 <= N <= 11:
        raise ValueError("N must satisfy 2 <= N <= 11")
    return (10, 26 * math.factorial(11)) if N <= 5 else (20, 26 * math.factorial(21))


@dataclass(frozen=True)
class ZPrime:
    N: int
    K: int
    R: int
    M: dict
    z_prime: mpf


@lru_cache(maxsize=None)
def z_prime(N: int, digits: int = 30) -> ZPrime:
    """Crossing of sum M_n (log x/x)^(n-N-1) + R (log x/x)^(K-N) with 20 (N/(e log N))^N."""
    K, R = _z_prime_setup(N)
    with mp.workdps(digits + GUARD):
        lower = x_const(K, digits).x_N
        M = {n: m_max(n, digits, lower) for n in range(N + 1, K + 1)}
        C = concrete_coefficient(N)

        def g(x):
            r = mp.log(x) / x
            return sum(M[n] * r ** (n - N - 1) for n in M) + R * r ** (K - N) - C

        if g(lower) < 0:
            return ZPrime(N, K, R, M, lower)
        lo, hi = lower, 2 * lower
        while g(hi) > 0:
            lo, hi = hi, 2 * hi
        return ZPrime(N, K, R, M, _bisect(g, lo, hi, digits, increasing=False))


Z_LOW = mpf("1.3")
_Z_WORK_DIGITS = 90


@lru_cache(maxsize=None)
def _ali_ratio(x_key: str) -> mpf:
    """ali(e^x) / (x e^x) at a fixed high precision, memoized across N."""
    with mp.workdps(_Z_WORK_DIGITS + GUARD):
        x = mpf(x_key)
        u = mp.exp(x)
        return ali(u, _Z_WORK_DIGITS) / (x * u)


def realistic_error(x, N) -> mpf:
    """E_N(x) = (ali(e^x)/(x e^x) - W_N(x)) x^(N+1) / log^N x."""
    with mp.workdps(_Z_WORK_DIGITS + GUARD):
        key = mpmath.nstr(mpf(x), _Z_WORK_DIGITS)
        x = mpf(key)
        y = mp.log(x)
        P = [poly_P(n) for n in range(N)]
        W = 1 + sum(P[n - 1](y) / x**n for n in range(N, 0, -1))
        return (_ali_ratio(key) - W) * x ** (N + 1) / y**N


def _z_grid(upper):
    """Step 0.01 up to x = 20, then ratio 1.005, as exact rationals."""
    upper = Fraction(mpmath.nstr(upper, 20))
    pts = []
    i = 1
    while True:
        x = Fraction(13, 10) + Fraction(i, 100)
        if x > 20 or x >= upper:
            break
        pts.append(x)
        i += 1
    x = pts[-1] if pts else Fraction(13, 10)
    while x < upper:
        x = x * Fraction(1005, 1000)
        x = Fraction(round(x * 10**6), 10**6)
        if x < upper:
            pts.append(x)
    return pts


@dataclass(frozen=True)
class ZResult:
    N: int
    z_N: mpf
    z_prime: mpf
    grid_points: int
    max_ratio_above: mpf = field(default=mpf(0))


@lru_cache(maxsize=None)
def z_const(N: int, digits: int = 30) -> ZResult:
    """Least z in (1.3, z'_N) with |E_N(x)| <= 20 (N/(e log N))^N on (z, z'_N)."""
    zp = z_prime(N, digits).z_prime
    with mp.workdps(_Z_WORK_DIGITS + GUARD):
        C = concrete_coefficient(N)
        grid = _z_grid(zp)

        def excess(x):
            return abs(realistic_error(mpf(x.numerator) / x.denominator, N)) - C

        last_bad = None
        worst = mpf(0)
        for i in range(len(grid) - 1, -1, -1):
            e = excess(grid[i])
            if e > 0:
                last_bad = i
                break
            worst = max(worst, (e + C) / C)
        if last_bad is None:
            return ZResult(N, Z_LOW, zp, len(grid), worst)
        lo = grid[last_bad]
        hi = grid[last_bad + 1] if last_bad + 1 < len(grid) else Fraction(mpmath.nstr(zp, 20))
        tol = Fraction(1, 10 ** min(digits, 12))
        while hi - lo > tol:
            mid = (lo + hi) / 2
            mid = Fraction(round(mid * 10**15), 10**15)
            if mid in (lo, hi):
                break
            if excess(mid) > 0:
                lo = mid
            else:
                hi = mid
        return ZResult(N, mpf(hi.numerator) / hi.denominator, zp, len(grid), worst)


# ---------------------------------------------------------------------------
# supporting lemmas


@dataclass
class PBoundReport:
    bound: CheckReport
    conjecture: CheckReport


def _exact(y):
    if isinstance(y, (int, Fraction)):
        return Fraction(y)
    return Fraction(str(y)) if isinstance(y, str) else None


def check_p_bound(n_max: int, y_grid) -> PBoundReport:
    """|P_n(y)| <= 3 n! y^n (and |P_0(y)| <= y); the sharper (n/(e log n))^n y^n is tracked as a conjecture."""
    bound = CheckReport("P-bound")
    conj = CheckReport("P-bound-conjecture")
    for y in y_grid:
        if (Fraction(y) if isinstance(y, (int, Fraction)) else mpf(y)) < 2:
            raise ValueError("grid points must be >= 2")
    for n in range(0, n_max + 1):
        P = poly_P(n)
        for y in y_grid:
            ye = _exact(y)
            with mp.workdps(40):
                if ye is not None:
                    v = abs(P(ye))
                    rhs = ye if n == 0 else 3 * math.factorial(n) * ye**n
                    ok = v <= rhs
                    yv = mpf(ye.numerator) / ye.denominator
                else:
                    yv = mpf(y)
                    v = abs(P(yv))
                    ok = v <= (yv if n == 0 else 3 * math.factorial(n) * yv**n)
                bound.checked += 1
                if not ok:
                    bound.violations.append((n, y))
                if n >= 3 and yv > 2 * mp.log(n):
                    conj.checked += 1
                    if abs(P(yv)) > (n / (mp.e * mp.log(n))) ** n * yv**n:
                        conj.violations.append((n, y))
    return PBoundReport(bound.finalize(), conj.finalize(conjecture=True))


def check_lemma_54(n: int, u_grid, rel_tol=mpf("1e-10")) -> CheckReport:
    """int_(e^f_n)^u (log log t)^n / log^(n+1) t dt <= 4 u (log log u)^n / log^(n+1) u."""
    rep = CheckReport(f"lemma-f{n}")
    with mp.workdps(30):
        fn = mpf(4 * (n + 1)) / 3
        for u in u_grid:
            u = mpf(u)
            X = mp.log(u)
            if X < fn * (1 - mpf(10) ** -12):
                raise ValueError("grid points must satisfy u >= e^(f_n)")
            if X <= fn:
                integral = mpf(0)
            else:
                # t = e^s turns the integrand into e^s (log s)^n / s^(n+1)
                pts = mpmath.linspace(fn, X, max(2, int(X - fn) + 2))
                integral, err = mpmath.quad(
                    lambda s: mp.exp(s) * mp.log(s) ** n / s ** (n + 1), pts, error=True
                )
                if err > rel_tol * abs(integral):
                    raise QuadratureFailure(f"quadrature error {err} too large at u={u}")
            rhs = 4 * u * mp.log(X) ** n / X ** (n + 1)
            rep.checked += 1
            if not integral <= rhs:
                rep.violations.append(u)
    return rep.finalize()


def check_comparation(u_grid, digits: int = 30) -> CheckReport:
    """log ali(u) <= 2 log u for u >= 2 and ali(u) <= 2 u log u for u >= e^2."""
    rep = CheckReport("comparation")
    with mp.workdps(digits + GUARD):
        for u in u_grid:
            u = mpf(u)
            if u < 2:
                raise ValueError("grid points must be >= 2")
            a = ali(u, digits)
            rep.checked += 1
            if not mp.log(a) <= 2 * mp.log(u):
                rep.violations.append(("log", u))
            if u >= mp.e**2:
                rep.checked += 1
                if not a <= 2 * u * mp.log(u):
                    rep.violations.append(("linear", u))
    rep.violations.sort(key=lambda v: (v[0], v[1]))
    rep.status = None
    rep.__post_init__()
    return rep
