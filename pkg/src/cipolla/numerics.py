"""Arbitrary-precision li, Ei, ali and the truncated expansion f_N(u).

Values are ``mpmath.mpf``.  Every public function takes ``digits`` (decimal
digits wanted) and works internally with ``digits + GUARD`` digits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, NoConvergence, PrecisionExhausted
from .polyengine import cipolla_polys

GUARD = 10
MAX_DIGITS = 20000

# Thresholds z_N of the concrete error bound as stated (rounded up to 2 decimals);
# ``constants.z_const`` recomputes the sharp values.
CONCRETE_Z = {
    2: 1.50, 3: 2.34, 4: 3.32, 5: 4.33, 6: 5.36,
    7: 6.39, 8: 7.43, 9: 8.46, 10: 9.50, 11: 10.53,
}


class Justification(enum.Enum):
    TMAIN = "TMAIN"
    CONCRETE = "CONCRETE"
    TDISTANCE = "TDISTANCE"
    SCHOENFELD = "SCHOENFELD"
    NONE = "NONE"


@dataclass(frozen=True)
class BoundCert:
    """``value`` with a certified error radius and the theorem that justifies it."""

    value: mpf
    radius: mpf
    justification: Justification

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    def contains(self, other) -> bool:
        return abs(other - self.value) <= self.radius


@dataclass
class ExpansionResult:
    u: mpf
    N_used: int
    value: mpf
    bound: BoundCert
    terms: list = field(default_factory=list)


def to_mpf(u) -> mpf:
    """Accept ints, Fractions, floats, mpf, and strings like ``"1e100"`` or ``"39e29"``."""
    if isinstance(u, mpf):
        return u
    if isinstance(u, Fraction):
        return mpf(u.numerator) / u.denominator
    if isinstance(u, str):
        s = u.strip().lower().replace("_", "")
        if "e" in s and "^" not in s:
            m, e = s.split("e", 1)
            return mpf(m) * mpf(10) ** int(e)
        if "^" in s:
            base, e = s.split("^", 1)
            return mpf(base) ** int(e)
        return mpf(s)
    return mpf(u)


def _check_digits(digits: int):
    if digits < 1:
        raise ValueError("digits must be positive")
    if digits > MAX_DIGITS:
        raise PrecisionExhausted(f"{digits} digits exceeds the configured maximum {MAX_DIGITS}")


# ---------------------------------------------------------------------------
# Ei and li


def _ei_series_sum(y: mpf, bits: int) -> mpf:
    """``sum_{k>=1} y^k / (k k!)`` for y > 0 in fixed-point integer arithmetic."""
    p = bits + 32
    Y = int(mpmath.floor(y * mpf(2) ** p))
    if Y <= 0:
        return mpf(0)
    t = Y  # y^k / k!  scaled by 2^p
    s = Y
    k = 1
    stop_shift = bits + 24
    while True:
        k += 1
        t = (t * Y >> p) // k
        term = t // k
        s += term
        if k > y and (term << stop_shift) < s:
            break
    return mpf(s) / mpf(2) ** p


def ei(y, digits: int = 30) -> mpf:
    """Exponential integral Ei(y) for y > 0: gamma + log y + sum y^k/(k k!)."""
    _check_digits(digits)
    with mp.workdps(digits + GUARD):
        y = to_mpf(y)
        if y <= 0:
            raise DomainError("ei is implemented for y > 0 only")
        bits = mp.prec
        return +(mp.euler + mp.log(y) + _ei_series_sum(y, bits))


def li(x, digits: int = 30) -> mpf:
    """Logarithmic integral on (1, inf) as Ei(log x)."""
    _check_digits(digits)
    with mp.workdps(digits + GUARD):
        x = to_mpf(x)
        if x <= 1:
            raise DomainError("li is evaluated on the branch x > 1 only")
        # log x needs absolute accuracy, hence extra digits for large x
        extra = int(mpmath.log10(mpmath.log(x) + 1)) + 2
        with mp.workdps(digits + GUARD + extra):
            y = mp.log(x)
        return +ei(y, digits + extra)


# ---------------------------------------------------------------------------
# the truncated expansion


def _expansion_terms(x: mpf, y: mpf, N: int, digits: int, start: int = 1) -> list:
    """``[P_{n-1}(y) / x^n for n = start..N]`` with guard digits sized to the cancellation."""
    P = cipolla_polys(max(N - 1, 0))
    out = []
    with mp.workdps(20):
        xs, ys = +x, +y
        lx = float(mpmath.log10(xs))
    for n in range(start, N + 1):
        p = P[n - 1]
        with mp.workdps(20):
            mag = p.abs_eval(abs(ys))
            lost = float(mpmath.log10(mag)) - n * lx if mag > 0 else 0.0
        extra = max(0, int(math.ceil(lost))) + 5
        with mp.workdps(digits + GUARD + extra):
            out.append(p(y) / x**n)
    return out


def f_N_value(u, N: int, digits: int = 30) -> mpf:
    """f_N(u) = x u (1 + sum_{n=1}^N P_{n-1}(y)/x^n), x = log u, y = log x."""
    _check_digits(digits)
    with mp.workdps(digits + GUARD):
        u = to_mpf(u)
        if u <= mp.e:
            raise DomainError("f_N(u) needs u > e")
        x = mp.log(u)
        y = mp.log(x)
        terms = _expansion_terms(x, y, N, digits)
        s = mpf(0)
        for t in reversed(terms):
            s += t
        return x * u * (1 + s)


def f_N_eval(u, N: int, digits: int = 30) -> ExpansionResult:
    if N < 0:
        raise ValueError("N must be >= 0")
    with mp.workdps(digits + GUARD):
        u = to_mpf(u)
        if u <= mp.e:
            raise DomainError("f_N(u) needs u > e")
        x = mp.log(u)
        y = mp.log(x)
        terms = _expansion_terms(x, y, N, digits)
        s = mpf(0)
        for t in reversed(terms):
            s += t
        value = x * u * (1 + s)
        bound = bound_for(u, N, value=value) if N >= 1 else BoundCert(value, mpf("inf"), Justification.NONE)
        return ExpansionResult(u, N, value, bound, terms)


def concrete_radius(u, N: int) -> mpf:
    """20 (N/(e log N))^N (log x)^N / x^(N+1) * x u with x = log u."""
    u = to_mpf(u)
    x = mp.log(u)
    c = 20 * (mpf(N) / (mp.e * mp.log(N))) ** N
    return c * mp.log(x) ** N / x ** (N + 1) * x * u


def tmain_radius(u, N: int) -> mpf:
    """26 (N+1)! u (log log u / log u)^N."""
    u = to_mpf(u)
    x = mp.log(u)
    return 26 * mpf(math.factorial(N + 1)) * u * (mp.log(x) / x) ** N


def bound_for(u, N: int, value=None) -> BoundCert:
    """Certified radius for |ali(u) - f_N(u)| under whichever theorem applies."""
    if N < 1:
        raise ValueError("N must be >= 1")
    u = to_mpf(u)
    value = mpf(0) if value is None else value
    if u > mp.e:
        x = mp.log(u)
        if N in CONCRETE_Z and x > CONCRETE_Z[N]:
            return BoundCert(value, concrete_radius(u, N), Justification.CONCRETE)
        from .constants import v_const  # constants imports this module

        if u >= v_const(N):
            return BoundCert(value, tmain_radius(u, N), Justification.TMAIN)
    return BoundCert(value, mpf("inf"), Justification.NONE)


# ---------------------------------------------------------------------------
# ali


def _initial_guess(u: mpf) -> mpf:
    if u >= 2:
        x = mp.log(u)
        if x > CONCRETE_Z[2]:
            N0 = min(int(mpmath.floor(x)), 10)
            with mp.workdps(30):
                g = f_N_value(u, N0, digits=20)
            if g > 1:
                return +g
        return 2 * u * mp.log(u + 2) + 2
    return mpf(2)


def ali(u, digits: int = 30, *, max_iter: int = 200) -> mpf:
    """Inverse of li: the unique x > 1 with li(x) = u (safeguarded Newton)."""
    x, _ = _ali_newton(u, digits, max_iter)
    return x


def ali_certified(u, digits: int = 30, *, max_iter: int = 200) -> BoundCert:
    """ali(u) with an enclosure checked by the sign of li - u at both ends."""
    x, f = _ali_newton(u, digits, max_iter)
    with mp.workdps(digits + GUARD):
        u = to_mpf(u)
        lx = mp.log(x)
        delta = 2 * abs(f) * lx + x * mpf(10) ** (-(digits + GUARD // 2))
        lo, hi = x - delta, x + delta
        if not (lo > 1 and li(lo, digits) < u < li(hi, digits)):
            raise NoConvergence(f"could not certify ali({mpmath.nstr(u, 15)}) at {digits} digits")
        return BoundCert(x, delta, Justification.NONE)


def _ali_newton(u, digits: int, max_iter: int):
    _check_digits(digits)
    with mp.workdps(digits + GUARD):
        u = to_mpf(u)
        tol = mpf(10) ** (-digits) * max(1, abs(u))
        x = _initial_guess(u)
        lo = hi = None
        for _ in range(max_iter):
            f = li(x, digits) - u
            if abs(f) < tol:
                return x, f
            if f < 0:
                lo = x if lo is None else max(lo, x)
            else:
                hi = x if hi is None else min(hi, x)
            step = x - f * mp.log(x)
            inside = step > 1 and (lo is None or step > lo) and (hi is None or step < hi)
            if inside:
                x = step
            elif lo is not None and hi is not None:
                x = (lo + hi) / 2
            elif lo is None:
                x = (1 + x) / 2
            else:
                x = 2 * x
        raise NoConvergence(f"ali did not converge in {max_iter} iterations at {digits} digits")


def auto_expand(u, digits: int = 30, *, max_terms: int = 5000) -> ExpansionResult:
    """Sum the expansion until the terms stop decreasing in magnitude."""
    with mp.workdps(digits + GUARD):
        u = to_mpf(u)
        x = mp.log(u)
        if x <= CONCRETE_Z[2]:
            raise DomainError("auto_expand needs log u > z_2")
        y = mp.log(x)
        terms: list = []
        chunk = max(16, int(x) + 16)
        n_used = None
        while n_used is None:
            if len(terms) >= max_terms:
                raise NoConvergence("terms kept decreasing up to max_terms")
            start = len(terms)
            new = _expansion_terms(x, y, min(start + chunk, max_terms), digits, start + 1)
            terms.extend(new)
            for n in range(max(start, 1), len(terms)):
                if abs(terms[n]) >= abs(terms[n - 1]):
                    n_used = n
                    break
        used = terms[:n_used]
        s = mpf(0)
        for t in reversed(used):
            s += t
        value = x * u * (1 + s)
        last = abs(used[-1]) * x * u
        return ExpansionResult(u, n_used, value, BoundCert(value, last, Justification.NONE), used)
