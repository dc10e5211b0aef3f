"""Sieve ground truth, prime inequalities and the sign structure of P_n.

Sweeps screen in float64 (scipy's ``expi`` for li) and re-check every
close call in mpmath, so a reported violation is never a rounding artefact.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp, mpf
from scipy.special import expi

from .constants import concrete_coefficient
from .errors import DomainError, OutOfRange, PrecisionExhausted
from .numerics import Justification, ali, li, to_mpf
from .polyengine import poly_P
from .report import CheckReport
from .sturm import isolate, refine

DEFAULT_SIEVE_LIMIT = 10**9
SEGMENT = 1 << 20  # odd numbers per segment

TDISTANCE_FROM = 11
CLASSICAL_UPPER_FROM = 688383
SCHOENFELD_FROM = 2657


# ---------------------------------------------------------------------------
# sieve


def _small_primes(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)


class PrimeTable:
    """Odd-only segmented sieve up to ``limit`` stored as packed bits.

    Bit ``i`` of the table stands for the odd number ``2i + 1``.
    """

    def __init__(self, limit: int, segment: int = SEGMENT):
        if limit < 2:
            raise ValueError("limit must be >= 2")
        self.limit = int(limit)
        self.segment = int(segment)
        n_odd = (self.limit + 1) // 2  # odd numbers 1, 3, ..., <= limit
        base = _small_primes(math.isqrt(self.limit) + 1)[1:]  # odd base primes
        packed = []
        counts = []
        for lo in range(0, n_odd, self.segment):
            hi = min(lo + self.segment, n_odd)
            seg = np.ones(hi - lo, dtype=bool)
            if lo == 0:
                seg[0] = False  # 1 is not prime
            for p in base:
                p = int(p)
                start = p * p
                if start > 2 * hi - 1:
                    break
                # first odd multiple of p that is >= max(p^2, 2 lo + 1)
                first = max(start, ((2 * lo + 1 + p - 1) // p) * p)
                if first % 2 == 0:
                    first += p
                seg[(first - 1) // 2 - lo :: p] = False
            counts.append(int(seg.sum()))
            packed.append(np.packbits(seg, bitorder="little"))
        self._packed = packed
        self._counts = np.array(counts, dtype=np.int64)
        self._cum = np.concatenate(([0], np.cumsum(self._counts)))
        self.count = int(self._cum[-1]) + 1

    def _segment_bits(self, j: int) -> np.ndarray:
        n_odd = (self.limit + 1) // 2
        length = min(self.segment, n_odd - j * self.segment)
        return np.unpackbits(self._packed[j], bitorder="little", count=length).astype(bool)

    def nth(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be >= 1")
        if n == 1:
            return 2
        if n > self.count:
            raise OutOfRange(f"p_{n} exceeds the sieve limit {self.limit}")
        k = n - 2  # index among odd primes
        j = int(np.searchsorted(self._cum, k, side="right")) - 1
        idx = np.flatnonzero(self._segment_bits(j))[k - self._cum[j]]
        return 2 * (j * self.segment + int(idx)) + 1

    def pi(self, x: int) -> int:
        x = int(x)
        if x > self.limit:
            raise OutOfRange(f"pi({x}) exceeds the sieve limit {self.limit}")
        if x < 2:
            return 0
        i = (x - 1) // 2  # index of the largest odd number <= x
        j = i // self.segment
        bits = self._segment_bits(j)
        return 1 + int(self._cum[j]) + int(bits[: i - j * self.segment + 1].sum())

    def primes(self, upto: int | None = None) -> np.ndarray:
        upto = self.limit if upto is None else min(int(upto), self.limit)
        out = [np.array([2], dtype=np.int64)] if upto >= 2 else []
        for j in range(len(self._packed)):
            first = 2 * j * self.segment + 1
            if first > upto:
                break
            idx = np.flatnonzero(self._segment_bits(j)).astype(np.int64)
            vals = 2 * (j * self.segment + idx) + 1
            out.append(vals[vals <= upto])
        return np.concatenate(out) if out else np.array([], dtype=np.int64)

    def first_primes(self, n: int) -> np.ndarray:
        """p_1, ..., p_n."""
        if n > self.count:
            raise OutOfRange(f"p_{n} exceeds the sieve limit {self.limit}")
        return self.primes(self.nth(n)) if n >= 1 else np.array([], dtype=np.int64)


def prime_upper_estimate(n: int) -> int:
    """An upper bound for p_n: n (log n + log log n) for n >= 6."""
    if n < 6:
        return 13
    return int(n * (math.log(n) + math.log(math.log(n)))) + 1


_TABLES: dict = {}


def table_for(limit: int, max_limit: int = DEFAULT_SIEVE_LIMIT) -> PrimeTable:
    """A shared table covering ``limit`` (built once, then read-only)."""
    if limit > max_limit:
        raise OutOfRange(f"{limit} exceeds the configured sieve limit {max_limit}")
    for lim, t in _TABLES.items():
        if lim >= limit:
            return t
    t = PrimeTable(max(limit, 1000))
    _TABLES.clear()
    _TABLES[t.limit] = t
    return t


def nth_prime(n: int, max_limit: int = DEFAULT_SIEVE_LIMIT) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return table_for(prime_upper_estimate(n), max_limit).nth(n)


def prime_pi(x: int, max_limit: int = DEFAULT_SIEVE_LIMIT) -> int:
    return table_for(int(x), max_limit).pi(int(x))


def first_primes(n: int, max_limit: int = DEFAULT_SIEVE_LIMIT) -> np.ndarray:
    return table_for(prime_upper_estimate(n), max_limit).first_primes(n)


# ---------------------------------------------------------------------------
# s_N


def s_N(n, N: int, digits: int = 30) -> mpf:
    """n log n (1 + sum_{k<=N} P_(k-1)(log log n) / log^k n)."""
    with mp.workdps(digits + 10):
        n = to_mpf(n)
        if n < 2:
            raise DomainError("s_N(n) needs n >= 2")
        x = mp.log(n)
        y = mp.log(x)
        s = mpf(0)
        for k in range(N, 0, -1):
            s += poly_P(k - 1)(y) / x**k
        return n * x * (1 + s)


# ---------------------------------------------------------------------------
# float screening helpers


def li_float(x: np.ndarray) -> np.ndarray:
    return expi(np.log(np.asarray(x, dtype=np.float64)))


def ali_float(u: np.ndarray, iterations: int = 12) -> np.ndarray:
    """Vectorized Newton for ali in float64 (screening only)."""
    u = np.asarray(u, dtype=np.float64)
    x = np.full_like(u, 2.0)
    big = u > 5
    lu = np.log(u[big])
    x[big] = u[big] * (lu + np.log(lu) - 1 + (np.log(lu) - 2) / lu)
    x[big] = np.maximum(x[big], 2.0)
    for _ in range(iterations):
        x = x - (li_float(x) - u) * np.log(x)
        x = np.maximum(x, 1.0 + 1e-12)
    return x


def tdistance_radius(n) -> mpf:
    """(1/pi) sqrt(n) log^(5/2) n."""
    n = mpf(n)
    return mp.sqrt(n) * mp.log(n) ** mpf(2.5) / mp.pi


def _tdistance_exact(args):
    ns, ps, digits = args
    bad = []
    with mp.workdps(digits + 10):
        for n, p in zip(ns, ps):
            if not abs(p - ali(n, digits)) < tdistance_radius(n):
                bad.append(int(n))
    return bad


def _chunks(seq, k):
    k = max(1, k)
    size = max(1, -(-len(seq) // k))
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def check_tdistance(n_lo: int, n_hi: int, digits: int = 30, *, jobs: int = 1,
                    exact_below: int = 400, max_limit: int = DEFAULT_SIEVE_LIMIT) -> CheckReport:
    """|p_n - ali(n)| < (1/pi) sqrt(n) log^(5/2) n for n_lo <= n <= n_hi."""
    if n_lo < 1 or n_hi < n_lo:
        raise ValueError("need 1 <= n_lo <= n_hi")
    primes = first_primes(n_hi, max_limit)
    rep = CheckReport(f"tdistance[{n_lo},{n_hi}]")
    rechecks = []
    # small n: evaluate everything exactly
    small = [n for n in range(n_lo, min(n_hi, exact_below) + 1)]
    rechecks.extend(small)
    if n_hi > exact_below:
        ns = np.arange(max(n_lo, exact_below + 1), n_hi + 1, dtype=np.int64)
        p = primes[ns - 1].astype(np.float64)
        nf = ns.astype(np.float64)
        diff = np.abs(p - ali_float(nf))
        rad = np.sqrt(nf) * np.log(nf) ** 2.5 / np.pi
        close = np.abs(diff - rad) <= 1e-6 + 1e-9 * rad
        rep.violations.extend(int(n) for n in ns[(diff >= rad) & ~close])
        rechecks.extend(int(n) for n in ns[close])
    work = [(c, [int(primes[n - 1]) for n in c], digits) for c in _chunks(rechecks, jobs)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_tdistance_exact, work))
    else:
        results = [_tdistance_exact(w) for w in work]
    for r in results:
        rep.violations.extend(r)
    rep.checked = n_hi - n_lo + 1
    rep.details["exact_evaluations"] = len(rechecks)
    rep.details["justification"] = Justification.TDISTANCE.value
    return rep.finalize()


def _classical_exact(n, p):
    with mp.workdps(40):
        x = mp.log(n)
        y = mp.log(x)
        lower0 = n * x
        lower1 = n * (x + y - 1)
        upper = n * (x + y - 1 + (y - 2) / x)
        return p >= lower0, p >= lower1, (n < CLASSICAL_UPPER_FROM or p <= upper)


def check_classical(n_hi: int, *, max_limit: int = DEFAULT_SIEVE_LIMIT) -> CheckReport:
    """p_n >= n log n and p_n >= n(log n + log log n - 1) for n >= 2, and the upper bound from 688383."""
    rep = CheckReport(f"classical[2,{n_hi}]")
    if n_hi < 2:
        return rep.finalize()
    primes = first_primes(n_hi, max_limit)
    ns = np.arange(2, n_hi + 1, dtype=np.int64)
    nf = ns.astype(np.float64)
    p = primes[ns - 1].astype(np.float64)
    x = np.log(nf)
    y = np.log(x)
    margins = {
        "lower0": p - nf * x,
        "lower1": p - nf * (x + y - 1),
        "upper": np.where(ns >= CLASSICAL_UPPER_FROM, nf * (x + y - 1 + (y - 2) / x) - p, np.inf),
    }
    suspicious = set()
    for m in margins.values():
        suspicious.update(int(n) for n in ns[m <= 1e-6 * nf])
    for n in sorted(suspicious):
        ok0, ok1, ok2 = _classical_exact(n, int(primes[n - 1]))
        for name, ok in (("lower0", ok0), ("lower1", ok1), ("upper", ok2)):
            if not ok:
                rep.violations.append((n, name))
    rep.checked = len(ns)
    rep.details["upper_checked"] = max(0, n_hi - CLASSICAL_UPPER_FROM + 1)
    rep.details["min_margin"] = {k: float(np.min(v)) for k, v in margins.items() if np.isfinite(v).any()}
    return rep.finalize()


def schoenfeld_radius(x) -> mpf:
    x = mpf(x)
    return mp.sqrt(x) * mp.log(x) / (8 * mp.pi)


def check_schoenfeld(x_hi: int, *, max_limit: int = DEFAULT_SIEVE_LIMIT) -> CheckReport:
    """|pi(x) - li(x)| < sqrt(x) log x / (8 pi) on (2657, x_hi].

    Between consecutive primes pi is constant and li increases, so it is
    enough to compare k - li(p_k) at each prime and li(p_(k+1)) - k at the
    next one (and li(x_hi) at the right end).
    """
    rep = CheckReport(f"schoenfeld(2657,{x_hi}]")
    if x_hi <= SCHOENFELD_FROM:
        return rep.finalize()
    t = table_for(x_hi, max_limit)
    ps = t.primes(x_hi)
    k0 = int(np.searchsorted(ps, SCHOENFELD_FROM, side="right"))  # pi(2657)
    xs = ps[k0:].astype(np.float64)
    ks = np.arange(k0 + 1, k0 + 1 + len(xs), dtype=np.float64)
    rad = np.sqrt(xs) * np.log(xs) / (8 * np.pi)
    lix = li_float(xs)
    # points: (x, pi value to compare, direction)
    above = ks - lix - rad  # pi(p_k) - li(p_k) at p_k
    below = lix - (ks - 1) - rad  # li(x) - pi(x) as x -> p_k from the left
    cand = []
    tol = 1e-7
    for arr, tag in ((above, "above"), (below, "below")):
        for i in np.flatnonzero(arr > -tol):
            cand.append((int(xs[i]), int(ks[i]), tag))
    end_pi = k0 + len(xs)
    cand_end = [(x_hi, end_pi, "below-end")]
    with mp.workdps(30):
        for x, k, tag in cand + cand_end:
            lx = li(x, 25)
            r = schoenfeld_radius(x)
            if tag == "above":
                ok = k - lx < r
            elif tag == "below":
                ok = lx - (k - 1) < r
            else:
                ok = lx - k < r
            if not ok:
                rep.violations.append((x, tag))
        # the left end: x -> 2657+ with pi = pi(2657)
        if not k0 - li(SCHOENFELD_FROM, 25) < schoenfeld_radius(SCHOENFELD_FROM):
            rep.violations.append((SCHOENFELD_FROM, "above"))
    rep.checked = 2 * len(xs) + 2
    rep.details["pi_2657"] = k0
    rep.details["max_ratio"] = float(max(np.max((ks - lix) / rad), np.max((lix - ks + 1) / rad)))
    return rep.finalize()


# ---------------------------------------------------------------------------
# roots of P_n


@dataclass(frozen=True)
class RootEnclosure:
    lo: Fraction
    hi: Fraction
    mid: mpf


@dataclass(frozen=True)
class RootEntry:
    n: int
    roots: tuple

    @property
    def values(self):
        return [r.mid for r in self.roots]


@lru_cache(maxsize=None)
def real_roots(n: int, digits: int = 20) -> RootEntry:
    """All real roots of n! P_n, isolated by Sturm counts and bisected to ``digits``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p = poly_P(n).scaled_coeffs
    tol = Fraction(1, 10 ** (digits + 2))
    out = []
    with mp.workdps(digits + 10):
        for a, b in isolate(p):
            lo, hi = refine(p, a, b, tol)
            mid = (mpf(lo.numerator) / lo.denominator + mpf(hi.numerator) / hi.denominator) / 2
            out.append(RootEnclosure(lo, hi, mid))
    return RootEntry(n, tuple(out))


def root_catalog(n_max: int, digits: int = 20) -> dict:
    return {n: real_roots(n, digits) for n in range(1, n_max + 1)}


# ---------------------------------------------------------------------------
# r_3 window


R3_N = 39 * 10**29


@dataclass
class R3Report:
    y0_lo: mpf
    y0_hi: mpf
    threshold: mpf
    s3: mpf
    ali_n: mpf
    upper: mpf
    digits: int
    details: dict = field(default_factory=dict)

    @property
    def y0(self):
        return (self.y0_lo + self.y0_hi) / 2

    @property
    def upper_below_s3(self) -> bool:
        return self.upper < self.s3


def r3_gap(y, N: int = 10) -> mpf:
    """LHS - RHS of the sufficient condition for p_n > s_3 written in y = log log n."""
    P = [poly_P(k) for k in range(N)]
    lhs = P[3](y) + sum(P[k - 1](y) * mp.exp(-(k - 4) * y) for k in range(5, N + 1))
    rhs = concrete_coefficient(N) * y**N * mp.exp(-(N - 3) * y) + mp.exp(11 * y / 2) * mp.exp(-mp.exp(y) / 2) / mp.pi
    return lhs - rhs


def r3_window(digits: int = 50, N: int = 10) -> R3Report:
    if digits < 45:
        raise PrecisionExhausted("the r_3 window needs at least 45 digits")
    with mp.workdps(digits + 20):
        lo, hi = mpf(4), mpf(5)
        if not (r3_gap(lo, N) < 0 < r3_gap(hi, N)):
            raise DomainError("no sign change of the r_3 condition on [4, 5]")
        width = mpf(10) ** -(digits // 2)
        while hi - lo > width:
            mid = (lo + hi) / 2
            if r3_gap(mid, N) < 0:
                lo = mid
            else:
                hi = mid
        threshold = mp.exp(mp.exp(hi))
        n = mpf(R3_N)
        s3 = s_N(n, 3, digits + 10)
        a = ali(n, digits + 10)
        upper = a + tdistance_radius(n)
        return R3Report(lo, hi, threshold, s3, a, upper, digits, {"N": N, "n": R3_N})


def decimal_digits(v: mpf, k: int) -> str:
    """The first ``k`` significant decimal digits of ``v > 0`` (truncated, no rounding)."""
    with mp.workdps(k + 30):
        e = int(mpmath.floor(mpmath.log10(v)))
        return str(int(mpmath.floor(v / mpf(10) ** (e - k + 1))))
