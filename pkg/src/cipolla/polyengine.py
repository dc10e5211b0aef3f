"""Exact generation of the Cipolla polynomials and their coefficient triangles.

Three independent routes to ``P_n`` live here:

* the coefficient-triangle algorithm (``gen_sequences`` -> ``coeff_triangle_a`` ->
  ``poly_P``), which costs O(N^2) big-integer operations;
* the integer recurrence for ``p_n = n! P_n`` (``gen_P_recurrence``);
* fixed-point iteration of the defining functional equation in the ring of
  series ``sum q_n(y) / x^n`` (``gen_P_fixed_point``).

All arithmetic is exact.  Polynomials are stored as integer vectors over a
single positive denominator; for ``P_n`` and ``Q_n`` that denominator is n!.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2

from .errors import InternalInconsistency

__all__ = [
    "ExactPoly",
    "FormalSeries",
    "CoeffTriangle",
    "TriangleKind",
    "ASequence",
    "PdeReport",
    "gen_sequences",
    "coeff_triangle_a",
    "coeff_triangle_b",
    "poly_P",
    "poly_Q",
    "poly_Q_from_b",
    "cipolla_polys",
    "gen_P_recurrence",
    "gen_P_fixed_point",
    "a_sequence",
    "check_pde",
    "op_count_model",
    "op_count_formula",
    "triangle_to_json",
    "triangle_from_json",
    "triangle_to_csv",
]


# ---------------------------------------------------------------------------
# integer polynomial kernels


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    """Signed Kronecker packing: ``sum c_i 2^(8 nbytes i)`` for |c_i| < 2^(8 nbytes - 1)."""
    half = 1 << (8 * nbytes - 1)
    raw = b"".join([(c + half).to_bytes(nbytes, "little") for c in coeffs])
    return int.from_bytes(raw, "little") - _offset(nbytes, len(coeffs))


def _offset(nbytes: int, n: int) -> int:
    return int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * n, "little")


def _unpack(value: int, nbytes: int, n: int) -> list[int]:
    """Inverse of ``_pack`` for the lowest ``n`` slots."""
    half = 1 << (8 * nbytes - 1)
    mask = (1 << (8 * nbytes * n)) - 1
    data = ((value + _offset(nbytes, n)) & mask).to_bytes(n * nbytes, "little")
    return [
        int.from_bytes(data[i * nbytes : (i + 1) * nbytes], "little") - half
        for i in range(n)
    ]


def _max_abs(values: Sequence[int]) -> int:
    return max(max(values), -min(values))


def _convolve(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Product of two integer coefficient vectors (ascending order)."""
    if not a or not b:
        return ()
    la, lb = len(a), len(b)
    if la < 6 or lb < 6:
        out = [0] * (la + lb - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return _strip(out)
    bound = _max_abs(a) * _max_abs(b) * min(la, lb)
    nbytes = (bound.bit_length() + 2 + 7) // 8
    n = la + lb - 1
    prod = _pack(a, nbytes) * _pack(b, nbytes)
    return _strip(_unpack(prod, nbytes, n))


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


# ---------------------------------------------------------------------------
# ExactPoly


@dataclass(frozen=True, eq=False)
class ExactPoly:
    """Polynomial in ``y`` equal to ``sum(scaled_coeffs[k] * y**k) / denom``.

    The denominator is kept as given (not reduced) so that ``P_n`` carries
    exactly ``n!``.  Equality compares rational values.
    """

    scaled_coeffs: tuple[int, ...]
    denom: int = 1
    degree_bound: int | None = None

    def __post_init__(self):
        coeffs = _strip(int(c) for c in self.scaled_coeffs)
        denom = int(self.denom)
        if denom == 0:
            raise ZeroDivisionError("ExactPoly denominator is zero")
        if denom < 0:
            coeffs, denom = tuple(-c for c in coeffs), -denom
        object.__setattr__(self, "scaled_coeffs", coeffs)
        object.__setattr__(self, "denom", denom)
        if self.degree_bound is None:
            object.__setattr__(self, "degree_bound", max(len(coeffs) - 1, 0))

    # construction -----------------------------------------------------------

    @classmethod
    def zero(cls) -> "ExactPoly":
        return cls(())

    @classmethod
    def constant(cls, value) -> "ExactPoly":
        v = Fraction(value)
        return cls((v.numerator,), v.denominator)

    @classmethod
    def from_fractions(cls, coeffs: Iterable) -> "ExactPoly":
        fr = [Fraction(c) for c in coeffs]
        d = 1
        for f in fr:
            d = _lcm(d, f.denominator)
        return cls(tuple(f.numerator * (d // f.denominator) for f in fr), d)

    # basic properties -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.scaled_coeffs) - 1

    def is_zero(self) -> bool:
        return not self.scaled_coeffs

    def coefficients(self) -> list[Fraction]:
        return [Fraction(c, self.denom) for c in self.scaled_coeffs]

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.scaled_coeffs):
            return Fraction(self.scaled_coeffs[k], self.denom)
        return Fraction(0)

    def leading(self) -> Fraction:
        return self.coefficient(self.degree) if self.scaled_coeffs else Fraction(0)

    def reduced(self) -> "ExactPoly":
        g = math.gcd(self.denom, *self.scaled_coeffs)
        if g == 1:
            return self
        return ExactPoly(tuple(c // g for c in self.scaled_coeffs), self.denom // g)

    def over(self, denom: int) -> "ExactPoly":
        """Same polynomial written over ``denom``; raises if not integral."""
        r = self.reduced()
        q, rem = divmod(denom, r.denom)
        if rem:
            raise ValueError(f"{denom} is not a multiple of reduced denominator {r.denom}")
        return ExactPoly(tuple(c * q for c in r.scaled_coeffs), denom, self.degree_bound)

    def has_integral_scaled_coeffs(self, denom: int) -> bool:
        try:
            self.over(denom)
        except ValueError:
            return False
        return True

    # arithmetic -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactPoly.constant(other)
        if not isinstance(other, ExactPoly):
            return NotImplemented
        if len(self.scaled_coeffs) != len(other.scaled_coeffs):
            return False
        return all(
            a * other.denom == b * self.denom
            for a, b in zip(self.scaled_coeffs, other.scaled_coeffs)
        )

    def __hash__(self):
        r = self.reduced()
        return hash((r.scaled_coeffs, r.denom))

    def __neg__(self):
        return ExactPoly(tuple(-c for c in self.scaled_coeffs), self.denom)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactPoly.constant(other)
        if not isinstance(other, ExactPoly):
            return NotImplemented
        if not other.scaled_coeffs:
            return self
        if not self.scaled_coeffs:
            return other
        d = _lcm(self.denom, other.denom)
        fa, fb = d // self.denom, d // other.denom
        a, b = self.scaled_coeffs, other.scaled_coeffs
        n = max(len(a), len(b))
        out = [
            (a[i] * fa if i < len(a) else 0) + (b[i] * fb if i < len(b) else 0)
            for i in range(n)
        ]
        return ExactPoly(tuple(out), d)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactPoly.constant(other)
        if not isinstance(other, ExactPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return ExactPoly(tuple(c * other for c in self.scaled_coeffs), self.denom)
        if isinstance(other, Fraction):
            return ExactPoly(
                tuple(c * other.numerator for c in self.scaled_coeffs),
                self.denom * other.denominator,
            )
        if not isinstance(other, ExactPoly):
            return NotImplemented
        return ExactPoly(
            _convolve(self.scaled_coeffs, other.scaled_coeffs), self.denom * other.denom
        )

    __rmul__ = __mul__

    def derivative(self) -> "ExactPoly":
        c = self.scaled_coeffs
        return ExactPoly(tuple(k * c[k] for k in range(1, len(c))), self.denom)

    def __call__(self, y):
        """Evaluate at ``y``; exact for int/Fraction, otherwise in ``y``'s arithmetic."""
        acc = 0
        if isinstance(y, (int, Fraction)):
            for c in reversed(self.scaled_coeffs):
                acc = acc * y + c
            return Fraction(acc, self.denom)
        for c in reversed(self.scaled_coeffs):
            acc = acc * y + c
        return acc / self.denom

    def abs_eval(self, y):
        """``sum |c_k| y^k / denom``: the majorant used for cancellation estimates."""
        acc = 0
        for c in reversed(self.scaled_coeffs):
            acc = acc * y + abs(c)
        return acc / self.denom

    # rendering ----------------------------------------------------------------

    def to_text(self, var: str = "y") -> str:
        """Render as e.g. ``-(y^2 - 6y + 11)/2`` (integer body over the stored denominator)."""
        c = self.scaled_coeffs
        if not c:
            return "0"
        sign = -1 if c[-1] < 0 else 1
        parts = []
        for k in range(len(c) - 1, -1, -1):
            v = c[k] * sign
            if v == 0:
                continue
            mag = abs(v)
            if k == 0:
                body = str(mag)
            else:
                coef = "" if mag == 1 else str(mag)
                body = coef + (var if k == 1 else f"{var}^{k}")
            if not parts:
                parts.append(body if v > 0 else "-" + body)
            else:
                parts.append(("+ " if v > 0 else "- ") + body)
        inner = " ".join(parts)
        nterms = len(parts)
        if self.denom == 1:
            if sign < 0:
                return f"-({inner})" if nterms > 1 else f"-{inner}"
            return inner
        body = f"({inner})" if nterms > 1 else inner
        return f"{'-' if sign < 0 else ''}{body}/{self.denom}"

    def __repr__(self):
        return f"ExactPoly({self.to_text()})"

    def to_json_obj(self) -> dict:
        return {"denom": str(self.denom), "coeffs": [str(c) for c in self.scaled_coeffs]}


_ZERO = ExactPoly(())
_ONE = ExactPoly((1,))
_Y = ExactPoly((0, 1))


def _sum_polys(polys: Iterable[ExactPoly]) -> ExactPoly:
    """Sum with a single common denominator and one final reduction."""
    items = [p for p in polys if p.scaled_coeffs]
    if not items:
        return _ZERO
    d = 1
    for p in items:
        d = _lcm(d, p.denom)
    n = max(len(p.scaled_coeffs) for p in items)
    acc = [0] * n
    for p in items:
        f = d // p.denom
        for i, c in enumerate(p.scaled_coeffs):
            acc[i] += c * f
    return ExactPoly(tuple(acc), d).reduced()


class _Grid:
    """A truncated series packed as one integer grid over a common denominator.

    Slot ``n * S + k`` holds the numerator of the y^k coefficient of the
    x^{-n} term, with row stride ``S = order + 1`` (deg q_n <= n <= order).
    """

    __slots__ = ("flat", "denom", "order")

    def __init__(self, flat: list[int], denom: int, order: int):
        g = math.gcd(denom, *flat)
        if g > 1:
            flat = [c // g for c in flat]
            denom //= g
        self.flat, self.denom, self.order = flat, denom, order

    @classmethod
    def from_series(cls, s: "FormalSeries", order: int) -> "_Grid":
        S = order + 1
        d = 1
        for t in s.terms[: order + 1]:
            d = _lcm(d, t.denom)
        flat = [0] * (S * S)
        for n, t in enumerate(s.terms[: order + 1]):
            f = d // t.denom
            base = n * S
            for k, c in enumerate(t.scaled_coeffs):
                flat[base + k] = c * f
        return cls(flat, d, order)

    def to_series(self) -> "FormalSeries":
        S = self.order + 1
        return FormalSeries(
            tuple(ExactPoly(tuple(self.flat[n * S : n * S + n + 1]), self.denom) for n in range(S))
        )

    def is_zero(self) -> bool:
        return not any(self.flat)

    def __mul__(self, other: "_Grid") -> "_Grid":
        L = (self.order + 1) ** 2
        ma, mb = _max_abs(self.flat), _max_abs(other.flat)
        if not ma or not mb:
            return _Grid([0] * L, 1, self.order)
        nbytes = ((ma * mb * L).bit_length() + 2 + 7) // 8
        prod = gmpy2.mpz(_pack(self.flat, nbytes)) * gmpy2.mpz(_pack(other.flat, nbytes))
        # slots past the truncation order are discarded by _unpack's mask
        return _Grid(_unpack(int(prod), nbytes, L), self.denom * other.denom, self.order)

    def __add__(self, other: "_Grid") -> "_Grid":
        d = _lcm(self.denom, other.denom)
        fa, fb = d // self.denom, d // other.denom
        return _Grid([a * fa + b * fb for a, b in zip(self.flat, other.flat)], d, self.order)

    def copy_with_constant(self, c: int) -> "_Grid":
        flat = [0] * len(self.flat)
        flat[0] = c
        return _Grid(flat, 1, self.order)

    def scale(self, c: Fraction) -> "_Grid":
        return _Grid([v * c.numerator for v in self.flat], self.denom * c.denominator, self.order)


def _grid_poly_eval(u: "_Grid", coeffs: Sequence[Fraction]) -> "_Grid":
    """``sum coeffs[k] * u^k`` (Paterson-Stockmeyer grouping, same truncated sum)."""
    K = len(coeffs) - 1
    m = max(1, math.isqrt(K))
    zero = _Grid([0] * len(u.flat), 1, u.order)
    one = zero.copy_with_constant(1)
    powers = [one, u]
    for _ in range(2, m + 1):
        powers.append(powers[-1] * u)
    giant = powers[m]
    blocks = []
    for start in range(0, K + 1, m):
        acc = zero
        for i in range(m):
            k = start + i
            if k <= K and coeffs[k]:
                acc = acc + powers[i].scale(coeffs[k])
        blocks.append(acc)
    result = blocks[-1]
    for block in reversed(blocks[:-1]):
        result = result * giant + block
    return result


# ---------------------------------------------------------------------------
# FormalSeries: elements sum_{n=0}^{N} q_n(y) / x^n of the local ring


@dataclass(frozen=True)
class FormalSeries:
    """Truncated series ``sum_{n=0}^{N} q_n(y) x^{-n}`` with ``deg q_n <= n``.

    Binary operations truncate at the smaller of the two orders.
    """

    terms: tuple[ExactPoly, ...]

    def __post_init__(self):
        terms = tuple(t.reduced() for t in self.terms)
        if not terms:
            raise ValueError("a FormalSeries needs at least the order-0 term")
        object.__setattr__(self, "terms", terms)

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    @classmethod
    def constant(cls, value, order: int) -> "FormalSeries":
        return cls((ExactPoly.constant(value),) + (_ZERO,) * order)

    @classmethod
    def from_polys(cls, polys: Sequence[ExactPoly], order: int) -> "FormalSeries":
        t = list(polys[: order + 1])
        t += [_ZERO] * (order + 1 - len(t))
        return cls(tuple(t))

    def __getitem__(self, n: int) -> ExactPoly:
        return self.terms[n] if 0 <= n < len(self.terms) else _ZERO

    def truncate(self, order: int) -> "FormalSeries":
        return FormalSeries.from_polys(self.terms, order)

    def valuation(self) -> int | None:
        """Least n with q_n != 0 (the ring's ``deg``); None for zero."""
        for n, t in enumerate(self.terms):
            if not t.is_zero():
                return n
        return None

    def in_ring(self) -> bool:
        return all(t.degree <= n for n, t in enumerate(self.terms))

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        n = max(self.order, other.order)
        return all(self[i] == other[i] for i in range(n + 1))

    def __hash__(self):
        return hash(self.terms)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FormalSeries.constant(other, self.order)
        n = min(self.order, other.order)
        return FormalSeries(tuple(self[i] + other[i] for i in range(n + 1)))

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries(tuple(-t for t in self.terms))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FormalSeries.constant(other, self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "FormalSeries":
        c = Fraction(c)
        return FormalSeries(tuple(t * c for t in self.terms))

    def times_poly(self, p: ExactPoly) -> "FormalSeries":
        return FormalSeries(tuple(t * p for t in self.terms))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, FormalSeries):
            return NotImplemented
        n = min(self.order, other.order)
        ga, gb = _Grid.from_series(self, n), _Grid.from_series(other, n)
        return (ga * gb).to_series()

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "FormalSeries":
        """Multiply by ``x^{-k}``, keeping the same truncation order."""
        t = (_ZERO,) * k + self.terms[: len(self.terms) - k]
        return FormalSeries(t)

    def d_x(self) -> "FormalSeries":
        """``a_x = -sum n q_n x^{-(n+1)}``, truncated at the current order."""
        out = [_ZERO] * (self.order + 1)
        for n in range(1, self.order):
            out[n + 1] = self.terms[n] * (-n)
        return FormalSeries(tuple(out))

    def d_y(self) -> "FormalSeries":
        return FormalSeries(tuple(t.derivative() for t in self.terms))

    def log(self) -> "FormalSeries":
        """``log(1+u) = sum_{k>=1} (-1)^{k+1} u^k / k`` for a unit with q_0 = 1."""
        if self.terms[0] != _ONE:
            raise ValueError("log is defined only for series with constant term 1")
        n = self.order
        u = _Grid.from_series(self - 1, n)
        coeffs = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, n + 1)]
        return _grid_poly_eval(u, coeffs).to_series()

    def exp(self) -> "FormalSeries":
        """``exp(u) = sum u^k / k!`` for u in the maximal ideal (q_0 = 0)."""
        if not self.terms[0].is_zero():
            raise ValueError("exp is defined only for series with zero constant term")
        n = self.order
        acc = FormalSeries.constant(1, n)
        power = FormalSeries.constant(1, n)
        for k in range(1, n + 1):
            power = (power * self).scale(Fraction(1, k))
            if power.valuation() is None:
                break
            acc = acc + power
        return acc


# ---------------------------------------------------------------------------
# coefficient triangles


class TriangleKind(enum.Enum):
    A_TRIANGLE = "a"
    B_TRIANGLE = "b"


@dataclass(frozen=True)
class CoeffTriangle:
    """Row ``n`` holds entries ``k = 0..n``.

    The a-triangle starts at n = 0, the b-triangle at n = 1 (``rows[0]`` is
    row ``first_row``).
    """

    kind: TriangleKind
    rows: tuple[tuple[int, ...], ...]
    diag_A: tuple[int, ...]
    subdiag_B: tuple[int, ...]
    first_row: int = 0

    @property
    def N(self) -> int:
        return self.first_row + len(self.rows) - 1

    def row(self, n: int) -> tuple[int, ...]:
        return self.rows[n - self.first_row]

    def __call__(self, n: int, k: int) -> int:
        if n < self.first_row or n > self.N or k < 0 or k > n:
            return 0
        return self.rows[n - self.first_row][k]


class _OpCounter:
    """Charges coefficient operations using the complexity proof's unit costs."""

    def __init__(self):
        self.ops = 0

    def charge(self, k: int = 1):
        self.ops += k


def _binomial_rows(m_max: int, counter: _OpCounter | None = None) -> list[list[int]]:
    rows = [[1]]
    for m in range(1, m_max + 1):
        prev = rows[-1]
        row = [1] * (m + 1)
        for j in range(1, m):
            row[j] = prev[j - 1] + prev[j]
            if counter is not None:
                counter.charge()
        rows.append(row)
    return rows


def gen_sequences(N: int, _counter: _OpCounter | None = None) -> tuple[list[int], list[int]]:
    """Diagonal ``A_n = a(n,n)`` and sub-diagonal ``B_n = a(n,n-1)`` for 0 <= n <= N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    A = [1, 2]
    B = [1, 1]
    binom = _binomial_rows(max(N - 2, 0), _counter)
    for n in range(2, N + 1):
        B.append(n * (B[n - 1] + (n - 1) * A[n - 1]))
        if _counter is not None:
            _counter.charge(4)
        row = binom[n - 2]
        s = 0
        for k in range(1, n):
            s += row[k - 1] * (k * (k - 1) * A[k - 1] - A[k] + k * B[k - 1]) * A[n - k - 1]
        A.append(n * n * A[n - 1] + n * B[n - 1] - (n - 1) * s)
        if _counter is not None:
            _counter.charge(7 + 8 * (n - 1))
    return A, B


def _triangle_rows(N: int, _counter: _OpCounter | None = None):
    A, B = gen_sequences(N, _counter)
    rows: list[tuple[int, ...]] = [(1,), (1, 2)]
    for n in range(2, N + 1):
        prev = rows[-1]
        row = [0] * (n + 1)
        # column 0 is (n-1)!; the proof's 6(n-1) tally charges only 1 <= k < n
        row[0] = (n - 1) * prev[0]
        for k in range(1, n):
            t = n * (n - 1) * prev[k]
            q, r = divmod(t, n - k)
            if r:
                raise InternalInconsistency(f"a({n},{k}): {t} not divisible by {n - k}")
            row[k] = n * prev[k - 1] + q
            if _counter is not None:
                _counter.charge(6)
        if row[n - 1] != B[n]:
            raise InternalInconsistency(f"a({n},{n - 1}) = {row[n - 1]} but B_{n} = {B[n]}")
        row[n] = A[n]
        rows.append(tuple(row))
    return A, B, rows[: N + 1]


_TRI_CACHE: dict[str, CoeffTriangle] = {}


def coeff_triangle_a(N: int) -> CoeffTriangle:
    """Triangle a(n,k), 0 <= k <= n <= N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    cached = _TRI_CACHE.get("a")
    if cached is not None and cached.N >= N:
        if cached.N == N:
            return cached
        return CoeffTriangle(
            TriangleKind.A_TRIANGLE, cached.rows[: N + 1], cached.diag_A[: N + 1],
            cached.subdiag_B[: N + 1],
        )
    A, B, rows = _triangle_rows(N)
    tri = CoeffTriangle(TriangleKind.A_TRIANGLE, tuple(rows), tuple(A), tuple(B))
    _TRI_CACHE["a"] = tri
    return tri


def coeff_triangle_b(N: int) -> CoeffTriangle:
    """Triangle b(n,k) = a(n,k) - (n-k+1) a(n,k-1) for 1 <= n <= N."""
    a = coeff_triangle_a(N)
    rows = []
    for n in range(1, N + 1):
        rows.append(tuple(a(n, k) - (n - k + 1) * a(n, k - 1) for k in range(n + 1)))
    return CoeffTriangle(TriangleKind.B_TRIANGLE, tuple(rows), a.diag_A, a.subdiag_B, first_row=1)


def _poly_from_row(n: int, row: Sequence[int]) -> ExactPoly:
    # coefficient of y^{n-k} is (-1)^{n+1} (-1)^k row[k], over n!
    sign = -1 if (n + 1) % 2 else 1
    coeffs = [0] * (n + 1)
    for k, v in enumerate(row):
        coeffs[n - k] = sign * (-v if k % 2 else v)
    return ExactPoly(tuple(coeffs), math.factorial(n), degree_bound=n)


_P0 = ExactPoly((-1, 1), 1, degree_bound=1)


def poly_P(n: int) -> ExactPoly:
    """P_n from the a-triangle; P_0 = y - 1 is the special case."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return _P0
    return _poly_from_row(n, coeff_triangle_a(max(n, 1)).row(n))


def poly_Q(n: int) -> ExactPoly:
    """Q_n = P_n + P_n' (n >= 1), over n!."""
    if n < 1:
        raise ValueError("Q_n is defined for n >= 1")
    p = poly_P(n)
    q = p + p.derivative()
    return ExactPoly(q.over(p.denom).scaled_coeffs, p.denom, degree_bound=n)


def poly_Q_from_b(n: int) -> ExactPoly:
    """Q_n read off the b-triangle (same sign convention as the a-triangle)."""
    if n < 1:
        raise ValueError("Q_n is defined for n >= 1")
    return _poly_from_row(n, coeff_triangle_b(n).row(n))


_POLY_CACHE: list[ExactPoly] = []


def cipolla_polys(N: int) -> tuple[ExactPoly, ...]:
    """``(P_0, ..., P_N)`` from the triangle path, cached and grown on demand."""
    if N < 0:
        raise ValueError("N must be >= 0")
    if len(_POLY_CACHE) <= N:
        tri = coeff_triangle_a(max(N, 1))
        _POLY_CACHE[:] = [_P0] + [_poly_from_row(n, tri.row(n)) for n in range(1, tri.N + 1)]
    return tuple(_POLY_CACHE[: N + 1])


# ---------------------------------------------------------------------------
# independent routes


def gen_P_recurrence(N: int) -> list[ExactPoly]:
    """P_0..P_N from the recurrence, carried out on the integer polynomials p_n = n! P_n."""
    if N < 1:
        raise ValueError("N must be >= 1")
    p: list[ExactPoly] = [ExactPoly((-1, 1))]
    dp: list[ExactPoly] = [p[0].derivative()]
    # brace_k = k(k-1) p_{k-1} - p_k - k p'_{k-1}, reused across n
    brace: list[ExactPoly] = [_ZERO]
    for n in range(1, N + 1):
        terms = [p[n - 1] * (n * n), dp[n - 1] * (-n)]
        if n >= 2:
            acc = []
            c = 1  # C(n-2, k-1)
            for k in range(1, n):
                acc.append(brace[k] * p[n - k - 1] * c)
                c = c * (n - 1 - k) // k
            terms.append(_sum_polys(acc) * (n - 1))
        pn = _sum_polys(terms)
        if pn.denom != 1:
            raise InternalInconsistency(f"p_{n} is not an integer polynomial")
        p.append(pn)
        dp.append(pn.derivative())
        brace.append(_sum_polys([p[n - 1] * (n * (n - 1)), -pn, dp[n - 1] * (-n)]))
    return [
        ExactPoly(pk.scaled_coeffs, math.factorial(k), degree_bound=k + (k == 0))
        for k, pk in enumerate(p)
    ]


def _T(V: FormalSeries) -> FormalSeries:
    """T(V) = 1 + y/x - V/x - V_x - V_y/x + (log V)/x."""
    n = V.order
    one_plus_y = FormalSeries.from_polys([_ONE, _Y], n)
    return one_plus_y - V.shift() - V.d_x() - V.d_y().shift() + V.log().shift()


def gen_P_fixed_point(N: int, *, strict_truncation: bool = False) -> list[ExactPoly]:
    """P_0..P_N by iterating V <- T(V) from V = 1 for N + 2 iterations.

    Each iteration fixes one more order, and the order-n term of T(V) only
    depends on orders < n of V, so iteration i is truncated at order
    min(i, N + 1) without changing the result.  ``strict_truncation`` keeps
    every iterate at order N + 1.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    M = N + 1
    V = FormalSeries.constant(1, M if strict_truncation else 0)
    prev = None
    for i in range(1, N + 3):
        order = M if strict_truncation else min(i, M)
        V = _T(V.truncate(order))
        if i == N + 2 and prev is not None and V != prev:
            raise InternalInconsistency("fixed-point iteration did not stabilise")
        prev = V
    out = []
    for n in range(N + 1):
        q = V[n + 1]
        denom = math.factorial(n)
        out.append(ExactPoly(q.over(denom).scaled_coeffs, denom, degree_bound=max(n, 1)))
    return out


# ---------------------------------------------------------------------------
# the sequence a_n with log(1 - sum n!/x^n)^{-1} = sum a_n/(n x^n)


@dataclass(frozen=True)
class ASequence:
    values: tuple[int, ...]  # a_1 .. a_N

    def __getitem__(self, n: int) -> int:
        """1-based access: ``seq[n] == a_n``."""
        if n < 1:
            raise IndexError("a_n is defined for n >= 1")
        return self.values[n - 1]

    def __len__(self):
        return len(self.values)


def a_sequence(N: int) -> ASequence:
    if N < 1:
        raise ValueError("N must be >= 1")
    fact = [1]
    for k in range(1, N + 1):
        fact.append(fact[-1] * k)
    a = [0, 1]
    for n in range(2, N + 1):
        a.append(fact[n] * n + sum(fact[k] * a[n - k] for k in range(1, n)))
    return ASequence(tuple(a[1 : N + 1]))


# ---------------------------------------------------------------------------
# verification and accounting


@dataclass(frozen=True)
class PdeReport:
    N: int
    ok: bool
    first_failure: int | None = None
    which: str | None = None


def check_pde(N: int) -> PdeReport:
    """Exact check of (n-1)P_{n-1} = P'_{n-1} - P'_n and its Q analogue (n >= 2)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    P = cipolla_polys(N)
    Q = [None] + [poly_Q(n) for n in range(1, N + 1)]
    for n in range(1, N + 1):
        if P[n - 1] * (n - 1) != P[n - 1].derivative() - P[n].derivative():
            return PdeReport(N, False, n, "P")
        if n >= 2 and Q[n - 1] * (n - 1) != Q[n - 1].derivative() - Q[n].derivative():
            return PdeReport(N, False, n, "Q")
    return PdeReport(N, True)


def op_count_formula(N: int) -> int:
    return (15 * N * N + 3 * N - 16) // 2


def op_count_model(N: int) -> int:
    """Coefficient operations charged while running the triangle algorithm up to N."""
    if N < 2:
        raise ValueError("N must be >= 2")
    counter = _OpCounter()
    _triangle_rows(N, counter)
    return counter.ops


# ---------------------------------------------------------------------------
# export


def triangle_to_json(tri: CoeffTriangle) -> str:
    obj = {
        "kind": tri.kind.value,
        "first_row": tri.first_row,
        "rows": [[str(v) for v in row] for row in tri.rows],
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"


def triangle_from_json(text: str) -> CoeffTriangle:
    obj = json.loads(text)
    kind = TriangleKind(obj["kind"])
    rows = tuple(tuple(int(v) for v in row) for row in obj["rows"])
    first = obj.get("first_row", 0 if kind is TriangleKind.A_TRIANGLE else 1)
    N = first + len(rows) - 1
    A, B = gen_sequences(max(N, 1))
    return CoeffTriangle(kind, rows, tuple(A), tuple(B), first_row=first)


def triangle_to_csv(tri: CoeffTriangle) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row", "col", "value"])
    for i, row in enumerate(tri.rows):
        for k, v in enumerate(row):
            w.writerow([i + tri.first_row, k, v])
    return buf.getvalue()
