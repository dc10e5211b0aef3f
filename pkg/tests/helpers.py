from decimal import ROUND_CEILING, ROUND_HALF_EVEN, Decimal

import mpmath


def decimals_of(printed: str) -> int:
    return len(printed.split(".")[1]) if "." in printed else 0


def rounded(value, places: int, mode=ROUND_HALF_EVEN) -> Decimal:
    text = mpmath.nstr(value, 40, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    return Decimal(text).quantize(Decimal(1).scaleb(-places), rounding=mode)


def matches_rounded(value, printed: str, places: int = 5) -> bool:
    """``value`` rounded to ``places`` decimals equals ``printed`` read at that scale."""
    return rounded(value, places) == Decimal(printed).quantize(Decimal(1).scaleb(-places))


def matches_ceiling(value, printed: str) -> bool:
    """``value`` rounded up at the printed number of decimals equals ``printed``."""
    return rounded(value, decimals_of(printed), ROUND_CEILING) == Decimal(printed)


def matches_sig(value, printed: str, sig: int = 6) -> bool:
    return mpmath.nstr(value, sig) == mpmath.nstr(mpmath.mpf(printed), sig)
