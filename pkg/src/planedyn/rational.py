"""Exact rational scalars.

Everything in this package computes over Q.  gmpy2's mpq is used when
available (it is several times faster than fractions.Fraction on the
arrangement-heavy paths); the stdlib Fraction is a drop-in fallback.
Both types hash, compare and mix with ints, which is all we rely on.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Q  # type: ignore[import-untyped]

    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Q  # type: ignore[assignment]

    _HAVE_GMPY2 = False

QLike = object  # int | Q | "p/q" string; kept loose on purpose


def to_q(x) -> "Q":
    """Coerce ints, rationals and 'p/q' strings to an exact rational.

    Floats are rejected: silently converting them would launder binary
    rounding error into the exact kernel.
    """
    if isinstance(x, float):
        raise TypeError(f"refusing to coerce float {x!r}; pass a rational or 'p/q' string")
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return Q(int(num), int(den))
        return Q(int(s))
    return Q(x)


def fmt_q(x) -> str:
    """Render a rational as 'p/q' (or 'p' when integral), the JSON wire form."""
    q = Q(x)
    num, den = q.numerator, q.denominator
    if den == 1:
        return str(int(num))
    return f"{int(num)}/{int(den)}"


def qmin(*xs):
    return min(xs)


def qmax(*xs):
    return max(xs)


def qabs(x):
    return -x if x < 0 else x
