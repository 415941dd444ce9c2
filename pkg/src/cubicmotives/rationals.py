"""Exact rational scalars with a swappable backend.

Everything in this package computes over Q with zero tolerance, so the scalar
type is the one genuinely hot kernel.  At import time we pick gmpy2's compiled
``mpq`` when it is installed and fall back to the stdlib ``fractions.Fraction``
otherwise.  Both implement ``numbers.Rational``, interoperate with ints and
with each other, and round-trip through the ``"p/q"`` string form used in all
JSON interfaces.

Set ``CUBICMOTIVES_RATIONALS=fraction`` (or ``gmpy2``) to force a backend;
``benchmarks/bench_rationals.py`` compares the two.
"""

from __future__ import annotations

import os
from fractions import Fraction

_choice = os.environ.get("CUBICMOTIVES_RATIONALS", "").strip().lower()

if _choice in ("", "gmpy2"):
    try:
        from gmpy2 import mpq as _mpq  # type: ignore

        BACKEND = "gmpy2"
    except ImportError:
        if _choice == "gmpy2":
            raise
        _mpq = None
        BACKEND = "fraction"
elif _choice == "fraction":
    _mpq = None
    BACKEND = "fraction"
else:
    raise RuntimeError(f"unknown CUBICMOTIVES_RATIONALS backend: {_choice!r}")


if BACKEND == "gmpy2":

    def QQ(num=0, den=None):
        """Build an exact rational (gmpy2 backend)."""
        if den is None:
            if isinstance(num, str):
                return _mpq(num)
            return _mpq(num)
        return _mpq(num, den)

else:

    def QQ(num=0, den=None):
        """Build an exact rational (Fraction backend)."""
        if den is None:
            return Fraction(num)
        return Fraction(num, den)


ZERO = QQ(0)
ONE = QQ(1)


def is_rational(x) -> bool:
    import numbers

    return isinstance(x, numbers.Rational)


def rational_str(x) -> str:
    """Serialize as canonical ``"p/q"`` with q > 0 and gcd(p, q) = 1.

    The denominator is always written explicitly ("3/1"), keeping the JSON
    grammar uniform.
    """
    q = QQ(x)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s):
    """Parse ``"p/q"`` (or a bare integer / integer string) to an exact rational."""
    if is_rational(s):
        return QQ(s.numerator, s.denominator)
    text = str(s).strip()
    if "/" in text:
        p, q = text.split("/")
        return QQ(int(p), int(q))
    return QQ(int(text))
