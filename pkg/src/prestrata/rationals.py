"""Exact rational arithmetic with an optional fast backend.

Every number that leaves this package is an exact rational.  When gmpy2 is
installed its ``mpq`` type is used (noticeably faster in elimination-heavy
work); otherwise the standard library's ``Fraction`` is a drop-in fallback.
Both accept "p/q" strings and print the same way, which the (de)serializers
below rely on.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as QQ  # type: ignore[import-untyped]

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    QQ = Fraction
    HAVE_GMPY2 = False

QQ_ZERO = QQ(0)
QQ_ONE = QQ(1)


def qq(value: int | str) -> "QQ":
    """Build an exact rational from an int or a 'p/q' string."""
    return QQ(value)


def qq_str(value: "QQ") -> str:
    """Canonical 'p/q' string (denominator always written)."""
    return f"{value.numerator}/{value.denominator}"


def qq_from_str(text: str) -> "QQ":
    """Parse 'p/q' (or plain 'p') back into an exact rational."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return QQ(int(num), int(den))
    return QQ(int(text))
