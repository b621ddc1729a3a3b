"""Exact unit scaling for file I/O.

Millimeter cells are scaled to meters through decimal arithmetic rather
than binary multiplication: ``float(x) * 1e-3 * 1e3 != float(x)`` for a
measurable fraction of doubles, which would break the bit-exact parser
round trip. Shifting the decimal exponent is exact in both directions.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation


def mm_cell_to_m(cell: str) -> float:
    """Parse a millimeter text cell into meters with a single rounding."""
    try:
        return float(Decimal(cell).scaleb(-3))
    except InvalidOperation:
        raise ValueError(f"not a number: {cell!r}") from None


def m_to_mm_text(value: float) -> str:
    """Render meters as a millimeter cell that parses back to ``value`` exactly."""
    return format(Decimal(repr(value)).scaleb(3), "f")
