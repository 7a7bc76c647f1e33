"""JSON helpers: complex matrices as [re, im] pairs, rationals as "num/den"."""

from fractions import Fraction

import numpy as np

from .errors import DomainError


def fraction_to_string(value: Fraction) -> str:
    """Render a rational as "num/den" (always with an explicit denominator)."""
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def fraction_from(value) -> Fraction:
    """Parse an exact rational from a Fraction, int, or string.

    Strings accept both "3/32" and decimal forms like "0.25".  Floats are
    rejected: they would silently smuggle binary round-off into arithmetic
    that is supposed to stay exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse rational from {value!r}") from exc
    raise DomainError(
        f"expected Fraction, int, or string for an exact rational, got {type(value).__name__}"
    )


def json_value(value):
    """Encode a report value for JSON: rationals as strings, floats rounded
    to 12 significant digits so output is byte-stable across runs."""
    if value is None or isinstance(value, bool):
        return value
    if isinstance(value, Fraction):
        return fraction_to_string(value)
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, int):
        return value
    return str(value)


def format_value(value) -> str:
    """Render a report value for text output."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return fraction_to_string(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def complex_matrix_to_json(matrix: np.ndarray) -> list:
    """Encode a complex matrix as nested lists of [re, im] pairs."""
    m = np.asarray(matrix, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def complex_matrix_from_json(data) -> np.ndarray:
    """Decode a matrix whose entries are numbers or [re, im] pairs."""
    rows = []
    for row in data:
        out = []
        for entry in row:
            if isinstance(entry, (int, float)):
                out.append(complex(entry))
            elif isinstance(entry, (list, tuple)) and len(entry) == 2:
                out.append(complex(float(entry[0]), float(entry[1])))
            else:
                raise DomainError(f"matrix entry must be a number or [re, im] pair, got {entry!r}")
        rows.append(out)
    m = np.array(rows, dtype=np.complex128)
    if m.ndim != 2:
        raise DomainError("matrix JSON must be a list of equal-length rows")
    return m
