"""
Exact rational helpers built on fractions.Fraction.

RationalScalar is Fraction: always in lowest terms with a positive
denominator, with exact arithmetic and comparison.
"""

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, List, Sequence, Union

from .errors import ParseError

RationalScalar = Fraction
Parameter = Union[Fraction, float]


def parse_fraction(text: Union[str, int, Fraction]) -> Fraction:
    """Parse "p/q", an integer or a finite decimal string into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Not an exact rational: {text!r}") from e


def format_fraction(value: Fraction) -> str:
    """Render as "p/q", or "p" for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def common_denominator(values: Iterable[Fraction]) -> int:
    """Least common multiple of the reduced denominators."""
    return reduce(math.lcm, (Fraction(v).denominator for v in values), 1)


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q of a matrix of Fractions by Gaussian elimination."""
    matrix: List[List[Fraction]] = [[Fraction(x) for x in row] for row in rows]
    if not matrix:
        return 0
    n_cols = max(len(row) for row in matrix)
    for row in matrix:
        row.extend([Fraction(0)] * (n_cols - len(row)))

    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(matrix)) if matrix[r][col] != 0), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        pivot_row = matrix[rank]
        for r in range(rank + 1, len(matrix)):
            factor = matrix[r][col] / pivot_row[col]
            if factor:
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], pivot_row)]
        rank += 1
        if rank == len(matrix):
            break
    return rank
