"""
Univariate polynomials in the family parameter u with exact rational coefficients.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from .rational import Parameter, format_fraction, parse_fraction

Scalar = Union[Fraction, int]


def _canonical(coefficients: Iterable[Scalar]) -> Tuple[Fraction, ...]:
    coeffs = [Fraction(c) for c in coefficients]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class ParamPoly:
    """Polynomial sum_k coefficients[k] * u**k, stored without trailing zeros.

    The zero polynomial has an empty coefficient tuple.
    """
    coefficients: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _canonical(self.coefficients))

    @classmethod
    def constant(cls, value: Scalar) -> "ParamPoly":
        return cls((Fraction(value),))

    @classmethod
    def linear(cls, intercept: Scalar, slope: Scalar) -> "ParamPoly":
        return cls((Fraction(intercept), Fraction(slope)))

    @classmethod
    def variable(cls) -> "ParamPoly":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def parse(cls, items: Sequence[str]) -> "ParamPoly":
        return cls(tuple(parse_fraction(item) for item in items))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_constant(self) -> bool:
        return self.degree <= 0

    def constant_value(self) -> Fraction:
        return self.coefficients[0] if self.coefficients else Fraction(0)

    def __call__(self, u: Parameter) -> Parameter:
        """Evaluate by Horner's rule; exact for Fraction input."""
        if isinstance(u, float):
            result = 0.0
            for c in reversed(self.coefficients):
                result = result * u + float(c)
            return result
        result = Fraction(0)
        for c in reversed(self.coefficients):
            result = result * u + c
        return result

    def _coerce(self, other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.constant(other)
        return NotImplemented

    def __add__(self, other) -> "ParamPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coefficients, other.coefficients
        size = max(len(a), len(b))
        return ParamPoly(tuple(
            (a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0)
            for k in range(size)
        ))

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        return ParamPoly(tuple(-c for c in self.coefficients))

    def __sub__(self, other) -> "ParamPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "ParamPoly":
        return (-self) + other

    def __mul__(self, other) -> "ParamPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return ParamPoly()
        product = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                product[i + j] += x * y
        return ParamPoly(tuple(product))

    __rmul__ = __mul__

    def substitute(self, inner: "ParamPoly") -> "ParamPoly":
        """Composition self(inner(u))."""
        result = ParamPoly()
        for c in reversed(self.coefficients):
            result = result * inner + c
        return result

    def derivative(self) -> "ParamPoly":
        return ParamPoly(tuple(k * c for k, c in enumerate(self.coefficients) if k > 0))

    def sup_abs_on(self, interval: Tuple[Fraction, Fraction], points: int) -> Fraction:
        """max |p(u)| over the uniform grid with points + 1 nodes on the interval."""
        lower, upper = (Fraction(x) for x in interval)
        return max(abs(self(lower + (upper - lower) * k / points)) for k in range(points + 1))

    def padded(self, length: int) -> Tuple[Fraction, ...]:
        """Coefficients padded with zeros to the given length."""
        return self.coefficients + (Fraction(0),) * (length - len(self.coefficients))

    def to_strings(self) -> Tuple[str, ...]:
        if not self.coefficients:
            return ("0",)
        return tuple(format_fraction(c) for c in self.coefficients)

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            coeff = format_fraction(c)
            if k == 0:
                terms.append(coeff)
            elif k == 1:
                terms.append(f"{coeff}*u")
            else:
                terms.append(f"{coeff}*u^{k}")
        return " + ".join(terms)
