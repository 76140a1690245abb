"""Exact univariate polynomials and rational functions over the integers.

Everything here is immutable.  A :class:`RationalFunction` is always kept in
canonical form: numerator and denominator coprime as polynomials, the pair
has integer content 1, and the denominator has a positive leading
coefficient.  Equality is therefore structural.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

__all__ = [
    "Polynomial",
    "RationalFunction",
    "normalize",
    "add",
    "mul",
    "equals",
    "T",
]


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _content(coeffs: Sequence[int]) -> int:
    g = 0
    for x in coeffs:
        g = gcd(g, x)
        if g == 1:
            break
    return g


class Polynomial:
    """Polynomial in ``t``; ``coeffs[i]`` is the coefficient of ``t**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()) -> None:
        c = _strip(int(x) for x in coeffs)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, value: int) -> Polynomial:
        return cls((value,))

    @classmethod
    def monomial(cls, coeff: int, power: int) -> Polynomial:
        return cls((0,) * power + (coeff,))

    # basic queries
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def content(self) -> int:
        return _content(self.coeffs)

    def primitive(self) -> Polynomial:
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.coeffs[-1] < 0:
            g = -g
        return Polynomial(x // g for x in self.coeffs)

    def __call__(self, x: Union[int, Fraction]):
        acc: Union[int, Fraction] = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # arithmetic
    def __add__(self, other: Polynomial) -> Polynomial:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return Polynomial(out)

    def __neg__(self) -> Polynomial:
        return Polynomial(-x for x in self.coeffs)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Union[Polynomial, int]) -> Polynomial:
        if isinstance(other, int):
            return Polynomial(x * other for x in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        result = Polynomial((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def pseudo_remainder(self, other: Polynomial) -> Polynomial:
        """Remainder of ``lc(other)**k * self`` by ``other`` (stays integral)."""
        if other.is_zero():
            raise ZeroDivisionError("pseudo-division by the zero polynomial")
        r = list(self.coeffs)
        d = other.coeffs
        n = len(d) - 1
        lc = d[-1]
        while len(r) - 1 >= n and r:
            shift = len(r) - 1 - n
            top = r[-1]
            r = [x * lc for x in r]
            for i, y in enumerate(d):
                r[shift + i] -= top * y
            r = list(_strip(r))
        return Polynomial(r)

    def exact_div(self, other: Polynomial) -> Polynomial:
        """Quotient when ``other`` divides ``self`` over the integers."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.coeffs)
        d = other.coeffs
        n = len(d) - 1
        lc = d[-1]
        q = [0] * max(len(r) - n, 0)
        while r and len(r) - 1 >= n:
            shift = len(r) - 1 - n
            c, rem = divmod(r[-1], lc)
            if rem:
                raise ArithmeticError("polynomial division is not exact")
            q[shift] = c
            for i, y in enumerate(d):
                r[shift + i] -= c * y
            r = list(_strip(r))
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return Polynomial(q)

    def gcd(self, other: Polynomial) -> Polynomial:
        """Primitive gcd with positive leading coefficient (primitive PRS)."""
        a, b = self, other
        if a.is_zero():
            return b.primitive()
        if b.is_zero():
            return a.primitive()
        a, b = a.primitive(), b.primitive()
        if a.degree < b.degree:
            a, b = b, a
        while not b.is_zero():
            a, b = b, a.pseudo_remainder(b).primitive()
        return a.primitive()

    # comparison and display
    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.coeffs == _strip((other,))
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("Polynomial", self.coeffs))

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = "t" if i == 1 else f"t^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


T = Polynomial((0, 1))
_ONE = Polynomial((1,))


class RationalFunction:
    """Canonical quotient ``numerator / denominator`` of integer polynomials."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: Union[Polynomial, int], denominator: Union[Polynomial, int] = 1) -> None:
        num = numerator if isinstance(numerator, Polynomial) else Polynomial.constant(numerator)
        den = denominator if isinstance(denominator, Polynomial) else Polynomial.constant(denominator)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Polynomial(), _ONE
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            c = gcd(num.content(), den.content())
            if den.leading < 0:
                c = -c
            if c != 1:
                num = Polynomial(x // c for x in num.coeffs)
                den = Polynomial(x // c for x in den.coeffs)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def coerce(cls, x: Union[RationalFunction, Polynomial, int]) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        return cls(x)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_constant(self) -> bool:
        return self.numerator.degree <= 0 and self.denominator.degree == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(self.numerator(0), self.denominator(0))

    def __add__(self, other) -> RationalFunction:
        other = RationalFunction.coerce(other)
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other) -> RationalFunction:
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other) -> RationalFunction:
        return RationalFunction.coerce(other) - self

    def __mul__(self, other) -> RationalFunction:
        other = RationalFunction.coerce(other)
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        other = RationalFunction.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.numerator * other.denominator, self.denominator * other.numerator)

    def __call__(self, x: Union[int, Fraction]) -> Fraction:
        d = self.denominator(x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at t={x}")
        return Fraction(self.numerator(x)) / d

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Polynomial)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash(("RationalFunction", self.numerator.coeffs, self.denominator.coeffs))

    def __repr__(self) -> str:
        return f"RationalFunction({list(self.numerator.coeffs)}, {list(self.denominator.coeffs)})"

    def __str__(self) -> str:
        num, den = self.numerator, self.denominator
        if den == Polynomial((1,)):
            return str(num)
        # show powers of (1 - t) factored, sign carried by the numerator
        k = den.degree
        base = Polynomial((1, -1)) ** k
        for sign in (1, -1):
            if den == base * sign:
                shown = num * sign
                power = "(1 - t)" if k == 1 else f"(1 - t)^{k}"
                return f"({shown}) / {power}"
        return f"({num}) / ({den})"


def normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Canonical form of ``num/den``; raises ZeroDivisionError if ``den`` is 0."""
    return RationalFunction(num, den)


def add(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    return a + b


def mul(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    return a * b


def equals(a: RationalFunction, b: RationalFunction) -> bool:
    return (a - b).is_zero()
