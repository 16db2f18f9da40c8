"""Exact arithmetic foundation: rationals, polynomials, rational functions.

Rationals are stdlib ``fractions.Fraction`` (already stored reduced with a
positive denominator, which is exactly the invariant we need).  On top of
that this module provides

  * dense univariate polynomials over Q in the formal variable ``t``
    (the zero polynomial is the empty coefficient tuple),
  * reduced rational functions num/den with a unique canonical form:
    integer coefficients, joint content 1, gcd(num, den) = 1, and the
    lowest-order nonzero coefficient of the denominator positive,
  * Maclaurin (power-series) coefficient extraction via the linear
    recurrence induced by the denominator,
  * decimal rendering with an exact round-half-even significant-digit rule,
  * the fixed-precision ``decimal`` context used by the fast numeric mode.

Everything here is immutable and safe to share between threads.
"""

from __future__ import annotations

import math
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from typing import Iterable, Union

from .errors import DomainError

Rational = Fraction
Number = Union[Fraction, Decimal]

EXACT = "exact"
DECIMAL = "decimal"

# Fast mode carries 40 significant digits (the design floor is 30).
DECIMAL_PRECISION = 40
DECIMAL_CONTEXT = Context(prec=DECIMAL_PRECISION, rounding=ROUND_HALF_EVEN)

# Relative tolerance for tie detection / comparisons in decimal mode.
DECIMAL_TIE_TOLERANCE = Decimal("1e-25")


def rational(numer: int, denom: int = 1) -> Fraction:
    """Reduced, sign-normalized rational; rejects a zero denominator."""
    if denom == 0:
        raise DomainError("rational denominator must be nonzero")
    return Fraction(numer, denom)


def parse_rational(text: str) -> Fraction:
    """Parse 'a/b', an integer, or a decimal string into an exact Fraction."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational number: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Serialize as "num/den", e.g. 3/5, 0/1."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def to_number(x: Fraction, mode: str) -> Number:
    """Convert an exact rational into the requested backend's number type."""
    if mode == EXACT:
        return Fraction(x)
    if mode == DECIMAL:
        return DECIMAL_CONTEXT.divide(Decimal(x.numerator), Decimal(x.denominator))
    raise DomainError(f"unknown numeric mode: {mode!r}")


def _round_half_even(numer: int, denom: int) -> int:
    """Nearest integer to numer/denom (denom > 0), ties to even."""
    q, r = divmod(numer, denom)
    if 2 * r > denom or (2 * r == denom and q % 2):
        q += 1
    return q


def to_decimal(x: Union[Fraction, Decimal, int], sig_digits: int) -> str:
    """Render x with exactly ``sig_digits`` significant digits, round half even.

    Plain positional notation, trailing zeros kept ("0.600"); zero renders
    as "0" since significant digits are undefined for it.
    """
    if sig_digits < 1:
        raise DomainError("sig_digits must be >= 1")
    x = Fraction(x)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    a, b = abs(x).numerator, abs(x).denominator

    def at_least_pow10(k: int) -> bool:
        # a/b >= 10**k, in integers only
        if k >= 0:
            return a >= b * 10**k
        return a * 10**-k >= b

    # e = floor(log10(|x|)), found exactly
    e = len(str(a)) - len(str(b))
    if not at_least_pow10(e):
        e -= 1
    elif at_least_pow10(e + 1):
        e += 1

    shift = sig_digits - 1 - e
    numer = a * 10**shift if shift >= 0 else a
    denom = b if shift >= 0 else b * 10**-shift
    m = _round_half_even(numer, denom)
    if m == 10**sig_digits:  # rounding carried into one more digit
        m //= 10
        e += 1
    digits = str(m)

    if e >= sig_digits:
        body = digits + "0" * (e + 1 - sig_digits)
    elif e >= 0:
        head, tail = digits[: e + 1], digits[e + 1 :]
        body = f"{head}.{tail}" if tail else head
    else:
        body = "0." + "0" * (-e - 1) + digits
    return sign + body


class Polynomial:
    """Dense univariate polynomial over Q; coefficient index = power of t."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Union[Fraction, int]] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def constant(cls, c: Union[Fraction, int]) -> "Polynomial":
        return cls((Fraction(c),))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial (empty coefficient tuple)."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def lowest_nonzero(self) -> Fraction:
        for c in self.coeffs:
            if c:
                return c
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Polynomial", self.coeffs))

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        return NotImplemented

    def divmod(self, other: "Polynomial") -> tuple:
        """Exact polynomial division over Q: (quotient, remainder)."""
        if other.is_zero:
            raise DomainError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[: other.degree])

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def div_exact(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise DomainError("polynomial division is not exact")
        return q

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        lead = self.coeffs[-1]
        return Polynomial(c / lead for c in self.coeffs)

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __call__(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self) -> str:
        return poly_str(self)


def poly_str(p: Polynomial, var: str = "t") -> str:
    """Human-readable form, low powers first: "6*t + t^2"."""
    if p.is_zero:
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        if k == 0:
            term = str(c)
        else:
            power = var if k == 1 else f"{var}^{k}"
            if c == 1:
                term = power
            elif c == -1:
                term = f"-{power}"
            else:
                term = f"{c}*{power}"
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return out


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic Euclidean gcd over Q (exact); gcd(0, 0) = 0."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def _integer_primitive(num: Polynomial, den: Polynomial) -> tuple:
    """Scale (num, den) jointly so both have integer coefficients of content 1."""
    denoms = [c.denominator for c in num.coeffs + den.coeffs]
    scale = math.lcm(*denoms) if denoms else 1
    ints_num = [c * scale for c in num.coeffs]
    ints_den = [c * scale for c in den.coeffs]
    content = math.gcd(*(abs(int(c)) for c in ints_num + ints_den))
    if content > 1:
        ints_num = [c / content for c in ints_num]
        ints_den = [c / content for c in ints_den]
    return Polynomial(ints_num), Polynomial(ints_den)


class RationalFunction:
    """Reduced quotient of two polynomials over Q in the variable t.

    Stored canonically: gcd(num, den) = 1, integer coefficients with joint
    content 1, and the lowest-order nonzero denominator coefficient positive.
    Equal fractions always have identical representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = num if isinstance(num, Polynomial) else Polynomial._coerce(num)
        den = den if isinstance(den, Polynomial) else Polynomial._coerce(den)
        if num is NotImplemented or den is NotImplemented:
            raise DomainError("rational function parts must be polynomials")
        if den.is_zero:
            raise DomainError("rational function denominator must be nonzero")
        if num.is_zero:
            self.num, self.den = Polynomial(), Polynomial.constant(1)
            return
        g = poly_gcd(num, den)
        num, den = num.div_exact(g), den.div_exact(g)
        num, den = _integer_primitive(num, den)
        if den.lowest_nonzero() < 0:
            num, den = -num, -den
        self.num, self.den = num, den

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        c = Fraction(c)
        return cls(Polynomial.constant(c.numerator), Polynomial.constant(c.denominator))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RationalFunction", self.num, self.den))

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other)
        return NotImplemented

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise DomainError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        coerced = self._coerce(other)
        if coerced is NotImplemented:
            return NotImplemented
        return coerced / self

    def __call__(self, x: Fraction) -> Fraction:
        d = self.den(Fraction(x))
        if d == 0:
            raise DomainError(f"rational function has a pole at {x}")
        return self.num(Fraction(x)) / d

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def series(self, k: int) -> list:
        return series_coefficients(self, k)

    def to_payload(self) -> dict:
        """JSON form: coefficient strings, constant term first."""
        return {
            "num": [format_rational(c) for c in self.num.coeffs],
            "den": [format_rational(c) for c in self.den.coeffs],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "RationalFunction":
        return cls(
            Polynomial(parse_rational(c) for c in payload["num"]),
            Polynomial(parse_rational(c) for c in payload["den"]),
        )

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.den == Polynomial.constant(1):
            return poly_str(self.num)
        return f"({poly_str(self.num)})/({poly_str(self.den)})"


def ratfun_normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Canonical rational function from an arbitrary num/den pair."""
    return RationalFunction(num, den)


def series_coefficients(f: RationalFunction, k: int) -> list:
    """Maclaurin coefficients c0..ck of f, as exact rationals.

    Requires den(0) != 0; the coefficients satisfy the recurrence
    sum_j den_j * c_{n-j} = num_n.
    """
    if k < 0:
        raise DomainError("series order must be >= 0")
    d0 = f.den.coeff(0)
    if d0 == 0:
        raise DomainError("pole at the origin: denominator constant term is zero")
    coeffs = []
    for n in range(k + 1):
        acc = f.num.coeff(n)
        for j in range(1, min(n, f.den.degree) + 1):
            acc -= f.den.coeff(j) * coeffs[n - j]
        coeffs.append(acc / d0)
    return coeffs
