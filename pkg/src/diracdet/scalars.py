"""Exact complex-rational scalars, optionally carrying an integer power of pi."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["GaussianRational", "PiCoefficient", "I", "ONE", "ZERO", "as_gaussian"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class GaussianRational:
    """A number ``re + i*im`` with rational parts. Equality is exact."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    # construction helpers -------------------------------------------------
    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact; pass re/im rationals")
        return cls(x)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by exact zero")
        return GaussianRational((self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return ONE / (self ** (-n))
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # predicates -------------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    def is_real(self) -> bool:
        return self.im == 0

    def is_imaginary(self) -> bool:
        return self.re == 0

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # formatting -------------------------------------------------------------
    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = "i" if abs(self.im) == 1 else f"{abs(self.im)}i"
        if self.re == 0:
            return ("-" if self.im < 0 else "") + im
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}"

    def latex(self) -> str:
        def q(x: Fraction) -> str:
            if x.denominator == 1:
                return str(x.numerator)
            sign = "-" if x < 0 else ""
            return rf"{sign}\tfrac{{{abs(x.numerator)}}}{{{x.denominator}}}"

        if self.im == 0:
            return q(self.re)
        mag = abs(self.im)
        im = r"\mathrm{i}" if mag == 1 else q(mag) + r"\,\mathrm{i}"
        if self.re == 0:
            return ("-" if self.im < 0 else "") + im
        return f"{q(self.re)}{'-' if self.im < 0 else '+'}{im}"

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, data: dict) -> "GaussianRational":
        return cls(Fraction(data["re"]), Fraction(data["im"]))


def as_gaussian(x) -> GaussianRational:
    return GaussianRational.coerce(x)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


class PiCoefficient:
    """``value * pi**pi_power`` with ``value`` exact."""

    __slots__ = ("value", "pi_power")

    def __init__(self, value, pi_power: int = 0):
        self.value = GaussianRational.coerce(value)
        self.pi_power = int(pi_power) if self.value else 0

    def __mul__(self, other):
        if isinstance(other, PiCoefficient):
            return PiCoefficient(self.value * other.value, self.pi_power + other.pi_power)
        return PiCoefficient(self.value * other, self.pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PiCoefficient):
            return PiCoefficient(self.value / other.value, self.pi_power - other.pi_power)
        return PiCoefficient(self.value / other, self.pi_power)

    def __neg__(self):
        return PiCoefficient(-self.value, self.pi_power)

    def __eq__(self, other):
        if isinstance(other, PiCoefficient):
            return self.value == other.value and self.pi_power == other.pi_power
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.pi_power))

    def __float__(self):
        import math

        if not self.value.is_real():
            raise TypeError("complex coefficient has no float value")
        return float(self.value.re) * math.pi**self.pi_power

    def __repr__(self):
        return f"PiCoefficient({self.value!s}, pi_power={self.pi_power})"

    def __str__(self):
        if self.pi_power == 0:
            return str(self.value)
        v = self.value
        if v.is_real() and v.re.numerator in (1, -1) and self.pi_power < 0:
            sign = "-" if v.re < 0 else ""
            p = -self.pi_power
            pis = "pi" if p == 1 else f"pi^{p}"
            den = "" if v.re.denominator == 1 else f"{v.re.denominator} "
            return f"{sign}1/({den}{pis})"
        pis = "pi" if self.pi_power == 1 else f"pi^{self.pi_power}"
        return f"({v})*{pis}"

    def latex(self) -> str:
        if self.pi_power == 0:
            return self.value.latex()
        v = self.value
        if v.is_real() and self.pi_power < 0:
            p = -self.pi_power
            pis = r"\pi" if p == 1 else rf"\pi^{{{p}}}"
            sign = "-" if v.re < 0 else ""
            num, den = abs(v.re.numerator), v.re.denominator
            dens = "" if den == 1 else str(den)
            return rf"{sign}\frac{{{num}}}{{{dens}{pis}}}"
        pis = r"\pi" if self.pi_power == 1 else rf"\pi^{{{self.pi_power}}}"
        return rf"\left({v.latex()}\right){pis}"

    def to_json(self) -> dict:
        return {"value": self.value.to_json(), "pi_power": self.pi_power, "text": str(self)}
