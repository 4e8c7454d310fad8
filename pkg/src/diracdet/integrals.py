"""Radial and parameter integrals that multiply the angular/trace factors.

``n_integral``       closed form of the u-integral with the +i0 prescription
``n_integral_numeric``  contour-rotated quadrature of the same integral
``i_series``         exact eta-expansion of the mass-dependent s-integrals
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np
from scipy import integrate

from .scalars import GaussianRational

__all__ = [
    "IntegralValue",
    "EtaSeries",
    "UnsupportedParityError",
    "IntegralDomainError",
    "ConvergenceError",
    "beta_exact",
    "n_integral",
    "n_integral_numeric",
    "i_series",
    "i_exact_value",
    "i_numeric",
    "whole_line_integral",
    "log_coeff_f_independence",
    "PROFILES",
]


class UnsupportedParityError(ValueError):
    """n - k is odd; such integrals never survive the angular average."""


class IntegralDomainError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegralValue:
    value: Fraction
    n: int
    k: int

    def __float__(self):
        return float(self.value)


def beta_exact(x: int, y: int) -> Fraction:
    """B(x, y) for positive integers: (x-1)! (y-1)! / (x+y-1)!."""
    if x < 1 or y < 1:
        raise IntegralDomainError(f"B({x}, {y}) needs positive integer arguments")
    return Fraction(factorial(x - 1) * factorial(y - 1), factorial(x + y - 1))


def n_integral(n: int, k: int) -> IntegralValue:
    """Exact value of  int_0^inf u^(n+k-1) (1 - [u(1+i0)]^2)^(-n-1) du.

    Equal to  (1/2) (-1)^((n+k)/2) B((n+k)/2, (n-k)/2 + 1)  for even n-k.
    """
    if n < 1 or not 0 <= k <= n + 1:
        raise IntegralDomainError(f"need n >= 1 and 0 <= k <= n+1, got ({n}, {k})")
    if (n - k) % 2:
        raise UnsupportedParityError(f"n - k = {n - k} is odd")
    x, y = (n + k) // 2, (n - k) // 2 + 1
    if x < 1 or y < 1:
        raise IntegralDomainError(f"integral diverges for (n, k) = ({n}, {k})")
    sign = -1 if x % 2 else 1
    return IntegralValue(Fraction(sign, 2) * beta_exact(x, y), n, k)


def _rotated_quad(n: int, k: int, delta: float, phi: float) -> float:
    # The pole sits at u = 1/(1+i delta), just below the real axis, so the
    # ray u = t e^{i phi} with 0 < phi < pi/2 encloses no singularity.
    rot = np.exp(1j * phi)
    c = (1 + 1j * delta) ** 2

    def f(t, part):
        u = t * rot
        v = rot * u ** (n + k - 1) * (1 - c * u * u) ** (-n - 1)
        return v.real if part == 0 else v.imag

    re, _ = integrate.quad(f, 0, np.inf, args=(0,), epsabs=1e-13, epsrel=1e-12, limit=400)
    return re


def n_integral_numeric(n: int, k: int, delta: float = 1e-3, levels: int = 4, tol: float = 1e-7) -> float:
    """Quadrature oracle for :func:`n_integral`.

    Evaluates the regulated integral on a ladder delta, delta/2, ... and
    Richardson-extrapolates to delta = 0.  Raises ConvergenceError if the two
    highest extrapolants disagree by more than ``tol``.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if n < 1 or not 0 <= k <= n + 1 or n + k < 1 or k > n + 1:
        raise IntegralDomainError(f"bad (n, k) = ({n}, {k})")
    deltas = [delta / 2**j for j in range(levels)]
    table = [[_rotated_quad(n, k, d, math.pi / 4) for d in deltas]]
    # the regulated value is analytic in delta: eliminate delta^1, delta^2, ...
    for order in range(1, levels):
        prev = table[-1]
        f = 2**order
        table.append([(f * prev[j + 1] - prev[j]) / (f - 1) for j in range(len(prev) - 1)])
    best = table[-1][0]
    if levels > 1 and abs(best - table[-2][-1]) > tol:
        raise ConvergenceError(f"extrapolation unstable for ({n}, {k}): {table[-2][-1]!r} vs {best!r}")
    return best


# eta series ------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaSeries:
    """Power series in eta; ``coefficients[j]`` multiplies eta**j."""

    coefficients: tuple
    n: int = 0
    k: int = 0

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, power: int) -> Fraction:
        return self.coefficients[power] if power < len(self.coefficients) else Fraction(0)

    def odd_coefficients(self) -> tuple:
        return tuple(self.coefficients[1::2])

    def is_even(self) -> bool:
        return all(c == 0 for c in self.odd_coefficients())

    def evaluate(self, eta: float) -> float:
        return sum(float(c) * eta**j for j, c in enumerate(self.coefficients))

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coefficients):
            if c == 0:
                continue
            parts.append(str(c) if j == 0 else f"({c})*eta^{j}")
        return (" + ".join(parts) or "0") + f" + O(eta^{self.order + 1})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "coefficients": {str(j): str(c) for j, c in enumerate(self.coefficients)},
        }


def _partial_fractions(p: int, q: int):
    """Coefficients of 1/((s+a)^p (s+b)^q) with a - b = 2.

    Returns (alpha, beta) with alpha[i] multiplying (s+a)^-i, beta[j] (s+b)^-j.
    """
    alpha = {}
    beta = {}
    for r in range(p):
        # (s+b)^-q expanded about s = -a
        alpha[p - r] = Fraction((-1) ** q * _rising(q, r), factorial(r)) / 2 ** (q + r)
    for r in range(q):
        beta[q - r] = Fraction((-1) ** r * _rising(p, r), factorial(r)) / 2 ** (p + r)
    return alpha, beta


def _rising(x: int, r: int) -> int:
    out = 1
    for j in range(r):
        out *= x + j
    return out


def _inverse_power_series(m: int, x_unit: GaussianRational, order: int) -> list:
    """Coefficients of (1 + x)^(-m) with x = x_unit * eta, up to eta**order."""
    out = []
    for t in range(order + 1):
        c = Fraction((-1) ** t * _rising(m, t), factorial(t))
        out.append(x_unit**t * c)
    return out


def i_series(n: int, k: int, order: int = 2) -> EtaSeries:
    """Expansion of  Re int_0^inf ds (s+1+i eta)^-(n+1-k) (s-1+i eta)^-k  about eta = 0+.

    Uses partial fractions with rational coefficients; the logarithmic pieces
    are purely imaginary and drop out of the real part.
    """
    if n < 1 or n % 2:
        raise ValueError("only even n >= 2 contribute (odd n vanish identically)")
    if not 0 <= k <= n + 1:
        raise ValueError(f"k must lie in 0..{n + 1}")
    if order < 0:
        raise ValueError("order must be non-negative")
    p, q = n + 1 - k, k
    alpha, beta = _partial_fractions(p, q)
    i_unit = GaussianRational(0, 1)
    total = [GaussianRational(0)] * (order + 1)
    # int_0^inf (s+c)^-i ds = c^(1-i)/(i-1) for i >= 2
    for i, a_i in alpha.items():
        if i < 2:
            continue
        series = _inverse_power_series(i - 1, i_unit, order)  # a^(1-i), a = 1 + i eta
        for j, c in enumerate(series):
            total[j] = total[j] + c * (a_i / (i - 1))
    for j_, b_j in beta.items():
        if j_ < 2:
            continue
        # b^(1-j) = (-1)^(j-1) (1 - i eta)^-(j-1)
        series = _inverse_power_series(j_ - 1, -i_unit, order)
        sgn = (-1) ** (j_ - 1)
        for j, c in enumerate(series):
            total[j] = total[j] + c * (b_j * sgn / (j_ - 1))
    return EtaSeries(tuple(c.re for c in total), n, k)


def i_exact_value(n: int, k: int, eta: float) -> complex:
    """Closed-form value (complex, before taking the real part) at finite eta."""
    p, q = n + 1 - k, k
    alpha, beta = _partial_fractions(p, q)
    a, b = 1 + 1j * eta, -1 + 1j * eta
    val = 0j
    for i, c in alpha.items():
        val += float(c) * (a ** (1 - i) / (i - 1) if i >= 2 else -np.log(a))
    for j, c in beta.items():
        val += float(c) * (b ** (1 - j) / (j - 1) if j >= 2 else -np.log(b))
    return val


def i_numeric(n: int, k: int, eta: float) -> float:
    """Direct quadrature of the real part, as an oracle for :func:`i_series`."""
    a, b = 1 + 1j * eta, -1 + 1j * eta
    p, q = n + 1 - k, k

    def f(s):
        return ((s + a) ** (-p) * (s + b) ** (-q)).real

    pts = [0.5, 1.0, 1.5]
    with warnings.catch_warnings():
        # sharp peak near s = 1 for small eta; accuracy is checked by callers
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        v1, _ = integrate.quad(f, 0, 2, points=pts, limit=500, epsabs=1e-13, epsrel=1e-12)
        v2, _ = integrate.quad(f, 2, np.inf, limit=500, epsabs=1e-13, epsrel=1e-12)
    return v1 + v2


def whole_line_integral(n: int, k: int, xi: float = 1.0, eta: float = 0.5) -> complex:
    """int over the real u-axis of u^(n-1) (1+u[xi+i eta])^-(n+1-k) (1+u[-xi+i eta])^-k.

    Both poles lie in the same half-plane, so the result vanishes.
    """
    a, b = xi + 1j * eta, -xi + 1j * eta

    def f(u, part):
        v = u ** (n - 1) * (1 + u * a) ** (-(n + 1 - k)) * (1 + u * b) ** (-k)
        return v.real if part == 0 else v.imag

    out = 0j
    poles = sorted({-1 / xi, 1 / xi})
    edges = [-np.inf, poles[0] - 1, poles[0], 0.0, poles[1], poles[1] + 1, np.inf]
    for lo, hi in zip(edges[:-1], edges[1:]):
        for part, w in ((0, 1), (1, 1j)):
            v, _ = integrate.quad(f, lo, hi, args=(part,), limit=500, epsabs=1e-13, epsrel=1e-12)
            out += w * v
    return out


# regularization independence --------------------------------------------------------

PROFILES = {
    "step": lambda t: np.where(t < 1.0, 1.0, 0.0),
    "gaussian": lambda t: np.exp(-t * t),
    "rescaled": lambda t: np.exp(-((t / 2.0) ** 2)),
}


def _radial_log_integral(profile: str, cutoff: float, mass: float) -> float:
    """int_m^inf dp/p f(p/cutoff), integrated in log p."""
    lo = math.log(mass / cutoff)
    if profile == "step":
        return max(0.0, -lo)
    f = PROFILES[profile]
    g = lambda s: float(f(math.exp(s)))  # noqa: E731
    v1, _ = integrate.quad(g, lo, 0.0, limit=400, epsabs=1e-13, epsrel=1e-13)
    v2, _ = integrate.quad(g, 0.0, 10.0, limit=400, epsabs=1e-13, epsrel=1e-13)
    return v1 + v2


def log_coeff_f_independence(profiles=("step", "gaussian", "rescaled"), mass: float = 1.0, ladder=None) -> dict:
    """Fit value(L) = c_log * log(L/m) + c0 over a geometric ladder of cutoffs.

    Returns per-profile slope, intercept and max residual of the fit.
    """
    if ladder is None:
        ladder = [10.0**e for e in np.arange(3.0, 8.01, 0.5)]
    x = np.log(np.asarray(ladder) / mass)
    out = {}
    for name in profiles:
        if name not in PROFILES:
            raise KeyError(f"unknown profile {name!r}")
        y = np.array([_radial_log_integral(name, L, mass) for L in ladder])
        slope, intercept = np.polyfit(x, y, 1)
        resid = float(np.max(np.abs(y - (slope * x + intercept))))
        out[name] = {"slope": float(slope), "intercept": float(intercept), "max_residual": resid}
    return out
