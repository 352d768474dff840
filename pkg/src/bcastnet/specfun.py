"""Scalar special-function kernel used by the analytic rate formulas.

Conventions:

* ``exp_int`` is the decaying exponential integral
  E1(x) = int_x^inf exp(-t)/t dt, x > 0.
* ``lambert_w0`` is the principal real branch of w*exp(w) = x, defined for
  x >= -1/e and satisfying w >= -1.
* ``gamma_upper_2`` is the upper incomplete gamma function at shape 2,
  Gamma(2, x) = (1 + x) * exp(-x).
* ``z_delta`` is the interference shape constant
  Z(d) = int_0^inf du / (1 + u**(1/d)) = pi*d / sin(pi*d), 0 < d < 1.

All functions are pure scalar maps on Python floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ParameterError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "exp_int",
    "lambert_w0",
    "gamma_upper_2",
    "z_delta",
]

_EULER_GAMMA = 0.5772156649015328606
_NEG_INV_E = -math.exp(-1.0)


@dataclass(frozen=True)
class Tolerance:
    """Iteration control shared by the iterative kernels and root solvers."""

    abs: float = 1e-12
    rel: float = 1e-10
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not (self.abs > 0.0 and self.rel > 0.0):
            raise ParameterError("tolerances must be positive")
        if self.max_iter < 1:
            raise ParameterError("max_iter must be at least 1")


DEFAULT_TOL = Tolerance()


def exp_int(x: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Exponential integral E1(x) for x > 0.

    Power series about 0 for x <= 1, modified-Lentz evaluation of the
    continued fraction exp(-x) / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    for x > 1.  Underflows to 0.0 for x beyond ~745.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"exp_int requires x > 0, got {x!r}")
    if x <= 1.0:
        total = -_EULER_GAMMA - math.log(x)
        term = 1.0  # holds (-x)**k / k!
        for k in range(1, tol.max_iter + 1):
            term *= -x / k
            contrib = -term / k
            total += contrib
            if abs(contrib) < 1e-17 * (abs(total) + 1e-300):
                break
        return total
    # continued fraction, numerators -k^2, denominators x + (2k+1)
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for k in range(1, tol.max_iter + 1):
        a = -float(k * k)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delt = c * d
        h *= delt
        if abs(delt - 1.0) < 1e-15:
            break
    return h * math.exp(-x)


def lambert_w0(x: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Principal branch W0 of the Lambert W function, for x >= -1/e.

    Halley iteration on w*exp(w) - x = 0, seeded by the branch-point series
    near -1/e and by log asymptotics for large x.  The returned w satisfies
    w >= -1 and a round-trip residual at machine-precision level.
    """
    x = float(x)
    if x < _NEG_INV_E:
        raise DomainError(f"lambert_w0 requires x >= -1/e, got {x!r}")
    if x == 0.0:
        return 0.0
    q = 2.0 * (math.e * x + 1.0)
    if q < 0.0:
        q = 0.0  # x == -1/e up to rounding
    if q < 1e-8:
        p = math.sqrt(q)
        return -1.0 + p * (1.0 - p / 3.0 + p * p * (11.0 / 72.0))
    if x < -0.25:
        p = math.sqrt(q)
        w = -1.0 + p * (1.0 - p / 3.0 + p * p * (11.0 / 72.0))
    elif x > math.e:
        lx = math.log(x)
        w = lx - math.log(lx)
    else:
        w = math.log1p(x)
    for _ in range(tol.max_iter):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        dw = f / denom
        w -= dw
        if w < -1.0:
            w = -1.0 + 1e-12  # stay on the principal branch
        if abs(dw) <= 4e-16 * (1.0 + abs(w)):
            break
    return w


def gamma_upper_2(x: float) -> float:
    """Upper incomplete gamma Gamma(2, x) = (1 + x) * exp(-x) for x >= 0."""
    x = float(x)
    if x < 0.0:
        raise DomainError(f"gamma_upper_2 requires x >= 0, got {x!r}")
    return (1.0 + x) * math.exp(-x)


def z_delta(delta: float) -> float:
    """Interference shape constant pi*delta / sin(pi*delta) for 0 < delta < 1."""
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise DomainError(f"z_delta requires 0 < delta < 1, got {delta!r}")
    return math.pi * delta / math.sin(math.pi * delta)
