"""Rate outage and transmission capacity of the layered strategy.

For a zero-noise scenario, the probability that the decoded rate falls short
of a target xi has a closed form through the principal Lambert-W branch:
with d = 2/alpha, T0 = G_l * s0**d and

    H = (d/(d+1)) * T0 * exp((d/(d+1)) * (xi - T0)),

the rate outage is

    q = 1 - exp(((d+1)/d) * W0(-H))          for xi <= R(s1),
    q = 1                                     for xi beyond the ceiling rate,

because R(S) < xi is the event S < s*, where s* inverts R and
G_l * s***d = -((d+1)/d) * W0(-H).  H stays below 1/e whenever xi is within
the ceiling, so W0 is evaluated on its real domain with preimage in (-1, 0).

The maximum density lambda_eps keeps q at the tolerance eps; transmission
capacity is lambda_eps times the mean rate at that density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .broadcast import layer_rate, mean_rate, solve_profile
from .errors import BranchPointError, InfeasibleError, ParameterError, RegimeError
from .network import NetworkParams, Regime
from .specfun import lambert_w0

__all__ = [
    "CapacityQuery",
    "CapacityResult",
    "rate_outage",
    "max_density",
    "transmission_capacity",
]

_BRENTQ_RTOL = 4.0 * np.finfo(float).eps
_LAMBDA_FLOOR = 1e-8


@dataclass(frozen=True)
class CapacityQuery:
    """Capacity question: largest density keeping P[R(S) < xi] <= epsilon.

    Zero-noise scenario; density is the unknown, so only the link distance,
    path-loss exponent and power are fixed here.
    """

    xi: float
    epsilon: float
    r0: float
    alpha: float
    power: float

    def __post_init__(self) -> None:
        if not self.xi > 0.0:
            raise ParameterError(f"xi must be > 0, got {self.xi!r}")
        if not 0.0 < self.epsilon < 1.0:
            raise ParameterError(f"epsilon must be in (0, 1), got {self.epsilon!r}")
        # delegate r0/alpha/power validation
        self.params_at(1.0)

    def params_at(self, density: float) -> NetworkParams:
        return NetworkParams(
            density=density, r0=self.r0, alpha=self.alpha, power=self.power, noise=0.0
        )


@dataclass(frozen=True)
class CapacityResult:
    """Solved capacity point.

    ``validity`` is True when the outage constraint was met exactly
    (|q(lambda_eps) - eps| <= 1e-8 with the Lambert-W branch condition holding
    throughout the search); False when the search converged onto the jump of
    q to 1, where only q <= eps on the left of lambda_eps is guaranteed.
    """

    lambda_eps: float
    c: float
    validity: bool


def rate_outage(params: NetworkParams, xi: float) -> float:
    """P[R(S) < xi] for the layered strategy in a zero-noise scenario."""
    xi = float(xi)
    if not xi > 0.0:
        raise ParameterError(f"xi must be > 0, got {xi!r}")
    if params.noise != 0.0:
        raise RegimeError("rate_outage requires a zero-noise (interference-limited) scenario")
    profile = solve_profile(params, Regime.INTERFERENCE_LIMITED)
    ceiling = layer_rate(profile, profile.s1)
    if xi >= ceiling:
        return 1.0
    d = profile.delta
    t0 = profile.g_lambda * profile.s0 ** d
    ratio = d / (d + 1.0)
    h = ratio * t0 * math.exp(ratio * (xi - t0))
    if h >= math.exp(-1.0):
        raise BranchPointError(
            f"Lambert-W argument -{h} below the branch point; xi={xi} inconsistent with ceiling"
        )
    w = lambert_w0(-h)
    return -math.expm1(w / ratio)


def _solve_max_density(query: CapacityQuery) -> tuple[float, bool]:
    def q(density: float) -> float:
        return rate_outage(query.params_at(density), query.xi)

    eps = query.epsilon
    lo = _LAMBDA_FLOOR
    q_lo = q(lo)
    if q_lo > eps:
        raise InfeasibleError(
            f"outage constraint infeasible: q({lo}) = {q_lo} already exceeds eps = {eps}"
        )
    hi = max(1.0, 2.0 * lo)
    for _ in range(128):
        if q(hi) > eps:
            break
        hi *= 2.0
    else:
        raise InfeasibleError("rate outage never exceeds eps within the density search range")
    root = brentq(lambda lam: q(lam) - eps, lo, hi, xtol=1e-300, rtol=_BRENTQ_RTOL, maxiter=300)
    residual = abs(q(root) - eps)
    if residual <= 1e-8:
        return root, True
    # q jumped over eps: keep the last density on the feasible side
    feasible = root
    if q(feasible) > eps:
        feasible = math.nextafter(feasible, 0.0)
        for _ in range(64):
            if q(feasible) <= eps:
                break
            feasible = feasible * (1.0 - 1e-12)
    return feasible, False


def max_density(query: CapacityQuery) -> float:
    """Largest transmitter density with rate outage at most epsilon."""
    lam, _ = _solve_max_density(query)
    return lam


def transmission_capacity(query: CapacityQuery) -> CapacityResult:
    """Density-rate product at the outage-constrained density,
    c = lambda_eps * E[R(S)] evaluated at lambda_eps."""
    lam, ok = _solve_max_density(query)
    stats = mean_rate(query.params_at(lam), Regime.INTERFERENCE_LIMITED)
    return CapacityResult(lambda_eps=lam, c=lam * stats.mean, validity=ok)
