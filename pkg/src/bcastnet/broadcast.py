"""Continuum power layering: the optimal profile and its rate statistics.

The transmitter splits its power over a continuum of layers indexed by the
channel state s at which a layer becomes decodable.  A layering is described
by the residual power I(s) (power left in layers above s) with layer density
rho(s) = -I'(s).  A receiver at state S decodes all layers below S and gets

    R(S) = int_{s0}^{min(S, s1)} u * rho(u) / (1 + u * I(u)) du,   S >= s0,

zero below s0.  The mean rate over the network is the functional

    J(I) = int s * rho(s) / (1 + s * I(s)) * exp(-(G_l*s^d + G_N*s)) ds,

with d = 2/alpha, G_l and G_N the constants of the state distribution.  Its
stationary profile is

    I(s) = 1 / (G_N*s**2 + d*G_l*s**(d+1)) - 1/s     on [s0, s1],

with s1 the root of G_N*s + d*G_l*s**d = 1 (where I hits 0) and s0 the state
where I(s0) equals the power budget P.

Closed forms used below (E1 is the decaying exponential integral):

* noise-limited (G_l = 0), with L_i = G_N * s_i:
      mean = 2*(E1(L0) - E1(L1)) - (exp(-L0) - exp(-L1))
* interference-limited (G_N = 0), with T_i = G_l * s_i**d  (T1 = 1/d):
      R(s)  = (d+1)*ln(s/s0) - G_l*(s**d - s0**d)
      mean  = (1 + 1/d)*(E1(T0) - E1(T1)) - (exp(-T0) - exp(-T1))
      E[R^2] = 2*(Gamma(2,T0) - Gamma(2,T1)) + 2*r*ln(T1/T0)*exp(-T1)
               + 2*r*(T0-1)*(E1(T0) - E1(T1)) - 2*(r+T0)*(exp(-T0)-exp(-T1))
               + 2*r**2 * int_0^{ln(T1/T0)} u * exp(-T0*e^u) du,   r = (d+1)/d.

The general regime always evaluates J by adaptive quadrature, so it doubles
as an independent cross-check of the closed forms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import (
    InadmissiblePerturbationError,
    NoBracketError,
    RegimeError,
)
from .network import NetworkParams, Regime, derive
from .specfun import exp_int, gamma_upper_2

__all__ = [
    "Origin",
    "RateStats",
    "PowerProfile",
    "solve_profile",
    "layer_rate",
    "mean_rate",
    "second_moment",
    "variance",
    "complete_outage",
    "rate_functional",
    "stationarity_check",
    "sine_perturbation",
]

_BRENTQ_RTOL = 4.0 * np.finfo(float).eps
_WIDE_RANGE = 1e3  # switch to the s = a*exp(u) substitution beyond this ratio


class Origin(enum.Enum):
    """How a statistic was produced."""

    ANALYTIC = "analytic"
    QUADRATURE = "quadrature"
    MONTECARLO = "montecarlo"


@dataclass(frozen=True)
class RateStats:
    """Rate statistics in nats; unpopulated moments are None."""

    mean: Optional[float] = None
    second_moment: Optional[float] = None
    variance: Optional[float] = None
    origin: Origin = Origin.ANALYTIC


@dataclass(frozen=True)
class PowerProfile:
    """Solved layering profile on [s0, s1].

    ``g_lambda`` and ``g_noise`` are the regime-effective constants: the one
    a limiting regime suppresses is stored as 0.0 regardless of params.
    """

    regime: Regime
    s0: float
    s1: float
    params: NetworkParams
    delta: float
    g_lambda: float
    g_noise: float

    def residual_power(self, s: float) -> float:
        """Power remaining in layers above state s; P below s0, 0 above s1."""
        s = float(s)
        if s <= self.s0:
            return self.params.power
        if s >= self.s1:
            return 0.0
        denom = self.g_noise * s * s + self.delta * self.g_lambda * s ** (self.delta + 1.0)
        return 1.0 / denom - 1.0 / s

    def density(self, s: float) -> float:
        """Layer power density rho(s) = -dI/ds, zero outside [s0, s1]."""
        s = float(s)
        if s < self.s0 or s > self.s1:
            return 0.0
        d = self.delta
        big_d = self.g_noise * s + d * self.g_lambda * s ** d
        num = 2.0 * self.g_noise * s + d * (d + 1.0) * self.g_lambda * s ** d
        return num / (s * s * big_d * big_d) - 1.0 / (s * s)


def _effective_constants(params: NetworkParams, regime: Regime) -> tuple[float, float]:
    cons = derive(params)
    if regime is Regime.NOISE_LIMITED:
        if cons.g_noise <= 0.0:
            raise RegimeError("noise-limited regime requires noise > 0")
        return 0.0, cons.g_noise
    if regime is Regime.INTERFERENCE_LIMITED:
        if cons.g_lambda <= 0.0:
            raise RegimeError("interference-limited regime requires density > 0")
        return cons.g_lambda, 0.0
    if regime is Regime.GENERAL:
        if cons.g_lambda <= 0.0 and cons.g_noise <= 0.0:
            raise RegimeError("general regime requires density > 0 or noise > 0")
        return cons.g_lambda, cons.g_noise
    raise RegimeError(f"unknown regime {regime!r}")


def _integrate(f: Callable[[float], float], a: float, b: float, epsrel: float = 1e-10) -> float:
    """Adaptive quadrature on [a, b] with 0 < a < b.

    For wide ranges the substitution s = a*exp(u) keeps the subdivision
    efficient across decades.
    """
    if b <= a:
        return 0.0
    if b / a > _WIDE_RANGE:
        def g(u: float) -> float:
            s = a * math.exp(u)
            return f(s) * s

        val, _ = quad(g, 0.0, math.log(b / a), epsabs=1e-14, epsrel=epsrel, limit=200)
    else:
        val, _ = quad(f, a, b, epsabs=1e-14, epsrel=epsrel, limit=200)
    return val


def solve_profile(params: NetworkParams, regime: Regime) -> PowerProfile:
    """Solve the stationary layering profile for the given regime.

    Limiting regimes use their closed or semi-closed boundary states:
    noise-limited s1 = 1/G_N, s0 = (sqrt(G_N^2 + 4*G_N*P) - G_N)/(2*G_N*P);
    interference-limited s1 = (d*G_l)**(-1/d) and s0 solving
    s0**d * (P*s0 + 1) = 1/(d*G_l).  The general regime brackets and refines
    both roots numerically.
    """
    g_lam, g_noise = _effective_constants(params, regime)
    delta = 2.0 / params.alpha
    p = params.power
    if regime is Regime.NOISE_LIMITED:
        s1 = 1.0 / g_noise
        s0 = (math.sqrt(g_noise * g_noise + 4.0 * g_noise * p) - g_noise) / (2.0 * g_noise * p)
    elif regime is Regime.INTERFERENCE_LIMITED:
        s1 = (delta * g_lam) ** (-1.0 / delta)
        target = 1.0 / (delta * g_lam)

        def f(s: float) -> float:
            return s ** delta * (p * s + 1.0) - target

        s0 = brentq(f, 1e-18 * s1, s1, xtol=1e-300, rtol=_BRENTQ_RTOL, maxiter=200)
    else:
        hi = 1.0
        if g_noise > 0.0:
            hi += 1.0 / g_noise
        if g_lam > 0.0:
            hi += (delta * g_lam) ** (-1.0 / delta)

        def decoding_limit(s: float) -> float:
            return g_noise * s + delta * g_lam * s ** delta - 1.0

        s1 = brentq(decoding_limit, 1e-18 * hi, hi, xtol=1e-300, rtol=_BRENTQ_RTOL, maxiter=200)

        def residual_minus_p(s: float) -> float:
            denom = g_noise * s * s + delta * g_lam * s ** (delta + 1.0)
            return 1.0 / denom - 1.0 / s - p

        lo = 0.5 * s1
        for _ in range(512):
            if residual_minus_p(lo) > 0.0:
                break
            lo *= 0.125
            if lo < 1e-280:
                raise NoBracketError("could not bracket s0 above zero")
        else:
            raise NoBracketError("could not bracket s0")
        s0 = brentq(residual_minus_p, lo, s1, xtol=1e-300, rtol=_BRENTQ_RTOL, maxiter=200)
    if not 0.0 < s0 < s1:
        raise NoBracketError(f"degenerate layer support [{s0}, {s1}]")
    return PowerProfile(
        regime=regime,
        s0=s0,
        s1=s1,
        params=params,
        delta=delta,
        g_lambda=g_lam,
        g_noise=g_noise,
    )


def _rate_density(s: float, delta: float, g_lam: float, g_noise: float) -> float:
    # s*rho(s)/(1 + s*I(s)) simplified on the stationary profile
    big_d = g_noise * s + delta * g_lam * s ** delta
    num = 2.0 * g_noise * s + delta * (delta + 1.0) * g_lam * s ** delta
    return (num / big_d - big_d) / s


def layer_rate(profile: PowerProfile, s):
    """Decoded rate R(s) in nats for a receiver at channel state s.

    Zero below s0, saturating at R(s1) above s1.  Interference-limited
    profiles use the closed form (vectorised over array input); other regimes
    integrate the layer rate density numerically (scalar input only).
    """
    if profile.regime is Regime.INTERFERENCE_LIMITED:
        d = profile.delta
        g = profile.g_lambda
        arr = np.asarray(s, dtype=float)
        clipped = np.clip(arr, profile.s0, profile.s1)
        out = (d + 1.0) * np.log(clipped / profile.s0) - g * (clipped ** d - profile.s0 ** d)
        if arr.ndim == 0:
            return float(out)
        return out
    s = float(s)
    if s <= profile.s0:
        return 0.0
    upper = min(s, profile.s1)

    def f(u: float) -> float:
        return _rate_density(u, profile.delta, profile.g_lambda, profile.g_noise)

    return _integrate(f, profile.s0, upper)


def _survival(s: float, delta: float, g_lam: float, g_noise: float) -> float:
    return math.exp(-(g_lam * s ** delta + g_noise * s))


def mean_rate(params: NetworkParams, regime: Regime) -> RateStats:
    """Mean decoded rate E[R(S)] of the stationary profile, in nats.

    The general regime integrates the rate density against the state survival
    function; the limiting regimes evaluate their closed forms.
    """
    profile = solve_profile(params, regime)
    d = profile.delta
    if regime is Regime.GENERAL:
        g_lam, g_noise = profile.g_lambda, profile.g_noise

        def f(s: float) -> float:
            return _rate_density(s, d, g_lam, g_noise) * _survival(s, d, g_lam, g_noise)

        return RateStats(mean=_integrate(f, profile.s0, profile.s1), origin=Origin.QUADRATURE)
    if regime is Regime.NOISE_LIMITED:
        l0 = profile.g_noise * profile.s0
        l1 = profile.g_noise * profile.s1  # equals 1 by construction
        val = 2.0 * (exp_int(l0) - exp_int(l1)) - (math.exp(-l0) - math.exp(-l1))
        return RateStats(mean=val, origin=Origin.ANALYTIC)
    t0 = profile.g_lambda * profile.s0 ** d
    t1 = 1.0 / d
    val = (1.0 + 1.0 / d) * (exp_int(t0) - exp_int(t1)) - (math.exp(-t0) - math.exp(-t1))
    return RateStats(mean=val, origin=Origin.ANALYTIC)


def second_moment(params: NetworkParams, regime: Regime = Regime.INTERFERENCE_LIMITED) -> RateStats:
    """Second moment E[R(S)^2] of the decoded rate, interference-limited only.

    Closed terms in Gamma(2, .), E1 and logs, plus one residual integral
    evaluated by quadrature after the substitution t = T0 * exp(u).
    """
    if regime is not Regime.INTERFERENCE_LIMITED:
        raise RegimeError("second_moment is available in the interference-limited regime only")
    profile = solve_profile(params, regime)
    d = profile.delta
    g = profile.g_lambda
    t0 = g * profile.s0 ** d
    t1 = 1.0 / d
    r = (d + 1.0) / d
    ln_ratio = math.log(t1 / t0)

    def residual(u: float) -> float:
        return u * math.exp(-t0 * math.exp(u))

    j, _ = quad(residual, 0.0, ln_ratio, epsabs=1e-14, epsrel=1e-11, limit=200)
    val = (
        2.0 * (gamma_upper_2(t0) - gamma_upper_2(t1))
        + 2.0 * r * ln_ratio * math.exp(-t1)
        + 2.0 * r * (t0 - 1.0) * (exp_int(t0) - exp_int(t1))
        - 2.0 * (r + t0) * (math.exp(-t0) - math.exp(-t1))
        + 2.0 * r * r * j
    )
    return RateStats(second_moment=val, origin=Origin.ANALYTIC)


def variance(params: NetworkParams, regime: Regime = Regime.INTERFERENCE_LIMITED) -> RateStats:
    """Mean, second moment and variance of the decoded rate (interference-limited)."""
    if regime is not Regime.INTERFERENCE_LIMITED:
        raise RegimeError("variance is available in the interference-limited regime only")
    m = mean_rate(params, regime).mean
    sm = second_moment(params, regime).second_moment
    return RateStats(mean=m, second_moment=sm, variance=sm - m * m, origin=Origin.ANALYTIC)


def complete_outage(params: NetworkParams, regime: Regime = Regime.INTERFERENCE_LIMITED) -> float:
    """Probability that no layer is decoded, P[S < s0] = F_S(s0)."""
    profile = solve_profile(params, regime)
    return -math.expm1(
        -(profile.g_lambda * profile.s0 ** profile.delta + profile.g_noise * profile.s0)
    )


def rate_functional(
    params: NetworkParams,
    regime: Regime,
    s0: float,
    s1: float,
    residual_power: Callable[[float], float],
    density: Callable[[float], float],
) -> float:
    """Mean-rate functional J of an arbitrary layering profile on [s0, s1]."""
    g_lam, g_noise = _effective_constants(params, regime)
    d = 2.0 / params.alpha

    def f(s: float) -> float:
        return s * density(s) / (1.0 + s * residual_power(s)) * _survival(s, d, g_lam, g_noise)

    return _integrate(f, s0, s1)


def sine_perturbation(
    s0: float, s1: float, coeffs: Sequence[float]
) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """Smooth perturbation vanishing at both ends of [s0, s1].

    Returns (eta, eta') with eta(s) = sum_j c_j * sin(j*pi*(s-s0)/(s1-s0)).
    """
    span = s1 - s0
    cs = [float(c) for c in coeffs]

    def eta(s: float) -> float:
        u = (s - s0) / span
        return sum(c * math.sin((j + 1) * math.pi * u) for j, c in enumerate(cs))

    def eta_prime(s: float) -> float:
        u = (s - s0) / span
        return sum(
            c * (j + 1) * math.pi / span * math.cos((j + 1) * math.pi * u)
            for j, c in enumerate(cs)
        )

    return eta, eta_prime


def stationarity_check(
    params: NetworkParams,
    regime: Regime,
    perturbation: tuple[Callable[[float], float], Callable[[float], float]],
    step: float,
    profile=None,
) -> float:
    """Central-difference directional derivative of J at a layering profile.

    ``perturbation`` is a pair (eta, eta') vanishing at s0 and s1; the profile
    is displaced to (I + h*eta, rho - h*eta') for h = +/-step.  At the
    stationary profile the result vanishes to first order.  ``profile``
    defaults to the solved stationary profile; any object with attributes
    s0, s1, residual_power, density may be substituted.

    Raises InadmissiblePerturbationError if either displaced profile stops
    being a valid layering (rho < 0, or I outside [0, P]) on a dense grid.
    """
    if not step > 0.0:
        raise InadmissiblePerturbationError("step must be > 0")
    if profile is None:
        profile = solve_profile(params, regime)
    eta, eta_prime = perturbation
    s0, s1 = profile.s0, profile.s1
    p = params.power
    grid = np.linspace(s0, s1, 513)
    eta_v = np.array([eta(s) for s in grid])
    etap_v = np.array([eta_prime(s) for s in grid])
    i_v = np.array([profile.residual_power(s) for s in grid])
    rho_v = np.array([profile.density(s) for s in grid])
    if abs(eta_v[0]) > 1e-9 * (1.0 + p) or abs(eta_v[-1]) > 1e-9 * (1.0 + p):
        raise InadmissiblePerturbationError("perturbation must vanish at s0 and s1")
    rho_scale = max(float(np.max(np.abs(rho_v))), p / (s1 - s0))
    for sign in (step, -step):
        i_pert = i_v + sign * eta_v
        rho_pert = rho_v - sign * etap_v
        if float(np.min(rho_pert)) < -1e-9 * rho_scale:
            raise InadmissiblePerturbationError("perturbed density goes negative at this step")
        if float(np.max(i_pert)) > p * (1.0 + 1e-9) + 1e-12 or float(np.min(i_pert)) < -1e-9 * p - 1e-12:
            raise InadmissiblePerturbationError("perturbed residual power leaves [0, P]")

    def shifted(h: float) -> float:
        return rate_functional(
            params,
            regime,
            s0,
            s1,
            lambda s: profile.residual_power(s) + h * eta(s),
            lambda s: profile.density(s) - h * eta_prime(s),
        )

    return (shifted(step) - shifted(-step)) / (2.0 * step)
