"""Single-threshold (outage) strategy: fixed-rate coding at SINR threshold beta.

The transmitter encodes at the single rate ln(1 + beta); a receiver decodes
everything when its SINR S*P clears beta and nothing otherwise, so the rate
is a scaled Bernoulli variable.  Success probability over the network is

    p(beta) = exp(-(G_lt * beta**delta + G_N * beta / P)),

with G_lt the power-free distribution constant (success depends on the SINR
threshold alone, not on transmit power, when noise is zero).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .broadcast import Origin, RateStats, solve_profile
from .errors import NoBracketError, ParameterError, RegimeError
from .network import NetworkParams, derive, infer_regime

__all__ = [
    "OutageMode",
    "OutageConfig",
    "success_probability",
    "mean_rate_os",
    "optimal_beta",
    "rate_stats_os",
    "matched_beta",
    "resolve_beta",
]

_BRENTQ_RTOL = 4.0 * np.finfo(float).eps


class OutageMode(enum.Enum):
    FIXED = "fixed"
    OPTIMAL = "optimal"
    MATCHED = "matched"


@dataclass(frozen=True)
class OutageConfig:
    """Threshold selection policy: an explicit beta, the rate-optimal beta,
    or the beta matched to the layering support (beta = s0 * P)."""

    mode: OutageMode
    beta: Optional[float] = None

    def __post_init__(self) -> None:
        if self.mode is OutageMode.FIXED:
            if self.beta is None or not self.beta > 0.0:
                raise ParameterError("fixed outage mode requires beta > 0")
        elif self.beta is not None:
            raise ParameterError(f"{self.mode.value} outage mode does not take beta")


def success_probability(params: NetworkParams, beta: float) -> float:
    """Probability the SINR clears the threshold, P[S*P >= beta]."""
    beta = float(beta)
    if not beta > 0.0:
        raise ParameterError(f"beta must be > 0, got {beta!r}")
    cons = derive(params)
    return math.exp(
        -(cons.g_lambda_tilde * beta ** cons.delta + cons.g_noise * beta / params.power)
    )


def mean_rate_os(params: NetworkParams, beta: float) -> float:
    """Mean rate of the single-threshold strategy, p(beta) * ln(1 + beta)."""
    return success_probability(params, beta) * math.log1p(beta)


def optimal_beta(params: NetworkParams) -> float:
    """Threshold maximising the mean rate, interference-limited scenarios only.

    Solves beta**(delta-1) * (1 + beta) * ln(1 + beta) = 1 / (delta * G_lt),
    the stationarity condition of p(beta)*ln(1+beta) at zero noise.
    """
    if params.noise != 0.0:
        raise RegimeError("optimal_beta requires a zero-noise (interference-limited) scenario")
    if params.density <= 0.0:
        raise RegimeError("optimal_beta requires density > 0")
    cons = derive(params)
    target = 1.0 / (cons.delta * cons.g_lambda_tilde)

    def f(beta: float) -> float:
        return beta ** (cons.delta - 1.0) * (1.0 + beta) * math.log1p(beta) - target

    lo = 1e-6
    for _ in range(256):
        if f(lo) < 0.0:
            break
        lo *= 0.25
        if lo < 1e-280:
            raise NoBracketError("could not bracket optimal beta below")
    else:
        raise NoBracketError("could not bracket optimal beta below")
    hi = max(1.0, 2.0 * lo)
    for _ in range(256):
        if f(hi) > 0.0:
            break
        hi *= 2.0
        if hi > 1e12:
            raise NoBracketError("could not bracket optimal beta above")
    else:
        raise NoBracketError("could not bracket optimal beta above")
    return brentq(f, lo, hi, xtol=1e-300, rtol=_BRENTQ_RTOL, maxiter=200)


def rate_stats_os(params: NetworkParams, beta: float) -> RateStats:
    """Moments of the scaled-Bernoulli rate: mean p*l, second moment p*l^2,
    variance p*(1-p)*l^2 with l = ln(1 + beta)."""
    p = success_probability(params, beta)
    l = math.log1p(beta)
    return RateStats(
        mean=p * l,
        second_moment=p * l * l,
        variance=p * (1.0 - p) * l * l,
        origin=Origin.ANALYTIC,
    )


def matched_beta(params: NetworkParams) -> float:
    """Threshold matched to the layering support, beta = s0 * P.

    At this threshold the outage strategy fails exactly when the layered
    strategy decodes nothing; the identity holds in every regime.
    """
    profile = solve_profile(params, infer_regime(params))
    return profile.s0 * params.power


def resolve_beta(params: NetworkParams, config: OutageConfig) -> float:
    """Concrete threshold for a selection policy."""
    if config.mode is OutageMode.FIXED:
        return float(config.beta)
    if config.mode is OutageMode.OPTIMAL:
        return optimal_beta(params)
    return matched_beta(params)
