"""Scenario parameters, derived constants, and the channel-state distribution.

The scenario is a bipolar network: transmitters form a planar Poisson point
process of the given density, each with a dedicated receiver at distance
``r0``; fading is Rayleigh (unit-mean exponential power gains) and path loss
over distance d is d**(-alpha) with alpha > 2.  The channel state S at the
typical receiver is the received SINR normalised by transmit power,

    S = h0 * r0**(-alpha) / (sum_k h_k * |x_k|**(-alpha) * P + noise),

so the SINR at transmit power P is S*P.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError, ParameterError
from .specfun import z_delta

__all__ = [
    "Regime",
    "NetworkParams",
    "DerivedConstants",
    "derive",
    "infer_regime",
    "cdf_s",
    "conditional_ccdf",
]


class Regime(enum.Enum):
    """Which analytic simplification the evaluators should apply.

    GENERAL applies no simplification and forces the numerical-integration
    code paths; NOISE_LIMITED drops interference (density treated as 0);
    INTERFERENCE_LIMITED drops thermal noise (noise treated as 0).
    """

    GENERAL = "general"
    NOISE_LIMITED = "noise-limited"
    INTERFERENCE_LIMITED = "interference-limited"


@dataclass(frozen=True)
class NetworkParams:
    """Scenario parameters, all in linear units.

    density: transmitter density (per unit area), >= 0
    r0:      transmitter-receiver link distance, > 0
    alpha:   path-loss exponent, > 2
    power:   transmit power, > 0
    noise:   receiver noise power, >= 0
    """

    density: float
    r0: float
    alpha: float
    power: float
    noise: float = 0.0

    def __post_init__(self) -> None:
        if not self.density >= 0.0:
            raise ParameterError(f"density must be >= 0, got {self.density!r}")
        if not self.r0 > 0.0:
            raise ParameterError(f"r0 must be > 0, got {self.r0!r}")
        if not self.alpha > 2.0:
            raise ParameterError(f"alpha must be > 2, got {self.alpha!r}")
        if not self.power > 0.0:
            raise ParameterError(f"power must be > 0, got {self.power!r}")
        if not self.noise >= 0.0:
            raise ParameterError(f"noise must be >= 0, got {self.noise!r}")


@dataclass(frozen=True)
class DerivedConstants:
    """Constants of the channel-state distribution.

    With delta = 2/alpha and Z = z_delta(delta):

    g_lambda       = pi * density * r0**2 * power**delta * Z
    g_noise        = r0**alpha * noise
    g_lambda_tilde = pi * density * r0**2 * Z          (power-free variant)
    sigma_tilde    = noise / power                     (power-normalised noise)

    and P[S <= s] = 1 - exp(-(g_lambda * s**delta + g_noise * s)).
    """

    delta: float
    z_delta: float
    g_lambda: float
    g_noise: float
    g_lambda_tilde: float
    sigma_tilde: float


def infer_regime(params: NetworkParams) -> Regime:
    """Natural regime of a scenario: which channel impairments are present."""
    if params.density > 0.0 and params.noise > 0.0:
        return Regime.GENERAL
    if params.density > 0.0:
        return Regime.INTERFERENCE_LIMITED
    if params.noise > 0.0:
        return Regime.NOISE_LIMITED
    raise ParameterError("density and noise cannot both be zero")


def derive(params: NetworkParams) -> DerivedConstants:
    """Compute the distribution constants for a scenario."""
    delta = 2.0 / params.alpha
    z = z_delta(delta)
    area = math.pi * params.density * params.r0 ** 2
    return DerivedConstants(
        delta=delta,
        z_delta=z,
        g_lambda=area * params.power ** delta * z,
        g_noise=params.r0 ** params.alpha * params.noise,
        g_lambda_tilde=area * z,
        sigma_tilde=params.noise / params.power,
    )


def cdf_s(params: NetworkParams, s):
    """CDF of the channel state, P[S <= s] = 1 - exp(-(G_l*s^delta + G_N*s)).

    Accepts a scalar or an array of nonnegative states; returns a float for
    scalar input.
    """
    cons = derive(params)
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError("channel state s must be >= 0")
    out = -np.expm1(-(cons.g_lambda * arr ** cons.delta + cons.g_noise * arr))
    if arr.ndim == 0:
        return float(out)
    return out


def conditional_ccdf(params: NetworkParams, s: float, distances: Iterable[float]) -> float:
    """P[S > s] conditioned on fixed interferer distances.

    Averaging over Rayleigh fading only,

        P[S > s | distances] = exp(-s * r0**alpha * noise)
                               * prod_k 1 / (1 + s * P * r0**alpha * d_k**(-alpha)),

    with a single noise factor multiplying the whole product.
    """
    s = float(s)
    if s < 0.0:
        raise DomainError("channel state s must be >= 0")
    d = np.asarray(list(distances), dtype=float)
    if np.any(d <= 0.0):
        raise DomainError("interferer distances must be > 0")
    ra = params.r0 ** params.alpha
    noise_factor = math.exp(-s * ra * params.noise)
    if d.size == 0:
        return noise_factor
    gains = s * params.power * ra * d ** (-params.alpha)
    return noise_factor * float(np.exp(-np.sum(np.log1p(gains))))
