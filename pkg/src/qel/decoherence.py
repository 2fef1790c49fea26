"""Closed-form position decoherence rates and coherence-decay predictions.

Each environmental channel (residual-gas collisions, blackbody scattering,
absorption, emission) suppresses spatial superpositions at a rate that grows
quadratically with the separation ``dx`` while the separation is small
compared to the environment wavelength, and saturates for large separations.
The two regimes are summarised by a pair ``(Lambda, gamma)``:

* ``Gamma(dx) ~ Lambda * dx**2``  (long-wavelength limit),
* ``Gamma(dx) ~ gamma``           (short-wavelength limit),

joined by the interpolation ``Gamma(dx) = gamma * (1 - exp(-Lambda*dx^2/gamma))``.

All quantities are SI; the rate formulas are dimensional and carry explicit
``hbar``, ``k_B`` and ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .constants import FACT_8, ZETA_9, CODATA, PhysicalConstants
from .errors import DomainError

__all__ = [
    "Channel",
    "ChannelParams",
    "RatePair",
    "channel_rates",
    "gamma_of_separation",
    "coherence_decay",
    "crossover_length",
]


class Channel(Enum):
    """Decoherence channel selector."""

    COLLISIONS = "collisions"
    BLACKBODY_SCATTERING = "blackbody_scattering"
    BLACKBODY_ABSORPTION = "blackbody_absorption"
    BLACKBODY_EMISSION = "blackbody_emission"


@dataclass(frozen=True)
class ChannelParams:
    """Physical inputs for one decoherence channel.

    Parameters
    ----------
    pressure : float
        Residual-gas pressure in Pa (collisions only).
    gas_particle_mass : float
        Mass of a single gas particle in kg.
    mean_velocity : float
        Mean thermal velocity of the gas particles in m/s.
    radius : float
        System radius in m (linear dimension ``2 R``).
    temperature_internal : float
        Internal temperature in K; drives blackbody emission.
    temperature_external : float
        Environment temperature in K; drives scattering and absorption.
    dielectric : complex
        Dielectric constant of the system (dimensionless).
    """

    pressure: float
    gas_particle_mass: float
    mean_velocity: float
    radius: float
    temperature_internal: float
    temperature_external: float
    dielectric: complex

    def __post_init__(self) -> None:
        if not self.pressure >= 0.0:
            raise DomainError("pressure must satisfy P >= 0")
        if not self.gas_particle_mass > 0.0:
            raise DomainError("gas_particle_mass must satisfy m_p > 0")
        if not self.mean_velocity > 0.0:
            raise DomainError("mean_velocity must satisfy v > 0")
        if not self.radius > 0.0:
            raise DomainError("radius must satisfy R > 0")
        if not self.temperature_internal >= 0.0:
            raise DomainError("temperature_internal must satisfy T_i >= 0")
        if not self.temperature_external >= 0.0:
            raise DomainError("temperature_external must satisfy T_e >= 0")
        cm = self.polarizability_factor
        if not (math.isfinite(cm.real) and math.isfinite(cm.imag)):
            raise DomainError("dielectric factor (eps-1)/(eps+2) must be finite (eps != -2)")

    @property
    def polarizability_factor(self) -> complex:
        """Clausius-Mossotti factor ``(eps - 1)/(eps + 2)``."""
        eps = complex(self.dielectric)
        denom = eps + 2.0
        if denom == 0:
            raise DomainError("dielectric factor (eps-1)/(eps+2) must be finite (eps != -2)")
        return (eps - 1.0) / denom


@dataclass(frozen=True)
class RatePair:
    """Long-wavelength diffusion coefficient and short-wavelength saturation rate.

    ``Lambda`` has units m^-2 s^-1, ``gamma`` units s^-1.  Both are zero
    exactly when the channel is switched off (zero pressure, zero
    temperature, or a vanishing dielectric response).
    """

    Lambda: float
    gamma: float

    def __post_init__(self) -> None:
        if not self.Lambda >= 0.0:
            raise DomainError("Lambda must satisfy Lambda >= 0")
        if not self.gamma >= 0.0:
            raise DomainError("gamma must satisfy gamma >= 0")


def channel_rates(
    channel: Channel,
    params: ChannelParams,
    constants: PhysicalConstants = CODATA,
) -> RatePair:
    """Evaluate the closed-form ``(Lambda, gamma)`` pair for a channel.

    Collisions::

        Lambda = 8 sqrt(2 pi) m_p v P R^2 / (3 sqrt(3) hbar^2)
        gamma  = 16 pi sqrt(2 pi) P R^2 / (sqrt(3) v m_p)

    Blackbody scattering (external temperature)::

        Lambda = 8! (8 zeta(9) / 9 pi) R^6 c Re[(eps-1)/(eps+2)]^2 (k_B T / hbar c)^9
        gamma  = 8! (8 zeta(9) pi^(1/3) / 9) R^6 c Re[(eps-1)/(eps+2)]^2 (k_B T / hbar c)^7

    Blackbody absorption (external temperature) and emission (internal
    temperature)::

        Lambda = (16 pi^5 / 189) R^3 c Im[(eps-1)/(eps+2)] (k_B T / hbar c)^6
        gamma  = (16 pi^6 pi^(1/3) / 189) R^3 c Im[(eps-1)/(eps+2)] (k_B T / hbar c)^4

    Raises
    ------
    DomainError
        If ``params`` violates an invariant, or the dielectric response makes
        an absorption/emission rate negative.
    """
    hbar, k_B, c = constants.hbar, constants.k_B, constants.c
    R = params.radius

    if channel is Channel.COLLISIONS:
        P, m_p, v = params.pressure, params.gas_particle_mass, params.mean_velocity
        lam = 8.0 * math.sqrt(2.0 * math.pi) * m_p * v * P * R**2 / (3.0 * math.sqrt(3.0) * hbar**2)
        gam = 16.0 * math.pi * math.sqrt(2.0 * math.pi) * P * R**2 / (math.sqrt(3.0) * v * m_p)
        return RatePair(lam, gam)

    cm = params.polarizability_factor
    if channel is Channel.BLACKBODY_SCATTERING:
        T = params.temperature_external
        theta = k_B * T / (hbar * c)
        re2 = cm.real**2
        lam = FACT_8 * (8.0 * ZETA_9 / (9.0 * math.pi)) * R**6 * c * re2 * theta**9
        gam = FACT_8 * (8.0 * ZETA_9 * math.pi ** (1.0 / 3.0) / 9.0) * R**6 * c * re2 * theta**7
        return RatePair(lam, gam)

    if channel is Channel.BLACKBODY_ABSORPTION:
        T = params.temperature_external
    elif channel is Channel.BLACKBODY_EMISSION:
        T = params.temperature_internal
    else:
        raise DomainError(f"unknown channel {channel!r}")

    im = cm.imag
    if im < 0.0:
        raise DomainError("Im[(eps-1)/(eps+2)] must be >= 0 for absorption/emission rates")
    theta = k_B * T / (hbar * c)
    lam = (16.0 * math.pi**5 / 189.0) * R**3 * c * im * theta**6
    gam = (16.0 * math.pi**6 * math.pi ** (1.0 / 3.0) / 189.0) * R**3 * c * im * theta**4
    return RatePair(lam, gam)


def gamma_of_separation(rates: RatePair, dx: float) -> float:
    """Interpolated decoherence rate ``gamma * (1 - exp(-Lambda dx^2 / gamma))``.

    Non-decreasing in ``dx``; approaches ``Lambda * dx**2`` for small
    separations and saturates at ``gamma`` for large ones.  Returns 0 when
    either rate is zero.
    """
    if dx < 0.0:
        raise DomainError("separation dx must satisfy dx >= 0")
    if rates.gamma == 0.0 or rates.Lambda == 0.0:
        return 0.0
    # -expm1 keeps full precision deep in the quadratic regime.
    return rates.gamma * (-math.expm1(-rates.Lambda * dx * dx / rates.gamma))


def coherence_decay(rates: RatePair, dx: float, t: float) -> float:
    """Off-diagonal survival factor ``exp(-Gamma(dx) * t)``.

    This is the pure-decoherence envelope of the position-basis matrix
    element at separation ``dx``; the Hamiltonian contribution is not
    integrated here.
    """
    if t < 0.0:
        raise DomainError("time t must satisfy t >= 0")
    return math.exp(-gamma_of_separation(rates, dx) * t)


def crossover_length(rates: RatePair) -> float:
    """Separation ``sqrt(gamma / Lambda)`` where the two asymptotes meet."""
    if rates.Lambda <= 0.0 or rates.gamma <= 0.0:
        raise DomainError("no crossover: requires Lambda > 0 and gamma > 0")
    return math.sqrt(rates.gamma / rates.Lambda)
