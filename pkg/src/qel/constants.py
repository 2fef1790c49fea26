"""Physical constants used by the dimensional (SI) parts of the package."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# CODATA 2018 exact values (SI redefinition).
_PLANCK = 6.62607015e-34  # J s
HBAR = _PLANCK / (2.0 * math.pi)  # J s
K_B = 1.380649e-23  # J/K
C_LIGHT = 299792458.0  # m/s

# Fixed high-precision mathematical constants for the blackbody rates.
ZETA_9 = 1.0020083928260822  # Riemann zeta(9)
FACT_8 = 40320.0  # 8!


@dataclass(frozen=True)
class PhysicalConstants:
    """Immutable bundle of ``hbar``, ``k_B`` and ``c`` in SI units.

    Defaults are the CODATA values; overriding is only useful for unit
    experiments in tests.
    """

    hbar: float = HBAR
    k_B: float = K_B
    c: float = C_LIGHT

    def __post_init__(self) -> None:
        for name in ("hbar", "k_B", "c"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise DomainError(f"{name} must be strictly positive and finite")


CODATA = PhysicalConstants()
