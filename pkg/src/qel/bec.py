"""Condensate atom-number loss: one-body decay plus three-body recombination.

The atom number obeys ``dN/dt = -K1 N - Ktilde N^3`` where ``K1`` collects
collisions with the thermal cloud and ``Ktilde = K3 / ((2 pi)^3 3^(3/2)
sigma_t^6)`` folds the three-body loss coefficient and the condensate
position spread.  With constant coefficients the equation is of Bernoulli
type and has a closed-form solution; the numeric path exists for
time-dependent ``sigma_t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, IntegrationError

__all__ = [
    "LossParams",
    "LossCurve",
    "ktilde_from_k3",
    "solve_analytic",
    "solve_numeric",
    "required_three_body",
]

_KTILDE_GEOMETRY = (2.0 * math.pi) ** 3 * 3.0**1.5


def ktilde_from_k3(K3: float, sigma_t: float) -> float:
    """Effective three-body rate ``K3 / ((2 pi)^3 3^(3/2) sigma_t^6)``."""
    if K3 < 0.0:
        raise DomainError("K3 must satisfy K3 >= 0")
    if not sigma_t > 0.0:
        raise DomainError("sigma_t must satisfy sigma_t > 0")
    return K3 / (_KTILDE_GEOMETRY * sigma_t**6)


@dataclass(frozen=True)
class LossParams:
    """Loss model inputs.

    ``sigma_t`` may be a constant (m) or a callable ``t -> sigma`` for a
    breathing condensate.  ``K3`` carries whatever units make ``Ktilde``
    come out in s^-1 under the geometry factor above.
    """

    K1: float
    K3: float
    sigma_t: float | Callable[[float], float]
    N0: float

    def __post_init__(self) -> None:
        if self.K1 < 0.0:
            raise DomainError("K1 must satisfy K1 >= 0")
        if self.K3 < 0.0:
            raise DomainError("K3 must satisfy K3 >= 0")
        if not self.N0 > 0.0:
            raise DomainError("N0 must satisfy N0 > 0")
        if not callable(self.sigma_t) and not self.sigma_t > 0.0:
            raise DomainError("sigma_t must satisfy sigma_t > 0")

    @classmethod
    def from_ktilde(cls, K1: float, Ktilde: float, N0: float) -> "LossParams":
        """Build constant-coefficient params from ``Ktilde`` directly."""
        if Ktilde < 0.0:
            raise DomainError("Ktilde must satisfy Ktilde >= 0")
        return cls(K1=K1, K3=Ktilde * _KTILDE_GEOMETRY, sigma_t=1.0, N0=N0)

    def ktilde_at(self, t: float) -> float:
        sigma = self.sigma_t(t) if callable(self.sigma_t) else self.sigma_t
        if not sigma > 0.0:
            raise DomainError(f"sigma_t({t}) must satisfy sigma_t > 0")
        return self.K3 / (_KTILDE_GEOMETRY * sigma**6)


@dataclass(frozen=True)
class LossCurve:
    """Sampled atom-number curve: ascending times and matching counts."""

    times: np.ndarray
    counts: np.ndarray

    def __post_init__(self) -> None:
        if self.times.shape != self.counts.shape:
            raise DomainError("times and counts must have the same length")
        if np.any(np.diff(self.times) <= 0.0):
            raise DomainError("times must be strictly ascending")


def solve_analytic(K1: float, Ktilde: float, N0: float, t: float) -> float:
    """Closed-form atom number at time ``t`` for constant coefficients.

    ``N(t) = N0 exp(-K1 t) / sqrt(1 + (Ktilde N0^2 / K1)(1 - exp(-2 K1 t)))``,
    with the ``K1 -> 0`` limit ``N0 / sqrt(1 + 2 Ktilde N0^2 t)``.
    """
    if K1 < 0.0 or Ktilde < 0.0:
        raise DomainError("rates must satisfy K1 >= 0 and Ktilde >= 0")
    if not N0 > 0.0:
        raise DomainError("N0 must satisfy N0 > 0")
    if t < 0.0:
        raise DomainError("time t must satisfy t >= 0")
    if K1 == 0.0:
        return N0 / math.sqrt(1.0 + 2.0 * Ktilde * N0 * N0 * t)
    drain = (Ktilde * N0 * N0 / K1) * (-math.expm1(-2.0 * K1 * t))
    return N0 * math.exp(-K1 * t) / math.sqrt(1.0 + drain)


def _rhs(params: LossParams, t: float, n: float) -> float:
    return -params.K1 * n - params.ktilde_at(t) * n**3


def solve_numeric(params: LossParams, t_grid: Sequence[float]) -> LossCurve:
    """Integrate the loss equation on ``t_grid`` with fixed-step RK4.

    The internal step subdivides each grid interval and never exceeds
    ``0.01 / (K1 + Ktilde(0) N0^2)``, so constant-coefficient runs agree
    with :func:`solve_analytic` to better than 1e-8 relative.
    """
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("t_grid must contain at least two times")
    if grid[0] != 0.0 or np.any(np.diff(grid) <= 0.0):
        raise DomainError("t_grid must ascend from 0")

    rate_scale = params.K1 + params.ktilde_at(grid[0]) * params.N0**2
    h_max = math.inf if rate_scale == 0.0 else 0.01 / rate_scale

    counts = np.empty_like(grid)
    counts[0] = n = params.N0
    for i in range(grid.size - 1):
        span = grid[i + 1] - grid[i]
        n_sub = max(1, int(math.ceil(span / h_max))) if math.isfinite(h_max) else 1
        h = span / n_sub
        if h <= 0.0 or not math.isfinite(h):
            raise IntegrationError(f"step underflow in interval [{grid[i]}, {grid[i+1]}]")
        t = grid[i]
        for _ in range(n_sub):
            k1 = _rhs(params, t, n)
            k2 = _rhs(params, t + 0.5 * h, n + 0.5 * h * k1)
            k3 = _rhs(params, t + 0.5 * h, n + 0.5 * h * k2)
            k4 = _rhs(params, t + h, n + h * k3)
            n = n + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
            if not math.isfinite(n) or n <= 0.0:
                raise IntegrationError(f"non-finite or non-positive atom number at t={t}")
        counts[i + 1] = n
    return LossCurve(times=grid, counts=counts)


def required_three_body(K1: float, N0: float, horizon: float, retention: float) -> float:
    """Largest ``Ktilde`` keeping ``N(horizon) >= retention * N0``.

    Solves ``solve_analytic(K1, Ktilde, N0, horizon) = retention * N0`` by
    bisection (the left side is strictly decreasing in ``Ktilde``) to a
    relative tolerance of 1e-6.
    """
    if not 0.0 < retention < 1.0:
        raise DomainError("retention must satisfy 0 < retention < 1")
    if not horizon > 0.0:
        raise DomainError("horizon must satisfy horizon > 0")
    target = retention * N0
    base = solve_analytic(K1, 0.0, N0, horizon)
    if base < target:
        raise DomainError("one-body loss exceeds budget: retention unreachable at Ktilde = 0")
    if base == target:
        return 0.0

    lo, hi = 0.0, 1e3 / (N0 * N0 * horizon)
    if solve_analytic(K1, hi, N0, horizon) > target:
        raise DomainError("bisection bracket does not contain the retention target")
    while hi - lo > 1e-6 * hi:
        mid = 0.5 * (lo + hi)
        if solve_analytic(K1, mid, N0, horizon) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
