"""Conditional and unconditional Gaussian dynamics with entropy accounting.

A continuously monitored linear system is described by its covariance matrix
``sigma`` and mean vector ``xbar`` (quadrature ordering ``q1, p1, q2, p2,
...``, with ``hbar = 1``).  The covariance obeys the deterministic matrix
Riccati equation

    sigma' = A sigma + sigma A^T + D - chi(sigma),
    chi(sigma) = (sigma C^T + Gamma_m^T)(C sigma + Gamma_m),

while the conditional mean diffuses,

    dxbar = (A xbar + b) dt + (sigma C^T + Gamma_m^T) dw.

Setting ``C = Gamma_m = 0`` recovers the unconditional (Lyapunov) evolution.
Entropy bookkeeping uses the Wigner entropy ``S = ln(det sigma) / 2``; the
flux/production split refers to a thermal bath and satisfies
``dS/dt = flux + production`` with ``production >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from ._backend import BACKEND, mean_em_paths, riccati_rk4_path
from .errors import DomainError, IntegrationError

__all__ = [
    "BACKEND",
    "BathModel",
    "GaussianSystem",
    "GaussianState",
    "TrajectoryRecord",
    "EprSplit",
    "symplectic_form",
    "chi_of_sigma",
    "evolve_covariance",
    "sample_mean_trajectory",
    "sample_mean_ensemble",
    "wigner_entropy",
    "entropy_rate",
    "information_rate",
    "epr_split",
    "conditional_epr",
    "random_physical_state",
]

PHYSICALITY_TOL = 1e-10


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form, one [[0, 1], [-1, 0]] block per mode."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for j in range(n_modes):
        omega[2 * j, 2 * j + 1] = 1.0
        omega[2 * j + 1, 2 * j] = -1.0
    return omega


def _as_matrix(x, shape, name: str) -> np.ndarray:
    arr = np.ascontiguousarray(x, dtype=float)
    if arr.shape != shape:
        raise DomainError(f"{name} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class BathModel:
    """Thermal bath: damping rate ``gamma_th`` and occupation ``n_bar``.

    Contributes ``-gamma_th/2 * I`` to the drift and ``gamma_th * mu * I`` to
    the diffusion of every mode, with ``mu = n_bar + 1/2``.
    """

    gamma_th: float
    n_bar: float

    def __post_init__(self) -> None:
        if self.gamma_th < 0.0:
            raise DomainError("gamma_th must satisfy gamma_th >= 0")
        if self.n_bar < 0.0:
            raise DomainError("n_bar must satisfy n_bar >= 0")

    @property
    def mu(self) -> float:
        return self.n_bar + 0.5

    def drift(self, n_modes: int) -> np.ndarray:
        return -0.5 * self.gamma_th * np.eye(2 * n_modes)

    def diffusion(self, n_modes: int) -> np.ndarray:
        return self.gamma_th * self.mu * np.eye(2 * n_modes)


@dataclass(frozen=True)
class GaussianSystem:
    """Drift/diffusion/measurement description of a monitored linear system.

    Attributes
    ----------
    n_modes : int
        Number of bosonic modes; all matrices are ``2 n`` dimensional.
    H_s : (2n, 2n) array
        Symmetric Hamiltonian quadratic form (``H = x^T H_s x / 2 + b^T Omega x``).
    b : (2n,) array
        Linear drive.
    A : (2n, 2n) array
        Drift matrix, ``Omega H_s`` plus the irreversible part.
    D : (2n, 2n) array
        Symmetric positive-semidefinite diffusion matrix.
    C, Gamma_m : (m, 2n) arrays
        Measurement matrix (one row per monitored output) and noise
        cross-correlation; ``m = 0`` rows or all-zero rows mean no monitoring.
    """

    n_modes: int
    H_s: np.ndarray
    b: np.ndarray
    A: np.ndarray
    D: np.ndarray
    C: np.ndarray
    Gamma_m: np.ndarray

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise DomainError("n_modes must be a positive integer")
        d = 2 * self.n_modes
        H = _as_matrix(self.H_s, (d, d), "H_s")
        if not np.allclose(H, H.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(H).max())):
            raise DomainError("H_s must be symmetric")
        b = _as_matrix(self.b, (d,), "b")
        A = _as_matrix(self.A, (d, d), "A")
        D = _as_matrix(self.D, (d, d), "D")
        if not np.allclose(D, D.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(D).max())):
            raise DomainError("D must be symmetric PSD")
        if np.linalg.eigvalsh(0.5 * (D + D.T)).min() < -1e-12 * max(1.0, np.abs(D).max()):
            raise DomainError("D must be symmetric PSD")
        C = np.ascontiguousarray(self.C, dtype=float)
        if C.ndim != 2 or C.shape[1] != d:
            raise DomainError(f"C must have shape (m, {d}), got {C.shape}")
        G = _as_matrix(self.Gamma_m, C.shape, "Gamma_m")
        if not np.all(np.isfinite(C)):
            raise DomainError("C must be finite")
        for name, value in (("H_s", H), ("b", b), ("A", A), ("D", D), ("C", C), ("Gamma_m", G)):
            object.__setattr__(self, name, value)

    @property
    def dim(self) -> int:
        return 2 * self.n_modes

    @classmethod
    def with_bath(
        cls,
        H_s: np.ndarray,
        bath: BathModel,
        C: np.ndarray | None = None,
        Gamma_m: np.ndarray | None = None,
        b: np.ndarray | None = None,
    ) -> "GaussianSystem":
        """Assemble ``A = Omega H_s - gamma_th/2 I`` and ``D = gamma_th mu I``."""
        H_s = np.asarray(H_s, dtype=float)
        if H_s.ndim != 2 or H_s.shape[0] != H_s.shape[1] or H_s.shape[0] % 2:
            raise DomainError("H_s must be a 2n x 2n matrix")
        n = H_s.shape[0] // 2
        d = 2 * n
        A = symplectic_form(n) @ H_s + bath.drift(n)
        D = bath.diffusion(n)
        if C is None:
            C = np.zeros((0, d))
        C = np.asarray(C, dtype=float)
        if Gamma_m is None:
            Gamma_m = np.zeros_like(C)
        if b is None:
            b = np.zeros(d)
        return cls(n_modes=n, H_s=H_s, b=b, A=A, D=D, C=C, Gamma_m=Gamma_m)

    @classmethod
    def single_mode(
        cls,
        omega: float,
        bath: BathModel,
        kappa: float = 0.0,
        b: np.ndarray | None = None,
    ) -> "GaussianSystem":
        """Damped oscillator ``H = omega (q^2 + p^2) / 2`` with optional
        position monitoring of strength ``kappa`` (``C = [sqrt(kappa), 0]``)."""
        if kappa < 0.0:
            raise DomainError("kappa must satisfy kappa >= 0")
        H_s = omega * np.eye(2)
        C = np.array([[np.sqrt(kappa), 0.0]])
        return cls.with_bath(H_s, bath, C=C, Gamma_m=np.zeros((1, 2)), b=b)

    def unmonitored(self) -> "GaussianSystem":
        """Copy with the measurement switched off (``C = Gamma_m = 0``)."""
        return replace(self, C=np.zeros_like(self.C), Gamma_m=np.zeros_like(self.Gamma_m))


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of a physical Gaussian state."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        cov = np.ascontiguousarray(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise DomainError("cov must be a 2n x 2n matrix")
        d = cov.shape[0]
        mean = _as_matrix(self.mean, (d,), "mean")
        if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(cov).max())):
            raise DomainError("cov must be symmetric")
        defect = physicality_defect(cov)
        if defect < -PHYSICALITY_TOL:
            raise DomainError(f"cov violates sigma + i Omega/2 >= 0 (defect {defect:.3e})")
        sign, _ = np.linalg.slogdet(cov)
        if sign <= 0.0:
            raise DomainError("cov must have positive determinant")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2


@dataclass(frozen=True)
class TrajectoryRecord:
    """Output of an ensemble run: shared covariance path, per-seed mean paths."""

    t_grid: np.ndarray
    sigma_path: np.ndarray
    mean_paths: np.ndarray
    seeds: tuple[int, ...]
    dW: np.ndarray | None = None

    def __post_init__(self) -> None:
        n_pts = self.t_grid.shape[0]
        if self.sigma_path.shape[0] != n_pts:
            raise DomainError("sigma_path length must match t_grid")
        if self.mean_paths.shape[:2] != (len(self.seeds), n_pts):
            raise DomainError("mean_paths must be (n_seeds, n_pts, 2n)")


class EprSplit(NamedTuple):
    """Entropy rate and its flux/production split, all in nats per second."""

    rate: float
    flux: float
    production: float


def physicality_defect(sigma: np.ndarray) -> float:
    """Smallest eigenvalue of ``sigma + i Omega / 2`` (negative means unphysical)."""
    n = sigma.shape[0] // 2
    herm = sigma + 0.5j * symplectic_form(n)
    return float(np.linalg.eigvalsh(herm).min())


def chi_of_sigma(sys: GaussianSystem, sigma: np.ndarray) -> np.ndarray:
    """Measurement back-action term ``(sigma C^T + Gamma_m^T)(C sigma + Gamma_m)``."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (sys.dim, sys.dim):
        raise DomainError(f"sigma must have shape {(sys.dim, sys.dim)}, got {sigma.shape}")
    left = sigma @ sys.C.T + sys.Gamma_m.T
    right = sys.C @ sigma + sys.Gamma_m
    return left @ right


def _validated_grid(t_grid: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    grid = np.ascontiguousarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("t_grid must contain at least two times")
    dts = np.diff(grid)
    if np.any(dts <= 0.0):
        raise DomainError("t_grid must be strictly ascending")
    return grid, np.ascontiguousarray(dts)


def evolve_covariance(
    sys: GaussianSystem,
    sigma0: np.ndarray,
    t_grid: Sequence[float],
    substeps: int = 1,
) -> np.ndarray:
    """Integrate the covariance Riccati equation along ``t_grid``.

    Fixed-step RK4 with ``substeps`` internal steps per grid interval;
    the returned path holds the symmetrized covariance at every grid point.
    The path is checked for physicality (``sigma + i Omega/2 >= -1e-10``);
    a violation raises :class:`IntegrationError` advising a smaller step.
    """
    _, dts = _validated_grid(t_grid)
    sigma0 = _as_matrix(sigma0, (sys.dim, sys.dim), "sigma0")
    if substeps < 1:
        raise DomainError("substeps must be >= 1")
    path = riccati_rk4_path(sys.A, sys.D, sys.C, sys.Gamma_m, sigma0, dts, substeps)
    path = np.asarray(path)
    if not np.all(np.isfinite(path)):
        raise IntegrationError("covariance integration produced non-finite entries; use a smaller step")
    worst = min(physicality_defect(path[k]) for k in range(path.shape[0]))
    if worst < -PHYSICALITY_TOL:
        raise IntegrationError(
            f"covariance lost physicality (defect {worst:.3e}); use a smaller step"
        )
    return path


def _noise_gains(sys: GaussianSystem, sigma_path: np.ndarray) -> np.ndarray:
    # gain at the left endpoint of each step: sigma_k C^T + Gamma_m^T
    n_steps = sigma_path.shape[0] - 1
    gains = np.empty((n_steps, sys.dim, sys.C.shape[0]))
    for k in range(n_steps):
        gains[k] = sigma_path[k] @ sys.C.T + sys.Gamma_m.T
    return np.ascontiguousarray(gains)


def _wiener_increments(seed: int, n_steps: int, m: int, dts: np.ndarray) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n_steps, m)) * np.sqrt(dts)[:, None]


def sample_mean_trajectory(
    sys: GaussianSystem,
    state0: GaussianState,
    t_grid: Sequence[float],
    seed: int,
) -> np.ndarray:
    """One Euler-Maruyama sample of the conditional mean, shape ``(n_pts, 2n)``.

    The Wiener increments come from a dedicated ``numpy`` generator seeded
    with ``seed``, so the path is bit-reproducible for a fixed
    ``(seed, t_grid)`` and independent of any other trajectory.
    """
    record = sample_mean_ensemble(sys, state0, t_grid, (seed,))
    return record.mean_paths[0]


def sample_mean_ensemble(
    sys: GaussianSystem,
    state0: GaussianState,
    t_grid: Sequence[float],
    seeds: Sequence[int],
    keep_increments: bool = False,
) -> TrajectoryRecord:
    """Sample one conditional-mean path per seed over the shared covariance path.

    The covariance path is deterministic and identical for every seed;
    trajectories only differ through their seed-derived Wiener increments,
    so results match between serial and concurrent execution.
    """
    grid, dts = _validated_grid(t_grid)
    if state0.cov.shape != (sys.dim, sys.dim):
        raise DomainError("state0 dimension does not match the system")
    seeds = tuple(int(s) for s in seeds)
    if not seeds:
        raise DomainError("seeds must be non-empty")

    sigma_path = evolve_covariance(sys, state0.cov, grid)
    gains = _noise_gains(sys, sigma_path)
    n_steps, m = dts.shape[0], sys.C.shape[0]

    dW = np.empty((len(seeds), n_steps, m))
    for i, seed in enumerate(seeds):
        dW[i] = _wiener_increments(seed, n_steps, m, dts)
    x0 = np.empty((len(seeds), sys.dim))
    x0[:] = state0.mean
    paths = np.asarray(mean_em_paths(sys.A, sys.b, gains, x0, dts, dW))
    return TrajectoryRecord(
        t_grid=grid,
        sigma_path=sigma_path,
        mean_paths=paths,
        seeds=seeds,
        dW=dW if keep_increments else None,
    )


def wigner_entropy(sigma: np.ndarray) -> float:
    """Wigner (Renyi-2) entropy ``ln(det sigma) / 2`` in nats, constant dropped."""
    sigma = np.asarray(sigma, dtype=float)
    if not np.allclose(sigma, sigma.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(sigma).max())):
        raise DomainError("sigma must be symmetric")
    try:
        L = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise DomainError("sigma must be positive definite") from None
    return float(np.sum(np.log(np.diag(L))))


def _solve_spd(sigma: np.ndarray, rhs: np.ndarray, name: str) -> np.ndarray:
    try:
        return np.linalg.solve(sigma, rhs)
    except np.linalg.LinAlgError:
        raise DomainError(f"{name} is singular") from None


def entropy_rate(sys: GaussianSystem, sigma: np.ndarray, conditional: bool = True) -> float:
    """Instantaneous Wigner-entropy rate ``Tr[2A + sigma^-1 (D - chi)] / 2``.

    With ``conditional=False`` the back-action term ``chi`` is dropped,
    giving the unconditional (Lyapunov) rate.
    """
    sigma = np.asarray(sigma, dtype=float)
    inhom = sys.D - chi_of_sigma(sys, sigma) if conditional else sys.D
    return float(np.trace(sys.A) + 0.5 * np.trace(_solve_spd(sigma, inhom, "sigma")))


def information_rate(sys: GaussianSystem, sigma_c: np.ndarray, sigma_uc: np.ndarray) -> float:
    """Measurement information rate ``Tr[sigma_c^-1 (D - chi) - sigma_uc^-1 D] / 2``.

    Equals the gap between conditional and unconditional entropy rates, so
    ``entropy_rate(sys, sigma_c) == entropy_rate(sys, sigma_uc, conditional=False) + I``
    holds identically along paired trajectories.
    """
    sigma_c = np.asarray(sigma_c, dtype=float)
    sigma_uc = np.asarray(sigma_uc, dtype=float)
    d_tilde = sys.D - chi_of_sigma(sys, sigma_c)
    term_c = np.trace(_solve_spd(sigma_c, d_tilde, "sigma_c"))
    term_uc = np.trace(_solve_spd(sigma_uc, sys.D, "sigma_uc"))
    return float(0.5 * (term_c - term_uc))


def epr_split(bath: BathModel, state: GaussianState) -> EprSplit:
    """Entropy rate, flux and production for a thermally damped system.

    State functions of ``(sigma, xbar)`` for a bath with ``mu = n_bar + 1/2``::

        production = gamma/(2 mu) Tr[(sigma - mu I) sigma^-1 (sigma - mu I)]
                     + gamma/mu |xbar|^2
        flux       = gamma n_modes - gamma/(2 mu) Tr[sigma] - gamma/mu |xbar|^2

    They satisfy ``rate = flux + production`` exactly, ``production >= 0``
    with equality only at equilibrium ``(mu I, 0)``.
    """
    if bath.mu <= 0.0:
        raise DomainError("bath mu must be positive (zero-temperature flux form diverges)")
    sigma, xbar = state.cov, state.mean
    n = state.n_modes
    g, mu = bath.gamma_th, bath.mu
    excess = sigma - mu * np.eye(2 * n)
    quad = float(np.trace(excess @ _solve_spd(sigma, excess, "sigma")))
    drive = float(xbar @ xbar)
    production = (g / (2.0 * mu)) * quad + (g / mu) * drive
    flux = g * n - (g / (2.0 * mu)) * float(np.trace(sigma)) - (g / mu) * drive
    return EprSplit(rate=flux + production, flux=flux, production=production)


def conditional_epr(
    bath: BathModel,
    sys: GaussianSystem,
    sigma_c: np.ndarray,
    sigma_uc: np.ndarray,
    state: GaussianState,
) -> float:
    """Conditional entropy production ``Pi_c = Pi_uc + I``.

    ``state`` is the unconditional state (its covariance should be
    ``sigma_uc``) supplying the first moments that enter ``Pi_uc``.
    Whenever ``Pi_uc >= 0`` this refines the second law to ``Pi_c >= I``.
    """
    return epr_split(bath, state).production + information_rate(sys, sigma_c, sigma_uc)


def random_physical_state(rng: np.random.Generator, n_modes: int = 1, scale: float = 1.0) -> GaussianState:
    """Draw a random physical Gaussian state (``M M^T + I/2`` covariance)."""
    d = 2 * n_modes
    m = scale * rng.standard_normal((d, d))
    cov = m @ m.T + 0.5 * np.eye(d)
    mean = scale * rng.standard_normal(d)
    return GaussianState(mean=mean, cov=cov)
