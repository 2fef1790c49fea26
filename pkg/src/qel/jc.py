"""Measurement-based cooling of an oscillator exchange-coupled to a spin.

The composite system is a truncated bosonic mode (Fock levels ``0..n_max``)
tensored with a two-level system, with Hamiltonian (``hbar = 1``)

    H = omega_A/2 sigma_z + omega a^dag a + coupling (a sigma_+ + a^dag sigma_-)
        + epsilon (a + a^dag)^4.

At resonance and ``epsilon = 0`` the exchange term swaps ``|g, n+1>`` and
``|e, n>`` in a half-Rabi time ``pi / (2 coupling sqrt(n+1))``.  The cooling
protocol alternates free evolution for such a time with a projective spin
measurement, post-selecting the ground outcome; the surviving oscillator
weight concentrates in the Fock ground state.

Basis ordering is spin-major: index ``s * (n_max + 1) + n`` with ``s = 0``
the spin ground state ``|g>``.

Closed-form figures of merit for two laser-cooling schemes (resolved
sideband and parametric feedback) live here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, TruncationError

__all__ = [
    "JCParams",
    "CompositeState",
    "ProtocolRecord",
    "SidebandResult",
    "annihilation",
    "build_hamiltonian",
    "thermal_oscillator",
    "thermal_tail",
    "initial_state",
    "evolve",
    "measure_spin",
    "project_spin",
    "cooling_protocol",
    "sideband_occupation",
    "feedback_temperature",
]

STATE_TOL = 1e-10
THERMAL_TAIL_LIMIT = 1e-6


@dataclass(frozen=True)
class JCParams:
    """Oscillator/spin parameters: frequencies, exchange coupling, quartic strength.

    ``epsilon`` is the stiffening quartic deformation; it must stay well
    below ``omega`` for the truncated model to be trustworthy.
    """

    omega: float
    omega_A: float
    coupling: float
    epsilon: float = 0.0
    n_max: int = 1

    def __post_init__(self) -> None:
        if not self.omega > 0.0:
            raise DomainError("omega must satisfy omega > 0")
        if not self.omega_A > 0.0:
            raise DomainError("omega_A must satisfy omega_A > 0")
        if not self.coupling > 0.0:
            raise DomainError("coupling must satisfy coupling > 0")
        if not self.coupling < self.omega:
            raise DomainError("coupling must satisfy coupling < omega")
        if self.epsilon < 0.0:
            raise DomainError("epsilon must satisfy epsilon >= 0")
        if not self.epsilon < 0.1 * self.omega:
            raise DomainError("epsilon must satisfy epsilon < 0.1 omega")
        if self.n_max < 1:
            raise DomainError("n_max must satisfy n_max >= 1")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    @property
    def resonant(self) -> bool:
        return self.omega_A == self.omega


@dataclass(frozen=True)
class CompositeState:
    """Density matrix on the spin (x) Fock space, validated on construction."""

    rho: np.ndarray

    def __post_init__(self) -> None:
        rho = np.ascontiguousarray(self.rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] % 2:
            raise DomainError("rho must be a square matrix on spin (x) Fock space")
        scale = max(1.0, float(np.abs(rho).max()))
        if np.abs(rho - rho.conj().T).max() > STATE_TOL * scale:
            raise DomainError("rho must be Hermitian")
        tr = float(np.real(np.trace(rho)))
        if abs(tr - 1.0) > STATE_TOL:
            raise DomainError(f"rho must have unit trace (got {tr})")
        if np.linalg.eigvalsh(rho).min() < -STATE_TOL:
            raise DomainError("rho must be positive semidefinite")
        object.__setattr__(self, "rho", rho)

    @property
    def n_max(self) -> int:
        return self.rho.shape[0] // 2 - 1

    def oscillator_populations(self) -> np.ndarray:
        """Diagonal Fock populations of the reduced oscillator state."""
        n_levels = self.n_max + 1
        diag = np.real(np.diag(self.rho))
        return diag[:n_levels] + diag[n_levels:]

    def mean_occupation(self) -> float:
        pops = self.oscillator_populations()
        return float(np.arange(pops.size) @ pops)

    def ground_fidelity(self) -> float:
        return float(self.oscillator_populations()[0])


def annihilation(n_levels: int) -> np.ndarray:
    """Truncated ladder operator, ``a |n> = sqrt(n) |n-1>``."""
    return np.diag(np.sqrt(np.arange(1.0, n_levels)), k=1)


def build_hamiltonian(p: JCParams) -> np.ndarray:
    """Composite Hamiltonian matrix (real symmetric) in angular-frequency units.

    The quartic term is assembled from the truncated ladder operators, so
    its matrix elements near the top two Fock levels deviate from the
    untruncated operator; keep populated levels away from the edge.
    """
    n_levels = p.n_max + 1
    a = annihilation(n_levels)
    number = a.T @ a
    eye_f = np.eye(n_levels)
    sigma_z = np.diag([-1.0, 1.0])
    sigma_plus = np.array([[0.0, 0.0], [1.0, 0.0]])

    h = 0.5 * p.omega_A * np.kron(sigma_z, eye_f)
    h += p.omega * np.kron(np.eye(2), number)
    h += p.coupling * (np.kron(sigma_plus, a) + np.kron(sigma_plus.T, a.T))
    if p.epsilon != 0.0:
        x = a + a.T
        h += p.epsilon * np.kron(np.eye(2), np.linalg.matrix_power(x, 4))
    return h


def thermal_tail(n_th: float, n_max: int) -> float:
    """Probability weight above the truncation, ``(n_th / (1 + n_th))^(n_max+1)``."""
    if n_th < 0.0:
        raise DomainError("n_th must satisfy n_th >= 0")
    if n_th == 0.0:
        return 0.0
    return (n_th / (1.0 + n_th)) ** (n_max + 1)


def thermal_oscillator(n_th: float, n_max: int) -> np.ndarray:
    """Truncated thermal Fock state with ``p_k = n_th^k / (1 + n_th)^(k+1)``.

    The retained weights are renormalized.  Raises
    :class:`TruncationError` when the discarded tail exceeds 1e-6.
    """
    tail = thermal_tail(n_th, n_max)
    if tail > THERMAL_TAIL_LIMIT:
        raise TruncationError(
            f"thermal tail {tail:.3e} above {THERMAL_TAIL_LIMIT}; increase n_max"
        )
    k = np.arange(n_max + 1)
    if n_th == 0.0:
        weights = np.zeros(n_max + 1)
        weights[0] = 1.0
    else:
        ratio = n_th / (1.0 + n_th)
        weights = ratio**k / (1.0 + n_th)
    return np.diag(weights / weights.sum()).astype(complex)


def initial_state(p: JCParams, n_th: float) -> CompositeState:
    """Spin ground state tensored with the truncated thermal oscillator."""
    gg = np.zeros((2, 2), dtype=complex)
    gg[0, 0] = 1.0
    return CompositeState(np.kron(gg, thermal_oscillator(n_th, p.n_max)))


def evolve(H: np.ndarray, state: CompositeState, t: float) -> CompositeState:
    """Unitary evolution ``rho -> U rho U^dag`` with ``U = exp(-i H t)``.

    ``U`` comes from the Hermitian eigendecomposition of ``H``, so the
    propagation is exact on the truncated space (no time stepping).
    """
    if t < 0.0:
        raise DomainError("time t must satisfy t >= 0")
    evals, evecs = np.linalg.eigh(H)
    return _propagate(evals, evecs, state.rho, t)


def _propagate(evals: np.ndarray, evecs: np.ndarray, rho: np.ndarray, t: float) -> CompositeState:
    phases = np.exp(-1j * evals * t)
    u = (evecs * phases) @ evecs.conj().T
    out = u @ rho @ u.conj().T
    # re-hermitize to suppress round-off before validation
    return CompositeState(0.5 * (out + out.conj().T))


def _spin_block(rho: np.ndarray, spin: int) -> np.ndarray:
    n_levels = rho.shape[0] // 2
    lo = spin * n_levels
    return rho[lo : lo + n_levels, lo : lo + n_levels]


def project_spin(state: CompositeState, outcome: str) -> tuple[float, CompositeState]:
    """Projective spin measurement post-selected on ``outcome`` ('g' or 'e').

    Returns the outcome probability and the renormalized post-state.
    Raises :class:`DomainError` for a zero-probability branch, whose
    post-state is undefined.
    """
    if outcome not in ("g", "e"):
        raise DomainError("outcome must be 'g' or 'e'")
    spin = 0 if outcome == "g" else 1
    n_levels = state.rho.shape[0] // 2
    block = _spin_block(state.rho, spin)
    prob = float(np.real(np.trace(block)))
    if prob <= STATE_TOL:
        raise DomainError(f"post-state undefined: outcome '{outcome}' has zero probability")
    post = np.zeros_like(state.rho)
    lo = spin * n_levels
    post[lo : lo + n_levels, lo : lo + n_levels] = block / prob
    return prob, CompositeState(post)


def measure_spin(state: CompositeState) -> dict[str, tuple[float, CompositeState | None]]:
    """Both branches of the projective spin measurement.

    Probabilities sum to one; a branch with (numerically) zero probability
    carries ``None`` as its post-state.
    """
    out: dict[str, tuple[float, CompositeState | None]] = {}
    for outcome in ("g", "e"):
        spin = 0 if outcome == "g" else 1
        prob = float(np.real(np.trace(_spin_block(state.rho, spin))))
        if prob <= STATE_TOL:
            out[outcome] = (max(prob, 0.0), None)
        else:
            out[outcome] = project_spin(state, outcome)
    return out


@dataclass(frozen=True)
class ProtocolRecord:
    """Per-cycle and cumulative bookkeeping of the cooling protocol."""

    durations: np.ndarray
    success_probs: np.ndarray
    mean_occupations: np.ndarray
    ground_fidelities: np.ndarray
    cumulative_success: np.ndarray
    total_time: float
    final_state: CompositeState

    def __post_init__(self) -> None:
        probs = self.success_probs
        if np.any(probs < 0.0) or np.any(probs > 1.0 + 1e-12):
            raise DomainError("success probabilities must lie in [0, 1]")
        if np.any(np.diff(self.cumulative_success) > 1e-12):
            raise DomainError("cumulative success product must be non-increasing")
        if not math.isclose(self.total_time, float(self.durations.sum()), rel_tol=1e-12):
            raise DomainError("total_time must equal the sum of cycle durations")

    @property
    def n_cycles(self) -> int:
        return self.durations.size


def cycle_time(coupling: float, n: int) -> float:
    """Half-Rabi swap time ``pi / (2 coupling sqrt(n+1))`` for cycle index ``n``."""
    if n < 0:
        raise DomainError("cycle index must satisfy n >= 0")
    return math.pi / (2.0 * coupling * math.sqrt(n + 1.0))


def cooling_protocol(
    p: JCParams,
    n_th: float,
    n_rep: int,
    schedule: Sequence[int] | None = None,
    allow_off_resonance: bool = False,
) -> ProtocolRecord:
    """Run ``n_rep`` evolve-measure-postselect cycles from the thermal start.

    Cycle ``k`` evolves for the swap time of index ``schedule[k]`` (default
    schedule ``0, 1, ..., n_rep-1``), measures the spin, and keeps the
    ground branch.  The record carries, per cycle, the duration, ground
    probability, conditional mean occupation and ground-state fidelity,
    plus the running success product and total protocol time
    ``sum_n pi / (2 coupling sqrt(n+1))``.

    A populated truncation guard band (top two Fock levels above 1e-6 total
    weight) raises :class:`TruncationError`, since the quartic term is not
    faithful there.
    """
    if n_rep < 1:
        raise DomainError("n_rep must satisfy n_rep >= 1")
    if not p.resonant and not allow_off_resonance:
        raise DomainError("protocol expects resonance omega_A = omega (set allow_off_resonance)")
    if schedule is None:
        schedule = tuple(range(n_rep))
    else:
        schedule = tuple(int(n) for n in schedule)
        if len(schedule) != n_rep:
            raise DomainError("schedule length must equal n_rep")
        if any(n < 0 for n in schedule):
            raise DomainError("schedule entries must be >= 0")

    state = initial_state(p, n_th)
    evals, evecs = np.linalg.eigh(build_hamiltonian(p))

    durations = np.empty(n_rep)
    success = np.empty(n_rep)
    occupations = np.empty(n_rep)
    fidelities = np.empty(n_rep)
    cumulative = np.empty(n_rep)
    running = 1.0

    for k, n_idx in enumerate(schedule):
        t_cycle = cycle_time(p.coupling, n_idx)
        state = _propagate(evals, evecs, state.rho, t_cycle)
        prob, state = project_spin(state, "g")
        running *= prob

        pops = state.oscillator_populations()
        guard = float(pops[-2:].sum())
        if guard > 1e-6:
            raise TruncationError(
                f"guard band occupied (weight {guard:.3e} in top two Fock levels); increase n_max"
            )
        durations[k] = t_cycle
        success[k] = prob
        occupations[k] = state.mean_occupation()
        fidelities[k] = state.ground_fidelity()
        cumulative[k] = running

    return ProtocolRecord(
        durations=durations,
        success_probs=success,
        mean_occupations=occupations,
        ground_fidelities=fidelities,
        cumulative_success=cumulative,
        total_time=float(durations.sum()),
        final_state=state,
    )


@dataclass(frozen=True)
class SidebandResult:
    """Closed-form sideband-cooling figures of merit."""

    occupation: float
    cooling_rate: float
    heating_rate: float
    resolved_sideband: bool


def sideband_occupation(
    n_bar: float, kappa: float, gamma: float, g: float, omega_m: float
) -> SidebandResult:
    """Final occupation ``n_bar kappa gamma / (4 g^2) + (kappa / (4 omega_m))^2``.

    Also reports the cooling rate ``g^2 / (kappa / 2)`` against the thermal
    heating rate ``gamma n_bar / 2``, and whether the resolved-sideband
    condition ``kappa < omega_m`` holds.
    """
    if n_bar < 0.0:
        raise DomainError("n_bar must satisfy n_bar >= 0")
    for name, value in (("kappa", kappa), ("gamma", gamma), ("g", g), ("omega_m", omega_m)):
        if not value > 0.0:
            raise DomainError(f"{name} must be strictly positive")
    occupation = n_bar * kappa * gamma / (4.0 * g * g) + (kappa / (4.0 * omega_m)) ** 2
    return SidebandResult(
        occupation=occupation,
        cooling_rate=g * g / (0.5 * kappa),
        heating_rate=0.5 * gamma * n_bar,
        resolved_sideband=kappa < omega_m,
    )


def feedback_temperature(Gamma: float, delta_Gamma: float, T: float) -> float:
    """Centre-of-mass temperature ``Gamma / (Gamma + delta_Gamma) * T`` under
    parametric feedback with extra damping ``delta_Gamma``."""
    if not Gamma > 0.0:
        raise DomainError("Gamma must satisfy Gamma > 0")
    if delta_Gamma < 0.0:
        raise DomainError("delta_Gamma must satisfy delta_Gamma >= 0")
    if T < 0.0:
        raise DomainError("T must satisfy T >= 0")
    return Gamma / (Gamma + delta_Gamma) * T
