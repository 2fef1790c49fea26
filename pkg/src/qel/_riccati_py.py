"""Pure-numpy kernels for the Gaussian integrators.

These are the fallback implementations used when the compiled extension is
unavailable; the compiled module exposes the same two functions with
identical semantics.  Inputs are assumed validated and C-contiguous
float64 (the wrappers in :mod:`qel.gaussian` take care of that).
"""

from __future__ import annotations

import numpy as np


def riccati_rk4_path(
    A: np.ndarray,
    D: np.ndarray,
    C: np.ndarray,
    G: np.ndarray,
    sigma0: np.ndarray,
    dts: np.ndarray,
    n_sub: int,
) -> np.ndarray:
    """Fixed-step RK4 for ``sigma' = A s + s A^T + D - (s C^T + G^T)(C s + G)``.

    Returns the covariance at every grid point, shape ``(len(dts)+1, d, d)``.
    Each completed substep is symmetrized to suppress round-off drift.
    """
    At, Ct, Gt = A.T, C.T, G.T

    def rhs(s: np.ndarray) -> np.ndarray:
        left = s @ Ct + Gt
        right = C @ s + G
        return A @ s + s @ At + D - left @ right

    out = np.empty((dts.shape[0] + 1,) + sigma0.shape)
    out[0] = sigma = sigma0
    for k in range(dts.shape[0]):
        h = dts[k] / n_sub
        for _ in range(n_sub):
            k1 = rhs(sigma)
            k2 = rhs(sigma + (0.5 * h) * k1)
            k3 = rhs(sigma + (0.5 * h) * k2)
            k4 = rhs(sigma + h * k3)
            sigma = sigma + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            sigma = 0.5 * (sigma + sigma.T)
        out[k + 1] = sigma
    return out


def mean_em_paths(
    A: np.ndarray,
    b: np.ndarray,
    gains: np.ndarray,
    x0: np.ndarray,
    dts: np.ndarray,
    dW: np.ndarray,
) -> np.ndarray:
    """Euler-Maruyama for ``dx = (A x + b) dt + gain(t) dw``, vectorized over trajectories.

    Parameters
    ----------
    gains : (n_steps, d, m) array
        Noise gain ``sigma(t_k) C^T + Gamma^T`` at the left endpoint of each step.
    x0 : (n_traj, d) array
        Initial means, one row per trajectory.
    dW : (n_traj, n_steps, m) array
        Wiener increments (already scaled by ``sqrt(dt)``).

    Returns
    -------
    (n_traj, n_steps+1, d) array of mean paths.
    """
    n_traj, n_steps, _ = dW.shape
    At = A.T
    out = np.empty((n_traj, n_steps + 1, A.shape[0]))
    out[:, 0, :] = x = x0
    for k in range(n_steps):
        x = x + dts[k] * (x @ At + b) + dW[:, k, :] @ gains[k].T
        out[:, k + 1, :] = x
    return out
