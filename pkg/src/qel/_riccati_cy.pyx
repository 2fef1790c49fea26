# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the Gaussian integrators.

Same contracts as :mod:`qel._riccati_py`; selected at import time by
:mod:`qel._backend` when available.
"""

import numpy as np


cdef void _riccati_rhs(double[:, ::1] A, double[:, ::1] D, double[:, ::1] C,
                       double[:, ::1] G, double[:, ::1] s,
                       double[:, ::1] left, double[:, ::1] right,
                       double[:, ::1] out) noexcept nogil:
    # out = A s + s A^T + D - (s C^T + G^T)(C s + G)
    cdef Py_ssize_t d = A.shape[0]
    cdef Py_ssize_t m = C.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double acc
    for i in range(d):
        for j in range(m):
            acc = G[j, i]
            for k in range(d):
                acc += s[i, k] * C[j, k]
            left[i, j] = acc
    for i in range(m):
        for j in range(d):
            acc = G[i, j]
            for k in range(d):
                acc += C[i, k] * s[k, j]
            right[i, j] = acc
    for i in range(d):
        for j in range(d):
            acc = D[i, j]
            for k in range(d):
                acc += A[i, k] * s[k, j] + s[i, k] * A[j, k]
            for k in range(m):
                acc -= left[i, k] * right[k, j]
            out[i, j] = acc


def riccati_rk4_path(double[:, ::1] A, double[:, ::1] D, double[:, ::1] C,
                     double[:, ::1] G, double[:, ::1] sigma0,
                     double[::1] dts, Py_ssize_t n_sub):
    cdef Py_ssize_t d = A.shape[0]
    cdef Py_ssize_t m = C.shape[0]
    cdef Py_ssize_t n_steps = dts.shape[0]
    out_arr = np.empty((n_steps + 1, d, d))
    cdef double[:, :, ::1] out = out_arr

    sigma_arr = np.empty((d, d))
    cdef double[:, ::1] sigma = sigma_arr
    cdef double[:, ::1] k1 = np.empty((d, d))
    cdef double[:, ::1] k2 = np.empty((d, d))
    cdef double[:, ::1] k3 = np.empty((d, d))
    cdef double[:, ::1] k4 = np.empty((d, d))
    cdef double[:, ::1] stage = np.empty((d, d))
    cdef double[:, ::1] left = np.empty((d, max(m, 1)))
    cdef double[:, ::1] right = np.empty((max(m, 1), d))

    cdef Py_ssize_t step, sub, i, j
    cdef double h, tmp

    with nogil:
        for i in range(d):
            for j in range(d):
                sigma[i, j] = sigma0[i, j]
                out[0, i, j] = sigma0[i, j]
        for step in range(n_steps):
            h = dts[step] / n_sub
            for sub in range(n_sub):
                _riccati_rhs(A, D, C, G, sigma, left, right, k1)
                for i in range(d):
                    for j in range(d):
                        stage[i, j] = sigma[i, j] + (0.5 * h) * k1[i, j]
                _riccati_rhs(A, D, C, G, stage, left, right, k2)
                for i in range(d):
                    for j in range(d):
                        stage[i, j] = sigma[i, j] + (0.5 * h) * k2[i, j]
                _riccati_rhs(A, D, C, G, stage, left, right, k3)
                for i in range(d):
                    for j in range(d):
                        stage[i, j] = sigma[i, j] + h * k3[i, j]
                _riccati_rhs(A, D, C, G, stage, left, right, k4)
                for i in range(d):
                    for j in range(d):
                        sigma[i, j] = sigma[i, j] + (h / 6.0) * (
                            k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
                # symmetrize the completed substep
                for i in range(d):
                    for j in range(i + 1, d):
                        tmp = 0.5 * (sigma[i, j] + sigma[j, i])
                        sigma[i, j] = tmp
                        sigma[j, i] = tmp
            for i in range(d):
                for j in range(d):
                    out[step + 1, i, j] = sigma[i, j]
    return out_arr


def mean_em_paths(double[:, ::1] A, double[::1] b, double[:, :, ::1] gains,
                  double[:, ::1] x0, double[::1] dts, double[:, :, ::1] dW):
    cdef Py_ssize_t n_traj = dW.shape[0]
    cdef Py_ssize_t n_steps = dW.shape[1]
    cdef Py_ssize_t m = dW.shape[2]
    cdef Py_ssize_t d = A.shape[0]
    out_arr = np.empty((n_traj, n_steps + 1, d))
    cdef double[:, :, ::1] out = out_arr

    cdef double[::1] x = np.empty(d)
    cdef double[::1] xn = np.empty(d)
    cdef Py_ssize_t traj, step, i, k
    cdef double acc

    with nogil:
        for traj in range(n_traj):
            for i in range(d):
                x[i] = x0[traj, i]
                out[traj, 0, i] = x[i]
            for step in range(n_steps):
                for i in range(d):
                    acc = b[i]
                    for k in range(d):
                        acc += A[i, k] * x[k]
                    xn[i] = x[i] + dts[step] * acc
                    for k in range(m):
                        xn[i] += gains[step, i, k] * dW[traj, step, k]
                for i in range(d):
                    x[i] = xn[i]
                    out[traj, step + 1, i] = x[i]
    return out_arr
