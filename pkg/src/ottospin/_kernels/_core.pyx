# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Cython slice-product kernel: sequential accumulation of 2x2 slice unitaries.

Same contract as ``_fallback.slice_product``; kept as a single tight C loop so
no intermediate (n, 2, 2) array is ever materialized.
"""

from libc.math cimport cos, sin, M_PI

import numpy as np


def slice_product(
    double nu_start_khz,
    double nu_end_khz,
    double tau_us,
    long n_steps,
    bint compression,
):
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    if tau_us <= 0.0:
        raise ValueError(f"tau_us must be positive, got {tau_us}")

    cdef double dt = tau_us / n_steps
    cdef double sign = -1.0 if compression else 1.0
    cdef double t_mid, s_arg, nu, phi, theta, cth, sth, cph, sph
    cdef double complex u00 = 1.0, u01 = 0.0, u10 = 0.0, u11 = 1.0
    cdef double complex m01, m10, n00, n01, n10, n11
    cdef long k

    for k in range(n_steps):
        t_mid = (k + 0.5) * dt
        s_arg = tau_us - t_mid if compression else t_mid
        nu = nu_start_khz + (nu_end_khz - nu_start_khz) * (s_arg / tau_us)
        phi = 0.5 * M_PI * s_arg / tau_us
        theta = M_PI * nu * dt * 1e-3
        cth = cos(theta)
        sth = sign * sin(theta)
        cph = cos(phi)
        sph = sin(phi)
        # 1j * sth * e^{-i phi} and 1j * sth * e^{+i phi}
        m01 = sth * (sph + 1j * cph)
        m10 = sth * (-sph + 1j * cph)
        # accumulate slice @ running product
        n00 = cth * u00 + m01 * u10
        n01 = cth * u01 + m01 * u11
        n10 = m10 * u00 + cth * u10
        n11 = m10 * u01 + cth * u11
        u00, u01, u10, u11 = n00, n01, n10, n11

    return np.array([[u00, u01], [u10, u11]], dtype=np.complex128)
