"""Independent reference implementations used as test oracles.

Everything here is deliberately naive: direct convolution sums instead of
padded transforms, trapezoid quadrature instead of Parseval, extended
precision instead of contour tricks.  None of it shares code with the
library paths it checks.
"""

import numpy as np

from benj.model import ModelParams, symbol_l
from benj.spectral import SpectralField


def rand_field(n_modes, seed, domain_scale=1.0, scale=None, decay=0.0):
    """Random Hermitian field; default scale gives unit-order l2 norm."""
    rng = np.random.default_rng(seed)
    if scale is None:
        scale = 1.0 / np.sqrt(2 * n_modes + 1)
    k = np.arange(-n_modes, n_modes + 1)
    mags = scale * (1.0 + np.abs(k)) ** (-decay)
    c = mags * (rng.standard_normal(2 * n_modes + 1)
                + 1j * rng.standard_normal(2 * n_modes + 1))
    return SpectralField(n_modes, domain_scale, c)


def convolve_coeffs(a, b):
    """Full convolution of centered coefficient vectors by direct summation."""
    na, nb = (len(a) - 1) // 2, (len(b) - 1) // 2
    nc = na + nb
    out = np.zeros(2 * nc + 1, dtype=np.complex128)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out  # index k + nc, k = -(na+nb)..(na+nb)


def power_coeffs_direct(field: SpectralField, p: int):
    """Coefficients of u^p on |k| <= N via repeated direct convolution."""
    acc = field.coeffs.copy()
    for _ in range(p - 1):
        acc = convolve_coeffs(acc, field.coeffs)
    half = (len(acc) - 1) // 2
    lo = half - field.n_modes
    return acc[lo : lo + 2 * field.n_modes + 1]


def rhs_direct(params: ModelParams, field: SpectralField):
    """Coefficient time derivatives assembled without any padding tricks."""
    kappa = field.kappa
    lam = 1j * kappa * symbol_l(params, kappa)
    fhat = power_coeffs_direct(field, params.q + 1) / (params.q + 1)
    return lam * field.coeffs - 1j * kappa * fhat


def periodic_trapezoid(values, domain_scale):
    """Integral over the period of equispaced periodic samples."""
    return 2.0 * domain_scale * np.pi * float(np.mean(values))


def grid(n_points, domain_scale):
    half = domain_scale * np.pi
    return -half + 2.0 * half * np.arange(n_points) / n_points


def sample_field(field: SpectralField, n_points):
    """Evaluate the field by direct summation of the Fourier series."""
    x = grid(n_points, field.domain_scale)
    vals = np.zeros(n_points, dtype=np.complex128)
    for k, c in zip(field.wavenumbers, field.coeffs):
        vals += c * np.exp(1j * (k / field.domain_scale) * x)
    assert np.max(np.abs(vals.imag)) < 1e-12 * (1.0 + np.max(np.abs(vals.real)))
    return vals.real


def etd_weights_highprec(z):
    """Stage and update weights of the exponential scheme at working
    precision 60, per unit step (multiply by dt for the integrator's)."""
    import mpmath as mp

    with mp.workdps(60):
        zz = mp.mpc(z)
        ez, eh = mp.exp(zz), mp.exp(zz / 2)
        q = (eh - 1) / zz
        f1 = (-4 - zz + ez * (4 - 3 * zz + zz**2)) / zz**3
        f2 = (2 + zz + ez * (zz - 2)) / zz**3
        f3 = (-4 - 3 * zz - zz**2 + ez * (4 - zz)) / zz**3
        return complex(q), complex(f1), complex(f2), complex(f3)
