"""Right-hand sides of the truncated coefficient ODE systems.

Projecting the equation onto the bandwidth-N space turns it into the ODE
system for the coefficients

    d/dt u_hat_k = Lambda_k u_hat_k - i*kappa_k * fhat_k(u),

where Lambda_k = i*kappa_k*symbol(kappa_k) collects the dispersive part and
fhat(u) holds the exact truncated coefficients of f(u), computed with a
dealiased product so the semidiscrete system is the Galerkin one and its
invariants are conserved exactly in time.

The linearized companion system freezes the advection coefficient at a
reference solution u:

    d/dt w_hat_k = Lambda_k w_hat_k - P_N[f'(u) w_x]_hat_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ShapeError
from .model import ModelParams, symbol_l
from .spectral import (
    SpectralField,
    analyze_coeffs,
    dealiased_power,
    hermitian_part,
    next_fast_len,
    synth_values,
)


@dataclass(frozen=True)
class LinearMultipliers:
    """Per-mode dispersive factors Lambda_k = i*kappa_k*symbol(kappa_k)."""

    n_modes: int
    lam: np.ndarray  # complex128, length 2N+1, purely imaginary, Lambda_0 = 0

    def __post_init__(self):
        self.lam.setflags(write=False)


def linear_multipliers(params: ModelParams, n_modes: int) -> LinearMultipliers:
    kappa = np.arange(-n_modes, n_modes + 1) / params.domain_scale
    lam = 1j * kappa * symbol_l(params, kappa)
    return LinearMultipliers(n_modes, lam)


def nonlinear_term(
    params: ModelParams, n_modes: int
) -> Callable[[np.ndarray], np.ndarray]:
    """Array-level closure for the flux term -i*kappa*P_N[f(u)]_hat.

    Returns a function of the coefficient vector, with the padded-grid plan
    precomputed once; used in the integrator's inner loop.
    """
    p = params.q + 1
    m = next_fast_len((p + 1) * n_modes + 1)
    factor = -1j * np.arange(-n_modes, n_modes + 1) / params.domain_scale

    def term(coeffs: np.ndarray) -> np.ndarray:
        vals = synth_values(coeffs, n_modes, m)
        fhat = analyze_coeffs(vals**p, n_modes) / p
        return factor * fhat

    return term


def rhs(params: ModelParams, u: SpectralField) -> SpectralField:
    """Time derivative of the coefficient vector for the full nonlinear system.

    The k = 0 component vanishes identically (factor i*kappa at kappa = 0),
    which is the discrete mechanism behind mass conservation.
    """
    mult = linear_multipliers(params, u.n_modes)
    nl = nonlinear_term(params, u.n_modes)
    return u.with_coeffs(mult.lam * u.coeffs + nl(u.coeffs))


def frozen_nonlinear_term(
    params: ModelParams, n_w: int, n_u: int
) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Array-level closure for -P_N[f'(u_frozen) w_x]_hat.

    ``u_frozen`` may carry a larger bandwidth than w (the linearized study
    freezes a finer reference solution).  The pointwise product of
    f'(u) = u^q (bandwidth q*n_u) with w_x (bandwidth n_w) is formed on a
    grid wide enough that its truncation to |k| <= n_w is alias-free.
    """
    m = next_fast_len(max(params.q * n_u + 2 * n_w, 2 * n_u, 2 * n_w) + 1)
    ikappa_w = 1j * np.arange(-n_w, n_w + 1) / params.domain_scale

    def term(u_coeffs: np.ndarray, w_coeffs: np.ndarray) -> np.ndarray:
        fprime_vals = synth_values(u_coeffs, n_u, m) ** params.q
        wx_vals = synth_values(ikappa_w * w_coeffs, n_w, m)
        return -analyze_coeffs(fprime_vals * wx_vals, n_w)

    return term


def linearized_rhs(
    params: ModelParams, w: SpectralField, u_frozen: SpectralField
) -> SpectralField:
    """Time derivative of w for the system with advection frozen at u_frozen."""
    if w.domain_scale != u_frozen.domain_scale:
        raise ShapeError(
            f"w and u_frozen must share the domain scale: "
            f"{w.domain_scale} vs {u_frozen.domain_scale}"
        )
    mult = linear_multipliers(params, w.n_modes)
    term = frozen_nonlinear_term(params, w.n_modes, u_frozen.n_modes)
    return w.with_coeffs(mult.lam * w.coeffs + term(u_frozen.coeffs, w.coeffs))


def galerkin_flux_coeffs(params: ModelParams, u: SpectralField) -> np.ndarray:
    """Exact truncated coefficients of f(u); convenience for diagnostics."""
    return hermitian_part(dealiased_power(u, params.q + 1).coeffs / (params.q + 1))
