"""Truncated Fourier series: fields, transforms, dealiased products, norms.

A field of bandwidth N is the real trigonometric polynomial

    u(x) = sum_{|k| <= N} u_hat_k exp(i*kappa_k*x),   kappa_k = k/L,

on [-L*pi, L*pi].  Coefficients are stored over the full symmetric index
range k = -N..N (position k+N) and Hermitian symmetry
u_hat(-k) = conj(u_hat(k)) is enforced whenever a field is constructed, so
every ``SpectralField`` represents a real function.

Transform normalization: analysis divides by the number of samples,
synthesis does not.  Collocation grids start at the left endpoint,
x_j = -L*pi + 2*L*pi*j/M.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BandwidthError, ShapeError


@dataclass(frozen=True)
class SpectralField:
    """Real-valued element of the bandwidth-N trigonometric space."""

    n_modes: int
    domain_scale: float
    coeffs: np.ndarray  # complex128, length 2N+1, index k+N

    def __post_init__(self):
        if self.n_modes < 1:
            raise BandwidthError(f"n_modes must be >= 1, got {self.n_modes}")
        if self.domain_scale <= 0:
            raise ShapeError(f"domain_scale must be > 0, got {self.domain_scale}")
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (2 * self.n_modes + 1,):
            raise ShapeError(
                f"coefficient vector must have length 2N+1={2 * self.n_modes + 1}, "
                f"got shape {c.shape}"
            )
        object.__setattr__(self, "coeffs", hermitian_part(c))
        self.coeffs.setflags(write=False)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Integer mode indices k = -N..N."""
        return np.arange(-self.n_modes, self.n_modes + 1)

    @property
    def kappa(self) -> np.ndarray:
        """Physical wavenumbers k/L."""
        return self.wavenumbers / self.domain_scale

    def with_coeffs(self, coeffs) -> "SpectralField":
        return SpectralField(self.n_modes, self.domain_scale, coeffs)


@dataclass(frozen=True)
class PhysicalField:
    """Samples on the equispaced collocation grid x_j = -L*pi + 2*L*pi*j/M."""

    values: np.ndarray
    n_points: int
    domain_scale: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.n_points,):
            raise ShapeError(f"expected {self.n_points} samples, got shape {v.shape}")
        object.__setattr__(self, "values", v)
        self.values.setflags(write=False)

    def grid(self) -> np.ndarray:
        half = self.domain_scale * np.pi
        return -half + 2.0 * half * np.arange(self.n_points) / self.n_points


def hermitian_part(coeffs: np.ndarray) -> np.ndarray:
    """Project a full-range coefficient vector onto the Hermitian subspace."""
    c = np.asarray(coeffs, dtype=np.complex128)
    sym = 0.5 * (c + np.conj(c[::-1]))
    sym[len(c) // 2] = sym[len(c) // 2].real
    return sym


def next_fast_len(n: int) -> int:
    """Smallest 5-smooth integer >= n (keeps FFT sizes cheap)."""
    while True:
        m = n
        for p in (2, 3, 5):
            while m % p == 0:
                m //= p
        if m == 1:
            return n
        n += 1


@lru_cache(maxsize=None)
def _alternating_signs(n_modes: int) -> np.ndarray:
    """(-1)^k for k = 0..N; converts between grid phase and centered-domain phase."""
    signs = np.ones(n_modes + 1)
    signs[1::2] = -1.0
    signs.setflags(write=False)
    return signs


def synth_values(coeffs: np.ndarray, n_modes: int, n_points: int) -> np.ndarray:
    """Evaluate a Hermitian coefficient vector on the M-point grid (array level)."""
    half = np.zeros(n_points // 2 + 1, dtype=np.complex128)
    half[: n_modes + 1] = coeffs[n_modes:] * _alternating_signs(n_modes)
    return np.fft.irfft(half, n=n_points) * n_points


def analyze_coeffs(values: np.ndarray, n_modes: int) -> np.ndarray:
    """Truncated Fourier coefficients of real grid samples (array level)."""
    m = len(values)
    spec = np.fft.rfft(values)[: n_modes + 1] / m
    pos = spec * _alternating_signs(n_modes)
    pos[0] = pos[0].real
    return np.concatenate([np.conj(pos[:0:-1]), pos])


def to_physical(field: SpectralField, n_points: int | None = None) -> PhysicalField:
    """Synthesize the field on an M-point collocation grid (M >= 2N+1)."""
    n = field.n_modes
    m = 2 * n + 1 if n_points is None else n_points
    if m < 2 * n + 1:
        raise BandwidthError(f"need at least 2N+1={2 * n + 1} points, got {m}")
    return PhysicalField(synth_values(field.coeffs, n, m), m, field.domain_scale)


def to_spectral(values: PhysicalField, n_modes: int) -> SpectralField:
    """Coefficients |k| <= N of the trigonometric interpolant of the samples.

    Exact (round-trip) for samples of a bandwidth-N field with M >= 2N+1.
    For undersampled content, mode k' > N folds onto k = k' - M times
    (-1)^M, the extra sign coming from the grid's -L*pi origin; the caller
    owns the bandwidth budget.
    """
    if values.n_points < 2 * n_modes + 1:
        raise BandwidthError(
            f"need at least 2N+1={2 * n_modes + 1} points to resolve bandwidth "
            f"{n_modes}, got {values.n_points}"
        )
    return SpectralField(
        n_modes, values.domain_scale, analyze_coeffs(values.values, n_modes)
    )


def project(field: SpectralField, n_modes: int) -> SpectralField:
    """L2-orthogonal projection: truncate coefficients to |k| <= N'."""
    if n_modes > field.n_modes:
        raise BandwidthError(
            f"cannot project bandwidth {field.n_modes} up to {n_modes}; use embed"
        )
    lo = field.n_modes - n_modes
    return SpectralField(
        n_modes, field.domain_scale, field.coeffs[lo : lo + 2 * n_modes + 1]
    )


def embed(field: SpectralField, n_modes: int) -> SpectralField:
    """Zero-extend the coefficient vector to a larger bandwidth."""
    if n_modes < field.n_modes:
        raise BandwidthError(
            f"cannot embed bandwidth {field.n_modes} into {n_modes}; use project"
        )
    pad = n_modes - field.n_modes
    return SpectralField(
        n_modes, field.domain_scale, np.pad(field.coeffs, (pad, pad))
    )


def dealiased_power(field: SpectralField, p: int) -> SpectralField:
    """Exact truncated coefficients of the pointwise power u^p.

    The power of a bandwidth-N series has bandwidth p*N; synthesizing on a
    padded grid of M >= (p+1)N + 1 points keeps every alias image p*N +- M
    outside |k| <= N, so the returned coefficients carry no aliasing error
    beyond rounding.  This makes pseudospectral products coincide with the
    Galerkin ones.
    """
    if p < 1:
        raise ValueError(f"power must be >= 1, got {p}")
    if p == 1:
        return field
    n = field.n_modes
    m = next_fast_len((p + 1) * n + 1)
    vals = synth_values(field.coeffs, n, m)
    return field.with_coeffs(analyze_coeffs(vals**p, n))


def derivative(field: SpectralField, order: int = 1) -> SpectralField:
    """Spatial derivative via the (i*kappa)^order multiplier."""
    return field.with_coeffs(field.coeffs * (1j * field.kappa) ** order)


def translate(field: SpectralField, shift: float) -> SpectralField:
    """Field of u(x - shift); multiplies mode k by exp(-i*kappa_k*shift)."""
    return field.with_coeffs(field.coeffs * np.exp(-1j * field.kappa * shift))


def _check_compatible(u: SpectralField, v: SpectralField):
    if u.n_modes != v.n_modes or u.domain_scale != v.domain_scale:
        raise ShapeError(
            f"fields must share bandwidth and domain scale: "
            f"(N={u.n_modes}, L={u.domain_scale}) vs (N={v.n_modes}, L={v.domain_scale})"
        )


def l2_inner(u: SpectralField, v: SpectralField) -> float:
    """L2 inner product over the period, 2*L*pi * sum_k u_hat_k conj(v_hat_k)."""
    _check_compatible(u, v)
    s = np.sum(u.coeffs * np.conj(v.coeffs))
    return 2.0 * u.domain_scale * np.pi * float(s.real)


def l2_norm(field: SpectralField) -> float:
    s = np.sum(np.abs(field.coeffs) ** 2)
    return float(np.sqrt(2.0 * field.domain_scale * np.pi * s))


def sobolev_norm(field: SpectralField, mu: float) -> float:
    """Norm of order mu, (2*L*pi * sum (1+kappa^2)^mu |u_hat|^2)^(1/2)."""
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    w = (1.0 + field.kappa**2) ** mu
    s = np.sum(w * np.abs(field.coeffs) ** 2)
    return float(np.sqrt(2.0 * field.domain_scale * np.pi * s))


def linf_norm(field: SpectralField, oversample: int = 8) -> float:
    """Max of |u| on an oversampled grid of oversample*(2N+1) points.

    Approximate: the true maximum of a trigonometric polynomial generally
    falls between collocation points; 8x oversampling leaves a relative gap
    of order (pi/(2*oversample))^2 / 2 at a smooth peak.
    """
    if oversample < 1:
        raise ValueError(f"oversample must be >= 1, got {oversample}")
    m = oversample * (2 * field.n_modes + 1)
    return float(np.max(np.abs(synth_values(field.coeffs, field.n_modes, m))))


def peak_position(field: SpectralField, oversample: int = 8) -> float:
    """Location of the global maximum of u, refined by local parabolic fit."""
    m = oversample * (2 * field.n_modes + 1)
    vals = synth_values(field.coeffs, field.n_modes, m)
    j = int(np.argmax(vals))
    vm, v0, vp = vals[(j - 1) % m], vals[j], vals[(j + 1) % m]
    denom = vm - 2.0 * v0 + vp
    offset = 0.0 if denom == 0.0 else 0.5 * (vm - vp) / denom
    dx = 2.0 * field.domain_scale * np.pi / m
    half = field.domain_scale * np.pi
    return float(-half + (j + offset) * dx)
