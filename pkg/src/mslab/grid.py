"""Periodic-box spectral grid, fields, transforms and norm evaluators.

The continuum R^3 is replaced by the cube [-L, L)^3 with n points per axis.
Fourier transforms use the unitary continuum convention

    fhat(k) = (2 pi)^(-3/2) * integral f(x) exp(-i k.x) dx

discretized on the lattice k = (pi/L) * m, m in [-n/2, n/2).  With the volume
elements dV = (2L/n)^3 and dk = (pi/L)^3 the discrete L2 norms in physical and
Fourier representation coincide (Plancherel holds to rounding error).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

PHYS = "phys"
FOUR = "four"

_TWO_PI_32 = (2.0 * np.pi) ** 1.5


class RepresentationError(ValueError):
    """Field is in the wrong representation for the requested operation."""


class MultiplierSingularityError(ValueError):
    """A Fourier multiplier is non-finite at a live wavenumber."""


class BoundaryMassWarning(UserWarning):
    """Too much of the field's mass sits near the box boundary for a
    weighted norm to be trusted."""


@dataclass(frozen=True)
class SpectralGrid:
    """Cubic periodic grid with precomputed wavenumber arrays.

    Parameters
    ----------
    n : points per axis, even, >= 8
    box_half_length : L; physical coordinates span [-L, L)^3
    """

    n: int
    box_half_length: float

    def __post_init__(self):
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError("grid needs an even n >= 8")
        if self.box_half_length <= 0:
            raise ValueError("box_half_length must be positive")

    # -- cached geometry -------------------------------------------------
    @property
    def dx(self):
        return 2.0 * self.box_half_length / self.n

    @property
    def dV(self):
        return self.dx**3

    @property
    def dk(self):
        return (np.pi / self.box_half_length) ** 3

    @property
    def x1(self):
        """Per-axis physical coordinates, centered: -L + i*dx."""
        return -self.box_half_length + self.dx * np.arange(self.n)

    @property
    def k1(self):
        """Per-axis angular wavenumbers pi*m/L in FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    @property
    def k_min(self):
        return np.pi / self.box_half_length

    @property
    def k_nyquist(self):
        return np.pi / self.dx

    @property
    def k_cut(self):
        """Dealiasing cutoff of the 2/3 rule (per axis)."""
        return (2.0 / 3.0) * self.k_nyquist

    def coords(self):
        """Broadcastable (X, Y, Z) physical coordinate arrays."""
        x = self.x1
        return (
            x[:, None, None],
            x[None, :, None],
            x[None, None, :],
        )

    def wavenumbers(self):
        """Broadcastable (KX, KY, KZ) wavenumber arrays in FFT ordering."""
        k = self.k1
        return (
            k[:, None, None],
            k[None, :, None],
            k[None, None, :],
        )

    @property
    def k_sq(self):
        kx, ky, kz = self.wavenumbers()
        return kx**2 + ky**2 + kz**2

    @property
    def k_mod(self):
        return np.sqrt(self.k_sq)

    @property
    def r_sq(self):
        X, Y, Z = self.coords()
        return X**2 + Y**2 + Z**2

    @property
    def dealias_mask(self):
        """Boolean cube mask keeping |k_i| <= k_cut on every axis."""
        keep1 = np.abs(self.k1) <= self.k_cut + 1e-12
        return (
            keep1[:, None, None]
            & keep1[None, :, None]
            & keep1[None, None, :]
        )

    # -- transform phases ------------------------------------------------
    @property
    def _center_phase(self):
        """Per-axis phase exp(+i k L) aligning the DFT with centered x."""
        return np.exp(1j * self.k1 * self.box_half_length)

    def zeros(self):
        return np.zeros((self.n, self.n, self.n), dtype=np.complex128)


@dataclass(frozen=True)
class ScalarField:
    """Complex 3D grid function tagged with its representation."""

    grid: SpectralGrid
    values: np.ndarray
    space: str = PHYS

    def __post_init__(self):
        n = self.grid.n
        if self.values.shape != (n, n, n):
            raise ValueError("field shape does not match grid")

    def with_values(self, values, space=None):
        return replace(self, values=values, space=space or self.space)


@dataclass(frozen=True)
class VectorField:
    """Triple of grid functions sharing one grid and representation.

    Stored as one array of shape (3, n, n, n).
    """

    grid: SpectralGrid
    values: np.ndarray
    space: str = PHYS

    def __post_init__(self):
        n = self.grid.n
        if self.values.shape != (3, n, n, n):
            raise ValueError("vector field shape does not match grid")

    def component(self, i):
        return ScalarField(self.grid, self.values[i], self.space)

    def with_values(self, values, space=None):
        return replace(self, values=values, space=space or self.space)


Field = ScalarField | VectorField


def _fft(grid, a):
    return np.fft.fftn(a, axes=(-3, -2, -1))


def _ifft(grid, a):
    return np.fft.ifftn(a, axes=(-3, -2, -1))


def _phase3(grid):
    p = grid._center_phase
    return p[:, None, None] * p[None, :, None] * p[None, None, :]


def raw_forward(grid, a):
    """Unitary forward transform of a bare array (any leading axes)."""
    scale = grid.dV / _TWO_PI_32
    return _fft(grid, a) * (_phase3(grid) * scale)


def raw_inverse(grid, a):
    scale = _TWO_PI_32 / grid.dV
    return _ifft(grid, a / _phase3(grid)) * scale


def forward_transform(f: Field) -> Field:
    """Physical -> Fourier with unitary normalization (Plancherel)."""
    if f.space != PHYS:
        raise RepresentationError("forward_transform expects a physical-space field")
    return f.with_values(raw_forward(f.grid, f.values), space=FOUR)


def inverse_transform(f: Field) -> Field:
    if f.space != FOUR:
        raise RepresentationError("inverse_transform expects a Fourier-space field")
    return f.with_values(raw_inverse(f.grid, f.values), space=PHYS)


def to_four(f: Field) -> Field:
    return f if f.space == FOUR else forward_transform(f)


def to_phys(f: Field) -> Field:
    return f if f.space == PHYS else inverse_transform(f)


# ---------------------------------------------------------------------------
# multipliers


def apply_multiplier(f: Field, m, zero_mode=None) -> Field:
    """Apply a radial Fourier multiplier m(|k|).

    m is a vectorized callable of the wavenumber modulus.  The k = 0 value is
    taken from `zero_mode` when given (the standard convention for negative
    powers of omega is zero_mode=0); otherwise m(0) must be finite.
    """
    g = to_four(f)
    grid = f.grid
    km = grid.k_mod
    if zero_mode is not None:
        km = km.copy()
        km.flat[0] = 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        mult = np.asarray(m(km), dtype=np.complex128)
    if zero_mode is not None:
        mult.flat[0] = zero_mode
    if not np.all(np.isfinite(mult)):
        raise MultiplierSingularityError("multiplier not finite at a live wavenumber")
    out = g.values * mult
    res = g.with_values(out, space=FOUR)
    return res if f.space == FOUR else inverse_transform(res)


def dealias(f: Field) -> Field:
    """Zero the top third of frequencies (2/3 rule)."""
    g = to_four(f)
    res = g.with_values(g.values * f.grid.dealias_mask, space=FOUR)
    return res if f.space == FOUR else inverse_transform(res)


def gradient(f: ScalarField) -> VectorField:
    g = to_four(f)
    kx, ky, kz = f.grid.wavenumbers()
    vals = np.stack([1j * kx * g.values, 1j * ky * g.values, 1j * kz * g.values])
    res = VectorField(f.grid, vals, FOUR)
    return res if f.space == FOUR else inverse_transform(res)


def divergence(v: VectorField) -> ScalarField:
    g = to_four(v)
    kx, ky, kz = v.grid.wavenumbers()
    vals = 1j * (kx * g.values[0] + ky * g.values[1] + kz * g.values[2])
    res = ScalarField(v.grid, vals, FOUR)
    return res if v.space == FOUR else inverse_transform(res)


def laplacian(f: Field) -> Field:
    return apply_multiplier(f, lambda km: -(km**2))


# ---------------------------------------------------------------------------
# pointwise algebra (dealiased-product policy: multiply pointwise in physical
# space, dealias once per additive term)


def multiply(f: Field, g: Field, out_dealias=True):
    a = to_phys(f)
    b = to_phys(g)
    vals = a.values * b.values
    if isinstance(f, VectorField) and isinstance(g, VectorField):
        res: Field = VectorField(f.grid, vals, PHYS)
    elif isinstance(f, VectorField) or isinstance(g, VectorField):
        res = VectorField(f.grid, np.broadcast_to(vals, (3,) + vals.shape[-3:]).copy(), PHYS)
    else:
        res = ScalarField(f.grid, vals, PHYS)
    return dealias(res) if out_dealias else res


# ---------------------------------------------------------------------------
# norms


def l2_norm(f: Field) -> float:
    if f.space == PHYS:
        return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * f.grid.dV))
    return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * f.grid.dk))


def linf_norm(f: Field) -> float:
    g = to_phys(f)
    if isinstance(g, VectorField):
        return float(np.max(np.sqrt(np.sum(np.abs(g.values) ** 2, axis=0))))
    return float(np.max(np.abs(g.values)))


def lr_norm(f: Field, r) -> float:
    """Discrete L^r norm; r=inf allowed."""
    if np.isinf(r):
        return linf_norm(f)
    g = to_phys(f)
    a = np.abs(g.values)
    if isinstance(g, VectorField):
        a = np.sqrt(np.sum(a**2, axis=0))
    return float((np.sum(a**r) * f.grid.dV) ** (1.0 / r))


def inner(f: Field, g: Field) -> complex:
    a = to_phys(f)
    b = to_phys(g)
    return complex(np.sum(np.conj(a.values) * b.values) * f.grid.dV)


def sobolev_norm(f: Field, k, homogeneous=False) -> float:
    """|| <omega>^k f ||_2, or || omega^k f ||_2 with the zero mode dropped."""
    if homogeneous:
        g = apply_multiplier(to_four(f), lambda km: km ** float(k), zero_mode=0.0)
    else:
        g = apply_multiplier(to_four(f), lambda km: (1.0 + km**2) ** (0.5 * k))
    return l2_norm(g)


def hk_norm(f: Field, k) -> float:
    return sobolev_norm(f, k, homogeneous=False)


def boundary_mass_fraction(f: Field) -> float:
    """Fraction of |f|^2 mass in the outer 10% shell (max-norm sense)."""
    g = to_phys(f)
    grid = f.grid
    x = np.abs(grid.x1)
    outer1 = x > 0.9 * grid.box_half_length
    outer = (
        outer1[:, None, None] | outer1[None, :, None] | outer1[None, None, :]
    )
    dens = np.abs(g.values) ** 2
    if isinstance(g, VectorField):
        dens = np.sum(dens, axis=0)
    total = float(np.sum(dens))
    if total == 0.0:
        return 0.0
    return float(np.sum(dens[outer]) / total)


BOUNDARY_MASS_THRESHOLD = 1e-3


def weighted_norm(f: Field, ell=1, k=0, weight="angle", check_boundary=True) -> float:
    """|| w(x)^ell * omega^k f ||_2 with w = <x> ("angle") or |x| ("plain").

    Warns (BoundaryMassWarning) when the field carries significant mass near
    the box boundary, where the centered weight is unreliable.
    """
    if ell not in (0, 1):
        raise ValueError("ell must be 0 or 1")
    g = to_phys(f) if k == 0 else to_phys(apply_multiplier(f, lambda km: km ** float(k), zero_mode=0.0))
    if ell == 0:
        return l2_norm(g)
    if check_boundary:
        frac = boundary_mass_fraction(g)
        if frac > BOUNDARY_MASS_THRESHOLD:
            warnings.warn(
                f"boundary mass fraction {frac:.2e} exceeds "
                f"{BOUNDARY_MASS_THRESHOLD:.0e}; weighted norm may be unreliable",
                BoundaryMassWarning,
                stacklevel=2,
            )
    grid = f.grid
    if weight == "angle":
        w = np.sqrt(1.0 + grid.r_sq)
    elif weight == "plain":
        w = np.sqrt(grid.r_sq)
    else:
        raise ValueError("weight must be 'angle' or 'plain'")
    return l2_norm(g.with_values(g.values * w))


def x_weight(f: Field, kind="angle") -> Field:
    """Pointwise <x> f or |x| f (physical space)."""
    g = to_phys(f)
    w = np.sqrt(1.0 + g.grid.r_sq) if kind == "angle" else np.sqrt(g.grid.r_sq)
    return g.with_values(g.values * w)


# ---------------------------------------------------------------------------
# off-lattice spectral evaluation


def _axis_contract(a, E, axis):
    """Contract axis `axis` (negative, among last three) of a with E[m, n]."""
    moved = np.moveaxis(a, axis, -1)
    res = moved @ E.T
    return np.moveaxis(res, -1, axis)


def spectrum_at(grid, a, kax):
    """Semi-discrete Fourier transform of physical samples at arbitrary
    per-axis frequency lists.

    a        : array (..., n, n, n) of physical samples
    kax      : tuple of three 1-D frequency arrays (kappa_x, kappa_y, kappa_z)
    returns  : (..., m1, m2, m3) values of
               (2 pi)^(-3/2) dV sum_x a(x) exp(-i kappa . x)
    """
    out = np.asarray(a, dtype=np.complex128)
    x = grid.x1
    for i, kap in enumerate(kax):
        E = np.exp(-1j * np.outer(kap, x))
        out = _axis_contract(out, E, i - 3)
    return out * (grid.dV / _TWO_PI_32)


def evaluate_at(grid, a, yax):
    """Evaluate the trigonometric interpolant of physical samples at the
    tensor grid given by per-axis coordinate lists (periodic evaluation).

    a   : (..., n, n, n) samples
    yax : tuple of three 1-D coordinate arrays
    """
    F = _fft(grid, np.asarray(a, dtype=np.complex128)) / grid.n**3
    k = grid.k1
    x0 = -grid.box_half_length
    out = F
    for i, y in enumerate(yax):
        E = np.exp(1j * np.outer(y - x0, k))
        out = _axis_contract(out, E, i - 3)
    return out


def dilate(f: Field, s) -> Field:
    """D0(s)-type resampling f(x/s) by trigonometric interpolation.

    For s >= 1 every target point x/s stays inside the box; for s < 1 the
    evaluation wraps periodically, which is benign for decaying fields.
    """
    g = to_phys(f)
    y = g.grid.x1 / s
    vals = evaluate_at(g.grid, g.values, (y, y, y))
    return g.with_values(vals, space=PHYS)
