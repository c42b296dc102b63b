"""Periodic grids, discrete Fourier transforms, and Fourier multipliers.

Conventions used throughout the package:

- the spatial domain is a torus of length ``L`` sampled at ``n`` evenly
  spaced points ``x_j = j L / n``;
- frequencies are measured in cycles per unit length, ``xi_m = m / L``
  for integer modes ``m`` in ``{-n/2 + 1, ..., n/2}``, matching the
  transform pair ``fhat(xi) = int e^{-2 pi i x xi} f(x) dx``;
- the forward transform carries the quadrature weight ``L / n`` so that
  coefficients approximate the continuum transform, and every norm below
  is the corresponding Riemann sum (``dx = L/n`` in space, ``dxi = 1/L``
  in frequency).

The Nyquist slot ``m = n/2`` is ambiguous between ``+n/2`` and ``-n/2``;
multipliers are applied there as the average of the symbol at both
frequencies.  Odd symbols (Hilbert transform, odd derivatives) therefore
annihilate the Nyquist mode and even symbols carry it unchanged, which
keeps real fields real.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np

from .errors import GridMismatchError, MultiplierDomainError

SymbolLike = Union[Callable[[np.ndarray], np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform periodic grid with ``n`` samples on a torus of length ``length``."""

    n: int
    length: float

    def __post_init__(self):
        if self.n <= 0 or self.n % 2 != 0:
            raise ValueError(f"sample count must be a positive even integer, got {self.n}")
        if not (self.length > 0):
            raise ValueError(f"domain length must be positive, got {self.length}")

    @cached_property
    def x(self) -> np.ndarray:
        """Sample points ``x_j = j L / n``."""
        return np.arange(self.n) * (self.length / self.n)

    @cached_property
    def modes(self) -> np.ndarray:
        """Integer mode numbers in FFT storage order, Nyquist stored as ``+n/2``."""
        k = np.arange(self.n)
        return np.where(k <= self.n // 2, k, k - self.n)

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Frequency lattice ``xi_m = m / L`` in cycles per unit length."""
        return self.modes / self.length

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def nyquist_slot(self) -> int:
        return self.n // 2

    def slot_of_mode(self, m: int) -> int:
        """Storage index of mode ``m``."""
        half = self.n // 2
        if not (-half < m <= half):
            raise ValueError(f"mode {m} outside lattice for n={self.n}")
        return m % self.n

    def __repr__(self):  # compact; the defaults are noisy for cached props
        return f"PeriodicGrid(n={self.n}, length={self.length})"


def _check_same_grid(a, b):
    if a.grid != b.grid:
        raise GridMismatchError(f"operands on different grids: {a.grid} vs {b.grid}")


@dataclass(frozen=True)
class Field:
    """Function samples on a periodic grid.

    Samples are always stored as complex128; ``tag`` records whether the
    field is a real-valued one (imaginary parts are then roundoff dust).
    """

    grid: PeriodicGrid
    samples: np.ndarray
    tag: str = "complex"

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.shape != (self.grid.n,):
            raise GridMismatchError(
                f"expected {self.grid.n} samples, got shape {samples.shape}"
            )
        if self.tag not in ("real", "complex"):
            raise ValueError(f"tag must be 'real' or 'complex', got {self.tag!r}")
        if self.tag == "real":
            scale = float(np.max(np.abs(samples))) if samples.size else 0.0
            dust = float(np.max(np.abs(samples.imag))) if samples.size else 0.0
            if scale > 0 and dust > 1e-12 * scale:
                raise ValueError(
                    f"real-tagged field has imaginary contamination {dust:.3e} "
                    f"(max magnitude {scale:.3e})"
                )
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def values(self) -> np.ndarray:
        """Real sample values; only meaningful for real-tagged fields."""
        return self.samples.real

    def __add__(self, other: "Field") -> "Field":
        _check_same_grid(self, other)
        tag = "real" if self.tag == other.tag == "real" else "complex"
        return Field(self.grid, self.samples + other.samples, tag)

    def __sub__(self, other: "Field") -> "Field":
        _check_same_grid(self, other)
        tag = "real" if self.tag == other.tag == "real" else "complex"
        return Field(self.grid, self.samples - other.samples, tag)

    def __neg__(self) -> "Field":
        return Field(self.grid, -self.samples, self.tag)

    def __mul__(self, other):
        if isinstance(other, Field):
            _check_same_grid(self, other)
            tag = "real" if self.tag == other.tag == "real" else "complex"
            return Field(self.grid, self.samples * other.samples, tag)
        z = complex(other)
        tag = "real" if self.tag == "real" and z.imag == 0.0 else "complex"
        return Field(self.grid, self.samples * z, tag)

    __rmul__ = __mul__

    def conj(self) -> "Field":
        return Field(self.grid, np.conj(self.samples), self.tag)


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients ``coeffs[slot_of_mode(m)] ~ fhat(xi_m)``."""

    grid: PeriodicGrid
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (self.grid.n,):
            raise GridMismatchError(
                f"expected {self.grid.n} coefficients, got shape {coeffs.shape}"
            )
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def coeff(self, m: int) -> complex:
        """Coefficient of mode ``m``."""
        return complex(self.coeffs[self.grid.slot_of_mode(m)])


def real_field(grid: PeriodicGrid, values) -> Field:
    """Build a real-tagged field from real sample values."""
    values = np.asarray(values, dtype=float)
    return Field(grid, values.astype(np.complex128), "real")


def complex_field(grid: PeriodicGrid, values) -> Field:
    return Field(grid, np.asarray(values, dtype=np.complex128), "complex")


def zero_field(grid: PeriodicGrid) -> Field:
    return Field(grid, np.zeros(grid.n, dtype=np.complex128), "real")


def to_spectrum(f: Field) -> Spectrum:
    """Forward DFT with quadrature weight: ``(L/n) sum_j f_j e^{-2 pi i j m / n}``."""
    coeffs = np.fft.fft(f.samples) * (f.grid.length / f.grid.n)
    return Spectrum(f.grid, coeffs)


def to_field(s: Spectrum, tag: str | None = None) -> Field:
    """Inverse of :func:`to_spectrum`; exact round trip up to roundoff."""
    samples = np.fft.ifft(s.coeffs) * (s.grid.n / s.grid.length)
    if tag is None:
        tag = "real" if _is_hermitian(s.grid, s.coeffs, tol=1e-12) else "complex"
    if tag == "real":
        # the true result is real; the imaginary part is transform dust
        samples = samples.real.astype(np.complex128)
    return Field(s.grid, samples, tag)


def _mirror_perm(grid: PeriodicGrid) -> np.ndarray:
    """Index permutation mapping the slot of mode ``m`` to the slot of ``-m``."""
    idx = (-np.arange(grid.n)) % grid.n
    idx[grid.nyquist_slot] = grid.nyquist_slot
    return idx


def _is_hermitian(grid: PeriodicGrid, values: np.ndarray, tol: float = 0.0) -> bool:
    mirrored = np.conj(values[_mirror_perm(grid)])
    if tol == 0.0:
        return bool(np.array_equal(values, mirrored))
    scale = float(np.max(np.abs(values))) or 1.0
    return bool(np.max(np.abs(values - mirrored)) <= tol * scale)


def _symbol_values(grid: PeriodicGrid, symbol: SymbolLike) -> np.ndarray:
    """Evaluate a symbol on the frequency lattice, averaging over +-Nyquist."""
    if callable(symbol):
        vals = np.asarray(symbol(grid.frequencies), dtype=np.complex128)
        if vals.shape == ():
            vals = np.full(grid.n, complex(vals), dtype=np.complex128)
        xi_nyq = grid.frequencies[grid.nyquist_slot]
        plus = complex(np.asarray(symbol(np.array([xi_nyq])), dtype=np.complex128)[0])
        minus = complex(np.asarray(symbol(np.array([-xi_nyq])), dtype=np.complex128)[0])
        vals = vals.copy()
        vals[grid.nyquist_slot] = 0.5 * (plus + minus)
    else:
        vals = np.asarray(symbol, dtype=np.complex128)
        if vals.shape != (grid.n,):
            raise MultiplierDomainError(
                f"precomputed symbol has shape {vals.shape}, expected ({grid.n},)"
            )
    if not np.all(np.isfinite(vals)):
        bad = int(np.flatnonzero(~np.isfinite(vals))[0])
        m = int(grid.modes[bad])
        raise MultiplierDomainError(
            f"symbol is not finite at mode {m} (xi={grid.frequencies[bad]:g})"
        )
    return vals


def apply_multiplier(s: Spectrum, symbol: SymbolLike) -> Spectrum:
    """Multiply coefficients by ``symbol(xi_m)``, Nyquist symmetrized."""
    vals = _symbol_values(s.grid, symbol)
    return Spectrum(s.grid, s.coeffs * vals)


def field_multiplier(f: Field, symbol: SymbolLike) -> Field:
    """Apply a Fourier multiplier to a field, propagating the realness tag."""
    vals = _symbol_values(f.grid, symbol)
    coeffs = np.fft.fft(f.samples) * vals
    samples = np.fft.ifft(coeffs)
    if f.tag == "real" and _is_hermitian(f.grid, vals, tol=1e-14):
        return Field(f.grid, samples.real.astype(np.complex128), "real")
    return Field(f.grid, samples, "complex")


# ---------------------------------------------------------------------------
# the basic multiplier operators


def hilbert(f: Field) -> Field:
    """Hilbert transform, symbol ``-i sgn(xi)`` with ``sgn(0) = 0``.

    Sends cos to sin on every positive frequency, annihilates the mean
    (and the Nyquist slot), and satisfies ``H(Hf) = -(f - mean f)`` on
    Nyquist-free fields.
    """
    return field_multiplier(f, lambda xi: -1j * np.sign(xi))


def derivative(f: Field, order: int = 1) -> Field:
    """Spectral derivative, symbol ``(2 pi i xi)^order``."""
    if not (0 <= order <= 4):
        raise ValueError(f"derivative order must be in 0..4, got {order}")
    return field_multiplier(f, lambda xi: (2j * np.pi * xi) ** order)


def riesz(f: Field, sign: str) -> Field:
    """Frequency half-line projection ``P_+`` (``sign='+'``) or ``P_-``.

    The zero mode and the Nyquist slot are split half/half, the unique
    choice for which ``P_+ + P_- = Id`` and ``i H = P_+ - P_-`` hold
    exactly on the whole lattice.
    """
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    s = 1.0 if sign == "+" else -1.0
    return field_multiplier(f, lambda xi: 0.5 * (1.0 + s * np.sign(xi)))


def antiderivative(f: Field) -> Field:
    """Zero-mean spectral antiderivative; requires (and zeroes) the mean mode."""
    def symbol(xi):
        out = np.zeros_like(xi, dtype=np.complex128)
        nz = xi != 0
        out[nz] = 1.0 / (2j * np.pi * xi[nz])
        return out

    return field_multiplier(f, symbol)


def translate(f: Field, shift: float) -> Field:
    """Sample ``f(x - shift)`` via the exact phase multiplier."""
    return field_multiplier(f, lambda xi: np.exp(-2j * np.pi * xi * shift))


def reflect(f: Field) -> Field:
    """Sample ``f(-x)`` on the same grid."""
    rev = np.roll(f.samples[::-1], 1)
    return Field(f.grid, rev, f.tag)


# ---------------------------------------------------------------------------
# quadrature, inner products, norms


def integral(f: Field) -> complex:
    """Lattice Riemann sum of ``f`` over the torus."""
    return complex(np.sum(f.samples) * f.grid.dx)


def mean_value(f: Field) -> complex:
    """Average value ``(1/L) int f``."""
    return complex(np.mean(f.samples))


def inner(f: Field, g: Field) -> complex:
    """L2 pairing ``int conj(f) g dx`` as a lattice sum."""
    _check_same_grid(f, g)
    return complex(np.vdot(f.samples, g.samples) * f.grid.dx)


def l2_norm(f: Field) -> float:
    return float(np.sqrt(np.sum(np.abs(f.samples) ** 2) * f.grid.dx))


def linf_norm(f: Field) -> float:
    return float(np.max(np.abs(f.samples)))


def sobolev_norm(f: Field, s: float) -> float:
    """Inhomogeneous Sobolev norm ``(sum <xi>^{2s} |fhat|^2 dxi)^{1/2}``."""
    coeffs = np.fft.fft(f.samples) * (f.grid.length / f.grid.n)
    weights = (1.0 + f.grid.frequencies**2) ** s
    return float(np.sqrt(np.sum(weights * np.abs(coeffs) ** 2) / f.grid.length))


# ---------------------------------------------------------------------------
# spectral padding (oversampling) and truncation

def _enlarge_spectrum(s: Spectrum, n_fine: int) -> Spectrum:
    """Zero-pad to ``n_fine`` points on the same torus.

    The coarse Nyquist coefficient is split half/half onto the fine
    ``+-n/2`` slots so that real fields interpolate to real fields.
    """
    n = s.grid.n
    fine = PeriodicGrid(n_fine, s.grid.length)
    out = np.zeros(fine.n, dtype=np.complex128)
    half = n // 2
    out[:half] = s.coeffs[:half]
    out[fine.n - half + 1:] = s.coeffs[half + 1:]
    c_nyq = s.coeffs[half]
    out[half] = 0.5 * c_nyq
    out[fine.n - half] = 0.5 * c_nyq
    return Spectrum(fine, out)


def pad_spectrum(s: Spectrum, factor: int) -> Spectrum:
    """Zero-pad to a grid with ``factor * n`` points on the same torus."""
    if factor < 1 or int(factor) != factor:
        raise ValueError(f"padding factor must be a positive integer, got {factor}")
    if factor == 1:
        return Spectrum(s.grid, s.coeffs)
    return _enlarge_spectrum(s, s.grid.n * int(factor))


def truncate_spectrum(s: Spectrum, n: int) -> Spectrum:
    """Keep modes ``|m| <= n/2``, merging the fine ``+-n/2`` slots into coarse Nyquist."""
    if n % 2 != 0 or n <= 0 or n > s.grid.n:
        raise ValueError(f"target size must be an even integer <= {s.grid.n}, got {n}")
    coarse = PeriodicGrid(n, s.grid.length)
    if n == s.grid.n:
        return Spectrum(coarse, s.coeffs)
    half = n // 2
    out = np.empty(n, dtype=np.complex128)
    out[:half] = s.coeffs[:half]
    out[half + 1:] = s.coeffs[s.grid.n - half + 1:]
    out[half] = s.coeffs[half] + s.coeffs[s.grid.n - half]
    return Spectrum(coarse, out)


def pad_field(f: Field, factor: int) -> Field:
    """Band-limited interpolation of ``f`` onto a ``factor``-times finer grid."""
    return to_field(pad_spectrum(to_spectrum(f), factor), tag=f.tag)


def truncate_field(f: Field, n: int) -> Field:
    """Project onto the coarse band and resample on ``n`` points."""
    return to_field(truncate_spectrum(to_spectrum(f), n), tag=f.tag)


def resample_field(f: Field, n: int) -> Field:
    """Spectral resampling onto any even ``n`` (pad up or truncate down)."""
    if n == f.grid.n:
        return f
    if n % 2 != 0 or n <= 0:
        raise ValueError(f"target size must be a positive even integer, got {n}")
    s = to_spectrum(f)
    if n > f.grid.n:
        return to_field(_enlarge_spectrum(s, n), tag=f.tag)
    return to_field(truncate_spectrum(s, n), tag=f.tag)
