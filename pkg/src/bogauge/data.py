"""Named initial-datum families with a seedable, portable RNG.

All families produce mean-zero real fields.  Random draws use numpy's
PCG64 generator, so a recorded seed reproduces the same datum on any
platform.  Band-limited random fields are drawn up to a fixed mode count
and normalized through resolution-independent spectral norms, so the
same parameters describe the same function on every grid that resolves
the band.
"""

from __future__ import annotations

import math
from typing import Callable, Dict

import numpy as np

from .errors import ConfigError
from .solver import traveling_wave
from .spectral import Field, PeriodicGrid, Spectrum, real_field, sobolev_norm, to_field

RNG_NAME = "pcg64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed))


def _normalize(f: Field, params: dict) -> Field:
    if "h1_norm" in params and params["h1_norm"] is not None:
        current = sobolev_norm(f, 1.0)
        if current == 0:
            return f
        return real_field(f.grid, f.values * (float(params["h1_norm"]) / current))
    if "amplitude" in params and params["amplitude"] is not None:
        peak = float(np.max(np.abs(f.values)))
        if peak == 0:
            return f
        return real_field(f.grid, f.values * (float(params["amplitude"]) / peak))
    return f


def zero_datum(grid: PeriodicGrid, params: dict, rng) -> Field:
    return real_field(grid, np.zeros(grid.n))


def modes_datum(grid: PeriodicGrid, params: dict, rng) -> Field:
    """Sum of cosine modes: ``sum_i amp_i cos(2 pi m_i x / L + phase_i)``."""
    terms = params.get("terms")
    if not terms:
        raise ConfigError("data family 'modes' needs a nonempty 'terms' list")
    u = np.zeros(grid.n)
    for term in terms:
        m = int(term["m"])
        if not (1 <= m < grid.n // 2):
            raise ConfigError(f"mode index {m} outside 1..{grid.n // 2 - 1}")
        amp = float(term.get("amplitude", 1.0))
        phase = float(term.get("phase", 0.0))
        u += amp * np.cos(2 * np.pi * m * grid.x / grid.length + phase)
    return _normalize(real_field(grid, u), params)


def gaussian_datum(grid: PeriodicGrid, params: dict, rng) -> Field:
    """Periodized Gaussian packet, optionally carried on a cosine, mean removed."""
    width = float(params.get("width", grid.length / 16))
    if width <= 0:
        raise ConfigError("gaussian width must be positive")
    center = float(params.get("center", grid.length / 2))
    carrier = int(params.get("carrier_m", 0))
    amp = float(params.get("amplitude", 1.0))
    u = np.zeros(grid.n)
    for image in range(-4, 5):
        z = grid.x - center + image * grid.length
        u += np.exp(-(z**2) / (2 * width**2))
    if carrier:
        u *= np.cos(2 * np.pi * carrier * (grid.x - center) / grid.length)
    u -= u.mean()
    peak = np.max(np.abs(u))
    if peak > 0:
        u *= amp / peak
    return _normalize(real_field(grid, u), {k: params.get(k) for k in ("h1_norm",)})


def random_datum(grid: PeriodicGrid, params: dict, rng: np.random.Generator) -> Field:
    """Seeded random band-limited field with a prescribed spectral decay.

    Coefficients are drawn for modes ``1 .. band`` with magnitude profile
    ``exp(-m / rate)`` (``decay='exp'``) or ``(1 + m)^{-rate}``
    (``decay='power'``), then conjugate-symmetrized.
    """
    band = int(params.get("band", grid.n // 4))
    if not (1 <= band < grid.n // 2):
        raise ConfigError(f"band {band} outside 1..{grid.n // 2 - 1}")
    decay = params.get("decay", "exp")
    rate = float(params.get("rate", band / 4))
    m = np.arange(1, band + 1)
    if decay == "exp":
        mag = np.exp(-m / rate)
    elif decay == "power":
        mag = (1.0 + m) ** (-rate)
    else:
        raise ConfigError(f"unknown decay kind {decay!r}")
    draws = rng.standard_normal(band) + 1j * rng.standard_normal(band)
    coeffs = np.zeros(grid.n, dtype=np.complex128)
    coeffs[1:band + 1] = mag * draws
    coeffs[grid.n - band:] = np.conj(coeffs[1:band + 1][::-1])
    f = to_field(Spectrum(grid, coeffs * grid.length))
    f = real_field(grid, f.values)
    if "h1_norm" not in params and "amplitude" not in params:
        params = dict(params, h1_norm=1.0)
    return _normalize(f, params)


def traveling_wave_datum(grid: PeriodicGrid, params: dict, rng) -> Field:
    return traveling_wave(grid, r=float(params.get("r", 0.3))).profile


FAMILIES: Dict[str, Callable] = {
    "zero": zero_datum,
    "modes": modes_datum,
    "gaussian": gaussian_datum,
    "random": random_datum,
    "traveling_wave": traveling_wave_datum,
}


def make_datum(grid: PeriodicGrid, family: str, params: dict, seed: int = 0) -> Field:
    """Instantiate a named initial-datum family on a grid."""
    if family not in FAMILIES:
        raise ConfigError(
            f"unknown data family {family!r}; known: {sorted(FAMILIES)}"
        )
    return FAMILIES[family](grid, dict(params or {}), make_rng(seed))


def random_pair_field(grid: PeriodicGrid, rng: np.random.Generator,
                      band: int | None = None, rate: float | None = None) -> Field:
    """Unit-H^1 random band-limited field (perturbation directions, harnesses)."""
    band = band if band is not None else min(grid.n // 4, 64)
    rate = rate if rate is not None else band / 4
    return random_datum(grid, {"band": band, "rate": rate, "h1_norm": 1.0}, rng)
