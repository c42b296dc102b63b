"""Littlewood-Paley multipliers on the dyadic frequency bands.

The band structure lives in absolute frequency units (cycles per unit
length): ``P_{<=k}`` has symbol ``psi(xi / 2^k)`` where ``psi`` is an
even C^2 cutoff equal to 1 on ``[-1, 1]`` and supported in ``[-2, 2]``.
The physical length of the grid therefore decides how many dyadic bands
the lattice resolves.

Selectors understood by :func:`lp_project`:

====================  ====================================================
``"k"``               band ``P_k = P_{<=k} - P_{<=k-1}`` (``P_{<=-1} = 0``)
``"le"``              low-pass ``P_{<=k}``
``"gt"``              high-pass ``P_{>k} = Id - P_{<=k}``
``"lo"`` / ``"hi"``   ``P_lo = P_0`` and ``P_hi = P_{>0}``
``"LO"`` / ``"HI"``   ``P_LO = P_{<=2}`` and ``P_HI = P_{>2}``
``"+hi"``, ``"-hi"``  ``P_{+-hi} = P_{+-} P_hi`` (Riesz composed with hi)
``"+HI"``, ``"-HI"``  ``P_{+-HI} = P_{+-} P_HI``
====================  ====================================================
"""

from __future__ import annotations

import math
from typing import Dict, Tuple

import numpy as np

from .spectral import Field, PeriodicGrid, field_multiplier


def psi(xi) -> np.ndarray:
    """Even cutoff: 1 on ``|xi| <= 1``, 0 on ``|xi| >= 2``, quintic blend between.

    The blend is ``q(2 - |xi|)`` with the smoothstep ``q(t) = 6t^5 - 15t^4
    + 10t^3``, which is C^2, monotone, and deterministic.
    """
    a = np.abs(np.asarray(xi, dtype=float))
    t = np.clip(2.0 - a, 0.0, 1.0)
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t))


_SIGNED = {"+hi": ("hi", +1), "-hi": ("hi", -1), "+HI": ("HI", +1), "-HI": ("HI", -1)}


class LPBank:
    """Cached multiplier family for one grid.

    ``kmax`` is the smallest K with ``P_{<=K} = Id`` on the lattice, so
    ``sum_{k=0}^{kmax} P_k`` telescopes to the identity exactly.
    """

    def __init__(self, grid: PeriodicGrid):
        self.grid = grid
        xi_max = (grid.n / 2) / grid.length
        self.kmax = max(0, math.ceil(math.log2(xi_max)))
        self._cache: Dict[Tuple[str, int], np.ndarray] = {}

    def _le(self, k: int) -> np.ndarray:
        if k < 0:
            return np.zeros(self.grid.n)
        return psi(self.grid.frequencies / 2.0**k)

    def multiplier(self, selector: str, k: int | None = None) -> np.ndarray:
        """Symbol values on the lattice for the requested selector."""
        key = (selector, -1 if k is None else int(k))
        if key in self._cache:
            return self._cache[key]

        if selector in ("k", "le", "gt"):
            if k is None or k < 0:
                raise ValueError(f"selector {selector!r} needs a band index k >= 0")
            if selector == "le":
                vals = self._le(k)
            elif selector == "gt":
                vals = 1.0 - self._le(k)
            else:
                vals = self._le(k) - self._le(k - 1)
        elif selector == "lo":
            vals = self._le(0)
        elif selector == "hi":
            vals = 1.0 - self._le(0)
        elif selector == "LO":
            vals = self._le(2)
        elif selector == "HI":
            vals = 1.0 - self._le(2)
        elif selector in _SIGNED:
            base, sign = _SIGNED[selector]
            half = 0.5 * (1.0 + sign * np.sign(self.grid.modes))
            half[self.grid.nyquist_slot] = 0.5
            vals = self.multiplier(base).real * half
        else:
            raise ValueError(f"unknown Littlewood-Paley selector {selector!r}")

        vals = np.asarray(vals, dtype=np.complex128)
        vals.setflags(write=False)
        self._cache[key] = vals
        return vals

    def project(self, f: Field, selector: str, k: int | None = None) -> Field:
        return field_multiplier(f, self.multiplier(selector, k))


_banks: Dict[PeriodicGrid, LPBank] = {}


def bank_for(grid: PeriodicGrid) -> LPBank:
    bank = _banks.get(grid)
    if bank is None:
        bank = _banks.setdefault(grid, LPBank(grid))
    return bank


def lp_project(f: Field, selector: str, k: int | None = None) -> Field:
    """Apply the Littlewood-Paley multiplier named by ``selector`` to ``f``."""
    return bank_for(f.grid).project(f, selector, k)


def band_count(grid: PeriodicGrid) -> int:
    """Number of bands ``k = 0 .. kmax`` resolved on the grid."""
    return bank_for(grid).kmax + 1
