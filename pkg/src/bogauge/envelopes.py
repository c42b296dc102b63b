"""Frequency envelopes and envelope norms.

A frequency envelope is a slowly varying dyadic majorant ``c_k``: it has
``c_0`` comparable to 1, square-summable values, and is log-Lipschitz in
the band index (it may rise at most like ``2^{sigma r}`` and fall at most
like ``2^{-M r}``).  Envelopes built from a band profile ``a_k`` via

    c_j = 2^{-sigma j}
          + eps^{-2} ( sum_{k <= j} 2^{-M (j-k)} a_k
                     + sum_{k > j}  2^{-sigma (k - j)} a_k )

track how a field's energy distributes across dyadic bands: the profile
is smeared upward with the fast kernel and downward with the slow one,
which is exactly what makes the log-Lipschitz conditions structural
(they hold for every nonnegative profile).  The remaining two axioms
hold once ``||a||_{l2}`` is controlled by ``eps^2``; the comparison
constants are configuration, reported with every run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List

import numpy as np

from .errors import EnvelopeAxiomError
from .lp import band_count, lp_project
from .solver import Trajectory
from .spectral import Field, derivative, linf_norm, sobolev_norm


@dataclass(frozen=True)
class FrequencyEnvelope:
    """Envelope values ``c_0 .. c_kmax`` with their construction parameters."""

    values: np.ndarray
    sigma: float
    big_m: int
    epsilon: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


# default comparison constants; callers may widen them (reported in runs)
C0_RANGE = (0.25, 4.0)
ENERGY_BOUND = 64.0


def lp_profile(f: Field, s: float) -> np.ndarray:
    """Band profile ``a_k = ||P_k f||_{H^s}`` for ``k = 0 .. kmax``."""
    return np.array(
        [sobolev_norm(lp_project(f, "k", k), s) for k in range(band_count(f.grid))]
    )


def build_envelope(
    a,
    epsilon: float,
    sigma: float = 0.05,
    big_m: int = 2,
    check: bool = True,
    c0_range=C0_RANGE,
    energy_bound: float = ENERGY_BOUND,
) -> FrequencyEnvelope:
    """Construct the envelope of a nonnegative band profile ``a``.

    When ``check`` is set the result is passed through
    :func:`verify_envelope` and an :class:`EnvelopeAxiomError` carrying
    the violated inequalities is raised on failure (which cannot happen
    when ``||a||_{l2}`` is sufficiently small compared to ``epsilon^2``).
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or len(a) == 0:
        raise ValueError("profile must be a nonempty 1-d array")
    if np.any(a < 0):
        raise ValueError("profile values must be nonnegative")
    if not (epsilon > 0 and sigma > 0):
        raise ValueError("epsilon and sigma must be positive")
    if big_m < 1 or int(big_m) != big_m:
        raise ValueError(f"M must be a positive integer, got {big_m}")

    j = np.arange(len(a))
    diff = j[:, None] - j[None, :]  # j - k
    kernel = np.where(diff >= 0, 2.0 ** (-big_m * diff), 2.0 ** (sigma * diff))
    values = 2.0 ** (-sigma * j) + (kernel @ a) / epsilon**2
    env = FrequencyEnvelope(values, float(sigma), int(big_m), float(epsilon))
    if check:
        violations = verify_envelope(env, c0_range=c0_range, energy_bound=energy_bound)
        if violations:
            raise EnvelopeAxiomError(violations)
    return env


def verify_envelope(
    env: FrequencyEnvelope,
    c0_range=C0_RANGE,
    energy_bound: float = ENERGY_BOUND,
    cmax: float | None = None,
) -> List[str]:
    """Check the envelope axioms; returns a list of violations (empty = pass).

    Checked: ``c_0`` within ``c0_range``; ``sum c_k^2 <= energy_bound``;
    the log-Lipschitz bounds ``2^{-M r} c_k <= c_{k+r} <= 2^{sigma r} c_k``
    for every stored pair; and boundedness ``c_k <= cmax`` (default
    ``sqrt(energy_bound)``, which the energy axiom already implies).
    """
    c = env.values
    out: List[str] = []
    if not (c0_range[0] <= c[0] <= c0_range[1]):
        out.append(f"c_0 = {c[0]:.6g} outside [{c0_range[0]:g}, {c0_range[1]:g}]")
    energy = float(np.sum(c**2))
    if energy > energy_bound:
        out.append(f"sum c_k^2 = {energy:.6g} exceeds {energy_bound:g}")
    bound = math.sqrt(energy_bound) if cmax is None else cmax
    for k, ck in enumerate(c):
        if ck > bound:
            out.append(f"c_{k} = {ck:.6g} exceeds bound {bound:g}")
    # log-Lipschitz in both directions, all pairs (tiny slack for roundoff)
    tol = 1.0 + 1e-12
    for k in range(len(c)):
        for r in range(1, len(c) - k):
            lo = 2.0 ** (-env.big_m * r) * c[k]
            hi = 2.0 ** (env.sigma * r) * c[k]
            if c[k + r] > hi * tol:
                out.append(
                    f"raise upper bound fails at k={k}, r={r}: "
                    f"c_{k + r} = {c[k + r]:.6g} > 2^(sigma r) c_{k} = {hi:.6g}"
                )
            if c[k + r] < lo / tol:
                out.append(
                    f"raise lower bound fails at k={k}, r={r}: "
                    f"c_{k + r} = {c[k + r]:.6g} < 2^(-M r) c_{k} = {lo:.6g}"
                )
    return out


def envelope_norm(f: Field, env: FrequencyEnvelope, s: float) -> float:
    """Envelope-refined Sobolev norm ``||f||_{H^s} + sup_k ||P_k f||_{H^s} / c_k``."""
    c = env.values
    if np.any(c <= 0):
        raise ValueError("envelope values must be strictly positive")
    n_bands = band_count(f.grid)
    if n_bands > len(c):
        raise ValueError(
            f"envelope has {len(c)} values but the grid resolves {n_bands} bands"
        )
    profile = lp_profile(f, s)
    return sobolev_norm(f, s) + float(np.max(profile / c[:n_bands]))


def strichartz_norm(traj: Trajectory, k: int) -> float:
    """Mixed spacetime norm ``||u||_{L^4_t C^k_x} + ||u||_{L^inf_t H^k_x}``.

    The time integral is a trapezoid rule over the captured snapshots and
    the ``C^k`` norm is the lattice maximum of ``sum_{j<=k} |d^j u|``.
    """
    if not (0 <= k <= 2) or int(k) != k:
        raise ValueError(f"k must be an integer in 0..2, got {k}")
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    ck_vals = []
    hk_vals = []
    for u in traj.snapshots:
        total = np.abs(u.samples).copy()
        for j in range(1, k + 1):
            total += np.abs(derivative(u, j).samples)
        ck_vals.append(float(np.max(total)))
        hk_vals.append(sobolev_norm(u, float(k)))
    if len(traj) == 1:
        l4 = 0.0
    else:
        l4 = float(abs(np.trapezoid(np.asarray(ck_vals) ** 4.0, traj.times))) ** 0.25
    return l4 + max(hk_vals)


def transfer_bound_constant(n_bands: int, s0: float, sigma: float, big_m: int) -> float:
    """Provable lattice constant K for the weighted l2 transfer bound.

    Bounds ``(sum_j (2^{(s0-1) j} c_j)^2)^{1/2}`` by
    ``K (1 + eps^{-2} ||u||_{H^{s0}})`` for envelopes built from the
    ``H^1`` band profile of ``u``: the geometric base term is summed over
    the resolved bands, and the convolution parts are bounded by Young's
    inequality with the weighted kernels.
    """
    j = np.arange(n_bands)
    base = math.sqrt(float(np.sum(4.0 ** ((s0 - 1.0 - sigma) * j))))
    fast = 1.0 / (1.0 - 2.0 ** (-(big_m - s0 + 1.0)))
    q = 2.0 ** (-(sigma + s0 - 1.0))
    slow = q / (1.0 - q)
    return base + (fast + slow) * 2.0 ** (s0 - 1.0) * math.sqrt(2.0)


@dataclass
class EnvelopeReport:
    """Per-snapshot envelope diagnostics along a trajectory."""

    times: np.ndarray
    h1c_norms: np.ndarray
    ratio: np.ndarray            # ||u(t)||_{H^1_c} / ||u(0)||_{H^1_c}
    hs0_norms: np.ndarray
    hs0_ratio: np.ndarray
    band_margins: np.ndarray     # sup_k a_k(t) / c_k, per snapshot
    axiom_violations: List[str]
    flags: Dict[str, bool] = dataclass_field(default_factory=dict)
    params: Dict[str, float] = dataclass_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.flags.values())


def envelope_stability(
    traj: Trajectory,
    s0: float,
    epsilon: float | None = None,
    sigma: float = 0.05,
    big_m: int | None = None,
    ratio_bound: float = 10.0,
    c0_range=C0_RANGE,
    energy_bound: float = ENERGY_BOUND,
) -> EnvelopeReport:
    """Track the envelope norm and ``H^{s0}`` persistence along a flow.

    The envelope is built from the initial snapshot's ``H^1`` band
    profile; the report records the ratio series and flags whether both
    stay below ``ratio_bound``.  Zero data yields a trivial pass.
    """
    if s0 < 1:
        raise ValueError(f"s0 must be >= 1, got {s0}")
    u0 = traj.u0
    if big_m is None:
        big_m = math.ceil(s0) + 1
    h1 = sobolev_norm(u0, 1.0)
    if epsilon is None:
        epsilon = math.sqrt(max(h1, 1e-8))

    times = np.asarray(traj.times)
    if max(linf_norm(u) for u in traj.snapshots) == 0.0:
        z = np.zeros(len(traj))
        return EnvelopeReport(
            times=times, h1c_norms=z, ratio=z, hs0_norms=z, hs0_ratio=z,
            band_margins=z, axiom_violations=[],
            flags={"trivial": True, "envelope_ratio": True, "hs0_ratio": True},
            params={"s0": s0, "sigma": sigma, "big_m": big_m, "epsilon": epsilon,
                    "ratio_bound": ratio_bound},
        )

    a0 = lp_profile(u0, 1.0)
    env = build_envelope(
        a0, epsilon, sigma, big_m, check=False,
        c0_range=c0_range, energy_bound=energy_bound,
    )
    violations = verify_envelope(env, c0_range=c0_range, energy_bound=energy_bound)

    nb = band_count(u0.grid)
    h1c, hs0, margins = [], [], []
    for u in traj.snapshots:
        h1c.append(envelope_norm(u, env, 1.0))
        hs0.append(sobolev_norm(u, s0))
        margins.append(float(np.max(lp_profile(u, 1.0) / env.values[:nb])))
    h1c = np.asarray(h1c)
    hs0 = np.asarray(hs0)
    ratio = h1c / h1c[0]
    hs0_ratio = hs0 / hs0[0]

    flags = {
        "trivial": False,
        "axioms": not violations,
        "envelope_ratio": bool(np.max(ratio) <= ratio_bound),
        "hs0_ratio": bool(np.max(hs0_ratio) <= ratio_bound),
    }
    return EnvelopeReport(
        times=times, h1c_norms=h1c, ratio=ratio, hs0_norms=hs0,
        hs0_ratio=hs0_ratio, band_margins=np.asarray(margins),
        axiom_violations=violations, flags=flags,
        params={"s0": s0, "sigma": sigma, "big_m": big_m, "epsilon": epsilon,
                "ratio_bound": ratio_bound},
    )
