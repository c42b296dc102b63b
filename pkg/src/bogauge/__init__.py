"""bogauge: pseudospectral Benjamin-Ono solver with verification harnesses.

The package implements the periodic Benjamin-Ono flow together with the
gauge (Cole-Hopf-type) transformation, Littlewood-Paley and frequency
envelope machinery, and experiment runners that numerically certify the
associated algebraic identities, conservation laws, and inequality
instances.
"""

__version__ = "0.1.0"

from .envelopes import (
    EnvelopeReport,
    FrequencyEnvelope,
    build_envelope,
    envelope_norm,
    envelope_stability,
    lp_profile,
    strichartz_norm,
    verify_envelope,
)
from .errors import (
    BlowupError,
    BogaugeError,
    ConfigError,
    EnvelopeAxiomError,
    GridMismatchError,
    MeanValueError,
    MultiplierDomainError,
)
from .gauge import (
    GaugeFields,
    GaugePrimitive,
    gauge_w,
    padded_product,
    paraproduct_pair,
    primitive,
    primitive_equation_residual,
    reconstruct_fhi,
    w_equation_residual,
)
from .lp import LPBank, band_count, lp_project, psi
from .solver import (
    ConservedTriple,
    SolverConfig,
    Trajectory,
    TravelingWave,
    bo_rhs,
    conserved,
    evolve,
    rescale,
    step,
    traveling_wave,
)
from .spectral import (
    Field,
    PeriodicGrid,
    Spectrum,
    antiderivative,
    apply_multiplier,
    complex_field,
    derivative,
    field_multiplier,
    hilbert,
    inner,
    integral,
    l2_norm,
    linf_norm,
    mean_value,
    pad_field,
    pad_spectrum,
    real_field,
    reflect,
    resample_field,
    riesz,
    sobolev_norm,
    to_field,
    to_spectrum,
    translate,
    truncate_field,
    truncate_spectrum,
    zero_field,
)

__all__ = [name for name in dir() if not name.startswith("_")]
