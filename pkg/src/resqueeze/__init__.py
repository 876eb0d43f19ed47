"""Noise squeezing and parametric mixing in frequency-modulated microwave resonators."""

__version__ = "0.1.0"

from .core import (
    LOSSLESS,
    BathTemperatures,
    Modulation,
    Regime,
    RegimeKind,
    ResonatorParams,
    classify_regime,
    loaded_q,
    reflection_response,
    thermal_factor,
    xi_q_from_shift,
)
from .errors import (
    BandMismatch,
    ConfigInvalid,
    DivergenceDetected,
    EmptyGrid,
    NumericalInstability,
    PhysicsDomainError,
    ResqueezeError,
    ThresholdViolation,
    ToneNotResolved,
    TooShort,
)
from .material import (
    CarrierParams,
    london_skin_ratio,
    semiconductor_shift_ratio,
    superconductor_shift_ratio,
    unruh_temperature,
)
from .mixing import DriveConfig, MixingSimConfig, predicted_tones, simulate_mixing
from .montecarlo import (
    SimConfig,
    compare_to_analytic,
    estimate_psd,
    run_monte_carlo,
    simulate_output_quadratures,
)
from .spectrum import (
    QuadratureSpectra,
    SpectrumRequest,
    Variant,
    homodyne_spectrum,
    offset_grid,
    s_pm,
    squeezing_check,
    sweep,
)
