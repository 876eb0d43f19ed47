"""Exception hierarchy shared by all modules."""


class ResqueezeError(Exception):
    """Base class for every error raised by this package."""


class ConfigInvalid(ResqueezeError, ValueError):
    """Bad parameters or configuration (CLI exit code 1)."""


class PhysicsDomainError(ResqueezeError):
    """The requested physics lies outside a model's range of validity (exit code 2)."""


class ThresholdViolation(PhysicsDomainError):
    """The sub-threshold spectra were requested at or above ``xi*Q = 1``."""

    def __init__(self, xi_q, message=None):
        self.xi_q = xi_q
        super().__init__(
            message or f"xi*Q = {xi_q:.6g} >= 1: sub-threshold spectra do not apply"
        )


class DivergenceDetected(PhysicsDomainError):
    """A time integration grew past its divergence bound.

    ``time`` is the (dimensionless) time of the crossing and ``growth_rate`` the
    exponential rate fitted to the log-amplitude before it, when available.
    """

    def __init__(self, message, time=None, growth_rate=None):
        super().__init__(message)
        self.time = time
        self.growth_rate = growth_rate


class NumericalInstability(PhysicsDomainError):
    """Integrator step size is outside its accuracy/stability region."""


class ToneNotResolved(ResqueezeError, ValueError):
    """The analysis window cannot place the comb tones on distinct FFT bins."""


class TooShort(ResqueezeError, ValueError):
    """Series too short for the requested Welch segmentation."""


class BandMismatch(ResqueezeError, ValueError):
    """Simulated and analytic spectra do not share the requested band."""


class EmptyGrid(ResqueezeError, ValueError):
    """Every point of a sweep grid was excluded."""
