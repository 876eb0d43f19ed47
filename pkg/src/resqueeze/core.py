"""Resonator, bath and modulation parameters plus the quantities derived from them.

A frequency-modulated resonator ``omega_r(t) = omega_0 [1 + xi cos(2 omega_0 t)]``
is described by its centre frequency and two quality factors: the internal
(unloaded) ``Q_u`` and the feedline coupling ``Q_f``.  The loaded Q follows
from ``1/Q = 1/Q_u + 1/Q_f`` and the pump strength is the product ``xi*Q``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid

# CODATA 2018 exact / recommended values (SI).
HBAR = 1.054571817e-34
K_B = 1.380649e-23
C_LIGHT = 2.99792458e8

#: Sentinel for an internally lossless resonator (``Q_u -> infinity``).
#: IEEE infinity makes ``1/Q_u`` exactly zero, so every formula takes the limit exactly.
LOSSLESS = math.inf

#: Relative half-width of the band in which ``xi*Q`` is classified as at threshold.
THRESHOLD_RTOL = 1e-9


@dataclass(frozen=True)
class ResonatorParams:
    """Single resonator mode.

    Parameters
    ----------
    f0 : float
        Resonance frequency in Hz.
    q_unloaded : float
        Internal quality factor ``Q_u``; pass :data:`LOSSLESS` for no internal loss.
    q_feedline : float
        Coupling quality factor ``Q_f``.
    """

    f0: float
    q_unloaded: float
    q_feedline: float

    def __post_init__(self):
        if not (math.isfinite(self.f0) and self.f0 > 0):
            raise ConfigInvalid(f"f0 must be positive and finite, got {self.f0!r}")
        if not (self.q_unloaded > 0 and not math.isnan(self.q_unloaded)):
            raise ConfigInvalid(f"q_unloaded must be positive, got {self.q_unloaded!r}")
        if not (math.isfinite(self.q_feedline) and self.q_feedline > 0):
            raise ConfigInvalid(f"q_feedline must be positive and finite, got {self.q_feedline!r}")

    @property
    def lossless(self) -> bool:
        return self.q_unloaded == LOSSLESS

    @property
    def omega0(self) -> float:
        return 2.0 * math.pi * self.f0

    @property
    def inv_q_unloaded(self) -> float:
        return 0.0 if self.lossless else 1.0 / self.q_unloaded

    @property
    def inv_q_feedline(self) -> float:
        return 1.0 / self.q_feedline

    @property
    def q_loaded(self) -> float:
        return loaded_q(self)

    @property
    def kappa(self) -> float:
        """Total energy decay rate ``omega_0/Q`` in 1/s."""
        return self.omega0 / self.q_loaded

    @property
    def kappa_feedline(self) -> float:
        return self.omega0 / self.q_feedline

    @property
    def kappa_unloaded(self) -> float:
        return self.omega0 * self.inv_q_unloaded

    @property
    def feedline_fraction(self) -> float:
        """``Q/Q_f``, the share of the total damping that goes out of the feedline."""
        return self.q_loaded / self.q_feedline

    @property
    def internal_fraction(self) -> float:
        """``Q/Q_u``, exactly zero when lossless."""
        return self.q_loaded * self.inv_q_unloaded

    @property
    def linewidth_hz(self) -> float:
        return self.f0 / self.q_loaded


@dataclass(frozen=True)
class BathTemperatures:
    """Temperatures (K) of the feedline and of the fictitious damping port."""

    t_feedline: float
    t_damping: float

    def __post_init__(self):
        for name in ("t_feedline", "t_damping"):
            t = getattr(self, name)
            if not (math.isfinite(t) and t >= 0):
                raise ConfigInvalid(f"{name} must be a finite temperature >= 0 K, got {t!r}")


@dataclass(frozen=True)
class Modulation:
    """Depth ``xi`` and frequency (Hz) of the resonance-frequency modulation."""

    xi: float
    f_mod: float

    def __post_init__(self):
        if not (math.isfinite(self.xi) and self.xi >= 0):
            raise ConfigInvalid(f"xi must be >= 0, got {self.xi!r}")
        if not (math.isfinite(self.f_mod) and self.f_mod >= 0):
            raise ConfigInvalid(f"f_mod must be >= 0, got {self.f_mod!r}")

    @classmethod
    def primary(cls, params: ResonatorParams, xi: float) -> "Modulation":
        """Modulation at the primary parametric resonance ``2 f0``."""
        return cls(xi=xi, f_mod=2.0 * params.f0)

    def is_primary(self, params: ResonatorParams) -> bool:
        return self.f_mod == 2.0 * params.f0


class RegimeKind(enum.Enum):
    SUB_THRESHOLD = "sub-threshold"
    AT_THRESHOLD = "at-threshold"
    ABOVE_THRESHOLD = "above-threshold"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    xi_q: float

    @property
    def sub_threshold(self) -> bool:
        return self.kind is RegimeKind.SUB_THRESHOLD


def loaded_q(params: ResonatorParams) -> float:
    """Loaded quality factor, ``1/Q = 1/Q_u + 1/Q_f``."""
    if params.lossless:
        return float(params.q_feedline)
    return 1.0 / (params.inv_q_unloaded + params.inv_q_feedline)


def classify_regime(params: ResonatorParams, mod: Modulation) -> Regime:
    """Classify the pump strength ``xi*Q`` relative to the oscillation threshold.

    Values within :data:`THRESHOLD_RTOL` of one are reported as at threshold.
    """
    if not mod.is_primary(params):
        raise ConfigInvalid(
            f"regime classification needs f_mod = 2 f0 = {2 * params.f0!r}, got {mod.f_mod!r}"
        )
    xi_q = mod.xi * loaded_q(params)
    if abs(xi_q - 1.0) <= THRESHOLD_RTOL:
        kind = RegimeKind.AT_THRESHOLD
    elif xi_q < 1.0:
        kind = RegimeKind.SUB_THRESHOLD
    else:
        kind = RegimeKind.ABOVE_THRESHOLD
    return Regime(kind, xi_q)


def thermal_x(f0, t):
    """``hbar omega_0 / (2 k_B T)``; infinite at ``T = 0``."""
    f0 = np.asarray(f0, dtype=float)
    t = np.asarray(t, dtype=float)
    num = HBAR * 2.0 * np.pi * f0
    with np.errstate(divide="ignore"):
        return np.where(t > 0, num / (2.0 * K_B * np.where(t > 0, t, 1.0)), np.inf)


def thermal_factor(f0, t):
    """Symmetrized noise factor ``A = (1/2) coth(hbar omega_0 / 2 k_B T)``.

    Returns exactly 0.5 at ``T = 0``.  Accepts scalars or arrays.
    """
    if np.any(np.asarray(t) < 0):
        raise ConfigInvalid("temperature must be >= 0 K")
    x = thermal_x(f0, t)
    out = 0.5 / np.tanh(x)
    return float(out) if out.ndim == 0 else out


def reflection_response(params: ResonatorParams, f):
    """Complex reflection amplitude of a single-port, linearly coupled resonator.

    ``S11 = ((kappa_u - kappa_f)/2 + i*Delta) / (kappa/2 + i*Delta)`` with
    ``Delta = 2*pi*(f - f0)``.
    """
    f = np.asarray(f, dtype=float)
    delta = 2.0 * np.pi * (f - params.f0)
    num = 0.5 * (params.kappa_unloaded - params.kappa_feedline) + 1j * delta
    den = 0.5 * params.kappa + 1j * delta
    out = np.asarray(num / den)
    return complex(out) if out.ndim == 0 else out


def xi_q_from_shift(f_dark: float, f_illuminated: float, q_loaded: float) -> float:
    """Pump parameter implied by a quasi-static shift between two resonance frequencies.

    The two frequencies are taken as the extremes of a symmetric modulation,
    so ``xi = |f_dark - f_illuminated| / (2 f_dark)``.  Other conventions
    (``xi = |df|/f``) give twice this value.
    """
    if not (f_dark > 0 and f_illuminated > 0):
        raise ConfigInvalid("frequencies must be positive")
    if not q_loaded > 0:
        raise ConfigInvalid("q_loaded must be positive")
    return q_loaded * abs(f_dark - f_illuminated) / (2.0 * f_dark)
