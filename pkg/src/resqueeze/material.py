"""Material-response ratios behind optical modulation of a resonator.

Exciting carriers changes the dielectric constant by
``d_eps = d_eps' + i d_eps''``.  The real part shifts the resonance (useful),
the imaginary part broadens it (harmful).  In the microwave regime
``omega*tau << 1``, so a semiconductor (Drude) gives mostly broadening while a
superconductor (two-fluid) gives mostly shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import C_LIGHT, HBAR, K_B
from .errors import ConfigInvalid


@dataclass(frozen=True)
class CarrierParams:
    """Angular frequency ``omega`` (rad/s) and momentum relaxation time ``tau`` (s)."""

    omega: float
    tau: float

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ConfigInvalid(f"omega must be positive, got {self.omega!r}")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ConfigInvalid(f"tau must be positive, got {self.tau!r}")

    @classmethod
    def from_omega_tau(cls, omega_tau: float) -> "CarrierParams":
        return cls(omega=float(omega_tau), tau=1.0)

    @property
    def omega_tau(self) -> float:
        return self.omega * self.tau


def semiconductor_shift_ratio(p: CarrierParams) -> float:
    """Drude-model ``d_eps'/d_eps''``, equal to ``omega*tau``."""
    return p.omega_tau


def superconductor_shift_ratio(p: CarrierParams) -> float:
    """Two-fluid-model ``d_eps'/d_eps''``, equal to ``1/(omega*tau)``."""
    return 1.0 / p.omega_tau


def london_skin_ratio(p: CarrierParams) -> float:
    """Zero-temperature London length over normal skin depth, ``sqrt(omega*tau/2)``."""
    return math.sqrt(0.5 * p.omega_tau)


def unruh_temperature(a):
    """Effective temperature ``hbar a / (2 pi k_B c)`` seen at acceleration ``a`` (m/s^2)."""
    a_arr = np.asarray(a, dtype=float)
    if np.any(a_arr < 0):
        raise ConfigInvalid("acceleration must be >= 0")
    out = HBAR * a_arr / (2.0 * math.pi * K_B * C_LIGHT)
    return float(out) if out.ndim == 0 else out


def material_table(omega_taus):
    """Rows ``(omega_tau, semiconductor, superconductor, london_skin)`` for each product."""
    rows = []
    for wt in omega_taus:
        p = CarrierParams.from_omega_tau(wt)
        rows.append(
            (
                p.omega_tau,
                semiconductor_shift_ratio(p),
                superconductor_shift_ratio(p),
                london_skin_ratio(p),
            )
        )
    return rows
