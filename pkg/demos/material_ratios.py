"""Why a superconducting modulator beats a semiconductor one.

For a carrier-density change the ratio of reactive to dissipative response
scales as omega*tau in a normal conductor and as 1/(omega*tau) in the
two-fluid superconductor.  At microwave frequencies omega*tau is tiny, so a
superconductor mostly shifts the resonance instead of damping it.

Run::

    python3 demos/material_ratios.py
"""

import math

from resqueeze import CarrierParams, london_skin_ratio, semiconductor_shift_ratio, superconductor_shift_ratio, unruh_temperature

print("omega*tau   semiconductor   superconductor   lambda0/delta")
for x in (1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0):
    p = CarrierParams.from_omega_tau(x)
    print(f"{x:9.0e}   {semiconductor_shift_ratio(p):13.3e}   {superconductor_shift_ratio(p):14.3e}"
          f"   {london_skin_ratio(p):13.4f}")

p = CarrierParams(omega=2 * math.pi * 5e9, tau=1e-13)
print(f"\nat 5 GHz with tau = 0.1 ps: omega*tau = {p.omega_tau:.3e}")
print(f"Unruh temperature for a = 1e20 m/s^2: {unruh_temperature(1e20):.4f} K")
