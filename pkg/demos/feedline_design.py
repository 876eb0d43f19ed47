"""Choosing the feedline coupling and reading the homodyne phase.

Squeezing survives a hot internal bath only when the feedline coupling
dominates the internal loss.  This sweep holds the modulation depth and
temperatures fixed and tightens the coupling (smaller Q_f); the two-bath
weighting is used because the feedline and the internal loss sit at
different temperatures.  The second half shows how the detected noise
depends on the local-oscillator phase at the carrier.

Run::

    python3 demos/feedline_design.py
"""

import math

import numpy as np

from resqueeze import BathTemperatures, ResonatorParams, SpectrumRequest, Variant, homodyne_spectrum, sweep

base = SpectrumRequest(
    ResonatorParams(5e9, 2e4, 100.0),
    BathTemperatures(0.01, 10.0),
    xi=0.001,
    variant=Variant.TWO_BATH,
)

result = sweep(base, {"q_feedline": [400, 300, 200, 150, 100, 75, 50]})
print(" Q_f    S-(0)")
for qf, s in zip(result.columns["q_feedline"], result.columns["s_minus"]):
    print(f"{qf:4.0f}  {s:.4f}")
print(f"best coupling in range: Q_f = {result.argmin['q_feedline']:.0f}")

# At xi = 0.008 and Q_f = 100 the pump parameter is ~0.8.
near = SpectrumRequest(base.resonator, base.baths, xi=0.008, variant=Variant.TWO_BATH)
phis = np.linspace(0.0, math.pi, 9)
for phi, s in zip(phis, homodyne_spectrum(near, phis)[:, 0]):
    bar = "#" * int(round(8 * math.log10(s / 0.05)))
    print(f"phi = {phi:5.3f}  S = {s:9.4f}  {bar}")
