"""Intermodulation tones from a detuned frequency modulation.

Pumping at resonance while modulating the resonance at 2 f_pump + delta_f
produces a comb f_pump + n delta_f.  The idler f_m - f_pump (n = +1) comes
straight from the parametric term; the image 3 f_pump - f_m (n = -1) and
the second-order lines need the weak Kerr shift switched on below.

The literal laboratory numbers are only handled by the comb arithmetic;
the dynamics run at f0 = 1 with the same Q and xi*Q.

Run::

    python3 demos/mixing_comb.py
"""

from resqueeze import LOSSLESS, DriveConfig, ResonatorParams, predicted_tones, simulate_mixing

lab = DriveConfig(f_pump=3_710_000_000, delta_f=800, xi=0.0)
print(f"lab comb around f_m = {lab.f_m} Hz:")
for tone in predicted_tones(lab):
    print(f"  n = {tone.n:+d}: {tone.frequency} Hz = {tone.identity}")

res = ResonatorParams(f0=1.0, q_unloaded=LOSSLESS, q_feedline=100.0)
for kerr in (0.0, 0.1):
    drive = DriveConfig(f_pump=1.0, delta_f=res.linewidth_hz / 20, xi=0.5 / res.q_loaded,
                        kerr_shift=kerr)
    spectrum = simulate_mixing(res, drive)
    print(f"\nkerr shift {kerr} linewidths, floor {spectrum.floor_db:.0f} dB:")
    for tone in spectrum.tones:
        mark = "detected" if tone.detected else ""
        print(f"  n = {tone.n:+d}  {tone.relative_power_db:8.1f} dB  {mark}")
