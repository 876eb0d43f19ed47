"""Checking the closed-form spectra against a Langevin simulation.

The intracavity quadratures are integrated as Ornstein-Uhlenbeck processes
driven by the feedline and internal-loss noise.  The reflected output is
the cavity field minus the very same feedline noise, and the averaged
periodogram of that output should land on the two-bath analytic curves
within its error bars.

Run (about 10 s with 4 threads)::

    python3 demos/monte_carlo_check.py
"""

import os

import numpy as np

from resqueeze import compare_to_analytic, run_monte_carlo
from resqueeze.config import load_config

cfg = load_config("monte_carlo")
mc = run_monte_carlo(cfg.resonator, cfg.baths, cfg.xi, cfg.simulation, threads=os.cpu_count() or 1)
analytic = mc.analytic()
report = compare_to_analytic(mc.psd, analytic)

psd = mc.psd
near = np.flatnonzero(np.abs(psd.two_omega_over_omega0) <= 3 / cfg.resonator.q_loaded)
print(" 2w/w0 * Q   S- (MC)          S- (analytic)   S+ (MC)       S+ (analytic)")
for i in near[::3]:
    x = psd.two_omega_over_omega0[i] * cfg.resonator.q_loaded
    print(f"{x:9.3f}   {psd.s_minus[i]:.4f} +- {psd.err_minus[i]:.4f}  {analytic.s_minus[i]:.4f}"
          f"         {psd.s_plus[i]:7.3f}      {analytic.s_plus[i]:7.3f}")
verdict = "agree" if report.passed else "disagree"
print(f"relative RMS error {report.rms_error:.3f}, worst |z| {report.max_z:.2f}: curves {verdict}")
