"""Intermodulation tones of a pumped resonator whose frequency is modulated near ``2 f_pump``.

A pump at ``f_pump`` and a frequency modulation at ``f_m = 2 f_pump + delta_f``
produce a comb ``f_n = f_pump + n delta_f``.  In a purely linear oscillator only
``n = 0`` and the idler ``n = +1`` (``f_m - f_pump``) appear: frequencies of the
form ``+-f_pump + k f_m`` never land on ``n = -1``.  The other comb lines
(e.g. ``n = -1 = 3 f_pump - f_m``) need a nonlinearity that mixes the pump with
the idler, so the oscillator carries an optional Kerr (Duffing) term::

    x'' + (w0/Q) x' + w0^2 [1 + 2 xi cos(2 pi f_m t)] x + w0^2 beta x^3 = F cos(2 pi f_pump t)

``beta`` is set from ``kerr_shift``, the nonlinear frequency shift at the
linear pump amplitude in units of the linewidth ``f0/Q``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import ResonatorParams
from .errors import ConfigInvalid, DivergenceDetected, NumericalInstability, ToneNotResolved

#: Largest allowed ``omega_0 * h`` for the RK4 step.
MAX_PHASE_STEP = 0.5


@dataclass(frozen=True)
class DriveConfig:
    """Pump and modulation of the mixing experiment (frequencies in Hz)."""

    f_pump: float
    delta_f: float
    xi: float
    pump_amplitude: float = 1.0
    kerr_shift: float = 0.0

    def __post_init__(self):
        if not self.f_pump > 0:
            raise ConfigInvalid("f_pump must be positive")
        if not self.delta_f >= 0:
            raise ConfigInvalid("delta_f must be >= 0")
        if not self.xi >= 0:
            raise ConfigInvalid("xi must be >= 0")
        if not self.pump_amplitude > 0:
            raise ConfigInvalid("pump_amplitude must be positive")
        if not self.kerr_shift >= 0:
            raise ConfigInvalid("kerr_shift must be >= 0")

    @property
    def f_m(self):
        return 2 * self.f_pump + self.delta_f


@dataclass(frozen=True)
class Tone:
    n: int
    frequency: float
    identity: str
    mixing_order: int
    relative_power_db: float = math.nan
    above_floor_db: float = math.nan
    detected: bool = False


def _identity(n: int) -> str:
    a, b = 1 - 2 * n, n  # f_n = a f_pump + b f_m

    def term(c, name):
        return name if abs(c) == 1 else f"{abs(c)} {name}"

    parts = [(c, name) for c, name in ((b, "f_m"), (a, "f_pump")) if c != 0]
    parts.sort(key=lambda p: p[0] < 0)
    text = term(*parts[0]) if parts[0][0] > 0 else "-" + term(*parts[0])
    for c, name in parts[1:]:
        text += (" + " if c > 0 else " - ") + term(c, name)
    return text


def predicted_tones(d: DriveConfig, max_order: int = 2) -> list[Tone]:
    """Comb ``f_pump + n delta_f`` for ``|n| <= max_order`` with mixing identities.

    Exact for exact inputs (ints or ``Fraction``); floats are exact up to 2**53.
    """
    tones = []
    for n in range(-max_order, max_order + 1):
        tones.append(
            Tone(
                n=n,
                frequency=d.f_pump + n * d.delta_f,
                identity=_identity(n),
                mixing_order=abs(1 - 2 * n) + abs(n),
            )
        )
    return tones


@dataclass(frozen=True)
class MixingSimConfig:
    """Integration and analysis settings.

    Burn-in and analysis windows are counted in beat periods ``1/delta_f``.
    The spectral floor is the median power of the off-comb bins within
    ``floor_halfwidth`` linewidths of the pump, so ``analysis_beats`` must be
    at least 2 to leave bins between the comb lines.  The floor never drops
    below ``dynamic_range_db`` under the pump: rounding errors are periodic in
    the steady state and put spurious comb lines near -260 dB.
    """

    steps_per_period: int = 32
    burn_in_beats: int = 1
    analysis_beats: int = 4
    detect_db: float = 20.0
    floor_halfwidth: float = 10.0
    dynamic_range_db: float = 200.0
    max_order: int = 2
    max_steps: int = 2_000_000
    divergence_bound: float = 1e6

    def __post_init__(self):
        if self.steps_per_period < 1 or self.burn_in_beats < 0 or self.analysis_beats < 1:
            raise ConfigInvalid("steps_per_period and analysis_beats must be >= 1")
        if self.analysis_beats < 2:
            raise ConfigInvalid("analysis_beats must be >= 2 to measure the floor between tones")
        if self.max_order < 0:
            raise ConfigInvalid("max_order must be >= 0")
        if not self.floor_halfwidth > 0:
            raise ConfigInvalid("floor_halfwidth must be positive")


@dataclass
class ToneSpectrum:
    """Tones at the comb positions, powers in dB relative to the pump tone."""

    tones: list
    floor_db: float
    bin_hz: float
    frequency: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)

    def tone(self, n: int) -> Tone:
        for t in self.tones:
            if t.n == n:
                return t
        raise KeyError(n)

    @property
    def detected_orders(self) -> list[int]:
        return [t.n for t in self.tones if t.detected]


def required_steps(resonator: ResonatorParams, d: DriveConfig, sim: MixingSimConfig) -> int:
    if d.delta_f == 0:
        return 0
    beats = sim.burn_in_beats + sim.analysis_beats
    return int(round(beats / d.delta_f * sim.steps_per_period * resonator.f0))


def _integrate(n_steps, h, w0, gamma, xi, wm, wp, force, beta_w2, bound, x0=0.0, v0=0.0):
    """Fixed-step RK4; returns ``x`` sampled at the start of every step."""
    k = np.arange(n_steps, dtype=float)
    t0 = k * h
    th = t0 + 0.5 * h
    t1 = t0 + h
    w2 = w0 * w0
    stiff0 = (w2 * (1.0 + 2.0 * xi * np.cos(wm * t0))).tolist()
    stiffh = (w2 * (1.0 + 2.0 * xi * np.cos(wm * th))).tolist()
    stiff1 = (w2 * (1.0 + 2.0 * xi * np.cos(wm * t1))).tolist()
    drv0 = (force * np.cos(wp * t0)).tolist()
    drvh = (force * np.cos(wp * th)).tolist()
    drv1 = (force * np.cos(wp * t1)).tolist()
    xs = [0.0] * n_steps
    x, v = x0, v0
    h2 = 0.5 * h
    h6 = h / 6.0
    for i in range(n_steps):
        xs[i] = x
        s0, sh, s1 = stiff0[i], stiffh[i], stiff1[i]
        p0, ph, p1 = drv0[i], drvh[i], drv1[i]
        a1 = p0 - gamma * v - s0 * x - beta_w2 * x * x * x
        x2 = x + h2 * v
        v2 = v + h2 * a1
        a2 = ph - gamma * v2 - sh * x2 - beta_w2 * x2 * x2 * x2
        x3 = x + h2 * v2
        v3 = v + h2 * a2
        a3 = ph - gamma * v3 - sh * x3 - beta_w2 * x3 * x3 * x3
        x4 = x + h * v3
        v4 = v + h * a3
        a4 = p1 - gamma * v4 - s1 * x4 - beta_w2 * x4 * x4 * x4
        x = x + h6 * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v = v + h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        if not abs(x) < bound:
            raise DivergenceDetected(
                f"oscillator amplitude exceeded {bound:g} at t = {(i + 1) * h:.6g}",
                time=(i + 1) * h,
            )
    return np.asarray(xs)


def simulate_mixing(
    resonator: ResonatorParams, d: DriveConfig, sim: MixingSimConfig = MixingSimConfig()
) -> ToneSpectrum:
    """Integrate the modulated oscillator and measure the comb tones.

    The analysis window spans an integer number of beat periods and of pump
    periods, so every comb line sits exactly on an FFT bin and a rectangular
    window is leak-free.

    Raises
    ------
    ToneNotResolved
        If ``delta_f = 0`` or ``f_pump/delta_f`` is not an integer.
    NumericalInstability
        If ``omega_0 * h`` exceeds :data:`MAX_PHASE_STEP`.
    DivergenceDetected
        If the amplitude grows without bound (above threshold, no Kerr term).
    """
    if d.delta_f <= 0:
        raise ToneNotResolved("delta_f = 0: comb lines coincide and cannot be separated")
    ratio = d.f_pump / d.delta_f
    if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
        raise ToneNotResolved("f_pump/delta_f must be an integer for bin-centred tones")
    if d.delta_f > 0.1 * resonator.linewidth_hz:
        warnings.warn(
            f"delta_f = {d.delta_f:g} Hz is not small compared with the linewidth "
            f"{resonator.linewidth_hz:g} Hz",
            stacklevel=2,
        )
    beat = 1.0 / d.delta_f
    n_per_beat = int(round(beat * sim.steps_per_period * resonator.f0))
    h = beat / n_per_beat
    w0 = resonator.omega0
    if w0 * h > MAX_PHASE_STEP:
        raise NumericalInstability(
            f"omega_0 * h = {w0 * h:.3g} > {MAX_PHASE_STEP}; raise steps_per_period"
        )
    n_burn = sim.burn_in_beats * n_per_beat
    n_an = sim.analysis_beats * n_per_beat
    if n_burn + n_an > sim.max_steps:
        raise ConfigInvalid(
            f"{n_burn + n_an} steps exceed max_steps = {sim.max_steps}; use scaled units"
        )
    q = resonator.q_loaded
    x_lin = d.pump_amplitude
    force = x_lin * w0 * w0 / q
    # Duffing shift 3/8 w0 beta x^2 equal to kerr_shift linewidths
    beta = 8.0 * d.kerr_shift / (3.0 * q * x_lin * x_lin)
    xs = _integrate(
        n_burn + n_an,
        h,
        w0,
        w0 / q,
        d.xi,
        2.0 * math.pi * d.f_m,
        2.0 * math.pi * d.f_pump,
        force,
        w0 * w0 * beta,
        sim.divergence_bound * x_lin,
    )
    x = xs[n_burn:]
    spec = np.fft.rfft(x) / n_an
    power = spec.real**2 + spec.imag**2
    t_an = n_an * h
    freq = np.fft.rfftfreq(n_an, d=h)
    k_pump = int(round(d.f_pump * t_an))
    k_half = max(2 * sim.analysis_beats, int(sim.floor_halfwidth * resonator.linewidth_hz * t_an))
    idx = np.arange(max(1, k_pump - k_half), min(power.size, k_pump + k_half + 1))
    off_comb = idx[(idx - k_pump) % sim.analysis_beats != 0]
    floor = max(
        float(np.median(power[off_comb])), power[k_pump] * 10.0 ** (-sim.dynamic_range_db / 10.0)
    )
    p_pump = power[k_pump]
    tones = []
    for tone in predicted_tones(d, sim.max_order):
        k = k_pump + tone.n * sim.analysis_beats
        p = power[k]
        above = 10.0 * math.log10(p / floor) if floor > 0 else math.inf
        tones.append(
            Tone(
                n=tone.n,
                frequency=float(freq[k]),
                identity=tone.identity,
                mixing_order=tone.mixing_order,
                relative_power_db=10.0 * math.log10(p / p_pump) if p > 0 else -math.inf,
                above_floor_db=above,
                detected=above >= sim.detect_db,
            )
        )
    return ToneSpectrum(
        tones=tones,
        floor_db=10.0 * math.log10(floor / p_pump) if floor > 0 else -math.inf,
        bin_hz=1.0 / t_an,
        frequency=freq,
        power=power / p_pump,
    )
