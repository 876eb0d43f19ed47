"""Stochastic (Langevin) cross-check of the analytic quadrature spectra.

In the frame rotating at ``omega_0``, with time measured in units of ``1/kappa``
(``kappa = omega_0/Q``), the two cavity quadratures obey independent
Ornstein-Uhlenbeck equations::

    dX(+/-) = -(1/2 -/+ xi*Q/2) X(+/-) dt + sqrt(Q/Q_f) dW_f + sqrt(Q/Q_u) dW_d

with ``<dW_f^2> = A_f dt`` and ``<dW_d^2> = A_d dt``.  The reflected field is
``X_out = sqrt(Q/Q_f) X - n_f``, where ``n_f = dW_f/dt`` is the same feedline
noise sample that drove the cavity on that step.  Dropping that correlation
destroys the squeezing, so both terms are built from one draw.

The equations are stepped with explicit Euler-Maruyama.  Because they are
linear with additive noise, each step is a first-order recursion and is run
through ``scipy.signal.lfilter`` chunk by chunk.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.signal import get_window, lfilter

from .core import BathTemperatures, ResonatorParams, thermal_factor
from .errors import BandMismatch, ConfigInvalid, DivergenceDetected, TooShort
from .spectrum import QuadratureSpectra, SpectrumRequest, Variant, s_pm

#: Largest allowed ``dt * (max decay rate)``.
MAX_STEP_RATE = 0.02
MIN_BURN_IN = 10.0
_CHUNK = 1 << 16
# log-amplitude window (in e-folds below the bound) used for the growth-rate fit
_FIT_EFOLDS = math.log(1e4)


@dataclass(frozen=True)
class SimConfig:
    """Monte-Carlo settings; times are in units of ``1/kappa``.

    ``duration`` is the recorded length after the ``burn_in`` transient.
    """

    dt: float = 0.01
    duration: float = 1310.72
    burn_in: float = 20.0
    n_realizations: int = 200
    seed: int = 0
    welch_segment: int = 16384
    welch_overlap: float = 0.5
    window: str = "hann"
    divergence_bound: float = 1e6

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigInvalid(f"dt must be positive, got {self.dt!r}")
        if not self.duration > 0:
            raise ConfigInvalid("duration must be positive")
        if self.burn_in < MIN_BURN_IN:
            raise ConfigInvalid(f"burn_in must be >= {MIN_BURN_IN} (units of 1/kappa)")
        if self.n_realizations < 1:
            raise ConfigInvalid("n_realizations must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigInvalid("seed must be an unsigned 64-bit integer")
        seg = int(self.welch_segment)
        if seg < 2 or seg & (seg - 1):
            raise ConfigInvalid(f"welch_segment must be a power of two, got {seg}")
        if not 0 <= self.welch_overlap < 1:
            raise ConfigInvalid("welch_overlap must lie in [0, 1)")
        if not self.divergence_bound > 0:
            raise ConfigInvalid("divergence_bound must be positive")

    @property
    def n_burn(self) -> int:
        return int(round(self.burn_in / self.dt))

    @property
    def n_samples(self) -> int:
        return int(round(self.duration / self.dt))

    def check_step(self, xi_q: float) -> None:
        rate = 0.5 * (1.0 + abs(xi_q))
        if self.dt * rate > MAX_STEP_RATE * (1 + 1e-12):
            raise ConfigInvalid(
                f"dt = {self.dt} too large: dt * max decay rate = {self.dt * rate:.4g} "
                f"> {MAX_STEP_RATE}"
            )


@dataclass(frozen=True)
class OutputSeries:
    """Recorded output quadratures (``plus``, ``minus``) and the intracavity ones."""

    plus: np.ndarray
    minus: np.ndarray
    cavity_plus: np.ndarray
    cavity_minus: np.ndarray
    dt: float

    def __iter__(self):
        # unpacks as the pair of output quadratures
        return iter((self.plus, self.minus))


def realization_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for realization ``index``; same for any scheduling."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index),)))


def _fit_growth(t, x, bound):
    logx = np.log(np.abs(x) + 1e-300)
    sel = logx >= math.log(bound) - _FIT_EFOLDS
    if sel.sum() < 3:
        return None
    slope, _ = np.polyfit(t[sel], logx[sel], 1)
    return float(slope)


def simulate_output_quadratures(
    resonator: ResonatorParams,
    baths: BathTemperatures,
    xi: float,
    cfg: SimConfig,
    realization: int = 0,
) -> OutputSeries:
    """Integrate one realization and return the output quadratures after burn-in.

    Raises
    ------
    ConfigInvalid
        If the step violates ``dt * max decay rate <= 0.02``.
    DivergenceDetected
        If any intracavity quadrature exceeds ``cfg.divergence_bound``.
    """
    xi_q = xi * resonator.q_loaded
    cfg.check_step(xi_q)
    dt = cfg.dt
    q_f = math.sqrt(resonator.feedline_fraction)
    q_u = math.sqrt(resonator.internal_fraction)
    s_f = math.sqrt(thermal_factor(resonator.f0, baths.t_feedline) * dt)
    s_d = math.sqrt(thermal_factor(resonator.f0, baths.t_damping) * dt)
    # amplified (+) quadrature decays at 1/2 - xi*Q/2, squeezed (-) at 1/2 + xi*Q/2
    poles = np.array([1.0 - (0.5 - 0.5 * xi_q) * dt, 1.0 - (0.5 + 0.5 * xi_q) * dt])

    rng = realization_rng(cfg.seed, realization)
    n_total = cfg.n_burn + cfg.n_samples
    cav = np.empty((2, n_total))
    out = np.empty((2, n_total))
    x_start = np.zeros(2)
    bound = cfg.divergence_bound
    k0 = 0
    while k0 < n_total:
        m = min(_CHUNK, n_total - k0)
        noise = rng.standard_normal((4, m))
        dw_f = s_f * noise[:2]
        drive = q_f * dw_f + (q_u * s_d) * noise[2:]
        for j in range(2):
            y, _ = lfilter([1.0], [1.0, -poles[j]], drive[j], zi=[poles[j] * x_start[j]])
            cav[j, k0] = x_start[j]
            cav[j, k0 + 1 : k0 + m] = y[:-1]
            x_start[j] = y[-1]
        seg = cav[:, k0 : k0 + m]
        over = np.abs(seg) > bound
        if over.any() or not np.all(np.isfinite(seg)):
            j, k = np.unravel_index(np.argmax(over, axis=None), over.shape)
            k_abs = k0 + int(k)
            t = np.arange(k_abs + 1) * dt
            rate = _fit_growth(t, cav[j, : k_abs + 1], bound)
            raise DivergenceDetected(
                f"quadrature {'+-'[j]} exceeded {bound:g} at t = {k_abs * dt:.4g}/kappa "
                f"(xi*Q = {xi_q:.4g})",
                time=k_abs * dt,
                growth_rate=rate,
            )
        out[:, k0 : k0 + m] = q_f * seg - dw_f / dt
        k0 += m

    keep = slice(cfg.n_burn, n_total)
    return OutputSeries(
        plus=out[0, keep],
        minus=out[1, keep],
        cavity_plus=cav[0, keep],
        cavity_minus=cav[1, keep],
        dt=dt,
    )


def _segments(x, nperseg, step):
    view = np.lib.stride_tricks.sliding_window_view(x, nperseg, axis=-1)
    return view[..., ::step, :]


def segment_spectra(x, dt, nperseg, overlap=0.5, window="hann", y=None):
    """Per-segment two-sided (cross-)periodograms at non-negative frequencies.

    Returns ``(omega, P)`` with ``omega`` the angular frequency grid and ``P``
    of shape ``(..., n_segments, nperseg // 2 + 1)``.  A white sequence of
    variance ``A/dt`` estimates ``A`` in every bin.
    """
    x = np.asarray(x, dtype=float)
    nperseg = int(nperseg)
    if x.shape[-1] < nperseg:
        raise TooShort(f"series of {x.shape[-1]} samples is shorter than one segment")
    step = max(1, int(round(nperseg * (1.0 - overlap))))
    win = get_window(window, nperseg)
    scale = dt / np.sum(win**2)
    fx = np.fft.rfft(_segments(x, nperseg, step) * win, axis=-1)
    if y is None:
        p = scale * (fx.real**2 + fx.imag**2)
    else:
        fy = np.fft.rfft(_segments(np.asarray(y, dtype=float), nperseg, step) * win, axis=-1)
        p = scale * np.conj(fx) * fy
    omega = 2.0 * np.pi * np.fft.rfftfreq(nperseg, d=dt)
    return omega, p


@dataclass(frozen=True)
class PsdEstimate:
    """Monte-Carlo spectra of both output quadratures with standard errors.

    Bins are reported as ``2*omega/omega_0``; values use the two-sided
    convention in which vacuum noise is 1/2.
    """

    two_omega_over_omega0: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    err_plus: np.ndarray
    err_minus: np.ndarray
    n_averages: int

    def omega(self, omega0: float) -> np.ndarray:
        return 0.5 * omega0 * self.two_omega_over_omega0


def _mean_and_error(per_seg, multi):
    """Mean over realizations (rows) when several, else over segments."""
    if multi:
        per_real = per_seg.mean(axis=-2)
        n = per_real.shape[0]
        mean = per_real.mean(axis=0)
        err = per_real.std(axis=0, ddof=1) / math.sqrt(n) if n > 1 else np.zeros_like(mean)
        return mean, err
    n = per_seg.shape[-2]
    mean = per_seg.mean(axis=-2)
    err = per_seg.std(axis=-2, ddof=1) / math.sqrt(n) if n > 1 else np.zeros_like(mean)
    return mean, err


def estimate_psd(series, cfg: SimConfig, q_loaded: float) -> PsdEstimate:
    """Welch estimate of the output quadrature spectra.

    ``series`` is a ``(plus, minus)`` pair; each entry is one record of shape
    ``(n,)`` or a stack ``(n_realizations, n)``.  With a stack, realizations
    are averaged at the PSD level and the error is their standard error; a
    single record uses the segment scatter instead.

    Raises
    ------
    TooShort
        If a record holds fewer than four segments' worth of samples.
    """
    plus, minus = (np.asarray(s, dtype=float) for s in series)
    if plus.shape != minus.shape:
        raise ConfigInvalid("quadrature series must have equal shapes")
    if plus.shape[-1] < 4 * cfg.welch_segment:
        raise TooShort(
            f"need >= 4 segments of {cfg.welch_segment} samples, got {plus.shape[-1]}"
        )
    multi = plus.ndim == 2
    kw = dict(dt=cfg.dt, nperseg=cfg.welch_segment, overlap=cfg.welch_overlap, window=cfg.window)
    omega, p_plus = segment_spectra(plus, **kw)
    _, p_minus = segment_spectra(minus, **kw)
    mp, ep = _mean_and_error(p_plus, multi)
    mm, em = _mean_and_error(p_minus, multi)
    n_avg = p_plus.shape[-2] * (plus.shape[0] if multi else 1)
    return PsdEstimate(
        two_omega_over_omega0=2.0 * omega / q_loaded,
        s_plus=mp,
        s_minus=mm,
        err_plus=ep,
        err_minus=em,
        n_averages=n_avg,
    )


@dataclass(frozen=True)
class CrossSpectrum:
    """Mean cross-spectrum between the output quadratures with per-part errors."""

    two_omega_over_omega0: np.ndarray
    mean: np.ndarray
    err_real: np.ndarray
    err_imag: np.ndarray

    def z_scores(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            zr = np.where(self.err_real > 0, self.mean.real / self.err_real, 0.0)
            zi = np.where(self.err_imag > 0, self.mean.imag / self.err_imag, 0.0)
        return np.concatenate([zr, zi])


@dataclass(frozen=True)
class MonteCarloResult:
    psd: PsdEstimate
    cross: CrossSpectrum
    xi: float
    resonator: ResonatorParams
    baths: BathTemperatures
    cfg: SimConfig

    def analytic(self) -> QuadratureSpectra:
        """Two-bath analytic spectra evaluated on the Monte-Carlo bins."""
        req = SpectrumRequest(
            self.resonator,
            self.baths,
            self.xi,
            omega_grid=self.psd.omega(self.resonator.omega0),
            variant=Variant.TWO_BATH,
        )
        return s_pm(req)


def _one_realization(args):
    resonator, baths, xi, cfg, index = args
    series = simulate_output_quadratures(resonator, baths, xi, cfg, realization=index)
    kw = dict(dt=cfg.dt, nperseg=cfg.welch_segment, overlap=cfg.welch_overlap, window=cfg.window)
    _, pp = segment_spectra(series.plus, **kw)
    _, pm = segment_spectra(series.minus, **kw)
    _, pc = segment_spectra(series.plus, y=series.minus, **kw)
    return pp.mean(axis=0), pm.mean(axis=0), pc.mean(axis=0), pp.shape[0]


def run_monte_carlo(
    resonator: ResonatorParams,
    baths: BathTemperatures,
    xi: float,
    cfg: SimConfig,
    threads: int = 1,
) -> MonteCarloResult:
    """Simulate ``cfg.n_realizations`` independent runs and average their spectra.

    Output is bit-identical for any ``threads``: every realization draws from
    its own seeded stream and the reduction runs in realization order.
    """
    cfg.check_step(xi * resonator.q_loaded)
    if cfg.n_samples < 4 * cfg.welch_segment:
        raise TooShort(
            f"duration {cfg.duration} holds fewer than 4 segments of {cfg.welch_segment} samples"
        )
    jobs = [(resonator, baths, xi, cfg, i) for i in range(cfg.n_realizations)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_one_realization, jobs))
    else:
        parts = [_one_realization(j) for j in jobs]

    pp = np.stack([p[0] for p in parts])
    pm = np.stack([p[1] for p in parts])
    pc = np.stack([p[2] for p in parts])
    n_seg = parts[0][3]
    r = cfg.n_realizations
    omega = 2.0 * np.pi * np.fft.rfftfreq(cfg.welch_segment, d=cfg.dt)
    two_w = 2.0 * omega / resonator.q_loaded

    def se(a):
        return a.std(axis=0, ddof=1) / math.sqrt(r) if r > 1 else np.zeros(a.shape[1])

    psd = PsdEstimate(
        two_omega_over_omega0=two_w,
        s_plus=pp.mean(axis=0),
        s_minus=pm.mean(axis=0),
        err_plus=se(pp),
        err_minus=se(pm),
        n_averages=n_seg * r,
    )
    cross = CrossSpectrum(
        two_omega_over_omega0=two_w,
        mean=pc.mean(axis=0),
        err_real=se(pc.real),
        err_imag=se(pc.imag),
    )
    return MonteCarloResult(psd, cross, xi, resonator, baths, cfg)


@dataclass(frozen=True)
class ComparisonReport:
    band: float
    rms_error: float
    max_z: float
    frac_z_below_3: float
    n_bins: int
    rms_tol: float
    z_tol: float
    quadratures: dict

    @property
    def passed(self) -> bool:
        return self.rms_error < self.rms_tol and self.max_z < self.z_tol

    def to_dict(self) -> dict:
        return {
            "band": self.band,
            "rms_error": self.rms_error,
            "max_z": self.max_z,
            "frac_z_below_3": self.frac_z_below_3,
            "n_bins": self.n_bins,
            "rms_tol": self.rms_tol,
            "z_tol": self.z_tol,
            "quadratures": self.quadratures,
            "pass": self.passed,
        }


def _z(diff, err):
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.abs(diff) / err
    return np.where(diff == 0, 0.0, z)


def compare_to_analytic(
    psd: PsdEstimate,
    spectra: QuadratureSpectra,
    band: float | None = None,
    rms_tol: float = 0.05,
    z_tol: float = 4.0,
) -> ComparisonReport:
    """Band-restricted agreement between a Monte-Carlo PSD and analytic spectra.

    ``band`` bounds ``|2 omega/omega_0|`` (default ``3/Q``).  The analytic
    curves are linearly interpolated onto the PSD bins.

    Raises
    ------
    BandMismatch
        If the analytic grid or the PSD bins do not cover the band.
    """
    if band is None:
        band = 3.0 / spectra.q_loaded
    x_an = spectra.two_omega_over_omega0
    order = np.argsort(x_an)
    x_an = x_an[order]
    x_mc = psd.two_omega_over_omega0
    sel = np.abs(x_mc) <= band * (1 + 1e-12)
    if sel.sum() == 0:
        raise BandMismatch(f"no Monte-Carlo bins inside |2w/w0| <= {band:.4g}")
    if x_mc.max() < band * (1 - 1e-9):
        raise BandMismatch("Monte-Carlo bins do not reach the band edge")
    xq = np.abs(x_mc[sel])
    # spectra are even in omega, so coverage is judged on |omega|
    xa, ia = np.unique(np.abs(x_an), return_index=True)
    if xa[0] > xq.min() * (1 + 1e-9) or xa[-1] < xq.max() * (1 - 1e-9):
        raise BandMismatch("analytic grid does not cover the comparison band")
    rel_all, z_all, per = [], [], {}
    for name, mc, err, an in (
        ("plus", psd.s_plus, psd.err_plus, spectra.s_plus),
        ("minus", psd.s_minus, psd.err_minus, spectra.s_minus),
    ):
        ref = np.interp(xq, xa, an[order][ia])
        diff = mc[sel] - ref
        rel = diff / ref
        z = _z(diff, err[sel])
        rel_all.append(rel)
        z_all.append(z)
        per[name] = {
            "rms_error": float(np.sqrt(np.mean(rel**2))),
            "max_z": float(np.max(z)),
        }
    rel = np.concatenate(rel_all)
    z = np.concatenate(z_all)
    return ComparisonReport(
        band=float(band),
        rms_error=float(np.sqrt(np.mean(rel**2))),
        max_z=float(np.max(z)),
        frac_z_below_3=float(np.mean(z < 3.0)),
        n_bins=int(sel.sum()),
        rms_tol=float(rms_tol),
        z_tol=float(z_tol),
        quadratures=per,
    )
