"""Closed-form homodyne output spectra below the parametric threshold.

With the resonator frequency modulated at twice its resonance, the reflected
field is amplified in one quadrature and de-amplified in the other.  Writing
``w = 2*omega/omega_0`` and ``D(+/-) = w**2 + (1/Q -/+ xi)**2`` the quadrature
spectra are::

    S(+/-) = A * {1 - 4 (1/Q_u -/+ xi) / (Q_f D)} + A * 4 / (Q_f Q_u D)

where ``A = (1/2) coth(hbar omega_0 / 2 k_B T_d)``.  ``S+`` is the amplified
quadrature and ``S-`` the squeezed one; vacuum squeezing means ``S- < 1/2``.

The brace term is evaluated in the algebraically identical form
``(w**2 + (1/Q_u - 1/Q_f -/+ xi)**2) / D``, which avoids the catastrophic
cancellation of the subtractive form near strong squeezing.
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import BathTemperatures, Modulation, ResonatorParams, classify_regime, thermal_factor
from .errors import ConfigInvalid, EmptyGrid, ThresholdViolation

VACUUM_LEVEL = 0.5


class Variant(enum.Enum):
    """How the two bath temperatures weight the output noise.

    ``AS_PRINTED`` uses a single factor ``A`` built from the damping-port
    temperature for both terms (``T_f`` unused).  ``TWO_BATH`` weights the
    promptly reflected feedline noise by ``A(T_f)`` and the internal-loss noise
    by ``A(T_d)``, which is what the two-port Langevin model produces.
    """

    AS_PRINTED = "as_printed"
    TWO_BATH = "two_bath"


@dataclass(frozen=True)
class SpectrumRequest:
    resonator: ResonatorParams
    baths: BathTemperatures
    xi: float
    omega_grid: np.ndarray = field(default_factory=lambda: np.zeros(1))
    variant: Variant = Variant.AS_PRINTED

    def __post_init__(self):
        grid = np.atleast_1d(np.asarray(self.omega_grid, dtype=float))
        if grid.ndim != 1 or not np.all(np.isfinite(grid)):
            raise ConfigInvalid("omega_grid must be a finite 1-d array")
        object.__setattr__(self, "omega_grid", grid)
        if not (math.isfinite(self.xi) and self.xi >= 0):
            raise ConfigInvalid(f"xi must be >= 0, got {self.xi!r}")
        object.__setattr__(self, "variant", Variant(self.variant))

    @property
    def xi_q(self) -> float:
        return self.xi * self.resonator.q_loaded

    def noise_factors(self) -> tuple[float, float]:
        """``(A_f, A_d)`` weighting the feedline and internal-loss terms."""
        f0 = self.resonator.f0
        a_d = thermal_factor(f0, self.baths.t_damping)
        if self.variant is Variant.AS_PRINTED:
            return a_d, a_d
        return thermal_factor(f0, self.baths.t_feedline), a_d


@dataclass(frozen=True)
class QuadratureSpectra:
    """Amplified (``s_plus``) and squeezed (``s_minus``) spectra on an offset grid.

    ``omega`` holds angular offsets from the carrier in rad/s.
    """

    omega: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    omega0: float
    q_loaded: float

    @property
    def two_omega_over_omega0(self) -> np.ndarray:
        return 2.0 * self.omega / self.omega0

    @property
    def omega_over_halfwidth(self) -> np.ndarray:
        return self.q_loaded * self.two_omega_over_omega0


def offset_grid(resonator: ResonatorParams, halfwidths: float, n: int) -> np.ndarray:
    """``n`` offsets spanning ``+-halfwidths`` resonance half-widths (rad/s).

    The grid is exactly mirror-symmetric; odd ``n`` contains ``omega = 0``.
    """
    n = int(n)
    if n < 1:
        raise ConfigInvalid("grid needs at least one point")
    span = halfwidths * 0.5 * resonator.kappa
    if n == 1:
        return np.zeros(1)
    if n % 2:
        pos = np.linspace(0.0, span, n // 2 + 1)
        return np.concatenate([-pos[:0:-1], pos])
    step = 2.0 * span / (n - 1)
    pos = step * (np.arange(n // 2) + 0.5)
    return np.concatenate([-pos[::-1], pos])


def _check_threshold(req: SpectrumRequest) -> None:
    regime = classify_regime(req.resonator, Modulation.primary(req.resonator, req.xi))
    if not regime.sub_threshold:
        raise ThresholdViolation(regime.xi_q)


def s_pm(req: SpectrumRequest) -> QuadratureSpectra:
    """Evaluate ``S+`` and ``S-`` on ``req.omega_grid``.

    Raises
    ------
    ThresholdViolation
        If ``xi*Q >= 1``; the stationary derivation does not hold there.
    """
    _check_threshold(req)
    res = req.resonator
    a_f, a_d = req.noise_factors()
    iqu, iqf = res.inv_q_unloaded, res.inv_q_feedline
    iq = iqu + iqf
    xi = req.xi
    w2 = (2.0 * req.omega_grid / res.omega0) ** 2

    def branch(sign):
        den = w2 + (iq - sign * xi) ** 2
        reflected = (w2 + (iqu - iqf - sign * xi) ** 2) / den
        internal = 4.0 * iqf * iqu / den
        return a_f * reflected + a_d * internal

    return QuadratureSpectra(
        omega=req.omega_grid.copy(),
        s_plus=branch(+1.0),
        s_minus=branch(-1.0),
        omega0=res.omega0,
        q_loaded=res.q_loaded,
    )


def homodyne_spectrum(req: SpectrumRequest, phi):
    """Homodyne detector spectrum at local-oscillator phase ``phi`` (radians).

    ``phi = 0`` selects the amplified quadrature.  Returns shape
    ``(len(omega),)`` for scalar ``phi`` and ``(len(phi), len(omega))`` otherwise.
    """
    spectra = s_pm(req)
    phi = np.asarray(phi, dtype=float)
    c2 = np.cos(phi)[..., None] ** 2
    s2 = np.sin(phi)[..., None] ** 2
    return c2 * spectra.s_plus + s2 * spectra.s_minus


@dataclass(frozen=True)
class SqueezingReport:
    omega: np.ndarray
    is_squeezed: np.ndarray
    margin: np.ndarray

    @property
    def any_squeezed(self) -> bool:
        return bool(np.any(self.is_squeezed))

    @property
    def best_index(self) -> int:
        return int(np.argmax(self.margin))

    @property
    def min_s_minus(self) -> float:
        return float(VACUUM_LEVEL - self.margin[self.best_index])


def squeezing_check(spectra: QuadratureSpectra) -> SqueezingReport:
    """Flag grid points where the squeezed quadrature is strictly below vacuum."""
    margin = VACUUM_LEVEL - spectra.s_minus
    return SqueezingReport(
        omega=spectra.omega, is_squeezed=spectra.s_minus < VACUUM_LEVEL, margin=margin
    )


SWEEP_AXES = ("xi", "q_feedline", "t_damping", "omega")


@dataclass
class SweepResult:
    """Flattened sweep table.

    ``columns`` maps each swept parameter plus ``omega``, ``s_plus`` and
    ``s_minus`` to equal-length arrays.  ``excluded`` lists the parameter
    points dropped for being at or above threshold.
    """

    axes: tuple[str, ...]
    columns: dict
    excluded: list
    argmin: dict

    @property
    def n_excluded(self) -> int:
        return len(self.excluded)


def _request_at(base: SpectrumRequest, point: dict) -> SpectrumRequest:
    req = base
    if "xi" in point:
        req = replace(req, xi=float(point["xi"]))
    if "q_feedline" in point:
        req = replace(req, resonator=replace(req.resonator, q_feedline=float(point["q_feedline"])))
    if "t_damping" in point:
        req = replace(req, baths=replace(req.baths, t_damping=float(point["t_damping"])))
    return req


def sweep(base: SpectrumRequest, axes: dict, threads: int = 1) -> SweepResult:
    """Grid-evaluate ``S+/-`` over up to two parameter axes.

    ``axes`` maps axis names from :data:`SWEEP_AXES` to value sequences, in
    the order they should vary (last fastest).  An ``omega`` axis replaces the
    base request's grid.  Above-threshold points are excluded, not errors.
    """
    names = tuple(axes)
    if not 1 <= len(names) <= 2:
        raise ConfigInvalid("sweep takes one or two axes")
    for name in names:
        if name not in SWEEP_AXES:
            raise ConfigInvalid(f"unknown sweep axis {name!r}; choose from {SWEEP_AXES}")
        if len(axes[name]) == 0:
            raise ConfigInvalid(f"sweep axis {name!r} is empty")
    if "omega" in axes:
        base = replace(base, omega_grid=np.asarray(axes["omega"], dtype=float))
    param_names = [n for n in names if n != "omega"]
    points = [
        dict(zip(param_names, values))
        for values in itertools.product(*(axes[n] for n in param_names))
    ]

    def evaluate(point):
        req = _request_at(base, point)
        try:
            return s_pm(req)
        except ThresholdViolation:
            return None

    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(evaluate, points))
    else:
        results = [evaluate(p) for p in points]

    cols = {n: [] for n in param_names}
    cols.update(omega=[], s_plus=[], s_minus=[])
    excluded = []
    for point, spec in zip(points, results):
        if spec is None:
            excluded.append(point)
            continue
        m = spec.omega.size
        for n in param_names:
            cols[n].append(np.full(m, float(point[n])))
        cols["omega"].append(spec.omega)
        cols["s_plus"].append(spec.s_plus)
        cols["s_minus"].append(spec.s_minus)
    if not cols["omega"]:
        raise EmptyGrid(f"all {len(points)} sweep points are at or above threshold")
    columns = {k: np.concatenate(v) for k, v in cols.items()}
    i = int(np.argmin(columns["s_minus"]))
    argmin = {k: float(v[i]) for k, v in columns.items()}
    return SweepResult(axes=names, columns=columns, excluded=excluded, argmin=argmin)
