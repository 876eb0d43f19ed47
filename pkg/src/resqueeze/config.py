"""JSON run configuration, strict parsing, and CSV/JSON emission.

A run configuration is one JSON object with optional sections::

    {
      "resonator":  {"f0": 5e9, "q_unloaded": 2e4, "q_feedline": 100},
      "baths":      {"t_feedline": 0.01, "t_damping": 10},
      "modulation": {"xi": 0.01},                    # or {"xi_q": 0.5}
      "spectrum":   {"variant": "as_printed", "halfwidths": 10, "n_points": 201,
                     "omega": [...], "phi": [...]},
      "simulation": {"dt": 0.01, "duration": 1310.72, "seed": 0, ...},
      "compare":    {"band": null, "rms_tol": 0.05, "z_tol": 4.0, "xi": null},
      "drive":      {"f_pump": 1.0, "delta_f_linewidths": 0.05, "xi_q": 0.5, ...},
      "mixing":     {"steps_per_period": 32, ...},
      "sweep":      {"axes": {"q_feedline": [50, 100, 200, 400]}}
    }

``q_unloaded`` may be the string ``"lossless"``.  Unknown keys and ill-typed
values raise :class:`~resqueeze.errors.ConfigInvalid` before any computation.
"""

from __future__ import annotations

import dataclasses
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .core import LOSSLESS, BathTemperatures, ResonatorParams
from .errors import ConfigInvalid
from .mixing import DriveConfig, MixingSimConfig
from .montecarlo import SimConfig
from .spectrum import SWEEP_AXES, Variant, offset_grid

SECTIONS = (
    "resonator",
    "baths",
    "modulation",
    "spectrum",
    "simulation",
    "compare",
    "drive",
    "mixing",
    "sweep",
)


def _number(value, where, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigInvalid(f"{where}: expected a number, got {value!r}")
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigInvalid(f"{where}: expected an integer, got {value!r}")
        return int(value)
    if not math.isfinite(value):
        raise ConfigInvalid(f"{where}: expected a finite number, got {value!r}")
    return float(value)


def _numbers(value, where):
    if not isinstance(value, list) or not value:
        raise ConfigInvalid(f"{where}: expected a non-empty list of numbers")
    return [_number(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _check_keys(mapping, allowed, where):
    if not isinstance(mapping, dict):
        raise ConfigInvalid(f"{where}: expected an object")
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigInvalid(f"{where}: unknown key(s) {', '.join(unknown)}")


def _dataclass_from(cls, mapping, where, skip=()):
    """Build ``cls`` from a mapping whose keys must be ``cls`` fields."""
    fields = {f.name: f for f in dataclasses.fields(cls) if f.name not in skip}
    _check_keys(mapping, fields, where)
    kwargs = {}
    for name, value in mapping.items():
        kind = fields[name].type
        if kind in ("int", int):
            kwargs[name] = _number(value, f"{where}.{name}", integer=True)
        elif kind in ("str", str):
            if not isinstance(value, str):
                raise ConfigInvalid(f"{where}.{name}: expected a string")
            kwargs[name] = value
        else:
            kwargs[name] = _number(value, f"{where}.{name}")
    return cls(**kwargs)


@dataclass(frozen=True)
class SpectrumSection:
    variant: Variant = Variant.AS_PRINTED
    halfwidths: float = 10.0
    n_points: int = 201
    omega: tuple | None = None
    phi: tuple | None = None


@dataclass(frozen=True)
class CompareSection:
    band: float | None = None
    rms_tol: float = 0.05
    z_tol: float = 4.0
    xi: float | None = None


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration; absent sections are ``None``."""

    resonator: ResonatorParams | None = None
    baths: BathTemperatures | None = None
    xi: float | None = None
    spectrum: SpectrumSection = field(default_factory=SpectrumSection)
    simulation: SimConfig | None = None
    compare: CompareSection = field(default_factory=CompareSection)
    drive: DriveConfig | None = None
    mixing: MixingSimConfig = field(default_factory=MixingSimConfig)
    sweep_axes: dict | None = None

    def require(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigInvalid(f"config is missing section(s): {', '.join(missing)}")

    def omega_grid(self) -> np.ndarray:
        self.require("resonator")
        if self.spectrum.omega is not None:
            return np.asarray(self.spectrum.omega, dtype=float)
        return offset_grid(self.resonator, self.spectrum.halfwidths, self.spectrum.n_points)

    def with_seed(self, seed: int) -> "RunConfig":
        self.require("simulation")
        return dataclasses.replace(
            self, simulation=dataclasses.replace(self.simulation, seed=int(seed))
        )

    def resolved(self) -> dict:
        """Plain-JSON view of the configuration with every default filled in."""

        def plain(obj):
            if dataclasses.is_dataclass(obj):
                return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
            if isinstance(obj, Variant):
                return obj.value
            if isinstance(obj, (tuple, list)):
                return [plain(v) for v in obj]
            if isinstance(obj, dict):
                return {k: plain(v) for k, v in obj.items()}
            if isinstance(obj, float) and math.isinf(obj):
                return "lossless"
            return obj

        return plain(self)

    def sha256(self) -> str:
        text = json.dumps(self.resolved(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def _axis_values(spec, where):
    if isinstance(spec, list):
        return _numbers(spec, where)
    _check_keys(spec, ("start", "stop", "num", "log"), where)
    try:
        start = _number(spec["start"], f"{where}.start")
        stop = _number(spec["stop"], f"{where}.stop")
        num = _number(spec["num"], f"{where}.num", integer=True)
    except KeyError as exc:
        raise ConfigInvalid(f"{where}: missing {exc.args[0]!r}") from None
    log = spec.get("log", False)
    if not isinstance(log, bool):
        raise ConfigInvalid(f"{where}.log: expected true/false")
    if num < 1:
        raise ConfigInvalid(f"{where}.num must be >= 1")
    if log:
        return np.geomspace(start, stop, num).tolist()
    return np.linspace(start, stop, num).tolist()


def parse_config(doc: dict) -> RunConfig:
    """Validate a configuration document and build a :class:`RunConfig`."""
    _check_keys(doc, SECTIONS, "config")
    out = {}
    resonator = None
    if "resonator" in doc:
        sec = doc["resonator"]
        _check_keys(sec, ("f0", "q_unloaded", "q_feedline"), "resonator")
        for key in ("f0", "q_unloaded", "q_feedline"):
            if key not in sec:
                raise ConfigInvalid(f"resonator: missing {key!r}")
        qu = sec["q_unloaded"]
        qu = LOSSLESS if qu == "lossless" else _number(qu, "resonator.q_unloaded")
        resonator = ResonatorParams(
            f0=_number(sec["f0"], "resonator.f0"),
            q_unloaded=qu,
            q_feedline=_number(sec["q_feedline"], "resonator.q_feedline"),
        )
        out["resonator"] = resonator
    if "baths" in doc:
        sec = doc["baths"]
        _check_keys(sec, ("t_feedline", "t_damping"), "baths")
        out["baths"] = BathTemperatures(
            t_feedline=_number(sec.get("t_feedline", 0.0), "baths.t_feedline"),
            t_damping=_number(sec.get("t_damping", 0.0), "baths.t_damping"),
        )
    if "modulation" in doc:
        sec = doc["modulation"]
        _check_keys(sec, ("xi", "xi_q"), "modulation")
        if ("xi" in sec) == ("xi_q" in sec):
            raise ConfigInvalid("modulation: give exactly one of 'xi' or 'xi_q'")
        if "xi" in sec:
            out["xi"] = _number(sec["xi"], "modulation.xi")
        else:
            if resonator is None:
                raise ConfigInvalid("modulation.xi_q needs a resonator section")
            out["xi"] = _number(sec["xi_q"], "modulation.xi_q") / resonator.q_loaded
    if "spectrum" in doc:
        sec = doc["spectrum"]
        _check_keys(sec, ("variant", "halfwidths", "n_points", "omega", "phi"), "spectrum")
        kw = {}
        if "variant" in sec:
            try:
                kw["variant"] = Variant(sec["variant"])
            except ValueError:
                choices = ", ".join(v.value for v in Variant)
                raise ConfigInvalid(f"spectrum.variant must be one of {choices}") from None
        if "halfwidths" in sec:
            kw["halfwidths"] = _number(sec["halfwidths"], "spectrum.halfwidths")
        if "n_points" in sec:
            kw["n_points"] = _number(sec["n_points"], "spectrum.n_points", integer=True)
        if "omega" in sec:
            kw["omega"] = tuple(_numbers(sec["omega"], "spectrum.omega"))
        if "phi" in sec:
            kw["phi"] = tuple(_numbers(sec["phi"], "spectrum.phi"))
        out["spectrum"] = SpectrumSection(**kw)
    if "simulation" in doc:
        sec = doc["simulation"]
        if "seed" in sec and (not isinstance(sec["seed"], int) or isinstance(sec["seed"], bool)):
            raise ConfigInvalid("simulation.seed: expected an integer")
        out["simulation"] = _dataclass_from(SimConfig, sec, "simulation")
    if "compare" in doc:
        sec = doc["compare"]
        _check_keys(sec, ("band", "band_linewidths", "rms_tol", "z_tol", "xi", "xi_q"), "compare")
        kw = {}
        if "band" in sec and "band_linewidths" in sec:
            raise ConfigInvalid("compare: give 'band' or 'band_linewidths', not both")
        if "band" in sec:
            kw["band"] = _number(sec["band"], "compare.band")
        if "band_linewidths" in sec:
            if resonator is None:
                raise ConfigInvalid("compare.band_linewidths needs a resonator section")
            kw["band"] = _number(sec["band_linewidths"], "compare.band_linewidths") / (
                resonator.q_loaded
            )
        for key in ("rms_tol", "z_tol"):
            if key in sec:
                kw[key] = _number(sec[key], f"compare.{key}")
        if "xi" in sec and "xi_q" in sec:
            raise ConfigInvalid("compare: give 'xi' or 'xi_q', not both")
        if "xi" in sec:
            kw["xi"] = _number(sec["xi"], "compare.xi")
        if "xi_q" in sec:
            if resonator is None:
                raise ConfigInvalid("compare.xi_q needs a resonator section")
            kw["xi"] = _number(sec["xi_q"], "compare.xi_q") / resonator.q_loaded
        out["compare"] = CompareSection(**kw)
    if "drive" in doc:
        sec = doc["drive"]
        allowed = (
            "f_pump",
            "delta_f",
            "delta_f_linewidths",
            "xi",
            "xi_q",
            "pump_amplitude",
            "kerr_shift",
        )
        _check_keys(sec, allowed, "drive")
        if resonator is None:
            raise ConfigInvalid("drive needs a resonator section")
        if ("delta_f" in sec) == ("delta_f_linewidths" in sec):
            raise ConfigInvalid("drive: give exactly one of 'delta_f' or 'delta_f_linewidths'")
        if ("xi" in sec) == ("xi_q" in sec):
            raise ConfigInvalid("drive: give exactly one of 'xi' or 'xi_q'")
        if "delta_f" in sec:
            delta_f = _number(sec["delta_f"], "drive.delta_f")
        else:
            delta_f = _number(sec["delta_f_linewidths"], "drive.delta_f_linewidths") * (
                resonator.linewidth_hz
            )
        if "xi" in sec:
            xi = _number(sec["xi"], "drive.xi")
        else:
            xi = _number(sec["xi_q"], "drive.xi_q") / resonator.q_loaded
        out["drive"] = DriveConfig(
            f_pump=_number(sec.get("f_pump", resonator.f0), "drive.f_pump"),
            delta_f=delta_f,
            xi=xi,
            pump_amplitude=_number(sec.get("pump_amplitude", 1.0), "drive.pump_amplitude"),
            kerr_shift=_number(sec.get("kerr_shift", 0.0), "drive.kerr_shift"),
        )
    if "mixing" in doc:
        out["mixing"] = _dataclass_from(MixingSimConfig, doc["mixing"], "mixing")
    if "sweep" in doc:
        sec = doc["sweep"]
        _check_keys(sec, ("axes",), "sweep")
        axes = sec.get("axes")
        _check_keys(axes, SWEEP_AXES, "sweep.axes")
        if not 1 <= len(axes) <= 2:
            raise ConfigInvalid("sweep.axes: give one or two axes")
        out["sweep_axes"] = {k: _axis_values(v, f"sweep.axes.{k}") for k, v in axes.items()}
    return RunConfig(**out)


def bundled_configs() -> list[str]:
    root = resources.files("resqueeze") / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_config(ref: str | Path) -> RunConfig:
    """Load a configuration from a path or by bundled name (e.g. ``paper_example``)."""
    path = Path(ref)
    if path.is_file():
        text = path.read_text()
    else:
        name = str(ref)
        name = name[:-5] if name.endswith(".json") else name
        res = resources.files("resqueeze") / "configs" / f"{name}.json"
        if not res.is_file():
            raise ConfigInvalid(
                f"no config file {str(ref)!r} and no bundled config of that name "
                f"(bundled: {', '.join(bundled_configs())})"
            )
        text = res.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"{ref}: invalid JSON ({exc})") from None
    return parse_config(doc)


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def csv_text(columns: dict, header: dict | None = None, units: dict | None = None) -> str:
    """Comma-separated table with ``#``-prefixed header lines."""
    buf = io.StringIO()
    for key, value in (header or {}).items():
        buf.write(f"# {key}: {value}\n")
    if units:
        buf.write("# units: " + ", ".join(f"{k}={units.get(k, '-')}" for k in columns) + "\n")
    buf.write(",".join(columns) + "\n")
    arrays = [np.asarray(v) for v in columns.values()]
    n = len(arrays[0]) if arrays else 0
    for i in range(n):
        buf.write(",".join(format_value(a[i]) for a in arrays) + "\n")
    return buf.getvalue()


def json_text(obj) -> str:
    def default(o):
        if isinstance(o, np.generic):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        raise TypeError(f"not JSON serializable: {type(o).__name__}")

    return json.dumps(obj, sort_keys=True, indent=2, default=default) + "\n"
