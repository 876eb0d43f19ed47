"""Command-line front end.

Exit codes: 0 success, 1 usage/config error, 2 physics-domain error
(threshold, divergence), 3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, bundled_configs, csv_text, json_text, load_config
from .core import LOSSLESS, BathTemperatures, ResonatorParams, xi_q_from_shift
from .errors import ConfigInvalid, PhysicsDomainError, ResqueezeError
from .material import material_table
from .mixing import predicted_tones, required_steps, simulate_mixing
from .montecarlo import compare_to_analytic, run_monte_carlo
from .spectrum import (
    SpectrumRequest,
    Variant,
    homodyne_spectrum,
    offset_grid,
    s_pm,
    squeezing_check,
    sweep,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PHYSICS = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _header(command: str, cfg: RunConfig) -> dict:
    return {"resqueeze": f"{__version__} {command}", "config_sha256": cfg.sha256()}


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


def _load(args) -> RunConfig:
    if args.config is None:
        raise ConfigInvalid("--config is required for this command")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def _spectrum_request(cfg: RunConfig, variant: Variant | None = None) -> SpectrumRequest:
    cfg.require("resonator", "baths", "xi")
    return SpectrumRequest(
        cfg.resonator,
        cfg.baths,
        cfg.xi,
        omega_grid=cfg.omega_grid(),
        variant=variant or cfg.spectrum.variant,
    )


def cmd_spectrum(args) -> int:
    cfg = _load(args)
    req = _spectrum_request(cfg)
    spectra = s_pm(req)
    report = squeezing_check(spectra)
    columns = {
        "omega_over_halfwidth": spectra.omega_over_halfwidth,
        "two_omega_over_omega0": spectra.two_omega_over_omega0,
        "s_plus": spectra.s_plus,
        "s_minus": spectra.s_minus,
        "is_squeezed": report.is_squeezed,
    }
    units = {"s_plus": "quanta (vacuum=0.5)", "s_minus": "quanta (vacuum=0.5)"}
    header = _header("spectrum", cfg)
    header["variant"] = req.variant.value
    header["xi_q"] = format(req.xi_q, ".17g")
    _write(args.out, "spectrum.csv", csv_text(columns, header, units))
    if cfg.spectrum.phi is not None:
        phis = np.asarray(cfg.spectrum.phi)
        s_phi = homodyne_spectrum(req, phis)
        cols = {"omega_over_halfwidth": spectra.omega_over_halfwidth}
        for phi, row in zip(phis, s_phi):
            cols[f"s_phi_{phi:.6g}"] = row
        _write(args.out, "homodyne.csv", csv_text(cols, header, {"omega_over_halfwidth": "1"}))
    i = report.best_index
    print(
        f"min S- = {report.min_s_minus:.4f} at omega/halfwidth = "
        f"{spectra.omega_over_halfwidth[i]:.4g} (margin {report.margin[i]:.4f}); "
        f"squeezed: {'yes' if report.any_squeezed else 'no'}"
    )
    zero = np.flatnonzero(spectra.omega == 0.0)
    if zero.size:
        print(f"S-(0) = {spectra.s_minus[zero[0]]:.4f}, S+(0) = {spectra.s_plus[zero[0]]:.6g}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load(args)
    cfg.require("resonator", "baths", "xi", "simulation")
    result = run_monte_carlo(cfg.resonator, cfg.baths, cfg.xi, cfg.simulation, threads=args.threads)
    xi_an = cfg.compare.xi if cfg.compare.xi is not None else cfg.xi
    analytic = s_pm(
        SpectrumRequest(
            cfg.resonator,
            cfg.baths,
            xi_an,
            omega_grid=result.psd.omega(cfg.resonator.omega0),
            variant=Variant.TWO_BATH,
        )
    )
    report = compare_to_analytic(
        result.psd,
        analytic,
        band=cfg.compare.band,
        rms_tol=cfg.compare.rms_tol,
        z_tol=cfg.compare.z_tol,
    )
    psd = result.psd
    columns = {
        "two_omega_over_omega0": psd.two_omega_over_omega0,
        "s_plus": psd.s_plus,
        "err_plus": psd.err_plus,
        "s_minus": psd.s_minus,
        "err_minus": psd.err_minus,
        "analytic_plus": analytic.s_plus,
        "analytic_minus": analytic.s_minus,
    }
    header = _header("simulate", cfg)
    header["n_averages"] = psd.n_averages
    units = {k: "quanta (vacuum=0.5)" for k in columns}
    units["two_omega_over_omega0"] = "1"
    _write(args.out, "psd.csv", csv_text(columns, header, units))
    doc = report.to_dict()
    doc.update(config_sha256=cfg.sha256(), xi_simulated=cfg.xi, xi_analytic=xi_an)
    _write(args.out, "comparison.json", json_text(doc))
    verdict = "pass" if report.passed else "FAIL"
    print(
        f"monte-carlo vs analytic over |2w/w0| <= {report.band:.4g}: "
        f"rms_error = {report.rms_error:.4f} (tol {report.rms_tol}), "
        f"max_z = {report.max_z:.3f} (tol {report.z_tol}) -> {verdict}"
    )
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_mixing(args) -> int:
    cfg = _load(args)
    cfg.require("resonator", "drive")
    d = cfg.drive
    sim = cfg.mixing
    header = _header("mixing", cfg)
    steps = required_steps(cfg.resonator, d, sim)
    if d.delta_f == 0 or steps > sim.max_steps:
        tones = predicted_tones(d, sim.max_order)
        columns = {
            "n": [t.n for t in tones],
            "frequency": [t.frequency for t in tones],
            "mixing_order": [t.mixing_order for t in tones],
        }
        header["note"] = "predicted comb only; dynamics run in scaled units (see mixing_scaled)"
        _write(args.out, "tones.csv", csv_text(columns, header, {"frequency": "Hz"}))
        print(f"note: {steps} integration steps exceed max_steps = {sim.max_steps};")
        print("      reporting the predicted comb only. Dynamics run in scaled units.")
        for t in tones:
            print(f"  n = {t.n:+d}  f = {t.frequency!r} Hz  ({t.identity})")
        return EXIT_OK
    spectrum = simulate_mixing(cfg.resonator, d, sim)
    tones = spectrum.tones
    columns = {
        "n": [t.n for t in tones],
        "frequency": [t.frequency for t in tones],
        "relative_power_db": [t.relative_power_db for t in tones],
        "detected": [t.detected for t in tones],
    }
    header["floor_db"] = format(spectrum.floor_db, ".6g")
    _write(args.out, "tones.csv", csv_text(columns, header, {"frequency": "Hz", "relative_power_db": "dB"}))
    print(f"spectral floor {spectrum.floor_db:.1f} dB below pump")
    for t in tones:
        flag = "detected" if t.detected else "-"
        print(f"  n = {t.n:+d}  f = {t.frequency:.10g}  {t.relative_power_db:9.2f} dB  {flag}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args)
    cfg.require("sweep_axes")
    base = _spectrum_request(cfg)
    result = sweep(base, cfg.sweep_axes, threads=args.threads)
    header = _header("sweep", cfg)
    header["excluded_points"] = result.n_excluded
    _write(args.out, "sweep.csv", csv_text(result.columns, header, {"omega": "rad/s"}))
    doc = {
        "axes": list(result.axes),
        "argmin": result.argmin,
        "n_rows": int(len(result.columns["s_minus"])),
        "n_excluded": result.n_excluded,
        "excluded": result.excluded,
        "config_sha256": cfg.sha256(),
    }
    _write(args.out, "sweep_argmin.json", json_text(doc))
    am = ", ".join(f"{k} = {v:.6g}" for k, v in result.argmin.items())
    print(f"argmin S-: {am}; excluded {result.n_excluded} point(s)")
    return EXIT_OK


def cmd_material(args) -> int:
    if args.omega_tau:
        values = args.omega_tau
    elif args.omega is not None and args.tau is not None:
        values = [args.omega * args.tau]
    else:
        raise ConfigInvalid("give --omega-tau values, or both --omega and --tau")
    rows = material_table(values)
    names = ("omega_tau", "semiconductor_ratio", "superconductor_ratio", "london_skin_ratio")
    columns = {n: [r[i] for r in rows] for i, n in enumerate(names)}
    text = csv_text(columns, units={n: "1" for n in names})
    sys.stdout.write(text)
    if args.out_given:
        _write(args.out, "material.csv", text)
    return EXIT_OK


def cmd_estimate_xiq(args) -> int:
    xi_q = xi_q_from_shift(args.f_dark, args.f_illuminated, args.q)
    doc = {
        "f_dark": args.f_dark,
        "f_illuminated": args.f_illuminated,
        "q_loaded": args.q,
        "xi_q": xi_q,
        "convention": "xi = |f_dark - f_illuminated| / (2 f_dark)",
        "above_threshold": xi_q > 1.0,
    }
    sys.stdout.write(json_text(doc))
    return EXIT_OK


def repro_checks() -> list[tuple[str, bool, str]]:
    """Worked example, equilibrium flatness and lossless minimum-uncertainty checks."""
    checks = []
    res = ResonatorParams(5e9, 2e4, 100.0)
    req = SpectrumRequest(res, BathTemperatures(0.01, 10.0), 0.01, omega_grid=[0.0])
    sp = s_pm(req)
    s_minus = float(sp.s_minus[0])
    squeezed = squeezing_check(sp).any_squeezed
    ok = 0.200 <= s_minus <= 0.215 and squeezed
    checks.append(("worked example S-(0) in [0.200, 0.215], squeezed", ok, f"S-(0) = {s_minus:.4f}"))

    worst = 0.0
    for variant in Variant:
        req = SpectrumRequest(
            res, BathTemperatures(10.0, 10.0), 0.0, omega_grid=offset_grid(res, 2000.0, 10000),
            variant=variant,
        )
        sp = s_pm(req)
        a = req.noise_factors()[1]
        worst = max(worst, np.max(np.abs(sp.s_plus / a - 1)), np.max(np.abs(sp.s_minus / a - 1)))
    checks.append(("equilibrium flatness |S/A - 1| < 1e-12", worst < 1e-12, f"max dev = {worst:.2e}"))

    lossless = ResonatorParams(5e9, LOSSLESS, 100.0)
    worst = 0.0
    for xi in np.linspace(0.0, 0.99 / 100.0, 100):
        sp = s_pm(SpectrumRequest(lossless, BathTemperatures(0.0, 0.0), xi, omega_grid=[0.0]))
        worst = max(worst, abs(sp.s_plus[0] * sp.s_minus[0] / 0.25 - 1))
    point = s_pm(SpectrumRequest(lossless, BathTemperatures(0.0, 0.0), 1 / 300.0, omega_grid=[0.0]))
    closed = math.isclose(point.s_minus[0], 0.125, rel_tol=1e-12) and math.isclose(
        point.s_plus[0], 2.0, rel_tol=1e-12
    )
    checks.append(
        (
            "lossless S+ S- = A^2 (1e-12), (0.125, 2.0) at xi = 1/(3 Q_f)",
            worst < 1e-12 and closed,
            f"max dev = {worst:.2e}",
        )
    )
    return checks


def cmd_repro_paper(args) -> int:
    checks = repro_checks()
    width = max(len(c[0]) for c in checks)
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}")
    return EXIT_OK if all(c[1] for c in checks) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="config path or bundled name: " + ", ".join(bundled_configs()))
    common.add_argument("--out", type=Path, default=None, help="output directory (default .)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=None, help="override simulation.seed")

    parser = _Parser(prog="resqueeze", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("spectrum", parents=[common], help="analytic S+/S- CSV").set_defaults(
        func=cmd_spectrum
    )
    sub.add_parser("simulate", parents=[common], help="Monte-Carlo PSD vs analytic").set_defaults(
        func=cmd_simulate
    )
    sub.add_parser("mixing", parents=[common], help="intermodulation comb").set_defaults(
        func=cmd_mixing
    )
    sub.add_parser("sweep", parents=[common], help="design sweep of S-").set_defaults(
        func=cmd_sweep
    )
    p = sub.add_parser("material", parents=[common], help="material-response ratio table")
    p.add_argument("--omega-tau", type=float, nargs="+")
    p.add_argument("--omega", type=float)
    p.add_argument("--tau", type=float)
    p.set_defaults(func=cmd_material)
    p = sub.add_parser("estimate-xiq", parents=[common], help="xi*Q from a quasi-static shift")
    p.add_argument("--f-dark", type=float, required=True)
    p.add_argument("--f-illuminated", type=float, required=True)
    p.add_argument("--q", type=float, required=True, help="loaded quality factor")
    p.set_defaults(func=cmd_estimate_xiq)
    sub.add_parser("repro-paper", parents=[common], help="worked-example checks").set_defaults(
        func=cmd_repro_paper
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.out_given = args.out is not None
    if args.out is None:
        args.out = Path(".")
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicsDomainError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except ResqueezeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
