"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 simulation failure,
4 reproduction-tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .comb import CombParams, afc_decay_model, build_comb, propagate
from .config import ExperimentConfig
from .fitting import fit_afc_decay, fit_mims, fit_power_law
from .harness import RunReport, VERSION, reproduce, run_qubit_tomography, run_spinwave
from .presets import PRESET_NAMES
from .tomography import (TomoCounts, classical_bound_weak_coherent,
                         direct_inversion, fidelity, pauli_expectations, purity,
                         white_noise_fidelity)
from .waveform import gaussian_pulse


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.trials is not None:
        cfg.n_trials = args.trials
    cfg.validate()
    return cfg


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_report(report: RunReport, out: Path) -> None:
    report.write(out / "report.json")
    for name, hist in report.histograms.items():
        hist.to_csv(out / f"{name}.csv")
    print(f"report written to {out / 'report.json'}")


def _cmd_simulate(args) -> int:
    cfg = _load_config(args)
    out = _out_dir(args)
    if args.what == "afc":
        params = CombParams(
            comb_period_hz=cfg.comb_period_hz, finesse=cfg.comb_finesse,
            peak_od=cfg.comb_peak_od, background_od=cfg.comb_background_od,
            bandwidth_hz=cfg.comb_bandwidth_hz, tooth_shape=cfg.comb_tooth_shape,
            passes=cfg.comb_passes, zeeman_split_hz=cfg.zeeman_split_hz)
        spectrum = build_comb(params)
        pulse = gaussian_pulse(cfg.input_fwhm_seconds, 0.0, 16e6)
        echo = propagate(pulse, spectrum)
        echo.output_waveform.to_csv(out / "echo_waveform.csv")
        result = {
            "echo_time_s": echo.echo_time_s,
            "echo_efficiency": echo.echo_efficiency,
            "decay_model_eta": afc_decay_model(
                1.0 / cfg.comb_period_hz, cfg.afc_eta0, cfg.afc_t2_seconds,
                cfg.afc_mod_depth, cfg.zeeman_split_hz),
            "provenance": {"config_hash": cfg.config_hash(), "seed": cfg.seed,
                           "version": VERSION},
        }
        (out / "report.json").write_text(
            json.dumps(result, indent=2, sort_keys=True) + "\n")
        print(f"echo at {echo.echo_time_s * 1e6:.3f} us, "
              f"efficiency {echo.echo_efficiency:.4f}")
        return 0
    if args.what == "spinwave":
        report = run_spinwave(cfg)
        _write_report(report, out)
        s = report.metrics["summary"]
        print(f"eta = {s['eta']:.4f}  SNR = {s['snr']:.2f}  mu1 = {s['mu1']:.4f}")
        return 0
    report = run_qubit_tomography(cfg)
    _write_report(report, out)
    t = report.tomography
    print(f"F = {t['fidelity_avg']:.4f}  P = {t['purity_avg']:.4f}")
    return 0


def _read_xy_csv(path) -> tuple[np.ndarray, np.ndarray]:
    rows = []
    with open(path) as fh:
        header = fh.readline()
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) >= 2:
                rows.append((float(parts[0]), float(parts[1])))
    if len(rows) < 3:
        raise ValueError(f"not enough data rows in {path}")
    arr = np.array(rows)
    return arr[:, 0], arr[:, 1]


def _cmd_fit(args) -> int:
    x, y = _read_xy_csv(args.data)
    if args.model == "afc":
        fit = fit_afc_decay(x, y)
    elif args.model == "mims":
        fit = fit_mims(x, y)
    else:
        fit = fit_power_law(x, y)
    out = _out_dir(args)
    (out / f"fit_{args.model}.json").write_text(
        json.dumps(fit.as_dict(), indent=2, sort_keys=True) + "\n")
    for name, value, ci in zip(fit.names, fit.params, fit.ci95):
        print(f"{name} = {value:.6g} +- {ci:.3g} (95% CI)")
    if not fit.converged:
        print("warning: fit did not converge", file=sys.stderr)
        return 3
    return 0


def _cmd_tomo(args) -> int:
    with open(args.counts) as fh:
        data = json.load(fh)
    tc = TomoCounts(counts=data["counts"], n_trials=data["n_trials"],
                    noise=data.get("noise", {}))
    sx, sy, sz = pauli_expectations(tc, subtract_noise=args.subtract_noise)
    dm = direct_inversion([sx, sy, sz])
    target = np.array(data.get("target", [1, 1])) / np.sqrt(2)
    f = fidelity(dm, target)
    p = purity(dm)
    result = {
        "expectations": {"sx": sx, "sy": sy, "sz": sz},
        "rho": [[[dm.matrix[i, j].real, dm.matrix[i, j].imag]
                 for j in range(2)] for i in range(2)],
        "rescaled": dm.rescaled,
        "fidelity": f,
        "purity": p,
    }
    if "snr" in data:
        result["white_noise_fidelity"] = white_noise_fidelity(data["snr"])
    if "mu_in" in data and "eta" in data:
        result["classical_bound_weak_coherent"] = classical_bound_weak_coherent(
            data["mu_in"], data["eta"])
    out = _out_dir(args)
    (out / "tomo_report.json").write_text(
        json.dumps(result, indent=2, sort_keys=True) + "\n")
    print(f"F = {f:.4f}  P = {p:.4f}  <sx,sy,sz> = ({sx:.3f}, {sy:.3f}, {sz:.3f})")
    return 0


def _cmd_reproduce(args) -> int:
    out = _out_dir(args)
    report, passed = reproduce(args.preset, out, seed=args.seed)
    for check in report.checks or []:
        status = "PASS" if check["pass"] else ("FAIL" if check.get("gated", True)
                                               else "info")
        print(f"[{status}] {check['name']}: {check['value']:.6g} "
              f"(band {check['lo']:.6g} .. {check['hi']:.6g})")
    print(f"preset {args.preset}: {'PASS' if passed else 'FAIL'}")
    return 0 if passed else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afcmem",
        description="Simulator and analysis toolkit for AFC spin-wave "
                    "optical memories")
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a simulation stage")
    sim.add_argument("what", choices=["afc", "spinwave", "qubit"])
    sim.add_argument("--config", help="flat JSON config file")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--trials", type=int)
    sim.add_argument("--out", default="out")
    sim.set_defaults(func=_cmd_simulate)

    fit = sub.add_parser("fit", help="fit a decay law to CSV data")
    fit.add_argument("model", choices=["afc", "mims", "powerlaw"])
    fit.add_argument("data", help="CSV with x in column 1 and y in column 2")
    fit.add_argument("--out", default="out")
    fit.set_defaults(func=_cmd_fit)

    tomo = sub.add_parser("tomo", help="reconstruct a qubit from counts JSON")
    tomo.add_argument("counts", help="JSON with counts/n_trials per projection")
    tomo.add_argument("--subtract-noise", action="store_true")
    tomo.add_argument("--out", default="out")
    tomo.set_defaults(func=_cmd_tomo)

    rep = sub.add_parser("reproduce", help="run a reproduction preset")
    rep.add_argument("preset", choices=list(PRESET_NAMES))
    rep.add_argument("--seed", type=int)
    rep.add_argument("--out", default="out")
    rep.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # simulation failure
        print(f"simulation failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
