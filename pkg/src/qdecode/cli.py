"""Command-line entry point: ``qdecode <group> <action> [options]``.

Exit codes: 0 success, 2 a check failed, 3 I/O error, 4 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import cavity
from .capacity import superadditivity_sweep, sweep_to_csv
from .codebook import codebook_to_dict, load_codebook, overlap_matrix
from .compiler import compile_codebook
from .decoder import channel_and_information, optimal_measurement, square_root_measurement, srm_optimality_check
from .errors import ConfigError, QDecodeError
from .experiment import load_config, run_experiment
from .gates import matrix_to_csv
from .simulate import bits

EXIT_OK, EXIT_CHECK, EXIT_IO, EXIT_CONFIG = 0, 2, 3, 4

DEFAULT_KAPPAS = tuple(round(0.05 * k, 2) for k in range(2, 20))


def _read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def _codebook_from_args(args):
    if args.config is None:
        raise ConfigError("--config is required")
    doc = _read_json(args.config)
    try:
        if "words" in doc:
            return load_codebook(doc)
        return load_config(Path(args.config)).codebook
    except ConfigError:
        raise
    except QDecodeError as exc:
        raise ConfigError(str(exc)) from exc


def _emit(obj, args, name: str) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)
    sys.stdout.write(text)


def _matrix_json(m: np.ndarray) -> list:
    m = np.asarray(m)
    if np.allclose(m.imag, 0):
        return m.real.tolist()
    return [[[z.real, z.imag] for z in row] for row in m]


def cmd_codebook_show(args) -> int:
    cb = _codebook_from_args(args)
    doc = codebook_to_dict(cb)
    doc["n"] = cb.n
    doc["gram"] = _matrix_json(overlap_matrix(cb))
    doc["srm_optimal"] = srm_optimality_check(cb)
    _emit(doc, args, "codebook.json")
    return EXIT_OK


def cmd_decode_analyze(args) -> int:
    cb = _codebook_from_args(args)
    srm = square_root_measurement(cb)
    best = optimal_measurement(cb)
    out = {}
    for label, ms in (("srm", srm), ("optimal", best)):
        rep = channel_and_information(cb, ms)
        out[label] = {
            "error_prob": rep.error_prob,
            "mutual_info_bits": rep.mutual_info_bits,
            "channel": rep.channel.tolist(),
            "pairwise_optimal": rep.optimal_flag,
            "iterations": rep.iterations,
        }
    out["srm_optimality_check"] = srm_optimality_check(cb)
    _emit(out, args, "decode.json")
    ok = out["optimal"]["error_prob"] <= out["srm"]["error_prob"] + 1e-12
    return EXIT_OK if ok else EXIT_CHECK


def cmd_compile(args) -> int:
    cb = _codebook_from_args(args)
    res = compile_codebook(cb, args.completion, sqrt_cnot=args.sqrt_cnot)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "netlist.jsonl").write_text(res.netlist.to_jsonl())
    assignment = {bits(k, cb.n): cb.words[v] for k, v in sorted(res.assignment.items())}
    (out / "assignment.json").write_text(json.dumps(assignment, indent=2) + "\n")
    if args.emit_matrix:
        (out / "unitary.csv").write_text(matrix_to_csv(res.unitary))
    summary = {
        "n": cb.n,
        "expected_error": res.expected_error,
        "reconstruction_residual": res.reconstruction_error,
        "gate_counts": res.netlist.counts(),
        "rotations": [[r.j, r.i, r.gamma] for r in res.rotations],
        "assignment": assignment,
    }
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if res.reconstruction_error < 1e-9 else EXIT_CHECK


def cmd_simulate(args) -> int:
    if args.config is None:
        raise ConfigError("--config is required")
    try:
        cfg = load_config(Path(args.config), seed=args.seed, trials=args.trials, out=args.out)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    report, passed = run_experiment(cfg)
    mc = report["monte_carlo"]
    sys.stdout.write(
        f"pe_analytic={report['pe_analytic']:.9g} pe_empirical={mc['pe_empirical']:.9g} "
        f"ci95=[{mc['ci95'][0]:.6g}, {mc['ci95'][1]:.6g}] erasures={mc['erasures']} "
        f"report={Path(cfg.out) / 'report.json'}\n"
    )
    return EXIT_OK if passed else EXIT_CHECK


def _pulse_params(args) -> cavity.PulseParams:
    if args.config is None:
        return cavity.default_pulse_params(fire_on=args.fire_on)
    doc = _read_json(args.config)
    try:
        pp = cavity.default_pulse_params(
            **{k: float(doc[k]) for k in ("nu", "g", "t", "tau_nominal") if k in doc}, fire_on=args.fire_on
        )
        given = {k: float(v) for k, v in doc.get("params", {}).items()}
        if given:
            pp = replace(pp, **given)
        if doc.get("solve", False):
            pp = cavity.solve_phase_condition(pp, near=pp.tau_prime, fire_on=args.fire_on)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return pp


def cmd_physics_verify(args) -> int:
    pp = _pulse_params(args)
    report = cavity.fidelity_report(pp, args.fire_on)
    _emit(report, args, "physics.json")
    return EXIT_OK if report["passed"] else EXIT_CHECK


def cmd_capacity_sweep(args) -> int:
    kappas = DEFAULT_KAPPAS
    if args.config is not None:
        doc = _read_json(args.config)
        if "kappas" in doc:
            kappas = tuple(float(k) for k in doc["kappas"])
    if args.kappas:
        kappas = tuple(args.kappas)
    if any(not 0 <= k < 1 for k in kappas):
        raise ConfigError("kappa values must lie in [0, 1)")
    text = sweep_to_csv(superadditivity_sweep(kappas))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "capacity_sweep.csv").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration or codebook file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=int, help="64-bit seed for the trial generator")
    common.add_argument("--trials", type=int, help="number of Monte Carlo trials")
    common.add_argument("--emit-matrix", action="store_true", help="also write the adaptor as CSV")

    p = argparse.ArgumentParser(prog="qdecode", description=__doc__.splitlines()[0])
    groups = p.add_subparsers(dest="group", required=True)

    cbp = groups.add_parser("codebook").add_subparsers(dest="action", required=True)
    cbp.add_parser("show", parents=[common]).set_defaults(func=cmd_codebook_show)

    dp = groups.add_parser("decode").add_subparsers(dest="action", required=True)
    dp.add_parser("analyze", parents=[common]).set_defaults(func=cmd_decode_analyze)

    cp = groups.add_parser("compile", parents=[common])
    cp.add_argument("--completion", choices=("schmidt", "symmetric"), default="schmidt")
    cp.add_argument("--sqrt-cnot", action="store_true", help="emit each CNOT as two controlled square roots")
    cp.set_defaults(func=cmd_compile)

    groups.add_parser("simulate", parents=[common]).set_defaults(func=cmd_simulate)

    pp = groups.add_parser("physics").add_subparsers(dest="action", required=True)
    pv = pp.add_parser("verify", parents=[common])
    pv.add_argument("--fire-on", choices=("down", "up"), default="down", help="control level that triggers the gate")
    pv.set_defaults(func=cmd_physics_verify)

    sp = groups.add_parser("capacity").add_subparsers(dest="action", required=True)
    sw = sp.add_parser("sweep", parents=[common])
    sw.add_argument("--kappas", type=float, nargs="+")
    sw.set_defaults(func=cmd_capacity_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QDecodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
