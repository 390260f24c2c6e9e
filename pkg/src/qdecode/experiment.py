"""Monte Carlo decoding runs and the on-disk experiment report."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import norm

from .capacity import superadditivity_sweep, sweep_to_csv
from .codebook import Codebook, codebook_to_dict, codeword_matrix, load_codebook, make_codebook
from .compiler import CompileResult, compile_codebook
from .decoder import channel_matrix, error_probability
from .errors import ConfigError, QDecodeError
from .simulate import TrialRecord, apply_netlist, bits, outcome_distribution, sample_outcome, trial_rng, trial_uniforms

Z95 = float(norm.ppf(0.975))


@dataclass(frozen=True)
class RunConfig:
    codebook: Codebook
    trials: int = 100_000
    seed: int = 0
    kappas: tuple[float, ...] = ()
    out: Path = Path("out")
    completion: str = "schmidt"
    sqrt_cnot: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.completion not in ("schmidt", "symmetric"):
            raise ConfigError(f"unknown completion {self.completion!r}")


def load_config(source, **overrides) -> RunConfig:
    """Read a JSON run configuration.

    The codebook is given inline (``"codebook": {...}``) or as a path
    (``"codebook_path"``, relative to the config file).  ``overrides`` with a
    value other than ``None`` replace the corresponding field.
    """
    base = Path(".")
    if isinstance(source, dict):
        doc = source
    else:
        path = Path(source)
        doc = json.loads(path.read_text())  # OSError propagates to the caller
        base = path.parent
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    try:
        if "codebook" in doc:
            cb = load_codebook(doc["codebook"])
        elif "codebook_path" in doc:
            cb = load_codebook(base / doc["codebook_path"])
        else:
            raise ConfigError("configuration needs 'codebook' or 'codebook_path'")
        fields = {
            "trials": int(doc.get("trials", 100_000)),
            "seed": int(doc.get("seed", 0)),
            "kappas": tuple(float(k) for k in doc.get("kappas", ())),
            "out": Path(doc.get("out", "out")),
            "completion": doc.get("completion", "schmidt"),
            "sqrt_cnot": bool(doc.get("sqrt_cnot", False)),
        }
    except OSError:
        raise
    except ConfigError:
        raise
    except (QDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
    fields.update({k: v for k, v in overrides.items() if v is not None})
    if "out" in overrides and overrides["out"] is not None:
        fields["out"] = Path(overrides["out"])
    return RunConfig(cb, **fields)


def wilson_interval(k: int, n: int, z: float = Z95) -> tuple[float, float]:
    p = k / n
    den = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    lo = 0.0 if k == 0 else max(0.0, mid - half)
    hi = 1.0 if k == n else min(1.0, mid + half)
    return float(lo), float(hi)


@dataclass(frozen=True)
class MonteCarloReport:
    trials: int
    errors: int
    erasures: int
    pe_empirical: float
    ci95: tuple[float, float]
    pe_analytic: float
    erasure_analytic: float
    z_score: float
    counts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "errors": self.errors,
            "erasures": self.erasures,
            "pe_empirical": self.pe_empirical,
            "ci95": list(self.ci95),
            "pe_analytic": self.pe_analytic,
            "erasure_rate": self.erasures / self.trials,
            "erasure_analytic": self.erasure_analytic,
            "z_score": self.z_score,
            "outcome_counts": self.counts,
        }


def _output_distributions(cb: Codebook, compiled: CompileResult) -> np.ndarray:
    """Row ``i``: outcome probabilities after running the netlist on codeword ``i``."""
    s = codeword_matrix(cb)
    return np.array([outcome_distribution(apply_netlist(s[:, i], compiled.netlist)) for i in range(cb.M)])


def run_trial(cfg: RunConfig, compiled: CompileResult, trial: int, dists: np.ndarray | None = None) -> TrialRecord:
    """One transmission: draw the word, run the circuit, measure each letter."""
    cb = cfg.codebook
    if dists is None:
        dists = _output_distributions(cb, compiled)
    rng = trial_rng(cfg.seed, trial)
    sent = sample_outcome(cb.priors, rng.random())
    outcome = sample_outcome(dists[sent], rng.random())
    return TrialRecord(trial, sent, bits(outcome, cb.n), compiled.decode(outcome))


def monte_carlo_decode(cfg: RunConfig, compiled: CompileResult | None = None) -> MonteCarloReport:
    """Empirical error rate; erasures (unassigned outcomes) count as errors."""
    cb = cfg.codebook
    if compiled is None:
        compiled = compile_codebook(cb, cfg.completion, sqrt_cnot=cfg.sqrt_cnot)
    dists = _output_distributions(cb, compiled)
    u = trial_uniforms(cfg.seed, cfg.trials)
    prior_cdf = np.cumsum(cb.priors)
    sent = np.minimum(np.searchsorted(prior_cdf, u[:, 0] * prior_cdf[-1], side="right"), cb.M - 1)
    outcome = np.empty(cfg.trials, dtype=np.int64)
    for i in range(cb.M):
        mask = sent == i
        cdf = np.cumsum(dists[i])
        outcome[mask] = np.minimum(np.searchsorted(cdf, u[mask, 1] * cdf[-1], side="right"), cb.dim - 1)
    table = np.full(cb.dim, -1, dtype=np.int64)
    for k, word in compiled.assignment.items():
        table[k] = word
    decoded = table[outcome]
    erasures = int(np.sum(decoded < 0))
    errors = int(np.sum(decoded != sent))
    n = cfg.trials
    p_hat = errors / n
    p = compiled.expected_error
    sigma = np.sqrt(max(p * (1 - p), 1e-300) / n)
    assigned = np.array(sorted(compiled.assignment))
    erasure_analytic = float(1.0 - np.dot(cb.priors, dists[:, assigned].sum(axis=1))) if len(assigned) else 1.0
    values, freq = np.unique(outcome, return_counts=True)
    return MonteCarloReport(
        trials=n,
        errors=errors,
        erasures=erasures,
        pe_empirical=p_hat,
        ci95=wilson_interval(errors, n),
        pe_analytic=p,
        erasure_analytic=max(0.0, erasure_analytic),
        z_score=float((p_hat - p) / sigma) if p > 0 else float(errors),
        counts={bits(int(v), cb.n): int(c) for v, c in zip(values, freq)},
    )


def pe_sweep(cb: Codebook, kappas, completion: str = "schmidt") -> list[dict]:
    rows = []
    for k in kappas:
        c = make_codebook(k, cb.words, cb.priors)
        res = compile_codebook(c, completion)
        rows.append({"kappa": float(k), "pe": res.expected_error, "reconstruction": res.reconstruction_error})
    return rows


def _pe_csv(rows) -> str:
    lines = ["kappa,pe,reconstruction"]
    for r in rows:
        lines.append(",".join(f"{r[key]:.9g}" for key in ("kappa", "pe", "reconstruction")))
    return "\n".join(lines) + "\n"


def _write_all(out: Path, files: dict[str, str]) -> None:
    """Write every file or none: contents go to temporaries first, then are renamed."""
    out.mkdir(parents=True, exist_ok=True)
    tmps = []
    try:
        for name, text in files.items():
            tmp = out / f".{name}.tmp"
            tmp.write_text(text)
            tmps.append((tmp, out / name))
        for tmp, dst in tmps:
            os.replace(tmp, dst)
    finally:
        for tmp, _ in tmps:
            if tmp.exists():
                tmp.unlink()


def run_experiment(cfg: RunConfig) -> tuple[dict, bool]:
    """Compile, simulate and write ``report.json``, the netlist and any sweeps to ``cfg.out``.

    Returns the report and whether every internal check passed.  Output is a
    pure function of the configuration, so reruns are byte-identical.
    """
    cb = cfg.codebook
    compiled = compile_codebook(cb, cfg.completion, sqrt_cnot=cfg.sqrt_cnot)
    mc = monte_carlo_decode(cfg, compiled)
    channel, complete = channel_matrix(cb, compiled.measurement)
    checks = {
        "reconstruction": compiled.reconstruction_error < 1e-9,
        "measurement_orthonormal": compiled.measurement.is_orthonormal(),
        "pe_consistent": abs(compiled.expected_error - error_probability(cb, compiled.measurement)) < 1e-9,
        "channel_rows": bool(np.all(np.abs(channel.sum(axis=1) - 1) < 1e-9)),
    }
    files = {
        "netlist.jsonl": compiled.netlist.to_jsonl(),
        "assignment.json": json.dumps({bits(k, cb.n): cb.words[v] for k, v in sorted(compiled.assignment.items())}, indent=2) + "\n",
    }
    if cfg.kappas:
        rows = superadditivity_sweep(cfg.kappas)
        files["capacity_sweep.csv"] = sweep_to_csv(rows)
        files["pe_sweep.csv"] = _pe_csv(pe_sweep(cb, cfg.kappas, cfg.completion))
        ks = [r.kappa for r in rows]
        if ks == sorted(ks):
            c1 = [r.C1 for r in rows]
            checks["C1_decreasing"] = all(a >= b - 1e-12 for a, b in zip(c1, c1[1:]))
    report = {
        "codebook": codebook_to_dict(cb),
        "seed": cfg.seed,
        "completion": cfg.completion,
        "pe_analytic": compiled.expected_error,
        "monte_carlo": mc.to_dict(),
        "gate_counts": compiled.netlist.counts(),
        "gate_total": len(compiled.netlist),
        "reconstruction_residual": compiled.reconstruction_error,
        "channel_complete": complete,
        "checks": checks,
    }
    passed = all(checks.values())
    report["passed"] = passed
    files["report.json"] = json.dumps(report, indent=2, sort_keys=True) + "\n"
    _write_all(Path(cfg.out), files)
    return report, passed
