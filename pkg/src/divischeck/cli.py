"""Command-line front end: parameter scans, divisibility reports, witness
construction, and back-flow demonstrations.

All payload files are deterministic for a fixed config and seed: timing and
other run metadata go to stdout only, never into the output files.  Numbers
are written with 17 significant digits (CSV) or shortest round-trip form
(JSON); both reproduce the underlying doubles exactly.

Exit codes: 0 success (a found violation is an expected result, flagged in
the payload, still 0); 2 usage or I/O error; 3 internal numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__, divisibility, generator, infoflow, pauli_family, superop
from .linalg import NumericalError

__all__ = ["RunConfig", "main"]

DYNAMICS = ("model", "semigroup", "identity")

SCAN_HEADER = ["alpha", "t", "p0", "p1", "p2", "p3", "q0", "q1", "q2", "q3",
               "l1", "l3", "choi_min", "cp", "gamma3"]
INFOFLOW_HEADER = ["pair_id", "t", "sigma_single", "sigma_tensor"]


@dataclass
class RunConfig:
    """Flat run configuration; a JSON config file carries the same fields
    and individual command-line flags override it."""

    alpha: list[float] = field(default_factory=lambda: [0.6])
    t_max: float = 5.0
    grid_points: int = 200
    rk4_step: float = 1e-3
    restarts: int = 100
    probe_steps: int = 500
    tol: float = 1e-9
    seed: int = 0
    output_path: str = "divischeck-out"
    format: str = "csv"
    s: float = 1.0
    dynamics: str = "model"
    samples: int = 100
    fd_step: float = 1e-4
    all_pairs: bool = False

    def validate(self) -> None:
        if not self.alpha or any(a <= 0 for a in self.alpha):
            raise ValueError("alpha values must be positive")
        for name in ("t_max", "rk4_step", "tol", "fd_step"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("grid_points", "restarts", "probe_steps", "samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        if self.s < 0:
            raise ValueError("s must be nonnegative")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if self.dynamics not in DYNAMICS:
            raise ValueError(f"dynamics must be one of {DYNAMICS}, got {self.dynamics!r}")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")

    def grid(self) -> np.ndarray:
        return pauli_family.default_grid(self.t_max, self.grid_points)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _bool(x: bool) -> str:
    return "true" if x else "false"


def _complex_vector(v: np.ndarray) -> dict:
    v = np.asarray(v)
    return {"re": [float(x) for x in v.real.ravel()],
            "im": [float(x) for x in v.imag.ravel()],
            "shape": list(v.shape)}


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _single_channel(cfg: RunConfig, alpha: float):
    if cfg.dynamics == "model":
        return lambda t: pauli_family.channel(t, alpha)
    if cfg.dynamics == "semigroup":
        return lambda t: pauli_family.semigroup_channel(t, alpha)
    return lambda t: superop.identity(2)


def _generator(cfg: RunConfig, alpha: float) -> generator.GeneratorSpec:
    if cfg.dynamics == "model":
        return generator.model_generator(alpha)
    if cfg.dynamics == "semigroup":
        return generator.qubit_rate_generator((alpha, alpha, alpha))
    return generator.qubit_rate_generator((0.0, 0.0, 0.0))


def _check_report_payload(report: generator.GeneratorCheckReport) -> dict:
    return {
        "criterion": report.criterion,
        "satisfied": report.satisfied,
        "worst_time": report.worst_time,
        "worst_value": report.worst_value,
        "worst_pair": list(report.worst_pair) if report.worst_pair else None,
        "grid_points": report.grid_points,
        "grid_spacing": report.grid_spacing,
        "note": report.note,
    }


def _scan_report_payload(report: divisibility.DivisibilityReport) -> dict:
    return {
        "kind": report.kind,
        "verdict": report.verdict,
        "worst_pair": list(report.worst_pair) if report.worst_pair else None,
        "worst_value": report.worst_value,
        "witness": _complex_vector(report.witness) if report.witness is not None else None,
        "witness_kind": report.witness_kind,
        "pairs_scanned": report.pairs_scanned,
        "flagged_pairs": [[s, t, msg] for (s, t, msg) in report.flagged_pairs],
        "note": report.note,
    }


def cmd_scan(cfg: RunConfig) -> tuple[list[str], dict]:
    grid = cfg.grid()
    rows = []
    non_cp_alphas = set()
    for alpha in cfg.alpha:
        for t in grid:
            t = float(t)
            p = pauli_family.pauli_weights(t, alpha)
            q = pauli_family.squared_pauli_weights(t, alpha)
            l = pauli_family.bloch_eigenvalues(t, alpha)
            cp = pauli_family.cp_criterion(t, alpha)
            _, choi_min = superop.is_cp(pauli_family.channel(t, alpha))
            gamma3 = pauli_family.rates(t, alpha)[2]
            if not cp:
                non_cp_alphas.add(alpha)
            rows.append([_fmt(alpha), _fmt(t),
                         _fmt(p.p0), _fmt(p.p1), _fmt(p.p2), _fmt(p.p3),
                         _fmt(q.p0), _fmt(q.p1), _fmt(q.p2), _fmt(q.p3),
                         _fmt(l.l1), _fmt(l.l3), _fmt(choi_min),
                         _bool(cp), _fmt(gamma3)])
    if cfg.format == "csv":
        path = cfg.output_path + ".csv"
        _write_csv(path, SCAN_HEADER, rows)
    else:
        path = cfg.output_path + ".json"
        _write_json(path, [dict(zip(SCAN_HEADER, row)) for row in rows])
    summary = {
        "rows": len(rows),
        "alphas": cfg.alpha,
        "non_cp_alphas": sorted(non_cp_alphas),
    }
    return [path], summary


def cmd_divisibility(cfg: RunConfig) -> tuple[list[str], dict]:
    alpha = cfg.alpha[0]
    grid = cfg.grid()
    gen = _generator(cfg, alpha)
    cp_check = generator.cp_divisibility_check(gen, grid, tol=cfg.tol)
    p_check = generator.p_divisibility_check_pauli(gen, grid, tol=cfg.tol)

    family = generator.propagate(gen, grid, cfg.rk4_step)
    cp_scan = divisibility.cp_divisibility_scan(family, tol=cfg.tol,
                                                all_pairs=cfg.all_pairs)
    tensor_probe = divisibility.tensor_p_divisibility_probe(
        family, restarts=cfg.restarts, steps=cfg.probe_steps, tol=cfg.tol,
        seed=cfg.seed, all_pairs=cfg.all_pairs)

    reevaluated = None
    if tensor_probe.verdict == divisibility.VIOLATED:
        i, j = tensor_probe.worst_indices
        inter = superop.intermediate(family.maps[j], family.maps[i])
        big = superop.tensor(inter, inter)
        reevaluated = superop.min_output_eigenvalue(big, tensor_probe.witness)

    payload = {
        "alpha": alpha,
        "dynamics": cfg.dynamics,
        "grid": {"t_max": cfg.t_max, "points": len(grid)},
        "cp_divisibility_check": _check_report_payload(cp_check),
        "p_divisibility_check": _check_report_payload(p_check),
        "cp_divisibility_scan": _scan_report_payload(cp_scan),
        "tensor_p_divisibility_probe": _scan_report_payload(tensor_probe),
        "tensor_witness_reevaluated": reevaluated,
    }
    path = cfg.output_path + ".json"
    _write_json(path, payload)
    summary = {
        "cp_divisible_on_grid": cp_check.satisfied,
        "p_divisible_on_grid": p_check.satisfied,
        "cp_scan_verdict": cp_scan.verdict,
        "tensor_probe_verdict": tensor_probe.verdict,
    }
    return [path], summary


def cmd_witness(cfg: RunConfig) -> tuple[list[str], dict]:
    alpha = cfg.alpha[0]
    gen = _generator(cfg, alpha)
    w = divisibility.first_order_witness(gen, cfg.s)
    checks = []
    for dt in (cfg.fd_step, 0.5 * cfg.fd_step):
        value = divisibility.verify_witness(gen, cfg.s, w, dt=dt)
        checks.append({
            "dt": dt,
            "value": value,
            "first_order_prediction": dt * w.delta_rate,
            "discrepancy": abs(value - dt * w.delta_rate),
        })
    ratio = checks[0]["discrepancy"] / max(checks[1]["discrepancy"], 1e-300)
    payload = {
        "alpha": alpha,
        "s": cfg.s,
        "c_min": w.c_min,
        "u": _complex_vector(w.u),
        "m": _complex_vector(w.m),
        "psi": _complex_vector(w.psi),
        "phi": _complex_vector(w.phi),
        "orthogonality": abs(complex(np.vdot(w.phi, w.psi))),
        "delta_rate": w.delta_rate,
        "finite_dt_checks": checks,
        "halving_ratio": ratio,
    }
    path = cfg.output_path + ".json"
    _write_json(path, payload)
    summary = {"delta_rate": w.delta_rate, "halving_ratio": ratio}
    return [path], summary


def cmd_infoflow(cfg: RunConfig) -> tuple[list[str], dict]:
    alpha = cfg.alpha[0]
    grid = cfg.grid()
    single = _single_channel(cfg, alpha)

    if cfg.dynamics == "identity":
        def tensor_map(t):
            return superop.identity(4)
    else:
        def tensor_map(t):
            ch = single(t)
            return superop.tensor(ch, ch)

    rep_single = infoflow.backflow_scan(single, 2, grid, samples=cfg.samples,
                                        seed=cfg.seed, h=cfg.fd_step)
    rep_tensor = infoflow.backflow_scan(tensor_map, 4, grid, samples=cfg.samples,
                                        seed=cfg.seed, h=cfg.fd_step)

    n_single = rep_single.sigma.shape[0]
    n_tensor = rep_tensor.sigma.shape[0]
    rows = []
    for k in range(max(n_single, n_tensor)):
        for ti, t in enumerate(grid):
            s_val = _fmt(rep_single.sigma[k, ti]) if k < n_single else ""
            t_val = _fmt(rep_tensor.sigma[k, ti]) if k < n_tensor else ""
            rows.append([str(k), _fmt(float(t)), s_val, t_val])
    csv_path = cfg.output_path + ".csv"
    _write_csv(csv_path, INFOFLOW_HEADER, rows)

    payload = {
        "alpha": alpha,
        "dynamics": cfg.dynamics,
        "samples": cfg.samples,
        "fd_step": cfg.fd_step,
        "single": {
            "max_sigma": rep_single.max_sigma,
            "argmax_pair": rep_single.argmax_label,
            "argmax_t": rep_single.argmax_t,
            "pair_labels": [p.label for p in rep_single.pairs],
        },
        "tensor": {
            "max_sigma": rep_tensor.max_sigma,
            "argmax_pair": rep_tensor.argmax_label,
            "argmax_t": rep_tensor.argmax_t,
            "pair_labels": [p.label for p in rep_tensor.pairs],
        },
    }
    json_path = cfg.output_path + ".json"
    _write_json(json_path, payload)
    summary = {
        "max_sigma_single": rep_single.max_sigma,
        "max_sigma_tensor": rep_tensor.max_sigma,
    }
    return [csv_path, json_path], summary


COMMANDS = {
    "scan": cmd_scan,
    "divisibility": cmd_divisibility,
    "witness": cmd_witness,
    "infoflow": cmd_infoflow,
}


def _parse_alpha(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divischeck",
        description="Positivity and divisibility diagnostics for qubit dynamical maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("scan", "tabulate weights, Bloch eigenvalues and CP verdicts over (alpha, t)"),
        ("divisibility", "generator- and map-level divisibility reports for one alpha"),
        ("witness", "first-order tensor-square positivity witness at time s"),
        ("infoflow", "trace-distance flow scan for the single and tensor dynamics"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file with RunConfig fields")
        p.add_argument("--alpha", type=_parse_alpha, metavar="A[,A...]",
                       help="channel strength(s), comma separated")
        p.add_argument("--t-max", type=float, dest="t_max")
        p.add_argument("--grid-points", type=int, dest="grid_points")
        p.add_argument("--rk4-step", type=float, dest="rk4_step")
        p.add_argument("--restarts", type=int)
        p.add_argument("--probe-steps", type=int, dest="probe_steps")
        p.add_argument("--tol", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--output", dest="output_path", help="output path stem")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--s", type=float, help="witness construction time")
        p.add_argument("--dynamics", choices=list(DYNAMICS))
        p.add_argument("--samples", type=int, help="random state pairs per scan")
        p.add_argument("--fd-step", type=float, dest="fd_step",
                       help="finite-difference step for flow rates / witness checks")
        p.add_argument("--all-pairs", action="store_true", default=None,
                       dest="all_pairs", help="scan all grid pairs, not just consecutive")
    return parser


_FIELD_CASTS = {
    "alpha": lambda v: [float(a) for a in (v if isinstance(v, (list, tuple)) else [v])],
    "t_max": float,
    "grid_points": int,
    "rk4_step": float,
    "restarts": int,
    "probe_steps": int,
    "tol": float,
    "seed": int,
    "output_path": str,
    "format": str,
    "s": float,
    "dynamics": str,
    "samples": int,
    "fd_step": float,
    "all_pairs": bool,
}


def _load_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        known = {f.name for f in fields(RunConfig)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        values.update(raw)
    for f in fields(RunConfig):
        flag_value = getattr(args, f.name, None)
        if flag_value is not None:
            values[f.name] = flag_value
    for name, cast in _FIELD_CASTS.items():
        if name in values:
            try:
                values[name] = cast(values[name])
            except (TypeError, ValueError) as exc:
                raise ValueError(f"config field {name!r} has an invalid value: {exc}")
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        cfg = _load_config(args)
        outputs, summary = COMMANDS[args.command](cfg)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"divischeck: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"divischeck: numerical failure: {exc}", file=sys.stderr)
        return 3
    envelope = {
        "command": args.command,
        "version": __version__,
        "config": asdict(cfg),
        "outputs": outputs,
        "wall_time_s": time.monotonic() - started,
        "summary": summary,
    }
    print(json.dumps(envelope, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
