"""Command-line entry point: ``sgbeam <command> [options]``.

Settings are resolved in order: built-in defaults, then a JSON config file
(``--config`` or the SGBEAM_CONFIG environment variable), then explicit
flags. JSON output carries ``"schema": 1``. Exit status: 0 on success,
1 when a verification fails or a computation breaks down, 2 on usage or
configuration errors.

CSV columns:
  spectrum   n, lambda, a, seed_error
  modes      x, phi, phi_xx, phi_xxx
  observe    k, value
  simulate   t, y, E   (E from quadrature of the reconstructed fields)
  verify     check, passed, value, threshold
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from .charpoly import roots
from .errors import BeamError, InvalidParameterError
from .model import check_zeta
from .modes import boundary_identities, evaluate_mode, gram_matrix
from .observability import OPERATORS, c3_band, classify, observability_constants, observe_values
from .quadrature import QuadratureRule
from .simulate import (
    energy_trace,
    multiplier_identity_check,
    observability_check,
    output_series,
    random_state,
    state_from_coefficients,
)
from .spectrum import compute_spectrum, gap_profile, seed_for_mode

SCHEMA = 1
CONFIG_ENV = "SGBEAM_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    zeta: float = 1.0
    n_modes: int = 10
    tol: float = 1e-12
    panels: int = 64
    order: int = 8
    T: float = 8.0
    seed: int = 0
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        check_zeta(self.zeta)
        if self.n_modes < 1:
            raise InvalidParameterError("n_modes must be at least 1")
        if not self.tol > 0:
            raise InvalidParameterError("tol must be positive")
        if self.panels < 1 or self.order < 1:
            raise InvalidParameterError("quadrature panels and order must be positive")
        if self.output_format not in ("json", "csv"):
            raise InvalidParameterError("output format must be json or csv")

    @property
    def quad(self) -> QuadratureRule:
        return QuadratureRule(self.panels, self.order)


class UsageError(Exception):
    pass


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    if "n" in data and "n_modes" not in data:
        data["n_modes"] = data.pop("n")
    quad = data.pop("quadrature", None)
    if isinstance(quad, dict):
        data.setdefault("panels", quad.get("panels", 64))
        data.setdefault("order", quad.get("order", quad.get("nodes", 8)))
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def resolve_config(args) -> RunConfig:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    merged = _load_config(path)
    flag_map = {
        "zeta": "zeta",
        "n": "n_modes",
        "tol": "tol",
        "panels": "panels",
        "order": "order",
        "T": "T",
        "seed": "seed",
        "output": "output_format",
        "output_path": "output_path",
    }
    for flag, key in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            merged[key] = value
    try:
        return RunConfig(**merged)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from None


def _common(p, output=True):
    p.add_argument("--zeta", type=float, help="stiffness ratio zeta > 0")
    p.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    p.add_argument("--panels", type=int, help="quadrature panels")
    p.add_argument("--order", type=int, help="Gauss nodes per panel")
    p.add_argument("--tol", type=float, help="relative eigenvalue tolerance")
    p.add_argument("--output-path", "-o", dest="output_path", help="write output here instead of stdout")
    if output:
        p.add_argument("--output", choices=("json", "csv"), help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgbeam",
        description="Spectrum, modes and boundary observability of the strain-gradient cantilever.",
        epilog="CSV columns:" + __doc__.split("CSV columns:")[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charpoly", help="six characteristic roots at one lambda")
    _common(p, output=False)
    p.add_argument("--lambda", dest="lam", type=float, required=True)

    p = sub.add_parser("spectrum", help="first N eigenvalues (CSV: n, lambda, a, seed_error)")
    _common(p)
    p.add_argument("--n", type=int)

    p = sub.add_parser("modes", help="samples of mode n (CSV: x, phi, phi_xx, phi_xxx)")
    _common(p)
    p.add_argument("--n", type=int, help="mode index")
    p.add_argument("--grid", type=int, default=101, help="number of sample points")

    p = sub.add_parser("observe", help="observation report for one operator (CSV: k, value)")
    _common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--operator", choices=OPERATORS, required=True)

    p = sub.add_parser("constants", help="observability constants at horizon T")
    _common(p, output=False)
    p.add_argument("--T", type=float)

    p = sub.add_parser("simulate", help="output trace (CSV: t, y, E)")
    _common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--T", type=float)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--state", default="random:0", help="file.json with a and b, or random:SEED")

    p = sub.add_parser("verify", help="verification suites (CSV: check, passed, value, threshold)")
    p.add_argument("suite", choices=("identities", "observability", "all"))
    _common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--T", type=float)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int)
    return parser


def _dump_json(obj) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, indent=2, allow_nan=False) + "\n"


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _emit(text, cfg: RunConfig):
    if cfg.output_path:
        try:
            with open(cfg.output_path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {cfg.output_path}: {exc}") from None
    else:
        sys.stdout.write(text)


def _basis(cfg, n=None):
    return compute_spectrum(cfg.zeta, n or cfg.n_modes, cfg.tol, cfg.quad)


def cmd_charpoly(args, cfg):
    _emit(_dump_json(roots(cfg.zeta, args.lam).to_dict()), cfg)
    return 0


def cmd_spectrum(args, cfg):
    basis = _basis(cfg)
    rows = []
    for k, mode in enumerate(basis.modes, start=1):
        a = mode.a if 27 * cfg.zeta**2 * mode.lam**2 > 2 else None
        seed_err = None if a is None else a - seed_for_mode(k, cfg.zeta)[0]
        rows.append({"n": k, "lambda": mode.lam, "a": a, "seed_error": seed_err})
    if cfg.output_format == "csv":
        text = _dump_csv(["n", "lambda", "a", "seed_error"], [list(r.values()) for r in rows])
    else:
        text = _dump_json({"zeta": cfg.zeta, "modes": rows})
    _emit(text, cfg)
    return 0


def cmd_modes(args, cfg):
    k = args.n or 1
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    mode = _basis(cfg, k)[k]
    x = np.linspace(0.0, 1.0, args.grid)
    cols = [evaluate_mode(mode, x, m) for m in (0, 2, 3)]
    if cfg.output_format == "csv":
        text = _dump_csv(["x", "phi", "phi_xx", "phi_xxx"], zip(x, *cols))
    else:
        text = _dump_json(
            {
                "zeta": cfg.zeta,
                "n": k,
                "lambda": mode.lam,
                "x": x.tolist(),
                "phi": cols[0].tolist(),
                "phi_xx": cols[1].tolist(),
                "phi_xxx": cols[2].tolist(),
            }
        )
    _emit(text, cfg)
    return 0


def cmd_observe(args, cfg):
    basis = _basis(cfg)
    if cfg.output_format == "csv":
        values = observe_values(basis, args.operator)
        _emit(_dump_csv(["k", "value"], zip(range(1, len(values) + 1), values)), cfg)
        return 0
    report = classify(basis, args.operator)
    _emit(_dump_json({"zeta": cfg.zeta, "n": len(basis), **report.to_dict()}), cfg)
    return 0 if report.bounds_consistent in (None, True) else 1


def cmd_constants(args, cfg):
    _emit(_dump_json(observability_constants(cfg.zeta, cfg.T).to_dict()), cfg)
    return 0


def _load_state(source, basis):
    if source.startswith("random:"):
        try:
            seed = int(source.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad random state source {source!r}") from None
        return random_state(basis, seed=seed)
    try:
        with open(source) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read state {source}: {exc}") from None
    if not isinstance(data, dict) or not ({"a", "b"} & set(data)):
        raise UsageError("state file must hold an object with 'a' and/or 'b' lists")
    return state_from_coefficients(basis, data.get("a"), data.get("b"))


def cmd_simulate(args, cfg):
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    basis = _basis(cfg)
    state = _load_state(args.state, basis)
    series = output_series(state, cfg.T, args.samples)
    trace = energy_trace(state, series.times)
    E = [s.total for s in trace.quadrature]
    if cfg.output_format == "csv":
        text = _dump_csv(["t", "y", "E"], zip(series.times, series.y, E))
    else:
        text = _dump_json(
            {
                "zeta": cfg.zeta,
                "n": len(basis),
                "T": cfg.T,
                "integral_y2": series.integral_y2,
                "t": series.times.tolist(),
                "y": series.y.tolist(),
                "E": E,
            }
        )
    _emit(text, cfg)
    return 0


def _check(name, passed, value, threshold):
    return {"check": name, "passed": bool(passed), "value": float(value), "threshold": threshold}


def identity_checks(basis, quad):
    reps = [boundary_identities(m, quad) for m in basis.modes]
    flux = max(r.flux_rel for r in reps)
    en = max(r.energy_rel for r in reps)
    viol = max(r.bound_violation for r in reps)
    return [
        _check("flux_identity", flux < 1e-7, flux, "< 1e-7"),
        _check("energy_identity", en < 1e-7, en, "< 1e-7"),
        _check("boundary_bounds", viol == 0, viol, "== 0"),
    ], reps


def observability_checks(basis, T, trials, seed, n_modes=None):
    n_modes = n_modes or len(basis)
    results = [observability_check(random_state(basis, n_modes, seed=seed + i), T) for i in range(trials)]
    fails = sum(r.verdict == "fail" for r in results)
    const = observability_constants(basis.zeta, T)
    checks = [_check("sandwich_violations", fails == 0, fails, "== 0")]
    if not const.guaranteed:
        checks[0]["note"] = "lower bound not guaranteed at this T; upper bound only"
    return checks, results


def cmd_verify(args, cfg):
    basis = _basis(cfg)
    quad = cfg.quad
    extra = {}
    checks = []
    if args.suite in ("identities", "all"):
        c, reps = identity_checks(basis, quad)
        checks += c
        extra["modes"] = [
            {"n": r.n, "lambda": r.lam, "flux": r.flux_rel, "energy": r.energy_rel,
             "bound_ratio": r.bound_ratio, "bound_violation": r.bound_violation}
            for r in reps
        ]
    if args.suite == "all":
        G = gram_matrix(basis.modes, quad)
        off = float(np.abs(G - np.diag(np.diag(G))).max())
        diag = float(np.abs(np.diag(G) - 1).max())
        checks.append(_check("orthonormality_offdiag", off < 1e-6, off, "< 1e-6"))
        checks.append(_check("orthonormality_diag", diag < 1e-7, diag, "< 1e-7"))
        v = observe_values(basis, "C3")
        lo, hi = c3_band(cfg.zeta)
        out = float(max(0.0, lo - v.min(), v.max() - hi))
        checks.append(_check("c3_band", out <= 1e-9 * hi, out, "== 0"))
        if len(basis) >= 3:
            gp = gap_profile(basis)
            checks.append(_check("gaps_increasing", gp.increasing, gp.gap_slope, "gaps strictly increasing"))
        rng_seed = cfg.seed
        mres = max(
            multiplier_identity_check(random_state(basis, min(5, len(basis)), seed=rng_seed + i), cfg.T, quad).residual
            for i in range(args.trials or 20)
        )
        checks.append(_check("multiplier_identity", mres < 1e-6, mres, "< 1e-6"))
    if args.suite in ("observability", "all"):
        c, results = observability_checks(basis, cfg.T, args.trials or 100, cfg.seed)
        checks += c
        if args.suite == "observability":
            extra["constants"] = observability_constants(cfg.zeta, cfg.T).to_dict()
            extra["trials"] = [r.to_dict() for r in results]
    passed = all(c["passed"] for c in checks)
    if cfg.output_format == "csv":
        text = _dump_csv(
            ["check", "passed", "value", "threshold"],
            [[c["check"], c["passed"], c["value"], c["threshold"]] for c in checks],
        )
    else:
        text = _dump_json(
            {"suite": args.suite, "zeta": cfg.zeta, "n": len(basis), "T": cfg.T,
             "passed": passed, "checks": checks, **extra}
        )
    _emit(text, cfg)
    return 0 if passed else 1


COMMANDS = {
    "charpoly": cmd_charpoly,
    "spectrum": cmd_spectrum,
    "modes": cmd_modes,
    "observe": cmd_observe,
    "constants": cmd_constants,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def run(command, args) -> int:
    try:
        cfg = resolve_config(args)
        return COMMANDS[command](args, cfg)
    except UsageError as exc:
        print(f"sgbeam: error: {exc}", file=sys.stderr)
        return 2
    except InvalidParameterError as exc:
        print(f"sgbeam: error: {exc}", file=sys.stderr)
        return 2
    except BeamError as exc:
        print(f"sgbeam: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return run(args.command, args)


if __name__ == "__main__":
    sys.exit(main())
