"""Batch command line entry point.

Usage::

    python -m wkp run CONFIG.json [--out DIR] [--threads K]

Exit codes: 0 when every requested acceptance rule passes, 1 when a rule
fails, 2 for malformed or schema-violating configs, 3 for precondition
failures, 4 for non-finite numeric results.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .acceptance import CRITERIA, CriterionResult
from .harness import (
    EVEN_EXCEPTION,
    DIVERGENT,
    FamilySpec,
    InequalityReport,
    biparameter_ratio,
    commutator_ratio,
    family_generate,
    kp_ratio,
    mixed_ratio,
    power_fit,
    sharpness_classify,
    sweep,
)
from .kernels import kernel_bound_check, kernel_ks_delta
from .norms import MixedSpec, holder_exponents
from .quadrature import QuadratureError
from .spectral import GridFunction, make_grid, random_bandlimited

__all__ = ["main", "run", "load_config", "emit_plot_data", "format_float", "RunReport", "CONFIG_SCHEMA"]

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION, EXIT_NONFINITE = 0, 1, 2, 3, 4
THREADS_ENV = "WKP_THREADS"

_num = {"type": "number"}
_pos_or_inf = {"oneOf": [{"type": "number", "exclusiveMinimum": 0}, {"const": "inf"}]}
_nonneg = {"type": "number", "minimum": 0}

_mixed_block = {
    "type": "object",
    "additionalProperties": False,
    "required": ["p_dot", "p_ddot"],
    "properties": {
        "p_dot": _pos_or_inf, "a_dot": _nonneg, "p_ddot": _pos_or_inf, "a_ddot": _nonneg,
    },
}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["command"],
    "properties": {
        "command": {"enum": ["verify", "sweep", "counterexample", "kernel", "suite"]},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n", "L", "N"],
            "properties": {"n": {"type": "integer"}, "L": _num, "N": {"type": "integer"}},
        },
        "theorem_id": {"enum": ["main1", "main-comm", "main2", "main3"]},
        "s": _num,
        "s_dot": _num,
        "s_ddot": _num,
        "order": {"enum": [1, 2]},
        "exponents": {
            "type": "object",
            "additionalProperties": False,
            "required": ["p1", "p2"],
            "properties": {"p1": _pos_or_inf, "p2": _pos_or_inf, "a1": _nonneg, "a2": _nonneg},
        },
        "mixed": {
            "type": "object",
            "additionalProperties": False,
            "required": ["dot_dim", "target", "first", "second"],
            "properties": {
                "dot_dim": {"type": "integer"},
                "target": _mixed_block,
                "first": _mixed_block,
                "second": _mixed_block,
            },
        },
        "family": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "params"],
            "properties": {
                "kind": {"enum": ["modulated", "dilated", "psi_squared"]},
                "params": {"type": "array", "items": _num, "minItems": 1},
                "base_profile": {"enum": ["Phi", "Psi"]},
                "normalize": {"type": "boolean"},
            },
        },
        "pair": {
            "type": "object",
            "additionalProperties": False,
            "required": ["band"],
            "properties": {"band": _num, "window": _num},
        },
        "weight": {"enum": ["japanese", "homogeneous"]},
        "operator": {"enum": ["J", "D"]},
        "kernel": {
            "type": "object",
            "additionalProperties": False,
            "required": ["s", "delta", "n", "radii"],
            "properties": {
                "s": _num, "delta": _num, "n": {"type": "integer"},
                "radii": {"type": "array", "items": _num, "minItems": 1},
            },
        },
        "criteria": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        "seed": {"type": "integer"},
        "output_path": {"type": "string"},
        "acceptance": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_ratio": _num,
                "slope": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["quantity", "target", "tol"],
                    "properties": {
                        "quantity": {"enum": ["ratio", "lhs", "rhs", "rhs_over_lhs"]},
                        "target": _num,
                        "tol": _num,
                    },
                },
                "max_slope": _num,
                "max_spread": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["quantity", "value"],
                    "properties": {"quantity": {"enum": ["lhs", "rhs", "ratio"]}, "value": _num},
                },
                "growth_threshold": _num,
            },
        },
    },
}

_REQUIRED_BY_COMMAND = {
    "verify": ["grid", "theorem_id"],
    "sweep": ["grid", "theorem_id", "s", "exponents", "family"],
    "counterexample": ["grid", "theorem_id", "s", "exponents", "family"],
    "kernel": ["kernel"],
    "suite": [],
}


class ConfigError(Exception):
    """Malformed config: exit code 2."""


class PreconditionError(Exception):
    """Valid config whose values violate a module precondition: exit code 3."""


class NonFiniteError(Exception):
    """A computed quantity is NaN or infinite: exit code 4."""


def format_float(x: float) -> str:
    """17 significant digits in scientific notation."""
    return f"{float(x):.16e}"


# -- config ----------------------------------------------------------------------


def _path(err: jsonschema.ValidationError) -> str:
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def load_config(path: str | os.PathLike) -> dict:
    """Read and schema-check a config file; raises :class:`ConfigError`."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(f"{path}: field '{_path(err)}': {err.message}")
    for key in _REQUIRED_BY_COMMAND[cfg["command"]]:
        if key not in cfg:
            raise ConfigError(f"{path}: command '{cfg['command']}' requires field '{key}'")
    if cfg["command"] in ("verify",) and cfg.get("theorem_id") in ("main1", "main-comm"):
        if "exponents" not in cfg:
            raise ConfigError(f"{path}: theorem {cfg['theorem_id']} requires field 'exponents'")
    return cfg


def _p(v):
    return math.inf if v == "inf" else float(v)


@dataclass
class Plan:
    """Validated, ready-to-run objects built from a config."""

    cfg: dict
    grid: object = None
    exponents: object = None
    family: FamilySpec | None = None
    mixed: tuple | None = None
    quiet: bool = False


def _precondition(field_name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        raise PreconditionError(f"{field_name}: {exc}") from None


def _build_grid(g: dict):
    n, L, N = g["n"], g["L"], g["N"]
    if n not in (1, 2, 3):
        raise PreconditionError(f"grid.n: dimension must be 1, 2 or 3, got {n}")
    if not L > 0:
        raise PreconditionError(f"grid.L: side_length must be positive, got {L}")
    if N < 8 or N % 2:
        raise PreconditionError(f"grid.N: points_per_axis must be an even integer >= 8, got {N}")
    return make_grid(n, L, N)


def plan_run(cfg: dict) -> Plan:
    """Validate every precondition before any heavy computation starts."""
    plan = Plan(cfg)
    cmd = cfg["command"]
    if "grid" in cfg:
        plan.grid = _build_grid(cfg["grid"])
    if "exponents" in cfg:
        e = cfg["exponents"]
        plan.exponents = _precondition(
            "exponents", holder_exponents, _p(e["p1"]), _p(e["p2"]), e.get("a1", 0.0), e.get("a2", 0.0)
        )
    if "family" in cfg:
        fam = cfg["family"]
        plan.family = _precondition(
            "family", FamilySpec, fam["kind"], tuple(fam["params"]), fam.get("base_profile", "Phi")
        )
        if plan.grid is not None:
            _precondition("family.params", family_generate, plan.family, plan.grid)
    tid = cfg.get("theorem_id")
    if tid in ("main2", "main3"):
        if "mixed" not in cfg:
            raise PreconditionError(f"theorem_id: {tid} requires the 'mixed' block")
        m = cfg["mixed"]
        dd = m["dot_dim"]
        if plan.grid is None or not (1 <= dd < plan.grid.dim):
            raise PreconditionError(
                f"mixed.dot_dim: must split the grid dimension into two non-empty blocks, got {dd}"
            )
        rest = plan.grid.dim - dd

        def spec(b):
            return MixedSpec(_p(b["p_dot"]), b.get("a_dot", 0.0), dd, _p(b["p_ddot"]), b.get("a_ddot", 0.0), rest)

        specs = tuple(_precondition(f"mixed.{k}", spec, m[k]) for k in ("target", "first", "second"))
        from .harness import _check_mixed

        _precondition("mixed", _check_mixed, *specs)
        plan.mixed = specs
        if tid == "main3" and not ("s_dot" in cfg and "s_ddot" in cfg):
            raise PreconditionError("s_dot/s_ddot: main3 requires both orders")
    if tid in ("main1", "main-comm", "main2") and cmd != "suite" and "s" not in cfg:
        raise PreconditionError(f"s: theorem {tid} requires the smoothness order 's'")
    if cmd in ("sweep", "counterexample") and tid not in ("main1", "main-comm"):
        raise PreconditionError(f"theorem_id: sweeps support main1 and main-comm, got {tid}")
    if cfg.get("operator") == "D" and cfg.get("s", 1.0) <= 0:
        raise PreconditionError("operator: D requires s > 0")
    if cmd == "kernel":
        k = cfg["kernel"]
        if k["n"] not in (1, 2, 3):
            raise PreconditionError(f"kernel.n: dimension must be 1, 2 or 3, got {k['n']}")
        if not (0 < k["delta"] <= 1):
            raise PreconditionError(f"kernel.delta: must lie in (0, 1], got {k['delta']}")
        if any(r <= 0 for r in k["radii"]):
            raise PreconditionError("kernel.radii: radii must be positive")
    if cmd == "suite":
        bad = [c for c in cfg.get("criteria", []) if c not in CRITERIA and c != 12]
        if bad:
            raise PreconditionError(f"criteria: unknown criterion ids {bad}")
    if "pair" in cfg and cfg["pair"]["band"] <= 0:
        raise PreconditionError("pair.band: must be positive")
    return plan


# -- reports ---------------------------------------------------------------------


@dataclass
class RunReport:
    config: dict
    rows: list[InequalityReport]
    fits: dict = field(default_factory=dict)
    rules: dict = field(default_factory=dict)
    criteria: list[dict] = field(default_factory=list)
    wall_clock_seconds: float = 0.0
    version: str = __version__
    fit_variable: str = "param"

    @property
    def passed(self) -> bool:
        return all(bool(v["pass"]) for v in self.rules.values())

    def to_json(self) -> dict:
        return _clean(
            {
                "version": self.version,
                "config": self.config,
                "passed": self.passed,
                "rules": self.rules,
                "fits": self.fits,
                "criteria": self.criteria,
                "rows": [r.as_dict() for r in self.rows],
                "fit_variable": self.fit_variable,
                "wall_clock_seconds": self.wall_clock_seconds,
            }
        )


def _clean(obj):
    """Convert numpy scalars and non-finite floats into JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def write_csv(rows: list[InequalityReport], path: Path) -> None:
    lines = ["family_param,lhs,rhs,ratio"]
    for r in rows:
        lines.append(",".join(format_float(v) for v in (r.family_param, r.lhs, r.rhs, r.ratio)))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_plot_data(report: RunReport, path: str | os.PathLike) -> Path:
    """Write ``log(param) log(ratio)`` columns with the fit line in '#' headers.

    For modulated families the parameter column is ``2^k`` so the slope is
    the one reported for the sweep.
    """
    rows = report.rows
    if len(rows) < 2:
        raise ValueError(f"plot data needs at least 2 rows, got {len(rows)}")
    modulated = report.fit_variable == "2^k"
    x = np.array([2.0**r.family_param if modulated else r.family_param for r in rows])
    y = np.array([r.ratio for r in rows])
    fit = power_fit(x, y)
    path = Path(path)
    lines = [
        f"# fit: log(ratio) = {format_float(fit.slope)} * log({report.fit_variable}) + {format_float(fit.intercept)}",
        f"# columns: log({report.fit_variable}) log(ratio); rows={len(rows)}",
    ]
    lines += [f"{format_float(a)} {format_float(b)}" for a, b in zip(np.log(x), np.log(y))]
    path.write_text("\n".join(lines) + "\n")
    return path


def _check_finite(rows: list[InequalityReport]):
    for r in rows:
        vals = [r.lhs, r.rhs, *r.rhs_terms]
        if not r.degenerate:
            vals.append(r.ratio)
        if not all(math.isfinite(v) for v in vals):
            raise NonFiniteError(f"non-finite result at family_param={r.family_param}: lhs={r.lhs}, rhs={r.rhs}")


# -- commands --------------------------------------------------------------------


def _slope_rule(res, rule) -> dict:
    q = rule["quantity"]
    if q == "ratio":
        slope = res.growth.slope
    elif q == "lhs":
        slope = res.lhs_fit.slope
    elif q == "rhs":
        slope = res.rhs_fit.slope
    else:
        slope = res.rhs_fit.slope - res.lhs_fit.slope
    return {"quantity": q, "measured": slope, "target": rule["target"], "tol": rule["tol"],
            "pass": abs(slope - rule["target"]) <= rule["tol"]}


def _sweep_rules(res, acc: dict) -> dict:
    rules = {}
    if "slope" in acc:
        rules["slope"] = _slope_rule(res, acc["slope"])
    if "max_slope" in acc:
        rules["max_slope"] = {"measured": res.growth.slope, "limit": acc["max_slope"],
                              "pass": res.growth.slope <= acc["max_slope"]}
    if "max_ratio" in acc:
        mx = float(res.column("ratio").max())
        rules["max_ratio"] = {"measured": mx, "limit": acc["max_ratio"], "pass": mx <= acc["max_ratio"]}
    if "max_spread" in acc:
        col = res.column(acc["max_spread"]["quantity"])
        spread = float(col.max() / col.min()) if col.min() > 0 else math.inf
        rules["max_spread"] = {"quantity": acc["max_spread"]["quantity"], "measured": spread,
                               "limit": acc["max_spread"]["value"],
                               "pass": spread <= acc["max_spread"]["value"]}
    return rules


def _fits(res) -> dict:
    return {name: asdict(getattr(res, name)) for name in ("growth", "lhs_fit", "rhs_fit")}


def _run_sweep(plan: Plan, threads: int) -> RunReport:
    cfg = plan.cfg
    res = sweep(
        cfg["theorem_id"], plan.family, plan.exponents, cfg["s"], plan.grid,
        order=cfg.get("order", 1), normalize=cfg["family"].get("normalize"),
        threads=threads, weight=cfg.get("weight", "japanese"), operator=cfg.get("operator", "J"),
    )
    _check_finite(res.reports)
    rep = RunReport(cfg, res.reports, fits=_fits(res), fit_variable=res.fit_variable)
    rep.rules = _sweep_rules(res, cfg.get("acceptance", {}))
    if cfg["command"] == "counterexample":
        e = plan.exponents
        expected = sharpness_classify(cfg["s"], e.p, plan.grid.dim)
        threshold = cfg.get("acceptance", {}).get("growth_threshold", 0.1)
        # modulated: ratio grows with 2^k; dilation families: ratio grows as delta -> 0
        growth = res.growth.slope if res.fit_variable == "2^k" else -res.growth.slope
        observed = DIVERGENT if growth > threshold else "bounded_observed"
        want_divergent = expected == DIVERGENT
        rep.rules["classification"] = {
            "expected": expected, "ratio_growth_exponent": growth, "threshold": threshold,
            "observed": observed, "pass": (observed == DIVERGENT) == want_divergent,
        }
        if expected == EVEN_EXCEPTION:
            rep.rules["classification"]["note"] = "even-integer order: bounded behaviour expected"
    return rep


def _pair(plan: Plan):
    cfg = plan.cfg
    if plan.family is not None:
        pairs = family_generate(plan.family, plan.grid)
        return [(p, f, g) for p, (f, g) in zip(plan.family.param_list, pairs)]
    rng = np.random.default_rng(cfg.get("seed", 0))
    pr = cfg.get("pair", {"band": plan.grid.nyquist / 4, "window": 1.0})
    window = pr.get("window")
    f = random_bandlimited(plan.grid, pr["band"], rng, window=window)
    g = random_bandlimited(plan.grid, pr["band"], rng, window=window)
    return [(0.0, f, g)]


def _run_verify(plan: Plan, threads: int) -> RunReport:
    cfg = plan.cfg
    tid = cfg["theorem_id"]
    rows = []
    for param, f, g in _pair(plan):
        if tid == "main1":
            r = kp_ratio(f, g, cfg["s"], plan.exponents, param,
                         weight=cfg.get("weight", "japanese"), operator=cfg.get("operator", "J"))
        elif tid == "main-comm":
            r = commutator_ratio(f, g, cfg["s"], plan.exponents, cfg.get("order", 1), param)
        elif tid == "main2":
            r = mixed_ratio(f, g, cfg["s"], *plan.mixed, family_param=param)
        else:
            r = biparameter_ratio(f, g, cfg["s_dot"], cfg["s_ddot"], *plan.mixed, family_param=param)
        rows.append(r)
    _check_finite(rows)
    rep = RunReport(cfg, rows, fit_variable="2^k" if plan.family and plan.family.kind == "modulated" else "param")
    acc = cfg.get("acceptance", {})
    if "max_ratio" in acc:
        mx = max(r.ratio for r in rows)
        rep.rules["max_ratio"] = {"measured": mx, "limit": acc["max_ratio"], "pass": mx <= acc["max_ratio"]}
    return rep


def _run_kernel(plan: Plan, threads: int) -> RunReport:
    cfg = plan.cfg
    k = cfg["kernel"]
    s, delta, n = k["s"], k["delta"], k["n"]
    rows = []
    checks = []
    for y in k["radii"]:
        val = _precondition("kernel", kernel_ks_delta, y, s, delta, n)
        if s < 0 and y >= 1:
            v, env, ok = kernel_bound_check(y, s, delta, n)
            checks.append(ok)
            rows.append(InequalityReport("kernel", y, v, (env,), env, v / env,
                                         {"s": s, "delta": delta, "n": n}, s, {"n": n}))
        else:
            rows.append(InequalityReport("kernel", y, val.value, (), 0.0, math.nan,
                                         {"s": s, "delta": delta, "n": n}, s, {"n": n}, True))
    for r in rows:
        if not math.isfinite(r.lhs):
            raise NonFiniteError(f"kernel value at y={r.family_param} is not finite")
    rep = RunReport(cfg, rows)
    if checks:
        rep.rules["envelope"] = {"checked": len(checks), "pass": all(checks), "slack": 10.0}
    return rep


def _determinism_check(threads: int) -> CriterionResult:
    cfg = {
        "command": "sweep", "grid": {"n": 1, "L": 6 * math.pi, "N": 2048}, "theorem_id": "main1",
        "s": -0.5, "exponents": {"p1": 2, "p2": 2, "a1": 0, "a2": 0},
        "family": {"kind": "modulated", "params": [3, 4, 5, 6, 7, 8]},
    }
    blobs = []
    with tempfile.TemporaryDirectory() as tmp:
        for i in range(2):
            out = Path(tmp) / str(i)
            out.mkdir()
            cfile = out / "cfg.json"
            cfile.write_text(json.dumps(cfg))
            run(cfile, out, threads, quiet=True)
            blobs.append((out / "results.csv").read_bytes())
    same = blobs[0] == blobs[1]
    return CriterionResult(12, "byte-identical CSV on rerun", same, "identical bytes",
                           {"csv_bytes": len(blobs[0])})


def _run_suite(plan: Plan, threads: int) -> RunReport:
    cfg = plan.cfg
    ids = cfg.get("criteria", sorted(CRITERIA) + [12])
    seed = cfg.get("seed", 0)
    results = []
    for cid in sorted(ids):
        if cid == 12:
            results.append(_determinism_check(threads))
        else:
            results.append(CRITERIA[cid](seed=seed, threads=threads))
    rows = [r for res in results for r in res.rows]
    _check_finite(rows)
    rep = RunReport(cfg, rows, criteria=[r.as_dict() for r in results])
    rep.rules = {f"criterion_{r.id}": {"name": r.name, "pass": bool(r.passed)} for r in results}
    if not plan.quiet:
        for r in results:
            print(r.line())
    return rep


_COMMANDS = {
    "verify": _run_verify,
    "sweep": _run_sweep,
    "counterexample": _run_sweep,
    "kernel": _run_kernel,
    "suite": _run_suite,
}


def resolve_threads(cli_value: int | None) -> int:
    """``--threads`` wins, then the ``WKP_THREADS`` environment variable, then 1."""
    if cli_value is not None:
        return max(1, cli_value)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"environment variable {THREADS_ENV}={env!r} is not an integer") from None
    return 1


def run(config_file, out_dir=None, threads: int | None = None, quiet: bool = False) -> int:
    """Execute one config; returns the process exit code.

    Writes ``report.json`` and ``results.csv`` (plus ``plot.dat`` for runs
    with at least two rows and a fit) into ``out_dir``.
    """
    try:
        cfg = load_config(config_file)
        nthreads = resolve_threads(threads)
        plan = plan_run(cfg)
        plan.quiet = quiet
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    out = Path(out_dir if out_dir is not None else cfg.get("output_path", "."))
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    try:
        report = _COMMANDS[cfg["command"]](plan, nthreads)
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NonFiniteError as exc:
        print(f"non-finite result: {exc}", file=sys.stderr)
        return EXIT_NONFINITE
    except ValueError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ArithmeticError, FloatingPointError, QuadratureError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NONFINITE
    report.wall_clock_seconds = time.perf_counter() - start
    write_csv(report.rows, out / "results.csv")
    if cfg["command"] in ("sweep", "counterexample") and len(report.rows) >= 2:
        emit_plot_data(report, out / "plot.dat")
    (out / "report.json").write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    status = "PASS" if report.passed else "FAIL"
    if not quiet:
        print(f"{cfg['command']}: {status} ({len(report.rows)} rows) -> {out}")
    return EXIT_OK if report.passed else EXIT_FAIL


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wkp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="action", required=True)
    p_run = sub.add_parser("run", help="execute a JSON config")
    p_run.add_argument("config", help="path to the JSON config")
    p_run.add_argument("--out", default=None, help="output directory (default: config output_path or .)")
    p_run.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default: ${THREADS_ENV} or 1)")
    args = parser.parse_args(argv)
    return run(args.config, args.out, args.threads)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
