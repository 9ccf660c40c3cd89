"""Command-line front end.

    meroclass <command> --config cfg.json [--out path] [--format json|csv]
              [--seed N] [--order N] [--jobs N]

Exit codes: 0 success, 2 configuration error, 3 mathematical refutation.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys

import jsonschema
import numpy as np

from . import __version__
from .errors import ConfigError, MeroclassError
from .explore import OptimizeConfig, SweepOptions, problem2_maximize, subordination_scan, sweep
from .functions import Represented, as_function, catalog
from .schwarz import schwarz_from_json
from .series import DEFAULT_ORDER
from .uclass import (
    ClassParams,
    ConstructionSpec,
    b_coefficients,
    bound_reports,
    classify,
    critical_point_witness,
    extremal_f0_spec,
    extremal_fk_spec,
    induced_omega_of,
    quotient_of,
    slit_mapping_params,
    construct,
)
from .verify import SamplingGrid, local_univalence_check, membership, oracle_cross_check, univalence_grid

SCHEMA_VERSION = 1
COMMANDS = ("construct", "verify", "coeffs", "bounds", "classify", "extremal", "maximize", "subordination", "sweep", "plotdata")

# ------------------------------------------------------------------ schemas
_NUM = {"type": "number"}
_CPLX = {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}
_OMEGA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["constant", "monomial", "blaschke", "mix"]},
        "u": _CPLX,
        "m": {"type": "integer", "minimum": 0},
        "zeros": {"type": "array", "items": _CPLX},
        "unimodular_factor": _CPLX,
        "weights": {"type": "array", "items": _NUM},
        "parts": {"type": "array", "items": {"$ref": "#/$defs/omega"}},
    },
    "additionalProperties": False,
}
_GRID = {
    "type": "object",
    "properties": {
        "radii": {"type": "array", "items": _NUM, "minItems": 1},
        "angles_per_ring": {"type": "integer", "minimum": 64},
        "seed": {"type": "integer"},
        "jitter": {"type": "boolean"},
        "extra_points": {"type": "array", "items": _CPLX},
    },
    "additionalProperties": False,
}
_EXTREMAL = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["fk", "f0", "slit"]},
        "k": {"type": "integer", "minimum": 2},
        "p": _NUM,
    },
    "additionalProperties": False,
}
_PARAM_LIST = {"type": "array", "items": {"type": "array", "prefixItems": [_NUM, _CPLX], "minItems": 2, "maxItems": 2}}
_OPT = {
    "family": {"enum": ["constant", "monomial", "blaschke", "mix"]},
    "degree": {"type": "integer", "minimum": 0},
    "starts": {"type": "integer", "minimum": 1},
    "max_iters": {"type": "integer", "minimum": 1},
    "tolerance": {"type": "number", "exclusiveMinimum": 0},
}
_BASE = {"schema_version": {"const": SCHEMA_VERSION}, "seed": {"type": "integer"}}
_CLASS = {"lambda": _NUM, "mu": _CPLX}
_FUNC = {**_CLASS, "c": _CPLX, "omega": {"$ref": "#/$defs/omega"}, "extremal": _EXTREMAL, "order": {"type": "integer", "minimum": 4}}

_PROPS = {
    "construct": {**_FUNC, "grid": _GRID},
    "verify": {**_FUNC, "grid": _GRID, "oracle_radius": _NUM, "oracle_order": {"type": "integer", "minimum": 1}},
    "coeffs": {**_FUNC, "K": {"type": "integer", "minimum": 1}},
    "bounds": {**_CLASS, "kmax": {"type": "integer", "minimum": 2}, "K": {"type": "integer", "minimum": 2}, "p": _NUM, "c": _CPLX},
    "classify": {**_CLASS, "points": _PARAM_LIST, "witness": {"type": "boolean"}},
    "extremal": {**_CLASS, "kind": {"enum": ["fk", "f0", "slit"]}, "k": {"type": "integer", "minimum": 2}, "p": _NUM, "c": _CPLX, "order": {"type": "integer", "minimum": 4}},
    "maximize": {**_CLASS, "p": _NUM, **_OPT},
    "subordination": {**_CLASS, "points": _PARAM_LIST, "samples": {"type": "integer", "minimum": 0}, "radii": {"type": "array", "items": _NUM}, "c_max": {"type": "number", "minimum": 0}},
    "sweep": {
        "points": _PARAM_LIST,
        "lambdas": {"type": "array", "items": _NUM},
        "mus": {"type": "array", "items": _CPLX},
        "quantities": {"type": "array", "items": {"enum": list(SweepOptions().quantities)}},
        "p": _NUM,
        "mc_samples": {"type": "integer", "minimum": 0},
        "optimize": {"type": "object", "properties": _OPT, "additionalProperties": False},
        "grid": _GRID,
    },
    "plotdata": {
        **_CLASS,
        "function": {"enum": ["identity", "mobius", "koebe", "fk", "f0", "slit", "spec"]},
        "c": _CPLX,
        "k": {"type": "integer", "minimum": 2},
        "p": _NUM,
        "omega": {"$ref": "#/$defs/omega"},
        "radii": {"type": "array", "items": _NUM, "minItems": 1},
        "angles": {"type": "integer", "minimum": 8},
    },
}


def schema_for(command: str) -> dict:
    return {
        "type": "object",
        "properties": {**_BASE, **_PROPS[command]},
        "additionalProperties": False,
        "$defs": {"omega": _OMEGA},
    }


def validate_config(command: str, config: dict) -> None:
    try:
        jsonschema.validate(config, schema_for(command))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None


# ------------------------------------------------------------------- output
def _fmt(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    return format(x + 0.0, ".17g")


def to_plain(obj):
    """Convert numpy / complex values to JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json())
    return obj


def dump_json(obj, indent: int = 0) -> str:
    """JSON text with floats written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dump_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dump_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    return json.dumps(obj)


def _csv_cell(v) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        re, im = format(float(v.real) + 0.0, ".17g"), format(float(v.imag) + 0.0, ".17g")
        sign = "" if im.startswith("-") else "+"
        return f"{re}{sign}{im}i"
    if isinstance(v, (float, np.floating)):
        return format(float(v) + 0.0, ".17g")
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(to_plain(v), separators=(",", ":"))
    return str(v)


def parse_csv_complex(text: str) -> complex:
    """Inverse of the CSV complex format 're+imi'."""
    text = text.strip()
    if not text.endswith("i"):
        return complex(float(text))
    return complex(text[:-1] + "j")


def write_csv(rows: list[dict], provenance: dict) -> str:
    buf = io.StringIO()
    for k, v in provenance.items():
        buf.write(f"# {k}={'' if v is None else v}\n")
    columns: list[str] = []
    for r in rows:
        for k in r:
            if k not in columns:
                columns.append(k)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_csv_cell(r.get(c)) for c in columns])
    return buf.getvalue()


# ------------------------------------------------------------ config helpers
def _cplx(v, default=0j) -> complex:
    return default if v is None else complex(v[0], v[1])


def _params(cfg: dict) -> ClassParams:
    if "lambda" not in cfg or "mu" not in cfg:
        raise ConfigError("config needs 'lambda' and 'mu'")
    return ClassParams(cfg["lambda"], _cplx(cfg["mu"]))


def _points(cfg: dict) -> list[ClassParams]:
    if "points" in cfg:
        return [ClassParams(lam, _cplx(mu)) for lam, mu in cfg["points"]]
    if "lambdas" in cfg or "mus" in cfg:
        out = []
        for lam in cfg.get("lambdas", []):
            for mu in cfg.get("mus", []):
                if abs(1 - _cplx(mu)) < lam:
                    out.append(ClassParams(lam, _cplx(mu)))
        return out
    return [_params(cfg)]


def _spec(cfg: dict, order: int | None) -> ConstructionSpec:
    params = _params(cfg)
    n = order or cfg.get("order", DEFAULT_ORDER)
    c = _cplx(cfg.get("c"))
    if "extremal" in cfg and "omega" in cfg:
        raise ConfigError("give either 'omega' or 'extremal', not both")
    if "extremal" in cfg:
        ex = cfg["extremal"]
        if ex["kind"] == "fk":
            return extremal_fk_spec(ex.get("k", 2), params, c, n)
        if ex["kind"] == "slit":
            params = slit_mapping_params(params.lam)
        return extremal_f0_spec(params, ex.get("p", 1.0), n)
    if "omega" not in cfg:
        raise ConfigError("config needs 'omega' or 'extremal'")
    return ConstructionSpec(params, c, schwarz_from_json(cfg["omega"]), n)


def _grid(cfg: dict, seed: int) -> SamplingGrid:
    g = dict(cfg.get("grid", {}))
    g.setdefault("seed", seed)
    try:
        return SamplingGrid.from_json(g)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# ----------------------------------------------------------------- commands
class Outcome:
    def __init__(self, payload, rows=None, exit_code=0):
        self.payload = payload
        self.rows = rows if rows is not None else []
        self.exit_code = exit_code


def _series_rows(q, f):
    return [{"k": k, "z_over_f": q.coeffs[k], "f": f.coeffs[k]} for k in range(q.order + 1)]


def cmd_construct(cfg, args):
    spec = _spec(cfg, args.order)
    f = construct(spec)
    q = quotient_of(f)
    rep = membership(spec, spec.params, _grid(cfg, args.seed))
    payload = {
        "spec": spec.to_json(),
        "z_over_f": q.to_json(),
        "f": f.to_json(),
        "b": b_coefficients(f, min(8, q.order)),
        "membership": rep.to_json(),
    }
    return Outcome(payload, _series_rows(q, f), 3 if rep.verdict == "refuted" else 0)


def cmd_verify(cfg, args):
    spec = _spec(cfg, args.order)
    grid = _grid(cfg, args.seed)
    fn = Represented(spec)
    mem = membership(fn, spec.params, grid)
    loc = local_univalence_check(fn, grid)
    uni = univalence_grid(fn, grid)
    gap = oracle_cross_check(fn, cfg.get("oracle_radius", 0.5), cfg.get("oracle_order", 32))
    omega = induced_omega_of(construct(spec), spec.params, 16)
    payload = {
        "spec": spec.to_json(),
        "region": classify(spec.params).to_json() if spec.params.lam <= 1 else None,
        "membership": mem.to_json(),
        "local_univalence": loc.to_json(),
        "univalence": uni.to_json(),
        "oracle_max_discrepancy": gap,
        "induced_omega_c0": omega.coeffs[0],
        "induced_omega_c1": omega.coeffs[1],
    }
    rows = [
        {"check": "membership", "verdict": mem.verdict, "value": mem.sup_estimate},
        {"check": "local_univalence", "verdict": loc.verdict, "value": loc.min_abs_derivative},
        {"check": "univalence_grid", "verdict": uni.verdict, "value": float(uni.max_preimages)},
        {"check": "oracle", "verdict": "agree" if gap <= 1e-8 else "disagree", "value": gap},
    ]
    refuted = "refuted" in (mem.verdict, loc.verdict, uni.verdict)
    return Outcome(payload, rows, 3 if refuted else 0)


def cmd_coeffs(cfg, args):
    spec = _spec(cfg, args.order)
    f = construct(spec)
    K = min(cfg.get("K", 16), spec.order)
    b = b_coefficients(f, K)
    c = induced_omega_of(f, spec.params, K).coeffs
    rows = [{"k": k, "a_k": f.coeffs[k], "b_k": b[k - 1], "c_k": c[k]} for k in range(1, K + 1)]
    return Outcome({"spec": spec.to_json(), "rows": rows}, rows)


def cmd_bounds(cfg, args):
    params = _params(cfg)
    p = cfg.get("p", 1.0)
    reports = bound_reports(params, cfg.get("kmax", 6), cfg.get("K", 200), p, _cplx(cfg.get("c")))
    rows = [r.to_json() for r in reports]
    for r in rows:
        r["index"] = r.pop("k", r.pop("p", None))
    if params.real_a is None:
        rows.append({"kind": "a2", "index": p, "bound_value": "n/a", "achieved_value": "n/a", "gap": "n/a"})
    return Outcome({"params": params.to_json(), "rows": rows}, rows)


def cmd_classify(cfg, args):
    rows = []
    for params in _points(cfg):
        v = classify(params)
        row = {"lambda": params.lam, "mu": params.mu, **v.to_json()}
        if v.contains_non_locally_univalent and cfg.get("witness", True):
            row["witness"] = critical_point_witness(params).z
        rows.append(row)
    return Outcome({"rows": rows}, rows)


def cmd_extremal(cfg, args):
    params = _params(cfg)
    kind = cfg.get("kind", "fk")
    n = args.order or cfg.get("order", DEFAULT_ORDER)
    if kind == "fk":
        spec = extremal_fk_spec(cfg.get("k", 2), params, _cplx(cfg.get("c")), n)
    else:
        if kind == "slit":
            params = slit_mapping_params(params.lam)
        spec = extremal_f0_spec(params, cfg.get("p", 1.0), n)
    f = construct(spec)
    q = quotient_of(f)
    return Outcome({"kind": kind, "spec": spec.to_json(), "z_over_f": q.to_json(), "f": f.to_json()}, _series_rows(q, f))


def cmd_maximize(cfg, args):
    params = _params(cfg)
    oc = OptimizeConfig(
        cfg.get("family", "constant"),
        cfg.get("degree", 1 if cfg.get("family") in ("blaschke", "mix") else 0),
        cfg.get("starts", 16),
        cfg.get("max_iters", 2000),
        cfg.get("tolerance", 1e-10),
        args.seed,
    )
    rep = problem2_maximize(params, cfg.get("p", 1.0), oc)
    payload = rep.to_json()
    rows = [{"start": i, "value": v} for i, v in enumerate(rep.history)]
    return Outcome(payload, rows)


def cmd_subordination(cfg, args):
    grid = _points(cfg)
    rows = subordination_scan(
        grid, cfg.get("samples", 8), tuple(cfg.get("radii", (0.5, 0.9, 0.99))), args.seed, cfg.get("c_max", 1.0)
    )
    if rows and all(r.get("error") and "samples" not in r for r in rows):
        raise ConfigError("; ".join(sorted({r["error"] for r in rows})))
    return Outcome({"label": "conjecture scan (numerical evidence, not verified)", "rows": rows}, rows)


def cmd_sweep(cfg, args):
    points = _points(cfg)
    opt = cfg.get("optimize", {})
    oc = OptimizeConfig(
        opt.get("family", "constant"),
        opt.get("degree", 1 if opt.get("family") in ("blaschke", "mix") else 0),
        opt.get("starts", 4),
        opt.get("max_iters", 2000),
        opt.get("tolerance", 1e-10),
        args.seed,
    )
    options = SweepOptions(
        p=cfg.get("p", 1.0),
        mc_samples=cfg.get("mc_samples", 4),
        seed=args.seed,
        optimize=oc,
        grid=_grid(cfg, args.seed) if "grid" in cfg else SamplingGrid(angles_per_ring=128, seed=args.seed),
        quantities=tuple(cfg.get("quantities", SweepOptions().quantities)),
        jobs=args.jobs,
    )
    rows = sweep(points, options)
    return Outcome({"rows": rows}, rows)


def cmd_plotdata(cfg, args):
    name = cfg.get("function", "identity")
    params = _params(cfg) if "lambda" in cfg else None
    if name == "spec":
        fn = Represented(_spec(cfg, args.order))
    else:
        fn = catalog(name, params, c=_cplx(cfg.get("c")), k=cfg.get("k", 2), p=cfg.get("p", 1.0))
    mu = params.mu if params is not None else 1.0
    n = cfg.get("angles", 512)
    rows = []
    for r in cfg.get("radii", [0.5, 0.9]):
        if not 0 < r < 1:
            raise ConfigError("radii must lie in (0, 1)")
        theta = 2 * np.pi * np.arange(n) / n
        z = r * np.exp(1j * theta)
        with np.errstate(all="ignore"):
            q = fn.quotient(z)
            fz = z / q
            dev = np.abs(fn.u(z) - mu)
        for t, zz, fv, d in zip(theta, z, fz, dev):
            rows.append({"r": r, "theta": float(t), "z": complex(zz), "f": complex(fv), "abs_U_minus_mu": float(d)})
    return Outcome({"function": name, "rows": rows}, rows)


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# --------------------------------------------------------------------- main
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="meroclass", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"meroclass {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file ('-' for stdin)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--order", type=int, default=None)
        p.add_argument("--jobs", type=int, default=1)
    return ap


def load_config(path: str | None) -> dict:
    if path is None:
        return {"schema_version": SCHEMA_VERSION}
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        cfg = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def run(argv=None) -> tuple[int, str]:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        validate_config(args.command, cfg)
        if args.seed is None:
            args.seed = int(cfg.get("seed", 0))
        if args.order is not None and args.order < 4:
            raise ConfigError("--order must be >= 4")
        outcome = HANDLERS[args.command](cfg, args)
    except MeroclassError as exc:
        return 2, f"error: {exc}\n"
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    provenance = {
        "tool": "meroclass",
        "version": __version__,
        "command": args.command,
        "config_sha256": hashlib.sha256(canonical.encode()).hexdigest(),
        "seed": args.seed,
        "order": args.order,
    }
    if args.format == "csv":
        text = write_csv([{k: v for k, v in r.items() if not isinstance(v, (dict, list)) or k == "witness"} for r in outcome.rows], provenance)
    else:
        text = dump_json(to_plain({"provenance": provenance, "result": outcome.payload})) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        text = ""
    return outcome.exit_code, text


def main(argv=None) -> int:
    code, text = run(argv)
    stream = sys.stderr if code == 2 else sys.stdout
    if text:
        try:
            stream.write(text)
            stream.flush()
        except BrokenPipeError:
            pass
    return code


if __name__ == "__main__":
    sys.exit(main())
