"""Experiment runner: subcommand dispatch, TOML config, CSV/JSON emission.

Every run is a pure function of (config, seed); flags override config-file
values, the ``BREGVAR_SEED`` environment variable is the default-seed
fallback.  Exit codes: 0 pass, 1 check failure, 2 usage error, 3
numerical/resolution error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import __version__
from .acceptance import run_suite
from .convex import delta2_constant, doob_constant, simonenko_indices, young_builtin
from .errors import BregvarError, CheckFailure, ConvexityError, HartmanWintnerError, ResolutionError
from .hardystein import elliptic_identity_bm, parabolic_identity
from .orlicz import DiscreteMeasure, luxemburg_norm
from .paths import (
    CompoundPoisson,
    GaussianLaw,
    LevyModel,
    SamplePath,
    TruncatedStable,
    TwoPointLaw,
    UniformLaw,
    refine_partition,
    simulate,
)
from .semigroup import GridFunction, LevySymbol, transition_density
from .variation import discrete_variation, integral_partition_sum, pathwise_variation
from .verify import FiniteMartingale, doob_check, enumerate_isometry, mc_isometry, mc_stopped_isometry, sum_of_independent

USAGE_ERROR, CHECK_FAILURE, NUMERICAL_ERROR = 2, 1, 3

PATH_SCHEMA = "bregvar/path-v1"
TRACE_SCHEMA = "bregvar/trace-v1"
DENSITY_SCHEMA = "bregvar/density-v1"
REPORT_SCHEMA = "bregvar/report-v1"


# ---------------------------------------------------------------------------
# spec parsing: phi, models, symbols, profiles
# ---------------------------------------------------------------------------


def phi_from_spec(spec: str):
    """'power:2' or 'plog:2:1' -> YoungFunction."""
    parts = spec.split(":")
    name = parts[0]
    try:
        if name == "power" and len(parts) == 2:
            return young_builtin("power", p=float(parts[1]))
        if name == "plog" and len(parts) == 3:
            return young_builtin("plog", p=float(parts[1]), gamma=float(parts[2]))
    except (ConvexityError, ValueError) as exc:
        raise SystemExit(_usage(f"invalid phi spec {spec!r}: {exc}"))
    raise SystemExit(_usage(f"unknown phi spec {spec!r} (use power:P or plog:P:GAMMA)"))


def model_from_dict(d: dict) -> LevyModel:
    d = dict(d)
    sigma2 = float(d.pop("sigma2", 0.0))
    jumps_spec = d.pop("jumps", None)
    if d:
        raise ValueError(f"unknown model keys: {sorted(d)}")
    jumps = None
    if jumps_spec is not None:
        j = dict(jumps_spec)
        kind = j.pop("type")
        if kind == "cp":
            law_name = j.pop("law")
            if law_name == "two_point":
                law = TwoPointLaw(a=float(j.pop("a")))
            elif law_name == "uniform":
                law = UniformLaw(a=float(j.pop("a")))
            elif law_name == "gaussian":
                law = GaussianLaw(s=float(j.pop("s")))
            else:
                raise ValueError(f"unknown jump law {law_name!r}")
            jumps = CompoundPoisson(intensity=float(j.pop("intensity")), law=law)
        elif kind == "stable":
            jumps = TruncatedStable(
                alpha=float(j.pop("alpha")),
                c=float(j.pop("c")),
                eps=float(j.pop("eps")),
                z_max=float(j.pop("z_max")) if "z_max" in j else None,
            )
        else:
            raise ValueError(f"unknown jump type {kind!r}")
        if j:
            raise ValueError(f"unknown jump keys: {sorted(j)}")
    return LevyModel(sigma2=sigma2, jumps=jumps)


def model_from_json(text: str) -> LevyModel:
    try:
        return model_from_dict(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SystemExit(_usage(f"invalid model spec: {exc}"))


def profile_from_spec(spec: str, L: float, m: int) -> GridFunction:
    """'gaussian:S' -> exp(-x^2 / (2 S^2)) on the grid."""
    parts = spec.split(":")
    if parts[0] == "gaussian" and len(parts) == 2:
        s = float(parts[1])
        return GridFunction.from_callable(lambda x: np.exp(-(x**2) / (2.0 * s**2)), L, m)
    raise SystemExit(_usage(f"unknown profile spec {spec!r} (use gaussian:S)"))


# ---------------------------------------------------------------------------
# output formatting
# ---------------------------------------------------------------------------


def _json_fragment(obj, sig: int) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "null"
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return format(x, f".{sig}g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_fragment(v, sig)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_fragment(v, sig) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, sig: int = 17) -> str:
    """JSON with floats at ``sig`` significant digits (17 round-trips)."""
    return _json_fragment(obj, sig)


def _hum(x: float) -> str:
    return format(float(x), ".12g")


def _usage(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return USAGE_ERROR


# ---------------------------------------------------------------------------
# CSV I/O (schema comment + metadata comments + header)
# ---------------------------------------------------------------------------


def write_path_csv(path_obj: SamplePath, dest: str):
    with open(dest, "w") as fh:
        fh.write(f"# schema: {PATH_SCHEMA}\n")
        fh.write(f"# qv_cont_rate: {path_obj.qv_cont_rate!r}\n")
        fh.write(f"# horizon: {path_obj.horizon!r}\n")
        fh.write(f"# grid_m: {path_obj.grid_m}\n")
        fh.write("t,x,is_jump,x_left\n")
        for t, x, j, xl in zip(path_obj.times, path_obj.values, path_obj.is_jump, path_obj.x_left):
            fh.write(f"{float(t)!r},{float(x)!r},{int(j)},{float(xl)!r}\n")


def read_path_csv(src: str) -> SamplePath:
    meta = {}
    rows = []
    with open(src) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    k, v = body.split(":", 1)
                    meta[k.strip()] = v.strip()
                continue
            if line.startswith("t,"):
                continue
            rows.append(line.split(","))
    if meta.get("schema", PATH_SCHEMA) != PATH_SCHEMA:
        raise ValueError(f"unsupported path schema {meta.get('schema')!r}")
    data = np.array([[float(r[0]), float(r[1]), float(r[2]), float(r[3])] for r in rows])
    p = SamplePath.from_arrays(
        data[:, 0],
        data[:, 1],
        is_jump=data[:, 2] != 0.0,
        x_left=data[:, 3],
        qv_cont_rate=float(meta.get("qv_cont_rate", 0.0)),
    )
    if "grid_m" in meta or "horizon" in meta:
        import dataclasses

        p = dataclasses.replace(
            p,
            grid_m=int(meta.get("grid_m", p.grid_m)),
            horizon=float(meta.get("horizon", p.horizon)),
        )
    return p


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_young(args) -> int:
    params = {"p": args.p}
    if args.family == "plog":
        params["gamma"] = args.gamma if args.gamma is not None else 1.0
    try:
        phi = young_builtin(args.family, **params)
    except (ConvexityError, ValueError) as exc:
        return _usage(str(exc))
    cert = delta2_constant(phi)
    idx = simonenko_indices(phi)
    c_phi = doob_constant(idx) if idx.moderate else None
    payload = {
        "k_phi": cert.k_phi,
        "d_phi": idx.lower,
        "D_phi": idx.upper,
        "c_phi": c_phi,
        "exact": bool(cert.exact and idx.exact),
    }
    if args.json:
        print(dumps_json(payload))
    else:
        print(f"phi = {phi!r}")
        for k in ("k_phi", "d_phi", "D_phi", "c_phi"):
            v = payload[k]
            print(f"  {k:6s} = {_hum(v) if v is not None else 'n/a'}")
        print(f"  exact  = {payload['exact']}")
    return 0


def _cmd_orlicz(args) -> int:
    phi = phi_from_spec(args.phi)
    raw = np.loadtxt(args.data, delimiter=",", skiprows=1, ndmin=2)
    mu = DiscreteMeasure(np.arange(raw.shape[0], dtype=float), raw[:, 1])
    norm = luxemburg_norm(raw[:, 0], mu, phi, tol=args.tol)
    print(_hum(norm))
    return 0


def _cmd_simulate(args) -> int:
    model = model_from_json(args.model)
    p = simulate(model, args.T, args.M, args.seed, x0=args.x0)
    write_path_csv(p, args.out)
    print(f"wrote {p.times.size} nodes ({int(np.sum(p.is_jump))} jumps) to {args.out}")
    return 0


def _cmd_variation(args) -> int:
    phi = phi_from_spec(args.phi)
    p = read_path_csv(args.infile)
    if args.route == "pathwise":
        tr = pathwise_variation(phi, p)
        times, v, cont, jump = tr.times, tr.v, tr.cont, tr.jump
    elif args.route == "discrete":
        tr = discrete_variation(phi, p.values)
        times, v, cont, jump = p.times, tr.v, tr.cont, tr.jump
    else:  # definition route: running phi(X_t) minus the partition integral
        part = refine_partition(p, args.level)
        idx = np.searchsorted(p.times, part.times)
        vals = p.values[idx]
        increments = phi.deriv(vals[:-1]) * np.diff(vals)
        running = np.concatenate(([0.0], np.cumsum(increments)))
        times = part.times
        v = np.asarray(phi(vals)) - running
        cont = np.full_like(v, np.nan)
        jump = np.full_like(v, np.nan)
    with open(args.out, "w") as fh:
        fh.write(f"# schema: {TRACE_SCHEMA}\n")
        fh.write(f"# route: {args.route}\n")
        fh.write("t,v,cont_term,jump_term\n")
        for row in zip(times, v, cont, jump):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
    print(f"wrote {len(times)} trace nodes to {args.out} (terminal V = {_hum(v[-1])})")
    return 0


def _report_payload(rep) -> dict:
    return {
        "schema_version": REPORT_SCHEMA,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "abs_err": rep.abs_err,
        "rel_err": rep.rel_err,
        "stderr": rep.stderr,
        "grid_allowance": rep.grid_allowance,
        "verdict": "pass" if rep.passed else "fail",
    }


def _emit_report(rep, as_json: bool, label: str) -> int:
    if as_json:
        print(dumps_json(_report_payload(rep)))
    else:
        print(f"{label}: lhs={_hum(rep.lhs)} rhs={_hum(rep.rhs)} abs_err={_hum(rep.abs_err)}")
        if rep.stderr is not None:
            print(f"  stderr={_hum(rep.stderr)} grid_allowance={_hum(rep.grid_allowance or 0.0)}")
        print(f"  verdict: {'pass' if rep.passed else 'fail'}")
    return 0 if rep.passed else CHECK_FAILURE


def _cmd_isometry(args) -> int:
    phi = phi_from_spec(args.phi)
    if args.mode == "enumerate":
        walk = FiniteMartingale.pm1_walk(args.depth, x0=args.x0)
        rep = enumerate_isometry(walk, phi)
        return _emit_report(rep, args.json, f"enumerated +-1 walk depth {args.depth}")
    model = model_from_json(args.model)
    if args.mode == "mc":
        rep = mc_isometry(model, phi, args.x0, args.T, args.N, args.seed, grid_m=args.grid_m, workers=args.workers)
        return _emit_report(rep, args.json, "MC isometry")
    a, b = (float(s) for s in args.interval.split(","))
    rep = mc_stopped_isometry(
        model, phi, a, b, args.x0, args.t_cap, args.N, args.seed, grid_m=args.grid_m, workers=args.workers
    )
    return _emit_report(rep, args.json, f"stopped isometry on ({a}, {b})")


def _cmd_doob(args) -> int:
    phi = phi_from_spec(args.phi)
    model = model_from_json(args.model)
    rep = doob_check(model, phi, args.T, args.N, args.seed, x0=args.x0, grid_m=args.grid_m, workers=args.workers)
    return _emit_report(rep, args.json, "Doob bound (lhs <= rhs + 3 SE)")


def _cmd_sum_indep(args) -> int:
    phi = phi_from_spec(args.phi)
    mx = model_from_json(args.model_x)
    my = model_from_json(args.model_y)
    rep = sum_of_independent(mx, my, phi, args.T, args.N, args.seed, grid_m=args.grid_m, workers=args.workers)
    payload = {"schema_version": REPORT_SCHEMA, **rep.as_dict()}
    if args.json:
        print(dumps_json(payload))
    else:
        print(f"E V(X+Y) = {_hum(rep.e_sum)}; E V(X) + E V(Y) = {_hum(rep.e_x + rep.e_y)}; K_phi = {_hum(rep.k_phi)}")
        print(f"  verdict: {'pass' if rep.passed else 'fail'}")
    return 0 if rep.passed else CHECK_FAILURE


def _cmd_semigroup(args) -> int:
    symbol = LevySymbol.from_model(model_from_json(args.symbol))
    p = transition_density(symbol, args.t, args.L, args.m)
    with open(args.out, "w") as fh:
        fh.write(f"# schema: {DENSITY_SCHEMA}\n")
        fh.write("x,p\n")
        for x, v in zip(p.x, p.values):
            fh.write(f"{float(x)!r},{float(v)!r}\n")
    print(f"wrote density ({p.n} nodes, mass {_hum(p.integral())}) to {args.out}")
    return 0


def _cmd_hardy_stein(args) -> int:
    phi = phi_from_spec(args.phi)
    if args.action == "parabolic":
        symbol = LevySymbol.from_model(model_from_json(args.symbol))
        f = profile_from_spec(args.f, args.L, args.m)
        rep = parabolic_identity(
            f,
            symbol,
            phi,
            T=args.T,
            K=args.K,
            dz=args.dz,
            z_cap=args.z_cap,
            quad_tol=args.quad_tol,
        )
        payload = {"schema_version": REPORT_SCHEMA, **rep.as_dict()}
        if args.json:
            print(dumps_json(payload))
        else:
            print(
                f"lhs={_hum(rep.lhs)} diffusion={_hum(rep.rhs_diffusion)} "
                f"jump={_hum(rep.rhs_jump)} tail={_hum(rep.rhs_tail)}"
            )
            print(f"  accounting_rel={_hum(rep.accounting_rel)} verdict: {'pass' if rep.passed else 'fail'}")
        return 0 if rep.passed else CHECK_FAILURE
    l, r = (float(s) for s in args.interval.split(","))
    rep = elliptic_identity_bm(args.a, args.b, phi, l, r, args.x, sigma2=args.sigma2, rtol=args.rtol)
    return _emit_report(rep, args.json, f"elliptic identity on ({l}, {r})")


def _cmd_suite(args) -> int:
    def progress(res):
        print(res.line(), file=sys.stderr, flush=True)

    t0 = time.time()
    manifest = run_suite(
        level=args.level, seed=args.seed, tolerance_scale=args.tolerance_scale, workers=args.workers, progress=progress
    )
    print(f"suite wall time: {time.time() - t0:.1f}s", file=sys.stderr)
    text = dumps_json(manifest)
    if args.json:
        print(text)
    else:
        for c in manifest["checks"]:
            print(f"[{c['verdict'].upper():4s}] {c['name']}")
        print(f"suite verdict: {manifest['verdict']}")
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
    return 0 if manifest["verdict"] == "pass" else CHECK_FAILURE


# ---------------------------------------------------------------------------
# parser assembly and config merging
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="bregvar", description=__doc__)
    top.add_argument("--version", action="version", version=f"bregvar {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, *, seed=True, workers=False, json_flag=True):
        p.add_argument("--config", type=str, default=None, help="TOML config; flags override file values")
        if seed:
            p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $BREGVAR_SEED or 7)")
        if workers:
            p.add_argument("--workers", type=int, default=1, help="worker count (results are invariant)")
        if json_flag:
            p.add_argument("--json", action="store_true", help="emit JSON instead of a human table")

    p = sub.add_parser("young", help="Young-function certificates")
    ysub = p.add_subparsers(dest="action", required=True)
    yi = ysub.add_parser("info")
    yi.add_argument("--family", choices=("power", "plog"), required=True)
    yi.add_argument("--p", type=float, required=True)
    yi.add_argument("--gamma", type=float, default=None)
    add_common(yi, seed=False)
    yi.set_defaults(handler=_cmd_young)

    p = sub.add_parser("orlicz", help="Luxemburg norm of CSV data")
    osub = p.add_subparsers(dest="action", required=True)
    on = osub.add_parser("norm")
    on.add_argument("--phi", required=True)
    on.add_argument("--data", required=True, help="CSV with header value,weight")
    on.add_argument("--tol", type=float, default=1e-12)
    add_common(on, seed=False, json_flag=False)
    on.set_defaults(handler=_cmd_orlicz)

    p = sub.add_parser("simulate", help="simulate a path to CSV")
    p.add_argument("--model", required=True, help="JSON model spec")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--M", type=int, default=1024)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--out", required=True)
    add_common(p, json_flag=False)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("variation", help="cumulative-divergence trace of a path CSV")
    p.add_argument("--phi", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--route", choices=("pathwise", "definition", "discrete"), required=True)
    p.add_argument("--level", type=int, default=0, help="partition level for the definition route")
    p.add_argument("--out", required=True)
    add_common(p, seed=False, json_flag=False)
    p.set_defaults(handler=_cmd_variation)

    p = sub.add_parser("isometry", help="enumerate or Monte-Carlo isometry checks")
    p.add_argument("--mode", choices=("enumerate", "mc", "stopped"), required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--model", default=None, help="JSON model spec (mc/stopped)")
    p.add_argument("--depth", type=int, default=3, help="walk depth (enumerate)")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--t-cap", type=float, default=8.0, help="horizon cap for stopped mode")
    p.add_argument("--interval", default="-1,1", help="a,b for stopped mode (use --interval=-1,1 for negatives)")
    p.add_argument("--N", type=int, default=100_000)
    p.add_argument("--grid-m", type=int, default=32)
    add_common(p, workers=True)
    p.set_defaults(handler=_cmd_isometry)

    p = sub.add_parser("doob", help="maximal-inequality check")
    p.add_argument("--phi", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--N", type=int, default=20_000)
    p.add_argument("--grid-m", type=int, default=64)
    add_common(p, workers=True)
    p.set_defaults(handler=_cmd_doob)

    p = sub.add_parser("sum-indep", help="divergence bounds for independent sums")
    p.add_argument("--phi", required=True)
    p.add_argument("--model-x", required=True)
    p.add_argument("--model-y", required=True)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--N", type=int, default=20_000)
    p.add_argument("--grid-m", type=int, default=64)
    add_common(p, workers=True)
    p.set_defaults(handler=_cmd_sum_indep)

    p = sub.add_parser("semigroup", help="transition density to CSV")
    ssub = p.add_subparsers(dest="action", required=True)
    sd = ssub.add_parser("density")
    sd.add_argument("--symbol", required=True, help="JSON model spec for the symbol")
    sd.add_argument("--t", type=float, required=True)
    sd.add_argument("--L", type=float, default=40.0)
    sd.add_argument("--m", type=int, default=12)
    sd.add_argument("--out", required=True)
    add_common(sd, seed=False, json_flag=False)
    sd.set_defaults(handler=_cmd_semigroup)

    p = sub.add_parser("hardy-stein", help="parabolic/elliptic identity checks")
    hsub = p.add_subparsers(dest="action", required=True)
    hp = hsub.add_parser("parabolic")
    hp.add_argument("--symbol", required=True)
    hp.add_argument("--phi", required=True)
    hp.add_argument("--f", default="gaussian:1.0")
    hp.add_argument("--T", type=float, default=8.0)
    hp.add_argument("--K", type=int, default=14)
    hp.add_argument("--L", type=float, default=40.0)
    hp.add_argument("--m", type=int, default=12)
    hp.add_argument("--dz", type=float, default=None)
    hp.add_argument("--z-cap", type=float, default=None)
    hp.add_argument("--quad-tol", type=float, default=1e-3)
    add_common(hp, seed=False)
    hp.set_defaults(handler=_cmd_hardy_stein)
    he = hsub.add_parser("elliptic")
    he.add_argument("--phi", required=True)
    he.add_argument("--interval", default="0,1")
    he.add_argument("--x", type=float, required=True)
    he.add_argument("--a", type=float, default=1.0, help="slope of u")
    he.add_argument("--b", type=float, default=0.0, help="intercept of u")
    he.add_argument("--sigma2", type=float, default=1.0)
    he.add_argument("--rtol", type=float, default=1e-10)
    add_common(he, seed=False)
    he.set_defaults(handler=_cmd_hardy_stein)

    p = sub.add_parser("suite", help="run the acceptance suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--tolerance-scale", type=float, default=1.0)
    p.add_argument("--json-out", default=None)
    add_common(p, workers=True)
    p.set_defaults(handler=_cmd_suite)

    return top


def _merge_config(argv, args, parser) -> int:
    """Apply TOML values for flags the user did not pass; flags win."""
    if getattr(args, "config", None) is None:
        return 0
    try:
        with open(args.config, "rb") as fh:
            table = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        return _usage(f"cannot read config {args.config!r}: {exc}")
    if args.command in table and isinstance(table[args.command], dict):
        sub_table = table.pop(args.command)
        table = {**table, **sub_table}
    valid = {k for k in vars(args) if k not in ("handler", "command", "action", "config")}
    explicit = {tok.lstrip("-").replace("-", "_").split("=")[0] for tok in argv if tok.startswith("--")}
    unknown = [k for k in table if k.replace("-", "_") not in valid]
    if unknown:
        return _usage(f"unknown config keys {sorted(unknown)}; valid keys: {sorted(valid)}")
    for key, value in table.items():
        dest = key.replace("-", "_")
        if dest in explicit:
            continue
        setattr(args, dest, value)
    return 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    rc = _merge_config(argv, args, parser)
    if rc:
        return rc
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        args.seed = int(os.environ.get("BREGVAR_SEED", "7"))
    try:
        return args.handler(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    except (ResolutionError, HartmanWintnerError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    except CheckFailure as exc:
        print(f"check failure: {exc}", file=sys.stderr)
        return CHECK_FAILURE
    except (BregvarError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
