"""cclab command line: construction, computation, and report emission.

Every command reads an optional TOML/JSON config file, applies flag
overrides (flags win), runs its pipeline, and writes CSV + JSON + SVG into
the output directory.  Floats in CSV are formatted at 17 significant
digits; re-running a command with the same config and seeds reproduces the
files byte for byte.

Exit codes: 0 success, 1 engine error, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import capacity as cap
from . import content as cont
from .geometry import CantorSpec, SpecError, build_generation, theta_sum
from .kernels import KERNEL_TAGS
from .measure import frostman_rescale, segment_measure, uniform_on_generation
from .potential import EngineError, potential_batch
from .regularity import bmo_estimate, lip_alpha_estimate
from .svgplot import heatmap, line_plot

_F = "{:.17g}"


def _fmt(v) -> str:
    if isinstance(v, float):
        return _F.format(v)
    return str(v)


def _write_csv(path: Path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: Path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise SpecError(f"config file {path} does not exist")
    text = p.read_text()
    if p.suffix.lower() == ".json":
        return json.loads(text)
    try:
        import tomllib  # py >= 3.11
    except ModuleNotFoundError:
        import tomli as tomllib
    try:
        return tomllib.loads(text)
    except Exception:
        # fall back: accept JSON content regardless of extension
        return json.loads(text)


def _merged(args, config: dict, name: str, default):
    flag = getattr(args, name.replace("-", "_"), None)
    if flag is not None:
        return flag
    if name in config:
        return config[name]
    return default


def _spec_from(args, config) -> CantorSpec:
    n = int(_merged(args, config, "n", 1))
    lam = _merged(args, config, "lambda", 0.25)
    if isinstance(lam, (list, tuple)):
        lam = tuple(float(v) for v in lam)
    else:
        lam = float(lam)
    tau0 = _merged(args, config, "tau0", None)
    return CantorSpec(n=n, lambdas=lam, tau0=None if tau0 is None else float(tau0))


def _outdir(args, config) -> Path:
    out = Path(_merged(args, config, "out", "cclab-out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _common(parser):
    parser.add_argument("--config", help="TOML or JSON config file")
    parser.add_argument("--n", type=int, help="spatial dimension (ambient is n+1)")
    parser.add_argument("--lambda", dest="lam", type=float, help="constant contraction factor")
    parser.add_argument("--kmax", type=int, help="deepest generation")
    parser.add_argument("--tol", type=float, help="engine tolerance")
    parser.add_argument("--seed", type=int, help="sampling seed")
    parser.add_argument("--threads", type=int, help="parallelism cap (engine is serial)")
    parser.add_argument("--out", help="output directory")


def _check_threads(args, config):
    threads = _merged(args, config, "threads", 1)
    if int(threads) < 1:
        raise SpecError(f"threads must be >= 1, got {threads}")


def cmd_capacity(args) -> int:
    config = _load_config(args.config)
    if args.lam is not None:
        config["lambda"] = args.lam
    _check_threads(args, config)
    spec = _spec_from(args, config)
    kmax = int(_merged(args, config, "kmax", 4))
    out = _outdir(args, config)
    rows = []
    docs = []
    for k in range(kmax + 1):
        tol = _merged(args, config, "tol", None)
        b = cap.bounds(spec, k, None if tol is None else float(tol))
        rows.append((b.k, b.lower, b.upper, b.theta_sum_inv, b.ratio_lower, b.ratio_upper))
        docs.append(b.to_json())
    _write_csv(out / "capacity.csv",
               ["k", "lower", "upper", "theta_sum_inv", "ratio_lower", "ratio_upper"], rows)
    _write_json(out / "capacity.json", {
        "spec": {"n": spec.n, "lambdas": spec.lambdas, "tau0": spec.tau0},
        "rows": docs,
    })
    ks = [r[0] for r in rows]
    line_plot(out / "capacity.svg",
              [("lower", ks, [r[1] for r in rows]),
               ("upper", ks, [r[2] for r in rows]),
               ("theta_sum_inv", ks, [r[3] for r in rows])],
              title="capacity bounds vs generation", xlabel="k", ylabel="bound", logy=True)
    return 0


def cmd_content(args) -> int:
    config = _load_config(args.config)
    if args.lam is not None:
        config["lambda"] = args.lam
    _check_threads(args, config)
    spec = _spec_from(args, config)
    kmax = int(_merged(args, config, "kmax", 4))
    seed = int(_merged(args, config, "seed", 0))
    exps = _merged(args, config, "exponents",
                   [spec.n, spec.n + 0.2, spec.n + 0.5, spec.n + 1.0])
    out = _outdir(args, config)
    rows = []
    for d in exps:
        br = cont.content_bracket(spec, kmax, float(d), rng_seed=seed)
        rows.append((br.d, br.lower, br.upper))
    _write_csv(out / "content.csv", ["d", "lower", "upper"], rows)
    _write_json(out / "content.json", {
        "spec": {"n": spec.n, "lambdas": spec.lambdas, "tau0": spec.tau0},
        "k": kmax,
        "rows": [{"d": r[0], "lower": r[1], "upper": r[2]} for r in rows],
    })
    ds = [r[0] for r in rows]
    line_plot(out / "content.svg",
              [("lower", ds, [r[1] for r in rows]), ("upper", ds, [r[2] for r in rows])],
              title="Hausdorff content bracket", xlabel="d", ylabel="content", logy=True)
    return 0


def cmd_bmo(args) -> int:
    config = _load_config(args.config)
    if args.lam is not None:
        config["lambda"] = args.lam
    _check_threads(args, config)
    spec = _spec_from(args, config)
    kmax = int(_merged(args, config, "kmax", 3))
    seed = int(_merged(args, config, "seed", 0))
    cubes = int(_merged(args, config, "cubes", 200))
    nodes = int(_merged(args, config, "nodes", 256))
    tol = float(_merged(args, config, "tol", 1e-3))
    out = _outdir(args, config)
    gen = build_generation(spec, kmax)
    mu = frostman_rescale(uniform_on_generation(gen), spec.n, rng_seed=seed)
    rep = bmo_estimate(mu, cubes=cubes, nodes_per_cube=nodes, rng_seed=seed, tol=tol)
    _write_csv(out / "bmo.csv", ["kind", "alpha", "value", "samples", "seed"],
               [(rep.kind, "", rep.value, rep.samples, seed)])
    _write_json(out / "bmo.json", {
        "spec": {"n": spec.n, "lambdas": spec.lambdas},
        "k": kmax,
        "report": rep.to_json(),
    })
    side = rep.worst_witness.get("side", 1.0)
    line_plot(out / "bmo.svg", [("worst oscillation", [side], [rep.value])],
              title="BMO estimate", xlabel="cube side", ylabel="oscillation", logx=True)
    return 0


def cmd_lip(args) -> int:
    config = _load_config(args.config)
    if args.lam is not None:
        config["lambda"] = args.lam
    _check_threads(args, config)
    spec = _spec_from(args, config)
    kmax = int(_merged(args, config, "kmax", 3))
    seed = int(_merged(args, config, "seed", 0))
    alpha = float(_merged(args, config, "alpha", 0.2))
    pairs = int(_merged(args, config, "pairs", 10_000))
    tol = float(_merged(args, config, "tol", 1e-3))
    out = _outdir(args, config)
    gen = build_generation(spec, kmax)
    mu = frostman_rescale(uniform_on_generation(gen), spec.n + alpha, rng_seed=seed)
    rep = lip_alpha_estimate(mu, alpha, pairs=pairs, rng_seed=seed, tol=tol)
    _write_csv(out / "lip.csv", ["kind", "alpha", "value", "samples", "seed"],
               [(rep.kind, alpha, rep.value, rep.samples, seed)])
    _write_json(out / "lip.json", {
        "spec": {"n": spec.n, "lambdas": spec.lambdas},
        "k": kmax,
        "report": rep.to_json(),
    })
    sep = rep.worst_witness.get("separation", 1.0)
    line_plot(out / "lip.svg", [("worst ratio", [sep], [rep.value])],
              title=f"Lip_{alpha} estimate", xlabel="separation", ylabel="ratio", logx=True)
    return 0


def segment_sweep(angle_rad: float, m_list, a=None, b=None) -> list[dict]:
    """Sup of the discretized segment potential for each atom count.

    The segment runs from the origin at the given angle unless explicit
    endpoints are supplied.  Evaluation points: the atoms themselves
    (self-skipping), each atom shifted half a step forward in time, and
    the far endpoint.
    """
    a = np.array([0.0, 0.0]) if a is None else np.asarray(a, dtype=float)
    b = (
        np.array([math.cos(angle_rad), math.sin(angle_rad)])
        if b is None
        else np.asarray(b, dtype=float)
    )
    out = []
    for m in m_list:
        mu = segment_measure(a, b, m)
        h = float(np.linalg.norm(b - a)) / m
        shifted = mu.points.copy()
        shifted[:, -1] += h / 2.0
        pts = np.concatenate([mu.points, shifted, b[None, :]], axis=0)
        vals, _, _ = potential_batch(mu, "P", pts, 1e-6)
        i = int(np.argmax(vals))
        out.append({
            "m": int(m),
            "sup": float(vals[i]),
            "argpoint": [float(v) for v in pts[i]],
        })
    return out


def cmd_segment_demo(args) -> int:
    config = _load_config(args.config)
    _check_threads(args, config)
    angle_deg = float(_merged(args, config, "angle-deg", 90.0))
    m_list = _merged(args, config, "m-list", [100, 1000, 10000])
    a = _merged(args, config, "a", None)
    b = _merged(args, config, "b", None)
    out = _outdir(args, config)
    results = segment_sweep(math.radians(angle_deg), [int(m) for m in m_list], a=a, b=b)
    rows = []
    prev = None
    for r in results:
        growth = r["sup"] - prev if prev is not None else 0.0
        rows.append((r["m"], r["sup"], growth))
        prev = r["sup"]
    _write_csv(out / "segment.csv", ["m", "sup", "growth_vs_prev"], rows)
    _write_json(out / "segment.json", {"angle_deg": angle_deg, "rows": results})
    line_plot(out / "segment.svg",
              [("sup", [r[0] for r in rows], [r[1] for r in rows])],
              title=f"segment sup-potential, angle {angle_deg} deg",
              xlabel="atoms m", ylabel="sup", logx=True)
    return 0


def cmd_potential_field(args) -> int:
    config = _load_config(args.config)
    if args.lam is not None:
        config["lambda"] = args.lam
    _check_threads(args, config)
    spec = _spec_from(args, config)
    kmax = int(_merged(args, config, "kmax", 2))
    grid = int(_merged(args, config, "grid", 64))
    kernel = str(_merged(args, config, "kernel", "P"))
    tol = float(_merged(args, config, "tol", 1e-3))
    if kernel not in KERNEL_TAGS:
        raise SpecError(f"unknown kernel {kernel!r}; choose from {KERNEL_TAGS}")
    out = _outdir(args, config)
    gen = build_generation(spec, kmax)
    mu = uniform_on_generation(gen)
    lo, hi = gen.bbox()
    pad = 0.5 * float(np.max(hi - lo))
    xs = np.linspace(lo[0] - pad, hi[0] + pad, grid)
    ts = np.linspace(lo[-1] - pad, hi[-1] + pad, grid)
    mid = (lo + hi) / 2.0
    pts = np.tile(mid, (grid * grid, 1))
    xx, tt = np.meshgrid(xs, ts, indexing="ij")
    pts[:, 0] = xx.ravel()
    pts[:, -1] = tt.ravel()
    vals, errs, _ = potential_batch(mu, kernel, pts, tol)
    header = [f"x{i + 1}" for i in range(spec.n)] + ["t", "value", "err"]
    rows = [tuple(p) + (v, e) for p, v, e in zip(pts.tolist(), vals, errs)]
    _write_csv(out / "field.csv", header, rows)
    _write_json(out / "field.json", {
        "spec": {"n": spec.n, "lambdas": spec.lambdas},
        "k": kmax,
        "kernel": kernel,
        "grid": grid,
    })
    heatmap(out / "field.svg", xs.tolist(), ts.tolist(), vals.tolist(),
            title=f"{kernel} potential, k={kmax}", xlabel="x1", ylabel="t")
    return 0


_COMMANDS = {
    "capacity": cmd_capacity,
    "content": cmd_content,
    "bmo": cmd_bmo,
    "lip": cmd_lip,
    "segment-demo": cmd_segment_demo,
    "potential-field": cmd_potential_field,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cclab",
        description="Numeric caloric-capacity toolkit for corner Cantor sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        _common(p)
        if name == "lip":
            p.add_argument("--alpha", type=float, help="Holder exponent in (0,1)")
            p.add_argument("--pairs", type=int, help="sampled point pairs")
        if name == "bmo":
            p.add_argument("--cubes", type=int, help="sampled cubes")
            p.add_argument("--nodes", type=int, help="Monte Carlo nodes per cube")
        if name == "segment-demo":
            p.add_argument("--angle-deg", dest="angle_deg", type=float,
                           help="segment angle against the x-axis, degrees")
        if name == "potential-field":
            p.add_argument("--grid", type=int, help="grid resolution per axis")
            p.add_argument("--kernel", choices=KERNEL_TAGS, help="kernel to evaluate")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SpecError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
