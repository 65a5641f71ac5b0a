"""Command-line front end: config-driven, seeded, file-output experiments.

One JSON config file drives a run; a few flags override scalar fields. Every
output file is accompanied by a manifest echoing the full effective config
and the library version, with no timestamps, so identical config + seed
yields byte-identical CSV/JSON.

Exit codes: 0 success, 2 config validation error, 3 numerical failure.
Machine-readable error JSON goes to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cdyn import EscapeParams, escape_radius, filled_julia_mask, green_field
from .dynstats import (AxialBox, calibrate_ks_null, clt_harness,
                       fit_log_slope, interval_partition, lyapunov_slice,
                       lyapunov_sphere_direction, mixing_correlation,
                       partition_entropy, sample_mu, topological_entropy)
from .errors import ConfigError, QBrolinError
from .grids import SliceGrid
from .laplacian import (fundamental_solution_check, measure_from_green,
                        refinement_order, sphere_kernel_check)
from .measures import (axial_test_function, brolin_pullback, pair,
                       pushforward, standard_panel, weak_distance)
from .policy import DEFAULT, NumericPolicy
from .poly import ComplexPoly, QPolynomial
from .quat import Quaternion, SlicePoint, UNIT_I, sphere_quadrature
from .slicecases import (OneSlicePolynomial, brolin3_gap, gn_pullback_measure,
                         mu_prime_estimate)

MODES = ("julia", "equilibrium", "green", "delta-star", "lyapunov", "entropy",
         "mixing", "clt", "one-slice", "general-gap", "verify")

_TOP_KEYS = {"mode", "polynomial", "policy", "grid", "quad_level", "seed",
             "out", "params"}
_GRID_KEYS = {"center", "half_width", "h"}

_MODE_PARAMS = {
    "julia": {"max_iter"},
    "equilibrium": {"target", "depth"},
    "green": {"depth"},
    "delta-star": {"center", "h_list"},
    "lyapunov": {"n_samples", "sphere_n", "sphere_alpha", "sphere_beta"},
    "entropy": {"kind", "n_max", "eps_list", "cells", "samples",
                "box", "grid_density"},
    "mixing": {"n_max", "samples"},
    "clt": {"n_terms", "n_samples", "null_reps"},
    "one-slice": {"depth", "target", "bin_width"},
    "general-gap": {"a", "b", "n_list", "probe_count"},
    "verify": set(),
}


def _fmt(x) -> str:
    return "%.17g" % float(x)


def write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, (int, float)) else str(v)
                              for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_json(path: Path, obj):
    path.write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def write_pgm(path: Path, image: np.ndarray):
    """8-bit binary PGM; image values in [0, 255], row 0 at the top."""
    img = np.asarray(image, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def load_config(path: str, overrides) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = dict(raw)
    for key, value in overrides.items():
        if value is not None:
            cfg[key] = value
    mode = cfg.get("mode")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    cfg.setdefault("seed", 0)
    cfg.setdefault("quad_level", 3)
    cfg.setdefault("params", {})
    cfg.setdefault("out", ".")
    if not isinstance(cfg["seed"], int):
        raise ConfigError("seed must be an integer")
    if not isinstance(cfg["params"], dict):
        raise ConfigError("params must be an object")
    bad = set(cfg["params"]) - _MODE_PARAMS[mode]
    if bad:
        raise ConfigError(f"unknown params for mode {mode}: {sorted(bad)}")
    if "grid" in cfg:
        g = cfg["grid"]
        if not isinstance(g, dict) or set(g) - _GRID_KEYS:
            raise ConfigError(f"grid keys must be within {sorted(_GRID_KEYS)}")
    if "policy" in cfg:
        pol = cfg["policy"]
        known = {f.name for f in dataclasses.fields(NumericPolicy)}
        if not isinstance(pol, dict) or set(pol) - known:
            raise ConfigError(f"policy keys must be within {sorted(known)}")
    if mode != "verify" and "polynomial" not in cfg:
        raise ConfigError(f"mode {mode} requires a polynomial")
    return cfg


def _policy(cfg) -> NumericPolicy:
    if "policy" not in cfg:
        return DEFAULT
    return dataclasses.replace(DEFAULT, **cfg["policy"])


def _qpoly(cfg) -> QPolynomial:
    try:
        return QPolynomial.from_json(cfg["polynomial"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad polynomial spec: {exc}")


def _cpoly(cfg, policy) -> ComplexPoly:
    return _qpoly(cfg).restrict_to_slice(UNIT_I, policy)


def _grid(cfg, default_half=2.0, default_h=1.0 / 128.0) -> SliceGrid:
    g = cfg.get("grid", {})
    center = complex(*g.get("center", [0.0, 0.0]))
    return SliceGrid.square(center, g.get("half_width", default_half),
                            g.get("h", default_h))


def _manifest(out: Path, stem: str, cfg, extra=None):
    # the output directory is run-local plumbing; dropping it keeps two
    # runs of one config byte-identical wherever they land
    cfg = {k: v for k, v in cfg.items() if k != "out"}
    man = {"config": cfg, "version": __version__}
    if extra:
        man.update(extra)
    write_json(out / f"{stem}.manifest.json", man)


def run_julia(cfg, out: Path, policy):
    pc = _cpoly(cfg, policy)
    grid = _grid(cfg)
    max_iter = int(cfg["params"].get("max_iter", 60))
    esc = EscapeParams(escape_radius(pc), max_iter)
    inside = filled_julia_mask(pc, grid, esc)
    write_pgm(out / "julia.pgm", np.where(inside[::-1], 255, 0))
    _manifest(out, "julia", cfg,
              {"inside_fraction": float(np.mean(inside)),
               "escape_radius": esc.radius})
    print(f"julia: {inside.sum()} / {inside.size} nodes inside, "
          f"R = {esc.radius:.3g}")
    return 0


def run_equilibrium(cfg, out: Path, policy):
    p = _qpoly(cfg)
    depth = int(cfg["params"].get("depth", 10))
    target = cfg["params"].get("target", 0.0)
    if isinstance(target, (list, tuple)):
        target = target[0]
    m = brolin_pullback(p, float(target), depth, policy=policy)
    write_json(out / "measure.json", m.to_json())
    write_csv(out / "measure.csv", ["kind", "alpha", "rho", "weight"],
              [["point" if a.is_real_point else "sphere", a.alpha, a.rho,
                a.weight] for a in m.atoms])
    _manifest(out, "measure", cfg, {"atoms": len(m)})
    print(f"equilibrium: {len(m)} atoms, mass {m.total_mass():.6f}")
    return 0


def run_green(cfg, out: Path, policy):
    pc = _cpoly(cfg, policy)
    grid = _grid(cfg)
    depth = int(cfg["params"].get("depth", 12))
    g = green_field(pc, grid, depth)
    vmax = float(np.max(g.values)) or 1.0
    write_pgm(out / "green.pgm",
              np.clip(g.values[::-1] / vmax * 255.0, 0, 255))
    write_csv(out / "green_stats.csv", ["quantity", "value"],
              [["max", vmax], ["cell_sum", g.cell_sum()],
               ["zero_fraction", float(np.mean(g.values == 0.0))]])
    _manifest(out, "green", cfg, {"grid": grid.to_json(), "depth": depth})
    print(f"green: depth {depth}, max {vmax:.4f}")
    return 0


def run_delta_star(cfg, out: Path, policy):
    params = cfg["params"]
    center = params.get("center", [0.3, 0.4])
    a = Quaternion(center[0], center[1], 0.0, 0.0)
    h_list = params.get("h_list", [1.0 / 64, 1.0 / 128, 1.0 / 256])
    bump = axial_test_function(
        "bump", lambda al, be: np.exp(-((al - 0.1) ** 2 + be ** 2)))
    rows = []
    by_h_real, by_h_pair = {}, {}
    for h in h_list:
        grid = SliceGrid.square(0j, 2.0, h)
        got_r = fundamental_solution_check(center[0], bump, grid)
        want_r = 0.5 * bump(Quaternion.real(center[0]))
        got_p, want_p = sphere_kernel_check(a, bump, grid)
        by_h_real[h], by_h_pair[h] = got_r, got_p
        rows.append([h, got_r, want_r, got_p, want_p])
    write_csv(out / "delta_star.csv",
              ["h", "real_value", "real_expected", "pair_value",
               "pair_expected"], rows)
    report = {
        "real_order": refinement_order(by_h_real, rows[-1][2]),
        "pair_order": refinement_order(by_h_pair, rows[-1][4]),
        "finest_real_rel_err": abs(rows[-1][1] / rows[-1][2] - 1.0),
        "finest_pair_rel_err": abs(rows[-1][3] / rows[-1][4] - 1.0),
    }
    write_json(out / "delta_star.json", report)
    _manifest(out, "delta_star", cfg)
    print(f"delta-star: rel errs {report['finest_real_rel_err']:.2e} / "
          f"{report['finest_pair_rel_err']:.2e}")
    return 0


def run_lyapunov(cfg, out: Path, policy):
    p = _qpoly(cfg)
    pc = p.restrict_to_slice(UNIT_I, policy)
    params = cfg["params"]
    rep = lyapunov_slice(pc, int(params.get("n_samples", 20000)),
                         cfg["seed"], policy)
    result = rep.to_json()
    beta = float(params.get("sphere_beta", 0.0))
    if beta > 0:
        q0 = SlicePoint(float(params.get("sphere_alpha", 0.0)), beta, UNIT_I)
        sphere = lyapunov_sphere_direction(p, q0,
                                           int(params.get("sphere_n", 20)))
        result["sphere_direction"] = sphere
    write_json(out / "lyapunov.json", result)
    _manifest(out, "lyapunov", cfg)
    print(f"lyapunov: {rep.value:.5f} +- {rep.stderr:.5f}")
    return 0


def run_entropy(cfg, out: Path, policy):
    p = _qpoly(cfg)
    params = cfg["params"]
    kind = params.get("kind", "topological")
    if kind == "topological":
        box = params.get("box", [-2.2, 2.2, 0.0, 1.5])
        rep = topological_entropy(
            p, AxialBox(*box), int(params.get("n_max", 8)),
            params.get("eps_list", [0.2, 0.3]),
            int(params.get("grid_density", 20000)), cfg["seed"], policy)
        write_csv(out / "entropy_counts.csv", ["n", "count"],
                  rep.params["counts"])
    elif kind == "partition":
        box = params.get("box", [-2.0, 2.0])
        part = interval_partition(box[0], box[1],
                                  int(params.get("cells", 16)))
        rep = partition_entropy(p, part, int(params.get("n_max", 8)),
                                int(params.get("samples", 100000)),
                                cfg["seed"], policy)
        write_csv(out / "entropy_counts.csv", ["n", "H_n"],
                  rep.params["H_n"])
    else:
        raise ConfigError(f"entropy kind must be topological or partition, got {kind!r}")
    write_json(out / "entropy.json", rep.to_json())
    _manifest(out, "entropy", cfg)
    print(f"entropy ({kind}): {rep.value:.4f} +- {rep.stderr:.4f}")
    return 0


def run_mixing(cfg, out: Path, policy):
    pc = _cpoly(cfg, policy)
    params = cfg["params"]
    panel = {f.name: f for f in standard_panel()}
    # observe |q|^2 at the base point, Re at the forward point: the swapped
    # pair vanishes identically for even maps by parity
    corr = mixing_correlation(pc, panel["abs2"], panel["re"],
                              int(params.get("n_max", 10)),
                              int(params.get("samples", 100000)),
                              cfg["seed"], policy)
    slope = fit_log_slope(corr, n_min=2)
    write_csv(out / "mixing.csv", ["n", "correlation"], corr)
    write_json(out / "mixing.json",
               {"name": "mixing_slope", "value": slope,
                "pair": ["abs2", "re"], "seed": cfg["seed"]})
    _manifest(out, "mixing", cfg)
    print(f"mixing: slope {slope:.4f} (log d = {math.log(pc.degree):.4f})")
    return 0


def run_clt(cfg, out: Path, policy):
    pc = _cpoly(cfg, policy)
    params = cfg["params"]
    n_samples = int(params.get("n_samples", 10000))
    panel = {f.name: f for f in standard_panel()}
    res = clt_harness(pc, panel["re"], int(params.get("n_terms", 200)),
                      n_samples, cfg["seed"], policy)
    bar = calibrate_ks_null(n_samples, int(params.get("null_reps", 200)),
                            cfg["seed"] + 1)
    report = {"ks": res.ks_statistic, "sigma": res.sigma_hat,
              "degenerate": res.degenerate, "null_95": bar,
              "pass": bool((not res.degenerate) and res.ks_statistic <= bar)}
    write_json(out / "clt.json", report)
    _manifest(out, "clt", cfg)
    print(f"clt: ks {res.ks_statistic:.4f} vs null bar {bar:.4f}")
    return 0


def run_one_slice(cfg, out: Path, policy):
    pc_base = _cpoly_one_slice(cfg)
    P = OneSlicePolynomial(pc_base, UNIT_I)
    params = cfg["params"]
    depth = int(params.get("depth", 6))
    target = float(params.get("target", 0.0))
    quad = sphere_quadrature(cfg["quad_level"])
    mp = mu_prime_estimate(P, quad, depth, target,
                           float(params.get("bin_width", 1.0 / 128.0)),
                           policy)
    mg = gn_pullback_measure(P, target, depth, policy)
    dist = weak_distance(mg, mp)
    write_json(out / "mu_prime.json", mp.to_json())
    write_json(out / "gn_pullback.json", mg.to_json())
    write_json(out / "one_slice.json",
               {"weak_distance": dist, "depth": depth, "target": target,
                "real_mass": sum(a.weight for a in mp.atoms
                                 if a.is_real_point)})
    _manifest(out, "one_slice", cfg)
    print(f"one-slice: distance {dist:.4f} at depth {depth}")
    return 0


def _cpoly_one_slice(cfg) -> ComplexPoly:
    """The one-slice modes read the polynomial as complex coefficients over
    the reference slice (x + I y stored as [x, y, 0, 0])."""
    q = _qpoly(cfg)
    coeffs = []
    for c in q.coeffs:
        if abs(c.y) > 1e-12 or abs(c.z) > 1e-12:
            raise ConfigError(
                "one-slice mode expects coefficients in the reference slice")
        coeffs.append(complex(c.w, c.x))
    return ComplexPoly(coeffs)


def run_general_gap(cfg, out: Path, policy):
    p = _qpoly(cfg)
    params = cfg["params"]
    a = float(params.get("a", 0.0))
    b = float(params.get("b", 1.0))
    n_list = params.get("n_list", list(range(1, 9)))
    rows = [[n, brolin3_gap(p, a, b, int(n), policy=policy)] for n in n_list]
    write_csv(out / "gap.csv", ["n", "gap"], rows)
    write_json(out / "gap.json",
               {"a": a, "b": b, "final_gap": rows[-1][1],
                "n_max": rows[-1][0]})
    _manifest(out, "gap", cfg)
    print(f"general-gap: gap({rows[-1][0]}) = {rows[-1][1]:.3e}")
    return 0


def run_verify(cfg, out: Path, policy):
    """Fast invariant suite; exit 0 iff all checks pass."""
    from .dynstats import sample_mu as _sample
    seed = cfg["seed"]
    checks = []

    def check(name, ok, detail=""):
        checks.append((name, bool(ok), detail))

    rng = np.random.default_rng(seed)

    def rand_qpoly(deg):
        return QPolynomial([Quaternion(*rng.normal(size=4))
                            for _ in range(deg + 1)])

    worst = 0.0
    for _ in range(100):
        f, g = rand_qpoly(3), rand_qpoly(2)
        lhs, rhs = f.star_mul(g).conj(), g.conj().star_mul(f.conj())
        worst = max(worst, max(abs(a - b) for a, b
                               in zip(lhs.coeffs, rhs.coeffs)))
    check("conj antihomomorphism", worst < 1e-10, f"worst {worst:.2e}")

    worst = max(rand_qpoly(3).symmetrize().max_imag_coeff()
                for _ in range(100))
    check("symmetrization realness", worst < 1e-10, f"worst {worst:.2e}")

    worst = 0.0
    for _ in range(100):
        f, g = rand_qpoly(3), rand_qpoly(2)
        q = Quaternion(*rng.normal(size=4))
        fq = f.eval(q)
        want = (fq * g.eval(f.star_conjugation_point(q))
                if abs(fq) > 1e-12 else Quaternion.real(0.0))
        got = f.star_mul(g).eval(q)
        worst = max(worst, abs(got - want) / (1.0 + abs(got)))
    check("star evaluation identity", worst < 1e-9, f"worst {worst:.2e}")

    quad = sphere_quadrature(3)
    ok = abs(quad.integrate(lambda u: 1.0) - 4.0 * math.pi) < 1e-12
    check("quadrature total weight", ok)

    p2 = QPolynomial.from_real([-2.0, 0.0, 1.0])
    nu = brolin_pullback(p2, 0.0, 8, policy=policy)
    check("pullback mass", abs(nu.total_mass() - 1.0) < 1e-12)
    push = pushforward(p2, nu, policy)
    dist = weak_distance(push, nu)
    check("pushforward invariance", dist < 0.05, f"distance {dist:.4f}")

    pc = p2.restrict_to_slice(UNIT_I, policy)
    s1 = _sample(pc, 500, seed, policy=policy)
    s2 = _sample(pc, 500, seed, policy=policy)
    check("sampler determinism", np.array_equal(s1, s2))
    check("sampler stays on Julia set",
          float(np.max(np.abs(s1.imag))) < 1e-9
          and float(np.max(np.abs(s1.real))) <= 2.0 + 1e-9)

    bump = axial_test_function(
        "bump", lambda al, be: np.exp(-((al - 0.1) ** 2 + be ** 2)))
    grid = SliceGrid.square(0j, 2.0, 1.0 / 64)
    got = fundamental_solution_check(0.3, bump, grid)
    want = 0.5 * bump(Quaternion.real(0.3))
    rel = abs(got / want - 1.0)
    check("fundamental solution (coarse)", rel < 0.05, f"rel err {rel:.2e}")

    rows = [[name, int(ok), detail] for name, ok, detail in checks]
    write_csv(out / "verify.csv", ["check", "pass", "detail"], rows)
    write_json(out / "verify.json",
               {"checks": [{"name": n, "pass": o, "detail": d}
                           for n, o, d in checks],
                "all_pass": all(o for _, o, _ in checks), "seed": seed})
    _manifest(out, "verify", cfg)
    width = max(len(n) for n, _, _ in checks)
    for name, ok, detail in checks:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    return 0 if all(o for _, o, _ in checks) else 1


_RUNNERS = {
    "julia": run_julia,
    "equilibrium": run_equilibrium,
    "green": run_green,
    "delta-star": run_delta_star,
    "lyapunov": run_lyapunov,
    "entropy": run_entropy,
    "mixing": run_mixing,
    "clt": run_clt,
    "one-slice": run_one_slice,
    "general-gap": run_general_gap,
    "verify": run_verify,
}


def run(cfg: dict) -> int:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    policy = _policy(cfg)
    return _RUNNERS[cfg["mode"]](cfg, out, policy)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="qbrolin",
        description="equilibrium-measure experiments for quaternionic polynomials")
    ap.add_argument("config", help="JSON config file")
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config,
                          {"mode": args.mode, "seed": args.seed,
                           "out": args.out})
    except ConfigError as exc:
        json.dump({"error": "ConfigError", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    try:
        return run(cfg)
    except ConfigError as exc:
        json.dump({"error": "ConfigError", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except QBrolinError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)},
                  sys.stderr)
        sys.stderr.write("\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
