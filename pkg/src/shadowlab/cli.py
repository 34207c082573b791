"""Command-line entry point: build, shadow, check, sweep.

Exit codes: 0 when everything requested passed, 1 when a check failed,
2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .bounds import (
    BoundReport,
    c_n_bracket,
    check_delta_subdeterminant_relation,
    check_shadow_sandwich,
    chu_bracket,
    expected_abs_coordinate,
    km_bound,
    lattice_bound,
    rational_bound,
)
from .dualfan import (
    ThinCone,
    arc_count,
    augmented_permutahedron_delta,
    augmented_permutahedron_delta_sum_form,
    delta_of_polytope,
    validate_arrangement_distance,
    validate_slab_probability,
)
from .geometry import InvalidDimension, frame_vectors, rng_stream, Frame2
from .io import InputError, csv_text, dumps_json, fmt_float, load_polytope, save_polytope, write_text
from .polytope import (
    NotSimple,
    SizeCapExceeded,
    Zonotope,
    augmented_permutahedron,
    augmented_permutahedron_facet_matrix,
    birkhoff,
    edge_stats,
    hypercube,
    normal_cones,
    permutahedron,
    polytope_gdiam,
    zn_basis,
    zn_parallel,
)
from .shadow import as_vpolytope, estimate_shadow_size, shadow, shadow_counts, zonotope_shadow_size_exact
from .stats import collect_edge_sample, independence_test

FAMILIES = ("hypercube", "birkhoff", "permutahedron", "augmented_permutahedron", "zn_parallel", "zn_basis")
CHECKS = ("theorem_1_1", "km", "lattice", "rational", "delta", "delta_Delta", "lemma_2_1", "lemma_2_2",
          "lemma_3_1", "lemma_3_2", "cor_3_4", "primal_dual")
PRIMAL_DUAL_MAX_FRAMES = 1000
DEFAULT_SEED = 0


class CheckError(Exception):
    """A check whose preconditions do not hold for this input (exit code 2)."""


# ------------------------------------------------------------------ inputs

def resolve_seed(arg_seed):
    if arg_seed is not None:
        return arg_seed
    env = os.environ.get("SHADOWLAB_SEED")
    if env is None or env.strip() == "":
        return DEFAULT_SEED
    try:
        return int(env, 0)
    except ValueError as exc:
        raise InputError(f"SHADOWLAB_SEED={env!r} is not an integer") from exc


def make_family(family: str, n=None, k=None, eps=None, seed: int = DEFAULT_SEED):
    def need(name, val):
        if val is None:
            raise InputError(f"family {family} needs --{name}")
        return val

    try:
        if family == "hypercube":
            return hypercube(need("n", n))
        if family == "birkhoff":
            return birkhoff(need("n", n))
        if family == "permutahedron":
            return permutahedron(need("n", n))
        if family == "augmented_permutahedron":
            return augmented_permutahedron(need("n", n))
        if family == "zn_parallel":
            return zn_parallel(need("k", k), 0.05 if eps is None else eps, rng_stream(seed, 0),
                               n=3 if n is None else n)
        if family == "zn_basis":
            return zn_basis(need("n", n), 0.0 if eps is None else eps, rng_stream(seed, 0))
    except (ValueError, InvalidDimension) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def load_input(args, seed):
    if getattr(args, "input", None):
        return load_polytope(args.input)
    if getattr(args, "family", None):
        return make_family(args.family, args.n, args.k, args.eps, seed)
    raise InputError("give --input PATH or --family NAME")


def known_facet_matrix(p, args):
    if getattr(args, "facets", None):
        import json
        try:
            with open(args.facets, encoding="utf-8") as fh:
                return np.array(json.load(fh), dtype=np.int64)
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read facet matrix {args.facets}: {exc}") from exc
    fam = getattr(args, "family", None)
    if fam == "hypercube":
        return np.vstack([np.eye(args.n, dtype=np.int64), -np.eye(args.n, dtype=np.int64)])
    if fam == "augmented_permutahedron":
        return augmented_permutahedron_facet_matrix(args.n)
    raise CheckError("delta_Delta needs an integer facet matrix: use --facets, or the hypercube "
                     "or augmented_permutahedron family")


def first_cone_rays(p):
    try:
        cones = normal_cones(as_vpolytope(p))
    except NotSimple as exc:
        raise CheckError(f"cone checks need a simple polytope: {exc}") from exc
    return cones[0].rays


# ------------------------------------------------------------------ checks

def _bound_row(r: BoundReport) -> dict:
    d = r.as_dict()
    d["passed"] = r.satisfied
    return d


def run_check(name, p, args, seed, trials, threads) -> dict:
    if name == "theorem_1_1":
        return _bound_row(check_shadow_sandwich(p, trials, seed, threads))
    if name == "km":
        try:
            return _bound_row(km_bound(p, trials, seed, threads))
        except ValueError as exc:
            raise CheckError(f"km: {exc}") from exc
    if name == "lattice":
        V = as_vpolytope(p).vertices
        k = args.lattice_k if args.lattice_k is not None else int(math.ceil(float(V.max()) - 1e-9))
        try:
            return _bound_row(lattice_bound(p, max(k, 1), trials, seed, threads))
        except ValueError as exc:
            raise CheckError(f"lattice: {exc}") from exc
    if name == "rational":
        V = as_vpolytope(p).vertices
        fr = [Fraction(float(x)).limit_denominator(args.max_denominator) for x in V.ravel()]
        alpha = args.alpha if args.alpha is not None else max(1, max(abs(f.numerator) for f in fr))
        beta = args.beta if args.beta is not None else max(f.denominator for f in fr)
        try:
            return _bound_row(rational_bound(p, alpha, beta, trials, seed, threads))
        except ValueError as exc:
            raise CheckError(f"rational: {exc}") from exc
    if name == "delta":
        try:
            rep = delta_of_polytope(as_vpolytope(p))
        except NotSimple as exc:
            raise CheckError(f"delta: {exc}") from exc
        row = {"name": "delta", "delta": rep.delta, "witness": list(rep.witness),
               "passed": bool(0 < rep.delta <= 1 + 1e-12)}
        if getattr(args, "family", None) == "augmented_permutahedron":
            exact = augmented_permutahedron_delta(args.n)
            row["closed_form"] = exact
            row["sum_form"] = augmented_permutahedron_delta_sum_form(args.n)
            row["matches_sum_form"] = bool(abs(rep.delta - row["sum_form"]) <= 1e-9)
            row["passed"] = bool(abs(rep.delta - exact) <= 1e-9)
        return row
    if name == "delta_Delta":
        A = known_facet_matrix(p, args)
        try:
            return _bound_row(check_delta_subdeterminant_relation(as_vpolytope(p), A))
        except (NotSimple, SizeCapExceeded) as exc:
            raise CheckError(f"delta_Delta: {exc}") from exc
    if name in ("lemma_2_1", "lemma_2_2"):
        P = as_vpolytope(p)
        if not P.edges:
            raise CheckError(f"{name}: polytope has no edges")
        a, b = P.edges[0]
        s = collect_edge_sample(P, (a, b), trials, seed)
        if name == "lemma_2_1":
            v = independence_test(s, alpha=args.alpha_level, seed=seed)
            row = {"name": "lemma_2_1", "edge": [a, b], **v.as_dict()}
            row["passed"] = v.verdict == "pass"
            return row
        n = P.dim
        ell = float(np.linalg.norm(P.vertices[a] - P.vertices[b]))
        ratio = s.l_values / ell
        se = float(ratio.std(ddof=1) / math.sqrt(len(ratio))) if len(ratio) > 1 else 0.0
        lo, hi = c_n_bracket(n)
        row = _bound_row(BoundReport("lemma_2_2", lo, float(ratio.mean()), se, hi,
                                     {"edge": [a, b], "expected_abs_coordinate": expected_abs_coordinate(n)}))
        if n >= 3:
            clo, chi = chu_bracket(n, shift=1)
            row["chu_bracket_shifted"] = [clo, chi]
        return row
    if name in ("lemma_3_1", "lemma_3_2", "cor_3_4"):
        rays = first_cone_rays(p)
        if len(rays) < 2:
            raise CheckError(f"{name}: normal cone has fewer than two rays")
        rng = rng_stream(seed, 1)
        try:
            if name == "lemma_3_1":
                c = validate_slab_probability(rays, 0, args.slab_eps, trials, rng)
                return {"name": name, "empirical": c.empirical, "bound": c.bound, "std_error": c.std_error,
                        "height": c.height, "passed": bool(c.empirical <= c.bound + 3 * c.std_error)}
            surface = "ball" if name == "lemma_3_2" else "sphere"
            c = validate_arrangement_distance(rays, trials, rng, surface=surface)
        except ThinCone as exc:
            raise CheckError(f"{name}: {exc}") from exc
        return {"name": name, "surface": surface, "empirical": c.empirical, "bound": c.bound,
                "std_error": c.std_error, "height": c.height,
                "passed": bool(c.empirical >= c.bound - 3 * c.std_error)}
    if name == "primal_dual":
        P = as_vpolytope(p)
        frames = min(trials, PRIMAL_DUAL_MAX_FRAMES)
        mismatches = 0
        for t in range(frames):
            f = Frame2(*frame_vectors(rng_stream(seed, t), P.dim))
            if arc_count(P, f)[0] != shadow(P, f).num_vertices:
                mismatches += 1
        return {"name": name, "frames": frames, "mismatches": mismatches, "passed": mismatches == 0}
    raise InputError(f"unknown check {name!r}")


# ---------------------------------------------------------------- commands

def cmd_build(args) -> int:
    seed = resolve_seed(args.seed)
    p = make_family(args.family, args.n, args.k, args.eps, seed)
    if args.out:
        save_polytope(p, args.out)
    else:
        from .io import polytope_to_dict
        sys.stdout.write(dumps_json(polytope_to_dict(p)))
    return 0


def cmd_shadow(args) -> int:
    seed = resolve_seed(args.seed)
    p = load_input(args, seed)
    if args.exact:
        if not isinstance(p, Zonotope):
            raise InputError("--exact needs a zonotope input")
        sys.stdout.write(f"{zonotope_shadow_size_exact(p)}\n")
        return 0
    if args.csv:
        counts, degen = shadow_counts(p, args.trials, seed, args.threads)
        rows = [(i, int(c), int(d)) for i, (c, d) in enumerate(zip(counts, degen))]
        text = csv_text(["trial_index", "vertex_count", "degenerate"], rows)
    else:
        est = estimate_shadow_size(p, args.trials, seed, exact=False, threads=args.threads)
        text = dumps_json({"version": __version__, "seed": seed, "label": p.label, **est.as_dict()})
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def parse_checks(spec: str):
    names = [c.strip() for c in spec.split(",") if c.strip()]
    bad = [c for c in names if c not in CHECKS]
    if bad or not names:
        raise InputError(f"unknown check(s) {', '.join(bad) or '(none)'}; valid: {', '.join(CHECKS)}")
    return names


def cmd_check(args) -> int:
    names = parse_checks(args.checks)
    seed = resolve_seed(args.seed)
    p = load_input(args, seed)
    config = {"input": args.input, "family": args.family, "n": args.n, "k": args.k, "eps": args.eps,
              "trials": args.trials, "checks": names}
    results = []
    status = 0
    t0 = time.perf_counter()
    for name in names:
        try:
            row = run_check(name, p, args, seed, args.trials, args.threads)
        except CheckError as exc:
            row = {"name": name, "passed": False, "error": str(exc)}
            status = 2
        results.append(row)
        if not row["passed"] and status == 0:
            status = 1
    report = {"version": __version__, "seed": seed, "config": config, "label": p.label, "results": results}
    if args.timing:
        report["timing_seconds"] = time.perf_counter() - t0
    text = dumps_json(report)
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    for row in results:
        sys.stderr.write(f"{'PASS' if row['passed'] else 'FAIL'} {row['name']}"
                         + (f": {row['error']}" if "error" in row else "") + "\n")
    return status


def parse_range(spec: str):
    try:
        if ":" in spec:
            lo, hi = spec.split(":")
            vals = list(range(int(lo), int(hi) + 1))
        else:
            vals = [int(x) for x in spec.split(",")]
    except ValueError as exc:
        raise InputError(f"bad range {spec!r}; use LO:HI or a comma list") from exc
    if not vals:
        raise InputError(f"empty range {spec!r}")
    return vals


def cmd_sweep(args) -> int:
    seed = resolve_seed(args.seed)
    vals = parse_range(args.range)
    key = "k" if args.family == "zn_parallel" else "n"
    with_delta = args.family in ("hypercube", "augmented_permutahedron") and not args.no_delta
    header = [key, "measured_mean", "measured_se", "lower_bound", "upper_bound", "slack_lower",
              "slack_upper", "gdiam", "m", "M"]
    if with_delta:
        header += ["delta", "measured_delta_over_n1.5"]
    rows = []
    for v in vals:
        kw = {"n": args.n, "k": v} if key == "k" else {"n": v, "k": None}
        p = make_family(args.family, kw["n"], kw["k"], args.eps, seed)
        r = check_shadow_sandwich(p, args.trials, seed, args.threads)
        lo, hi = r.slack_ratios
        row = [v, r.estimate, r.std_error, r.lower, r.upper, lo, hi,
               r.details["gdiam"], r.details["m"], r.details["M"]]
        if with_delta:
            d = delta_of_polytope(as_vpolytope(p)).delta
            row += [d, r.estimate * d / v ** 1.5]
        rows.append(row)
    text = csv_text(header, rows)
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


# ------------------------------------------------------------------ parser

def _add_family_params(sp, family_flag: bool):
    if family_flag:
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--input", help="polytope JSON file")
        g.add_argument("--family", choices=FAMILIES)
    sp.add_argument("--n", type=int, help="dimension / order")
    sp.add_argument("--k", type=int, help="number of near-parallel generators (zn_parallel)")
    sp.add_argument("--eps", type=float, help="perturbation size (zn_parallel, zn_basis)")
    sp.add_argument("--seed", type=int, help="master seed (falls back to $SHADOWLAB_SEED, then 0)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shadowlab", description="Random 2-D shadows of polytopes.")
    ap.add_argument("--version", action="version", version=f"shadowlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    threads = os.cpu_count() or 1

    b = sub.add_parser("build", help="write a family member as polytope JSON")
    b.add_argument("family", choices=FAMILIES)
    _add_family_params(b, False)
    b.add_argument("-o", "--out", help="output path (default stdout)")
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("shadow", help="estimate the expected shadow size")
    _add_family_params(s, True)
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--threads", type=int, default=threads)
    s.add_argument("--csv", action="store_true", help="one row per trial instead of a JSON summary")
    s.add_argument("--exact", action="store_true", help="exact zonotope shadow size, no sampling")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_shadow)

    c = sub.add_parser("check", help="run named bound and lemma checks")
    _add_family_params(c, True)
    c.add_argument("--checks", required=True, help=f"comma list from: {', '.join(CHECKS)}")
    c.add_argument("--trials", type=int, default=10_000)
    c.add_argument("--threads", type=int, default=threads)
    c.add_argument("--facets", help="JSON integer facet-normal matrix for delta_Delta")
    c.add_argument("--lattice-k", type=int, dest="lattice_k")
    c.add_argument("--alpha", type=int, help="numerator cap for the rational check")
    c.add_argument("--beta", type=int, help="denominator cap for the rational check")
    c.add_argument("--max-denominator", type=int, default=1000, dest="max_denominator")
    c.add_argument("--alpha-level", type=float, default=0.01, dest="alpha_level",
                   help="significance level of the independence test")
    c.add_argument("--slab-eps", type=float, default=0.1, dest="slab_eps")
    c.add_argument("--timing", action="store_true", help="include wall time in the report")
    c.add_argument("-o", "--out")
    c.set_defaults(func=cmd_check)

    w = sub.add_parser("sweep", help="sandwich bounds across a parameter range, as CSV")
    w.add_argument("family", choices=FAMILIES)
    w.add_argument("--range", required=True, help="LO:HI (inclusive) or comma list of n (k for zn_parallel)")
    w.add_argument("--n", type=int, help="ambient dimension for zn_parallel (default 3)")
    w.add_argument("--eps", type=float)
    w.add_argument("--seed", type=int)
    w.add_argument("--trials", type=int, default=2_000)
    w.add_argument("--threads", type=int, default=threads)
    w.add_argument("--no-delta", action="store_true", dest="no_delta")
    w.add_argument("-o", "--out")
    w.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "trials", 1) is not None and getattr(args, "trials", 1) < 1:
        ap.error("--trials must be >= 1")
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"shadowlab: error: {exc}\n")
        return 2
    except (SizeCapExceeded, InvalidDimension, NotSimple) as exc:
        sys.stderr.write(f"shadowlab: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
