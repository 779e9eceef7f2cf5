"""Command-line front end.

One subcommand per pipeline; every run resolves its configuration, writes
``manifest.json`` (resolved config + library version + wall time) into the
output directory first, then the command's artifacts.  Exit codes:

    0  success
    2  validation error (bad flags, malformed map spec, precondition)
    3  resource error (cell cap exceeded)
    4  certification failure (gate fails, no passing tau, delta too small,
       degenerate fit, boundary-event budget exceeded)

Artifacts are deterministic under a fixed seed; the manifest records wall
time and is the one file that varies between identical runs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .errors import (
    CertificationError,
    HypaffError,
    ResourceError,
    ValidationError,
)
from .map_core import (
    MapSpec,
    gate_corollary,
    gate_theorem,
    mapspec_from_json,
    preset_belykh,
    preset_fat_baker,
)
from .measure import (
    Observable,
    UnstableCurve,
    conditional_slab_density,
    correlation_decay,
    density_csv,
    entropy_estimate,
    estimate_sbr,
    heatmap_pgm,
    histogram_csv,
    marginal,
)
from .partition import check_A2, compute_D_tau, refine_to_depth
from .symbolic import (
    Word,
    census_csv,
    enumerate_words,
    map_series_params,
    stable_coordinate,
    words_to_json,
)
from .transversality import compute_delta


def _add_map_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=["belykh", "fat-baker"],
                   help="built-in map family")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5,
                   help="contraction rate (presets)")
    p.add_argument("--gamma", dest="gam", type=float, default=2.0,
                   help="expansion rate (belykh preset)")
    p.add_argument("--k", type=float, default=0.0,
                   help="slope of the splitting line (belykh preset)")
    p.add_argument("--map", dest="map_path",
                   help="path to a map spec JSON file")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", "-o", default="hypaff-out", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("HYPAFF_THREADS", "0")) or None,
                   help="cap on worker threads (numerical kernels are "
                        "currently single-threaded; recorded in the manifest)")


def _add_curve_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--curve", nargs=3, type=float, metavar=("RHO", "S1", "S2"),
                   help="unstable curve x1=RHO, S1 < x2 < S2 "
                        "(default: auto inside the largest piece)")
    p.add_argument("--points", type=int, default=10_000)
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--burn-in", type=int, default=1_000)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypaff",
                                 description="piecewise affine hyperbolic maps: "
                                             "gates, certificates, measures")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gate", help="parameter gate")
    _add_map_flags(p)
    _add_common_flags(p)
    p.add_argument("--t0", type=float, help="left end of the scaling interval")
    p.add_argument("--t1", type=float, help="right end of the scaling interval")

    p = sub.add_parser("refine", help="refined partition")
    _add_map_flags(p)
    _add_common_flags(p)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--cell-cap", type=int, default=10**6)

    p = sub.add_parser("dtau", help="boundary crossing multiplicity")
    _add_map_flags(p)
    _add_common_flags(p)
    p.add_argument("--tau", type=int, default=1)
    p.add_argument("--cell-cap", type=int, default=10**6)

    p = sub.add_parser("a2", help="expansion vs multiplicity check")
    _add_map_flags(p)
    _add_common_flags(p)
    p.add_argument("--tau-max", type=int, default=5)
    p.add_argument("--cell-cap", type=int, default=10**6)

    p = sub.add_parser("transversality", help="series transversality certificate")
    _add_common_flags(p)
    p.add_argument("--n", type=int, required=True, choices=[2, 3, 4])
    p.add_argument("--C", dest="C", type=float, default=1.0)
    p.add_argument("--grid-step", type=float, default=1e-4)

    p = sub.add_parser("words", help="itinerary word census")
    _add_map_flags(p)
    _add_common_flags(p)
    p.add_argument("--length", type=int, default=8)
    p.add_argument("--cell-cap", type=int, default=10**6)

    p = sub.add_parser("sbr", help="empirical physical measure histogram")
    _add_map_flags(p)
    _add_common_flags(p)
    _add_curve_flags(p)
    p.add_argument("--grid-nx", type=int, default=512)
    p.add_argument("--grid-ny", type=int, default=512)

    p = sub.add_parser("density", help="marginal or slab-conditional density")
    _add_map_flags(p)
    _add_common_flags(p)
    _add_curve_flags(p)
    p.add_argument("--grid-nx", type=int, default=512)
    p.add_argument("--grid-ny", type=int, default=512)
    p.add_argument("--axis", choices=["x1", "x2"],
                   help="marginal axis (mutually exclusive with a slab)")
    p.add_argument("--x2-center", type=float, help="slab center")
    p.add_argument("--half-width", type=float,
                   help="slab half width (default: domain height / 256)")

    p = sub.add_parser("entropy", help="entropy rate from word frequencies")
    _add_map_flags(p)
    _add_common_flags(p)
    _add_curve_flags(p)
    p.add_argument("--max-len", type=int, default=10)

    p = sub.add_parser("correlations", help="correlation decay fit")
    _add_map_flags(p)
    _add_common_flags(p)
    p.add_argument("--orbit-length", type=int, default=10**7)
    p.add_argument("--max-lag", type=int, default=30)
    p.add_argument("--burn-in", type=int, default=1_000)
    p.add_argument("--phi", default="x2", help="observable: x1 | x2 | bump:CX,CY,W")
    p.add_argument("--psi", default="x2", help="observable: x1 | x2 | bump:CX,CY,W")

    p = sub.add_parser("coordinate", help="stable coordinate from a past itinerary")
    _add_map_flags(p)
    _add_common_flags(p)
    p.add_argument("--t", type=float, default=1.0, help="contraction scaling")
    p.add_argument("--truncation", type=int, default=200)
    p.add_argument("--past", required=True,
                   help="comma-separated past symbols, most recent first; "
                        "a single symbol repeats to the truncation length")
    return ap


def resolve_map(args: argparse.Namespace) -> MapSpec:
    if getattr(args, "map_path", None):
        if args.preset:
            raise ValidationError("give either --preset or --map, not both")
        return mapspec_from_json(Path(args.map_path).read_text())
    preset = args.preset or "belykh"
    if preset == "fat-baker":
        return preset_fat_baker(args.lam)
    return preset_belykh(args.lam, args.gam, args.k)


def _parse_observable(text: str) -> Observable:
    if text in ("x1", "x2", "const"):
        return Observable(text)
    if text.startswith("bump:"):
        try:
            cx, cy, w = (float(v) for v in text[5:].split(","))
        except ValueError as exc:
            raise ValidationError(f"malformed bump observable {text!r}") from exc
        return Observable("bump", center=(cx, cy), width=w)
    raise ValidationError(f"unknown observable {text!r}")


def _parse_past(text: str, truncation: int) -> Word:
    try:
        syms = tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"malformed past {text!r}") from exc
    if len(syms) == 1:
        syms = syms * truncation
    return Word(syms, offset=-len(syms))


def _curve(args: argparse.Namespace) -> UnstableCurve | None:
    if args.curve is None:
        return None
    rho, s1, s2 = args.curve
    return UnstableCurve(rho, s1, s2)


def _json_dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _execute(args: argparse.Namespace) -> tuple[dict, dict[str, bytes]]:
    """Run the pipeline; return (summary for the manifest, artifacts)."""
    cmd = args.command
    artifacts: dict[str, bytes] = {}
    summary: dict = {}

    if cmd == "gate":
        m = resolve_map(args)
        if (args.t0 is None) != (args.t1 is None):
            raise ValidationError("--t0 and --t1 must be given together")
        if args.t0 is not None:
            report = gate_theorem(m, args.t0, args.t1)
        else:
            report = gate_corollary(m)
        artifacts["gate_report.json"] = _json_dump(report.to_dict()).encode()
        summary["overall"] = report.overall
        if not report.overall:
            err = CertificationError("parameter gate failed")
            err.artifacts = artifacts
            raise err

    elif cmd == "refine":
        m = resolve_map(args)
        z = refine_to_depth(m, args.depth, args.cell_cap)
        artifacts["partition.json"] = _json_dump(z.to_dict()).encode()
        summary["cells"] = z.n_cells

    elif cmd == "dtau":
        m = resolve_map(args)
        d, witness = compute_D_tau(m, args.tau, args.cell_cap)
        payload = {"tau": args.tau, "D": d, "witness": [witness.x, witness.y]}
        artifacts["dtau.json"] = _json_dump(payload).encode()
        summary.update(payload)

    elif cmd == "a2":
        m = resolve_map(args)
        result = check_A2(m, args.tau_max, args.cell_cap)
        if result.passed:
            payload = {
                "passed": True,
                "tau": result.tau,
                "D_tau": result.d_tau,
                "gamma_min": result.gamma_min,
                "margin": result.margin,
                "witness": [result.witness.x, result.witness.y],
            }
        else:
            payload = {
                "passed": False,
                "gamma_min": result.gamma_min,
                "tried": [list(t) for t in result.tried],
            }
        artifacts["a2.json"] = _json_dump(payload).encode()
        summary["passed"] = result.passed
        if not result.passed:
            err = CertificationError(f"no passing tau up to {args.tau_max}")
            err.artifacts = artifacts
            raise err

    elif cmd == "transversality":
        cert = compute_delta(args.n, args.C, args.grid_step)
        artifacts["cert.json"] = _json_dump(cert.to_dict()).encode()
        summary["delta"] = cert.delta

    elif cmd == "words":
        m = resolve_map(args)
        census, words = enumerate_words(m, args.length, args.cell_cap)
        artifacts["words.json"] = _json_dump(words_to_json(words)).encode()
        artifacts["census.csv"] = census_csv(census).encode()
        summary["count"] = census.count
        rate = census.fitted_rate
        summary["fitted_rate"] = None if math.isnan(rate) else rate

    elif cmd == "sbr":
        m = resolve_map(args)
        em = estimate_sbr(m, _curve(args), args.points, args.steps,
                          args.burn_in, (args.grid_nx, args.grid_ny), args.seed)
        artifacts["histogram.csv"] = histogram_csv(em).encode()
        artifacts["heatmap.pgm"] = heatmap_pgm(em)
        artifacts["measure.json"] = _json_dump({
            "grid": [em.nx, em.ny],
            "bbox": list(em.bbox),
            "sample_count": em.sample_count,
            "burn_in": em.burn_in,
            "seed": em.seed,
            "perturbations": em.perturbations,
        }).encode()
        summary["perturbations"] = em.perturbations

    elif cmd == "density":
        m = resolve_map(args)
        slab = args.x2_center is not None
        if args.axis and slab:
            raise ValidationError("give --axis or a slab, not both")
        if not args.axis and not slab:
            raise ValidationError("need --axis or --x2-center")
        if args.half_width is not None and not slab:
            raise ValidationError("--half-width needs --x2-center")
        em = estimate_sbr(m, _curve(args), args.points, args.steps,
                          args.burn_in, (args.grid_nx, args.grid_ny), args.seed)
        if args.axis:
            d = marginal(em, args.axis)
            summary["kind"] = f"marginal:{args.axis}"
        else:
            d = conditional_slab_density(em, args.x2_center, args.half_width)
            summary["kind"] = f"slab:{args.x2_center}+-{args.half_width}"
        artifacts["density.csv"] = density_csv(d).encode()

    elif cmd == "entropy":
        m = resolve_map(args)
        est = entropy_estimate(m, _curve(args), args.points, args.steps,
                               args.burn_in, args.max_len, args.seed)
        artifacts["entropy.json"] = _json_dump({
            "rate": est.rate,
            "visits_per_word": est.visits_per_word,
            "table": [[l, y] for l, y in est.table()],
        }).encode()
        lines = ["length,mean_information"]
        lines += [f"{l},{float(y)!r}" for l, y in est.table()]
        artifacts["entropy_table.csv"] = ("\n".join(lines) + "\n").encode()
        summary["rate"] = est.rate

    elif cmd == "correlations":
        m = resolve_map(args)
        report = correlation_decay(m, _parse_observable(args.phi),
                                   _parse_observable(args.psi),
                                   args.orbit_length, args.max_lag,
                                   args.seed, args.burn_in)
        artifacts["correlations.json"] = _json_dump(report.to_dict()).encode()
        summary["theta_fit"] = report.theta_fit
        summary["fit_quality"] = report.fit_quality

    elif cmd == "coordinate":
        m = resolve_map(args)
        past = _parse_past(args.past, args.truncation)
        lams, us = map_series_params(m)
        x1, bound = stable_coordinate(lams, us, args.t, past, args.truncation)
        payload = {"x1": x1, "error_bound": bound,
                   "t": args.t, "truncation": args.truncation}
        artifacts["coordinate.json"] = _json_dump(payload).encode()
        summary.update(payload)

    else:  # pragma: no cover
        raise ValidationError(f"unknown command {cmd!r}")

    return summary, artifacts


def _manifest(args: argparse.Namespace, summary: dict, wall: float | None) -> bytes:
    config = {k: v for k, v in vars(args).items() if k != "command"}
    return _json_dump({
        "command": args.command,
        "config": config,
        "version": __version__,
        "wall_time_s": wall,
        "summary": summary,
    }).encode()


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "seed", 0) < 0:
        print("error: seed must be non-negative", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    out = Path(args.out)
    code = 0
    try:
        # Validation happens inside _execute before anything touches the
        # filesystem; misconfiguration must not leave files behind.
        summary, artifacts = _execute(args)
    except CertificationError as exc:
        # A failed certification still reports manifest and artifacts.
        summary = {"error": str(exc)}
        artifacts = getattr(exc, "artifacts", {})
        code = 4
        print(f"certification failure: {exc}", file=sys.stderr)
    except (ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except HypaffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.json").write_bytes(_manifest(args, summary, None))
    for name, data in artifacts.items():
        (out / name).write_bytes(data)
    wall = time.perf_counter() - t0
    (out / "manifest.json").write_bytes(_manifest(args, summary, wall))
    for name in artifacts:
        print(f"wrote {out / name}")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
