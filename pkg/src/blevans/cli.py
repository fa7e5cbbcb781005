"""Command-line interface: ``blevans <command> [--config FILE] [overrides]``.

Exit status is 0 on success, 2 for configuration or parameter errors and 3
for numerical failures.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .analysis import real_axis_scan, stability_index, write_scan_csv
from .contour import winding_number
from .errors import ConfigError, DomainError, NumericalError
from .evans import EvansEvaluator, EvansSample, shock_correction, write_samples_csv
from .harness import SweepConfig, contour_for, convergence_study, emit_plot, run_sweep, write_convergence_csv
from .params import LayerParams, Side
from .profile import solve_profile

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON configuration file")
    common.add_argument("--gamma", type=float)
    common.add_argument("--v-plus", dest="v_plus", type=float, help="right endstate; 0 selects the pressureless limit")
    common.add_argument("--v0", type=float)
    common.add_argument("--side", choices=[s.value for s in Side])
    common.add_argument("--radius", type=float)
    common.add_argument("--points", type=int)
    common.add_argument("--indent", type=float)
    common.add_argument("--L", dest="L", type=float)
    common.add_argument("--abs-tol", dest="abs_tol", type=float)
    common.add_argument("--rel-tol", dest="rel_tol", type=float)
    common.add_argument("--out", type=Path)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="blevans", description="Evans-function stability checks for boundary layers")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("profile", parents=[common], help="compute the profile and write profile.csv")
    ev = sub.add_parser("evans", parents=[common], help="evaluate D on the contour (or at --lam)")
    ev.add_argument("--lam", type=complex, help="single spectral point, e.g. 1+2j")
    ev.add_argument("--shock-correction", action="store_true", help="multiply by the shock-limit factor c(lam)")
    w = sub.add_parser("winding", parents=[common], help="winding number of D over the contour")
    w.add_argument("--shock-correction", action="store_true")
    sub.add_parser("index", parents=[common], help="stability index sign")
    sub.add_parser("scan", parents=[common], help="real-axis scan on [0, R]")
    sw = sub.add_parser("sweep", parents=[common], help="parameter sweep of windings and indices")
    sw.add_argument("--workers", type=int)
    cv = sub.add_parser("converge", parents=[common], help="convergence study in L and/or tolerances")
    cv.add_argument("--study", choices=["L", "tol", "both"], default="both")
    return p


def _config(args) -> SweepConfig:
    cfg = SweepConfig.load(args.config) if args.config else SweepConfig()
    over = {
        "gamma": (args.gamma,) if args.gamma is not None else None,
        "v_plus": (args.v_plus,) if args.v_plus is not None else None,
        "v0": (args.v0,) if args.v0 is not None else None,
        "side": Side.parse(args.side) if args.side else None,
        "radius": args.radius,
        "points": args.points,
        "indent": args.indent,
        "L": args.L,
        "abs_tol": args.abs_tol,
        "rel_tol": args.rel_tol,
        "out": args.out,
        "workers": getattr(args, "workers", None),
    }
    return cfg.with_overrides(**over)


def _point(cfg: SweepConfig) -> LayerParams:
    v0 = cfg.v0[0]
    vp = cfg.v_plus_for(v0)[0]
    return LayerParams.create(cfg.gamma[0], vp, v0, cfg.side)


def _corrected(ev: EvansEvaluator, params: LayerParams):
    def f(lam):
        return ev(lam) * shock_correction(params, lam)

    f.variant = ev.variant
    return f


def _run(args) -> int:
    cfg = _config(args)
    out = Path(cfg.out)
    cmd = args.command
    if cmd == "sweep":
        recs = run_sweep(cfg)
        ok = [r for r in recs if r.status == "ok"]
        bad = [r for r in recs if r.status == "error"]
        print(f"{len(ok)} ok, {len(bad)} errors, {len(recs) - len(ok) - len(bad)} skipped -> {out / 'sweep.csv'}")
        nonzero = [r for r in ok if r.winding != 0]
        for r in nonzero:
            print(f"nonzero winding {r.winding} at {r.params}")
        return EXIT_NUMERICAL if bad else EXIT_OK
    if cmd == "converge":
        studies = ["L", "tol"] if args.study == "both" else [args.study]
        tables = []
        for s in studies:
            tabs = convergence_study(cfg, s, v_plus=cfg.v_plus_for(cfg.v0[0])[0], v0=cfg.v0[0])
            for t in tabs:
                print(t.to_markdown())
                print()
            tables.extend(tabs)
        path = write_convergence_csv(tables, out / "convergence.csv")
        print(f"wrote {path}")
        return EXIT_OK

    params = _point(cfg)
    if cmd == "profile":
        prof = solve_profile(params, cfg.L)
        path = prof.to_csv(out / "profile.csv")
        print(f"delta = {prof.delta:.10g}; {len(prof.x)} nodes -> {path}")
        return EXIT_OK

    ev = EvansEvaluator(params, cfg.options)
    if cmd == "evans":
        fn = _corrected(ev, params) if args.shock_correction else ev
        if args.lam is not None:
            val = fn(args.lam)
            print(json.dumps({"lambda": [args.lam.real, args.lam.imag], "D": [val.real, val.imag], "variant": ev.variant.value}))
            return EXIT_OK
        contour = contour_for(ev.variant, cfg.radius, cfg.points, cfg.indent)
        samples = [EvansSample(complex(l), complex(fn(l)), ev.variant) for l in contour.points]
        path = write_samples_csv(samples, out / "evans.csv")
        emit_plot(samples, out / "evans.svg", title="Evans function image", params=params.as_dict())
        print(f"{len(samples)} samples -> {path}")
        return EXIT_OK
    if cmd == "winding":
        fn = _corrected(ev, params) if args.shock_correction else ev
        contour = contour_for(ev.variant, cfg.radius, cfg.points, cfg.indent)
        rep = winding_number(fn, contour)
        samples = [EvansSample(complex(l), complex(d), ev.variant) for l, d in zip(rep.points, rep.values)]
        write_samples_csv(samples, out / "winding.csv")
        emit_plot(samples, out / "winding.svg", title="Evans function image", params=params.as_dict())
        print(json.dumps({"winding": rep.winding, "max_arg_step": rep.max_arg_step, "n_points": rep.n_points_final, "refined": rep.refined}))
        return EXIT_OK
    if cmd == "index":
        idx = stability_index(ev, ev.variant, R=cfg.scan_R)
        print(json.dumps({"stability_index": idx, "variant": ev.variant.value}))
        return EXIT_OK
    if cmd == "scan":
        scan = real_axis_scan(ev, cfg.scan_R, cfg.scan_points)
        write_scan_csv(scan, out / "scan.csv")
        emit_plot(scan, out / "scan.svg", title="Evans function on the real axis", params=params.as_dict())
        print(
            json.dumps(
                {
                    "zero_at_origin": scan.zero_at_origin,
                    "transversal_slope": scan.transversal_slope,
                    "sign_changes": scan.sign_changes,
                    "D(0)": scan.value_at_origin,
                    "D(R)": scan.value_at_R,
                }
            )
        )
        return EXIT_OK
    raise ConfigError(f"unknown command {cmd}")  # pragma: no cover


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
