"""Command-line entry points.

Subcommands:

- ``run``: execute a preset or JSON-configured experiment and write the
  result artifact (CSV or JSON).
- ``windows``: dump the window catalog metrics.
- ``boundaries``: print the selector's pairwise JNR decision boundaries.
- ``validate``: quick self-checks of the catalog metrics, boundary
  formula, and Monte Carlo engine against analytic oracles.

Exit code 0 on success; on failure a single machine-readable
``error: <message>`` line goes to stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import __version__
from .bandcov import band_covariance
from .detector import DetectorSpec, analytic_pd, calibrate_threshold, estimate_pd, make_context
from .harness import ExperimentConfig, emit, load_config, run
from .simkit import Scenario
from .windows import catalog_record, window_catalog


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="winselect",
        description="Adaptive window selection experiments for DFT-based detection.",
    )
    parser.add_argument("--version", action="version", version=f"winselect {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment preset or config file")
    p_run.add_argument("--preset", default=None,
                       choices=["case1", "case2", "case3", "table2", "custom"])
    p_run.add_argument("--config", default=None, help="JSON config file (overridden by flags)")
    p_run.add_argument("--trials", type=int, default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--workers", type=int, default=None)
    p_run.add_argument("--out", default=None, help="output artifact path")
    p_run.add_argument("--format", default=None, choices=["csv", "json"])

    p_win = sub.add_parser("windows", help="dump window catalog metrics")
    p_win.add_argument("--n", type=int, default=16)
    p_win.add_argument("--atten", type=float, default=120.0,
                       help="Chebyshev design attenuation in dB")
    p_win.add_argument("--json", action="store_true", help="emit JSON records")

    p_bnd = sub.add_parser("boundaries", help="print selector decision boundaries")
    p_bnd.add_argument("--n", type=int, default=16)
    p_bnd.add_argument("--atten", type=float, default=120.0)

    p_val = sub.add_parser("validate", help="run analytic-oracle self-checks")
    p_val.add_argument("--trials", type=int, default=20_000)
    p_val.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_run(args) -> int:
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        cfg = ExperimentConfig(preset=args.preset)
    else:
        raise ValueError("run needs --preset or --config")
    overrides = {}
    if args.preset is not None and args.config:
        overrides["preset"] = args.preset
    for name, value in (("trials", args.trials), ("seed", args.seed),
                        ("workers", args.workers), ("output_path", args.out),
                        ("output_format", args.format)):
        if value is not None:
            overrides[name] = value
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    result = run(cfg)
    if cfg.output_path:
        emit(result, cfg.output_format, cfg.output_path)
        print(f"wrote {len(result.rows)} rows to {cfg.output_path} ({cfg.output_format})")
    else:
        emit(result, cfg.output_format, "/dev/stdout")
    return 0


def _cmd_windows(args) -> int:
    records = [catalog_record(w) for w in window_catalog(args.n, args.atten)]
    if args.json:
        json.dump(records, sys.stdout, indent=1)
        print()
        return 0
    print(f"{'window':<14} {'PSL dB':>8} {'SNR loss dB':>12} {'stop-band (bins)':>22}")
    for rec in records:
        lo, hi = rec["stopband_bins"]
        print(f"{rec['name']:<14} {rec['psl_db']:8.3f} {rec['snr_loss_db']:12.4f} "
              f"({lo:8.4f}, {hi:8.4f})")
    return 0


def _cmd_boundaries(args) -> int:
    ctx = make_context(n=args.n, chebyshev_atten_db=args.atten)
    names = ctx.window_names
    print(f"{'pair':<28} {'JNR linear':>12} {'JNR dB':>9}")
    for k, bound in enumerate(ctx.boundaries.bounds_linear[1:], start=1):
        pair = f"{names[k - 1]} / {names[k]}"
        print(f"{pair:<28} {bound:12.4f} {10 * np.log10(bound):9.3f}")
    return 0


def _cmd_validate(args) -> int:
    checks = []

    def check(name, ok, detail):
        checks.append(ok)
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")

    ctx = make_context()
    rect, ham, cheb = ctx.windows
    check("rectangle SNR loss", ham.snr_loss_db > rect.snr_loss_db == 0.0,
          f"rect {rect.snr_loss_db:.4f} dB")
    check("PSL ordering", rect.psl_db < ham.psl_db < cheb.psl_db,
          f"{rect.psl_db:.2f} < {ham.psl_db:.2f} < {cheb.psl_db:.2f} dB")
    check("chebyshev design PSL", abs(cheb.psl_db - 120.0) <= 0.5,
          f"{cheb.psl_db:.3f} dB vs 120 requested")
    b1, b2 = ctx.boundaries.bounds_linear[1], ctx.boundaries.bounds_linear[2]
    check("switch boundaries", 8.1 <= 10 * np.log10(b1) <= 8.7 and 30.0 <= 10 * np.log10(b2) <= 31.0,
          f"{10 * np.log10(b1):.3f} dB, {10 * np.log10(b2):.3f} dB")
    cov = band_covariance(16, cheb.stopband_bins)
    width = cheb.stopband_bins[1] - cheb.stopband_bins[0]
    check("band covariance trace", abs(cov.eig_values.sum() - width) < 1e-9 * width,
          f"trace {cov.eig_values.sum():.6f} vs band width {width:.6f}")

    # Monte Carlo vs the exponential-statistic oracle, no jammer
    pfa = 1e-2
    spec = DetectorSpec(policy="fixed:rectangle", pfa=pfa)
    sc_h0 = Scenario(n=16, snr_db=0.0, jnr_db=-np.inf, include_signal=False,
                     seed=(args.seed, 0))
    sc_h1 = Scenario(n=16, snr_db=0.0, jnr_db=-np.inf, include_signal=True,
                     seed=(args.seed, 1))
    thr = calibrate_threshold(spec, sc_h0, args.trials, ctx)
    expected_thr = rect.norm_sq() * np.log(1 / pfa)
    check("calibrated threshold", abs(thr - expected_thr) <= 0.05 * expected_thr,
          f"{thr:.2f} vs closed form {expected_thr:.2f}")
    pd, stderr = estimate_pd(spec.calibrated(thr), sc_h1, args.trials, ctx)
    expected_pd = analytic_pd(pfa, 16.0)
    check("Monte Carlo vs analytic Pd", abs(pd - expected_pd) <= max(4 * stderr, 0.02),
          f"{pd:.4f} vs {expected_pd:.4f}")

    print("all checks passed" if all(checks) else "some checks FAILED")
    return 0 if all(checks) else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "windows": _cmd_windows,
        "boundaries": _cmd_boundaries,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
