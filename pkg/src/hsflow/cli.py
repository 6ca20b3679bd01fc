"""Command-line surface: verify / flow / lift / report.

Exit codes: 0 success, 1 validation or verification failure, 2 numerical
abort (positivity degeneration), 3 I/O failure.  The worker-count variable
HSF_WORKERS is accepted and recorded in artifacts; the numerical kernels are
vectorized and give identical results at any worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import config as config_mod
from . import flow_engine as fe
from . import grid_calculus as gc
from . import initial_data
from . import snapshot as snap
from . import triple_algebra as ta
from . import verify as verify_mod
from .errors import NotPositive, StepRejected, ValidationError

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


def _workers() -> int:
    try:
        w = int(os.environ.get("HSF_WORKERS", "1"))
    except ValueError:
        raise ValidationError("HSF_WORKERS must be an integer")
    if w < 1:
        raise ValidationError("HSF_WORKERS must be >= 1")
    return w


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def cmd_verify(args) -> int:
    report = verify_mod.run_suite(args.trials, args.seed)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    if not report["passed"]:
        failing = [k for k, v in report["identities"].items() if not v["passed"]]
        print(f"FAILED identities: {', '.join(failing)}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_flow(args) -> int:
    cfg = config_mod.load(args.config)
    if args.out:
        cfg.out_dir = args.out
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    chash = cfg.config_hash()
    workers = _workers()
    (out / "config.json").write_text(json.dumps(
        {"config": cfg.sections(), "config_hash": chash, "workers": workers},
        indent=2, sort_keys=True) + "\n")

    lat = cfg.lattice()
    tf = initial_data.generate_initial(
        lat, cfg.generator, cfg.amplitude, cfg.initial_seed, cfg.modes,
        cfg.flow.stencil_order, cfg.flow.degeneration_threshold)

    csv_path = out / "diagnostics.csv"
    fh = open(csv_path, "w", newline="")
    fh.write(f"# config_hash={chash}\n")
    writer = csv.writer(fh)
    writer.writerow(fe.DIAG_COLUMNS)

    def row_sink(row):
        writer.writerow([_fmt(row[k]) for k in fe.DIAG_COLUMNS])
        fh.flush()

    def checkpoint_sink(step_index, state):
        path = out / f"snap_{step_index:06d}.hsf"
        snap.write_snapshot(path, state.tf, state.time)
        snap.write_sidecar(path, {
            "config_hash": chash, "step": step_index, "time": state.time,
            "workers": workers, "diagnostics": state.diagnostics})

    try:
        result = fe.run(cfg.flow, tf, row_sink, checkpoint_sink)
    finally:
        fh.close()
    if result.aborted:
        print(result.aborted, file=sys.stderr)
        return EXIT_NUMERICAL
    last = result.rows[-1]
    print(f"run complete: {last['step']} steps to t={last['time']:.6g}, "
          f"diagnostics in {csv_path}")
    return EXIT_OK


def _lift_report(tf: gc.TripleField, time: float, samples: int, seed: int) -> dict:
    from . import fiber_g2 as fg
    lat = tf.lattice
    q, g, mu = gc.pointwise_normalize(tf)
    sigma = np.matmul(ta.adj3(q), tf.c)
    dsig = gc.d(lat, sigma, 2, 4)
    dome = gc.d(lat, tf.c, 2, 4)
    rng = np.random.default_rng(seed)
    k = min(samples, lat.num_points)
    flat = rng.choice(lat.num_points, size=k, replace=False)
    star_worst, torsion_worst = 0.0, 0.0
    for f in flat:
        idx = tuple(int(v) for v in np.unravel_index(f, lat.shape))
        phi = fg.build_phi(tf.c[idx])
        psi = fg.build_psi(sigma[idx], mu[idx])
        g7, _ = fg.metric_from_phi(phi)
        star_worst = max(star_worst, fg.check_star7(phi, psi, g7))
        # torsion of both lifts; the dual triple is the non-closed one
        torsion_worst = max(
            torsion_worst,
            abs(fg.torsion_trace(phi, fg.assemble_dphi(dome[idx]), g7)),
            abs(fg.torsion_trace(fg.build_phi(sigma[idx]),
                                 fg.assemble_dphi(dsig[idx]),
                                 fg.metric7_block(ta.adj3(q[idx]), g[idx]))))
    return {"time": time, "points_sampled": int(k),
            "max_star7_residual": float(star_worst),
            "max_torsion_trace": float(torsion_worst),
            "max_dw": tf.max_dabs(),
            "min_eig_Q": float(np.linalg.eigvalsh(q)[..., 0].min())}


def cmd_lift(args) -> int:
    tf, time = snap.read_snapshot(args.snapshot)
    report = _lift_report(tf, time, args.samples, args.seed)
    report["snapshot"] = str(args.snapshot)
    try:
        report["config_hash"] = snap.read_sidecar(args.snapshot).get("config_hash")
    except OSError:
        pass
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_report(args) -> int:
    run_dir = Path(args.run)
    csv_path = run_dir / "diagnostics.csv"
    with open(csv_path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.DictReader(lines))
    if not rows:
        raise ValidationError(f"{csv_path}: no diagnostics rows")
    series = {k: np.array([float(r[k]) for r in rows]) for k in rows[0]}
    qd = series["q_dev"]
    tail = qd[len(qd) // 2:]
    monotone = bool(np.all(np.diff(tail) <= 1e-14)) if len(tail) > 1 else True
    summary = {
        "rows": len(rows),
        "t_final": float(series["time"][-1]),
        "max_dw_worst": float(series["max_dw"].max()),
        "period_drift_worst": float(series["period_drift"].max()),
        "max_abs_detQ_minus_1_worst": float(series["max_abs_detQ_minus_1"].max()),
        "torsion_sample_worst": float(series["torsion_sample"].max()),
        "q_dev_initial": float(qd[0]),
        "q_dev_final": float(qd[-1]),
        "q_dev_ratio": float(qd[-1] / qd[0]) if qd[0] else 0.0,
        "q_dev_tail_monotone": monotone,
    }
    (run_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n")
    with open(run_dir / "report.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "q_dev", "rhs_l2", "max_dw", "period_drift"])
        for i in range(len(rows)):
            w.writerow([_fmt(series[k][i])
                        for k in ("time", "q_dev", "rhs_l2", "max_dw",
                                  "period_drift")])
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hsflow",
        description="Numerical laboratory for positive 2-form triples on "
                    "periodic 4-tori and their geometric flow.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the randomized identity suites")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--out", help="also write the JSON report here")
    v.set_defaults(fn=cmd_verify)

    f = sub.add_parser("flow", help="integrate a configured flow experiment")
    f.add_argument("--config", required=True)
    f.add_argument("--out", help="override the configured output directory")
    f.set_defaults(fn=cmd_flow)

    l = sub.add_parser("lift", help="7-dimensional fiber checks on a snapshot")
    l.add_argument("--snapshot", required=True)
    l.add_argument("--samples", type=int, default=16)
    l.add_argument("--seed", type=int, default=0)
    l.set_defaults(fn=cmd_lift)

    r = sub.add_parser("report", help="summarize a run directory")
    r.add_argument("--run", required=True)
    r.set_defaults(fn=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NotPositive, StepRejected) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
