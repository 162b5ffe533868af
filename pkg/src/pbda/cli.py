"""Command-line harness: data generation, training, evaluation, sweeps.

Subcommands: generate, train, evaluate, experiment, mc-check.
Exit codes: 0 ok, 2 usage, 3 I/O failure, 4 non-convergence under
--strict, 5 Monte-Carlo verification failure.
"""

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import data as ds
from .exceptions import ParseError, PBDAError
from .gibbs import mc_from_margins
from .kernel import KernelConfig
from .models import (
    load_model,
    model_accuracy,
    model_disagreement,
    model_gibbs_risk,
    model_predict,
    save_model,
)
from .optimize import TrainConfig, select_gamma, train_dapbgd, train_pbgd
from .special import phi, phi_dis
from .svgplot import write_boundary_svg

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NONCONVERGENCE = 4
EXIT_VERIFICATION = 5

RESULTS_HEADER = (
    "algorithm,angle,target_accuracy,source_gibbs_risk,disagreement,bound_value,wall_time_ms"
)
TRADEOFF_HEADER = "algorithm,angle,source_gibbs_risk,disagreement"
TRACE_HEADER = "iteration,objective,bstar,source_risk,disagreement,step,grad_norm"
BOUNDARY_HEADER = "x1,x2,prediction"

DEFAULT_GAMMAS = (0.1, 0.5, 1.0, 2.0, 5.0)
BOUNDARY_GRID = 200
BOUNDARY_PAD = 0.2


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _write_csv(path, header, rows):
    lines = [header] + [",".join(_fmt(v) for v in row) for row in rows]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_floats(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _parse_names(text):
    return [v.strip() for v in str(text).split(",") if v.strip()]


# --- argument plumbing ---


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="base seed for all randomness")
    p.add_argument("--delta", type=float, default=0.05, help="bound confidence parameter")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--config", default=None, help="key=value config file (flags win)")
    p.add_argument("--strict", action="store_true", help="fail on non-convergence")
    p.add_argument("--threads", type=int, default=1, help="reserved; runs are sequential")


def _add_train_opts(p):
    p.add_argument("--kernel", choices=["none", "linear", "gaussian"], default="gaussian")
    p.add_argument("--gamma", default="auto", help="gaussian width, or 'auto' for a bound-driven grid")
    p.add_argument("--gammas", default=",".join(str(g) for g in DEFAULT_GAMMAS),
                   help="grid used when --gamma auto")
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--grad-tol", type=float, default=1e-6)
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--pair-seed", type=int, default=None, help="defaults to --seed")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pbda",
        description="PAC-Bayesian domain adaptation: bound-minimizing linear classifiers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write rotated-moons source/target CSVs")
    _add_common(p)
    p.add_argument("--angle", type=float, default=30.0)
    p.add_argument("--n", type=int, default=150, help="points per class per domain")
    p.add_argument("--noise", type=float, default=0.05)

    p = sub.add_parser("train", help="train one algorithm on CSV inputs")
    _add_common(p)
    p.add_argument("--algo", choices=["pbgd", "dapbgd"], required=True)
    p.add_argument("--source", required=True, help="labeled source CSV")
    p.add_argument("--target", default=None, help="unlabeled target CSV (dapbgd)")
    _add_train_opts(p)

    p = sub.add_parser("evaluate", help="accuracy of a model file on a labeled CSV")
    _add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)

    p = sub.add_parser("experiment", help="full angle sweep with tables and plots")
    _add_common(p)
    p.add_argument("--angles", default="20,30,40,50")
    p.add_argument("--n", type=int, default=150)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--algos", default="pbgd,dapbgd")
    p.add_argument("--test-n", type=int, default=500, help="test points per class")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--timings", action="store_true",
                   help="record measured wall times (breaks byte-determinism)")
    _add_train_opts(p)

    p = sub.add_parser("mc-check", help="verify closed forms against Monte-Carlo oracles")
    _add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--source", required=True, help="labeled source CSV")
    p.add_argument("--target", default=None, help="unlabeled target CSV")
    p.add_argument("--draws", type=int, default=1_000_000)
    p.add_argument("--pair-seed", type=int, default=None)

    return parser


def _load_config_file(path):
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw or raw.startswith("#"):
                continue
            if "=" not in raw:
                raise ParseError(f"expected key=value, got {raw!r}", line=lineno)
            key, value = raw.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(parser, args, argv):
    if not getattr(args, "config", None):
        return args
    raw = _load_config_file(args.config)
    for key, value in raw.items():
        if not hasattr(args, key):
            raise ParseError(f"unknown config key {key!r}")
        flag = "--" + key.replace("_", "-")
        if any(a == flag or a.startswith(flag + "=") for a in argv):
            continue  # explicit flags win over the config file
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, value.lower() in ("1", "true", "yes"))
        elif isinstance(current, int):
            setattr(args, key, int(value))
        elif isinstance(current, float):
            setattr(args, key, float(value))
        elif current is None:
            # untyped optionals (e.g. pair-seed): best-effort numeric parse
            for convert in (int, float):
                try:
                    value = convert(value)
                    break
                except ValueError:
                    pass
            setattr(args, key, value)
        else:
            setattr(args, key, value)
    return args


# --- training helpers shared by train/experiment ---


def _train_one(algo, source, target, args, seed, pair_seed):
    cfg = TrainConfig(
        delta=args.delta,
        max_iters=args.max_iters,
        grad_tol=args.grad_tol,
        restarts=args.restarts,
        seed=seed,
    )
    paired = None
    if algo == "dapbgd":
        if target is None:
            raise PBDAError("dapbgd requires --target")
        paired = ds.pair(source, target, seed=pair_seed)

    def run(kernel_config):
        if algo == "pbgd":
            return train_pbgd(source, cfg, kernel_config)
        return train_dapbgd(paired, cfg, kernel_config)

    if args.kernel == "none":
        report = run(None)
    elif args.kernel == "linear":
        report = run(KernelConfig("linear"))
    elif str(args.gamma) == "auto":
        report, _ = select_gamma(run, _parse_floats(args.gammas))
    else:
        report = run(KernelConfig("gaussian", float(args.gamma)))
    return report, paired


def _write_trace(path, report):
    rows = [
        (i, r.objective, r.bstar, r.source_risk, r.disagreement, r.step, r.grad_norm)
        for i, r in enumerate(report.trace)
    ]
    _write_csv(path, TRACE_HEADER, rows)


# --- subcommands ---


def cmd_generate(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    source = ds.generate_moons(args.n, args.noise, args.seed)
    target = ds.rotate(ds.generate_moons(args.n, args.noise, args.seed + 1), args.angle)
    ds.save_csv(source, out / "source.csv")
    ds.save_csv(target.unlabeled(), out / "target.csv")
    print(f"wrote {out / 'source.csv'} and {out / 'target.csv'}")
    return EXIT_OK


def cmd_train(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    source = ds.load_csv(args.source)
    if not isinstance(source, ds.LabeledSample):
        raise ParseError("--source must be a labeled CSV")
    target = None
    if args.target is not None:
        target = ds.load_csv(args.target)
        if isinstance(target, ds.LabeledSample):
            target = target.unlabeled()
    pair_seed = args.seed if args.pair_seed is None else args.pair_seed
    report, _ = _train_one(args.algo, source, target, args, args.seed, pair_seed)
    save_model(report.model, out / "model.txt", algorithm=args.algo)
    _write_trace(out / "trace.csv", report)
    print(
        f"{args.algo}: objective={report.objective:.6f} "
        f"iterations={report.iterations} converged={report.converged}"
    )
    if args.strict and not report.converged:
        print("non-convergence under --strict", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def cmd_evaluate(args):
    model = load_model(args.model)
    sample = ds.load_csv(args.data)
    if not isinstance(sample, ds.LabeledSample):
        raise ParseError("--data must be a labeled CSV")
    acc = model_accuracy(model, sample)
    print(f"accuracy={acc:.6f}")
    print(f"error_rate={1.0 - acc:.6f}")
    return EXIT_OK


def _boundary_grid(source, target):
    pts = np.vstack([source.X, target.X])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    pad = BOUNDARY_PAD * (hi - lo)
    xs = np.linspace(lo[0] - pad[0], hi[0] + pad[0], BOUNDARY_GRID)
    ys = np.linspace(lo[1] - pad[1], hi[1] + pad[1], BOUNDARY_GRID)
    return xs, ys


def _write_boundary(out, angle, model, source, target):
    xs, ys = _boundary_grid(source, target)
    gx, gy = np.meshgrid(xs, ys)
    grid_points = np.column_stack([gx.ravel(), gy.ravel()])
    preds = model_predict(model, grid_points).reshape(BOUNDARY_GRID, BOUNDARY_GRID)
    rows = []
    for iy in range(BOUNDARY_GRID):
        for ix in range(BOUNDARY_GRID):
            rows.append((xs[ix], ys[iy], int(preds[iy, ix])))
    angle_tag = format(angle, "g")
    _write_csv(out / f"boundary_{angle_tag}.csv", BOUNDARY_HEADER, rows)
    write_boundary_svg(out / f"boundary_{angle_tag}.svg", xs, ys, preds, source, target)


def cmd_experiment(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    angles = _parse_floats(args.angles)
    algos = _parse_names(args.algos)
    if not angles or not algos:
        raise PBDAError("experiment needs nonempty --angles and --algos")
    for algo in algos:
        if algo not in ("pbgd", "dapbgd"):
            raise PBDAError(f"unknown algorithm {algo!r}")

    # cells[(algo, angle)] accumulates per-repeat measurements
    cells = {(a, ang): {"acc": [], "risk": [], "dis": [], "bound": [], "ms": []}
             for a in algos for ang in angles}
    boundary_models = {}

    for rep in range(args.repeats):
        base = args.seed + 101 * rep
        for angle in angles:
            source = ds.generate_moons(args.n, args.noise, base)
            target = ds.rotate(ds.generate_moons(args.n, args.noise, base + 1), angle).unlabeled()
            test = ds.rotate(ds.generate_moons(args.test_n, args.noise, base + 2), angle)
            paired_for_eval = ds.pair(source, target, seed=base + 3)
            for algo in algos:
                started = time.perf_counter()
                report, _ = _train_one(algo, source, target, args, base + 4, base + 3)
                elapsed_ms = (time.perf_counter() - started) * 1000.0
                cell = cells[(algo, angle)]
                cell["acc"].append(100.0 * model_accuracy(report.model, test))
                cell["risk"].append(model_gibbs_risk(report.model, source))
                cell["dis"].append(model_disagreement(report.model, paired_for_eval))
                cell["bound"].append(report.objective)
                cell["ms"].append(elapsed_ms if args.timings else 0.0)
                if rep == 0 and (algo == "dapbgd" or "dapbgd" not in algos):
                    boundary_models[angle] = (report.model, source, target)

    results = []
    tradeoff = []
    for algo in sorted(algos):
        for angle in sorted(angles):
            cell = cells[(algo, angle)]
            results.append(
                (
                    algo,
                    format(angle, "g"),
                    float(np.mean(cell["acc"])),
                    float(np.mean(cell["risk"])),
                    float(np.mean(cell["dis"])),
                    float(np.mean(cell["bound"])),
                    float(np.mean(cell["ms"])),
                )
            )
            tradeoff.append(
                (algo, format(angle, "g"), float(np.mean(cell["risk"])), float(np.mean(cell["dis"])))
            )
    _write_csv(out / "results.csv", RESULTS_HEADER, results)
    _write_csv(out / "tradeoff.csv", TRADEOFF_HEADER, tradeoff)
    for angle, (model, source, target) in boundary_models.items():
        _write_boundary(out, angle, model, source, target)
    for row in results:
        print(f"{row[0]} angle={row[1]}: accuracy={row[2]:.1f}% bound={row[5]:.4f}")
    return EXIT_OK


def cmd_mc_check(args):
    model = load_model(args.model)
    source = ds.load_csv(args.source)
    if not isinstance(source, ds.LabeledSample):
        raise ParseError("--source must be a labeled CSV")
    tol = 3.5 / math.sqrt(args.draws) + 1e-3

    if args.target is not None:
        target = ds.load_csv(args.target)
        if isinstance(target, ds.LabeledSample):
            target = target.unlabeled()
        pair_seed = args.seed if args.pair_seed is None else args.pair_seed
        paired = ds.pair(source, target, seed=pair_seed)
        ms = model.margins(paired.Xs)
        mt = model.margins(paired.Xt)
        ys = paired.ys
        closed_risk = float(np.mean(phi(ys * ms)))
        closed_dis = float(np.mean(phi_dis(mt)) - np.mean(phi_dis(ms)))
        mc_risk, mc_dis, mc_loss = mc_from_margins(ms, ys, mt, args.draws, args.seed)
        checks = [
            ("gibbs_risk", closed_risk, mc_risk),
            ("disagreement", closed_dis, mc_dis),
            ("adaptation_loss", closed_risk + closed_dis, mc_loss),
        ]
    else:
        ms = model.margins(source.X)
        closed_risk = float(np.mean(phi(source.y * ms)))
        mc_risk, _, _ = mc_from_margins(ms, source.y, ms[:0], args.draws, args.seed)
        checks = [("gibbs_risk", closed_risk, mc_risk)]

    lines = [f"draws={args.draws} tolerance={tol:.6g}"]
    ok = True
    for name, closed, mc in checks:
        passed = abs(closed - mc) <= tol
        ok = ok and passed
        lines.append(
            f"{name}: closed={closed:.6f} mc={mc:.6f} "
            f"diff={abs(closed - mc):.6f} {'PASS' if passed else 'FAIL'}"
        )
    report_text = "\n".join(lines)
    print(report_text)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "mc_check.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report_text + "\n")
    return EXIT_OK if ok else EXIT_VERIFICATION


_COMMANDS = {
    "generate": cmd_generate,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "experiment": cmd_experiment,
    "mc-check": cmd_mc_check,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    try:
        args = _apply_config(parser, args, argv)
        return _COMMANDS[args.command](args)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except PBDAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
