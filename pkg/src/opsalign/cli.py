"""Command-line entry points: gen, prep, run, compare, pad, pca."""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .data import WindowBank, apply_scaler, attach_phases, decimate, fit_scaler, load_csv, normalize_rul, retain_post_onset, write_csv
from .experiment import (
    ExperimentConfig,
    compare_methods,
    load_manifest_config,
    output_root,
    prepare_task_banks,
    run_experiment,
    write_csv_rows,
)
from .methods.models import METHODS
from .metrics import pca_project, proxy_a_distance
from .nn.serialize import load_arrays
from .synth import DegradationSpec, gen_fleet


def parse_config_file(path):
    """Flat `key = value` text; values are JSON literals when they parse.

    Dots in keys nest (degradation.linear_slope = 0.004). Lines starting
    with '#' and blank lines are ignored.
    """
    out = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            parsed = json.loads(value)
        except json.JSONDecodeError:
            parsed = value
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = parsed
    return out


def parse_seed_list(text):
    """"0..4" or "0,2,5" or "3"."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(s) for s in text.split(","))


def _config_from_args(args):
    fields = {}
    if args.config:
        fields.update(parse_config_file(args.config))
    overrides = {
        "task": args.task,
        "method": args.method,
        "data_seed": args.data_seed,
        "units_per_class": args.units,
        "source_csv": args.source_csv,
        "target_csv": args.target_csv,
        "epochs": args.epochs,
        "batch_size": args.batch_size,
        "base_lr": args.lr,
        "momentum": args.momentum,
        "lambda_domain": args.lambda_domain,
        "lambda_phase": args.lambda_phase,
        "output_dir": args.out,
    }
    for key, value in overrides.items():
        if value is not None:
            fields[key] = value
    if args.seeds is not None:
        fields["seeds"] = parse_seed_list(args.seeds)
    if args.synthetic:
        fields["synthetic"] = True
    if args.source_csv or args.target_csv:
        fields["synthetic"] = False
    if args.holdout_unit:
        fields["eval_holdout_unit"] = True
    try:
        return ExperimentConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise SystemExit(f"invalid configuration: {exc}") from None


def cmd_gen(args):
    degradation = DegradationSpec()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for cls in args.classes.split(","):
        fleet = gen_fleet(cls.strip(), args.units, args.seed, degradation=degradation)
        path = out / f"{cls.strip()}_{args.seed}.csv"
        write_csv(path, fleet, metadata={"flight_class": cls.strip(), "seed": args.seed})
        print(f"wrote {path} ({sum(s.n_timesteps for s in fleet)} rows, {len(fleet)} units)")
    return 0


def cmd_prep(args):
    series = [attach_phases(s) for s in load_csv(args.csv)]
    series = [decimate(s) for s in series]
    series = [retain_post_onset(normalize_rul(s)) for s in series]
    if args.scaler:
        scaler_data = load_arrays(args.scaler)
        from .data import ScalerParams
        scaler = ScalerParams(scaler_data["minima"], scaler_data["maxima"])
    else:
        scaler = fit_scaler(series, domain=args.domain)
        if args.save_scaler:
            from .nn.serialize import save_arrays
            save_arrays(args.save_scaler, [("minima", scaler.minima), ("maxima", scaler.maxima)])
    series = [apply_scaler(s, scaler) for s in series]
    with_labels = args.domain == "source"
    bank = WindowBank.from_series(series, domain=args.domain, with_labels=with_labels)
    bank.save(args.out)
    print(f"cached {len(bank)} windows from {len(series)} units -> {args.out}")
    return 0


def cmd_run(args):
    if args.manifest:
        config = load_manifest_config(args.manifest)
        if args.out:
            config = dataclasses.replace(config, output_dir=args.out)
    else:
        config = _config_from_args(args)
    rows, root = run_experiment(config)
    for row in rows:
        print(f"seed {row['seed']}: rmse_cycles={row['rmse_cycles']:.4f} "
              f"nasa_mean={row['nasa_mean']:.4f} pad={row['pad']:.3f}")
    print(f"artifacts in {root}")
    return 0


def cmd_compare(args):
    table = compare_methods(args.runs, baseline=args.baseline)
    columns = ["method", "n_seeds", "rmse_cycles_median", "rmse_cycles_iqr",
               "improvement_vs_baseline_pct"]
    write_csv_rows(args.out, columns, table)
    width = max(len(r["method"]) for r in table)
    for r in table:
        print(f"{r['method']:<{width}}  median={r['rmse_cycles_median']:.4f}  "
              f"iqr={r['rmse_cycles_iqr']:.4f}  vs-baseline={r['improvement_vs_baseline_pct']:+.1f}%")
    print(f"table written to {args.out}")
    return 0


def _load_run_embeddings(run_dir):
    data = load_arrays(Path(run_dir) / "embeddings_raw.bin")
    return data["source"], data["target"], data["source_phase"], data["target_phase"]


def cmd_pad(args):
    source, target, _, _ = _load_run_embeddings(args.run)
    value = proxy_a_distance(source, target)
    print(f"proxy A-distance: {value:.4f}")
    return 0


def cmd_pca(args):
    source, target, ph_s, ph_t = _load_run_embeddings(args.run)
    pooled = np.concatenate([source, target])
    coords, explained, _ = pca_project(pooled, k=2)
    domains = np.array([0] * len(source) + [1] * len(target))
    phases = np.concatenate([ph_s, ph_t]).astype(int)
    rows = [
        {"x1": float(c[0]), "x2": float(c[1]), "domain": int(d), "phase": int(p)}
        for c, d, p in zip(coords, domains, phases)
    ]
    write_csv_rows(args.out, ["x1", "x2", "domain", "phase"], rows)
    print(f"explained variance: {explained[0]:.3f}, {explained[1]:.3f}; wrote {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="opsalign",
        description="Phase-aware domain adaptation experiments for RUL regression",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate synthetic fleets as schema CSVs")
    p.add_argument("--classes", default="short,medium,long")
    p.add_argument("--units", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("prep", help="preprocess a schema CSV into a cached window bank")
    p.add_argument("--csv", required=True)
    p.add_argument("--domain", choices=["source", "target"], required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--scaler", help="apply a previously saved scaler instead of fitting")
    p.add_argument("--save-scaler", help="save the fitted scaler for the target prep")
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("run", help="run one method on one adaptation task")
    p.add_argument("--task", choices=sorted(TASKS_HELP := ("S2M", "S2L", "M2L")))
    p.add_argument("--method", choices=list(METHODS))
    p.add_argument("--synthetic", action="store_true")
    p.add_argument("--data-seed", type=int, dest="data_seed")
    p.add_argument("--units", type=int)
    p.add_argument("--source-csv", dest="source_csv")
    p.add_argument("--target-csv", dest="target_csv")
    p.add_argument("--seeds", help='e.g. "0..4" or "0,3,7"')
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int, dest="batch_size")
    p.add_argument("--lr", type=float)
    p.add_argument("--momentum", type=float)
    p.add_argument("--lambda-domain", type=float, dest="lambda_domain")
    p.add_argument("--lambda-phase", type=float, dest="lambda_phase")
    p.add_argument("--holdout-unit", action="store_true", dest="holdout_unit")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--manifest", help="re-run from a manifest.json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="aggregate runs into a ranking table")
    p.add_argument("--runs", nargs="+", required=True)
    p.add_argument("--baseline", default="source-only")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("pad", help="recompute the proxy A-distance of a run's embeddings")
    p.add_argument("--run", required=True, help="a seed directory of a completed run")
    p.set_defaults(func=cmd_pad)

    p = sub.add_parser("pca", help="export the 2-component projection of a run's embeddings")
    p.add_argument("--run", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pca)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
