"""Experiment runner: data preparation, per-seed training runs, artifact
emission and cross-method comparison tables.

Every run directory holds a manifest with the full configuration and a
hash of the data-defining fields; re-running from a manifest reproduces
the metrics CSV byte for byte, and comparisons refuse to aggregate runs
whose data hashes disagree.
"""

import hashlib
import json
import os
import csv as csv_mod
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .data import (
    WindowBank,
    apply_scaler,
    attach_phases,
    decimate,
    fit_scaler,
    load_csv,
    normalize_rul,
    retain_post_onset,
)
from .methods import (
    MmdConfig,
    TrainConfig,
    default_epochs,
    extract_features,
    predict_rul,
    train,
)
from .metrics import nasa_score, pca_project, proxy_a_distance, rmse, silhouette
from .nn import BACKEND
from .nn.serialize import load_arrays, save_arrays
from .synth import DegradationSpec, gen_fleet

TASKS = {"S2M": ("short", "medium"), "S2L": ("short", "long"), "M2L": ("medium", "long")}
ENV_OUTPUT_ROOT = "OPSALIGN_RUNS"

METRIC_COLUMNS = [
    "task", "method", "seed", "data_hash", "epochs",
    "n_source_windows", "n_target_windows",
    "rmse_norm", "rmse_cycles", "nasa_total", "nasa_mean",
    "pad", "silhouette_phase_pca",
]


@dataclass(frozen=True)
class ExperimentConfig:
    task: str = "S2L"
    method: str = "dann"
    synthetic: bool = True
    data_seed: int = 0
    units_per_class: int = 5
    degradation: dict = None          # overrides for DegradationSpec fields
    source_csv: str = None
    target_csv: str = None
    seeds: tuple = (0,)
    epochs: int = None                # None: per-task defaults
    batch_size: int = 256
    base_lr: float = 0.01
    momentum: float = 0.9
    lambda_domain: float = 1.0
    lambda_phase: float = 1.0
    n_phases: int = 3
    rul_loss: str = "rul_rmse"
    mmd_weight: float = 1.0
    mmd_bandwidths: tuple = (0.01, 0.1, 1.0, 10.0, 100.0)
    eval_holdout_unit: bool = False
    embed_per_domain: int = 1500
    output_dir: str = None

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"config.task: unknown task {self.task!r}; expected one of {sorted(TASKS)}")
        if not self.synthetic and not (self.source_csv and self.target_csv):
            raise ValueError("config.source_csv/target_csv: required when synthetic is false")
        if isinstance(self.seeds, list):
            object.__setattr__(self, "seeds", tuple(self.seeds))
        if isinstance(self.mmd_bandwidths, list):
            object.__setattr__(self, "mmd_bandwidths", tuple(self.mmd_bandwidths))

    @property
    def source_class(self):
        return TASKS[self.task][0]

    @property
    def target_class(self):
        return TASKS[self.task][1]

    def resolved_epochs(self, method=None):
        if self.epochs is not None:
            return self.epochs
        return default_epochs(method or self.method, self.source_class, self.target_class)

    def data_fields(self):
        return {
            "task": self.task,
            "synthetic": self.synthetic,
            "data_seed": self.data_seed,
            "units_per_class": self.units_per_class,
            "degradation": self.degradation,
            "source_csv": self.source_csv,
            "target_csv": self.target_csv,
            "eval_holdout_unit": self.eval_holdout_unit,
        }

    def data_hash(self):
        blob = json.dumps(self.data_fields(), sort_keys=True).encode()
        if not self.synthetic:
            for path in (self.source_csv, self.target_csv):
                blob += hashlib.sha256(Path(path).read_bytes()).digest()
        return hashlib.sha256(blob).hexdigest()[:16]

    def config_hash(self):
        blob = json.dumps(asdict(self), sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def output_root(config):
    if config.output_dir:
        return Path(config.output_dir)
    return Path(os.environ.get(ENV_OUTPUT_ROOT, "runs"))


def _format(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv_rows(path, columns, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv_mod.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format(row[c]) for c in columns])


# --- data preparation ---

def _load_domain_series(config, which):
    if config.synthetic:
        cls = config.source_class if which == "source" else config.target_class
        degradation = DegradationSpec(**(config.degradation or {}))
        return gen_fleet(cls, config.units_per_class, config.data_seed, degradation=degradation)
    path = config.source_csv if which == "source" else config.target_csv
    return load_csv(path)


def prepare_task_banks(config):
    """Full preprocessing for one task.

    Phases are labeled at the raw rate, everything is decimated, the
    scaler is fitted on the post-onset source data only, RUL labels are
    attached, and window banks are built: a labeled source bank, an
    unlabeled target bank for training, and a labeled target bank that
    only the evaluation path sees.
    """
    processed = {}
    for which in ("source", "target"):
        series = [attach_phases(s) for s in _load_domain_series(config, which)]
        series = [decimate(s) for s in series]
        series = [retain_post_onset(normalize_rul(s)) for s in series]
        processed[which] = series

    scaler = fit_scaler(processed["source"], domain="source")
    source_series = [apply_scaler(s, scaler) for s in processed["source"]]
    target_series = [apply_scaler(s, scaler) for s in processed["target"]]

    train_target_series = target_series
    eval_target_series = target_series
    if config.eval_holdout_unit:
        if len(target_series) < 2:
            raise ValueError("held-out-unit evaluation needs at least 2 target units")
        train_target_series = target_series[:-1]
        eval_target_series = target_series[-1:]

    source_bank = WindowBank.from_series(source_series, domain="source")
    target_bank = WindowBank.from_series(train_target_series, domain="target")
    eval_bank = WindowBank.from_series(eval_target_series, domain="target-eval", with_labels=True)
    assert target_bank.rul is None  # training must never see target labels
    return source_bank, target_bank, eval_bank


def make_train_config(config, method, seed):
    return TrainConfig(
        method=method,
        epochs=config.resolved_epochs(method),
        batch_size=config.batch_size,
        base_lr=config.base_lr,
        momentum=config.momentum,
        lambda_domain=config.lambda_domain,
        lambda_phase=config.lambda_phase,
        n_phases=config.n_phases,
        rul_loss=config.rul_loss,
        seed=seed,
        mmd=MmdConfig(bandwidths=config.mmd_bandwidths, weight=config.mmd_weight),
    )


# --- single run ---

def run_single(config, banks, seed):
    """Train one model and evaluate it on the target domain."""
    source_bank, target_bank, eval_bank = banks
    train_config = make_train_config(config, config.method, seed)
    result = train(source_bank, target_bank, train_config)
    bundle = result.bundle

    yhat_norm, _ = predict_rul(bundle, eval_bank)
    y_norm = eval_bank.rul
    spans = eval_bank.window_spans()
    yhat_cycles = yhat_norm * spans
    y_cycles = y_norm * spans
    nasa_total, nasa_mean = nasa_score(yhat_cycles, y_cycles)

    emb_rng = np.random.default_rng(np.random.SeedSequence([seed, 33]))
    n_embed = config.embed_per_domain
    idx_s = emb_rng.choice(len(source_bank), size=min(n_embed, len(source_bank)), replace=False)
    idx_t = emb_rng.choice(len(eval_bank), size=min(n_embed, len(eval_bank)), replace=False)
    emb_s = extract_features(bundle, source_bank, idx=idx_s)
    emb_t = extract_features(bundle, eval_bank, idx=idx_t)
    pad = proxy_a_distance(emb_s, emb_t)

    pooled = np.concatenate([emb_s, emb_t])
    domains = np.array([0] * len(idx_s) + [1] * len(idx_t))
    phases = np.concatenate([source_bank.phase[idx_s], eval_bank.phase[idx_t]])
    coords, explained, _ = pca_project(pooled, k=2)
    sil = silhouette(coords, phases)

    row = {
        "task": config.task,
        "method": config.method,
        "seed": seed,
        "data_hash": config.data_hash(),
        "epochs": train_config.epochs,
        "n_source_windows": len(source_bank),
        "n_target_windows": len(target_bank),
        "rmse_norm": rmse(yhat_norm, y_norm),
        "rmse_cycles": rmse(yhat_cycles, y_cycles),
        "nasa_total": nasa_total,
        "nasa_mean": nasa_mean,
        "pad": pad,
        "silhouette_phase_pca": sil,
    }
    artifacts = {
        "bundle": bundle,
        "result": result,
        "predictions": _per_unit_traces(eval_bank, yhat_norm, yhat_cycles, y_norm, y_cycles),
        "embeddings": {
            "source": emb_s, "target": emb_t,
            "coords": coords, "domains": domains, "phases": phases,
            "explained": explained,
        },
    }
    return row, artifacts


def _per_unit_traces(bank, yhat_norm, yhat_cycles, y_norm, y_cycles):
    """Per-(unit, cycle) mean prediction rows, sorted by unit then cycle."""
    rows = []
    for u, unit_id in enumerate(bank.unit_ids):
        unit_mask = bank.unit_idx == u
        for cycle in np.unique(bank.cycle[unit_mask]):
            sel = unit_mask & (bank.cycle == cycle)
            rows.append({
                "unit_id": unit_id,
                "cycle": int(cycle),
                "rul_true_norm": float(y_norm[sel][0]),
                "rul_pred_norm": float(yhat_norm[sel].mean()),
                "rul_true_cycles": float(y_cycles[sel][0]),
                "rul_pred_cycles": float(yhat_cycles[sel].mean()),
            })
    return rows


# --- full experiment with artifact emission ---

def run_experiment(config, banks=None):
    """Run every configured seed, write artifacts, return the metric rows."""
    if banks is None:
        banks = prepare_task_banks(config)
    root = output_root(config) / f"{config.task}_{config.method}"
    root.mkdir(parents=True, exist_ok=True)
    manifest = {
        "config": asdict(config),
        "config_hash": config.config_hash(),
        "data_hash": config.data_hash(),
        "versions": {"opsalign": __version__, "numpy": np.__version__, "conv_backend": BACKEND},
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")

    rows = []
    for seed in config.seeds:
        row, artifacts = run_single(config, banks, seed)
        rows.append(row)
        seed_dir = root / f"seed{seed}"
        seed_dir.mkdir(exist_ok=True)
        write_csv_rows(seed_dir / "metrics.csv", METRIC_COLUMNS, [row])
        write_csv_rows(
            seed_dir / "predictions.csv",
            ["unit_id", "cycle", "rul_true_norm", "rul_pred_norm", "rul_true_cycles", "rul_pred_cycles"],
            artifacts["predictions"],
        )
        emb = artifacts["embeddings"]
        proj_rows = [
            {"x1": float(c[0]), "x2": float(c[1]), "domain": int(d), "phase": int(p)}
            for c, d, p in zip(emb["coords"], emb["domains"], emb["phases"])
        ]
        write_csv_rows(seed_dir / "embeddings.csv", ["x1", "x2", "domain", "phase"], proj_rows)
        save_arrays(seed_dir / "embeddings_raw.bin", [
            ("source", emb["source"]),
            ("target", emb["target"]),
            ("source_phase", emb["phases"][:len(emb["source"])].astype(np.float64)),
            ("target_phase", emb["phases"][len(emb["source"]):].astype(np.float64)),
        ])
        artifacts["bundle"].save(seed_dir / "model.bin")
        trace = artifacts["result"].epoch_trace
        if trace:
            cols = sorted({k for row_ in trace for k in row_})
            write_csv_rows(seed_dir / "train_log.csv", cols,
                           [{c: t.get(c, "") for c in cols} for t in trace])
    write_csv_rows(root / "summary.csv", METRIC_COLUMNS, rows)
    return rows, root


def load_manifest_config(path):
    data = json.loads(Path(path).read_text())
    cfg = data["config"] if "config" in data else data
    cfg.pop("config_hash", None)
    if cfg.get("degradation") is not None:
        cfg["degradation"] = dict(cfg["degradation"])
    cfg["seeds"] = tuple(cfg["seeds"])
    cfg["mmd_bandwidths"] = tuple(cfg["mmd_bandwidths"])
    return ExperimentConfig(**cfg)


# --- method comparison ---

def compare_methods(run_dirs, baseline="source-only"):
    """Aggregate completed runs into a ranking table.

    Every run directory must hold a summary.csv and a manifest; runs over
    different data (mismatched data hashes) refuse to aggregate. Output
    rows carry the median and interquartile range of the target RMSE per
    method plus the relative improvement over the baseline's median.
    """
    runs = []
    for d in run_dirs:
        d = Path(d)
        manifest = json.loads((d / "manifest.json").read_text())
        with open(d / "summary.csv", newline="") as fh:
            rows = list(csv_mod.DictReader(fh))
        if not rows:
            raise ValueError(f"{d}: empty summary")
        runs.append((manifest, rows))
    if len(runs) < 2:
        raise ValueError("need at least two completed runs to compare")
    hashes = {m["data_hash"] for m, _ in runs}
    if len(hashes) != 1:
        raise ValueError(f"mismatched data manifests between compared runs: {sorted(hashes)}")

    table = []
    by_method = {}
    for manifest, rows in runs:
        method = rows[0]["method"]
        vals = np.array([float(r["rmse_cycles"]) for r in rows])
        by_method[method] = vals
    base_median = np.median(by_method[baseline]) if baseline in by_method else None
    for method, vals in by_method.items():
        q1, med, q3 = np.percentile(vals, [25, 50, 75])
        entry = {
            "method": method,
            "n_seeds": vals.size,
            "rmse_cycles_median": float(med),
            "rmse_cycles_iqr": float(q3 - q1),
            "improvement_vs_baseline_pct": (
                float(100.0 * (base_median - med) / base_median)
                if base_median is not None else float("nan")
            ),
        }
        table.append(entry)
    table.sort(key=lambda r: r["rmse_cycles_median"])
    return table
