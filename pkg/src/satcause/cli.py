"""Config-driven batch pipeline: ingest, preprocess, train, attribute, causal.

Subcommands:

* ``run``      full pipeline on a CSV, emits the report bundle
* ``simulate`` generate a synthetic dataset + schema + ground truth
* ``causal``   causal stage only, on an already-numeric matrix CSV
* ``inspect``  grouped summary statistics of a CSV

All randomness flows from the config seed through stage-name hashing
(see satcause.seeding). Reruns with the same config and input produce
byte-identical outputs. Exit codes: 0 ok, 2 config error, 3 data error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import hashlib
import io
import json
import logging
import shutil
import sys
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import attribution, causal, evaluation, synth
from .errors import ConfigError, DataError, SatcauseError, SchemaError
from .learners import FAMILIES, ModelSpec, predict_scores
from .preprocess import (
    FeatureMatrix,
    PreprocessReport,
    apply_imputation,
    apply_preprocess,
    correlation_screen,
    deduplicate,
    fit_preprocess,
    split_indices,
)
from .seeding import derive_seed
from .tabular import (
    default_airline_schema,
    load_csv,
    schema_from_obj,
    schema_to_obj,
    summarize,
    write_csv,
)

logger = logging.getLogger(__name__)

_ATTRIBUTION_ORDER = ("decision_tree", "gradient_boosting", "random_forest")


# ---------------------------------------------------------------------------
# config


@dataclass
class TreatmentSettings:
    column: str
    threshold: float = 4
    propensity_family: str = "logistic_regression"
    clip: tuple[float, float] | None = None
    propensity_hyperparameters: dict[str, Any] = field(default_factory=dict)

    def slug(self) -> str:
        return "".join(c.lower() if c.isalnum() else "_" for c in self.column)


@dataclass
class RunConfig:
    input: str
    seed: int
    schema_path: str | None = None
    test_fraction: float = 0.2
    k_folds: int = 5
    models: dict[str, dict[str, Any]] = field(default_factory=dict)
    treatments: list[TreatmentSettings] = field(default_factory=list)
    collinearity_threshold: float = 0.9
    learning_curve_sizes: list[float] = field(default_factory=lambda: [0.25, 0.5, 0.75, 1.0])
    attribution_eval_instances: int = 500
    attribution_background_size: int = 100
    attribution_samples: int = 200
    output_dir: str = "satcause_out"

    def echo(self) -> dict:
        return {
            "input": self.input,
            "seed": self.seed,
            "schema_path": self.schema_path,
            "test_fraction": self.test_fraction,
            "k_folds": self.k_folds,
            "models": self.models,
            "treatments": [
                {
                    "column": t.column,
                    "threshold": t.threshold,
                    "propensity_family": t.propensity_family,
                    "clip": list(t.clip) if t.clip else None,
                    "propensity_hyperparameters": t.propensity_hyperparameters,
                }
                for t in self.treatments
            ],
            "collinearity_threshold": self.collinearity_threshold,
            "learning_curve_sizes": self.learning_curve_sizes,
            "attribution": {
                "eval_instances": self.attribution_eval_instances,
                "background_size": self.attribution_background_size,
                "n_samples": self.attribution_samples,
            },
        }


def _require(payload: dict, key: str) -> Any:
    if key not in payload:
        raise ConfigError(f"config is missing required key {key!r}")
    return payload[key]


def parse_run_config(payload: dict, out_dir_override: str | None = None) -> RunConfig:
    if not isinstance(payload, dict):
        raise ConfigError("run config must be a JSON object")
    seed = _require(payload, "seed")
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("seed must be an integer (no wall-clock defaults)")

    cfg = RunConfig(input=str(_require(payload, "input")), seed=seed)
    cfg.schema_path = payload.get("schema")
    cfg.test_fraction = float(payload.get("test_fraction", cfg.test_fraction))
    if not (0.0 < cfg.test_fraction < 1.0):
        raise ConfigError(f"test_fraction must lie in (0, 1), got {cfg.test_fraction}")
    cfg.k_folds = payload.get("k_folds", cfg.k_folds)
    if not isinstance(cfg.k_folds, int) or cfg.k_folds < 2:
        raise ConfigError(f"k_folds must be an integer >= 2, got {cfg.k_folds!r}")

    models = payload.get("models", {})
    if not isinstance(models, dict):
        raise ConfigError("models must map family name to a hyperparameter grid")
    for family in models:
        if family not in FAMILIES:
            raise ConfigError(f"unknown model family {family!r}")
    cfg.models = models

    raw_treatments = payload.get("treatments", [])
    if isinstance(raw_treatments, dict):
        raw_treatments = [raw_treatments]
    for entry in raw_treatments:
        t = TreatmentSettings(
            column=str(_require(entry, "column")),
            threshold=float(entry.get("threshold", 4)),
            propensity_family=entry.get("propensity_family", "logistic_regression"),
            clip=tuple(entry["clip"]) if entry.get("clip") else None,
            propensity_hyperparameters=dict(entry.get("propensity_hyperparameters", {})),
        )
        if t.propensity_family not in causal.PROPENSITY_FAMILIES:
            raise ConfigError(f"unsupported propensity family {t.propensity_family!r}")
        if t.clip is not None and t.clip[0] >= t.clip[1]:
            raise ConfigError(f"clip bounds must satisfy min < max, got {t.clip}")
        cfg.treatments.append(t)

    cfg.collinearity_threshold = float(
        payload.get("collinearity_threshold", cfg.collinearity_threshold)
    )
    if not (0.0 < cfg.collinearity_threshold <= 1.0):
        raise ConfigError("collinearity_threshold must lie in (0, 1]")
    cfg.learning_curve_sizes = [float(s) for s in payload.get("learning_curve_sizes", cfg.learning_curve_sizes)]
    if any(not (0.0 < s <= 1.0) for s in cfg.learning_curve_sizes):
        raise ConfigError("learning_curve_sizes must lie in (0, 1]")

    attr = payload.get("attribution", {})
    cfg.attribution_eval_instances = int(attr.get("eval_instances", cfg.attribution_eval_instances))
    cfg.attribution_background_size = int(attr.get("background_size", cfg.attribution_background_size))
    cfg.attribution_samples = int(attr.get("n_samples", cfg.attribution_samples))

    cfg.output_dir = out_dir_override or payload.get("output_dir", cfg.output_dir)
    return cfg


def expand_grid(grid: dict[str, Any]) -> tuple[list[dict[str, Any]], dict[str, Any]]:
    """Split a config grid into candidate dicts x fixed base parameters.

    List-valued entries are swept (cartesian product); scalars are fixed.
    """
    swept = {k: v for k, v in grid.items() if isinstance(v, list)}
    base = {k: v for k, v in grid.items() if not isinstance(v, list)}
    if not swept:
        return [{}], base
    keys = sorted(swept)
    candidates = [dict(zip(keys, combo)) for combo in product(*(swept[k] for k in keys))]
    return candidates, base


# ---------------------------------------------------------------------------
# hashed output files


def _fmt_cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_hashed_csv(
    path: Path, seed: int, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> None:
    """CSV whose first line carries the seed and a hash of the rest."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_cell(v) for v in row])
    body = buf.getvalue()
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    path.write_text(f"# seed={seed} sha256={digest}\n{body}", encoding="utf-8")


def read_hashed_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    """Read a hashed CSV back, verifying its content hash."""
    text = path.read_text(encoding="utf-8")
    meta, _, body = text.partition("\n")
    if not meta.startswith("# seed="):
        raise DataError(f"{path}: missing metadata line")
    stated = meta.rsplit("sha256=", 1)[-1]
    if hashlib.sha256(body.encode("utf-8")).hexdigest() != stated:
        raise DataError(f"{path}: content hash mismatch")
    rows = list(csv.reader(io.StringIO(body)))
    return rows[0], rows[1:]


def write_hashed_json(path: Path, seed: int, payload: dict) -> None:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    doc = {"seed": seed, "content_hash": digest}
    doc.update(payload)
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# run pipeline


@contextlib.contextmanager
def _stage(name: str):
    try:
        yield
    except SatcauseError as exc:
        raise type(exc)(f"stage {name}: {exc}") from exc
    except (ValueError, KeyError, OSError) as exc:
        raise DataError(f"stage {name}: {exc}") from exc


def _load_schema(cfg: RunConfig) -> list:
    if cfg.schema_path is None:
        return default_airline_schema()
    with open(cfg.schema_path, "r", encoding="utf-8") as fh:
        return schema_from_obj(json.load(fh))


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_pipeline(cfg: RunConfig) -> Path:
    """Execute the full pipeline; returns the output directory.

    Outputs are staged and only promoted on success; on a stage error the
    partial outputs land in <out>/quarantine and the error propagates.
    """
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    staging = out_dir / ".staging"
    if staging.exists():
        shutil.rmtree(staging)
    staging.mkdir()

    try:
        report = _run_stages(cfg, staging)
        files = sorted(p.name for p in staging.iterdir())
        report["files"] = {name: _sha256_file(staging / name) for name in files}
        write_hashed_json(staging / "report.json", cfg.seed, report)
        for p in staging.iterdir():
            target = out_dir / p.name
            if target.exists():
                target.unlink()
            p.rename(target)
        staging.rmdir()
    except BaseException:
        quarantine = out_dir / "quarantine"
        if quarantine.exists():
            shutil.rmtree(quarantine)
        staging.rename(quarantine)
        raise
    return out_dir


def _run_stages(cfg: RunConfig, staging: Path) -> dict:
    seed = cfg.seed
    report: dict[str, Any] = {"config": cfg.echo()}

    with _stage("ingest"):
        schema = _load_schema(cfg)
        data = load_csv(cfg.input, schema)
    with _stage("deduplicate"):
        data, removed = deduplicate(data)

    with _stage("split"):
        train_idx, test_idx = split_indices(
            data.n_rows, cfg.test_fraction, derive_seed(seed, "split")
        )
        train_ds = data.take_rows(train_idx)
        test_ds = data.take_rows(test_idx)

    with _stage("preprocess"):
        train_fm, params, imputation = fit_preprocess(train_ds)
        test_fm, clamped = apply_preprocess(params, test_ds)
        pairs = correlation_screen(train_ds, cfg.collinearity_threshold)
        dropped = sorted({p.drop_for_linear for p in pairs})
        pre_report = PreprocessReport(
            duplicates_removed=removed,
            imputation=imputation,
            scaling=params.scaling,
            encoding=params.encoding,
            collinear_pairs=pairs,
            dropped_for_linear=dropped,
            test_cells_clamped=clamped,
        )
        report["preprocess"] = pre_report.to_dict()
        (staging / "preprocess_params.json").write_text(params.to_json() + "\n", encoding="utf-8")

    best_models: dict[str, Any] = {}
    cv_reports: dict[str, dict] = {}
    metrics_rows: list[list[Any]] = []
    for family in sorted(cfg.models):
        with _stage(f"train:{family}"):
            candidates, base = expand_grid(cfg.models[family])
            fam_train = train_fm.drop_columns(dropped) if family == "logistic_regression" else train_fm
            fam_test = test_fm.drop_columns(dropped) if family == "logistic_regression" else test_fm
            cv_report, best = evaluation.grid_search(
                family,
                candidates,
                fam_train,
                cfg.k_folds,
                derive_seed(seed, "cv", family),
                base_hyperparameters=base,
            )
            holdout_scores = predict_scores(best, fam_test.X)
            holdout_labels = (holdout_scores >= 0.5).astype(np.uint8)
            cv_report.holdout_accuracy = evaluation.accuracy(fam_test.y, holdout_labels)
            cv_reports[family] = cv_report.to_dict()
            best_models[family] = (best, fam_train, fam_test)
            metrics_rows.append(
                [
                    family,
                    cv_report.mean_accuracies[cv_report.selected_index],
                    cv_report.holdout_accuracy,
                ]
            )

            roc = evaluation.roc_curve(holdout_scores, fam_test.y)
            write_hashed_csv(
                staging / f"roc_{family}.csv",
                seed,
                ["false_positive_rate", "true_positive_rate"],
                roc.to_rows(),
            )
            cv_reports[family]["holdout_auc"] = roc.auc

            curve = evaluation.learning_curve(
                ModelSpec(family, {**base, **cv_report.selected}, derive_seed(seed, "cv", family)),
                fam_train,
                cfg.learning_curve_sizes,
                cfg.k_folds,
                derive_seed(seed, "curve", family),
            )
            write_hashed_csv(
                staging / f"learning_curve_{family}.csv",
                seed,
                ["training_size", "mean_train_accuracy", "mean_validation_accuracy"],
                curve.to_rows(),
            )
    report["cv_reports"] = cv_reports
    if metrics_rows:
        write_hashed_csv(
            staging / "metrics.csv",
            seed,
            ["family", "cv_accuracy", "holdout_accuracy"],
            metrics_rows,
        )

    attribution_family = next((f for f in _ATTRIBUTION_ORDER if f in best_models), None)
    if attribution_family:
        with _stage("attribution"):
            model, fam_train, _ = best_models[attribution_family]
            gini = attribution.gini_importance(model)
            table, rows, eval_idx = attribution.shapley_summary(
                model,
                fam_train,
                fam_train.feature_names,
                n_instances=cfg.attribution_eval_instances,
                background_size=cfg.attribution_background_size,
                n_samples=cfg.attribution_samples,
                seed=derive_seed(seed, "shap"),
            )
            report["importance"] = {
                "family": attribution_family,
                "gini": gini.to_dict(),
                "shapley": table.to_dict(),
            }
            attr_rows = []
            for i, row_id in enumerate(eval_idx):
                for j, name in enumerate(fam_train.feature_names):
                    attr_rows.append([int(row_id), name, float(rows[i, j])])
            write_hashed_csv(
                staging / "attributions.csv",
                seed,
                ["train_row", "feature", "contribution"],
                attr_rows,
            )

    causal_reports: dict[str, dict] = {}
    for settings in cfg.treatments:
        slug = settings.slug()
        with _stage(f"causal:{settings.column}"):
            imputed_full = apply_imputation(data, params.medians)
            assignment = causal.dichotomize(imputed_full, settings.column, settings.threshold)
            full_fm, _ = apply_preprocess(params, data)
            source_cols = params.encoding.derived_from(settings.column)
            covariates = full_fm.drop_columns(source_cols)
            propensity = causal.fit_propensity(
                settings.propensity_family,
                covariates,
                assignment,
                derive_seed(seed, "propensity", settings.column),
                settings.propensity_hyperparameters,
            )
            weights = causal.ipw_weights(propensity, assignment, settings.clip)
            effect = causal.estimate_effects(full_fm.y, assignment, weights)
            balance = causal.smd_balance(covariates, assignment, weights)

            causal_reports[settings.column] = {
                "treatment": {"column": settings.column, "threshold": settings.threshold},
                "propensity_family": settings.propensity_family,
                "effects": effect.to_dict(),
                "balance": [b.to_dict() for b in balance],
            }
            ordered = sorted(balance, key=lambda b: -b.smd_unweighted)
            write_hashed_csv(
                staging / f"love_{slug}.csv",
                seed,
                ["covariate", "smd_unweighted", "smd_weighted", "constant"],
                [[b.covariate, b.smd_unweighted, b.smd_weighted, int(b.constant)] for b in ordered],
            )
            write_hashed_csv(
                staging / f"propensity_{slug}.csv",
                seed,
                ["row", "treated", "propensity", "weight"],
                [
                    [i, int(assignment.indicator[i]), float(propensity.scores[i]), float(weights.weights[i])]
                    for i in range(len(propensity.scores))
                ],
            )
            prop_roc = evaluation.roc_curve(propensity.scores, assignment.indicator)
            write_hashed_csv(
                staging / f"roc_propensity_{slug}.csv",
                seed,
                ["false_positive_rate", "true_positive_rate"],
                prop_roc.to_rows(),
            )
            causal_reports[settings.column]["propensity_auc"] = prop_roc.auc
    report["causal"] = causal_reports
    return report


# ---------------------------------------------------------------------------
# simulate


def run_simulate(payload: dict, out_dir_override: str | None) -> Path:
    try:
        config = synth.config_from_dict(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad synth config: {exc}") from exc
    out_dir = Path(out_dir_override or payload.get("output_dir", "satcause_synth"))
    out_dir.mkdir(parents=True, exist_ok=True)

    sd = synth.generate(config)
    dataset = synth.to_dataset(sd)
    write_csv(dataset, str(out_dir / "synth.csv"))
    (out_dir / "synth_schema.json").write_text(
        json.dumps(schema_to_obj(dataset.schema), indent=2) + "\n", encoding="utf-8"
    )
    write_hashed_json(
        out_dir / "synth_truth.json",
        config.seed,
        {
            "config": synth.config_to_dict(config),
            "true_ate": sd.true_ate,
            "true_ate_se": sd.true_ate_se,
            "n_treated": int(sd.treatment.sum()),
            "n_rows": config.n_rows,
        },
    )
    return out_dir


# ---------------------------------------------------------------------------
# causal-only


def _load_matrix_csv(path: str) -> tuple[list[str], np.ndarray]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        rows = [[float(c) for c in row] for row in reader if row]
    if not rows:
        raise DataError(f"{path}: no data rows")
    return header, np.asarray(rows, dtype=np.float64)


def run_causal_only(payload: dict, out_dir_override: str | None) -> Path:
    seed = _require(payload, "seed")
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("seed must be an integer")
    input_path = str(_require(payload, "input"))
    treatment_col = str(_require(payload, "treatment_column"))
    outcome_col = str(_require(payload, "outcome_column"))
    family = payload.get("propensity_family", "logistic_regression")
    if family not in causal.PROPENSITY_FAMILIES:
        raise ConfigError(f"unsupported propensity family {family!r}")
    clip = tuple(payload["clip"]) if payload.get("clip") else None
    if clip is not None and clip[0] >= clip[1]:
        raise ConfigError(f"clip bounds must satisfy min < max, got {clip}")
    out_dir = Path(out_dir_override or payload.get("output_dir", "satcause_causal"))
    out_dir.mkdir(parents=True, exist_ok=True)

    with _stage("causal"):
        header, matrix = _load_matrix_csv(input_path)
        for col in (treatment_col, outcome_col):
            if col not in header:
                raise DataError(f"column {col!r} not found in {input_path}")
        t_pos = header.index(treatment_col)
        y_pos = header.index(outcome_col)
        a_raw = matrix[:, t_pos]
        y_raw = matrix[:, y_pos]
        for name, col in ((treatment_col, a_raw), (outcome_col, y_raw)):
            if not np.isin(col, (0.0, 1.0)).all():
                raise DataError(f"column {name!r} must be binary 0/1")

        covariate_names = payload.get("covariates") or [
            h for h in header if h not in (treatment_col, outcome_col)
        ]
        missing = [c for c in covariate_names if c not in header]
        if missing:
            raise DataError(f"covariates not found: {missing}")
        cov_idx = [header.index(c) for c in covariate_names]
        indicator = a_raw.astype(np.uint8)
        n_treated = int(indicator.sum())
        if n_treated == 0 or n_treated == indicator.size:
            raise DataError("degenerate treatment: one group is empty")
        assignment = causal.TreatmentAssignment(
            source_column=treatment_col,
            threshold=0.5,
            indicator=indicator,
            n_treated=n_treated,
            n_control=int(indicator.size - n_treated),
        )
        covariates = FeatureMatrix(
            tuple(covariate_names), matrix[:, cov_idx], y_raw.astype(np.uint8)
        )
        propensity = causal.fit_propensity(
            family,
            covariates,
            assignment,
            derive_seed(seed, "propensity", treatment_col),
            payload.get("propensity_hyperparameters"),
        )
        weights = causal.ipw_weights(propensity, assignment, clip)
        effect = causal.estimate_effects(y_raw, assignment, weights)
        balance = causal.smd_balance(covariates, assignment, weights)

    slug = "".join(c.lower() if c.isalnum() else "_" for c in treatment_col)
    write_hashed_json(
        out_dir / "causal_report.json",
        seed,
        {
            "treatment_column": treatment_col,
            "outcome_column": outcome_col,
            "propensity_family": family,
            "effects": effect.to_dict(),
            "balance": [b.to_dict() for b in balance],
        },
    )
    ordered = sorted(balance, key=lambda b: -b.smd_unweighted)
    write_hashed_csv(
        out_dir / f"love_{slug}.csv",
        seed,
        ["covariate", "smd_unweighted", "smd_weighted", "constant"],
        [[b.covariate, b.smd_unweighted, b.smd_weighted, int(b.constant)] for b in ordered],
    )
    write_hashed_csv(
        out_dir / f"propensity_{slug}.csv",
        seed,
        ["row", "treated", "propensity", "weight"],
        [
            [i, int(assignment.indicator[i]), float(propensity.scores[i]), float(weights.weights[i])]
            for i in range(len(propensity.scores))
        ],
    )
    return out_dir


# ---------------------------------------------------------------------------
# inspect


def run_inspect(input_path: str, schema_path: str | None, group_by: str, out: str | None) -> None:
    if schema_path:
        with open(schema_path, "r", encoding="utf-8") as fh:
            schema = schema_from_obj(json.load(fh))
    else:
        schema = default_airline_schema()
    data = load_csv(input_path, schema)
    summary = summarize(data, group_by)
    text = json.dumps(summary.to_dict(), sort_keys=True, indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# ---------------------------------------------------------------------------
# entry point


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="satcause")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="full pipeline on a CSV")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out-dir", default=None)

    p_sim = sub.add_parser("simulate", help="generate a synthetic dataset")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out-dir", default=None)

    p_causal = sub.add_parser("causal", help="causal stage on a numeric matrix CSV")
    p_causal.add_argument("--config", required=True)
    p_causal.add_argument("--out-dir", default=None)

    p_inspect = sub.add_parser("inspect", help="grouped summary statistics")
    p_inspect.add_argument("--input", required=True)
    p_inspect.add_argument("--schema", default=None)
    p_inspect.add_argument("--group-by", required=True)
    p_inspect.add_argument("--out", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = parse_run_config(_load_json(args.config), args.out_dir)
            out = run_pipeline(cfg)
            print(f"report bundle written to {out}")
        elif args.command == "simulate":
            out = run_simulate(_load_json(args.config), args.out_dir)
            print(f"synthetic dataset written to {out}")
        elif args.command == "causal":
            out = run_causal_only(_load_json(args.config), args.out_dir)
            print(f"causal report written to {out}")
        else:
            run_inspect(args.input, args.schema, args.group_by, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DataError, SchemaError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
