"""Command-line pipeline driver.

Every artifact file embeds the content hash of the dataset it was built
from plus the seed, and the commands refuse to mix artifacts with
mismatched provenance. All randomness flows from --seed, so rerunning a
command reproduces its outputs byte for byte.
"""

import csv
import json
from pathlib import Path

import click
import numpy as np

from . import compare as comparing
from .annotate import AnnotatorBudget, propose_model
from .boosting import GradientBoostedClassifier, evaluate_accuracy
from .data import (
    ColumnKind,
    Dataset,
    SplitSizes,
    balance_classes,
    load_csv,
    load_schema,
    make_splits,
    save_csv,
    save_schema,
    synth_clusters,
)
from .features import build_feature_matrix, transform_rows, used_dimensions, write_feature_csv
from .linear import PerceptronClassifier, RidgeClassifier
from .model_selection import default_param_grid, grid_search_cv, reduced_param_grid
from .pairs import correlation_table, select_pairs
from .regions import accept_model
from .store import ModelStore, StoreError
from .util import derive_seed


@click.group()
def main():
    """Human-guided feature engineering on 2-D scatterplots."""


def dataset_options(fn):
    fn = click.option("--csv", "csv_path", required=True,
                      type=click.Path(exists=True, dir_okay=False),
                      help="Dataset CSV with a header row.")(fn)
    fn = click.option("--schema", "schema_path", required=True,
                      type=click.Path(exists=True, dir_okay=False),
                      help="Sidecar schema of column_name,kind lines.")(fn)
    fn = click.option("--label", "label_column", default="label", show_default=True,
                      help="Name of the label column.")(fn)
    fn = click.option("--balance/--no-balance", default=True, show_default=True,
                      help="Downsample the majority class before splitting.")(fn)
    fn = click.option("--seed", default=7, show_default=True, type=int)(fn)
    return fn


def split_options(fn):
    fn = click.option("--sizes", default=None,
                      help="annotation_train,annotation_valid,annotation_test,"
                           "train_pool (default 100,100,200,70% of rows).")(fn)
    return fn


def _load(csv_path, schema_path, label_column, balance, seed) -> Dataset:
    try:
        ds = load_csv(csv_path, load_schema(schema_path), label_column)
        if balance:
            ds = balance_classes(ds, seed)
        return ds
    except (ValueError, FileNotFoundError) as e:
        raise click.ClickException(str(e))


def _sizes(ds: Dataset, sizes_text) -> SplitSizes:
    if sizes_text is None:
        return SplitSizes.defaults_for(ds.n_samples)
    parts = [p.strip() for p in sizes_text.split(",")]
    if len(parts) != 4:
        raise click.ClickException("--sizes needs four comma-separated counts")
    return SplitSizes(*[int(p) for p in parts])


def _split(ds, sizes, seed):
    try:
        return make_splits(ds, sizes, seed)
    except ValueError as e:
        raise click.ClickException(str(e))


def _run_dir(run_dir, csv_path, ds: Dataset, seed: int) -> Path:
    if run_dir is None:
        stem = Path(csv_path).stem
        run_dir = Path("runs") / f"{stem}-{ds.content_hash()[:8]}-s{seed}"
    path = Path(run_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_splits(path: Path, ds: Dataset, split, sizes: SplitSizes, seed: int):
    payload = {
        "dataset_hash": ds.content_hash(),
        "seed": seed,
        "sizes": {
            "annotation_train": sizes.annotation_train,
            "annotation_valid": sizes.annotation_valid,
            "annotation_test": sizes.annotation_test,
            "train_pool": sizes.train_pool,
        },
        "splits": {name: getattr(split, name).tolist() for name in split._fields()},
    }
    (path / "splits.json").write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _load_models(run_dir: Path, ds: Dataset):
    store = ModelStore(run_dir / "models.jsonl")
    try:
        models = store.load(expected_hash=ds.content_hash())
    except StoreError as e:
        raise click.ClickException(str(e))
    if not models:
        raise click.ClickException(
            f"no accepted models in {store.path}; run auto-annotate or serve first"
        )
    return models


def _grid(name: str):
    return {"full": default_param_grid, "reduced": reduced_param_grid}[name]()


@main.command()
@click.option("--dims", default=10, show_default=True, type=int,
              help="Total dimensions.")
@click.option("--informative", default=2, show_default=True, type=int,
              help="Dimensions that carry the cluster structure.")
@click.option("--per-class", "per_class", default=1000, show_default=True, type=int)
@click.option("--spread", default=0.5, show_default=True, type=float,
              help="Cluster standard deviation around the mirrored centers.")
@click.option("--seed", default=7, show_default=True, type=int)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def synth(dims, informative, per_class, spread, seed, out):
    """Generate a synthetic cluster dataset plus its schema sidecar."""
    try:
        ds = synth_clusters(dims, informative, per_class, spread, seed)
    except ValueError as e:
        raise click.ClickException(str(e))
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_csv(ds, out, label_column="label")
    schema = list(ds.columns) + [("label", ColumnKind.INTEGER)]
    schema_path = out.with_suffix(".schema.csv")
    save_schema(schema_path, schema)
    click.echo(f"wrote {ds.n_samples} rows x {ds.n_dims} dims to {out}")
    click.echo(f"wrote schema to {schema_path}")


@main.command()
@dataset_options
def ingest(csv_path, schema_path, label_column, balance, seed):
    """Validate a dataset against its schema and print a summary."""
    ds = _load(csv_path, schema_path, label_column, balance, seed)
    kinds = [k for _, k in ds.columns]
    n0, n1 = ds.label_counts()
    click.echo(f"dataset    {ds.name}")
    click.echo(f"rows       {ds.n_samples}")
    click.echo(f"dims       {ds.n_dims} "
               f"(nominal {sum(k is ColumnKind.NOMINAL for k in kinds)}, "
               f"integer {sum(k is ColumnKind.INTEGER for k in kinds)}, "
               f"continuous {sum(k is ColumnKind.CONTINUOUS for k in kinds)})")
    click.echo(f"labels     0: {n0}  1: {n1}")
    click.echo(f"hash       {ds.content_hash()}")


@main.command()
@dataset_options
@split_options
@click.option("--k", default=5, show_default=True, type=int)
@click.option("--mode", default="rank", show_default=True,
              type=click.Choice(["rank", "sample"]))
def pairs(csv_path, schema_path, label_column, balance, seed, sizes, k, mode):
    """Rank dimension pairs by absolute correlation and pick candidates."""
    ds = _load(csv_path, schema_path, label_column, balance, seed)
    split = _split(ds, _sizes(ds, sizes), seed)
    try:
        table = correlation_table(ds, split)
        picked = select_pairs(table, k=k, seed=seed, mode=mode)
    except ValueError as e:
        raise click.ClickException(str(e))
    names = ds.column_names()
    rho = dict(table.entries)
    for pair in picked:
        click.echo(f"{pair.dim_a:>4} {pair.dim_b:>4}  "
                   f"{names[pair.dim_a]:<12} {names[pair.dim_b]:<12} "
                   f"rho={rho[pair]:+.4f}")


@main.command("auto-annotate")
@dataset_options
@split_options
@click.option("--pairs", "pair_count", default=20, show_default=True, type=int,
              help="How many dimension pairs to annotate.")
@click.option("--per-pair", default=1, show_default=True, type=int,
              help="Drawing sessions per pair (different tie-break seeds).")
@click.option("--mode", default="rank", show_default=True,
              type=click.Choice(["rank", "sample"]),
              help="Pair selection mode.")
@click.option("--max-rectangles", default=8, show_default=True, type=int)
@click.option("--grid-resolution", default=16, show_default=True, type=int)
@click.option("--target-accuracy", default=0.7, show_default=True, type=float)
@click.option("--threshold", default=0.5, show_default=True, type=float,
              help="Validation accuracy gate (strictly above).")
@click.option("--min-coverage", default=0.0, show_default=True, type=float)
@click.option("--run-dir", default=None, type=click.Path(file_okay=False))
def auto_annotate(csv_path, schema_path, label_column, balance, seed, sizes,
                  pair_count, per_pair, mode, max_rectangles, grid_resolution,
                  target_accuracy, threshold, min_coverage, run_dir):
    """Draw rectangle models programmatically and store the accepted ones."""
    ds = _load(csv_path, schema_path, label_column, balance, seed)
    size_spec = _sizes(ds, sizes)
    split = _split(ds, size_spec, seed)
    try:
        budget = AnnotatorBudget(max_rectangles, grid_resolution, target_accuracy)
        table = correlation_table(ds, split)
        picked = select_pairs(table, k=pair_count, seed=seed, mode=mode)
    except ValueError as e:
        raise click.ClickException(str(e))
    path = _run_dir(run_dir, csv_path, ds, seed)
    _write_splits(path, ds, split, size_spec, seed)
    store = ModelStore(path / "models.jsonl")
    ds_hash = ds.content_hash()
    accepted = rejected = 0
    for pair in picked:
        for j in range(per_pair):
            model = propose_model(
                ds, split, pair, budget,
                seed=derive_seed(seed, "annotate", pair.dim_a, pair.dim_b, j),
            )
            if accept_model(model, ds, split, threshold=threshold,
                            min_coverage=min_coverage):
                store.append(model, ds_hash, seed)
                accepted += 1
            else:
                rejected += 1
    click.echo(f"accepted {accepted} models, rejected {rejected} "
               f"(store: {store.path})")
    if accepted == 0:
        raise click.ClickException("no model passed the acceptance gate")


@main.command()
@dataset_options
@split_options
@click.option("--run-dir", default=None, type=click.Path(file_okay=False))
@click.option("--rows", default="train", show_default=True,
              type=click.Choice(["train", "test", "all"]),
              help="Which learner rows to featurize.")
@click.option("--mode", default="literal", show_default=True,
              type=click.Choice(["literal", "signed"]))
@click.option("--out", default=None, type=click.Path(dir_okay=False))
def featurize(csv_path, schema_path, label_column, balance, seed, sizes,
              run_dir, rows, mode, out):
    """Write the feature matrix CSV for the stored accepted models."""
    ds = _load(csv_path, schema_path, label_column, balance, seed)
    split = _split(ds, _sizes(ds, sizes), seed)
    path = _run_dir(run_dir, csv_path, ds, seed)
    models = _load_models(path, ds)
    indices = {
        "train": split.learner_train,
        "test": split.learner_test,
        "all": np.sort(split.all_indices()),
    }[rows]
    matrix = build_feature_matrix(ds, indices, models, mode=mode)
    out = Path(out) if out else path / f"features_{rows}.csv"
    write_feature_csv(matrix, out, ds.content_hash(), seed)
    click.echo(f"wrote {matrix.values.shape[0]} x {matrix.values.shape[1]} "
               f"feature matrix to {out}")


_MODEL_FACTORIES = {
    "gbdt": None,  # grid-searched
    "perceptron": lambda seed: PerceptronClassifier(random_state=seed),
    "ridge": lambda seed: RidgeClassifier(),
}


@main.command()
@dataset_options
@split_options
@click.option("--run-dir", default=None, type=click.Path(file_okay=False))
@click.option("--arm", default="features", show_default=True,
              type=click.Choice(["raw", "features"]))
@click.option("--model", "model_kind", default="gbdt", show_default=True,
              type=click.Choice(sorted(_MODEL_FACTORIES)))
@click.option("--grid", default="reduced", show_default=True,
              type=click.Choice(["full", "reduced"]))
@click.option("--mode", default="literal", show_default=True,
              type=click.Choice(["literal", "signed"]))
@click.option("--folds", default=5, show_default=True, type=int)
@click.option("--jobs", default=1, show_default=True, type=int)
def train(csv_path, schema_path, label_column, balance, seed, sizes, run_dir,
          arm, model_kind, grid, mode, folds, jobs):
    """Train one arm (raw dims or features) and report test accuracy."""
    ds = _load(csv_path, schema_path, label_column, balance, seed)
    split = _split(ds, _sizes(ds, sizes), seed)
    path = _run_dir(run_dir, csv_path, ds, seed)
    models = _load_models(path, ds)
    y_train = ds.labels[split.learner_train]
    y_test = ds.labels[split.learner_test]
    if arm == "raw":
        dims = used_dimensions(models)
        X_train = ds.rows[split.learner_train][:, dims]
        X_test = ds.rows[split.learner_test][:, dims]
    else:
        X_train = transform_rows(ds.rows[split.learner_train], models, mode)
        X_test = transform_rows(ds.rows[split.learner_test], models, mode)

    arm_seed = derive_seed(seed, f"{arm}-arm")
    if model_kind == "gbdt":
        try:
            report = grid_search_cv(X_train, y_train, grid=_grid(grid),
                                    n_folds=folds, seed=arm_seed, n_jobs=jobs)
        except ValueError as e:
            raise click.ClickException(str(e))
        clf = GradientBoostedClassifier(**report.best_params, random_state=arm_seed)
        chosen = report.best_params
    else:
        clf = _MODEL_FACTORIES[model_kind](arm_seed)
        chosen = clf.get_params()
    clf.fit(X_train, y_train)
    result = {
        "dataset_hash": ds.content_hash(),
        "seed": seed,
        "arm": arm,
        "model": model_kind,
        "chosen_params": chosen,
        "train_accuracy": evaluate_accuracy(clf, X_train, y_train),
        "test_accuracy": evaluate_accuracy(clf, X_test, y_test),
    }
    out = path / f"train_{arm}_{model_kind}.json"
    out.write_text(json.dumps(result, sort_keys=True, indent=2) + "\n")
    click.echo(f"{arm} arm ({model_kind}): train "
               f"{result['train_accuracy']:.3f}, test {result['test_accuracy']:.3f}")
    click.echo(f"wrote {out}")


@main.command("compare")
@dataset_options
@split_options
@click.option("--run-dir", default=None, type=click.Path(file_okay=False))
@click.option("--grid", default="full", show_default=True,
              type=click.Choice(["full", "reduced"]))
@click.option("--mode", default="literal", show_default=True,
              type=click.Choice(["literal", "signed"]))
@click.option("--folds", default=5, show_default=True, type=int)
@click.option("--jobs", default=1, show_default=True, type=int)
@click.option("--loss-curves", is_flag=True,
              help="Also dump each arm's training loss curve as CSV.")
def compare_cmd(csv_path, schema_path, label_column, balance, seed, sizes,
                run_dir, grid, mode, folds, jobs, loss_curves):
    """Run the full comparison and write the report artifacts."""
    ds = _load(csv_path, schema_path, label_column, balance, seed)
    size_spec = _sizes(ds, sizes)
    split = _split(ds, size_spec, seed)
    path = _run_dir(run_dir, csv_path, ds, seed)
    models = _load_models(path, ds)
    try:
        report = comparing.run_comparison(
            ds, split, models, mode=mode, grid=_grid(grid),
            seed=seed, n_folds=folds, n_jobs=jobs,
        )
    except ValueError as e:
        raise click.ClickException(str(e))
    _write_splits(path, ds, split, size_spec, seed)
    (path / "report.json").write_text(comparing.report_json(report))
    (path / "report.csv").write_text(comparing.report_csv(report))
    text = comparing.report_text(report)
    (path / "report.txt").write_text(text)
    if loss_curves:
        for arm_name, arm in (("raw", report.raw_arm), ("features", report.feature_arm)):
            with (path / f"loss_{arm_name}.csv").open("w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["round", "train_loss"])
                for i, loss in enumerate(arm.train_loss_curve, start=1):
                    writer.writerow([i, repr(loss)])
    click.echo(text, nl=False)
    click.echo(f"artifacts in {path}")


@main.command()
@click.option("--run-dir", required=True, type=click.Path(exists=True, file_okay=False))
def report(run_dir):
    """Re-render a stored comparison report as a table."""
    path = Path(run_dir) / "report.json"
    if not path.exists():
        raise click.ClickException(f"{path} not found; run compare first")
    payload = json.loads(path.read_text())
    row = payload["row"]
    cells = [
        (c, f"{row[c]:.3f}" if isinstance(row[c], float) else str(row[c]))
        for c in comparing.REPORT_COLUMNS
    ]
    widths = [max(len(h), len(v)) for h, v in cells]
    click.echo("  ".join(h.ljust(w) for (h, _), w in zip(cells, widths)).rstrip())
    click.echo("  ".join(v.ljust(w) for (_, v), w in zip(cells, widths)).rstrip())


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
def serve(config_path):
    """Start the annotation service described by a key=value config file."""
    import uvicorn

    from .service import ServiceConfig, ServiceState, create_app

    try:
        config = ServiceConfig.parse(config_path)
        state = ServiceState(config)
    except (ValueError, FileNotFoundError) as e:
        raise click.ClickException(str(e))
    app = create_app(state)
    click.echo(f"serving {state.dataset.name} on {config.host}:{config.port} "
               f"({len(state.pair_pool)} pairs in the pool)")
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


if __name__ == "__main__":
    main()
