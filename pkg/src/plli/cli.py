"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 invalid data or
configuration, 5 numerical failure.
"""
from __future__ import annotations

import csv
import functools
import json
import sys

import click
import numpy as np

from . import __version__
from .cluster1d import ORACLE_MAX_N, brute_force_1d, cluster_1d
from .core import Dataset, FitConfig
from .dp import fit_plli
from .exceptions import NumericalFailure, PlliError, ValidationError
from .local_models import feature_importance
from .metrics import evaluate, fit_eq_plli, representatives
from .modelfile import load_model, save_model
from .synthetic import black_box, synthetic_features

EXIT_IO = 3
EXIT_INVALID = 4
EXIT_NUMERICAL = 5


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except OSError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_IO)
        except NumericalFailure as e:
            click.echo(f"numerical failure: {e}", err=True)
            sys.exit(EXIT_NUMERICAL)
        except (PlliError, ValueError) as e:
            click.echo(f"invalid input: {e}", err=True)
            sys.exit(EXIT_INVALID)
    return wrapper


def read_csv(path, delimiter=","):
    """Header plus numeric columns; returns ``{name: float array}`` in file order."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        if len(set(header)) != len(header):
            raise ValidationError(f"{path}: duplicate column names")
        rows = [r for r in reader if r]
    cols = {h: np.empty(len(rows)) for h in header}
    for k, r in enumerate(rows):
        if len(r) != len(header):
            raise ValidationError(f"{path}: row {k + 1} has {len(r)} fields, expected {len(header)}")
        for h, v in zip(header, r):
            try:
                cols[h][k] = float(v)
            except ValueError:
                raise ValidationError(f"{path}: row {k + 1}, column {h!r}: not a number: {v!r}") from None
    return cols


def dataset_from_columns(cols, target_col, feature_cols=None, exclude=()):
    if target_col not in cols:
        raise ValidationError(f"no column named {target_col!r}")
    if feature_cols is None:
        feature_cols = [c for c in cols if c != target_col and c not in exclude]
    missing = [c for c in feature_cols if c not in cols]
    if missing:
        raise ValidationError(f"input lacks model columns {missing}")
    if not feature_cols:
        raise ValidationError("no feature columns")
    n = cols[target_col].shape[0]
    if n == 0:
        raise ValidationError("input has no data rows")
    X = np.column_stack([cols[c] for c in feature_cols])
    return Dataset(X, cols[target_col], tuple(feature_cols), None)


def _parse_clip(text):
    if text is None:
        return None
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise ValidationError("--clip expects 'lo,hi'") from None
    return (lo, hi)


def _fmt(v, prec=6):
    return "-" if v is None else f"{v:.{prec}g}"


@click.group()
@click.version_option(__version__, prog_name="plli")
def main():
    """Optimal piecewise local-linear surrogates and optimal 1-D clustering."""


def _fit_one(ds, cfg, algo):
    return fit_plli(ds, cfg) if algo == "op" else fit_eq_plli(ds, cfg)


def _select(ds, base: dict, K, algo, holdout, seed):
    rng = np.random.default_rng(seed)
    perm = rng.permutation(ds.n)
    n_test = max(1, int(round(holdout * ds.n)))
    if n_test >= ds.n:
        raise ValidationError("--holdout leaves no training rows")
    test, train = np.sort(perm[:n_test]), np.sort(perm[n_test:])
    rows = []
    for H in range(1, K + 1):
        if K % H:
            continue
        cfg = FitConfig(H=H, W=K // H, **base)
        try:
            model = _fit_one(ds.take(train), cfg, algo)
        except ValidationError as e:
            rows.append((H, K // H, None, str(e)))
            continue
        rows.append((H, K // H, evaluate(model, ds.take(test)).mse_f, ""))
    scored = [r for r in rows if r[2] is not None]
    if not scored:
        raise ValidationError("no (H, W) factorization could be fitted")
    best = min(scored, key=lambda r: r[2])
    click.echo(f"{'H':>3} {'W':>3} {'holdout MSE-f':>14}")
    for H, W, mse, note in rows:
        mark = "  <- selected" if (H, W) == best[:2] else ""
        click.echo(f"{H:>3} {W:>3} {_fmt(mse):>14}{mark}{'  ' + note if note else ''}")
    return best[0], best[1]


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@click.option("--target-col", required=True, help="Column holding the black-box predictions.")
@click.option("--h", "H", type=int, default=2, show_default=True, help="Range intervals.")
@click.option("--w", "W", type=int, default=2, show_default=True, help="Regions per interval.")
@click.option("--k", "K", type=int, default=None, help="Region budget; sweeps H*W=K and overrides --h/--w.")
@click.option("--select", type=click.Choice(["mse-f"]), default="mse-f", show_default=True)
@click.option("--holdout", type=float, default=0.2, show_default=True)
@click.option("--loss", type=click.Choice(["squared", "absolute"]), default="squared", show_default=True)
@click.option("--model", "family", type=click.Choice(["linear", "constant"]), default="linear",
              show_default=True)
@click.option("--algo", type=click.Choice(["op", "eq"]), default="op", show_default=True)
@click.option("--stride", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--clip", default=None, help="Clip linear models to 'lo,hi'.")
@click.option("--ridge-epsilon", type=float, default=1e-8, show_default=True)
@click.option("--exclude-col", multiple=True, help="Columns to leave out of the features (e.g. labels).")
@click.option("--delimiter", default=",", show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@_guard
def fit(input_path, target_col, H, W, K, select, holdout, loss, family, algo, stride, seed, clip,
        ridge_epsilon, exclude_col, delimiter, out):
    """Fit a surrogate model and write it as JSON."""
    ds = dataset_from_columns(read_csv(input_path, delimiter), target_col, exclude=exclude_col)
    base = dict(loss=loss, model_family=family, clip_range=_parse_clip(clip), stride=stride,
                seed=seed, ridge_epsilon=ridge_epsilon)
    if K is not None:
        if K < 1:
            raise ValidationError("--k must be positive")
        H, W = _select(ds, base, K, algo, holdout, seed)
    cfg = FitConfig(H=H, W=W, **base)
    model = _fit_one(ds, cfg, algo)
    save_model(model, out, {"generator": f"plli {__version__}", "algo": algo,
                            "target_column": target_col, "n_train": ds.n})
    click.echo(f"algo={algo} H={cfg.H} W={cfg.W} regions={model.n_regions} "
               f"training_risk={model.training_risk:.10g}")
    click.echo(f"{'region':>6} {'interval':>9} {'size':>6}")
    rid = 0
    for q, iv in enumerate(model.intervals):
        for r in iv.regions:
            click.echo(f"{rid:>6} {q:>9} {r.size:>6}")
            rid += 1


@main.command("evaluate")
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False))
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@click.option("--target-col", default=None, help="Defaults to the column used at fit time.")
@click.option("--label-col", default=None, help="Ground-truth labels for MSE-p and R^2.")
@click.option("--report", default=None, type=click.Path(dir_okay=False), help="Write a JSON report.")
@click.option("--delimiter", default=",", show_default=True)
@_guard
def evaluate_cmd(model_path, input_path, target_col, label_col, report, delimiter):
    """Score a model against black-box values (and labels when given)."""
    model, meta = load_model(model_path)
    target_col = target_col or meta.get("target_column")
    if target_col is None:
        raise ValidationError("--target-col is required for this model file")
    cols = read_csv(input_path, delimiter)
    ds = dataset_from_columns(cols, target_col, feature_cols=list(model.column_names))
    labels = None
    if label_col is not None:
        if label_col not in cols:
            raise ValidationError(f"no column named {label_col!r}")
        labels = cols[label_col]
    rep = evaluate(model, ds, labels)
    click.echo(f"{'metric':<8} {'value':>16}")
    click.echo(f"{'MSE-f':<8} {_fmt(rep.mse_f, 10):>16}")
    if labels is not None:
        click.echo(f"{'MSE-p':<8} {_fmt(rep.mse_p, 10):>16}")
        click.echo(f"{'R2':<8} {_fmt(rep.r2, 10):>16}")
    click.echo(f"{'n':<8} {rep.n_eval:>16}")
    if report:
        with open(report, "w", encoding="utf-8") as fh:
            json.dump(rep.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False))
@click.option("--precision", type=int, default=2, show_default=True)
@click.option("--top", type=int, default=5, show_default=True, help="Flag the largest importances.")
@_guard
def explain(model_path, precision, top):
    """Region-wise feature importances (|b_j| times within-region stddev)."""
    model, _ = load_model(model_path)
    names = list(model.column_names)
    head = ["region", "f-interval", "centroid"] + names + [f"|b|:{c}" for c in names]
    click.echo("\t".join(head))
    rid = 0
    last = len(model.intervals) - 1
    for q, iv in enumerate(model.intervals):
        lo = "-inf" if q == 0 else f"{iv.f_low:.{precision}f}"
        hi = "+inf" if q == last else f"{iv.f_high:.{precision}f}"
        for r in iv.regions:
            imp = feature_importance(r.model, r.feature_std)
            flagged = set(np.argsort(-imp, kind="stable")[:top].tolist()) if imp.any() else set()
            cent = "[" + ", ".join(f"{v:.{precision}f}" for v in r.centroid) + "]"
            cells = [f"{v:.4g}{'*' if k in flagged and v > 0 else ''}" for k, v in enumerate(imp)]
            raw = [f"{abs(v):.4g}" for v in r.model.coefficients]
            click.echo("\t".join([str(rid), f"({lo}, {hi}]", cent] + cells + raw))
            rid += 1


@main.command("cluster1d")
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@click.option("--col", default=None, help="Column to cluster; required if the file has several.")
@click.option("--k", "K", type=int, required=True)
@click.option("--loss", type=click.Choice(["squared", "absolute"]), default="squared", show_default=True)
@click.option("--verify", is_flag=True, help=f"Check against brute force (n <= {ORACLE_MAX_N}).")
@click.option("--delimiter", default=",", show_default=True)
@_guard
def cluster1d_cmd(input_path, col, K, loss, verify, delimiter):
    """Optimal contiguous clustering of one numeric column."""
    cols = read_csv(input_path, delimiter)
    if col is None:
        if len(cols) != 1:
            raise ValidationError("several columns in input; choose one with --col")
        col = next(iter(cols))
    if col not in cols:
        raise ValidationError(f"no column named {col!r}")
    res = cluster_1d(cols[col], K, loss)
    v = res.sorted_values
    click.echo("boundaries: " + ", ".join(repr(float(v[b])) for b in res.boundaries))
    click.echo("centers: " + ", ".join(repr(c) for c in res.centers))
    click.echo(f"total_cost: {res.total_cost!r}")
    if verify:
        if v.size > ORACLE_MAX_N:
            click.echo(f"verify skipped: n={v.size} exceeds {ORACLE_MAX_N}")
        else:
            bf = brute_force_1d(v, K, loss)
            if abs(bf.total_cost - res.total_cost) <= 1e-9:
                click.echo("oracle match")
            else:
                click.echo(f"oracle MISMATCH: brute force cost {bf.total_cost!r}")
                sys.exit(EXIT_NUMERICAL)


@main.command("representatives")
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False))
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@click.option("--target-col", default=None)
@click.option("--delimiter", default=",", show_default=True)
@_guard
def representatives_cmd(model_path, input_path, target_col, delimiter):
    """One representative training row per region plus coverage statistics."""
    model, meta = load_model(model_path)
    target_col = target_col or meta.get("target_column")
    if target_col is None:
        raise ValidationError("--target-col is required for this model file")
    ds = dataset_from_columns(read_csv(input_path, delimiter), target_col,
                              feature_cols=list(model.column_names))
    rep = representatives(model, ds)
    click.echo("region\trow\tdistance\tf\tcentroid")
    for r in rep.records:
        cent = "[" + ", ".join(f"{v:.4g}" for v in r.centroid) + "]"
        click.echo(f"{r.region_id}\t{r.nearest_row_id}\t{r.distance:.6g}\t{r.f_value:.6g}\t{cent}")
    click.echo(f"coverage(features): {_fmt(rep.coverage_features, 10)}")
    click.echo(f"coverage(predictions): {_fmt(rep.coverage_predictions, 10)}")
    click.echo(f"coverage(importances): {_fmt(rep.coverage_importances, 10)}")


@main.command()
@click.option("--n", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@_guard
def synth(n, seed, out):
    """Write the (x1 + x2)^2 benchmark with standard normal features."""
    if n < 1:
        raise ValidationError("--n must be positive")
    X = synthetic_features(n, seed)
    f = black_box(X)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x1", "x2", "f"])
        for (a, b), v in zip(X.tolist(), f.tolist()):
            w.writerow([repr(a), repr(b), repr(v)])
    click.echo(f"wrote {n} rows to {out}")


if __name__ == "__main__":
    main()
