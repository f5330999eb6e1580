"""Command-line front end.

Verbs: ``test``, ``critical-values``, ``power``, ``efficiency``, ``eigen``,
``whitenoise``. Tabular results go to stdout (or --output) as CSV with
'#'-prefixed metadata lines, or as JSON with a metadata object. Identical
argv + seed produce byte-identical output. Exit codes: 0 success, 2 on
validation/usage errors, 1 on internal errors.
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys
from functools import wraps

import click
import numpy as np

from . import __version__
from .alternatives import parse_family_spec
from .efficiency import TEST_IDS, efficiency_table
from .errors import UnifitError
from .montecarlo import McConfig, STATISTICS, critical_value, p_value, power_study
from .samples import load_observations, make_sample
from .spectral import solve_hs_root, solve_tm_eigen
from .timeseries import whitenoise_test

SEED_ENV = "UNIFIT_SEED"


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env is not None:
        return int(env)
    return 0


def _fmt(x) -> str:
    """Render a number with 6 significant digits (stable across runs)."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _metadata(seed: int, flags: dict) -> dict:
    rendered = {k: (",".join(map(str, v)) if isinstance(v, (list, tuple)) else v)
                for k, v in sorted(flags.items())}
    return {"version": __version__, "seed": seed, "flags": rendered}


def _write_rows(fmt: str, header: list[str], rows: list[list], meta: dict,
                output: str | None) -> None:
    if fmt == "json":
        payload = {"metadata": meta,
                   "rows": [dict(zip(header, row)) for row in rows]}
        _emit(json.dumps(payload, indent=2, sort_keys=True, default=_fmt) + "\n", output)
        return
    buf = io.StringIO()
    for key, value in sorted(meta.items()):
        if key == "flags":
            for fk, fv in value.items():
                buf.write(f"# {fk}={fv}\n")
        else:
            buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, (float, np.floating)) or v is None
                         else v for v in row])
    _emit(buf.getvalue(), output)


def _guard(fn):
    """Map validation errors to exit 2, anything unexpected to exit 1."""

    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except UnifitError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except (OSError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except Exception as exc:  # pragma: no cover - defensive
            click.echo(f"internal error: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.version_option(__version__)
def cli():
    """Uniformity goodness-of-fit testing toolkit."""


test_choice = click.Choice(sorted(STATISTICS))


@cli.command("test")
@click.argument("data_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--statistic", "test_id", type=test_choice, default="t1", show_default=True)
@click.option("--alpha", type=float, default=0.1, show_default=True)
@click.option("--reps", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=None, help=f"defaults to ${SEED_ENV} or 0")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@_guard
def test_cmd(data_file, test_id, alpha, reps, seed, workers, fmt, output):
    """Apply one statistic to a data file with a Monte Carlo p-value."""
    seed = _resolve_seed(seed)
    sample = make_sample(load_observations(data_file))
    config = McConfig(replicates=reps, alpha=alpha, n=sample.n, seed=seed, workers=workers)
    outcome = p_value(test_id, sample, config)
    meta = _metadata(seed, {"statistic": test_id, "alpha": alpha, "reps": reps,
                            "workers": workers, "file": os.path.basename(data_file)})
    header = ["test", "n", "statistic", "p_value", "reject", "alpha", "replicates", "seed"]
    row = [outcome.test_id, outcome.n, outcome.statistic, outcome.p_value,
           bool(outcome.reject), outcome.alpha, outcome.replicates, outcome.seed]
    _write_rows(fmt, header, [row], meta, output)


@cli.command("critical-values")
@click.option("--tests", default="t1", show_default=True,
              help="comma-separated test ids")
@click.option("--n", "sizes", default="50", show_default=True,
              help="comma-separated sample sizes")
@click.option("--alpha", type=float, default=0.1, show_default=True)
@click.option("--reps", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@_guard
def critical_values_cmd(tests, sizes, alpha, reps, seed, workers, fmt, output):
    """Simulated upper-tail critical values."""
    seed = _resolve_seed(seed)
    test_ids = [t.strip() for t in tests.split(",") if t.strip()]
    n_list = [int(v) for v in sizes.split(",") if v.strip()]
    rows = []
    for n in n_list:
        config = McConfig(replicates=reps, alpha=alpha, n=n, seed=seed, workers=workers)
        for tid in test_ids:
            rows.append([tid, n, alpha, reps, seed, critical_value(tid, config=config)])
    meta = _metadata(seed, {"tests": tests, "n": sizes, "alpha": alpha, "reps": reps})
    _write_rows(fmt, ["test", "n", "alpha", "replicates", "seed", "critical_value"],
                rows, meta, output)


@cli.command("power")
@click.option("--tests", default="t1,t2,ks,ad,cvm,qc", show_default=True)
@click.option("--family", "family_spec", default="g1", show_default=True,
              help="family specifier, e.g. g1, g3:beta=3, lo:m=1")
@click.option("--theta-grid", default="0.0,0.25,0.5,0.75,1.0", show_default=True)
@click.option("--n", type=int, default=50, show_default=True)
@click.option("--alpha", type=float, default=0.1, show_default=True)
@click.option("--reps", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@_guard
def power_cmd(tests, family_spec, theta_grid, n, alpha, reps, seed, workers, fmt, output):
    """Monte Carlo power curves along a theta grid (plot-ready)."""
    seed = _resolve_seed(seed)
    fam = parse_family_spec(family_spec)
    test_ids = [t.strip() for t in tests.split(",") if t.strip()]
    grid = [float(v) for v in theta_grid.split(",") if v.strip()]
    config = McConfig(replicates=reps, alpha=alpha, n=n, seed=seed, workers=workers)
    curves = power_study(test_ids, fam, grid, config)
    rows = []
    for curve in curves:
        for theta, power, se in zip(curve.theta, curve.power, curve.se):
            rows.append([curve.test_id, curve.family_id, float(theta), curve.n,
                         curve.alpha, curve.replicates, float(power), float(se),
                         curve.seed])
    meta = _metadata(seed, {"tests": tests, "family": family_spec,
                            "theta_grid": theta_grid, "n": n, "alpha": alpha,
                            "reps": reps})
    _write_rows(fmt, ["test", "family", "theta", "n", "alpha", "replicates",
                      "power", "se", "seed"], rows, meta, output)


@cli.command("efficiency")
@click.option("--tests", default=",".join(TEST_IDS), show_default=True)
@click.option("--families", default="g1,g2,g3:beta=3,g4", show_default=True)
@click.option("--order", type=int, default=60, show_default=True,
              help="Gauss-Legendre order per triangle")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@_guard
def efficiency_cmd(tests, families, order, fmt, output):
    """Local Bahadur efficiency table with published reference values."""
    test_ids = [t.strip() for t in tests.split(",") if t.strip()]
    fams = [parse_family_spec(f) for f in families.split(",") if f.strip()]
    reports = efficiency_table(test_ids, fams, order=order)
    rows = [[r.test_id, r.family_id, r.efficiency,
             r.paper_value if r.paper_value is not None else None,
             r.abs_diff if r.abs_diff is not None else None,
             "; ".join(r.notes)] for r in reports]
    meta = _metadata(0, {"tests": tests, "families": families, "order": order})
    _write_rows(fmt, ["test", "family", "computed", "paper_value", "abs_diff", "notes"],
                rows, meta, output)


@cli.command("eigen")
@click.option("--m", "order_m", type=int, default=1, show_default=True,
              help="kernel order of the boundary problem")
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.option("--hs-root", is_flag=True,
              help="print the order-4 kernel's smallest characteristic value instead")
@click.option("--dump-eigenfunction", "dump_path", type=click.Path(dir_okay=False),
              default=None, help="write the eigenfunction grid as CSV (columns: t, f)")
@_guard
def eigen_cmd(order_m, tol, hs_root, dump_path):
    """Principal eigenvalue of the projection-operator boundary problem."""
    if hs_root:
        click.echo(_fmt(solve_hs_root()))
        return
    solution = solve_tm_eigen(order_m, tol=tol)
    click.echo(_fmt(solution.lambda1))
    if dump_path:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "f"])
        for t, f in zip(solution.grid, solution.values):
            writer.writerow([f"{t:.6g}", f"{f:.6g}"])
        with open(dump_path, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())


@cli.command("whitenoise")
@click.argument("series_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--test", "test_id", type=test_choice, default="t1", show_default=True)
@click.option("--alpha", type=float, default=0.1, show_default=True)
@click.option("--reps", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@_guard
def whitenoise_cmd(series_file, test_id, alpha, reps, seed, output):
    """Hidden-periodicity test via the cumulative periodogram pipeline."""
    seed = _resolve_seed(seed)
    series = load_observations(series_file)
    config = McConfig(replicates=reps, alpha=alpha, n=max(1, len(series)), seed=seed)
    outcome = whitenoise_test(series, test_id, config)
    payload = {
        "metadata": _metadata(seed, {"test": test_id, "alpha": alpha, "reps": reps,
                                     "file": os.path.basename(series_file)}),
        "statistic": float(outcome.statistic),
        "p_value": float(outcome.p_value),
        "decision": "reject" if outcome.reject else "accept",
        "q": int(outcome.extra["q"]),
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", output)


def main():
    cli(prog_name="unifit")


if __name__ == "__main__":
    main()
