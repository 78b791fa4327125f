"""Command line: fit models, evaluate dumps, reproduce the benchmark tables.

Exit codes: 0 on success, 1 when a reproduce run misses its accuracy gate,
2 on input errors (missing or malformed data files).
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .data import DataFormatError
from .groups import evaluate, load_model, save_model
from .harness import (
    BENCHMARKS,
    DEFAULT_SEEDS,
    format_results_table,
    format_vector,
    load_benchmark,
    reproduce_benchmark,
    run_nn_once,
    run_sing_once,
    write_results_csv,
)
from .mlp import save_weights
from .most import MostConfig, write_trace_csv
from .objectives import run_suite

_DATASETS = click.Choice(sorted(BENCHMARKS))


def _load(dataset: str, path: str):
    try:
        return load_benchmark(dataset, path)
    except (DataFormatError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


def _config_string(**kv) -> str:
    return " ".join(f"{k}={v}" for k, v in kv.items())


@click.group()
@click.version_option(__version__)
def main():
    """SiNG grouping classifier and MOST derivative-free optimizer."""


@main.command()
@click.option("--dataset", type=_DATASETS, required=True)
@click.option("--path", type=click.Path(exists=True, dir_okay=False), required=True, help="UCI data file")
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--delta-max", type=float, default=None, help="search box upper bound per half-width (benchmark default)")
@click.option("--mc-samples", type=int, default=None, help="Monte-Carlo samples per region score (benchmark default)")
@click.option("--divisions", type=int, default=20, show_default=True)
@click.option("--tolerance", type=float, default=1e-6, show_default=True)
@click.option("--relearn/--no-relearn", default=True, show_default=True, help="append uncovered test samples as new groups")
@click.option("--leak-test-from-full", is_flag=True, help="draw test rows from the full file while training keeps every row")
@click.option("--method", type=click.Choice(["sing", "nn", "both"]), default="sing", show_default=True)
@click.option("--output-dir", type=click.Path(file_okay=False), default="runs", show_default=True)
@click.option("--timings", is_flag=True, help="include wall-clock runtimes in the results CSV")
def fit(dataset, path, seed, delta_max, mc_samples, divisions, tolerance, relearn, leak_test_from_full, method, output_dir, timings):
    """Split, fit on the training side, evaluate on the held-out side, write artifacts."""
    data = _load(dataset, path)
    bench = BENCHMARKS[dataset]
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    most = MostConfig(
        initial_divisions=divisions,
        mc_samples=mc_samples if mc_samples is not None else bench.mc_samples,
        tolerance=tolerance,
    )
    rows = []
    if method in ("sing", "both"):
        run = run_sing_once(
            data,
            bench,
            seed,
            relearn_eval=relearn,
            leak_test_from_full=leak_test_from_full,
            most=most,
            delta_max=delta_max,
        )
        save_model(run.store, outdir / f"model_{dataset}_seed{seed}.txt")
        write_trace_csv(run.train_report.report_i_to_ii, outdir / f"trace_{dataset}_seed{seed}_fold_i_to_ii.csv")
        write_trace_csv(run.train_report.report_ii_to_i, outdir / f"trace_{dataset}_seed{seed}_fold_ii_to_i.csv")
        click.echo(f"fitted delta: {format_vector(run.delta)}")
        rows.append(run.row)
    if method in ("nn", "both"):
        if bench.nn_spec is None:
            click.echo(f"error: no network baseline is defined for {dataset}", err=True)
            sys.exit(2)
        row, weights = run_nn_once(data, bench, seed)
        save_weights(bench.nn_spec, weights, outdir / f"weights_{dataset}_seed{seed}.csv")
        rows.append(row)
    meta = _config_string(
        command="fit",
        dataset=dataset,
        seed=seed,
        delta_max=delta_max if delta_max is not None else bench.delta_max,
        mc_samples=most.mc_samples,
        divisions=divisions,
        tolerance=tolerance,
        relearn=relearn,
        leak_test_from_full=leak_test_from_full,
        method=method,
    )
    write_results_csv(rows, outdir / "results.csv", include_runtime=timings, config=meta)
    (outdir / "results.txt").write_text(format_results_table(rows, include_runtime=timings), encoding="utf-8")
    click.echo(format_results_table(rows, include_runtime=timings), nl=False)


@main.command("eval")
@click.option("--model", type=click.Path(exists=True, dir_okay=False), required=True, help="model dump from fit")
@click.option("--dataset", type=_DATASETS, required=True)
@click.option("--path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--relearn/--no-relearn", default=False, show_default=True)
def eval_cmd(model, dataset, path, relearn):
    """Evaluate a saved model dump on a dataset."""
    data = _load(dataset, path)
    try:
        store = load_model(model)
    except (ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    result = evaluate(store, data, relearn_flag=relearn)
    click.echo(f"samples={len(data)} accuracy={result.accuracy:.4f} error={result.error:.6g} unknown={result.unknown_count}")


@main.command()
@click.option("--benchmark", type=_DATASETS, required=True)
@click.option("--path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--seeds", default=",".join(str(s) for s in DEFAULT_SEEDS), show_default=True)
@click.option("--with-nn/--no-nn", default=True, show_default=True)
@click.option("--relearn/--no-relearn", default=True, show_default=True)
@click.option("--output-dir", type=click.Path(file_okay=False), default="runs", show_default=True)
@click.option("--timings", is_flag=True)
def reproduce(benchmark, path, seeds, with_nn, relearn, output_dir, timings):
    """Run the full benchmark protocol over a seed list and compare to the published numbers."""
    data = _load(benchmark, path)
    seed_list = tuple(int(tok) for tok in seeds.split(",") if tok.strip())
    if not seed_list:
        click.echo("error: empty seed list", err=True)
        sys.exit(2)
    result = reproduce_benchmark(benchmark, data, seed_list, with_nn=with_nn, relearn_eval=relearn)
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    meta = _config_string(command="reproduce", benchmark=benchmark, seeds=seeds, with_nn=with_nn, relearn=relearn)
    write_results_csv(result.rows, outdir / f"reproduce_{benchmark}.csv", include_runtime=timings, config=meta)
    table = format_results_table(result.rows, include_runtime=timings)
    (outdir / f"reproduce_{benchmark}.txt").write_text(table, encoding="utf-8")
    click.echo(table, nl=False)
    ref = result.reference
    click.echo(f"median sing teaching accuracy: {result.median_sing_teaching:.4f} (reference {ref.get('sing_teaching')})")
    click.echo(f"median sing test accuracy:     {result.median_sing_test:.4f} (reference {ref.get('sing_test')})")
    if result.median_nn_test is not None:
        click.echo(f"median nn test accuracy:       {result.median_nn_test:.4f} (reference {ref.get('nn_test')})")
    if "external_nn_test" in ref:
        click.echo(f"external network reference:    {ref['external_nn_test']}")
    gate = BENCHMARKS[benchmark].accept_median_test
    if not result.passed:
        click.echo(f"FAIL: median sing test accuracy below the {gate} gate", err=True)
        sys.exit(1)
    click.echo(f"PASS: median sing test accuracy meets the {gate} gate")


@main.command("most-demo")
@click.option("--tolerance", type=float, default=1e-6, show_default=True)
@click.option("--divisions", type=int, default=20, show_default=True)
@click.option("--mc-samples", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--initial-scan/--no-initial-scan", default=True, show_default=True)
@click.option("--output-dir", type=click.Path(file_okay=False), default="runs", show_default=True)
def most_demo(tolerance, divisions, mc_samples, seed, initial_scan, output_dir):
    """Optimize the built-in multimodal suite and compare against the grid oracle."""
    config = MostConfig(
        initial_divisions=divisions,
        mc_samples=mc_samples,
        tolerance=tolerance,
        seed=seed,
        use_initial_scan=initial_scan,
    )
    outdir = Path(output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    results = run_suite(config)
    lines = ["function,found_value,oracle_value,value_range,within_band,converged,widths_below_tolerance"]
    for res in results:
        write_trace_csv(res.report, outdir / f"trace_most_{res.name}.csv")
        lines.append(
            f"{res.name},{res.best_value!r},{res.oracle_value!r},{res.value_range!r},"
            f"{res.within_band},{res.converged},{res.rel_widths_ok}"
        )
        status = "ok" if (res.within_band and res.converged and res.rel_widths_ok) else "MISS"
        click.echo(
            f"{res.name:18s} found {res.best_value: .6f} oracle {res.oracle_value: .6f} "
            f"at {format_vector(res.best_point)} [{status}]"
        )
    (outdir / "most_demo.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    misses = [r.name for r in results if not (r.within_band and r.converged and r.rel_widths_ok)]
    if misses:
        click.echo(f"functions outside the oracle band: {', '.join(misses)}", err=True)


if __name__ == "__main__":
    main()
