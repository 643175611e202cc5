"""Command-line interface: simulate, sweep, verify, curve, oracle."""

from __future__ import annotations

import json
import sys

import click

from . import harness
from .core import CupGameError, NEGATIVE_FILL, STANDARD, cup_state, rat
from .emptiers import OracleConfig, opt_oracle


@click.group()
def main() -> None:
    """Exact simulator for variable-processor cup games."""


@main.command()
@click.argument("config_path", type=click.Path(exists=True))
def simulate(config_path: str) -> None:
    """Run one game from a config file; write trace/CSV outputs."""
    try:
        cfg = harness.load_config(config_path)
        summary = harness.simulate(cfg)
    except (CupGameError, KeyError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(json.dumps(summary, indent=2))


@main.command()
@click.option("--n", "n_values", multiple=True, type=int, required=True)
@click.option("--k", "k_values", multiple=True, type=int, required=True)
@click.option("--c", type=float, default=2.0, show_default=True)
@click.option("--seed", type=int, default=0, envvar=harness.ENV_SEED)
@click.option("--workers", type=int, default=None, envvar=harness.ENV_WORKERS)
@click.option("--out", "out_csv", type=click.Path(), required=True)
def sweep(n_values, k_values, c, seed, workers, out_csv) -> None:
    """Run the (n, k) cross product of amplification plans; append rows to CSV."""
    try:
        rows = harness.run_sweep(
            list(n_values), list(k_values), out_csv, c=c, seed=seed, workers=workers
        )
    except CupGameError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    failures = sum(1 for r in rows if r[-2] != "ok")
    click.echo(f"wrote {len(rows)} rows to {out_csv} ({failures} failures)")
    if failures:
        sys.exit(1)


@main.command()
@click.argument("suite", type=click.Choice(harness.VERIFY_SUITES))
@click.option("--quick/--full", default=True, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def verify(suite: str, quick: bool, as_json: bool) -> None:
    """Run a property suite; nonzero exit on any violation."""
    report = harness.verify_suite(suite, quick=quick)
    if as_json:
        click.echo(json.dumps(report.to_json(), indent=2))
    else:
        status = "PASS" if report.passed else "FAIL"
        click.echo(
            f"{status} {report.suite}: {report.cases} cases, "
            f"{len(report.violations)} violations, {report.elapsed:.2f}s"
        )
        for v in report.violations[:10]:
            click.echo(f"  {v}")
    if not report.passed:
        sys.exit(1)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--t", "t_values", multiple=True, type=int, required=True)
@click.option("--c", type=float, default=2.0, show_default=True)
@click.option("--out", "out_csv", type=click.Path(), required=True)
def curve(n, t_values, c, out_csv) -> None:
    """Measured backlog vs the trade-off formula across horizons."""
    try:
        rows = harness.run_curve(n, list(t_values), out_csv, c=c)
    except CupGameError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(f"wrote {len(rows)} curve rows to {out_csv}")


@main.command()
@click.option("--variant", type=click.Choice(["standard", "negative_fill"]), default="standard")
@click.option("--fills", required=True, help="comma-separated rationals, e.g. 0,1/2,1")
@click.option("--t", type=int, default=2, show_default=True)
@click.option("--grid", default="1/2", show_default=True)
@click.option("--max-nodes", type=int, default=2_000_000)
@click.option("--compare-greedy", is_flag=True, help="also value the greedy-forced tree")
def oracle(variant, fills, t, grid, max_nodes, compare_greedy) -> None:
    """Exhaustive game-tree value of a small instance."""
    var = STANDARD if variant == "standard" else NEGATIVE_FILL
    try:
        state = cup_state([rat(x) for x in fills.split(",")], var)
        cfg = OracleConfig(grid=rat(grid), horizon=t, max_nodes=max_nodes)
        value = opt_oracle(state, cfg)
        out = {"value": f"{value.numerator}/{value.denominator}"}
        if compare_greedy:
            forced = opt_oracle(state, cfg, force_greedy=True)
            out["greedy_value"] = f"{forced.numerator}/{forced.denominator}"
            out["equal"] = value == forced
        click.echo(json.dumps(out))
    except CupGameError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
