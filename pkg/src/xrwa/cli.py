"""Command-line scenario runner and benchmark harness.

Exit codes: 0 on success, 2 for configuration problems, 3 when a world
invariant is found broken.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import xauth
from .credential import canonical_serialize
from .errors import ConfigError, InvariantViolation, XrwaError
from .experiments import (
    MetricsReport,
    ScenarioConfig,
    bench_spv,
    bench_vc,
    cost_compare,
    run as run_experiment,
)
from .fixtures import FIXTURE_TYPES, issue_fixture_set

EXIT_CONFIG = 2
EXIT_INVARIANT = 3


def _emit(report: MetricsReport, out: str | None, fmt: str) -> None:
    if fmt == "json":
        text = json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    else:
        text = report.rows_csv()
    if out:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {fmt} report to {out}")
    else:
        click.echo(text, nl=False)


def _guarded(fn):
    try:
        return fn()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except InvariantViolation as exc:
        click.echo(f"invariant violation: {exc}", err=True)
        sys.exit(EXIT_INVARIANT)
    except XrwaError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


out_option = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report here instead of stdout.")
format_option = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
seed_option = click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=42, show_default=True)


@click.group()
def main() -> None:
    """Cross-chain asset toolkit: scenario replay and benchmarks."""


@main.command("run")
@click.option("--config", "config_path", type=click.Path(exists=False), default=None, help="JSON scenario config.")
@seed_option
@out_option
@format_option
def run_cmd(config_path: str | None, seed: int, out: str | None, fmt: str) -> None:
    """Run a configured experiment (default: the end-to-end trade)."""

    def body():
        if config_path:
            config = ScenarioConfig.from_file(config_path)
        else:
            config = ScenarioConfig(seed=seed)
        report = run_experiment(config)
        _emit(report, out, fmt)

    _guarded(body)


@main.command("bench-vc")
@click.option("--creds", type=click.IntRange(min=1), default=500, show_default=True, help="Credentials per worker iteration set.")
@click.option("--iterations", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=8, show_default=True)
@seed_option
@out_option
@format_option
def bench_vc_cmd(creds: int, iterations: int, workers: int, seed: int, out: str | None, fmt: str) -> None:
    """Benchmark credential issuance and verification latency."""
    _guarded(lambda: _emit(bench_vc(creds, iterations, workers, seed), out, fmt))


@main.command("bench-spv")
@click.option("--sizes", default=",".join(str(2**k) for k in range(5, 14)), show_default=True, help="Comma-separated leaf counts.")
@click.option("--reps", type=click.IntRange(min=10), default=10_000, show_default=True)
@seed_option
@out_option
@format_option
def bench_spv_cmd(sizes: str, reps: int, seed: int, out: str | None, fmt: str) -> None:
    """Benchmark inclusion-proof verification across block sizes."""

    def body():
        try:
            parsed = [int(s) for s in sizes.split(",") if s.strip()]
        except ValueError:
            raise ConfigError(f"bad --sizes list: {sizes!r}") from None
        _emit(bench_spv(parsed, reps, seed), out, fmt)

    _guarded(body)


@main.command("cost-compare")
@click.option("--n", "n_values", default="1,2,5,10,100", show_default=True, help="Comma-separated interaction counts.")
@seed_option
@out_option
@format_option
def cost_compare_cmd(n_values: str, seed: int, out: str | None, fmt: str) -> None:
    """Compare per-route settlement cost totals from simulated op counts."""

    def body():
        try:
            parsed = [int(s) for s in n_values.split(",") if s.strip()]
        except ValueError:
            raise ConfigError(f"bad --n list: {n_values!r}") from None
        _emit(cost_compare(parsed, seed), out, fmt)

    _guarded(body)


@main.command("fixtures")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="fixtures", show_default=True)
def fixtures_cmd(out_dir: str) -> None:
    """Emit the seven golden credential documents."""

    def body():
        target = Path(out_dir)
        target.mkdir(parents=True, exist_ok=True)
        for name, cred in issue_fixture_set().items():
            path = target / f"{name.lower()}.json"
            path.write_bytes(canonical_serialize(cred) + b"\n")
            click.echo(f"wrote {path}")
        click.echo(f"{len(FIXTURE_TYPES)} fixtures written to {target}")

    _guarded(body)


@main.command("verify-proof")
@click.option("--bundle", type=click.Path(exists=False), required=True, help="Report or bundle JSON with proof, tx and headers.")
def verify_proof_cmd(bundle: str) -> None:
    """Offline inclusion-proof check against a relayed header file."""

    def body():
        try:
            data = json.loads(Path(bundle).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read bundle {bundle}: {exc}") from None
        artifacts = data.get("derived", {}).get("artifacts", data)
        for key in ("proof", "tx", "headers"):
            if key not in artifacts:
                raise ConfigError(f"bundle is missing {key!r}")
        ok = xauth.offline_verify(artifacts["proof"], artifacts["tx"], artifacts["headers"])
        click.echo("proof verifies" if ok else "proof REJECTED")
        if not ok:
            sys.exit(EXIT_INVARIANT)

    _guarded(body)


if __name__ == "__main__":
    main()
