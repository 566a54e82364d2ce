#!/usr/bin/env python3
"""
Command line for the mKdV5 laboratory using Typer and Rich

Exit codes: 0 success, 1 failed check or numerical failure, 2 configuration error.
"""

import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import typer
from pydantic import ValidationError as PydanticValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

# Add the project root to the path
sys.path.insert(0, str(Path(__file__).parent.parent))

from mkdv_core import storage
from mkdv_core.asymptotics import PATHS, delta_A0, predict_on_ray
from mkdv_core.evolution import evolve as run_evolution
from mkdv_core.exceptions import ConfigurationError, MkdvLabError, ValidationError
from mkdv_core.harness import (
    build_manifest,
    compare_on_ray,
    initial_field,
    initial_potential,
    ist_consistency,
    spectral_grid,
)
from mkdv_core.model_rhp import beta_constants, wronskian_report
from mkdv_core.models_pydantic import ExperimentConfig, VerificationReport
from mkdv_core.scalar_rhp import ReflectionFunction, ScalarRHPData, delta_table
from mkdv_core.scattering import scatter as run_scatter
from mkdv_core.utils import setup_logging
from mkdv_core.verification import SUITES, verify as run_verify

EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2

# Initialize Rich console
console = Console()

# Create Typer app
app = typer.Typer(
    name="mkdv5-lab",
    help="Long-time asymptotics laboratory for the fifth-order modified KdV equation",
    add_completion=False,
)


@app.callback()
def main_options(
    log_level: str = typer.Option("INFO", "--log-level", "-l", help="Logging level"),
):
    """Configure logging for every subcommand"""
    setup_logging(log_level, console)


def load_config(config: Optional[Path], **overrides) -> ExperimentConfig:
    """Config from JSON (or defaults) with non-None command-line overrides applied"""
    try:
        cfg = ExperimentConfig.from_json_file(str(config)) if config else ExperimentConfig()
        return cfg.with_overrides(**overrides)
    except ConfigurationError as e:
        console.print(f"❌ {e}", style="red")
        raise typer.Exit(EXIT_CONFIG_ERROR)


def fail(e: Exception, action: str):
    """Print a library error and exit with the matching code"""
    if isinstance(e, (ConfigurationError, ValidationError, PydanticValidationError)):
        console.print(f"❌ Invalid input for {action}: {e}", style="red")
        raise typer.Exit(EXIT_CONFIG_ERROR)
    console.print(f"❌ Failed to {action}: {e}", style="red")
    raise typer.Exit(EXIT_CHECK_FAILED)


def output_dir(out: Optional[Path], cfg: ExperimentConfig) -> Path:
    path = Path(out) if out else Path(cfg.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def print_report(report: VerificationReport, title: str):
    table = Table(title=title)
    table.add_column("Suite", style="cyan", no_wrap=True)
    table.add_column("Check", style="cyan")
    table.add_column("Value", justify="right")
    table.add_column("Threshold", justify="right")
    table.add_column("Status")
    table.add_column("Detail", style="blue")
    for check in report.checks:
        status = "[green]PASS[/green]" if check.passed else "[red]FAIL[/red]"
        table.add_row(check.suite, check.name, f"{check.value:.3e}", f"{check.threshold:.1e}", status, check.detail)
    console.print(table)


ConfigOption = typer.Option(None, "--config", "-c", help="Experiment config (JSON)")
OutOption = typer.Option(None, "--out", "-o", help="Output directory (default: config output_dir)")


@app.command()
def scatter(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    data: Optional[str] = typer.Option(None, "--data", "-d", help="Initial-data descriptor or CSV path"),
    zmin: Optional[float] = typer.Option(None, "--zmin", help="Spectral grid lower edge"),
    zmax: Optional[float] = typer.Option(None, "--zmax", help="Spectral grid upper edge"),
    nz: Optional[int] = typer.Option(None, "--nz", help="Spectral grid points (odd)"),
    z0: Optional[float] = typer.Option(None, "--z0", help="Stationary point for nu"),
):
    """Compute a(z), b(z), r(z) of the initial datum"""
    cfg = load_config(config, initial_data=data, zmin=zmin, zmax=zmax, nz=nz, z0=z0)
    directory = output_dir(out, cfg)
    try:
        with console.status("[bold green]Scattering..."):
            sd = run_scatter(initial_potential(cfg), spectral_grid(cfg), tol=cfg.scatter_tolerance, workers=cfg.workers)
        path = directory / "scattering.csv"
        storage.write_scattering_csv(path, sd)
        unitarity = sd.unitarity_defect()
        symmetry = sd.symmetry_defect() if np.allclose(sd.zgrid, -sd.zgrid[::-1]) else float("nan")
        nu_value = ScalarRHPData(ReflectionFunction.from_scattering(sd), cfg.z0).nu
        manifest = build_manifest("scatter", cfg, outputs=[path.name])
        storage.write_model_json(directory / "manifest.json", manifest)
    except MkdvLabError as e:
        fail(e, "scatter")

    content = f"""
[bold cyan]Datum:[/bold cyan] {cfg.initial_data}
[bold cyan]Grid:[/bold cyan] {cfg.nz} points on [{cfg.zmin:g}, {cfg.zmax:g}]
[bold cyan]Unitarity defect:[/bold cyan] {unitarity:.3e}
[bold cyan]Symmetry defect:[/bold cyan] {symmetry:.3e}
[bold cyan]sup |r|:[/bold cyan] {sd.reflection_sup:.6f}
[bold cyan]nu(z0 = {cfg.z0:g}):[/bold cyan] {nu_value:.6g}
    """
    console.print(Panel(content, title="Scattering data", border_style="blue"))
    console.print(f"✅ Wrote {path}", style="green")
    if unitarity > cfg.tolerances.unitarity or symmetry > cfg.tolerances.symmetry:
        console.print("❌ Scattering defects above tolerance", style="red")
        raise typer.Exit(EXIT_CHECK_FAILED)


@app.command()
def evolve(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    t_final: Optional[float] = typer.Option(None, "--t-final", "-t", help="Final time (default: last scheduled time)"),
    dt: Optional[float] = typer.Option(None, "--dt", help="Time step"),
):
    """Evolve the initial datum and write checkpoint fields"""
    cfg = load_config(config, dt=dt)
    directory = output_dir(out, cfg)
    horizon = t_final if t_final is not None else max(cfg.schedule)
    checkpoints = [t for t in cfg.schedule if t <= horizon]
    try:
        with console.status(f"[bold green]Evolving to t = {horizon:g}...") as status:
            result = run_evolution(
                initial_field(cfg),
                horizon,
                cfg.dt,
                checkpoints=checkpoints,
                padding=cfg.padding,
                wrap_guard_tol=cfg.wrap_guard_tol,
                wrap_guard_action=cfg.wrap_guard_action,
                progress=lambda t: status.update(f"[bold green]Reached t = {t:g}"),
                workers=cfg.workers,
            )
        written = [storage.write_checkpoint(directory, snap).name for snap in result.checkpoints]
        if not result.checkpoints or result.checkpoints[-1].t != result.final.t:
            written.append(storage.write_checkpoint(directory, result.final).name)
        manifest = build_manifest("evolve", cfg, evolution=result, outputs=written)
        storage.write_model_json(directory / "manifest.json", manifest)
    except MkdvLabError as e:
        fail(e, "evolve")

    table = Table(title="Drift log")
    table.add_column("t", justify="right", style="cyan")
    table.add_column("Mass drift", justify="right")
    table.add_column("L2 drift", justify="right")
    table.add_column("Wrap level", justify="right", style="yellow")
    for rec in result.drift_log:
        table.add_row(f"{rec.time:g}", f"{rec.mass_drift:.2e}", f"{rec.l2_drift:.2e}", f"{rec.wrap_level:.2e}")
    console.print(table)
    console.print(f"✅ {result.steps} steps, {len(written)} field files in {directory}", style="green")

    worst_mass = max(rec.mass_drift for rec in result.drift_log)
    worst_l2 = max(rec.l2_drift for rec in result.drift_log)
    if worst_mass > cfg.tolerances.mass_drift or worst_l2 > cfg.tolerances.l2_drift:
        console.print("❌ Invariant drift above tolerance", style="red")
        raise typer.Exit(EXIT_CHECK_FAILED)


@app.command()
def asymptote(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    z0: Optional[float] = typer.Option(None, "--z0", help="Stationary point labelling the ray"),
    path: str = typer.Option("closed-form", "--path", "-p", help="closed-form | exp-weighted | modulus-normalized"),
    reflection: Optional[Path] = typer.Option(None, "--reflection", "-r", help="scattering.csv to use instead of scattering the datum"),
    times: Optional[List[float]] = typer.Option(None, "--time", "-t", help="Times on the ray (repeatable; default: schedule)"),
):
    """Leading-order predictions along x = -80 z0^4 t"""
    cfg = load_config(config, z0=z0)
    directory = output_dir(out, cfg)
    if path not in PATHS:
        console.print(f"❌ Unknown path '{path}'; choose from {', '.join(PATHS)}", style="red")
        raise typer.Exit(EXIT_CONFIG_ERROR)
    schedule = list(times) if times else cfg.schedule
    try:
        with console.status("[bold green]Evaluating asymptotics..."):
            if reflection:
                sd = storage.read_scattering_csv(reflection)
            else:
                sd = run_scatter(initial_potential(cfg), spectral_grid(cfg), tol=cfg.scatter_tolerance, workers=cfg.workers)
            srhp = ScalarRHPData(ReflectionFunction.from_scattering(sd), cfg.z0)
            predictions = predict_on_ray(cfg.z0, schedule, srhp, path)
            pred_path = directory / "predictions.csv"
            storage.write_predictions_csv(pred_path, predictions)
            points = np.linspace(-2.0 * cfg.z0, 2.0 * cfg.z0, 41) + 0.1j
            delta_path = directory / "delta.csv"
            storage.write_delta_csv(delta_path, delta_table(points, srhp))
            manifest = build_manifest("asymptote", cfg, branch=path, outputs=[pred_path.name, delta_path.name])
            storage.write_model_json(directory / "manifest.json", manifest)
    except MkdvLabError as e:
        fail(e, "evaluate the asymptotics")

    table = Table(title=f"Predictions on z0 = {cfg.z0:g} ({path})")
    table.add_column("t", justify="right", style="cyan")
    table.add_column("x", justify="right")
    table.add_column("Envelope", justify="right", style="green")
    table.add_column("q", justify="right")
    table.add_column("|delta_A0|", justify="right", style="blue")
    for p in predictions:
        table.add_row(f"{p.t:g}", f"{p.x:.2f}", f"{p.envelope:.6e}", f"{p.value:+.6e}", f"{abs(delta_A0(p.x, p.t, srhp)):.12f}")
    console.print(table)
    console.print(f"✅ nu = {srhp.nu:.6g}; wrote {pred_path} and {delta_path}", style="green")


@app.command()
def compare(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    z0: Optional[float] = typer.Option(None, "--z0", help="Stationary point labelling the ray"),
    dt: Optional[float] = typer.Option(None, "--dt", help="Time step"),
    zmin: Optional[float] = typer.Option(None, "--zmin", help="Spectral grid lower edge"),
    zmax: Optional[float] = typer.Option(None, "--zmax", help="Spectral grid upper edge"),
    nz: Optional[int] = typer.Option(None, "--nz", help="Spectral grid points (odd)"),
    skip_ist: bool = typer.Option(False, "--skip-ist", help="Do not run the IST consistency check first"),
):
    """Compare the evolved solution with the asymptotic formulas on the ray"""
    cfg = load_config(config, z0=z0, dt=dt, zmin=zmin, zmax=zmax, nz=nz)
    directory = output_dir(out, cfg)
    ist = None
    try:
        if not skip_ist:
            with console.status("[bold green]IST consistency check..."):
                ist = ist_consistency(cfg)
        with console.status("[bold green]Running the comparison...") as status:
            result = compare_on_ray(cfg, progress=lambda t: status.update(f"[bold green]Evolved to t = {t:g}"))
        table_path = directory / "comparison.csv"
        storage.write_comparison_csv(table_path, result.rows)
        report_path = storage.write_model_json(directory / "acceptance.json", result.report)
        notes = [f"{name}: mean envelope error {err:.4g}" for name, err in result.path_errors.items()]
        manifest = build_manifest(
            "compare",
            cfg,
            evolution=result.evolution,
            ist=ist,
            branch=result.selected,
            slope=result.envelope_slope,
            outputs=[table_path.name, report_path.name],
            notes=notes,
        )
        storage.write_model_json(directory / "manifest.json", manifest)
    except MkdvLabError as e:
        fail(e, "compare")

    table = Table(title=f"Comparison on z0 = {cfg.z0:g} (selected: {result.selected})")
    table.add_column("t", justify="right", style="cyan")
    table.add_column("x", justify="right")
    table.add_column("q_num", justify="right")
    table.add_column("q_asym", justify="right")
    table.add_column("Env num", justify="right", style="green")
    table.add_column("Env asym", justify="right", style="green")
    table.add_column("err t/log t", justify="right", style="yellow")
    table.add_column("k", justify="right", style="blue")
    for row in result.rows:
        chosen = row.q_asym_closed if row.selected == "closed-form" else row.q_asym_assembled
        table.add_row(
            f"{row.t:g}",
            f"{row.x:.1f}",
            f"{row.q_num:+.4e}",
            f"{chosen:+.4e}",
            f"{row.envelope_num:.4e}",
            f"{row.envelope_asym:.4e}",
            f"{row.error_over_scale:.3e}",
            f"{row.wavenumber_num:.4f}",
        )
    console.print(table)
    print_report(result.report, "Acceptance checks")
    console.print(f"Envelope slope: {result.envelope_slope:.4f}; nu = {result.nu:.6g}", style="cyan")

    failed = not result.report.passed or (ist is not None and not ist.passed)
    if failed:
        console.print("❌ Some acceptance checks failed", style="red")
        raise typer.Exit(EXIT_CHECK_FAILED)
    console.print(f"✅ Wrote {table_path}", style="green")


@app.command("ist-check")
def ist_check(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    dt: Optional[float] = typer.Option(None, "--dt", help="Time step"),
):
    """Fit the time evolution of r(z) from scattering evolved fields"""
    cfg = load_config(config, dt=dt)
    directory = output_dir(out, cfg)
    try:
        with console.status("[bold green]Scattering evolved fields..."):
            report = ist_consistency(cfg)
        report_path = storage.write_model_json(directory / "ist.json", report)
        manifest = build_manifest("ist-check", cfg, ist=report, outputs=[report_path.name])
        storage.write_model_json(directory / "manifest.json", manifest)
    except MkdvLabError as e:
        fail(e, "run the IST check")

    table = Table(title="IST evolution law")
    table.add_column("t", justify="right", style="cyan")
    table.add_column("max ||r_t| - |r_0||", justify="right")
    table.add_column("sign", justify="right", style="green")
    table.add_column("rate", justify="right", style="green")
    table.add_column("phase residual", justify="right", style="yellow")
    for fit in report.fits:
        table.add_row(f"{fit.time:g}", f"{fit.modulus_residual:.2e}", f"{fit.sign:+d}", f"{fit.rate:g}", f"{fit.phase_residual:.2e}")
    console.print(table)
    if not report.passed:
        console.print("❌ IST consistency check failed", style="red")
        raise typer.Exit(EXIT_CHECK_FAILED)
    console.print(f"✅ Stable law exp({report.sign:+d} i {report.rate:g} t z^5)", style="green")


@app.command()
def verify(
    suite: str = typer.Option("all", "--suite", "-s", help=f"One of: {', '.join(list(SUITES) + ['all'])}"),
    out: Optional[Path] = OutOption,
):
    """Run an oracle suite and write a JSON report"""
    if suite != "all" and suite not in SUITES:
        console.print(f"❌ Unknown suite '{suite}'", style="red")
        raise typer.Exit(EXIT_CONFIG_ERROR)
    with console.status(f"[bold green]Running suite '{suite}'..."):
        report = run_verify(suite)
    print_report(report, f"Verification: {suite}")
    if out:
        try:
            storage.write_model_json(Path(out) / "verify.json", report)
        except MkdvLabError as e:
            fail(e, "write the report")
    if not report.passed:
        console.print(f"❌ {len(report.failures())} check(s) failed", style="red")
        raise typer.Exit(EXIT_CHECK_FAILED)
    console.print(f"✅ All {len(report.checks)} checks passed", style="green")


@app.command("verify-model")
def verify_model(
    nu_values: Optional[List[float]] = typer.Option(None, "--nu", help="nu values (repeatable; default 0.1, 0.5, 1)"),
):
    """Wronskian and beta-constant consistency of the model problem"""
    values = list(nu_values) if nu_values else [0.1, 0.5, 1.0]
    table = Table(title="Parabolic cylinder model problem")
    table.add_column("nu", justify="right", style="cyan")
    table.add_column("Wronskian rel. error", justify="right")
    table.add_column("Spread", justify="right")
    table.add_column("|b12 b21 + nu|", justify="right")
    table.add_column("|b12|^2 weighted", justify="right", style="green")
    table.add_column("|b12|^2 normalized", justify="right", style="green")
    failed = False
    try:
        for nu_value in values:
            report = wronskian_report(complex(-0.5, -nu_value))
            r = np.sqrt(-np.expm1(-2.0 * np.pi * nu_value))
            weighted = beta_constants(nu_value, r, "exp-weighted")
            normalized = beta_constants(nu_value, r, "modulus-normalized")
            product = abs(weighted.beta12 * weighted.beta21 + nu_value)
            failed |= report["relative_error"] > 1e-6 or report["spread"] > 1e-8 or product > 1e-14
            table.add_row(
                f"{nu_value:g}",
                f"{report['relative_error']:.2e}",
                f"{report['spread']:.2e}",
                f"{product:.1e}",
                f"{abs(weighted.beta12) ** 2:.6g}",
                f"{abs(normalized.beta12) ** 2:.6g}",
            )
    except MkdvLabError as e:
        fail(e, "verify the model problem")
    console.print(table)
    if failed:
        console.print("❌ Model problem consistency failed", style="red")
        raise typer.Exit(EXIT_CHECK_FAILED)
    console.print("✅ Wronskian and beta constants consistent", style="green")


def main():
    """Main entry point"""
    app()


if __name__ == "__main__":
    main()
