import itertools

from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn

from benney_cli.commands.common import console, emit, print_section
from benney_cli.core.stability import StabilityReport, SweepPoint, Verdict, sweep


def sweep_points(config):
    """Cartesian product of the ranged parameters, kappa varying fastest."""
    families = config.family if isinstance(config.family, tuple) else (config.family,)
    return [
        SweepPoint(family, c, beta, sigma, omega, kappa, config.grid_size)
        for family, c, beta, sigma, omega, kappa in itertools.product(
            families, config.c, config.beta, config.sigma, config.omega, config.kappa
        )
    ]


def run_sweep(config):
    """Main function to evaluate the stability verdict over a parameter grid."""
    points = sweep_points(config)
    workers = int(config.extras.get("workers", 1))
    reports = []
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task(description="Sweeping parameters...", total=len(points))
        for report in sweep(points, workers=workers):
            reports.append(report)
            progress.advance(task)

    counts = {v: sum(r.verdict is v for r in reports) for v in Verdict}
    print_section(
        "Sweep",
        f"{len(reports)} points: "
        + ", ".join(f"{n} {v.value}" for v, n in counts.items()),
    )
    data = {"columns": list(StabilityReport.ROW_HEADER), "rows": [r.to_dict() for r in reports]}
    emit(config, data, StabilityReport.ROW_HEADER, [r.to_row() for r in reports])
    console.print(f"[green]✅ Swept {len(reports)} parameter points.[/green]")
    return reports
