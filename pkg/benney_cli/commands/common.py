import click
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from benney_cli.core.waves import make_wave
from benney_cli.utils.logger import console
from benney_cli.utils.output import write_artifact


def print_section(title, content=None):
    """Print a section with a title and optional content."""
    console.print(f"\n[bold blue]{title}[/bold blue]")
    if content:
        console.print(Panel(content))


def run_with_spinner(message, func, *args, **kwargs):
    """Run a computation behind a transient spinner."""
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task(description=message, total=None)
        result = func(*args, **kwargs)
        progress.update(task, completed=True)
    return result


def wave_from_config(config):
    return run_with_spinner(
        f"Building {config.family} wave...",
        make_wave,
        config.family,
        config.c,
        config.beta,
        config.sigma,
        config.omega,
        config.kappa,
        config.grid_size,
    )


def summary_table(title, values):
    table = Table(title=title, show_header=False)
    table.add_column("Quantity", style="cyan")
    table.add_column("Value")
    for key, value in values.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        table.add_row(key, str(value))
    return table


def emit(config, data, header, rows):
    """Write the artifact to --out, or to stdout when no path was given."""
    text = write_artifact(config.fmt, data, header, rows, config.out)
    if text is None:
        console.print(f"[green]✅ Wrote {config.fmt.upper()} to {config.out}[/green]")
    else:
        click.echo(text, nl=False)
