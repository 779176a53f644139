import functools

import click
from rich.markup import escape

from benney_cli.commands.asymptotics import run_asymptotics
from benney_cli.commands.common import console
from benney_cli.commands.continuation import run_continuation
from benney_cli.commands.dmatrix import run_dmatrix
from benney_cli.commands.figures import run_figures
from benney_cli.commands.spectrum import run_spectrum
from benney_cli.commands.stability import run_stability
from benney_cli.commands.sweep import run_sweep
from benney_cli.commands.wave import run_wave
from benney_cli.core.waves import WaveFamily
from benney_cli.errors import BenneyError
from benney_cli.utils.config import RunConfig, load_config, normalize_key, parse_range
from benney_cli.utils.logger import setup_logging
from benney_cli.utils.output import FORMATS

MIN_CLI_GRID_SIZE = 64

COMMANDS = {
    "wave": run_wave,
    "spectrum": run_spectrum,
    "dmatrix": run_dmatrix,
    "stability": run_stability,
    "sweep": run_sweep,
    "figures": run_figures,
    "asymptotics": run_asymptotics,
    "continuation": run_continuation,
}


class RangeType(click.ParamType):
    """A comma list `a,b,c` or a linspace triple `start:stop:count`."""

    name = "range"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            return parse_range(value)
        except BenneyError as e:
            self.fail(str(e), param, ctx)


RANGE = RangeType()


def run(config: RunConfig) -> int:
    """Dispatch a subcommand and map failures to exit codes (1: domain, 2: numerical)."""
    try:
        COMMANDS[config.command](config)
    except BenneyError as e:
        console.print(f"[red]❌ {escape(str(e))}[/red]", soft_wrap=True)
        return e.exit_code
    return 0


def _option_aliases(group):
    """Map every accepted config key to (command, parameter name) pairs."""
    aliases = {}
    for cmd_name, cmd in group.commands.items():
        for param in cmd.params:
            for key in {param.name, *(normalize_key(o) for o in param.opts)}:
                aliases.setdefault(key, []).append((cmd_name, param.name))
    return aliases


def output_options(func):
    @click.option("--grid-size", type=click.IntRange(min=MIN_CLI_GRID_SIZE), default=256, show_default=True,
                  help="Number of grid points on one period (even).")
    @click.option("--out", type=click.Path(dir_okay=True), default=None,
                  help="Output path; stdout when omitted.")
    @click.option("--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True,
                  help="Artifact format.")
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def wave_options(func):
    @click.option("--family", type=click.Choice([f.value for f in WaveFamily]), required=True,
                  help="Wave family.")
    @click.option("--c", "c", type=float, required=True, help="Wave speed c (nonzero).")
    @click.option("--beta", type=float, required=True, help="Nonlinear coupling beta.")
    @click.option("--sigma", type=float, required=True, help="Frequency parameter sigma.")
    @click.option("--omega", type=float, default=0.0, show_default=True, help="Carrier frequency omega.")
    @click.option("--kappa", type=float, required=True, help="Elliptic modulus, 0 < kappa < 1.")
    @output_options
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def _finish(ctx, command, extras=None, **values):
    code = run(RunConfig(command=command, extras=extras or {}, **values))
    ctx.exit(code)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="File of `key = value` option defaults.")
@click.option("-v", "--verbose", count=True, help="Repeat for more logging (-v info, -vv debug).")
@click.pass_context
def cli(ctx, config_path, verbose):
    """Benney CLI: periodic waves of the Benney system and their spectral stability."""
    setup_logging(verbose)
    if config_path is None:
        return
    aliases = _option_aliases(ctx.command)
    try:
        values = load_config(config_path, known_keys=set(aliases))
    except BenneyError as e:
        console.print(f"[red]❌ {escape(str(e))}[/red]", soft_wrap=True)
        ctx.exit(e.exit_code)
    default_map = {}
    for key, value in values.items():
        for cmd_name, param_name in aliases[key]:
            default_map.setdefault(cmd_name, {})[param_name] = value
    ctx.default_map = default_map


@cli.command()
@wave_options
@click.pass_context
def wave(ctx, **values):
    """Sample a dnoidal or snoidal wave profile."""
    _finish(ctx, "wave", **values)


@cli.command()
@wave_options
@click.option("--count", type=click.IntRange(min=1), default=8, show_default=True,
              help="Eigenvalues reported per Hill operator.")
@click.pass_context
def spectrum(ctx, count, **values):
    """Spectra of the Hill operators L, L1, L2 and of JH."""
    _finish(ctx, "spectrum", extras={"count": count}, **values)


@cli.command()
@wave_options
@click.pass_context
def dmatrix(ctx, **values):
    """Assemble the 3x3 matrix D."""
    _finish(ctx, "dmatrix", **values)


@cli.command()
@wave_options
@click.pass_context
def stability(ctx, **values):
    """Index count and eigenvalue counts for one wave."""
    _finish(ctx, "stability", **values)


@cli.command()
@click.option("--family", type=click.Choice([f.value for f in WaveFamily]), required=True, help="Wave family.")
@click.option("--c", "c", type=RANGE, required=True, help="Wave speeds, a,b,c or start:stop:count.")
@click.option("--beta", type=RANGE, required=True, help="Values of beta.")
@click.option("--sigma", type=RANGE, required=True, help="Values of sigma.")
@click.option("--omega", type=RANGE, default="0", show_default=True, help="Values of omega.")
@click.option("--kappa", type=RANGE, required=True, help="Elliptic moduli.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
              help="Worker processes.")
@output_options
@click.pass_context
def sweep(ctx, workers, **values):
    """Stability verdicts over a Cartesian parameter grid."""
    _finish(ctx, "sweep", extras={"workers": workers}, **values)


@cli.command()
@click.option("--out", type=click.Path(file_okay=False), required=True, help="Output directory.")
@click.option("--points", type=click.IntRange(min=2), default=193, show_default=True,
              help="Number of kappa samples.")
@click.pass_context
def figures(ctx, out, points):
    """Tabulate the kappa factors of D22, F and H as CSV."""
    _finish(ctx, "figures", extras={"points": points}, out=out, fmt="csv")


def snoidal_options(func):
    @click.option("--c", "c", type=float, default=1.0, show_default=True, help="Wave speed c > 0.")
    @click.option("--sigma", type=float, default=-1.0, show_default=True, help="Frequency parameter sigma < 0.")
    @click.option("--kappa", type=float, required=True, help="Elliptic modulus.")
    @click.option("--epsilons", type=RANGE, default=None, help="Offsets beta - 1/c.")
    @output_options
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


@cli.command()
@snoidal_options
@click.pass_context
def asymptotics(ctx, epsilons, **values):
    """Snoidal det D against its leading small-epsilon prediction."""
    _finish(ctx, "asymptotics", extras={"epsilons": epsilons}, family=WaveFamily.SNOIDAL.value, **values)


@cli.command()
@snoidal_options
@click.pass_context
def continuation(ctx, epsilons, **values):
    """Follow the snoidal unstable eigenvalue as beta decreases toward 1/c."""
    _finish(ctx, "continuation", extras={"epsilons": epsilons}, family=WaveFamily.SNOIDAL.value, **values)


if __name__ == "__main__":
    cli()
