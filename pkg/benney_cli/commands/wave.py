import logging

from benney_cli.commands.common import console, emit, print_section, summary_table, wave_from_config
from benney_cli.core.waves import check_phase_periodicity

logger = logging.getLogger(__name__)

PHASE_RTOL = 1e-6


def run_wave(config):
    """Main function to build a periodic wave profile and write its samples."""
    wave = wave_from_config(config)
    p = wave.params
    phase = check_phase_periodicity(p)
    if phase.residual > PHASE_RTOL:
        logger.warning(
            "carrier phase c*T/(2 pi) = %.6g is not an integer (off by %.3g)",
            phase.q, phase.residual,
        )

    print_section(f"{p.family.value.capitalize()} wave")
    console.print(summary_table("Wave parameters", {
        "alpha": p.alpha,
        "phi0": p.phi0,
        "half period T": p.half_period,
        "gamma": p.gamma,
        "first integral A": p.first_integral_a,
        "ODE residual": wave.ode_residual,
        "first integral spread": wave.first_integral_residual,
    }))

    data = wave.to_dict()
    data["phase"] = phase._asdict()
    header, rows = wave.to_rows()
    emit(config, data, header, rows)
    console.print(f"[green]✅ {p.family.value} wave sampled on {wave.grid_size} points.[/green]")
    return wave
