from benney_cli.commands.common import console, emit, print_section, run_with_spinner, wave_from_config
from benney_cli.core.stability import assemble_d, closed_form_d22_dnoidal, closed_form_d_snoidal
from benney_cli.core.waves import WaveFamily


def run_dmatrix(config):
    """Main function to assemble the D matrix and compare it with its closed form."""
    wave = wave_from_config(config)
    d = run_with_spinner("Assembling D...", assemble_d, wave)
    p = wave.params

    if p.family is WaveFamily.DNOIDAL:
        closed_d22 = closed_form_d22_dnoidal(p.c, p.beta, p.sigma, p.kappa)
        closed_det = None
    else:
        closed = closed_form_d_snoidal(p.c, p.beta, p.sigma, p.kappa)
        closed_d22 = closed.entries[1, 1]
        closed_det = closed.det

    print_section("D matrix")
    for row in d.entries:
        console.print("  " + "  ".join(f"{v: .6e}" for v in row))
    console.print(f"  det D = {d.det:.6e}, n(D) = {d.n_d}")
    console.print(f"  D22 numerical {d.entries[1, 1]:.10g}, closed form {closed_d22:.10g}")

    data = d.to_dict()
    data["closed_form"] = {"d22": closed_d22, "det": closed_det}
    header, rows = d.to_rows()
    emit(config, data, header, rows)
    console.print("[green]✅ D matrix assembled.[/green]")
    return d
