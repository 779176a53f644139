from dataclasses import asdict

from benney_cli.commands.common import console, emit, print_section, run_with_spinner, summary_table, wave_from_config
from benney_cli.core.hill import morse_decomposition, spectrum, wave_operators
from benney_cli.core.linearization import assemble_jh, eigen_spectrum_jh


def run_spectrum(config):
    """Main function to compute the Hill spectra of L, L1, L2 and the spectrum of JH."""
    wave = wave_from_config(config)
    count = int(config.extras.get("count", 8))

    operators = wave_operators(wave)
    reports = [
        run_with_spinner(f"Solving {label.value}...", spectrum, op, count)
        for label, op in operators.items()
    ]
    op = assemble_jh(wave, operators)
    eigen = run_with_spinner("Computing the spectrum of JH...", eigen_spectrum_jh, op)

    print_section("Hill operators")
    for report in reports:
        console.print(
            f"  {report.label}: n = {report.morse_index}, kernel = {report.kernel_dim}, "
            f"lowest = {report.eigenvalues[0]:.6g}"
        )
    print_section("Linearized operator JH")
    console.print(summary_table("JH spectrum", eigen.summary()))

    data = {
        "operators": {r.label: r.to_dict() for r in reports},
        "jh": eigen.to_dict(),
    }
    if wave.params.c > 0:
        decomposition = morse_decomposition(wave, op.h)
        data["morse"] = {**asdict(decomposition), "holds": decomposition.holds}

    header = ["operator", "index", "real", "imag"]
    rows = [(label, i, value, 0.0) for r in reports for label, i, value in r.to_rows()]
    rows += [("JH", i, re, im) for i, re, im in eigen.to_rows()]
    emit(config, data, header, rows)
    console.print("[green]✅ Spectra computed.[/green]")
    return data
