from benney_cli.commands.common import console, emit, print_section, run_with_spinner, summary_table, wave_from_config
from benney_cli.core.linearization import assemble_jh, eigen_spectrum_jh, generalized_kernel_basis, verify_no_higher_jordan_blocks
from benney_cli.core.stability import StabilityReport, Verdict, krein_verdict
from benney_cli.errors import InconclusiveError

VERDICT_STYLE = {
    Verdict.STABLE: "[green]✅ Spectrally stable[/green]",
    Verdict.UNSTABLE: "[red]❌ Unstable[/red]",
    Verdict.INDETERMINATE: "[yellow]⚠️ Indeterminate[/yellow]",
}


def _jordan_structure(wave, op):
    if wave.params.c <= 0:
        return None
    basis = generalized_kernel_basis(wave, op)
    try:
        return verify_no_higher_jordan_blocks(wave, basis, op)
    except InconclusiveError as e:
        console.print(f"[yellow]⚠️ Jordan structure inconclusive: {e}[/yellow]")
        return None


def run_stability(config):
    """Main function to run the full stability analysis of one wave."""
    wave = wave_from_config(config)
    op = assemble_jh(wave)
    eigen = run_with_spinner("Computing the spectrum of JH...", eigen_spectrum_jh, op)
    report = run_with_spinner("Counting negative directions...", krein_verdict, wave, op, eigen)
    jordan = run_with_spinner("Checking Jordan structure...", _jordan_structure, wave, op)

    summary = report.to_dict()
    summary["jordan_chains_of_length_two"] = jordan
    print_section("Stability")
    console.print(summary_table("Index count", {
        k: summary[k]
        for k in ("n_h", "n_d", "k_ham", "det_d", "k_real", "k_complex_quadruplets", "max_real_part", "zero_cluster_dim")
    }))
    if not report.index_formula_applies:
        console.print("[yellow]⚠️ c < 0: the index count does not apply, verdict from eigenvalues.[/yellow]")
    if not report.consistency:
        console.print("[yellow]⚠️ Index count and eigenvalue counts disagree.[/yellow]")
    console.print(VERDICT_STYLE[report.verdict])

    emit(config, summary, StabilityReport.ROW_HEADER, [report.to_row()])
    return report
