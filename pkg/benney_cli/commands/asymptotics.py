from benney_cli.commands.common import console, emit, print_section, run_with_spinner
from benney_cli.core.stability import AsymptoticsRow, closed_form_h, snoidal_detd_asymptotics

DEFAULT_EPSILONS = (1e-1, 1e-2, 1e-3, 1e-4)


def run_asymptotics(config):
    """Main function to compare snoidal det D with its small-epsilon prediction."""
    epsilons = config.extras.get("epsilons") or DEFAULT_EPSILONS
    rows = run_with_spinner(
        "Assembling D along beta = 1/c + epsilon...",
        snoidal_detd_asymptotics,
        config.c, config.sigma, config.kappa, epsilons, config.grid_size,
    )

    print_section("det D asymptotics", f"kappa = {config.kappa}, H(kappa) = {closed_form_h(config.kappa):.6g}")
    for row in rows:
        mark = "[green]✅[/green]" if row.asymptotic else "[yellow]⚠️[/yellow]"
        console.print(f"  {mark} epsilon={row.epsilon:g}  det D={row.det_d:.6e}  ratio={row.ratio:.6f}")

    data = {
        "c": config.c,
        "sigma": config.sigma,
        "kappa": config.kappa,
        "rows": [row._asdict() for row in rows],
    }
    emit(config, data, AsymptoticsRow._fields, rows)
    return rows
