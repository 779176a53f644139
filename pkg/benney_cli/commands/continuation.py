from benney_cli.commands.common import console, emit, print_section, run_with_spinner
from benney_cli.core.stability import ContinuationPoint, continuation_sweep

DEFAULT_EPSILONS = (0.1, 0.05, 0.02, 0.01)


def run_continuation(config):
    """Main function to follow the snoidal unstable eigenvalue as beta decreases to 1/c."""
    epsilons = config.extras.get("epsilons") or DEFAULT_EPSILONS
    result = run_with_spinner(
        "Following the spectrum of JH...",
        continuation_sweep,
        config.c, config.sigma, config.kappa, epsilons, config.grid_size,
    )

    print_section("Continuation in beta")
    for pt in result.points:
        console.print(
            f"  epsilon={pt.epsilon:g}  k_real={pt.k_real}  quadruplets={pt.k_complex_quadruplets}  "
            f"zero cluster={pt.zero_cluster_dim}  "
            f"max Re={pt.max_real_part:.6g}"
        )
    if result.holds:
        console.print("[green]✅ A real unstable eigenvalue persists along the whole path.[/green]")
    elif result.unstable_throughout:
        console.print(
            "[yellow]⚠️ The wave stays unstable, but part of the path is driven by a complex quadruplet.[/yellow]"
        )
    else:
        console.print("[yellow]⚠️ The unstable eigenvalue or the zero cluster was lost along the path.[/yellow]")

    data = {
        "c": result.c,
        "sigma": result.sigma,
        "kappa": result.kappa,
        "holds": result.holds,
        "unstable_throughout": result.unstable_throughout,
        "points": [pt._asdict() for pt in result.points],
    }
    emit(config, data, ContinuationPoint._fields, result.points)
    return result
