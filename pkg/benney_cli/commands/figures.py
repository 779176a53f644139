from pathlib import Path

import numpy as np

from benney_cli.commands.common import console, print_section, run_with_spinner
from benney_cli.core.stability import closed_form_f, closed_form_h, d22_ratio
from benney_cli.errors import ParameterDomainError
from benney_cli.utils.output import write_csv

KAPPA_MIN = 0.02
KAPPA_MAX = 0.98

FIGURE_FUNCTIONS = {
    "d22_ratio.csv": d22_ratio,
    "f_kappa.csv": closed_form_f,
    "h_kappa.csv": closed_form_h,
}


def figure_rows(func, kappas):
    rows = []
    for kappa in kappas:
        value = func(float(kappa))
        rows.append((float(kappa), value, int(np.sign(value))))
    return rows


def run_figures(config):
    """Main function to tabulate the kappa-dependent factors of D for plotting."""
    if config.out is None:
        raise ParameterDomainError("figures needs --out DIR")
    points = int(config.extras.get("points", 193))
    if points < 2:
        raise ParameterDomainError(f"figures needs at least 2 points, got {points}")
    kappas = np.linspace(KAPPA_MIN, KAPPA_MAX, points)
    out_dir = Path(config.out)

    print_section("Figures", f"kappa in [{KAPPA_MIN}, {KAPPA_MAX}], {points} points\noutput: {out_dir}")
    written = []
    for name, func in FIGURE_FUNCTIONS.items():
        rows = run_with_spinner(f"Tabulating {name}...", figure_rows, func, kappas)
        write_csv(["kappa", "value", "sign"], rows, out_dir / name)
        signs = {row[2] for row in rows}
        console.print(f"[green]✅ {name}: {len(rows)} rows, sign {sorted(signs)}[/green]")
        written.append(out_dir / name)
    return written
