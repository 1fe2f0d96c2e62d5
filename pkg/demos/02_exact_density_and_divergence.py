"""The exact Haar density of single-qubit magic, and its logarithmic blow-up.

Tabulates the closed-form densities of N_2, the stabilizer purity and the
entropy, quantifies the divergence at the saddle value n_c = 1/2, and
writes self-contained SVG plots next to this script.
"""
import pathlib

import numpy as np

from magicdist import (
    DIVERGENCE_SLOPE_N2,
    SingularPoint,
    fit_log_divergence,
    mean_sre_exact,
    pdf_n2_exact,
    tabulate_pdf,
)
from magicdist.svgplot import plot_svg

out_dir = pathlib.Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# The density of N_2 lives on [1/3, 1]: it steps up to 3/2 at the left
# edge (the T-type minimum), falls to 3/4 at the right edge (stabilizer
# maxima), and diverges logarithmically at n_c = 1/2 (the H-type saddles).
print("P_N2 at a few points:")
for n in (0.34, 0.40, 0.49, 0.51, 0.70, 0.99):
    print(f"   P({n:.2f}) = {pdf_n2_exact(n):.6f}")

# Asking exactly at the divergence raises, and the error carries the local
# model so a caller can still draw the asymptote.
try:
    pdf_n2_exact(0.5)
except SingularPoint as sp:
    print(f"\nat n = 1/2: diverges like {sp.log_slope:.6f} * (-ln|n - 1/2|) "
          f"+ {sp.log_intercept:.4f}")
    print(f"the slope is 3/(sqrt(2) pi) = {DIVERGENCE_SLOPE_N2:.6f}")

# Fitting the tabulated curve against -ln|n - 1/2| recovers that slope.
curve_n = tabulate_pdf("n", num_points=900, tol=1e-10, guard=1e-6)
fit = fit_log_divergence(curve_n, 0.5, (1e-5, 1e-3))
print(f"\nfit on the exact curve: slope = {fit.slope:.6f} "
      f"(relative error {abs(fit.slope / DIVERGENCE_SLOPE_N2 - 1):.2e}), "
      f"r^2 = {fit.r_squared:.6f}")

# Entropy density: the same divergence sits at m_c = log(4/3).
curve_m = tabulate_pdf("m", num_points=700, tol=1e-9, guard=1e-6)
print(f"\nnormalizations: int P_N2 = {curve_n.integral():.6f}, "
      f"int P_M2 = {curve_m.integral():.6f}")
print(f"exact mean entropy: {mean_sre_exact(1e-10):.6f} nats "
      f"({mean_sre_exact(1e-10) / np.log(2):.6f} bits)")

for curve, fname, label in (
    (curve_n, "exact_density_n2.svg", "N_2"),
    (curve_m, "exact_density_m2.svg", "M_2"),
):
    svg = plot_svg(
        [(curve.abscissas, curve.densities, "#b03030", "line")],
        title=f"Haar density of {label} (one qubit)",
        xlabel=label,
        marks=curve.singular_points,
    )
    (out_dir / fname).write_text(svg)
    print(f"wrote {out_dir / fname}")
