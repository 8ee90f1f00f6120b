"""Counting phonons without destroying them.

Detuning the qubit far from the mechanical mode puts the pair in the
dispersive regime: each phonon shifts the qubit dip by g_q**2/delta, so
the dip position reads out the occupation number while the mechanical
state survives the measurement.  Number resolution requires the dip
width 2*v1**2/v_g to stay below the per-phonon spacing.
"""

from pathlib import Path

from qspectra import (
    ModelKind,
    ModelParams,
    compute_spectrum,
    detect_dips,
    dispersive_shift,
    make_frequency_grid,
    phonon_number_from_dip,
    resolvability_condition,
)
from qspectra.svg import Panel, Series, write_chart

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

base = ModelParams(omega0=2.1e9, omega_b=2.0e9, g_q=3e7, v_g=3e8,
                   gamma_c=1e6, mean_n=0.0)
delta = base.omega0 - base.omega_b
spacing = dispersive_shift(base)
print(f"per-phonon dip spacing g_q^2/delta = {spacing:.4g} rad/s")
print(f"dip width 2 gamma_c = {2 * base.gamma_c:.4g} rad/s")
print(f"number-resolved? {resolvability_condition(base)}")

grid = make_frequency_grid(2.09e9, 2.16e9, 7001)
series = []
for n in range(4):
    params = base.replace(mean_n=float(n))
    spectrum = compute_spectrum(ModelKind.DISPERSIVE, params, grid)
    dip = detect_dips(spectrum)[0]
    count = phonon_number_from_dip(dip.center, base.omega0, base.g_q, delta)
    print(f"  prepared n={n}: dip at {dip.center:.6g} -> counted n={count.n} "
          f"(residual {count.residual:.3f} spacings)")
    series.append(Series(spectrum.freqs, spectrum.transmission, f"n={n}"))

# push the linewidth past the boundary and the ladder blurs
blurred = ModelParams(omega0=2.1e9, omega_b=2.0e9, g_q=3e7, v_g=3e8,
                      gamma_c=6e6, mean_n=0.0)
print(f"with gamma_c = {blurred.gamma_c:.2g}: number-resolved? "
      f"{resolvability_condition(blurred)} "
      f"(width {2 * blurred.gamma_c:.2g} vs spacing {spacing:.2g})")

write_chart(OUT / "phonon_ladder.svg",
            [Panel(series=series, xlabel="angular frequency (rad/s)",
                   ylabel="transmission", title="one dip per phonon number")])
print(f"wrote {OUT / 'phonon_ladder.svg'}")
