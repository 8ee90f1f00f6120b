"""A travelling microwave scattered by the bare flux qubit.

The probe is fully reflected on resonance, the dip is a Lorentzian of
width 2*gamma_c, and the phase jumps by pi across it.  Reading the dip
center off the spectrum is how the qubit frequency is calibrated before
any mechanics enters.
"""

from pathlib import Path

import numpy as np

from qspectra import (
    ModelKind,
    ModelParams,
    analytic_features,
    compute_spectrum,
    detect_dips,
    make_frequency_grid,
)
from qspectra.io import write_spectrum_csv
from qspectra.svg import spectrum_panels, write_chart

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = ModelParams(omega0=2.1e9, gamma_c=3.3e7)
grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
spectrum = compute_spectrum(ModelKind.QUBIT_ONLY, params, grid)

features = analytic_features(ModelKind.QUBIT_ONLY, params)
print(f"analytic dip: {features.dips[0]:.6g} rad/s, FWHM {features.fwhm[0]:.4g}")

dip = detect_dips(spectrum)[0]
print(f"fitted dip:   {dip.center:.6g} rad/s, FWHM {dip.fwhm:.4g}, "
      f"depth {dip.depth:.4f}")

# the pi phase step across resonance
below = np.interp(params.omega0 - 1e5, spectrum.freqs, spectrum.phase)
above = np.interp(params.omega0 + 1e5, spectrum.freqs, spectrum.phase)
print(f"phase step across the dip: {below - above:.5f} rad (pi = {np.pi:.5f})")

write_spectrum_csv(OUT / "qubit_dip.csv", spectrum,
                   config={"model": "qubit-only", "params": params.to_dict()})
write_chart(OUT / "qubit_dip.svg", spectrum_panels(spectrum, title="bare qubit"))
print(f"wrote {OUT / 'qubit_dip.csv'} and .svg")
