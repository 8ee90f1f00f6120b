"""The classical yardstick: a driven, damped, thermally kicked beam.

Before any quantum probe, a mechanical resonator is characterized by its
driven response (peak at omega_b with accuracy set by the damping, phase
quadrature exactly on resonance) and by its thermal displacement
spectrum, whose integral must reproduce equipartition.  These set the
baseline the scattering measurements improve on.
"""

from pathlib import Path

import numpy as np

from qspectra import (
    BOLTZMANN,
    ClassicalHOParams,
    driven_amplitude,
    driven_phase,
    steady_state_residual,
    thermal_displacement_psd,
)
from qspectra.svg import Panel, Series, write_chart

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = ClassicalHOParams(mass=1e-18, omega_b=2e9, gamma=1e6,
                           drive_amp=1e-12, temperature=0.05)

drive = np.linspace(1.99e9, 2.01e9, 4001)
amplitude = driven_amplitude(drive, params)
phase = driven_phase(drive, params)

peak = drive[np.argmax(amplitude)]
print(f"driven response peaks at {peak:.6g} rad/s "
      f"(omega_b = {params.omega_b:.4g}, damping {params.gamma:.2g})")
print(f"phase lag on resonance: {driven_phase(params.omega_b, params):.6f} rad "
      "(pi/2 regardless of damping)")
print(f"static deflection: {driven_amplitude(0.0, params):.4g} m")
print(f"equation-of-motion residual at the peak: "
      f"{steady_state_residual(peak, params, np.linspace(0, 1e-6, 200)):.2e}")

psd = thermal_displacement_psd(drive, params)
# trapezoid over the narrow line captures nearly all the variance
variance = 2.0 * np.trapezoid(psd, drive) / (2 * np.pi)
equipartition = BOLTZMANN * params.temperature / (params.mass * params.omega_b**2)
print(f"displacement variance from the spectrum: {variance:.4g} m^2")
print(f"equipartition k_B T / (m omega_b^2):     {equipartition:.4g} m^2")

write_chart(
    OUT / "classical_baseline.svg",
    [
        Panel(series=[Series(drive, amplitude)], xlabel="drive frequency (rad/s)",
              ylabel="amplitude (m)", title="driven response"),
        Panel(series=[Series(drive, phase)], xlabel="drive frequency (rad/s)",
              ylabel="phase lag (rad)"),
        Panel(series=[Series(drive, psd)], xlabel="angular frequency (rad/s)",
              ylabel="displacement PSD (m^2 s)", title="thermal motion"),
    ],
)
print(f"wrote {OUT / 'classical_baseline.svg'}")
