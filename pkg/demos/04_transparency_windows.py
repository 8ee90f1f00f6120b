"""Probing the mechanics through a transmission-line resonator.

Scattering the probe off a quarter-wavelength resonator instead of the
qubit keeps the qubit away from the drive.  The qubit splits the
resonator dip (vacuum Rabi splitting) and opens a transparency window at
exactly its own frequency; a quantized mechanical mode on the qubit
opens two windows whose positions give the mechanical frequency and the
coupling by simple algebra.
"""

from pathlib import Path

from qspectra import (
    ModelKind,
    ModelParams,
    compute_spectrum,
    detect_dips,
    detect_unity_points,
    make_frequency_grid,
    nmr_frequency_from_windows,
    qnmr_coupling_from_windows,
    stlr_coupling_from_dips,
)
from qspectra.svg import Panel, Series, write_chart

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

OMEGA0, OMEGA_B, OMEGA_R = 2.1e9, 2.0e9, 2.0e9
grid = make_frequency_grid(1.8e9, 2.3e9, 4001)

chain = compute_spectrum(
    ModelKind.STLR_QUBIT,
    ModelParams(omega0=OMEGA0, omega_r=OMEGA_R, g_rq=1e8, v2=1e8, v_g=3e8),
    grid,
)
print("resonator + qubit:")
window = detect_unity_points(chain)[0]
print(f"  transparency window at {window:.6g} -> the qubit frequency")
dips = detect_dips(chain)
est = stlr_coupling_from_dips(dips[1].center, dips[0].center, window, OMEGA_R,
                              sigma_plus=dips[1].fwhm / 2,
                              sigma_minus=dips[0].fwhm / 2)
print(f"  Rabi-split dips at {dips[0].center:.6g} / {dips[1].center:.6g}"
      f" -> coupling {est.value:.4g} +- {est.sigma:.2g}")

full = compute_spectrum(
    ModelKind.STLR_QUBIT_QNMR,
    ModelParams(omega0=OMEGA0, omega_b=OMEGA_B, omega_r=OMEGA_R,
                g_rq=1e8, g_q=1e8, v2=1e8, v_g=3e8),
    grid,
)
print("resonator + qubit + quantized mechanics:")
low, high = detect_unity_points(full)
print(f"  two windows at {low:.6g} and {high:.6g}")
step = full.grid_step
omega_b = nmr_frequency_from_windows(high, low, OMEGA0,
                                     sigma_upper=step, sigma_lower=step)
g_q = qnmr_coupling_from_windows(high, low, OMEGA0,
                                 sigma_upper=step, sigma_lower=step)
print(f"  window sum  -> omega_b = {omega_b.value:.6g} +- {omega_b.sigma:.2g}")
print(f"  window pair -> g_q     = {g_q.value:.4g} +- {g_q.sigma:.2g}")

write_chart(
    OUT / "transparency_windows.svg",
    [
        Panel(series=[Series(chain.freqs, chain.transmission, "without mechanics"),
                      Series(full.freqs, full.transmission, "with mechanics")],
              xlabel="angular frequency (rad/s)", ylabel="transmission",
              title="windows opened by the qubit and by the mechanics"),
        Panel(series=[Series(chain.freqs, chain.phase, "without mechanics"),
                      Series(full.freqs, full.phase, "with mechanics")],
              xlabel="angular frequency (rad/s)", ylabel="phase (rad)"),
    ],
)
print(f"wrote {OUT / 'transparency_windows.svg'}")
