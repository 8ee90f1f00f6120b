"""File formats: spectrum CSV, report JSON, and the circuit solver outputs.

CSV files are comma separated with '#'-prefixed comment lines; the first
comment lines carry the generating configuration as a JSON object so every
file is self-describing.  Numbers are written in scientific notation with
9 significant digits, which makes identical configurations produce byte
identical files.  JSON documents carry a schema_version and readers reject
unknown major versions.
"""

from __future__ import annotations

import json
import math
from typing import Optional

import numpy as np

from .params import Spectrum
from .squid import CircuitSpec, EigenSolution, potential

SCHEMA_VERSION = "1.0"

SPECTRUM_COLUMNS = ("omega", "T", "phase_rad", "re_t", "im_t")
WAVEFUNCTION_COLUMNS = ("flux_over_phi0", "U_joules", "psi0", "psi1")


def _fmt(value: float) -> str:
    return f"{value:.8e}"


def spectrum_csv_text(spectrum: Spectrum, config: Optional[dict] = None,
                      figure: Optional[str] = None) -> str:
    """Serialize a spectrum to CSV text (columns omega, T, phase_rad,
    re_t, im_t; the amplitude columns are NaN for noisy spectra)."""
    lines = []
    if figure:
        lines.append(f"# figure: {figure}")
    if config is not None:
        lines.append("# config: " + json.dumps(config, sort_keys=True))
    lines.append(",".join(SPECTRUM_COLUMNS))
    amp = spectrum.amplitude
    if amp is None:
        re = im = np.full(spectrum.n_points, math.nan)
    else:
        re, im = amp.real, amp.imag
    for w, t, ph, a, b in zip(spectrum.freqs, spectrum.transmission,
                              spectrum.phase, re, im):
        lines.append(",".join(_fmt(v) for v in (w, t, ph, a, b)))
    return "\n".join(lines) + "\n"


def write_spectrum_csv(path, spectrum: Spectrum, config: Optional[dict] = None,
                       figure: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(spectrum_csv_text(spectrum, config=config, figure=figure))


def read_spectrum_csv(path) -> tuple[Spectrum, Optional[dict]]:
    """Parse a spectrum CSV; returns the spectrum and the embedded config
    (None when the file carries none).  Raises ValueError on malformed
    content."""
    config = None
    header = None
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("config:"):
                    config = json.loads(body[len("config:"):])
                continue
            if header is None:
                header = [c.strip() for c in line.split(",")]
                continue
            rows.append([float(v) for v in line.split(",")])
    if header is None or not rows:
        raise ValueError(f"{path}: no data rows found")
    for required in ("omega", "T", "phase_rad"):
        if required not in header:
            raise ValueError(f"{path}: missing column '{required}'")
    data = np.asarray(rows, dtype=float)
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: ragged rows")
    column = {name: data[:, i] for i, name in enumerate(header)}
    trans = column["T"]
    if np.any(trans < -1e-6) or np.any(trans > 1 + 1e-6):
        raise ValueError(f"{path}: transmission outside [0, 1]")
    trans = np.clip(trans, 0.0, 1.0)
    if "re_t" in column and "im_t" in column:
        amp = column["re_t"] + 1j * column["im_t"]
        if np.all(np.isfinite(amp)):
            # rebuild T/phase from the amplitude: the rounded T/phase
            # columns may disagree with it at the last digit
            return Spectrum.from_amplitude(column["omega"], amp), config
    return (
        Spectrum(freqs=column["omega"], transmission=trans,
                 phase=column["phase_rad"], amplitude=None),
        config,
    )


def report_json_text(report, extra: Optional[dict] = None) -> str:
    document = {"schema_version": SCHEMA_VERSION}
    document.update(report.to_dict())
    if extra:
        document.update(extra)
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def write_report_json(path, report, extra: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(report_json_text(report, extra=extra))


def check_schema_version(document: dict, source: str = "document") -> None:
    """Reject documents whose schema major version is unknown."""
    version = document.get("schema_version")
    if not isinstance(version, str):
        raise ValueError(f"{source}: missing schema_version")
    major = version.split(".")[0]
    if major != SCHEMA_VERSION.split(".")[0]:
        raise ValueError(
            f"{source}: unsupported schema major version {version!r}"
        )


def load_report(path) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        document = json.load(handle)
    check_schema_version(document, source=str(path))
    return document


def squid_summary(sol: EigenSolution, spec: CircuitSpec) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "E0_joules": float(sol.energies[0]),
        "E1_joules": float(sol.energies[1]),
        "energies_joules": [float(e) for e in sol.energies],
        "omega0_rad_per_s": sol.omega0,
        "persistent_current_amps": sol.persistent_current,
        "current_diag_0_amps": sol.current_diag_0,
        "current_diag_1_amps": sol.current_diag_1,
        "circuit": {
            "capacitance_farads": spec.capacitance,
            "inductance_henries": spec.inductance,
            "critical_current_amps": spec.critical_current,
            "bias_flux_webers": spec.bias_flux,
            "grid_points": spec.grid_points,
            "flux_window": spec.flux_window,
        },
    }


def squid_json_text(sol: EigenSolution, spec: CircuitSpec) -> str:
    return json.dumps(squid_summary(sol, spec), sort_keys=True, indent=2) + "\n"


def wavefunction_csv_text(sol: EigenSolution, spec: CircuitSpec,
                          config: Optional[dict] = None,
                          figure: Optional[str] = None) -> str:
    from .constants import FLUX_QUANTUM

    lines = []
    if figure:
        lines.append(f"# figure: {figure}")
    if config is not None:
        lines.append("# config: " + json.dumps(config, sort_keys=True))
    lines.append(",".join(WAVEFUNCTION_COLUMNS))
    energy_u = potential(sol.flux_grid, spec)
    for phi, u, a, b in zip(sol.flux_grid, energy_u,
                            sol.wavefunctions[0], sol.wavefunctions[1]):
        lines.append(",".join(_fmt(v) for v in (phi / FLUX_QUANTUM, u, a, b)))
    return "\n".join(lines) + "\n"


def write_wavefunction_csv(path, sol: EigenSolution, spec: CircuitSpec,
                           config: Optional[dict] = None,
                           figure: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(wavefunction_csv_text(sol, spec, config=config, figure=figure))


__all__ = [
    "SCHEMA_VERSION",
    "SPECTRUM_COLUMNS",
    "WAVEFUNCTION_COLUMNS",
    "check_schema_version",
    "load_report",
    "read_spectrum_csv",
    "report_json_text",
    "spectrum_csv_text",
    "squid_json_text",
    "squid_summary",
    "wavefunction_csv_text",
    "write_report_json",
    "write_spectrum_csv",
    "write_wavefunction_csv",
]
