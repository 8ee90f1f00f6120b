"""Classical driven/damped harmonic oscillator baseline.

Steady-state response spectra of a damped oscillator under a sinusoidal
force, and the thermal displacement spectral density under white Langevin
noise.  These are the classical counterparts of the microwave scattering
measurements: they set the accuracy one gets without a quantum probe and
serve as independent fixtures for the estimation code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import BOLTZMANN
from .params import Frequency


@dataclass(frozen=True)
class ClassicalHOParams:
    """Damped harmonic oscillator: mass (kg), angular frequency (rad/s),
    dissipation rate (rad/s), drive force amplitude (N), bath temperature (K)."""

    mass: float
    omega_b: Frequency
    gamma: Frequency
    drive_amp: float = 0.0
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if not self.mass > 0:
            raise ValueError("mass must be > 0")
        if not self.omega_b > 0:
            raise ValueError("omega_b must be > 0")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


def driven_amplitude(omega_d, p: ClassicalHOParams):
    """Steady-state displacement amplitude under a force a*cos(omega_d t):

        A = a / (m sqrt((omega_b**2 - omega_d**2)**2 + gamma**2 omega_d**2))

    The undamped exact resonance (gamma = 0, omega_d = omega_b) has no
    steady state and is rejected.
    """
    w = np.asarray(omega_d, dtype=float)
    if p.gamma == 0 and np.any(w == p.omega_b):
        raise ValueError("undamped oscillator on exact resonance has no steady state")
    response = np.sqrt((p.omega_b**2 - w**2) ** 2 + (p.gamma * w) ** 2)
    out = p.drive_amp / (p.mass * response)
    return float(out) if np.ndim(omega_d) == 0 else out


def driven_phase(omega_d, p: ClassicalHOParams):
    """Phase lag of the steady-state response behind the drive,

        tan(phi) = gamma omega_d / (omega_b**2 - omega_d**2),

    on the branch continuous through resonance: phi in (0, pi) for
    gamma > 0, with phi(omega_b) = pi/2 exactly regardless of gamma.
    The steady state is z(t) = A cos(omega_d t - phi).
    """
    w = np.asarray(omega_d, dtype=float)
    out = np.arctan2(p.gamma * w, p.omega_b**2 - w**2)
    return float(out) if np.ndim(omega_d) == 0 else out


def thermal_force_psd(p: ClassicalHOParams) -> float:
    """White Langevin force spectral density 2 m gamma k_B T, N**2 s."""
    return 2.0 * p.mass * p.gamma * BOLTZMANN * p.temperature


def thermal_displacement_psd(omega, p: ClassicalHOParams):
    """Displacement spectral density of the thermally driven oscillator,

        S_x(omega) = 2 gamma k_B T / (m [(omega_b**2 - omega**2)**2
                                         + gamma**2 omega**2]),

    i.e. |transfer function|**2 times the white force density, m**2 s.
    Even in omega; integrates to 2 pi k_B T / (m omega_b**2), matching
    equipartition <z**2> = k_B T / (m omega_b**2).
    """
    if p.gamma <= 0:
        raise ValueError("thermal spectrum needs gamma > 0")
    w = np.asarray(omega, dtype=float)
    denom = p.mass * ((p.omega_b**2 - w**2) ** 2 + (p.gamma * w) ** 2)
    out = 2.0 * p.gamma * BOLTZMANN * p.temperature / denom
    return float(out) if np.ndim(omega) == 0 else out


def steady_state_residual(omega_d: float, p: ClassicalHOParams,
                          times: np.ndarray) -> float:
    """Largest relative defect of z(t) = A cos(omega_d t - phi) in the
    equation of motion z'' + gamma z' + omega_b**2 z = (a/m) cos(omega_d t),
    evaluated analytically at the given times.  Near machine precision for
    a correct (A, phi) pair; used as a self-check oracle."""
    amp = driven_amplitude(omega_d, p)
    phi = driven_phase(omega_d, p)
    theta = omega_d * times - phi
    lhs = (
        -amp * omega_d**2 * np.cos(theta)
        - amp * p.gamma * omega_d * np.sin(theta)
        + p.omega_b**2 * amp * np.cos(theta)
    )
    rhs = (p.drive_amp / p.mass) * np.cos(omega_d * times)
    scale = max(abs(p.drive_amp / p.mass), math.ulp(1.0))
    return float(np.max(np.abs(lhs - rhs)) / scale)


__all__ = [
    "ClassicalHOParams",
    "driven_amplitude",
    "driven_phase",
    "steady_state_residual",
    "thermal_displacement_psd",
    "thermal_force_psd",
]
