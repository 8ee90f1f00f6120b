import math

import numpy as np
import pytest
from scipy.integrate import quad

from qspectra import (
    BOLTZMANN,
    ClassicalHOParams,
    driven_amplitude,
    driven_phase,
    steady_state_residual,
    thermal_displacement_psd,
    thermal_force_psd,
)

PARAMS = ClassicalHOParams(mass=1e-18, omega_b=2e9, gamma=1e6, drive_amp=1e-12,
                           temperature=0.05)


class TestDrivenResponse:
    def test_static_deflection(self):
        expected = PARAMS.drive_amp / (PARAMS.mass * PARAMS.omega_b**2)
        assert driven_amplitude(0.0, PARAMS) == pytest.approx(expected, rel=1e-12)

    def test_zero_drive_gives_zero_amplitude(self):
        p = ClassicalHOParams(mass=1e-18, omega_b=2e9, gamma=1e6)
        w = np.linspace(1e9, 3e9, 50)
        assert np.all(driven_amplitude(w, p) == 0.0)

    def test_peak_lies_within_gamma_of_resonance(self):
        w = np.linspace(PARAMS.omega_b - 5e6, PARAMS.omega_b + 5e6, 20001)
        amps = driven_amplitude(w, PARAMS)
        peak = w[np.argmax(amps)]
        assert abs(peak - PARAMS.omega_b) < PARAMS.gamma

    def test_exact_undamped_resonance_rejected(self):
        p = ClassicalHOParams(mass=1e-18, omega_b=2e9, gamma=0.0, drive_amp=1e-12)
        with pytest.raises(ValueError):
            driven_amplitude(2e9, p)

    def test_phase_quadrature_on_resonance(self):
        for gamma in (1e4, 1e6, 1e8):
            p = ClassicalHOParams(mass=1e-18, omega_b=2e9, gamma=gamma)
            assert driven_phase(p.omega_b, p) == math.pi / 2

    def test_phase_limits(self):
        assert driven_phase(0.0, PARAMS) == 0.0
        assert driven_phase(1e3, PARAMS) == pytest.approx(0.0, abs=1e-9)
        assert driven_phase(1e16, PARAMS) == pytest.approx(math.pi, abs=1e-9)

    def test_phase_continuous_and_monotone_through_resonance(self):
        w = np.linspace(PARAMS.omega_b - 1e7, PARAMS.omega_b + 1e7, 2001)
        phases = driven_phase(w, PARAMS)
        assert np.all(np.diff(phases) > 0)
        assert np.all((phases > 0) & (phases < math.pi))

    def test_steady_state_satisfies_equation_of_motion(self):
        rng = np.random.default_rng(3)
        times = np.linspace(0, 1e-6, 211)
        for _ in range(25):
            p = ClassicalHOParams(
                mass=10 ** rng.uniform(-20, -15),
                omega_b=10 ** rng.uniform(8, 10),
                gamma=10 ** rng.uniform(4, 8),
                drive_amp=10 ** rng.uniform(-15, -9),
            )
            omega_d = p.omega_b * rng.uniform(0.2, 2.0)
            assert steady_state_residual(omega_d, p, times) < 1e-9


class TestThermalSpectrum:
    def test_transfer_function_consistency(self):
        # S_x must equal |1/(m(wb^2 - w^2 - i gamma w))|^2 * S_xi
        rng = np.random.default_rng(5)
        force_psd = thermal_force_psd(PARAMS)
        for _ in range(100):
            w = rng.uniform(0, 3 * PARAMS.omega_b)
            transfer = 1.0 / (PARAMS.mass * (PARAMS.omega_b**2 - w**2
                                             - 1j * PARAMS.gamma * w))
            expected = abs(transfer) ** 2 * force_psd
            assert thermal_displacement_psd(w, PARAMS) == pytest.approx(
                expected, rel=1e-12
            )

    def test_zero_temperature_is_silent(self):
        p = ClassicalHOParams(mass=1e-18, omega_b=2e9, gamma=1e6, temperature=0.0)
        w = np.linspace(0, 4e9, 100)
        assert np.all(thermal_displacement_psd(w, p) == 0.0)

    def test_even_and_positive(self):
        w = np.linspace(1e5, 4e9, 1000)
        s_pos = thermal_displacement_psd(w, PARAMS)
        s_neg = thermal_displacement_psd(-w, PARAMS)
        assert np.array_equal(s_pos, s_neg)
        assert np.all(s_pos > 0)

    def test_equipartition_integral(self):
        # integral over all omega equals 2 pi k_B T / (m omega_b^2)
        wb, g = PARAMS.omega_b, PARAMS.gamma

        def integrand(w):
            return thermal_displacement_psd(w, PARAMS)

        total = 0.0
        for lo, hi in ((0, wb - 50 * g), (wb - 50 * g, wb + 50 * g),
                       (wb + 50 * g, np.inf)):
            value, _ = quad(integrand, lo, hi, limit=400)
            total += value
        total *= 2.0  # even function, integrated over omega > 0 only
        expected = 2 * math.pi * BOLTZMANN * PARAMS.temperature / (
            PARAMS.mass * PARAMS.omega_b**2
        )
        assert total == pytest.approx(expected, rel=0.01)

    def test_gamma_required(self):
        p = ClassicalHOParams(mass=1e-18, omega_b=2e9, gamma=0.0, temperature=1.0)
        with pytest.raises(ValueError):
            thermal_displacement_psd(1e9, p)


class TestValidation:
    def test_nonpositive_mass_rejected(self):
        with pytest.raises(ValueError):
            ClassicalHOParams(mass=0.0, omega_b=2e9, gamma=1e6)

    def test_negative_temperature_rejected(self):
        with pytest.raises(ValueError):
            ClassicalHOParams(mass=1e-18, omega_b=2e9, gamma=1e6, temperature=-1.0)
