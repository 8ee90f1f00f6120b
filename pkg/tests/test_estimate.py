import math

import numpy as np
import pytest

from qspectra import (
    AmbiguousClassificationError,
    InconsistentFeaturesError,
    ModelClass,
    ModelKind,
    OffLadderError,
    Spectrum,
    add_measurement_noise,
    analytic_features,
    classify,
    cnmr_coupling_from_shift,
    compute_spectrum,
    coupled_mode_frequencies,
    detect_dips,
    detect_unity_points,
    estimate_report,
    make_frequency_grid,
    nmr_frequency_from_windows,
    phonon_number_from_dip,
    qnmr_coupling_from_dips,
    qnmr_coupling_from_windows,
    shifted_qubit_frequency,
    stlr_coupling_from_dips,
)

from conftest import COUPLING, GAMMA_C, OMEGA0, OMEGA_B, OMEGA_R


def flat_spectrum():
    freqs = make_frequency_grid(1.9e9, 2.3e9, 501)
    return Spectrum.from_amplitude(freqs, np.ones(len(freqs), dtype=complex))


class TestDetectDips:
    def test_single_lorentzian_dip(self, qubit_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_ONLY, qubit_params, grid)
        dips = detect_dips(s)
        assert len(dips) == 1
        assert abs(dips[0].center - OMEGA0) <= s.grid_step
        assert dips[0].fwhm == pytest.approx(6.6e7, rel=0.05)
        assert dips[0].depth == pytest.approx(1.0, abs=1e-3)

    def test_flat_spectrum_has_no_dips(self):
        assert detect_dips(flat_spectrum()) == []

    def test_two_hybrid_dips(self, qnmr_spectrum):
        dips = detect_dips(qnmr_spectrum)
        assert len(dips) == 2
        low, high = coupled_mode_frequencies(OMEGA0, OMEGA_B, COUPLING)
        assert dips[0].center == pytest.approx(low, abs=1e5)
        assert dips[1].center == pytest.approx(high, abs=1e5)

    def test_fitted_widths_share_the_total_linewidth(self, qnmr_spectrum):
        # the two hybrid dips split the bare 2*gamma_c width between them
        dips = detect_dips(qnmr_spectrum)
        assert dips[0].fwhm + dips[1].fwhm == pytest.approx(2 * GAMMA_C, rel=0.05)

    def test_depth_threshold_validated(self, qnmr_spectrum):
        with pytest.raises(ValueError):
            detect_dips(qnmr_spectrum, depth_threshold=0.0)

    def test_noise_does_not_duplicate_dips(self, qnmr_spectrum):
        noisy = add_measurement_noise(qnmr_spectrum, 0.01, 3)
        assert len(detect_dips(noisy)) == 2


class TestDetectUnityPoints:
    def test_qnmr_window_at_mechanical_frequency(self, qnmr_spectrum):
        points = detect_unity_points(qnmr_spectrum)
        assert len(points) == 1
        assert abs(points[0] - OMEGA_B) <= qnmr_spectrum.grid_step

    def test_stlr_qnmr_windows_match_analytic(self, stlr_qnmr_params):
        grid = make_frequency_grid(1.8e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.STLR_QUBIT_QNMR, stlr_qnmr_params, grid)
        points = detect_unity_points(s)
        expected = analytic_features(ModelKind.STLR_QUBIT_QNMR,
                                     stlr_qnmr_params).unity_points
        assert len(points) == 2
        for found, truth in zip(points, expected):
            assert abs(found - truth) <= s.grid_step

    def test_qubit_only_has_no_window(self, qubit_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_ONLY, qubit_params, grid)
        assert detect_unity_points(s) == []

    def test_flat_spectrum_has_no_window(self):
        assert detect_unity_points(flat_spectrum()) == []

    def test_tolerance_validated(self, qnmr_spectrum):
        with pytest.raises(ValueError):
            detect_unity_points(qnmr_spectrum, tol=0.5)


class TestClassify:
    def test_quantum_vibration(self, qnmr_spectrum):
        assert classify(qnmr_spectrum) is ModelClass.QUANTUM_NMR

    def test_classical_vibration_with_reference(self, cnmr_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_CNMR, cnmr_params, grid)
        assert classify(s, reference_omega0=OMEGA0) is ModelClass.CLASSICAL_NMR

    def test_bare_qubit_with_reference(self, qubit_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_ONLY, qubit_params, grid)
        assert classify(s, reference_omega0=OMEGA0) is ModelClass.NO_NMR

    def test_single_dip_without_reference_is_ambiguous(self, qubit_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_ONLY, qubit_params, grid)
        with pytest.raises(AmbiguousClassificationError):
            classify(s)

    def test_three_dips_is_ambiguous(self, stlr_qnmr_params):
        grid = make_frequency_grid(1.8e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.STLR_QUBIT_QNMR, stlr_qnmr_params, grid)
        with pytest.raises(AmbiguousClassificationError, match="3 dips"):
            classify(s)

    def test_no_features_is_ambiguous(self):
        with pytest.raises(AmbiguousClassificationError, match="no"):
            classify(flat_spectrum())


class TestSplittingInversions:
    def test_quoted_dip_pair_recovers_coupling(self):
        est = qnmr_coupling_from_dips(2.16180e9, 1.93820e9, OMEGA0, OMEGA_B)
        assert est.value == pytest.approx(1e8, rel=1e-3)

    def test_exact_round_trip(self):
        low, high = coupled_mode_frequencies(OMEGA0, OMEGA_B, COUPLING)
        est = qnmr_coupling_from_dips(high, low, OMEGA0, OMEGA_B)
        assert est.value == pytest.approx(COUPLING, rel=1e-9)

    def test_boundary_gives_zero(self):
        est = qnmr_coupling_from_dips(2.2e9, 2.1e9, 2.2e9, 2.1e9)
        assert est.value == 0.0

    def test_degenerate_frequencies_give_half_splitting(self):
        est = qnmr_coupling_from_dips(2.2e9, 2.0e9, 2.1e9, 2.1e9)
        assert est.value == pytest.approx(1e8, rel=1e-12)

    def test_negative_radicand_rejected(self):
        with pytest.raises(InconsistentFeaturesError):
            qnmr_coupling_from_dips(2.105e9, 2.095e9, 2.2e9, 2.0e9)

    def test_monotone_in_splitting(self):
        values = []
        for split in np.linspace(1.1e8, 5e8, 40):
            mid = 0.5 * (OMEGA0 + OMEGA_B)
            est = qnmr_coupling_from_dips(mid + split / 2, mid - split / 2,
                                          OMEGA0, OMEGA_B)
            values.append(est.value)
        assert np.all(np.diff(values) > 0)

    def test_uncertainty_propagation_scale(self):
        low, high = coupled_mode_frequencies(OMEGA0, OMEGA_B, COUPLING)
        est = qnmr_coupling_from_dips(high, low, OMEGA0, OMEGA_B,
                                      sigma_plus=1e6, sigma_minus=1e6)
        split = high - low
        expected = math.sqrt(2) * 1e6 * split / (4 * COUPLING)
        assert est.sigma == pytest.approx(expected, rel=1e-9)

    def test_stlr_variant_round_trip(self):
        low, high = coupled_mode_frequencies(OMEGA0, OMEGA_R, COUPLING)
        est = stlr_coupling_from_dips(high, low, OMEGA0, OMEGA_R)
        assert est.value == pytest.approx(COUPLING, rel=1e-9)

    def test_stlr_resonant_half_splitting(self):
        est = stlr_coupling_from_dips(2.1e9, 1.9e9, 2.0e9, 2.0e9)
        assert est.value == pytest.approx(1e8, rel=1e-12)


class TestShiftInversion:
    def test_exact_round_trip(self):
        shifted = shifted_qubit_frequency(OMEGA0, OMEGA_B, COUPLING)
        est = cnmr_coupling_from_shift(shifted, OMEGA0, OMEGA_B)
        assert est.value == pytest.approx(COUPLING, rel=1e-9)

    def test_unshifted_dip_gives_zero(self):
        est = cnmr_coupling_from_shift(0.5 * (OMEGA0 + OMEGA_B), OMEGA0, OMEGA_B)
        assert est.value == 0.0

    def test_below_mean_rejected(self):
        with pytest.raises(InconsistentFeaturesError):
            cnmr_coupling_from_shift(2.0e9, OMEGA0, OMEGA_B)

    def test_pipeline_round_trip(self, cnmr_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_CNMR, cnmr_params, grid)
        dip = detect_dips(s)[0]
        est = cnmr_coupling_from_shift(dip.center, OMEGA0, OMEGA_B,
                                       sigma_shifted=dip.fwhm / 2)
        assert abs(est.value - COUPLING) <= est.sigma
        assert est.value == pytest.approx(COUPLING, rel=0.01)


class TestWindowInversions:
    def test_mechanical_frequency_round_trip(self):
        low, high = coupled_mode_frequencies(OMEGA0, OMEGA_B, COUPLING)
        est = nmr_frequency_from_windows(high, low, OMEGA0)
        assert est.value == pytest.approx(OMEGA_B, rel=1e-12)

    def test_symmetric_windows_give_qubit_frequency(self):
        est = nmr_frequency_from_windows(2.2e9, 2.0e9, 2.1e9)
        assert est.value == pytest.approx(2.1e9, rel=1e-12)

    def test_coupling_round_trip(self):
        low, high = coupled_mode_frequencies(OMEGA0, OMEGA_B, COUPLING)
        est = qnmr_coupling_from_windows(high, low, OMEGA0)
        assert est.value == pytest.approx(COUPLING, rel=1e-9)

    def test_uncertainty_is_quadrature_sum(self):
        est = nmr_frequency_from_windows(2.2e9, 2.0e9, 2.1e9, sigma_upper=3e5,
                                         sigma_lower=4e5, sigma_omega0=0.0)
        assert est.sigma == pytest.approx(5e5, rel=1e-12)


class TestPhononNumber:
    def test_ground_state(self):
        count = phonon_number_from_dip(2.1045e9, 2.1e9, 3e7, 1e8)
        assert count.n == 0 and count.residual == pytest.approx(0.0, abs=1e-9)

    def test_one_phonon(self):
        count = phonon_number_from_dip(2.1135e9, 2.1e9, 3e7, 1e8)
        assert count.n == 1

    def test_midpoint_is_off_ladder(self):
        with pytest.raises(OffLadderError):
            phonon_number_from_dip(2.1090e9, 2.1e9, 3e7, 1e8)

    def test_negative_count_is_off_ladder(self):
        with pytest.raises(OffLadderError):
            phonon_number_from_dip(2.1e9 - 4.5e6, 2.1e9, 3e7, 1e8)

    def test_zero_coupling_rejected(self):
        with pytest.raises(ValueError):
            phonon_number_from_dip(2.1e9, 2.1e9, 0.0, 1e8)


class TestMeasurementNoise:
    def test_zero_sigma_is_identity(self, qnmr_spectrum):
        assert add_measurement_noise(qnmr_spectrum, 0.0, 1) is qnmr_spectrum

    def test_deterministic_per_seed(self, qnmr_spectrum):
        a = add_measurement_noise(qnmr_spectrum, 0.01, 9)
        b = add_measurement_noise(qnmr_spectrum, 0.01, 9)
        assert np.array_equal(a.transmission, b.transmission)
        assert np.array_equal(a.phase, b.phase)

    def test_different_seeds_differ(self, qnmr_spectrum):
        a = add_measurement_noise(qnmr_spectrum, 0.01, 1)
        b = add_measurement_noise(qnmr_spectrum, 0.01, 2)
        assert not np.array_equal(a.transmission, b.transmission)

    def test_amplitude_dropped_and_bounds_kept(self, qnmr_spectrum):
        noisy = add_measurement_noise(qnmr_spectrum, 0.05, 4)
        assert noisy.amplitude is None
        assert np.all(noisy.transmission >= 0) and np.all(noisy.transmission <= 1)
        assert np.all(np.abs(noisy.phase) <= math.pi)

    def test_negative_sigma_rejected(self, qnmr_spectrum):
        with pytest.raises(ValueError):
            add_measurement_noise(qnmr_spectrum, -0.1, 1)


class TestEstimateReport:
    def test_quantum_round_trip(self, qnmr_spectrum):
        report = estimate_report(qnmr_spectrum)
        assert report.model_class is ModelClass.QUANTUM_NMR
        assert abs(report.omega_b_est.value - OMEGA_B) <= qnmr_spectrum.grid_step
        assert abs(report.omega0_est.value - OMEGA0) <= report.omega0_est.sigma
        assert abs(report.g_est.value - COUPLING) <= report.g_est.sigma
        assert report.g_est.value == pytest.approx(COUPLING, rel=0.01)

    def test_reference_narrows_qubit_frequency(self, qnmr_spectrum):
        report = estimate_report(qnmr_spectrum, reference_omega0=OMEGA0)
        assert report.omega0_est.value == OMEGA0

    def test_classical_needs_both_references(self, cnmr_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_CNMR, cnmr_params, grid)
        partial = estimate_report(s, reference_omega0=OMEGA0)
        assert partial.model_class is ModelClass.CLASSICAL_NMR
        assert partial.g_est is None
        full = estimate_report(s, reference_omega0=OMEGA0, reference_omega_b=OMEGA_B)
        assert full.g_est.value == pytest.approx(COUPLING, rel=0.01)

    def test_classical_amplitude_estimate(self, cnmr_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_CNMR, cnmr_params, grid)
        report = estimate_report(s, reference_omega0=OMEGA0,
                                 reference_omega_b=OMEGA_B, field=5e-3,
                                 persistent_current=9.44e-8, nmr_length=1e-6)
        from qspectra import classical_amplitude

        expected = classical_amplitude(report.g_est.value, 5e-3, 9.44e-8, 1e-6)
        assert report.amplitude_est.value == pytest.approx(expected, rel=1e-12)

    def test_bare_qubit(self, qubit_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_ONLY, qubit_params, grid)
        report = estimate_report(s, reference_omega0=OMEGA0)
        assert report.model_class is ModelClass.NO_NMR
        assert abs(report.omega0_est.value - OMEGA0) <= s.grid_step

    def test_dispersive_phonon_count(self, dispersive_params):
        for n in range(4):
            p = dispersive_params.replace(mean_n=float(n))
            grid = make_frequency_grid(2.09e9, 2.16e9, 4001)
            s = compute_spectrum(ModelKind.DISPERSIVE, p, grid)
            report = estimate_report(s, reference_omega0=OMEGA0,
                                     reference_g_q=3e7, reference_delta=1e8)
            assert report.model_class is ModelClass.DISPERSIVE
            assert report.phonon_n_est == n

    def test_flat_spectrum_reports_no_features(self):
        report = estimate_report(flat_spectrum())
        assert report.model_class is ModelClass.NO_FEATURES

    def test_single_dip_without_reference_is_ambiguous(self, qubit_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_ONLY, qubit_params, grid)
        report = estimate_report(s)
        assert report.model_class is ModelClass.AMBIGUOUS

    def test_uncertainty_floor(self, qnmr_spectrum, cnmr_params):
        report = estimate_report(qnmr_spectrum, reference_omega0=OMEGA0)
        floor = 0.5 * qnmr_spectrum.grid_step
        for est in (report.omega0_est, report.omega_b_est, report.g_est):
            assert est.sigma >= floor
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.QUBIT_CNMR, cnmr_params, grid)
        report = estimate_report(s, reference_omega0=OMEGA0,
                                 reference_omega_b=OMEGA_B)
        for est in (report.omega_b_est, report.g_est):
            assert est.sigma >= 0.5 * s.grid_step

    def test_extra_dips_reported_not_classified(self, stlr_qnmr_params):
        grid = make_frequency_grid(1.8e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.STLR_QUBIT_QNMR, stlr_qnmr_params, grid)
        report = estimate_report(s)
        assert len(report.dips) == 3
        assert any("deepest two" in note for note in report.notes)

    def test_report_serializes(self, qnmr_spectrum):
        document = estimate_report(qnmr_spectrum).to_dict()
        assert document["model_class"] == "quantum-nmr"
        assert document["g_est"]["value"] > 0
        assert len(document["raw_features"]["dips"]) == 2


class TestRoundTripCompleteness:
    """Synthesize, detect, invert: every parameter the configuration's
    inversion formulas expose comes back within the propagated error."""

    def test_qubit_only(self, qubit_params):
        grid = make_frequency_grid(1.9e9, 2.3e9, 4001)
        dip = detect_dips(compute_spectrum(ModelKind.QUBIT_ONLY, qubit_params, grid))[0]
        assert dip.center == pytest.approx(OMEGA0, abs=grid[1] - grid[0])
        assert dip.fwhm / 2 == pytest.approx(GAMMA_C, rel=0.05)

    def test_qubit_qnmr(self, qnmr_spectrum):
        report = estimate_report(qnmr_spectrum)
        assert report.omega_b_est.value == pytest.approx(OMEGA_B, abs=qnmr_spectrum.grid_step)
        assert report.omega0_est.value == pytest.approx(OMEGA0, abs=report.omega0_est.sigma)
        assert report.g_est.value == pytest.approx(COUPLING, abs=report.g_est.sigma)

    def test_stlr_qubit(self, stlr_params):
        grid = make_frequency_grid(1.8e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.STLR_QUBIT, stlr_params, grid)
        windows = detect_unity_points(s)
        assert len(windows) == 1
        assert windows[0] == pytest.approx(OMEGA0, abs=s.grid_step)
        dips = detect_dips(s)
        est = stlr_coupling_from_dips(dips[1].center, dips[0].center,
                                      windows[0], OMEGA_R,
                                      sigma_plus=dips[1].fwhm / 2,
                                      sigma_minus=dips[0].fwhm / 2)
        assert abs(est.value - COUPLING) <= est.sigma

    def test_stlr_qubit_qnmr(self, stlr_qnmr_params):
        grid = make_frequency_grid(1.8e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.STLR_QUBIT_QNMR, stlr_qnmr_params, grid)
        low, high = detect_unity_points(s, tol=0.01)
        step = s.grid_step
        omega_b = nmr_frequency_from_windows(high, low, OMEGA0, sigma_upper=step,
                                             sigma_lower=step)
        assert abs(omega_b.value - OMEGA_B) <= max(omega_b.sigma, step)
        g = qnmr_coupling_from_windows(high, low, OMEGA0, sigma_upper=step,
                                       sigma_lower=step)
        assert g.value == pytest.approx(COUPLING, rel=0.01)

    def test_stlr_qubit_cnmr(self, stlr_cnmr_params):
        grid = make_frequency_grid(1.8e9, 2.3e9, 4001)
        s = compute_spectrum(ModelKind.STLR_QUBIT_CNMR, stlr_cnmr_params, grid)
        windows = detect_unity_points(s)
        assert len(windows) == 1
        est = cnmr_coupling_from_shift(windows[0], OMEGA0, OMEGA_B,
                                       sigma_shifted=s.grid_step)
        assert est.value == pytest.approx(COUPLING, rel=0.05)
