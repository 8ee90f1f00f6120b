"""Turn a (possibly noisy) transmission spectrum back into physics.

The pipeline: find dips and full-transmission points, refine each dip by
a local Lorentzian least-squares fit, classify the mechanical vibration
(quantum vs classical vs absent), and invert the closed-form feature
relations to the underlying frequencies and couplings with first-order
uncertainty propagation.

Uncertainty conventions: a fitted dip contributes FWHM/2 as its 1-sigma
input uncertainty, a full-transmission point contributes one grid step,
and no reported uncertainty is ever below half the grid spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.optimize import least_squares
from scipy.signal import find_peaks

from .params import Frequency, Spectrum


class InconsistentFeaturesError(ValueError):
    """Measured feature locations violate the model they are inverted under."""


class OffLadderError(InconsistentFeaturesError):
    """A dip location matches no integer phonon number."""


class AmbiguousClassificationError(RuntimeError):
    """The spectrum's feature structure fits more than one vibration class."""


class ModelClass(str, Enum):
    """Vibration classes distinguishable from a transmission spectrum."""

    NO_NMR = "no-nmr"
    QUANTUM_NMR = "quantum-nmr"
    CLASSICAL_NMR = "classical-nmr"
    DISPERSIVE = "dispersive"
    AMBIGUOUS = "ambiguous"
    NO_FEATURES = "no-features"


@dataclass(frozen=True)
class Estimate:
    """A value with a symmetric 1-sigma uncertainty."""

    value: float
    sigma: float

    def to_dict(self) -> dict:
        return {"value": self.value, "sigma": self.sigma}


@dataclass(frozen=True)
class DipFeature:
    """One fitted transmission dip: center and FWHM in rad/s, depth in
    [0, 1], and the RMS residual of the local Lorentzian fit."""

    center: float
    fwhm: float
    depth: float
    fit_residual: float

    def to_dict(self) -> dict:
        return {
            "center": self.center,
            "fwhm": self.fwhm,
            "depth": self.depth,
            "fit_residual": self.fit_residual,
        }


def _naive_half_width(freqs: np.ndarray, trans: np.ndarray, i: int) -> float:
    """Distance from sample i to the half-depth crossings, averaged over
    the sides where a crossing exists."""
    half_level = 0.5 * (1.0 + trans[i])
    widths = []
    j = i
    while j > 0 and trans[j] < half_level:
        j -= 1
    if trans[j] >= half_level and j < i:
        frac = (half_level - trans[j + 1]) / max(trans[j] - trans[j + 1], 1e-300)
        widths.append(freqs[i] - (freqs[j + 1] - frac * (freqs[j + 1] - freqs[j])))
    j = i
    n = len(freqs)
    while j < n - 1 and trans[j] < half_level:
        j += 1
    if trans[j] >= half_level and j > i:
        frac = (half_level - trans[j - 1]) / max(trans[j] - trans[j - 1], 1e-300)
        widths.append((freqs[j - 1] + frac * (freqs[j] - freqs[j - 1])) - freqs[i])
    if not widths:
        return float(freqs[1] - freqs[0])
    return float(np.mean(widths))


def _fit_lorentzian_dip(freqs: np.ndarray, trans: np.ndarray,
                        center0: float, half_width0: float,
                        depth0: float) -> tuple[float, float, float, float]:
    """Damped least-squares fit of a Lorentzian dip with a linear width
    gradient,

        T = 1 - d * G(v)**2 / (v**2 + G(v)**2),   G(v) = g0 + g1 * v,

    over the given window; returns (center, fwhm, depth, rms_residual).

    The width gradient absorbs the first-order asymmetry of hybridized
    dips (their effective linewidth varies across the line); a symmetric
    3-parameter fit biases the center by several percent of the FWHM
    there.  For a true Lorentzian g1 fits to zero and the symmetric
    result is recovered exactly.
    """
    scale = max(half_width0, 1e-300)
    u = (freqs - center0) / scale

    def residuals(theta):
        depth, mu, g0, g1 = theta
        v = u - mu
        width = g0 + g1 * v
        return 1.0 - depth * width**2 / (v**2 + width**2) - trans

    result = least_squares(residuals, x0=[depth0, 0.0, 1.0, 0.0], method="lm")
    depth, mu, g0, g1 = result.x
    rms = math.sqrt(2.0 * result.cost / len(freqs))
    if abs(g1) < 0.95:
        # half-depth crossings sit at g0/(1 -+ g1)
        fwhm = 2.0 * abs(g0) / (1.0 - g1**2)
    else:
        fwhm = 2.0 * abs(g0)
    return (center0 + mu * scale, fwhm * scale, float(depth), rms)


def detect_dips(spectrum: Spectrum, depth_threshold: float = 0.1) -> list[DipFeature]:
    """Locate transmission dips of depth >= depth_threshold and refine
    each by a local Lorentzian fit.

    Candidate minima come from a prominence scan (so noise wiggles inside
    one dip do not multiply), and each is fit over a window of +-3 naive
    half-widths around the discrete minimum.  Returns features sorted by
    center; empty list when nothing crosses the threshold.
    """
    if not 0.0 < depth_threshold < 1.0:
        raise ValueError("depth_threshold must be in (0, 1)")
    trans = spectrum.transmission
    freqs = spectrum.freqs
    indices, _ = find_peaks(-trans, prominence=depth_threshold)
    indices = [i for i in indices if 1.0 - trans[i] >= depth_threshold]
    features = []
    for i in indices:
        half_width = _naive_half_width(freqs, trans, i)
        lo = freqs[i] - 3.0 * half_width
        hi = freqs[i] + 3.0 * half_width
        window = (freqs >= lo) & (freqs <= hi)
        if np.count_nonzero(window) < 7:
            center = int(i)
            window = np.zeros_like(window)
            window[max(0, center - 3):center + 4] = True
        center, fwhm, depth, rms = _fit_lorentzian_dip(
            freqs[window], trans[window], float(freqs[i]), half_width,
            1.0 - float(trans[i]),
        )
        features.append(DipFeature(center=center, fwhm=fwhm, depth=depth,
                                   fit_residual=rms))
    features.sort(key=lambda f: f.center)
    # noise can seed several candidates inside one dip; their fits land on
    # the same center, so collapse features closer than half a width
    merged: list[DipFeature] = []
    for feature in features:
        if merged and abs(feature.center - merged[-1].center) < 0.5 * max(
            feature.fwhm, merged[-1].fwhm
        ):
            if (feature.depth, -feature.fit_residual) > (
                merged[-1].depth, -merged[-1].fit_residual
            ):
                merged[-1] = feature
        else:
            merged.append(feature)
    return merged


def _local_maxima(values: np.ndarray) -> list[int]:
    idx = []
    n = len(values)
    for i in range(1, n - 1):
        if values[i] >= values[i - 1] and values[i] >= values[i + 1] and (
            values[i] > values[i - 1] or values[i] > values[i + 1]
        ):
            idx.append(i)
    return idx


def detect_unity_points(spectrum: Spectrum, tol: float = 0.01) -> list[float]:
    """Frequencies where the probe passes completely: local maxima with
    T >= 1 - tol and |phase| <= tol, refined by parabolic interpolation.

    When the spectrum shows two or more dips (depth >= 0.5) only points
    strictly between the outermost dip centers are reported; this drops
    the trivial far-detuned transparency of every scatterer.
    """
    if not 0.0 < tol < 0.1:
        raise ValueError("tol must be in (0, 0.1)")
    trans = spectrum.transmission
    phase = spectrum.phase
    freqs = spectrum.freqs
    candidates = [
        i for i in _local_maxima(trans)
        if trans[i] >= 1.0 - tol and abs(phase[i]) <= tol
    ]
    points = []
    for i in candidates:
        # parabolic vertex through the three samples around the maximum
        denom = trans[i - 1] - 2.0 * trans[i] + trans[i + 1]
        if denom < 0:
            step = freqs[i + 1] - freqs[i]
            offset = 0.5 * (trans[i - 1] - trans[i + 1]) / denom * step
            points.append(float(freqs[i] + offset))
        else:
            points.append(float(freqs[i]))
    dips = detect_dips(spectrum, depth_threshold=0.5)
    if len(dips) >= 2:
        lo = dips[0].center
        hi = dips[-1].center
        points = [x for x in points if lo < x < hi]
    return sorted(points)


def classify(spectrum: Spectrum, reference_omega0: Optional[Frequency] = None,
             depth_threshold: float = 0.5,
             unity_tol: float = 0.01) -> ModelClass:
    """Classify the mechanical vibration from the dip/window structure.

    Two dips with a full-transmission point between them mean the
    mechanical mode is quantized.  A single dip is either the bare
    scatterer or a classically driven one; telling those apart needs a
    reference qubit frequency (dip on the reference: no mechanics; dip
    shifted: classical drive).  Anything else raises
    AmbiguousClassificationError.
    """
    dips = detect_dips(spectrum, depth_threshold=depth_threshold)
    if len(dips) == 0:
        raise AmbiguousClassificationError("no transmission dips found")
    if len(dips) > 2:
        raise AmbiguousClassificationError(
            f"{len(dips)} dips found; expected at most two"
        )
    if len(dips) == 2:
        unity = detect_unity_points(spectrum, tol=unity_tol)
        if any(dips[0].center < u < dips[1].center for u in unity):
            return ModelClass.QUANTUM_NMR
        raise AmbiguousClassificationError(
            "two dips but no full-transmission point between them"
        )
    if reference_omega0 is None:
        raise AmbiguousClassificationError(
            "single dip: need a reference qubit frequency to separate "
            "'no mechanics' from 'classical drive'"
        )
    dip = dips[0]
    tolerance = max(0.5 * dip.fwhm, spectrum.grid_step)
    if abs(dip.center - reference_omega0) <= tolerance:
        return ModelClass.NO_NMR
    return ModelClass.CLASSICAL_NMR


def _splitting_inverse(split: float, mismatch: float,
                       var_split: float, var_mismatch: float) -> Estimate:
    """g = sqrt(split**2 - mismatch**2)/2 with first-order propagation."""
    radicand = split**2 - mismatch**2
    if radicand < 0:
        raise InconsistentFeaturesError(
            f"dip splitting {split:.6g} below the frequency mismatch "
            f"{abs(mismatch):.6g}: no coupling reproduces these features"
        )
    g = 0.5 * math.sqrt(radicand)
    var_radicand = 4.0 * split**2 * var_split + 4.0 * mismatch**2 * var_mismatch
    if g > 0:
        sigma = math.sqrt(var_radicand) / (8.0 * g)
    else:
        sigma = 0.5 * var_radicand**0.25
    return Estimate(g, sigma)


def qnmr_coupling_from_dips(omega_plus: Frequency, omega_minus: Frequency,
                            omega0: Frequency, omega_b: Frequency,
                            sigma_plus: float = 0.0, sigma_minus: float = 0.0,
                            sigma_omega0: float = 0.0,
                            sigma_omega_b: float = 0.0) -> Estimate:
    """Mechanical coupling from the two dip centers of the qubit-QNMR
    spectrum: g = sqrt((w+ - w-)**2 - (omega0 - omega_b)**2) / 2."""
    return _splitting_inverse(
        omega_plus - omega_minus,
        omega0 - omega_b,
        sigma_plus**2 + sigma_minus**2,
        sigma_omega0**2 + sigma_omega_b**2,
    )


def stlr_coupling_from_dips(omega_plus: Frequency, omega_minus: Frequency,
                            omega0: Frequency, omega_r: Frequency,
                            sigma_plus: float = 0.0, sigma_minus: float = 0.0,
                            sigma_omega0: float = 0.0,
                            sigma_omega_r: float = 0.0) -> Estimate:
    """Resonator-qubit coupling from the Rabi-split dip pair:
    g = sqrt((w+ - w-)**2 - (omega0 - omega_r)**2) / 2."""
    return _splitting_inverse(
        omega_plus - omega_minus,
        omega0 - omega_r,
        sigma_plus**2 + sigma_minus**2,
        sigma_omega0**2 + sigma_omega_r**2,
    )


def cnmr_coupling_from_shift(omega_shifted: Frequency, omega0: Frequency,
                             omega_b: Frequency, sigma_shifted: float = 0.0,
                             sigma_omega0: float = 0.0,
                             sigma_omega_b: float = 0.0) -> Estimate:
    """Classical-drive coupling from the dressed dip position:
    g = sqrt(omega_shifted**2 - ((omega0 + omega_b)/2)**2)."""
    mid = 0.5 * (omega0 + omega_b)
    radicand = omega_shifted**2 - mid**2
    if radicand < 0:
        raise InconsistentFeaturesError(
            f"shifted dip {omega_shifted:.6g} below the mean frequency "
            f"{mid:.6g}: no classical coupling reproduces it"
        )
    g = math.sqrt(radicand)
    var_mid = 0.25 * (sigma_omega0**2 + sigma_omega_b**2)
    var_radicand = 4.0 * omega_shifted**2 * sigma_shifted**2 + 4.0 * mid**2 * var_mid
    if g > 0:
        sigma = math.sqrt(var_radicand) / (2.0 * g)
    else:
        sigma = var_radicand**0.25
    return Estimate(g, sigma)


def nmr_frequency_from_windows(omega_upper: Frequency, omega_lower: Frequency,
                               omega0: Frequency, sigma_upper: float = 0.0,
                               sigma_lower: float = 0.0,
                               sigma_omega0: float = 0.0) -> Estimate:
    """Mechanical frequency from the two transparency windows of the
    resonator-qubit-QNMR spectrum: omega_b = w+ + w- - omega0."""
    value = omega_upper + omega_lower - omega0
    sigma = math.sqrt(sigma_upper**2 + sigma_lower**2 + sigma_omega0**2)
    return Estimate(value, sigma)


def qnmr_coupling_from_windows(omega_upper: Frequency, omega_lower: Frequency,
                               omega0: Frequency, sigma_upper: float = 0.0,
                               sigma_lower: float = 0.0,
                               sigma_omega0: float = 0.0) -> Estimate:
    """Mechanical coupling from the transparency windows:
    g = sqrt(omega0 (w+ + w-) - omega0**2 - w+ w-)."""
    radicand = omega0 * (omega_upper + omega_lower) - omega0**2 - omega_upper * omega_lower
    if radicand < 0:
        raise InconsistentFeaturesError(
            "transparency windows inconsistent with any mechanical coupling"
        )
    g = math.sqrt(radicand)
    var = (
        (omega0 - omega_lower) ** 2 * sigma_upper**2
        + (omega0 - omega_upper) ** 2 * sigma_lower**2
        + (omega_upper + omega_lower - 2.0 * omega0) ** 2 * sigma_omega0**2
    )
    sigma = math.sqrt(var) / (2.0 * g) if g > 0 else var**0.25
    return Estimate(g, sigma)


@dataclass(frozen=True)
class PhononCount:
    """An integer phonon number and the dimensionless distance of the dip
    from that rung, in units of the per-phonon spacing."""

    n: int
    residual: float


def phonon_number_from_dip(dip_center: Frequency, omega0: Frequency,
                           g_q: Frequency, delta: Frequency) -> PhononCount:
    """Phonon number whose dispersive dip sits at dip_center.

    Inverts dip = omega0 + (g_q**2/delta)(n + 1/2) and rounds to the
    nearest rung; raises OffLadderError when the dip lands more than a
    quarter spacing from every rung or implies a negative count.
    """
    if g_q == 0:
        raise ValueError("phonon readout needs g_q != 0")
    if delta == 0:
        raise ValueError("phonon readout needs a nonzero detuning")
    spacing = g_q**2 / delta
    rungs = (dip_center - omega0 - 0.5 * spacing) / spacing
    n = round(rungs)
    residual = abs(rungs - n)
    if residual > 0.25:
        raise OffLadderError(
            f"dip at {dip_center:.6g} sits {residual:.3f} spacings from the "
            "nearest phonon rung"
        )
    if n < 0:
        raise OffLadderError(f"dip at {dip_center:.6g} implies {n} phonons")
    return PhononCount(n=int(n), residual=float(residual))


def add_measurement_noise(spectrum: Spectrum, sigma: float, seed: int) -> Spectrum:
    """Gaussian measurement noise on transmission (clamped to [0, 1]) and
    small-angle noise of the same scale on phase; deterministic per seed.
    The complex amplitude is dropped because it no longer exists
    consistently.  sigma = 0 returns the spectrum unchanged."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return spectrum
    rng = np.random.default_rng(seed)
    n = spectrum.n_points
    trans = np.clip(spectrum.transmission + rng.normal(0.0, sigma, n), 0.0, 1.0)
    phase = spectrum.phase + rng.normal(0.0, sigma, n)
    phase = np.mod(phase + np.pi, 2.0 * np.pi) - np.pi
    return Spectrum(freqs=spectrum.freqs, transmission=trans, phase=phase,
                    amplitude=None)


@dataclass(frozen=True)
class EstimationReport:
    """Everything recovered from one spectrum: the vibration class, the
    inverted frequencies/couplings with uncertainties, and the raw
    detected features."""

    model_class: ModelClass
    omega0_est: Optional[Estimate] = None
    omega_b_est: Optional[Estimate] = None
    g_est: Optional[Estimate] = None
    phonon_n_est: Optional[int] = None
    phonon_residual: Optional[float] = None
    amplitude_est: Optional[Estimate] = None
    dips: tuple[DipFeature, ...] = ()
    unity_points: tuple[float, ...] = ()
    grid_step: float = 0.0
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        def opt(x):
            return None if x is None else x.to_dict()

        return {
            "model_class": self.model_class.value,
            "omega0_est": opt(self.omega0_est),
            "omega_b_est": opt(self.omega_b_est),
            "g_est": opt(self.g_est),
            "phonon_n_est": self.phonon_n_est,
            "phonon_residual": self.phonon_residual,
            "amplitude_est": opt(self.amplitude_est),
            "raw_features": {
                "dips": [d.to_dict() for d in self.dips],
                "unity_points": list(self.unity_points),
            },
            "grid_step": self.grid_step,
            "notes": list(self.notes),
        }


def _floored(est: Estimate, floor: float) -> Estimate:
    return Estimate(est.value, max(est.sigma, floor))


def estimate_report(spectrum: Spectrum,
                    reference_omega0: Optional[Frequency] = None,
                    reference_omega_b: Optional[Frequency] = None,
                    reference_g_q: Optional[Frequency] = None,
                    reference_delta: Optional[Frequency] = None,
                    field: Optional[float] = None,
                    persistent_current: Optional[float] = None,
                    nmr_length: Optional[float] = None,
                    depth_threshold: float = 0.1,
                    unity_tol: float = 0.01) -> EstimationReport:
    """Full estimation pipeline for spectra taken on the qubit-scattering
    configurations.

    Detects features, classifies the vibration, and inverts whatever the
    class allows: two dips plus a window give the mechanical frequency,
    the qubit frequency and the coupling; a single shifted dip gives the
    classical coupling (needs reference_omega0 and reference_omega_b) and
    the vibration amplitude when field, persistent_current and nmr_length
    are supplied; with reference_g_q and reference_delta a single dip is
    read as a dispersive phonon-number measurement.  When more dips
    survive thresholding than the deepest two, the extras are reported in
    raw features only and the classification proceeds on the deepest two.
    """
    all_dips = detect_dips(spectrum, depth_threshold=depth_threshold)
    unity = detect_unity_points(spectrum, tol=unity_tol)
    step = spectrum.grid_step
    floor = 0.5 * step
    notes: list[str] = []

    if not all_dips:
        return EstimationReport(
            model_class=ModelClass.NO_FEATURES,
            unity_points=tuple(unity),
            grid_step=step,
        )

    working = sorted(all_dips, key=lambda d: d.depth, reverse=True)[:2]
    working.sort(key=lambda d: d.center)
    if len(all_dips) > 2:
        notes.append(
            f"{len(all_dips)} dips detected; classification used the deepest two"
        )

    def report(model_class: ModelClass, **kw) -> EstimationReport:
        return EstimationReport(
            model_class=model_class,
            dips=tuple(all_dips),
            unity_points=tuple(unity),
            grid_step=step,
            notes=tuple(notes),
            **kw,
        )

    if len(working) == 2:
        low, high = working
        between = [u for u in unity if low.center < u < high.center]
        if not between:
            notes.append("two dips but no transparency window between them")
            return report(ModelClass.AMBIGUOUS)
        # under noise several near-unity samples qualify; the phase zero
        # crossing is steep there, so the smallest |phase| picks best
        window = min(
            between,
            key=lambda u: abs(float(np.interp(u, spectrum.freqs, spectrum.phase)))
        )
        omega_b = Estimate(window, step)
        sig_lo, sig_hi = 0.5 * low.fwhm, 0.5 * high.fwhm
        if reference_omega0 is not None:
            omega0 = Estimate(float(reference_omega0), 0.0)
        else:
            omega0 = Estimate(
                low.center + high.center - omega_b.value,
                math.sqrt(sig_lo**2 + sig_hi**2 + omega_b.sigma**2),
            )
        g = qnmr_coupling_from_dips(
            high.center, low.center, omega0.value, omega_b.value,
            sigma_plus=sig_hi, sigma_minus=sig_lo,
            sigma_omega0=omega0.sigma, sigma_omega_b=omega_b.sigma,
        )
        return report(
            ModelClass.QUANTUM_NMR,
            omega0_est=_floored(omega0, floor),
            omega_b_est=_floored(omega_b, floor),
            g_est=_floored(g, floor),
        )

    dip = working[0]
    sigma_dip = max(0.5 * dip.fwhm, floor)

    if reference_g_q is not None and reference_delta is not None:
        if reference_omega0 is None:
            notes.append("dispersive readout needs reference_omega0")
            return report(ModelClass.AMBIGUOUS)
        count = phonon_number_from_dip(dip.center, reference_omega0,
                                       reference_g_q, reference_delta)
        return report(
            ModelClass.DISPERSIVE,
            omega0_est=Estimate(float(reference_omega0), floor),
            phonon_n_est=count.n,
            phonon_residual=count.residual,
        )

    if reference_omega0 is None:
        notes.append(
            "single dip: supply reference_omega0 to separate 'no mechanics' "
            "from 'classical drive'"
        )
        return report(ModelClass.AMBIGUOUS)

    if abs(dip.center - reference_omega0) <= max(0.5 * dip.fwhm, step):
        return report(
            ModelClass.NO_NMR,
            omega0_est=Estimate(dip.center, sigma_dip),
        )

    g = None
    amplitude = None
    if reference_omega_b is not None:
        g = _floored(
            cnmr_coupling_from_shift(dip.center, reference_omega0,
                                     reference_omega_b, sigma_shifted=sigma_dip),
            floor,
        )
        if field is not None and persistent_current is not None and nmr_length is not None:
            from .squid import classical_amplitude

            value = classical_amplitude(g.value, field, persistent_current, nmr_length)
            amplitude = Estimate(value, value * g.sigma / g.value if g.value else 0.0)
    else:
        notes.append("classical coupling needs reference_omega_b")
    return report(
        ModelClass.CLASSICAL_NMR,
        omega_b_est=None if reference_omega_b is None
        else Estimate(float(reference_omega_b), floor),
        g_est=g,
        amplitude_est=amplitude,
    )


__all__ = [
    "AmbiguousClassificationError",
    "DipFeature",
    "Estimate",
    "EstimationReport",
    "InconsistentFeaturesError",
    "ModelClass",
    "OffLadderError",
    "PhononCount",
    "add_measurement_noise",
    "classify",
    "cnmr_coupling_from_shift",
    "detect_dips",
    "detect_unity_points",
    "estimate_report",
    "nmr_frequency_from_windows",
    "phonon_number_from_dip",
    "qnmr_coupling_from_dips",
    "qnmr_coupling_from_windows",
    "stlr_coupling_from_dips",
]
