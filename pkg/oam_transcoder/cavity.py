"""Mode-filtering Fabry-Perot cavity: Airy response, Gouy comb, per-mode transmission and lock servo."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .constants import C_CODATA
from .exceptions import CavityError, ValidationError
from .mode_algebra import ModeLabel

logger = logging.getLogger(__name__)

LINEWIDTH_CONVENTIONS = {
    # transform limit of a pulse of duration tau, sigma_nu = 1/(4 pi tau)
    'fourier-4pi': 1.0 / (4.0 * math.pi),
    # FWHM time-bandwidth product of a Gaussian pulse
    'gaussian-tbp': 0.441,
}


@dataclass(frozen=True)
class CavityParams:
    """
    Two-mirror cavity parameters (SI units).

    Args:
        R: Mirror intensity reflectivity, 0 < R < 1
        d: Mirror spacing in metres
        n: Refractive index between the mirrors
        Rc1, Rc2: Mirror radii of curvature in metres (inf for planar)
        lock_offset: Lock point detuning from the LG00 resonance in Hz
        peak_transmission: On-resonance transmission cap for LG00
        off_resonance_reflection: Reflection cap for detuned modes
        transverse_leak: Extra transmission factor for modes with 2p+|l| > 0 (0 = ideal filter)
        scatter_charge: OAM tag given to the reflected LG00 remainder in reverse mode
        wavelength: Laser wavelength in metres
        c: Speed of light in m/s
    """

    R: float = 0.95
    d: float = 10e-3
    n: float = 1.0
    Rc1: float = 50e-3
    Rc2: float = 50e-3
    lock_offset: float = 0.0
    peak_transmission: float = 0.90
    off_resonance_reflection: float = 1.0
    transverse_leak: float = 1.0
    scatter_charge: int = 1
    wavelength: float = 795e-9
    c: float = C_CODATA

    def __post_init__(self):
        if not (0.0 < self.R < 1.0):
            raise CavityError(f"Mirror reflectivity must satisfy 0 < R < 1, got R={self.R}", field='cavity.R')
        if not self.d > 0:
            raise CavityError(f"Mirror spacing must be positive, got d={self.d}", field='cavity.d_mm')
        if not self.n > 0:
            raise CavityError(f"Refractive index must be positive, got n={self.n}", field='cavity.n')
        if not (self.wavelength > 0 and self.c > 0):
            raise CavityError("Wavelength and speed of light must be positive", field='cavity.wavelength')
        for name in ('peak_transmission', 'off_resonance_reflection', 'transverse_leak'):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise CavityError(f"{name} must lie in [0, 1], got {value}", field=f'cavity.{name}')
        if self.scatter_charge == 0:
            raise CavityError("scatter_charge must be nonzero so the remainder is rejected",
                              field='cavity.scatter_charge')

    def with_(self, **changes) -> 'CavityParams':
        return replace(self, **changes)


@dataclass(frozen=True)
class CavitySpectrum:
    finesse: float
    fsr: float
    fwhm: float
    gouy_factor: float

    def to_dict(self) -> Dict:
        return {
            'finesse': self.finesse,
            'fsr_hz': self.fsr,
            'fwhm_hz': self.fwhm,
            'gouy_factor': self.gouy_factor,
        }


@dataclass(frozen=True)
class LockState:
    """
    Servo state of the cavity length lock (lengths in metres).

    `drift` is the accumulated disturbance; `length_error` is what remains after the
    piezo correction.
    """

    length_error: float = 0.0
    integrator: float = 0.0
    noise_rms: float = 0.0
    gain_p: float = 0.2
    gain_i: float = 0.5
    drift: float = 0.0
    time: float = 0.0

    def __post_init__(self):
        for name in ('length_error', 'integrator', 'noise_rms', 'gain_p', 'gain_i', 'drift', 'time'):
            if not math.isfinite(getattr(self, name)):
                raise CavityError(f"Lock state field '{name}' is not finite", field=f'lock.{name}')


@dataclass(frozen=True)
class LockTrace:
    times: np.ndarray
    length_errors: np.ndarray
    detunings: np.ndarray
    settle_steps: int
    rms_length: float
    rms_detuning: float
    fwhm_length: float
    final: LockState

    @property
    def locked(self) -> bool:
        """Residual RMS below one twentieth of the resonance width."""
        return self.rms_length < self.fwhm_length / 20.0

    def summary(self) -> Dict:
        return {
            'steps': int(self.times.size),
            'settle_steps': self.settle_steps,
            'rms_length_m': self.rms_length,
            'rms_detuning_hz': self.rms_detuning,
            'fwhm_length_m': self.fwhm_length,
            'locked': self.locked,
        }


def airy_coefficient(params: CavityParams) -> float:
    return 4.0 * params.R / (1.0 - params.R) ** 2


def finesse(params: CavityParams) -> float:
    return math.pi * math.sqrt(params.R) / (1.0 - params.R)


def fsr(params: CavityParams) -> float:
    """Free spectral range c / (2 n d) in Hz."""
    return params.c / (2.0 * params.n * params.d)


def fwhm(params: CavityParams) -> float:
    return fsr(params) / finesse(params)


def g_parameters(params: CavityParams) -> Tuple[float, float]:
    return 1.0 - params.d / params.Rc1, 1.0 - params.d / params.Rc2


def gouy_factor(params: CavityParams) -> float:
    """
    Transverse mode spacing in units of the FSR.

    Raises:
        CavityError: when the resonator is outside the stability range 0 <= g1 g2 <= 1
    """
    g1, g2 = g_parameters(params)
    product = g1 * g2
    if not (0.0 <= product <= 1.0):
        raise CavityError(f"Unstable resonator: g1*g2 = {product:.6g} outside [0, 1]", field='cavity.Rc1_mm')
    return math.acos(math.copysign(math.sqrt(product), g1)) / math.pi


def spectrum(params: CavityParams) -> CavitySpectrum:
    return CavitySpectrum(
        finesse=finesse(params),
        fsr=fsr(params),
        fwhm=fwhm(params),
        gouy_factor=gouy_factor(params),
    )


def _airy(params: CavityParams, detuning):
    phase = np.pi * np.asarray(detuning, dtype=float) / fsr(params)
    return 1.0 / (1.0 + airy_coefficient(params) * np.sin(phase) ** 2)


def airy_transmission(params: CavityParams, nu):
    """
    Plane-wave cavity transmission 1 / (1 + F sin^2(2 pi nu n d / c)).

    Args:
        params: Cavity parameters
        nu: Frequency in Hz, scalar or array, measured from a resonance

    Returns:
        Transmission in (0, 1], same shape as `nu`
    """
    values = np.asarray(nu, dtype=float)
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValidationError("Frequency must be finite and non-negative", field='nu')
    phase = 2.0 * np.pi * values * params.n * params.d / params.c
    result = 1.0 / (1.0 + airy_coefficient(params) * np.sin(phase) ** 2)
    return float(result) if result.ndim == 0 else result


def mode_order(l: int, p: int) -> int:
    return 2 * p + abs(l)


def eigenfrequency(params: CavityParams, l: int, p: int, m: int) -> float:
    """Resonance frequency fsr * (m + (2p + |l| + 1) * gouy) of mode (l, p) in order m."""
    if p < 0:
        raise ValidationError(f"Radial index must be non-negative, got p={p}", field='p')
    return fsr(params) * (m + (mode_order(l, p) + 1) * gouy_factor(params))


def _signed_fraction(x: float) -> float:
    return x - round(x)


def transverse_offset(params: CavityParams, l: int, p: int = 0, gouy: Optional[float] = None) -> float:
    """Distance in Hz from mode (l, p) to the nearest LG00 resonance, signed."""
    g = gouy_factor(params) if gouy is None else gouy
    return fsr(params) * _signed_fraction(mode_order(l, p) * g)


def fwhm_length(params: CavityParams) -> float:
    """Cavity length change that moves a resonance by one FWHM."""
    return fwhm(params) * params.d / optical_frequency(params)


def optical_frequency(params: CavityParams) -> float:
    return params.c / params.wavelength


def lock_detuning(params: CavityParams, lock: Optional[LockState] = None) -> float:
    """Laser detuning from the LG00 resonance in Hz for the current lock state."""
    error = lock.length_error if lock is not None else 0.0
    return params.lock_offset + optical_frequency(params) * error / params.d


def mode_transmission(params: CavityParams, label: ModeLabel, lock: Optional[LockState] = None) -> float:
    """Intensity transmission of one mode at the current lock point."""
    detuning = lock_detuning(params, lock) - transverse_offset(params, label.l, label.p)
    transmission = params.peak_transmission * float(_airy(params, detuning))
    if mode_order(label.l, label.p) > 0:
        transmission *= params.transverse_leak
    return transmission


def mode_response(params: CavityParams, label: ModeLabel, lock: Optional[LockState] = None) -> Tuple[complex, complex]:
    """
    Transmitted and reflected amplitudes of one mode.

    Args:
        params: Cavity parameters
        label: Mode label (only l and p matter)
        lock: Current lock state, perfect lock when omitted

    Returns:
        (t_amp, r_amp) with |t|^2 = eta_t0 * Airy and |r|^2 = eta_r * (1 - |t|^2)
    """
    transmission = mode_transmission(params, label, lock)
    reflection = params.off_resonance_reflection * (1.0 - transmission)
    return complex(math.sqrt(transmission)), complex(math.sqrt(reflection))


def max_clean_oam(params: CavityParams, criterion: float = 1.0, l_max: int = 1000,
                  gouy: Optional[float] = None) -> int:
    """
    Largest l below the first mode that comes within criterion * FWHM of an LG00 resonance.

    Args:
        params: Cavity parameters
        criterion: Separation threshold in units of the FWHM
        l_max: Scan limit, returned when no mode violates the threshold
        gouy: Override of the Gouy factor (sensitivity studies)

    Returns:
        Largest clean charge
    """
    if not criterion > 0:
        raise ValidationError(f"criterion must be positive, got {criterion}", field='criterion')
    threshold = criterion * fwhm(params)
    for l in range(1, l_max + 1):
        if abs(transverse_offset(params, l, 0, gouy)) < threshold:
            logger.debug(f"First unresolved mode l={l} at {transverse_offset(params, l, 0, gouy) / 1e6:.1f} MHz")
            return l - 1
    return l_max


def transmission_spectrum(params: CavityParams, l_values: Iterable[int], points: int = 2001,
                          span: Optional[float] = None) -> Dict:
    """
    Transmission of each LG_{0,l} mode versus laser detuning from the LG00 resonance.

    Args:
        params: Cavity parameters
        l_values: Charges to evaluate
        points: Number of detuning samples
        span: Full detuning span in Hz, one FSR by default

    Returns:
        {'detuning_hz': array, 'modes': {l: array}}
    """
    span = fsr(params) if span is None else span
    detuning = np.linspace(-span / 2.0, span / 2.0, points)
    modes = {}
    for l in l_values:
        curve = params.peak_transmission * _airy(params, detuning - transverse_offset(params, l, 0))
        if l != 0:
            curve = curve * params.transverse_leak
        modes[l] = curve
    return {'detuning_hz': detuning, 'modes': modes}


def _reflected_power(params: CavityParams, detuning: float) -> float:
    transmission = params.peak_transmission * float(_airy(params, detuning))
    return params.off_resonance_reflection * (1.0 - transmission)


def sensed_error(params: CavityParams, length_error: float) -> float:
    """
    Side-of-fringe error signal in metres.

    The reflected LG00 power is read half a linewidth from resonance and scaled by the
    local slope, so small length errors map to themselves.
    """
    half_width = fwhm(params) / 2.0
    scale = optical_frequency(params) / params.d
    h = 1e-3 * fwhm_length(params)
    upper = _reflected_power(params, half_width + scale * h)
    lower = _reflected_power(params, half_width - scale * h)
    slope = (upper - lower) / (2 * h)
    if slope == 0:
        raise CavityError("Reflection slope vanished at the lock point", field='cavity.off_resonance_reflection')
    return (_reflected_power(params, half_width + scale * length_error) - _reflected_power(params, half_width)) / slope


def lock_step(lock: LockState, dt: float, disturbance: float, params: Optional[CavityParams] = None) -> LockState:
    """
    Advance the proportional-integral length lock by one sample.

    Args:
        lock: Current servo state
        dt: Sample period in seconds
        disturbance: Length disturbance added during this sample, metres
        params: Cavity parameters, the 10 mm lab cavity by default

    Returns:
        New LockState
    """
    if not dt > 0:
        raise ValidationError(f"dt must be positive, got {dt}", field='lock.dt_us')
    params = params or CavityParams()
    drift = lock.drift + disturbance
    error = sensed_error(params, lock.length_error + disturbance)
    integrator = lock.integrator + lock.gain_i * error
    correction = lock.gain_p * error + integrator
    return replace(
        lock,
        length_error=drift - correction,
        integrator=integrator,
        drift=drift,
        time=lock.time + dt,
    )


def simulate_lock(
    params: CavityParams,
    lock: LockState,
    steps: int,
    dt: float,
    seed: int,
    step: float = 0.0,
    settle_steps: int = 0,
) -> LockTrace:
    """
    Run the lock against a seeded random-walk disturbance.

    Args:
        params: Cavity parameters
        lock: Initial servo state; noise_rms sets the per-sample disturbance
        steps: Number of samples
        dt: Sample period in seconds
        seed: RNG seed
        step: Length step applied at the first sample, metres
        settle_steps: Samples excluded from the residual RMS

    Returns:
        LockTrace
    """
    if steps <= settle_steps:
        raise ValidationError("steps must exceed settle_steps", field='lock.steps')
    rng = np.random.default_rng(seed)
    disturbances = rng.normal(0.0, lock.noise_rms, steps) if lock.noise_rms > 0 else np.zeros(steps)
    disturbances[0] += step

    times = np.empty(steps)
    errors = np.empty(steps)
    state = lock
    for index in range(steps):
        state = lock_step(state, dt, float(disturbances[index]), params)
        times[index] = state.time
        errors[index] = state.length_error

    scale = optical_frequency(params) / params.d
    residual = errors[settle_steps:]
    rms = float(np.sqrt(np.mean(residual ** 2)))
    trace = LockTrace(
        times=times,
        length_errors=errors,
        detunings=errors * scale,
        settle_steps=settle_steps,
        rms_length=rms,
        rms_detuning=rms * scale,
        fwhm_length=fwhm_length(params),
        final=state,
    )
    logger.info(f"Lock residual {rms * 1e9:.4f} nm rms ({trace.rms_detuning / 1e6:.3f} MHz), locked={trace.locked}")
    return trace


def pulse_linewidth(duration: float, convention: str = 'fourier-4pi') -> float:
    """Spectral width in Hz of a pulse of the given duration (seconds)."""
    if not duration > 0:
        raise ValidationError(f"Pulse duration must be positive, got {duration}", field='pulse_fwhm_ns')
    try:
        return LINEWIDTH_CONVENTIONS[convention] / duration
    except KeyError:
        raise ValidationError(f"Unknown linewidth convention '{convention}'", field='convention')


def pulse_fits_cavity(params: CavityParams, duration: float, convention: str = 'fourier-4pi') -> bool:
    return pulse_linewidth(duration, convention) < fwhm(params)


def mode_waist(params: CavityParams, wavelength: Optional[float] = None) -> float:
    """Waist radius in metres of the cavity's fundamental mode."""
    wavelength = params.wavelength if wavelength is None else wavelength
    g1, g2 = g_parameters(params)
    product = g1 * g2
    denominator = g1 + g2 - 2.0 * product
    if not (0.0 <= product < 1.0) or (g1 != g2 and denominator == 0):
        raise CavityError("Cavity has no finite Gaussian eigenmode", field='cavity.Rc1_mm')
    if g1 == g2:
        w0_squared = (wavelength * params.d / (2.0 * math.pi)) * math.sqrt((1.0 + g1) / (1.0 - g1))
    else:
        w0_squared = (wavelength * params.d / math.pi) * math.sqrt(product * (1.0 - product)) / abs(denominator)
    return math.sqrt(w0_squared / params.n)
