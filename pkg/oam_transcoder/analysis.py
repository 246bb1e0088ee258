"""Reported quantities: waveforms, cross-talk tables, visibilities and projective measurements."""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import signal

from .exceptions import ValidationError
from .mode_algebra import ModeLabel, PulseState, marginal, power_in, total_power
from .optical_elements import ElementParams, fibre_coupler, slm_fork

logger = logging.getLogger(__name__)

DB_FLOOR = -60.0
UNDEFINED = '*'
PULSE_SHAPES = ('gaussian', 'square')

Readout = Sequence[Tuple[float, float]]


@dataclass(frozen=True)
class EfficiencyMatrix:
    """
    Conversion efficiencies, M[i][j] = power in output j for unit input i.

    Forward: rows are input charges l, columns output bins.
    Reverse: rows are input delays l (bin -l), columns output charges.
    """

    direction: str
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.rows), len(self.cols)):
            raise ValidationError(f"Matrix shape {values.shape} does not match labels", field='values')
        if np.any(values < 0):
            raise ValidationError("Efficiencies must be non-negative", field='values')
        if np.any(values.sum(axis=1) > 1.0 + 1e-9):
            raise ValidationError("Row sums of an efficiency matrix cannot exceed 1", field='values')
        object.__setattr__(self, 'values', values)

    def __getitem__(self, index):
        return self.values[index]

    def diagonal(self) -> np.ndarray:
        """Efficiency of each input into its correct output (timing law column)."""
        return np.array([self.values[i, self.cols.index(row)] for i, row in enumerate(self.rows)])

    def scaled(self, factor: float) -> 'EfficiencyMatrix':
        return EfficiencyMatrix(self.direction, self.rows, self.cols, self.values * factor)

    def to_dict(self) -> Dict:
        return {
            'direction': self.direction,
            'rows': list(self.rows),
            'cols': list(self.cols),
            'values': self.values.tolist(),
        }


@dataclass(frozen=True)
class Waveform:
    times: np.ndarray
    intensity: np.ndarray
    sample_period: float

    @property
    def samples(self) -> List[Tuple[float, float]]:
        return list(zip(self.times.tolist(), self.intensity.tolist()))

    def integral(self) -> float:
        return float(self.intensity.sum() * self.sample_period)

    def peak_times(self, relative_height: float = 0.01) -> np.ndarray:
        """Times of local maxima above `relative_height` of the tallest peak."""
        if not self.intensity.size or self.intensity.max() <= 0:
            return np.array([])
        peaks, _ = signal.find_peaks(self.intensity, height=relative_height * self.intensity.max())
        return self.times[peaks]


@dataclass(frozen=True)
class CrosstalkTable:
    """Nearest-neighbour cross-talk per input, in dB relative to the correct output."""

    direction: str
    inputs: Tuple[int, ...]
    minus: Tuple[Optional[float], ...]
    plus: Tuple[Optional[float], ...]
    floor_db: float

    @property
    def defined(self) -> List[float]:
        return [value for value in self.minus + self.plus if value is not None]

    @property
    def mean_db(self) -> float:
        values = self.defined
        if not values:
            raise ValidationError("Cross-talk table has no defined entries", field='crosstalk')
        return float(np.mean(values))

    def to_dict(self) -> Dict:
        def cell(value):
            return UNDEFINED if value is None else value

        return {
            'direction': self.direction,
            'floor_db': self.floor_db,
            'rows': [
                {'input': row, 'minus_db': cell(minus), 'plus_db': cell(plus)}
                for row, minus, plus in zip(self.inputs, self.minus, self.plus)
            ],
            'mean_db': self.mean_db if self.defined else None,
        }


def _gaussian_pulse(times: np.ndarray, centre: float, width: float) -> np.ndarray:
    sigma = width / (2.0 * math.sqrt(2.0 * math.log(2.0)))
    return np.exp(-((times - centre) ** 2) / (2.0 * sigma ** 2)) / (sigma * math.sqrt(2.0 * math.pi))


def _square_pulse(times: np.ndarray, centre: float, width: float, dt: float) -> np.ndarray:
    inside = (np.abs(times - centre) < width / 2.0).astype(float)
    count = inside.sum()
    return inside / (count * dt) if count else inside


def render_waveform(
    bins: PulseState,
    pulse_fwhm: float = 5e-9,
    bandwidth: Optional[float] = None,
    period: float = 11e-9,
    sample_period: float = 0.1e-9,
    shape: str = 'gaussian',
) -> Waveform:
    """
    Photodiode trace of a pulse train.

    Args:
        bins: State whose bin marginals set the pulse energies
        pulse_fwhm: Pulse duration in seconds
        bandwidth: Oscilloscope bandwidth in Hz, unfiltered when None or inf
        period: Bin spacing T in seconds
        sample_period: Sample spacing in seconds
        shape: 'gaussian' or 'square'

    Returns:
        Waveform with unit-area pulses scaled by bin power
    """
    if not 0 < pulse_fwhm < period:
        raise ValidationError(f"Pulse FWHM {pulse_fwhm:g} s must be positive and shorter than T", field='pulse_fwhm_ns')
    if shape not in PULSE_SHAPES:
        raise ValidationError(f"Unknown pulse shape '{shape}'", field='pulse_shape')
    if not sample_period > 0:
        raise ValidationError("sample_period must be positive", field='sample_ns')

    powers = marginal(bins, 'bin')
    centres = {k: bins.t0 + k * period for k in powers}
    margin = 4.0 * pulse_fwhm
    if centres:
        start, stop = min(centres.values()) - margin, max(centres.values()) + margin
    else:
        start, stop = bins.t0 - margin, bins.t0 + margin
    count = int(round((stop - start) / sample_period)) + 1
    times = start + np.arange(count) * sample_period

    intensity = np.zeros(count)
    for k, power in powers.items():
        if shape == 'gaussian':
            intensity += power * _gaussian_pulse(times, centres[k], pulse_fwhm)
        else:
            intensity += power * _square_pulse(times, centres[k], pulse_fwhm, sample_period)

    if bandwidth is not None and math.isfinite(bandwidth):
        b, a = signal.butter(1, bandwidth, 'low', fs=1.0 / sample_period)
        intensity = np.clip(signal.filtfilt(b, a, intensity), 0.0, None)
    return Waveform(times=times, intensity=intensity, sample_period=sample_period)


def crosstalk_table(matrix: EfficiencyMatrix, floor_db: float = DB_FLOOR) -> CrosstalkTable:
    """
    Nearest-neighbour cross-talk, 10 log10(M[i][correct +- 1] / M[i][correct]).

    Neighbours outside the matrix are undefined; ratios below the floor are clamped to it.
    """
    minus, plus = [], []
    for i, row in enumerate(matrix.rows):
        if row not in matrix.cols:
            raise ValidationError(f"No output column for input {row}", field='cols')
        correct = matrix.cols.index(row)
        diagonal = matrix.values[i, correct]
        if diagonal <= 0:
            raise ValidationError(f"Zero efficiency for input {row}", field='values')
        cells = []
        for neighbour in (correct - 1, correct + 1):
            if not 0 <= neighbour < len(matrix.cols):
                cells.append(None)
                continue
            ratio = matrix.values[i, neighbour] / diagonal
            cells.append(max(floor_db, 10.0 * math.log10(ratio)) if ratio > 0 else floor_db)
        minus.append(cells[0])
        plus.append(cells[1])
    return CrosstalkTable(
        direction=matrix.direction,
        inputs=tuple(matrix.rows),
        minus=tuple(minus),
        plus=tuple(plus),
        floor_db=floor_db,
    )


def visibility(i_max: float, i_min: float) -> float:
    """Fringe visibility (I_max - I_min) / (I_max + I_min)."""
    if i_max + i_min <= 0:
        raise ValidationError("Visibility undefined for zero intensity", field='intensity')
    if i_min < -1e-12 or i_max < i_min - 1e-12 * i_max:
        raise ValidationError(f"Need I_max >= I_min >= 0, got {i_max}, {i_min}", field='intensity')
    return min(1.0, max(0.0, (i_max - i_min) / (i_max + i_min)))


def _sweep_arrays(readout: Readout) -> Tuple[np.ndarray, np.ndarray]:
    if len(readout) < 3:
        raise ValidationError("A phase sweep needs at least three points", field='sweep_points')
    phases = np.array([phase for phase, _ in readout], dtype=float)
    intensities = np.array([value for _, value in readout], dtype=float)
    return phases, intensities


def _is_uniform_period(phases: np.ndarray) -> bool:
    steps = np.diff(phases)
    step = steps.mean()
    return bool(np.allclose(steps, step, rtol=1e-9, atol=1e-12) and
                abs(step * phases.size - 2.0 * math.pi) < 1e-9)


def _fundamental(phases: np.ndarray, intensities: np.ndarray) -> Tuple[float, complex]:
    return float(intensities.mean()), complex(np.mean(intensities * np.exp(-1j * phases)))


def visibility_from_sweep(readout: Readout) -> float:
    """
    Visibility of an interference sweep.

    A uniform sweep over one full period is fitted with its fundamental Fourier component,
    otherwise the raw extremes are used (the sweep must then span 2 pi).
    """
    phases, intensities = _sweep_arrays(readout)
    if _is_uniform_period(phases):
        offset, fundamental = _fundamental(phases, intensities)
        amplitude = 2.0 * abs(fundamental)
        return visibility(offset + amplitude, max(0.0, offset - amplitude))
    if phases.max() - phases.min() < 2.0 * math.pi - 1e-9:
        raise ValidationError("Phase sweep must cover a full period", field='sweep_points')
    return visibility(float(intensities.max()), float(intensities.min()))


def fringe_phase(readout: Readout) -> float:
    """Phase theta of a fringe I(phi) = I0 (1 + V cos(phi + theta)), in (-pi, pi]."""
    phases, intensities = _sweep_arrays(readout)
    if not _is_uniform_period(phases):
        raise ValidationError("fringe_phase needs a uniform sweep over one period", field='sweep_points')
    _, fundamental = _fundamental(phases, intensities)
    if abs(fundamental) == 0:
        raise ValidationError("Sweep has no fringe", field='sweep_points')
    return math.atan2(fundamental.imag, fundamental.real)


def apply_intensity_jitter(readout: Readout, jitter_rms: float, seed: int) -> List[Tuple[float, float]]:
    """Multiply each sample by 1 + jitter_rms * N(0, 1), clipped at zero."""
    if jitter_rms < 0:
        raise ValidationError("jitter_rms must be non-negative", field='analysis.jitter_rms')
    if jitter_rms == 0:
        return [(float(phase), float(value)) for phase, value in readout]
    rng = np.random.default_rng(seed)
    factors = 1.0 + jitter_rms * rng.standard_normal(len(readout))
    return [(float(phase), max(0.0, float(value * factor))) for (phase, value), factor in zip(readout, factors)]


def _target_amplitudes(target: Union[int, PulseState, Mapping[int, complex]]) -> Dict[int, complex]:
    if isinstance(target, PulseState):
        amplitudes: Dict[int, complex] = {}
        for label, amp in target.items():
            amplitudes[label.l] = amplitudes.get(label.l, 0j) + amp
    else:
        amplitudes = {int(l): complex(amp) for l, amp in target.items()}
    norm = math.sqrt(sum(abs(amp) ** 2 for amp in amplitudes.values()))
    if norm == 0:
        raise ValidationError("Projection target is empty", field='target')
    return {l: amp / norm for l, amp in amplitudes.items()}


def projective_measurement(
    output: PulseState,
    target: Union[int, PulseState, Mapping[int, complex]],
    slm: Optional[ElementParams] = None,
    coupler: Optional[ElementParams] = None,
    extinction: float = 0.0,
) -> float:
    """
    Power detected behind an SLM hologram and a single-mode fibre.

    Args:
        output: State to measure
        target: Charge to flatten, or a superposition {l: amplitude} whose projector is displayed
        slm: SLM parameters (diffraction efficiency used, pattern charge set from the target)
        coupler: Fibre coupler parameters
        extinction: Fraction of the rejected power the detector still sees

    Returns:
        Detected power
    """
    if not 0.0 <= extinction <= 1.0:
        raise ValidationError("extinction must lie in [0, 1]", field='loop.coupler_extinction')
    slm = slm or ElementParams(kind='slm')
    coupler = coupler or ElementParams(kind='coupler')

    if isinstance(target, int):
        diffracted = slm_fork(output, ElementParams(kind='slm', name=slm.name, pattern_charge=-target,
                                                    diffraction_efficiency=slm.diffraction_efficiency,
                                                    transmission=slm.transmission))
        coupled = total_power(fibre_coupler(diffracted, coupler))
        rejected = total_power(diffracted) - power_in(diffracted, lambda label: label.l == 0 and label.p == 0)
        return coupled + extinction * coupler.loss * rejected

    amplitudes = _target_amplitudes(target)
    efficiency = slm.diffraction_efficiency * slm.loss * coupler.loss
    groups: Dict[Tuple, List[Tuple[ModeLabel, complex]]] = {}
    for label, amp in output.items():
        groups.setdefault((label.pol, label.p, label.bin), []).append((label, amp))

    detected = 0.0
    for (pol, p, _), terms in groups.items():
        group_power = sum(abs(amp) ** 2 for _, amp in terms)
        projection = 0j
        if p == 0:
            projection = sum(amplitudes.get(label.l, 0j).conjugate() * amp for label, amp in terms)
        projected = abs(projection) ** 2
        detected += efficiency * (projected + extinction * max(0.0, group_power - projected))
    return detected


def oam_generation_rate(repetition_hz: float = 1000.0, slm_frame_hz: float = 60.0) -> Dict:
    """Mode-switching rate of the reverse transcoder against an SLM refresh."""
    if repetition_hz <= 0 or slm_frame_hz <= 0:
        raise ValidationError("Rates must be positive", field='analysis.repetition_hz')
    return {
        'mode_switch_rate_hz': repetition_hz,
        'slm_frame_hz': slm_frame_hz,
        'speedup': repetition_hz / slm_frame_hz,
    }


def efficiency_summary(matrix: EfficiencyMatrix) -> Dict:
    """Diagonal efficiencies and the ratio between consecutive ones."""
    diagonal = matrix.diagonal()
    ratios = (diagonal[1:] / diagonal[:-1]).tolist() if diagonal.size > 1 else []
    return {
        'efficiencies': diagonal.tolist(),
        'adjacent_ratios': ratios,
    }
