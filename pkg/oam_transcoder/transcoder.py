"""Loop engine: OAM to time-bin conversion, its reverse, and the unbalanced Mach-Zehnder."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .analysis import EfficiencyMatrix, projective_measurement
from .cavity import CavityParams, LockState, mode_response
from .constants import NS
from .exceptions import ConversionError, ValidationError
from .mode_algebra import ModeLabel, Polarization, PulseState, marginal, total_power
from .optical_elements import BACKWARD, FORWARD, ElementParams, apply_element, rejected_port

logger = logging.getLogger(__name__)

FORWARD_MODE = 'forward'
REVERSE_MODE = 'reverse'
DIRECTIONS = (FORWARD_MODE, REVERSE_MODE)

# Phase picked up by the reflected LG00 remainder when it is scattered to nonzero charge
SCATTER_PHASE = 1j
BIN_TOLERANCE = 0.01


@dataclass(frozen=True)
class EomSchedule:
    """
    Gate timing of the loop EOM.

    Forward: one window per return to the cavity, starting one round trip after t0.
    Reverse: a single window at the trigger time t0.
    """

    mode: str
    trigger_time: float
    window: float
    period: float
    count: int = 1

    def __post_init__(self):
        if self.mode not in DIRECTIONS:
            raise ValidationError(f"EOM schedule mode must be one of {DIRECTIONS}", field='loop.eom_schedule')
        if not 0 < self.window < self.period:
            raise ValidationError(f"EOM gate window {self.window / NS:g} ns must be positive and shorter than T",
                                  field='loop.gate_window_ns')

    @classmethod
    def auto(cls, loop: 'LoopParams', mode: str) -> 'EomSchedule':
        if mode == FORWARD_MODE:
            return cls(mode, loop.t0 + loop.T, loop.gate_window, loop.T, count=loop.max_loops)
        return cls(mode, loop.t0, loop.gate_window, loop.T, count=1)

    def windows(self) -> Tuple[Tuple[float, float], ...]:
        half = self.window / 2.0
        centres = (self.trigger_time + k * self.period for k in range(self.count))
        return tuple((centre - half, centre + half) for centre in centres)


@dataclass(frozen=True)
class LoopParams:
    """
    Optical loop of the transcoder.

    Args:
        components: Element parameters by component name
        forward_order: Component names crossed per round trip, OAM to time-bin
        reverse_order: Component names crossed per round trip, time-bin to OAM
        T: Round-trip time in seconds
        t0: Reference time in seconds
        max_loops: Largest number of round trips
        reentry_coupling: Mode-match efficiency of the returning pulse into the cavity
        gate_window: EOM gate length in seconds
        exit_port: PBS whose rejected port is the reverse output
        slm: SLM used for readout and projective measurement
        coupler: Fibre coupler used for readout
        coupler_extinction: Fraction of non-flattened power still detected behind the fibre
        schedules: Manual EOM schedules by mode (fault injection); automatic when absent
    """

    components: Mapping[str, ElementParams]
    forward_order: Tuple[str, ...]
    reverse_order: Tuple[str, ...]
    T: float = 11e-9
    t0: float = 0.0
    max_loops: int = 12
    reentry_coupling: float = 0.8053
    gate_window: float = 8e-9
    exit_port: str = 'pbs1'
    slm: ElementParams = field(default_factory=lambda: ElementParams(kind='slm'))
    coupler: ElementParams = field(default_factory=lambda: ElementParams(kind='coupler'))
    coupler_extinction: float = 0.0
    schedules: Mapping[str, EomSchedule] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'forward_order', tuple(self.forward_order))
        object.__setattr__(self, 'reverse_order', tuple(self.reverse_order))
        if not self.T > 0:
            raise ValidationError(f"Round-trip time must be positive, got {self.T}", field='loop.T_ns')
        if isinstance(self.max_loops, bool) or not isinstance(self.max_loops, int) or self.max_loops < 1:
            raise ValidationError(f"max_loops must be a positive integer, got {self.max_loops!r}",
                                  field='loop.max_loops')
        if not 0.0 <= self.reentry_coupling <= 1.0:
            raise ValidationError("reentry_coupling must lie in [0, 1]", field='loop.reentry_coupling')
        if not 0.0 <= self.coupler_extinction <= 1.0:
            raise ValidationError("coupler_extinction must lie in [0, 1]", field='loop.coupler_extinction')
        if not 0 < self.gate_window < self.T:
            raise ValidationError(f"EOM gate window {self.gate_window / NS:g} ns must be positive and shorter "
                                  f"than T = {self.T / NS:g} ns", field='loop.gate_window_ns')
        for key, order in (('forward_order', self.forward_order), ('reverse_order', self.reverse_order)):
            if not order:
                raise ValidationError("Component chain is empty", field=f'loop.{key}')
            missing = [name for name in order if name not in self.components]
            if missing:
                raise ValidationError(f"Unknown components {missing}", field=f'loop.{key}')
            if not any(self.components[name].kind == 'eom' for name in order):
                raise ValidationError("Component chain has no EOM", field=f'loop.{key}')
            reflections = sum(self.components[name].passes for name in order
                              if self.components[name].kind == 'mirror')
            if reflections % 2:
                raise ValidationError(f"Odd number of reflections ({reflections}) per round trip flips the OAM sign",
                                      field=f'loop.{key}')
        if self.exit_port not in self.reverse_order or self.components[self.exit_port].kind != 'pbs':
            raise ValidationError(f"Exit port '{self.exit_port}' must be a PBS in the reverse chain",
                                  field='loop.exit_port')

    def schedule(self, mode: str) -> EomSchedule:
        return self.schedules.get(mode) or EomSchedule.auto(self, mode)

    def chain(self, mode: str) -> List[ElementParams]:
        """Element parameters in crossing order, EOM gates filled in from the schedule."""
        order = self.forward_order if mode == FORWARD_MODE else self.reverse_order
        elements = []
        for name in order:
            params = self.components[name]
            if params.kind == 'eom' and not params.gate_windows:
                params = params.with_windows(self.schedule(mode).windows())
            elements.append(params)
        return elements

    def with_(self, **changes) -> 'LoopParams':
        return replace(self, **changes)


@dataclass(frozen=True)
class TraceEvent:
    time: float
    element: str
    pass_index: int
    power_in: float
    power_out: float
    exported: float = 0.0
    rejected: float = 0.0

    @property
    def loss(self) -> float:
        return self.power_in - self.power_out - self.exported

    def to_dict(self) -> Dict:
        return {
            't_ns': self.time / NS,
            'element': self.element,
            'pass': self.pass_index,
            'power_in': self.power_in,
            'power_out': self.power_out,
            'exported': self.exported,
            'rejected': self.rejected,
            'loss': self.loss,
        }


class SimulationTrace:
    """Ordered record of element applications during one conversion run."""

    def __init__(self, direction: str, input_power: float):
        self.direction = direction
        self.input_power = input_power
        self.events: List[TraceEvent] = []

    def record(self, event: TraceEvent):
        if self.events and event.time < self.events[-1].time:
            raise ConversionError(f"Trace time went backwards at {event.element}")
        self.events.append(event)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    @property
    def total_loss(self) -> float:
        return sum(event.loss for event in self.events)

    @property
    def total_exported(self) -> float:
        return sum(event.exported for event in self.events)

    def rejected_at(self, element: str) -> float:
        return sum(event.rejected for event in self.events if event.element == element)

    def to_records(self) -> List[Dict]:
        return [event.to_dict() for event in self.events]


@dataclass(frozen=True)
class MzParams:
    """
    Unbalanced Mach-Zehnder of the state preparation and readout stage.

    Args:
        arm_delay: Extra delay of the long arm in seconds
        splitting: Intensity fraction sent through the short arm
        relative_phase: Phase of the long arm in radians
        arm_loss: Intensity transmission of the long arm
        coherence: Mutual coherence of the recombined pulses (1 = fully coherent)
    """

    arm_delay: float = 11e-9
    splitting: float = 0.5
    relative_phase: float = 0.0
    arm_loss: float = 1.0
    coherence: float = 1.0

    def __post_init__(self):
        for name in ('splitting', 'arm_loss', 'coherence'):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1]", field=f'mz.{name}')
        if not self.arm_delay > 0:
            raise ValidationError("arm_delay must be positive", field='mz.arm_delay_m')

    def delay_bins(self, period: float) -> int:
        """Arm delay as a whole number of bins."""
        bins = self.arm_delay / period
        nearest = round(bins)
        if nearest < 1 or abs(bins - nearest) > BIN_TOLERANCE:
            raise ConversionError(f"Arm delay {self.arm_delay / NS:.4f} ns is not a multiple of T = {period / NS:g} ns",
                                  field='mz.arm_delay_m')
        return int(nearest)


def _cavity_split(state: PulseState, cavity: CavityParams, lock: Optional[LockState], tag_remainder: bool = True):
    """
    Transmitted and reflected parts.

    With tag_remainder the reflected LG00 remainder leaves with charge cavity.scatter_charge.
    Without it the remainder keeps l = 0 and the next VPP pass moves it off zero, so only the
    unconverted VPP fraction can come back through the cavity.
    """
    responses: Dict[Tuple[int, int], Tuple[complex, complex]] = {}
    transmitted, reflected = [], []
    for label, amp in state.items():
        key = (label.l, label.p)
        if key not in responses:
            responses[key] = mode_response(cavity, label, lock)
        t_amp, r_amp = responses[key]
        transmitted.append((label, amp * t_amp))
        if label.l == 0 and label.p == 0:
            remainder = label.with_(l=cavity.scatter_charge) if tag_remainder else label
            reflected.append((remainder, amp * r_amp * SCATTER_PHASE))
        else:
            reflected.append((label, amp * r_amp))
    return PulseState(transmitted, t0=state.t0), PulseState(reflected, t0=state.t0)


def _shift_bins(state: PulseState, step: int = 1) -> PulseState:
    return state.map_labels(lambda label: label.with_(bin=label.bin + step))


def _element_time(loop: LoopParams, start_bin: int, pass_index: int, position: int, length: int) -> float:
    return loop.t0 + (start_bin + pass_index + (position + 1) / (length + 2)) * loop.T


def _check_forward_input(state: PulseState, loop: LoopParams):
    for label in state:
        if label.bin != 0:
            raise ConversionError(f"Forward input must sit in bin 0, got {label}", field='inputs')
        if label.l < 0:
            raise ConversionError(f"Negative charge {label.l} is not supported", field='inputs')
        if label.l > loop.max_loops:
            raise ConversionError(f"Charge {label.l} exceeds max_loops = {loop.max_loops}", field='loop.max_loops')


def run_forward(
    state: PulseState,
    loop: LoopParams,
    cavity: CavityParams,
    lock: Optional[LockState] = None,
) -> Tuple[PulseState, SimulationTrace]:
    """
    Convert an OAM superposition into a time-bin train.

    The input sits at the cavity input plane at t0. Each pass the cavity transmits the
    LG00 part into the output bin of that pass and reflects the rest into the loop, whose
    VPP lowers the charge by one per round trip. The reflected LG00 remainder is carried
    to l = -1 by that same VPP pass and is not transmitted again.

    Args:
        state: Input over H-polarized OAM labels in bin 0
        loop: Loop parameters
        cavity: Cavity parameters
        lock: Cavity lock state, perfect lock when omitted

    Returns:
        (output state over time bins, trace)
    """
    _check_forward_input(state, loop)
    trace = SimulationTrace(FORWARD_MODE, total_power(state))
    chain = loop.chain(FORWARD_MODE)
    coupling = math.sqrt(loop.reentry_coupling)

    circulating = state.with_t0(loop.t0).filter(lambda label: label.pol is Polarization.H)
    rejected = total_power(state) - total_power(circulating)
    if rejected > 0:
        logger.warning(f"Dropping {rejected:.3g} of V-polarized input power at entry")
    trace.record(TraceEvent(loop.t0, 'entry', 0, total_power(state), total_power(circulating), rejected=rejected))

    output = PulseState(t0=loop.t0)
    for k in range(loop.max_loops + 1):
        if not circulating:
            break
        power_in = total_power(circulating)
        transmitted, reflected = _cavity_split(circulating, cavity, lock, tag_remainder=False)
        output = output + transmitted
        trace.record(TraceEvent(loop.t0 + k * loop.T, 'cavity', k, power_in, total_power(reflected),
                                exported=total_power(transmitted)))
        logger.debug(f"Forward pass {k}: {total_power(transmitted):.6g} out, {len(reflected)} labels circulating")
        if k == loop.max_loops:
            trace.record(TraceEvent(loop.t0 + k * loop.T, 'truncation', k, total_power(reflected), 0.0))
            break

        current = reflected
        arrival = loop.t0 + (k + 1) * loop.T
        for position, params in enumerate(chain):
            before = total_power(current)
            dropped = total_power(rejected_port(current, params)) if params.kind == 'pbs' else 0.0
            current = apply_element(current, params, FORWARD, t_arrival=arrival)
            trace.record(TraceEvent(_element_time(loop, 0, k, position, len(chain)), params.name, k, before,
                                    total_power(current), rejected=dropped))

        before = total_power(current)
        current = current.scaled(coupling)
        trace.record(TraceEvent(_element_time(loop, 0, k, len(chain), len(chain)), 'reentry', k, before,
                                total_power(current)))
        circulating = _shift_bins(current)

    return output, trace


def _check_reverse_input(state: PulseState, loop: LoopParams):
    for label in state:
        if label.bin > 0:
            raise ConversionError(f"Reverse input bin {label.bin} is later than t0", field='inputs')
        if -label.bin > loop.max_loops:
            raise ConversionError(f"Bin {label.bin} needs more than max_loops = {loop.max_loops} round trips",
                                  field='loop.max_loops')
        if label.l != 0:
            raise ConversionError(f"Reverse input must be Gaussian (l = 0), got {label}", field='inputs')


def _apply_eom_by_bin(state: PulseState, params: ElementParams, loop: LoopParams) -> PulseState:
    result = PulseState(t0=state.t0)
    for bin_index in sorted({label.bin for label in state}):
        part = state.filter(lambda label, b=bin_index: label.bin == b)
        result = result + apply_element(part, params, BACKWARD, t_arrival=loop.t0 + bin_index * loop.T)
    return result


def run_reverse(
    state: PulseState,
    loop: LoopParams,
    cavity: CavityParams,
    lock: Optional[LockState] = None,
) -> Tuple[PulseState, SimulationTrace]:
    """
    Convert a time-bin train into an OAM superposition.

    A pulse injected at t0 - l*T circulates l times, gaining one unit of charge per round
    trip, and leaves through the exit PBS when the EOM fires at t0.

    Args:
        state: Input over l = 0 labels in bins <= 0
        loop: Loop parameters
        cavity: Cavity parameters
        lock: Cavity lock state, perfect lock when omitted

    Returns:
        (output state over OAM labels in bin 0, trace)
    """
    _check_reverse_input(state, loop)
    trace = SimulationTrace(REVERSE_MODE, total_power(state))
    chain = loop.chain(REVERSE_MODE)
    coupling = math.sqrt(loop.reentry_coupling)
    output = PulseState(t0=loop.t0)
    if not state:
        return output, trace

    start_bin = min(label.bin for label in state)
    power_in = total_power(state)
    transmitted, reflected = _cavity_split(state.with_t0(loop.t0), cavity, lock)
    trace.record(TraceEvent(loop.t0 + start_bin * loop.T, 'injection', 0, power_in, total_power(transmitted)))
    circulating = transmitted

    for k in range(loop.max_loops + 1):
        if not circulating:
            break
        current = circulating
        for position, params in enumerate(chain):
            before = total_power(current)
            exported = dropped = 0.0
            if params.kind == 'pbs':
                other = rejected_port(current, params).scaled(params.amplitude_factor)
                if params.name == loop.exit_port:
                    output = output + other
                    exported = total_power(other)
                else:
                    dropped = total_power(rejected_port(current, params))
            if params.kind == 'eom':
                current = _apply_eom_by_bin(current, params, loop)
            else:
                current = apply_element(current, params, BACKWARD)
            trace.record(TraceEvent(_element_time(loop, start_bin, k, position, len(chain)), params.name, k, before,
                                    total_power(current), exported=exported, rejected=dropped))

        time = _element_time(loop, start_bin, k, len(chain), len(chain))
        before = total_power(current)
        current = current.scaled(coupling)
        _, current = _cavity_split(current, cavity, lock)
        current = _shift_bins(current)
        late = current.filter(lambda label: label.bin > 0)
        if late:
            logger.warning(f"{total_power(late):.3g} of power missed the exit gate")
            current = current.filter(lambda label: label.bin <= 0)
        trace.record(TraceEvent(time, 'reentry', k, before, total_power(current)))
        logger.debug(f"Reverse pass {k}: {total_power(output):.6g} out, {len(current)} labels circulating")
        circulating = current

    if circulating:
        last = trace.events[-1].time
        trace.record(TraceEvent(last, 'truncation', loop.max_loops, total_power(circulating), 0.0))
    return output, trace


def per_loop_transmission(loop: LoopParams, direction: str = FORWARD_MODE) -> float:
    """Intensity transmission of one round trip: component losses times re-entry coupling."""
    if direction not in DIRECTIONS:
        raise ValidationError(f"direction must be one of {DIRECTIONS}", field='direction')
    order = loop.forward_order if direction == FORWARD_MODE else loop.reverse_order
    product = 1.0
    for name in order:
        product *= loop.components[name].loss
    return product * loop.reentry_coupling


def gamma(loop: LoopParams, direction: str = FORWARD_MODE) -> float:
    """Circulation loss factor, the intensity ratio between adjacent output bins."""
    transmission = per_loop_transmission(loop, direction)
    if transmission <= 0:
        raise ConversionError("Loop transmits no power", field='loop.components')
    return 1.0 / transmission


def improved_loop(loop: LoopParams, component_transmission: float = 0.995,
                  reentry_coupling: float = 0.90) -> LoopParams:
    """Same chain with every component pass upgraded and better mode matching."""
    components = {name: replace(params, transmission=component_transmission)
                  for name, params in loop.components.items()}
    return loop.with_(components=components, reentry_coupling=reentry_coupling)


def lossless_loop(loop: LoopParams) -> LoopParams:
    """Same chain with ideal components, ideal coupling and pure VPP conversion."""
    components = {name: replace(params, transmission=1.0, impurity=0.0, diffraction_efficiency=1.0)
                  for name, params in loop.components.items()}
    return loop.with_(components=components, reentry_coupling=1.0, coupler_extinction=0.0,
                      slm=replace(loop.slm, transmission=1.0, diffraction_efficiency=1.0),
                      coupler=replace(loop.coupler, transmission=1.0))


def _forward_row(args) -> List[float]:
    l, l_range, loop, cavity, lock = args
    output, _ = run_forward(PulseState({ModeLabel(Polarization.H, l): 1.0}, t0=loop.t0), loop, cavity, lock)
    powers = marginal(output, 'bin')
    return [powers.get(j, 0.0) for j in l_range]


def _reverse_row(args) -> List[float]:
    l, l_range, loop, cavity, lock = args
    output, _ = run_reverse(PulseState({ModeLabel(Polarization.H, 0, 0, -l): 1.0}, t0=loop.t0), loop, cavity, lock)
    return [projective_measurement(output, j, loop.slm, loop.coupler, loop.coupler_extinction) for j in l_range]


def conversion_matrix(
    direction: str,
    l_range: Iterable[int],
    loop: LoopParams,
    cavity: CavityParams,
    lock: Optional[LockState] = None,
    workers: int = 1,
) -> EfficiencyMatrix:
    """
    Efficiency matrix from one run per basis input.

    Forward: M[i][j] = power in bin j for input |l_i>.
    Reverse: M[i][j] = power detected on charge j for a pulse at t0 - l_i T.

    Args:
        direction: 'forward' or 'reverse'
        l_range: Charges (and bins) to tabulate
        loop: Loop parameters
        cavity: Cavity parameters
        lock: Cavity lock state
        workers: Worker threads; rows are assembled in input order

    Returns:
        EfficiencyMatrix
    """
    if direction not in DIRECTIONS:
        raise ValidationError(f"direction must be one of {DIRECTIONS}", field='direction')
    l_range = tuple(l_range)
    if not l_range or min(l_range) < 0 or max(l_range) > loop.max_loops:
        raise ConversionError(f"l range {l_range} must lie within [0, {loop.max_loops}]", field='inputs.l_values')
    row = _forward_row if direction == FORWARD_MODE else _reverse_row
    jobs = [(l, l_range, loop, cavity, lock) for l in l_range]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, jobs))
    else:
        rows = [row(job) for job in jobs]
    return EfficiencyMatrix(direction=direction, rows=l_range, cols=l_range, values=rows)


def max_convertible_modes(loop: LoopParams, cavity: CavityParams, threshold_db: float = -20.0,
                          lock: Optional[LockState] = None) -> int:
    """Largest charge whose forward efficiency stays within threshold_db of the l = 0 efficiency."""
    matrix = conversion_matrix(FORWARD_MODE, range(loop.max_loops + 1), loop, cavity, lock)
    diagonal = matrix.diagonal()
    if diagonal[0] <= 0:
        raise ConversionError("No power reaches the l = 0 output bin")
    best = 0
    for l, efficiency in enumerate(diagonal):
        if efficiency > 0 and 10.0 * math.log10(efficiency / diagonal[0]) >= threshold_db:
            best = l
    return best


def mz_prepare(state: PulseState, mz: MzParams, loop: LoopParams) -> PulseState:
    """
    Split every term into an undelayed and a delayed copy.

    The delayed copy moves arm_delay / T bins later and carries
    sqrt(1 - splitting) * sqrt(arm_loss) * exp(i relative_phase).
    """
    delay = mz.delay_bins(loop.T)
    direct = math.sqrt(mz.splitting)
    delayed = math.sqrt(1.0 - mz.splitting) * math.sqrt(mz.arm_loss) * complex(math.cos(mz.relative_phase),
                                                                              math.sin(mz.relative_phase))
    terms = []
    for label, amp in state.items():
        terms.append((label, amp * direct))
        terms.append((label.with_(bin=label.bin + delay), amp * delayed))
    return PulseState(terms, t0=state.t0)


def mz_readout(output: PulseState, mz: MzParams, phase_sweep: Sequence[float], loop: LoopParams,
               early_bin: Optional[int] = None) -> List[Tuple[float, float]]:
    """
    Interfere the early bin, sent through the long arm, with the late bin.

    I(phi) = |sqrt(arm_loss) a_k|^2 + |b_{k+D}|^2 + 2 coherence Re(conj(sqrt(arm_loss) a_k) b_{k+D} e^{i phi}),
    summed over spatial modes.

    Args:
        output: Converted pulse train
        mz: Interferometer parameters
        phase_sweep: Phases of the late pulse in radians
        loop: Loop parameters (bin period)
        early_bin: Bin k of the early pulse, the first populated bin by default

    Returns:
        List of (phase, intensity)
    """
    delay = mz.delay_bins(loop.T)
    bins = sorted({label.bin for label in output})
    if early_bin is None:
        if not bins:
            raise ConversionError("Nothing to interfere: output is empty", field='inputs')
        early_bin = bins[0]

    early: Dict[Tuple, complex] = {}
    late: Dict[Tuple, complex] = {}
    for label, amp in output.items():
        key = (label.pol, label.l, label.p)
        if label.bin == early_bin:
            early[key] = early.get(key, 0j) + amp * math.sqrt(mz.arm_loss)
        elif label.bin == early_bin + delay:
            late[key] = late.get(key, 0j) + amp

    incoherent = sum(abs(a) ** 2 for a in early.values()) + sum(abs(b) ** 2 for b in late.values())
    cross = sum(early[key].conjugate() * late[key] for key in early if key in late)
    readout = []
    for phase in phase_sweep:
        value = incoherent + 2.0 * mz.coherence * (cross * complex(math.cos(phase), math.sin(phase))).real
        readout.append((float(phase), max(0.0, value)))
    return readout


def mz_compensating_arm_loss(loop: LoopParams, cavity: CavityParams, lock: Optional[LockState] = None) -> float:
    """Long-arm loss that gives the two converted components of an l = 0, 1 superposition equal strength."""
    matrix = conversion_matrix(FORWARD_MODE, (0, 1), loop, cavity, lock)
    if matrix[0, 0] <= 0:
        raise ConversionError("No power in the l = 0 output bin")
    ratio = matrix[1, 1] / matrix[0, 0]
    if ratio > 1.0:
        raise ValidationError("Late component is stronger; no passive arm loss balances it", field='mz.arm_loss')
    return float(ratio)
