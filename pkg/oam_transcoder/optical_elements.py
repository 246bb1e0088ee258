"""Optical elements of the transcoder loop as linear operators on PulseState."""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from .constants import NS
from .exceptions import ValidationError
from .mode_algebra import Polarization, PulseState

logger = logging.getLogger(__name__)

FORWARD = 'forward'
BACKWARD = 'backward'

ELEMENT_KINDS = ('pbs', 'eom', 'vpp', 'mirror', 'hwp', 'qwp', 'slm', 'coupler', 'four_f')
PBS_PORTS = ('transmit', 'reflect')


def _check_fraction(value: float, name: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ValidationError(f"{name} must lie in [0, 1], got {value}", field=name)
    return value


@dataclass(frozen=True)
class ElementParams:
    """
    Parameter bundle for one element of the loop.

    `transmission` is the intensity transmission of a single pass; `passes` is how many
    times the pulse crosses the element per round trip, so the element loss is
    transmission ** passes. Only the fields relevant to `kind` are used.
    """

    kind: str
    name: str = ''
    transmission: float = 1.0
    passes: int = 1
    gate_windows: Tuple[Tuple[float, float], ...] = field(default_factory=tuple)
    charge_step: int = 1
    pattern_charge: int = 0
    diffraction_efficiency: float = 1.0
    fast_axis: float = 0.0
    impurity: float = 0.0
    port: str = 'transmit'

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise ValidationError(f"Unknown element kind '{self.kind}'", field=self._field('kind'))
        if not self.name:
            object.__setattr__(self, 'name', self.kind)
        _check_fraction(self.transmission, self._field('transmission'))
        _check_fraction(self.diffraction_efficiency, self._field('diffraction_efficiency'))
        _check_fraction(self.impurity, self._field('impurity'))
        if isinstance(self.passes, bool) or not isinstance(self.passes, int) or self.passes < 1:
            raise ValidationError(f"passes must be a positive integer, got {self.passes!r}",
                                  field=self._field('passes'))
        if self.charge_step not in (-1, 1):
            raise ValidationError(f"charge_step must be +1 or -1, got {self.charge_step!r}",
                                  field=self._field('charge_step'))
        if isinstance(self.pattern_charge, bool) or not isinstance(self.pattern_charge, int):
            raise ValidationError("pattern_charge must be an integer", field=self._field('pattern_charge'))
        if self.port not in PBS_PORTS:
            raise ValidationError(f"port must be one of {PBS_PORTS}, got '{self.port}'", field=self._field('port'))

        windows = tuple((float(start), float(end)) for start, end in self.gate_windows)
        for index, (start, end) in enumerate(windows):
            if not (math.isfinite(start) and math.isfinite(end)) or end <= start:
                raise ValidationError(f"Gate window {index} is empty or non-finite", field=self._field('gate_windows'))
            if index and start < windows[index - 1][1]:
                raise ValidationError("Gate windows must be sorted and non-overlapping",
                                      field=self._field('gate_windows'))
        object.__setattr__(self, 'gate_windows', windows)

    def _field(self, name: str) -> str:
        return f"{self.name or self.kind}.{name}"

    @property
    def loss(self) -> float:
        """Intensity transmission accumulated over all passes."""
        return self.transmission ** self.passes

    @property
    def amplitude_factor(self) -> float:
        return math.sqrt(self.loss)

    def gated(self, t_arrival: float) -> bool:
        return any(start <= t_arrival <= end for start, end in self.gate_windows)

    def with_windows(self, windows) -> 'ElementParams':
        return replace(self, gate_windows=tuple(windows))

    @classmethod
    def from_dict(cls, name: str, data: Mapping) -> 'ElementParams':
        """
        Build element parameters from a run-file mapping.

        Args:
            name: Component name in the chain
            data: Keys kind, transmission, passes, gate_windows_ns, charge_step, pattern_charge,
                diffraction_efficiency, fast_axis_rad, impurity, port

        Returns:
            ElementParams
        """
        kwargs = {'name': name, 'kind': data.get('kind', name)}
        for key in ('transmission', 'passes', 'charge_step', 'pattern_charge', 'diffraction_efficiency',
                    'impurity', 'port'):
            if key in data:
                kwargs[key] = data[key]
        if 'fast_axis_rad' in data:
            kwargs['fast_axis'] = float(data['fast_axis_rad'])
        if 'gate_windows_ns' in data:
            kwargs['gate_windows'] = tuple((start * NS, end * NS) for start, end in data['gate_windows_ns'])
        return cls(**kwargs)


def _swap_polarization(state: PulseState, factor: float = 1.0) -> PulseState:
    return state.map_terms(lambda label, amp: (label.with_(pol=label.pol.swapped()), amp * factor))


def pbs(state: PulseState) -> Tuple[PulseState, PulseState]:
    """
    Split a state on a polarizing beam splitter.

    Args:
        state: Input state

    Returns:
        (transmitted H components, reflected V components)
    """
    transmitted = state.filter(lambda label: label.pol is Polarization.H)
    reflected = state.filter(lambda label: label.pol is Polarization.V)
    return transmitted, reflected


def eom(state: PulseState, t_arrival: float, params: ElementParams) -> PulseState:
    """Swap H and V when the pulse arrives inside a gate window, then attenuate."""
    if not math.isfinite(t_arrival):
        raise ValidationError(f"EOM arrival time must be finite, got {t_arrival}", field='t_arrival')
    if params.gated(t_arrival):
        logger.debug(f"{params.name} gated at t={t_arrival / NS:.3f} ns")
        return _swap_polarization(state, params.amplitude_factor)
    return state.scaled(params.amplitude_factor)


def vpp(state: PulseState, direction: str, params: ElementParams) -> PulseState:
    """
    Vortex phase plate: forward removes charge_step units of OAM, backward adds them.

    With impurity eps a fraction eps of each term's power stays at its input charge.
    The unshifted leak is added coherently, so on superpositions of neighbouring charges
    the operator is only norm-non-increasing for eps = 0.
    """
    if direction not in (FORWARD, BACKWARD):
        raise ValidationError(f"VPP direction must be '{FORWARD}' or '{BACKWARD}'", field='direction')
    step = -params.charge_step if direction == FORWARD else params.charge_step
    factor = params.amplitude_factor
    shifted_factor = factor * math.sqrt(1.0 - params.impurity)
    leak_factor = factor * math.sqrt(params.impurity)

    terms = []
    for label, amp in state.items():
        terms.append((label.with_(l=label.l + step), amp * shifted_factor))
        if leak_factor:
            terms.append((label, amp * leak_factor))
    return PulseState(terms, t0=state.t0)


def mirror(state: PulseState, params: Optional[ElementParams] = None) -> PulseState:
    """Reflection inverts the OAM sign once per pass."""
    passes = params.passes if params is not None else 1
    factor = params.amplitude_factor if params is not None else 1.0
    sign = -1 if passes % 2 else 1
    return state.map_terms(lambda label, amp: (label.with_(l=sign * label.l), amp * factor))


def hwp(state: PulseState, params: Optional[ElementParams] = None) -> PulseState:
    """Half-wave plate at its swap setting."""
    return _swap_polarization(state, params.amplitude_factor if params is not None else 1.0)


def qwp_double_pass(state: PulseState, params: Optional[ElementParams] = None) -> PulseState:
    """Quarter-wave plate crossed twice, which acts as a single H/V swap."""
    return _swap_polarization(state, params.amplitude_factor if params is not None else 1.0)


def slm_fork(state: PulseState, params: ElementParams) -> PulseState:
    """First diffraction order of a fork hologram: l -> l + q."""
    factor = math.sqrt(params.diffraction_efficiency) * params.amplitude_factor
    q = params.pattern_charge
    return state.map_terms(lambda label, amp: (label.with_(l=label.l + q), amp * factor))


def fibre_coupler(state: PulseState, params: Optional[ElementParams] = None) -> PulseState:
    """Single-mode fibre: keep only l = 0, p = 0 and apply the coupling efficiency."""
    factor = params.amplitude_factor if params is not None else 1.0
    coupled = state.filter(lambda label: label.l == 0 and label.p == 0)
    return coupled.scaled(factor)


def four_f(state: PulseState, params: Optional[ElementParams] = None) -> PulseState:
    """Relay imaging; labels are untouched."""
    return state.scaled(params.amplitude_factor if params is not None else 1.0)


# Element registry
_element_registry: Dict[str, Callable] = {}


def register_element(kind: str) -> Callable:
    """
    Decorator to register how a chain element of `kind` acts on a state.

    Usage:
        @register_element('mirror')
        def _apply_mirror(state, params, direction, t_arrival):
            ...
    """

    def decorator(fn: Callable) -> Callable:
        _element_registry[kind] = fn
        return fn

    return decorator


def get_element_kinds() -> List[str]:
    """Get all registered element kinds."""
    return list(_element_registry)


def apply_element(
    state: PulseState,
    params: ElementParams,
    direction: str = FORWARD,
    t_arrival: Optional[float] = None,
) -> PulseState:
    """
    Apply one chain element.

    Args:
        state: Input state
        params: Element parameters
        direction: Propagation direction through the loop
        t_arrival: Arrival time at the element (needed by the EOM)

    Returns:
        Output state
    """
    try:
        handler = _element_registry[params.kind]
    except KeyError:
        raise ValidationError(f"No handler registered for element kind '{params.kind}'", field=params.name)
    return handler(state, params, direction, t_arrival)


def rejected_port(state: PulseState, params: ElementParams) -> PulseState:
    """Component a chain PBS sends out of the loop."""
    transmitted, reflected = pbs(state)
    return reflected if params.port == 'transmit' else transmitted


@register_element('pbs')
def _apply_pbs(state, params, direction, t_arrival):
    transmitted, reflected = pbs(state)
    kept = transmitted if params.port == 'transmit' else reflected
    return kept.scaled(params.amplitude_factor)


@register_element('eom')
def _apply_eom(state, params, direction, t_arrival):
    if t_arrival is None:
        raise ValidationError("EOM needs an arrival time", field=params.name)
    return eom(state, t_arrival, params)


@register_element('vpp')
def _apply_vpp(state, params, direction, t_arrival):
    return vpp(state, direction, params)


@register_element('mirror')
def _apply_mirror(state, params, direction, t_arrival):
    return mirror(state, params)


@register_element('hwp')
def _apply_hwp(state, params, direction, t_arrival):
    return hwp(state, params)


@register_element('qwp')
def _apply_qwp(state, params, direction, t_arrival):
    return qwp_double_pass(state, params)


@register_element('slm')
def _apply_slm(state, params, direction, t_arrival):
    return slm_fork(state, params)


@register_element('coupler')
def _apply_coupler(state, params, direction, t_arrival):
    return fibre_coupler(state, params)


@register_element('four_f')
def _apply_four_f(state, params, direction, t_arrival):
    return four_f(state, params)
