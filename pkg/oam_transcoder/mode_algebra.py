"""Sparse complex-amplitude photonic states over discrete mode labels."""

import cmath
import functools
import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from .constants import DEFAULT_PRUNE_THRESHOLD, NS, POWER_TOLERANCE
from .exceptions import ValidationError

logger = logging.getLogger(__name__)


class Polarization(str, Enum):
    """Linear polarization basis of the loop (PBS transmits H, reflects V)."""

    H = 'H'
    V = 'V'

    def swapped(self) -> 'Polarization':
        return Polarization.V if self is Polarization.H else Polarization.H


@functools.total_ordering
@dataclass(frozen=True)
class ModeLabel:
    """
    Discrete label of one field mode.

    Args:
        pol: Polarization
        l: Topological charge
        p: Radial index (>= 0)
        bin: Time-bin index k, physical time t0 + k*T
    """

    pol: Polarization
    l: int
    p: int = 0
    bin: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, 'pol', Polarization(self.pol))
        except ValueError:
            raise ValidationError(f"Unknown polarization {self.pol!r}", field='pol')
        for name in ('l', 'p', 'bin'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValidationError(f"Mode label field '{name}' must be an integer, got {value!r}", field=name)
        if self.p < 0:
            raise ValidationError(f"Radial index must be non-negative, got p={self.p}", field='p')

    @property
    def sort_key(self) -> Tuple[int, int, int, str]:
        return (self.bin, self.l, self.p, self.pol.value)

    def __lt__(self, other):
        if not isinstance(other, ModeLabel):
            return NotImplemented
        return self.sort_key < other.sort_key

    def with_(self, **changes) -> 'ModeLabel':
        return replace(self, **changes)

    def __str__(self):
        return f"|{self.pol.value}, l={self.l}, p={self.p}, bin={self.bin}>"


def _check_amplitude(amp, label: Optional[ModeLabel] = None) -> complex:
    try:
        value = complex(amp)
    except (TypeError, ValueError):
        raise ValidationError(f"Amplitude {amp!r} is not a number", field='amplitude')
    if not cmath.isfinite(value):
        where = f" for {label}" if label is not None else ""
        raise ValidationError(f"Non-finite amplitude {value!r}{where}", field='amplitude')
    return value


class PulseState:
    """
    Immutable sparse superposition over ModeLabel with a reference time t0 (seconds).

    Duplicate labels are coalesced. Entries whose intensity falls below the prune
    threshold are dropped, smallest first, as long as the dropped power stays within
    POWER_TOLERANCE.
    """

    __slots__ = ('_amplitudes', '_t0', '_pruned_power')

    def __init__(
        self,
        amplitudes: Optional[Iterable] = None,
        t0: float = 0.0,
        prune_threshold: float = DEFAULT_PRUNE_THRESHOLD,
    ):
        if amplitudes is None:
            amplitudes = ()
        if isinstance(amplitudes, Mapping):
            amplitudes = amplitudes.items()

        coalesced: Dict[ModeLabel, complex] = {}
        for label, amp in amplitudes:
            if not isinstance(label, ModeLabel):
                raise ValidationError(f"Expected ModeLabel, got {type(label).__name__}", field='label')
            coalesced[label] = coalesced.get(label, 0j) + _check_amplitude(amp, label)

        pruned = 0.0
        drop = set()
        for label in sorted(coalesced, key=lambda lab: (abs(coalesced[lab]) ** 2, lab.sort_key)):
            power = abs(coalesced[label]) ** 2
            if power >= prune_threshold or pruned + power > POWER_TOLERANCE:
                break
            pruned += power
            drop.add(label)

        self._amplitudes = {label: coalesced[label] for label in sorted(coalesced) if label not in drop}
        self._t0 = float(t0)
        self._pruned_power = pruned

    @property
    def t0(self) -> float:
        return self._t0

    @property
    def pruned_power(self) -> float:
        """Power discarded by pruning when this state was built."""
        return self._pruned_power

    def __len__(self) -> int:
        return len(self._amplitudes)

    def __iter__(self) -> Iterator[ModeLabel]:
        return iter(self._amplitudes)

    def __contains__(self, label) -> bool:
        return label in self._amplitudes

    def __bool__(self) -> bool:
        return bool(self._amplitudes)

    def items(self) -> List[Tuple[ModeLabel, complex]]:
        return list(self._amplitudes.items())

    def labels(self) -> List[ModeLabel]:
        return list(self._amplitudes)

    def amplitude(self, label: ModeLabel) -> complex:
        return self._amplitudes.get(label, 0j)

    def __repr__(self):
        terms = ", ".join(f"{label}: {amp:.6g}" for label, amp in self._amplitudes.items())
        return f"PulseState(t0={self._t0!r}, {{{terms}}})"

    def map_labels(self, fn: Callable[[ModeLabel], ModeLabel]) -> 'PulseState':
        return PulseState(((fn(label), amp) for label, amp in self._amplitudes.items()), t0=self._t0)

    def map_terms(self, fn: Callable[[ModeLabel, complex], Tuple[ModeLabel, complex]]) -> 'PulseState':
        return PulseState((fn(label, amp) for label, amp in self._amplitudes.items()), t0=self._t0)

    def scaled(self, factor) -> 'PulseState':
        factor = _check_amplitude(factor)
        return PulseState(((label, amp * factor) for label, amp in self._amplitudes.items()), t0=self._t0)

    def filter(self, predicate: Callable[[ModeLabel], bool]) -> 'PulseState':
        return PulseState(((label, amp) for label, amp in self._amplitudes.items() if predicate(label)), t0=self._t0)

    def add(self, other: 'PulseState') -> 'PulseState':
        return PulseState(list(self._amplitudes.items()) + list(other._amplitudes.items()), t0=self._t0)

    __add__ = add

    def with_t0(self, t0: float) -> 'PulseState':
        return PulseState(self._amplitudes, t0=t0)

    def to_dict(self) -> Dict:
        """Serialize to the state JSON schema."""
        return {
            't0_ns': self._t0 / NS,
            'terms': [
                {
                    'pol': label.pol.value,
                    'l': label.l,
                    'p': label.p,
                    'bin': label.bin,
                    're': amp.real,
                    'im': amp.imag,
                }
                for label, amp in self._amplitudes.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> 'PulseState':
        """
        Build a state from the JSON schema, checking the power bound.

        Args:
            data: {"t0_ns": number, "terms": [{"pol", "l", "p", "bin", "re", "im"}]}

        Returns:
            PulseState
        """
        if not isinstance(data, Mapping) or 'terms' not in data:
            raise ValidationError("State document must be an object with a 'terms' list", field='terms')
        terms = []
        for index, term in enumerate(data['terms']):
            try:
                label = ModeLabel(term['pol'], term['l'], term.get('p', 0), term.get('bin', 0))
                amp = complex(term.get('re', 0.0), term.get('im', 0.0))
            except (KeyError, TypeError) as e:
                raise ValidationError(f"Malformed term {index}: {e}", field=f'terms[{index}]')
            terms.append((label, amp))
        state = cls(terms, t0=float(data.get('t0_ns', 0.0)) * NS)
        check_power(state)
        return state


def check_power(state: PulseState) -> PulseState:
    """Raise if the state carries more than unit power."""
    power = total_power(state)
    if power > 1.0 + POWER_TOLERANCE:
        raise ValidationError(f"State power {power:.15g} exceeds 1", field='amplitudes')
    return state


def basis_state(label: ModeLabel, t0: float = 0.0) -> PulseState:
    """Unit-amplitude state in a single mode."""
    return PulseState({label: 1 + 0j}, t0=t0)


def superpose(terms: Iterable[Tuple[ModeLabel, complex]], t0: float = 0.0) -> PulseState:
    """
    Sum amplitudes per label into a state.

    Args:
        terms: (ModeLabel, amplitude) pairs; duplicates are coalesced
        t0: Reference time in seconds

    Returns:
        PulseState with total power at most 1
    """
    terms = list(terms)
    if not terms:
        raise ValidationError("superpose needs at least one term", field='terms')
    return check_power(PulseState(terms, t0=t0))


def total_power(state: PulseState) -> float:
    return sum(abs(amp) ** 2 for _, amp in state.items())


def power_in(state: PulseState, predicate: Callable[[ModeLabel], bool]) -> float:
    """Power carried by the labels matching `predicate`."""
    return sum(abs(amp) ** 2 for label, amp in state.items() if predicate(label))


def overlap(a: PulseState, b: PulseState) -> complex:
    """Inner product <a|b> over shared labels."""
    total = 0j
    for label, amp in a.items():
        if label in b:
            total += amp.conjugate() * b.amplitude(label)
    return total


def marginal(state: PulseState, by: str = 'bin') -> Dict[int, float]:
    """
    Power per value of one label field.

    Args:
        state: Input state
        by: 'bin', 'l' or 'p'

    Returns:
        Ordered mapping of field value to power
    """
    if by not in ('bin', 'l', 'p'):
        raise ValidationError(f"Cannot marginalize over '{by}'", field='by')
    powers: Dict[int, float] = {}
    for label, amp in state.items():
        key = getattr(label, by)
        powers[key] = powers.get(key, 0.0) + abs(amp) ** 2
    return dict(sorted(powers.items()))


def normalize_distribution(state: PulseState, by: str = 'bin') -> Dict[int, float]:
    """Marginal power distribution rescaled to unit sum."""
    powers = marginal(state, by)
    total = sum(powers.values())
    if total <= 0:
        raise ValidationError("Cannot normalize an empty state", field='amplitudes')
    return {key: value / total for key, value in powers.items()}


def time_reverse(state: PulseState) -> PulseState:
    """Mirror the pulse train about t0 (bin k -> bin -k)."""
    return state.map_labels(lambda label: label.with_(bin=-label.bin))
