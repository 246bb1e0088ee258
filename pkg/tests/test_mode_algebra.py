"""Tests for `oam_transcoder.mode_algebra`."""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oam_transcoder.exceptions import ValidationError
from oam_transcoder.mode_algebra import (
    ModeLabel,
    Polarization,
    PulseState,
    basis_state,
    marginal,
    normalize_distribution,
    overlap,
    power_in,
    superpose,
    time_reverse,
    total_power,
)

H, V = Polarization.H, Polarization.V

amplitudes = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)
charges = st.integers(min_value=-5, max_value=5)


def test_label_ordering():
    """Labels sort by bin, then charge, radial index and polarization."""
    labels = [ModeLabel(V, 1, 0, 2), ModeLabel(H, 3, 0, 0), ModeLabel(H, 0, 1, 1), ModeLabel(H, 0, 0, 1)]
    assert sorted(labels) == [ModeLabel(H, 3, 0, 0), ModeLabel(H, 0, 0, 1), ModeLabel(H, 0, 1, 1),
                              ModeLabel(V, 1, 0, 2)]


def test_label_validation():
    """Non-integer fields and negative radial indices are rejected."""
    with pytest.raises(ValidationError):
        ModeLabel(H, 1.5)
    with pytest.raises(ValidationError):
        ModeLabel(H, True)
    with pytest.raises(ValidationError):
        ModeLabel(H, 0, p=-1)
    with pytest.raises(ValidationError):
        ModeLabel('D', 0)
    assert ModeLabel('V', 2).pol is V


def test_duplicates_coalesce():
    """Repeated labels add their amplitudes."""
    label = ModeLabel(H, 1)
    state = PulseState([(label, 0.3), (label, 0.4j)])
    assert len(state) == 1
    assert state.amplitude(label) == pytest.approx(0.3 + 0.4j)


def test_cancelling_terms_are_pruned():
    """Amplitudes that cancel exactly leave no entry behind."""
    label = ModeLabel(H, 2)
    state = PulseState([(label, 0.5), (label, -0.5), (ModeLabel(H, 0), 0.1)])
    assert label not in state
    assert state.labels() == [ModeLabel(H, 0)]


def test_pruning_stays_within_tolerance():
    """Tiny entries are dropped only while the discarded power stays below 1e-12."""
    tiny = [(ModeLabel(H, l), 1e-8) for l in range(20)]
    state = PulseState(tiny + [(ModeLabel(H, 100), 0.5)])
    assert state.pruned_power <= 1e-12
    assert ModeLabel(H, 100) in state


def test_non_finite_amplitude_rejected():
    """NaN and infinite amplitudes are errors."""
    with pytest.raises(ValidationError):
        PulseState({ModeLabel(H, 0): float('nan')})
    with pytest.raises(ValidationError):
        PulseState({ModeLabel(H, 0): complex(0, math.inf)})


def test_superpose_power_bound():
    """A superposition may carry at most unit power."""
    with pytest.raises(ValidationError):
        superpose([(ModeLabel(H, 0), 1.0), (ModeLabel(H, 1), 0.1)])
    with pytest.raises(ValidationError):
        superpose([])
    state = superpose([(ModeLabel(H, 0), 1 / math.sqrt(2)), (ModeLabel(H, 1), 1j / math.sqrt(2))])
    assert total_power(state) == pytest.approx(1.0)


def test_marginal_and_normalized_distribution():
    """Marginals sum power per field value; the distribution sums to one."""
    state = PulseState({ModeLabel(H, 0, 0, 0): 0.6, ModeLabel(V, 1, 0, 0): 0.2, ModeLabel(H, 1, 0, 1): 0.4})
    assert marginal(state, 'bin') == pytest.approx({0: 0.40, 1: 0.16})
    assert marginal(state, 'l') == pytest.approx({0: 0.36, 1: 0.20})
    distribution = normalize_distribution(state, 'bin')
    assert sum(distribution.values()) == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        marginal(state, 'pol')
    with pytest.raises(ValidationError):
        normalize_distribution(PulseState())


def test_power_in_predicate():
    """Power is summed over the labels the predicate accepts."""
    state = PulseState({ModeLabel(H, 0, 0, 0): 0.6, ModeLabel(V, 1, 0, 0): 0.2, ModeLabel(H, 1, 0, 1): 0.4})
    assert power_in(state, lambda label: label.pol is H) == pytest.approx(0.52)
    assert power_in(state, lambda label: label.l == 2) == 0.0


def test_time_reverse():
    """Bins are mirrored about t0."""
    state = PulseState({ModeLabel(H, 0, 0, 3): 0.5, ModeLabel(H, 0, 0, 1): 0.5})
    assert sorted(label.bin for label in time_reverse(state)) == [-3, -1]


def test_state_document():
    """A state written to its JSON form reads back with the same amplitudes and t0."""
    state = PulseState({ModeLabel(V, -2, 1, 3): 0.25 - 0.5j}, t0=7e-9)
    document = state.to_dict()
    assert document['t0_ns'] == pytest.approx(7.0)
    restored = PulseState.from_dict(document)
    assert restored.items() == state.items()
    with pytest.raises(ValidationError):
        PulseState.from_dict({'terms': [{'pol': 'H', 'l': 0, 're': 2.0, 'im': 0.0}]})


@settings(deadline=None)
@given(st.lists(st.tuples(charges, amplitudes), min_size=1, max_size=6), amplitudes)
def test_scaling_is_linear(terms, factor):
    """Scaling multiplies every amplitude and the power by |factor|^2."""
    state = PulseState([(ModeLabel(H, l), amp) for l, amp in terms])
    scaled = state.scaled(factor)
    assert total_power(scaled) == pytest.approx(abs(factor) ** 2 * total_power(state), abs=1e-11)


@settings(deadline=None)
@given(st.lists(st.tuples(charges, amplitudes), min_size=1, max_size=6),
       st.lists(st.tuples(charges, amplitudes), min_size=1, max_size=6))
def test_overlap_conjugate_symmetry(terms_a, terms_b):
    """<a|b> is the complex conjugate of <b|a>."""
    a = PulseState([(ModeLabel(H, l), amp) for l, amp in terms_a])
    b = PulseState([(ModeLabel(H, l), amp) for l, amp in terms_b])
    assert cmath.isclose(overlap(a, b), overlap(b, a).conjugate(), abs_tol=1e-12)


def test_basis_state_overlap():
    """Basis states are orthonormal."""
    a, b = basis_state(ModeLabel(H, 0)), basis_state(ModeLabel(H, 1))
    assert overlap(a, a) == 1
    assert overlap(a, b) == 0
