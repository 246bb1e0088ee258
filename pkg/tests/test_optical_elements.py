"""Tests for `oam_transcoder.optical_elements`."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oam_transcoder.exceptions import ValidationError
from oam_transcoder.mode_algebra import ModeLabel, Polarization, PulseState, total_power
from oam_transcoder.optical_elements import (
    BACKWARD,
    FORWARD,
    ElementParams,
    apply_element,
    eom,
    fibre_coupler,
    get_element_kinds,
    hwp,
    mirror,
    pbs,
    qwp_double_pass,
    rejected_port,
    slm_fork,
    vpp,
)

H, V = Polarization.H, Polarization.V

amplitudes = st.complex_numbers(max_magnitude=0.4, allow_nan=False, allow_infinity=False)
terms = st.lists(st.tuples(st.sampled_from([H, V]), st.integers(-4, 4), amplitudes), min_size=1, max_size=5)


def _state(items):
    return PulseState([(ModeLabel(pol, l), amp) for pol, l, amp in items])


def test_every_kind_has_a_handler():
    """All element kinds are registered."""
    assert set(get_element_kinds()) == {'pbs', 'eom', 'vpp', 'mirror', 'hwp', 'qwp', 'slm', 'coupler', 'four_f'}


def test_element_params_validation():
    """Out-of-range parameters name the offending field."""
    with pytest.raises(ValidationError) as excinfo:
        ElementParams(kind='vpp', name='vpp', transmission=1.2)
    assert excinfo.value.field == 'vpp.transmission'
    with pytest.raises(ValidationError):
        ElementParams(kind='laser')
    with pytest.raises(ValidationError):
        ElementParams(kind='vpp', charge_step=2)
    with pytest.raises(ValidationError):
        ElementParams(kind='eom', gate_windows=((0.0, 2e-9), (1e-9, 3e-9)))


def test_loss_accumulates_over_passes():
    """Element loss is the single-pass transmission to the power of the pass count."""
    params = ElementParams(kind='mirror', transmission=0.99, passes=6)
    assert params.loss == pytest.approx(0.99 ** 6)


def test_element_from_dict():
    """Run-file mappings convert gate windows from nanoseconds."""
    params = ElementParams.from_dict('eom', {'kind': 'eom', 'transmission': 0.9, 'passes': 2,
                                             'gate_windows_ns': [[7.0, 15.0]]})
    assert params.name == 'eom'
    assert len(params.gate_windows) == 1
    assert params.gate_windows[0] == pytest.approx((7e-9, 15e-9))


def test_pbs_splits_polarizations():
    """H is transmitted, V reflected."""
    state = PulseState({ModeLabel(H, 1): 0.6, ModeLabel(V, 2): 0.8})
    transmitted, reflected = pbs(state)
    assert transmitted.labels() == [ModeLabel(H, 1)]
    assert reflected.labels() == [ModeLabel(V, 2)]
    params = ElementParams(kind='pbs', port='reflect')
    assert rejected_port(state, params).labels() == [ModeLabel(H, 1)]


def test_eom_gating():
    """The EOM swaps polarization only inside its gate windows."""
    params = ElementParams(kind='eom', gate_windows=((7e-9, 15e-9),))
    state = PulseState({ModeLabel(H, 1): 1.0})
    assert eom(state, 11e-9, params).labels() == [ModeLabel(V, 1)]
    assert eom(state, 22e-9, params).labels() == [ModeLabel(H, 1)]
    with pytest.raises(ValidationError):
        eom(state, math.nan, params)
    with pytest.raises(ValidationError):
        apply_element(state, params)


def test_vpp_direction():
    """Forward removes one unit of charge, backward adds one."""
    params = ElementParams(kind='vpp')
    state = PulseState({ModeLabel(H, 3): 1.0})
    assert vpp(state, FORWARD, params).labels() == [ModeLabel(H, 2)]
    assert vpp(state, BACKWARD, params).labels() == [ModeLabel(H, 4)]
    with pytest.raises(ValidationError):
        vpp(state, 'sideways', params)


def test_vpp_impurity_leak():
    """An impure plate leaves a fraction of the power at the input charge."""
    params = ElementParams(kind='vpp', impurity=0.005)
    output = vpp(PulseState({ModeLabel(H, 2): 1.0}), FORWARD, params)
    assert abs(output.amplitude(ModeLabel(H, 1))) ** 2 == pytest.approx(0.995)
    assert abs(output.amplitude(ModeLabel(H, 2))) ** 2 == pytest.approx(0.005)


def test_mirror_parity():
    """One reflection inverts the charge; an even number restores it."""
    state = PulseState({ModeLabel(H, 2): 1.0})
    assert mirror(state).labels() == [ModeLabel(H, -2)]
    assert mirror(state, ElementParams(kind='mirror', passes=6)).labels() == [ModeLabel(H, 2)]


def test_wave_plates_swap():
    """The half-wave plate and the double-passed quarter-wave plate swap H and V."""
    state = PulseState({ModeLabel(H, 0): 1.0})
    assert hwp(state).labels() == [ModeLabel(V, 0)]
    assert qwp_double_pass(hwp(state)).labels() == [ModeLabel(H, 0)]


def test_slm_and_coupler_flatten_one_charge():
    """A fork pattern of charge -l followed by the fibre keeps only the flattened mode."""
    state = PulseState({ModeLabel(H, 2): 0.6, ModeLabel(H, 3): 0.8})
    diffracted = slm_fork(state, ElementParams(kind='slm', pattern_charge=-2, diffraction_efficiency=0.5))
    coupled = fibre_coupler(diffracted)
    assert coupled.labels() == [ModeLabel(H, 0)]
    assert total_power(coupled) == pytest.approx(0.36 * 0.5)


@settings(deadline=None)
@given(terms, st.sampled_from(['pbs', 'mirror', 'hwp', 'qwp', 'four_f', 'slm', 'coupler', 'vpp']),
       st.floats(0.0, 1.0), st.sampled_from([FORWARD, BACKWARD]))
def test_elements_never_add_power(items, kind, transmission, direction):
    """Every pure element is norm-non-increasing."""
    state = _state(items)
    params = ElementParams(kind=kind, transmission=transmission)
    output = apply_element(state, params, direction)
    assert total_power(output) <= total_power(state) * transmission + 1e-12


@settings(deadline=None)
@given(terms, terms, st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
       st.sampled_from(['mirror', 'hwp', 'vpp', 'slm', 'coupler']))
def test_elements_are_linear(items_a, items_b, factor, kind):
    """E(a + c b) = E(a) + c E(b)."""
    a, b = _state(items_a), _state(items_b)
    params = ElementParams(kind=kind, transmission=0.9, pattern_charge=1)
    left = apply_element(a + b.scaled(factor), params)
    right = apply_element(a, params) + apply_element(b, params).scaled(factor)
    for label in set(left.labels()) | set(right.labels()):
        assert abs(left.amplitude(label) - right.amplitude(label)) < 1e-6
