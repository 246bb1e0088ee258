"""Tests for `oam_transcoder.cavity`."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oam_transcoder.cavity import (
    CavityParams,
    LockState,
    airy_transmission,
    eigenfrequency,
    finesse,
    fsr,
    fwhm,
    fwhm_length,
    gouy_factor,
    lock_step,
    max_clean_oam,
    mode_response,
    mode_transmission,
    mode_waist,
    pulse_fits_cavity,
    pulse_linewidth,
    simulate_lock,
    spectrum,
    transmission_spectrum,
    transverse_offset,
)
from oam_transcoder.constants import C_ROUNDED
from oam_transcoder.exceptions import CavityError, ValidationError
from oam_transcoder.mode_algebra import ModeLabel, Polarization


@pytest.fixture
def lab_cavity():
    return CavityParams(c=C_ROUNDED)


def test_closed_form_numbers(lab_cavity):
    """Finesse, FSR, FWHM and Gouy factor of the 10 mm, R = 0.95 cavity."""
    assert finesse(lab_cavity) == pytest.approx(61.24, abs=0.01)
    assert fsr(lab_cavity) == pytest.approx(15e9, rel=1e-12)
    assert fwhm(lab_cavity) == pytest.approx(245e6, abs=1e6)
    assert gouy_factor(lab_cavity) == pytest.approx(math.acos(0.8) / math.pi, rel=1e-12)
    assert gouy_factor(lab_cavity) == pytest.approx(0.2048, abs=1e-4)


def test_spectrum_summary(lab_cavity):
    """The spectrum bundle carries all four figures."""
    summary = spectrum(lab_cavity).to_dict()
    assert set(summary) == {'finesse', 'fsr_hz', 'fwhm_hz', 'gouy_factor'}
    assert summary['fsr_hz'] == pytest.approx(15e9)


def test_airy_transmission(lab_cavity):
    """Unity on resonance, 1/(1 + F) halfway between resonances."""
    assert airy_transmission(lab_cavity, 0.0) == pytest.approx(1.0)
    assert airy_transmission(lab_cavity, fsr(lab_cavity)) == pytest.approx(1.0)
    assert airy_transmission(lab_cavity, fsr(lab_cavity) / 2) == pytest.approx(1 / 1521)
    assert airy_transmission(lab_cavity, fwhm(lab_cavity) / 2) == pytest.approx(0.5, abs=2e-3)
    values = airy_transmission(lab_cavity, np.array([0.0, 1e9]))
    assert values.shape == (2,)
    with pytest.raises(ValidationError):
        airy_transmission(lab_cavity, -1.0)


def test_invalid_cavities():
    """R = 1, zero spacing and unstable mirrors are rejected."""
    with pytest.raises(CavityError):
        CavityParams(R=1.0)
    with pytest.raises(CavityError) as excinfo:
        CavityParams(d=0.0)
    assert excinfo.value.field == 'cavity.d_mm'
    with pytest.raises(CavityError):
        gouy_factor(CavityParams(Rc1=4e-3, Rc2=4e-3))


def test_planar_cavity_has_no_waist():
    """Flat mirrors give g1 g2 = 1 and no finite eigenmode."""
    planar = CavityParams(Rc1=math.inf, Rc2=math.inf)
    assert gouy_factor(planar) == pytest.approx(0.0)
    with pytest.raises(CavityError):
        mode_waist(planar)


def test_mode_waist(lab_cavity):
    """Eigenmode waist of the symmetric 50 mm cavity at 795 nm."""
    assert mode_waist(lab_cavity) == pytest.approx(61.6e-6, rel=1e-3)


def test_eigenfrequency_comb(lab_cavity):
    """Adjacent transverse orders are spaced by gouy * FSR."""
    spacing = eigenfrequency(lab_cavity, 1, 0, 0) - eigenfrequency(lab_cavity, 0, 0, 0)
    assert spacing == pytest.approx(gouy_factor(lab_cavity) * fsr(lab_cavity))
    assert eigenfrequency(lab_cavity, -2, 0, 0) == eigenfrequency(lab_cavity, 2, 0, 0)
    assert eigenfrequency(lab_cavity, 0, 1, 0) == eigenfrequency(lab_cavity, 2, 0, 0)


def test_transverse_offset_of_l5(lab_cavity):
    """LG(0,5) sits 2.4% of an FSR from an LG00 resonance and leaks about 10%."""
    offset = transverse_offset(lab_cavity, 5)
    assert offset / fsr(lab_cavity) == pytest.approx(5 * gouy_factor(lab_cavity) - 1)
    lossless = lab_cavity.with_(peak_transmission=1.0)
    assert mode_transmission(lossless, ModeLabel(Polarization.H, 5)) == pytest.approx(0.1026, abs=1e-3)


def test_mode_response_conserves_power(lab_cavity):
    """|t|^2 + |r|^2 = 1 for a lossless filter."""
    lossless = lab_cavity.with_(peak_transmission=1.0)
    for l in range(6):
        t_amp, r_amp = mode_response(lossless, ModeLabel(Polarization.H, l))
        assert abs(t_amp) ** 2 + abs(r_amp) ** 2 == pytest.approx(1.0)
    t_amp, _ = mode_response(lab_cavity, ModeLabel(Polarization.H, 0))
    assert abs(t_amp) ** 2 == pytest.approx(0.9)


def test_clean_oam_range(lab_cavity):
    """Brute-force scan of the first mode within a linewidth of an LG00 resonance."""
    assert max_clean_oam(lab_cavity, 1.0) == 38
    assert max_clean_oam(lab_cavity, 0.5) == 82
    assert max_clean_oam(lab_cavity, 1.0, gouy=0.2047) == 43
    with pytest.raises(ValidationError):
        max_clean_oam(lab_cavity, 0.0)


def test_clean_oam_range_shrinks_with_criterion(lab_cavity):
    """A stricter separation never admits more charges."""
    ranges = [max_clean_oam(lab_cavity, criterion) for criterion in (0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0)]
    assert all(wider >= narrower for wider, narrower in zip(ranges, ranges[1:]))


def test_transmission_spectrum(lab_cavity):
    """Each mode peaks at its transverse offset."""
    result = transmission_spectrum(lab_cavity, [0, 1], points=4001)
    detuning = result['detuning_hz']
    assert detuning[np.argmax(result['modes'][0])] == pytest.approx(0.0, abs=fsr(lab_cavity) / 4000)
    peak = detuning[np.argmax(result['modes'][1])]
    assert peak == pytest.approx(transverse_offset(lab_cavity, 1), abs=fsr(lab_cavity) / 4000)


def test_pulse_linewidth(lab_cavity):
    """A 5 ns pulse is about 16 MHz wide and fits inside the cavity linewidth."""
    assert pulse_linewidth(5e-9) == pytest.approx(1 / (4 * math.pi * 5e-9))
    assert pulse_linewidth(5e-9, 'gaussian-tbp') == pytest.approx(88.2e6)
    assert pulse_fits_cavity(lab_cavity, 5e-9)
    assert not pulse_fits_cavity(lab_cavity, 0.1e-9, 'gaussian-tbp')
    with pytest.raises(ValidationError):
        pulse_linewidth(5e-9, 'boxcar')


def test_lock_holds_resonance(lab_cavity):
    """Residual length error stays below a twentieth of the resonance width."""
    noise = 0.005 * fwhm_length(lab_cavity)
    trace = simulate_lock(lab_cavity, LockState(noise_rms=noise), steps=4000, dt=10e-6, seed=7,
                          step=0.1 * fwhm_length(lab_cavity), settle_steps=500)
    assert trace.locked
    assert trace.summary()['locked'] is True


def test_lock_off_tracks_disturbance(lab_cavity):
    """With zero gains the length error is the accumulated disturbance."""
    noise = 0.01 * fwhm_length(lab_cavity)
    trace = simulate_lock(lab_cavity, LockState(noise_rms=noise, gain_p=0.0, gain_i=0.0), steps=200,
                          dt=10e-6, seed=3)
    expected = np.cumsum(np.random.default_rng(3).normal(0.0, noise, 200))
    np.testing.assert_allclose(trace.length_errors, expected, rtol=0, atol=1e-18)


@settings(deadline=None)
@given(st.floats(-1e-12, 1e-12))
def test_lock_step_without_gain_is_identity(disturbance):
    """An open loop adds the disturbance to the length error."""
    lock = LockState(length_error=2e-12, drift=2e-12, gain_p=0.0, gain_i=0.0)
    after = lock_step(lock, 1e-5, disturbance)
    assert after.length_error == pytest.approx(2e-12 + disturbance, abs=1e-24)
    assert after.time == pytest.approx(1e-5)


def test_lock_step_rejects_bad_period():
    """dt must be positive."""
    with pytest.raises(ValidationError):
        lock_step(LockState(), 0.0, 0.0)
