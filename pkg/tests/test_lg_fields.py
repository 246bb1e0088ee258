"""Tests for `oam_transcoder.lg_fields`."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oam_transcoder.cavity import CavityParams
from oam_transcoder.exceptions import GridError, ValidationError
from oam_transcoder.lg_fields import (
    IntensityGrid,
    LGParams,
    count_fringes,
    lg_field,
    mirror_interference_pattern,
    mode_overlap,
)

W0 = 61.6e-6
BEAM = LGParams(w0=W0)


@pytest.mark.parametrize("p,l", list(itertools.product(range(3), range(-5, 6))))
def test_modes_are_normalized(p, l):
    """Every LG(p, l) with p <= 2 and |l| <= 5 carries unit power."""
    assert abs(mode_overlap(BEAM, (p, l), BEAM, (p, l))) == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("mode_a,mode_b", [
    ((0, 0), (1, 0)),
    ((0, 0), (2, 0)),
    ((1, 3), (2, 3)),
    ((0, 1), (0, -1)),
    ((0, 2), (0, 3)),
    ((2, -5), (1, 5)),
    ((0, 5), (2, 4)),
])
def test_modes_are_orthogonal(mode_a, mode_b):
    """Distinct (p, l) modes do not overlap."""
    assert abs(mode_overlap(BEAM, mode_a, BEAM, mode_b)) < 1e-3


def test_waist_mismatch_overlap():
    """Two Gaussians of different waists overlap by 2 w_a w_b / (w_a^2 + w_b^2)."""
    wider = LGParams(w0=1.2 * W0)
    expected = 2 * W0 * 1.2 * W0 / (W0 ** 2 + (1.2 * W0) ** 2)
    assert abs(mode_overlap(BEAM, (0, 0), wider, (0, 0))) == pytest.approx(expected, abs=1e-4)
    assert expected == pytest.approx(0.983607, abs=1e-6)


def test_field_normalization_away_from_waist():
    """Propagation keeps the mode normalized."""
    z = 0.5 * BEAM.z_r
    assert abs(mode_overlap(BEAM, (1, 2), BEAM, (1, 2), z=z)) == pytest.approx(1.0, abs=1e-4)


def test_field_on_axis():
    """Only l = 0 modes have intensity on the axis."""
    assert abs(lg_field(BEAM, 0, 0, 0.0, 0.0, 0.0)) ** 2 == pytest.approx(2 / (math.pi * W0 ** 2))
    assert lg_field(BEAM, 0, 3, 0.0, 0.0, 0.0) == 0


def test_field_rejects_bad_arguments():
    """Negative radial index or radius is an error."""
    with pytest.raises(ValidationError):
        lg_field(BEAM, -1, 0, 0.0, 1e-6, 0.0)
    with pytest.raises(ValidationError):
        lg_field(BEAM, 0, 0, 0.0, -1e-6, 0.0)
    with pytest.raises(ValidationError):
        LGParams(w0=0.0)


def test_beam_matches_cavity_eigenmode():
    """The default beam is the eigenmode of the 50 mm cavity."""
    assert LGParams.from_cavity(CavityParams()).w0 == pytest.approx(W0, rel=1e-3)


def test_under_resolved_grid_is_rejected():
    """Too small an extent or too few angular samples raise GridError."""
    with pytest.raises(GridError):
        mode_overlap(BEAM, (0, 0), BEAM, (0, 0), extent=2 * W0)
    with pytest.raises(GridError):
        mode_overlap(BEAM, (0, 5), BEAM, (0, -5), n_alpha=16)


@pytest.mark.parametrize("l", range(6))
def test_mirror_image_shows_two_l_fringes(l):
    """A beam interfered with its mirror image shows 2l fringes."""
    assert count_fringes(mirror_interference_pattern(BEAM, l)) == 2 * l


@settings(deadline=None, max_examples=20)
@given(st.integers(1, 5), st.floats(0.0, 2 * math.pi))
def test_fringe_count_is_rotation_invariant(l, rotation):
    """Turning the pattern does not change the count."""
    pattern = mirror_interference_pattern(BEAM, l, n_r=64, n_alpha=128, rotation=rotation)
    assert count_fringes(pattern) == 2 * l


def test_intensity_grid_helpers():
    """Rows enumerate every sample and the grayscale image spans [0, 255]."""
    pattern = mirror_interference_pattern(BEAM, 2, n_r=8, n_alpha=16)
    assert len(pattern.rows()) == 8 * 16
    image = pattern.grayscale()
    assert image.max() == 255 and image.min() >= 0
    with pytest.raises(GridError):
        IntensityGrid(r=np.zeros(2), alpha=np.zeros(3), values=np.zeros((2, 3)), extent=1.0)
    with pytest.raises(GridError):
        count_fringes(IntensityGrid(r=np.zeros(2), alpha=np.zeros(4), values=np.zeros((2, 4)), extent=1.0))
