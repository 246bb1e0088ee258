"""Tests for `oam_transcoder.config`."""

import math

import pytest

from oam_transcoder import TranscoderConfig
from oam_transcoder.config import get_profile, load_config, merge_settings, set_setting
from oam_transcoder.constants import C_ROUNDED, NS
from oam_transcoder.exceptions import ConfigError


def _write(tmp_path, text, name='run.yaml'):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return path


def test_default_profile(run_config):
    """The built-in profile reproduces the 10 mm cavity and 11 ns loop."""
    assert run_config.profile == TranscoderConfig.default_profile
    assert run_config.seed == 2016
    assert run_config.cavity.c == C_ROUNDED
    assert run_config.cavity.d == pytest.approx(10e-3)
    assert run_config.loop.T == pytest.approx(11 * NS)
    assert run_config.loop.components['vpp'].impurity == pytest.approx(0.02)
    assert run_config.mz.delay_bins(run_config.loop.T) == 1
    assert run_config.inputs.l_values == (0, 1, 2, 3)
    assert len(run_config.sweep.values()) == 11


def test_empty_file_gives_defaults(tmp_path, run_config):
    """An empty run file changes nothing."""
    config = load_config(_write(tmp_path, ''))
    assert config.settings == run_config.settings
    assert config.loop == run_config.loop


def test_run_file_overrides(tmp_path):
    """Nested keys override the profile, including single components."""
    config = load_config(_write(tmp_path, 'seed: 5\ncavity:\n  R: 0.9\nloop:\n  components:\n    vpp:\n'
                                          '      transmission: 0.8\n'))
    assert config.seed == 5
    assert config.cavity.R == pytest.approx(0.9)
    assert config.loop.components['vpp'].transmission == pytest.approx(0.8)
    assert config.loop.components['vpp'].kind == 'vpp'


def test_planar_mirrors_from_null():
    """A null radius of curvature is a flat mirror."""
    config = load_config(overrides={'cavity': {'Rc1_mm': None, 'Rc2_mm': None}, 'lg': {'w0_um': 100.0}})
    assert math.isinf(config.cavity.Rc1)


@pytest.mark.parametrize("overrides,field", [
    ({'cavity': {'d_mm': 0.0}}, 'cavity.d_mm'),
    ({'loop': {'gate_window_ns': 12.0}}, 'loop.gate_window_ns'),
    ({'seed': 'abc'}, 'seed'),
    ({'scenario': 'teleport'}, 'scenario'),
    ({'lg': {'n_alpha': 511}}, 'lg.n_alpha'),
    ({'sweep': {'points': 0}}, 'sweep.points'),
    ({'inputs': {'l_values': [0, 13]}}, 'inputs.l_values'),
    ({'speed_of_light': 'warp'}, 'speed_of_light'),
])
def test_invalid_values_name_the_field(overrides, field):
    """Schema violations raise ConfigError carrying the dotted key."""
    with pytest.raises(ConfigError) as excinfo:
        load_config(overrides=overrides)
    assert excinfo.value.field == field


def test_unknown_keys_are_rejected(tmp_path):
    """Typos are reported with their full path instead of being ignored."""
    with pytest.raises(ConfigError) as excinfo:
        load_config(_write(tmp_path, 'cavity:\n  finese: 60\n'))
    assert excinfo.value.field == 'cavity.finese'
    with pytest.raises(ConfigError) as excinfo:
        load_config(overrides={'loop': {'components': {'vpp': {'colour': 'red'}}}})
    assert excinfo.value.field == 'loop.components.vpp.colour'


def test_sections_must_be_mappings():
    """A scalar where a section belongs is an error."""
    with pytest.raises(ConfigError) as excinfo:
        merge_settings(get_profile('lab-2016'), {'cavity': 3})
    assert excinfo.value.field == 'cavity'


def test_set_setting():
    """Dotted keys replace a single value and leave the base untouched."""
    base = get_profile('lab-2016')
    changed = set_setting(base, 'loop.reentry_coupling', 0.5)
    assert changed['loop']['reentry_coupling'] == 0.5
    assert base['loop']['reentry_coupling'] == pytest.approx(0.8053)
    with pytest.raises(ConfigError):
        set_setting(base, 'loop.reentry', 0.5)


@pytest.mark.parametrize("text", [
    'cavity: [unclosed\n',
    '- just\n- a\n- list\n',
])
def test_unreadable_run_files(tmp_path, text):
    """Broken YAML and non-mapping roots are config errors."""
    with pytest.raises(ConfigError) as excinfo:
        load_config(_write(tmp_path, text))
    assert excinfo.value.field == 'config'


def test_missing_file(tmp_path):
    """A run file that does not exist is a config error."""
    with pytest.raises(ConfigError):
        load_config(tmp_path / 'absent.yaml')


def test_profile_alias():
    """'paper-2016' selects the same parameter set as 'lab-2016'."""
    assert get_profile('paper-2016') == get_profile('lab-2016')
    assert load_config(profile='paper-2016').loop == load_config().loop


def test_unknown_profile():
    """Only built-in profiles can be selected."""
    with pytest.raises(ConfigError) as excinfo:
        load_config(profile='lab-2017')
    assert excinfo.value.field == 'profile'
