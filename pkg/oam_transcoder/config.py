"""Run configuration: built-in profiles, YAML run files and validation."""

import copy
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from . import TranscoderConfig
from .cavity import CavityParams, LockState, gouy_factor, mode_waist
from .constants import MM, NM, NS, UM, speed_of_light
from .exceptions import ConfigError, TranscoderError
from .lg_fields import LGParams
from .optical_elements import ElementParams
from .transcoder import LoopParams, MzParams

logger = logging.getLogger(__name__)

SCENARIOS = ('forward', 'reverse', 'cavity-spectrum', 'fringe-pattern', 'crosstalk', 'visibility', 'sweep')

PROFILES: Dict[str, Dict] = {
    'lab-2016': TranscoderConfig.default_settings,
    # Alias kept for run scripts written against the published parameter set
    'paper-2016': TranscoderConfig.default_settings,
}

# Mappings whose keys are user-defined names rather than schema keys
_OPEN_SECTIONS = {'loop.components'}
_ELEMENT_KEYS = {'kind', 'transmission', 'passes', 'gate_windows_ns', 'charge_step', 'pattern_charge',
                 'diffraction_efficiency', 'fast_axis_rad', 'impurity', 'port'}


@dataclass(frozen=True)
class LockSettings:
    gain_p: float
    gain_i: float
    noise_rms: float
    step: float
    dt: float
    steps: int
    settle_steps: int

    def initial_state(self) -> LockState:
        return LockState(noise_rms=self.noise_rms, gain_p=self.gain_p, gain_i=self.gain_i)


@dataclass(frozen=True)
class GridSettings:
    n_r: int
    n_alpha: int
    extent_w: float
    l_values: Tuple[int, ...]


@dataclass(frozen=True)
class AnalysisSettings:
    pulse_fwhm: float
    pulse_shape: str
    bandwidth: Optional[float]
    sample_period: float
    floor_db: float
    sweep_points: int
    jitter_rms: float
    repetition_hz: float
    slm_frame_hz: float
    detection_threshold_db: float


@dataclass(frozen=True)
class InputSettings:
    l_values: Tuple[int, ...]
    state_file: Optional[Path]


@dataclass(frozen=True)
class SweepSettings:
    parameter: str
    start: float
    stop: float
    points: int

    def values(self):
        if self.points == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.points - 1)
        return [self.start + index * step for index in range(self.points)]


@dataclass(frozen=True)
class RunConfig:
    """Fully validated run configuration."""

    scenario: str
    seed: int
    output_dir: Path
    speed_of_light: str
    cavity: CavityParams
    lock: LockSettings
    loop: LoopParams
    mz: MzParams
    lg: LGParams
    grid: GridSettings
    analysis: AnalysisSettings
    inputs: InputSettings
    sweep: SweepSettings
    settings: Mapping[str, Any]
    profile: str = 'lab-2016'

    def with_(self, **changes) -> 'RunConfig':
        return replace(self, **changes)


def get_profile(name: str) -> Dict:
    """Deep copy of a built-in profile's settings."""
    try:
        return copy.deepcopy(PROFILES[name])
    except KeyError:
        raise ConfigError(f"Unknown profile '{name}', expected one of {sorted(PROFILES)}", field='profile')


def merge_settings(base: Mapping, overrides: Mapping, path: str = '') -> Dict:
    """
    Overlay `overrides` on `base`, rejecting keys the schema does not know.

    Args:
        base: Profile settings
        overrides: User settings
        path: Dotted prefix used in error messages

    Returns:
        New merged settings dict
    """
    merged = copy.deepcopy(dict(base))
    for key, value in overrides.items():
        dotted = f"{path}.{key}" if path else str(key)
        if path in _OPEN_SECTIONS:
            if not isinstance(value, Mapping):
                raise ConfigError(f"Component '{key}' must be a mapping", field=dotted)
            unknown = sorted(set(value) - _ELEMENT_KEYS)
            if unknown:
                raise ConfigError(f"Unknown key '{dotted}.{unknown[0]}'", field=f"{dotted}.{unknown[0]}")
            merged[key] = {**merged.get(key, {}), **value}
            continue
        if key not in merged:
            raise ConfigError(f"Unknown key '{dotted}'", field=dotted)
        if isinstance(merged[key], dict):
            if value is None:
                continue
            if not isinstance(value, Mapping):
                raise ConfigError(f"'{dotted}' must be a mapping", field=dotted)
            merged[key] = merge_settings(merged[key], value, dotted)
        else:
            merged[key] = value
    return merged


def set_setting(settings: Mapping, dotted: str, value: Any) -> Dict:
    """Copy of `settings` with one dotted key replaced; the key must exist."""
    keys = dotted.split('.')
    override: Dict[str, Any] = {keys[-1]: value}
    for key in reversed(keys[:-1]):
        override = {key: override}
    return merge_settings(settings, override)


def _get(section: Mapping, key: str, path: str, kind=float):
    value = section[key]
    dotted = f"{path}.{key}" if path else key
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"'{dotted}' must be {kind.__name__}, got {value!r}", field=dotted)


def _length_mm(value) -> float:
    return math.inf if value is None else float(value) * MM


def _build_cavity(settings: Mapping, c: float) -> CavityParams:
    section = settings['cavity']
    cavity = CavityParams(
        R=_get(section, 'R', 'cavity'),
        d=_get(section, 'd_mm', 'cavity') * MM,
        n=_get(section, 'n', 'cavity'),
        Rc1=_length_mm(section['Rc1_mm']),
        Rc2=_length_mm(section['Rc2_mm']),
        lock_offset=_get(section, 'lock_offset_hz', 'cavity'),
        peak_transmission=_get(section, 'peak_transmission', 'cavity'),
        off_resonance_reflection=_get(section, 'off_resonance_reflection', 'cavity'),
        transverse_leak=_get(section, 'transverse_leak', 'cavity'),
        scatter_charge=_get(section, 'scatter_charge', 'cavity', int),
        wavelength=_get(settings['lg'], 'wavelength_nm', 'lg') * NM,
        c=c,
    )
    gouy_factor(cavity)
    return cavity


def _build_lock(settings: Mapping) -> LockSettings:
    section = settings['cavity']['lock']
    path = 'cavity.lock'
    lock = LockSettings(
        gain_p=_get(section, 'gain_p', path),
        gain_i=_get(section, 'gain_i', path),
        noise_rms=_get(section, 'noise_rms_nm', path) * NM,
        step=_get(section, 'step_nm', path) * NM,
        dt=_get(section, 'dt_us', path) * 1e-6,
        steps=_get(section, 'steps', path, int),
        settle_steps=_get(section, 'settle_steps', path, int),
    )
    if lock.dt <= 0:
        raise ConfigError("Lock sample period must be positive", field='cavity.lock.dt_us')
    if lock.steps <= lock.settle_steps or lock.settle_steps < 0:
        raise ConfigError("Lock steps must exceed settle_steps", field='cavity.lock.steps')
    return lock


def _build_loop(settings: Mapping) -> LoopParams:
    section = settings['loop']
    impurity = _get(section, 'vpp_impurity', 'loop')
    components = {}
    for name, data in section['components'].items():
        data = dict(data)
        if data.get('kind', name) == 'vpp' and 'impurity' not in data:
            data['impurity'] = impurity
        components[name] = ElementParams.from_dict(name, data)
    slm = section['slm']
    return LoopParams(
        components=components,
        forward_order=tuple(section['forward_order']),
        reverse_order=tuple(section['reverse_order']),
        T=_get(section, 'T_ns', 'loop') * NS,
        t0=_get(section, 't0_ns', 'loop') * NS,
        max_loops=_get(section, 'max_loops', 'loop', int),
        reentry_coupling=_get(section, 'reentry_coupling', 'loop'),
        gate_window=_get(section, 'gate_window_ns', 'loop') * NS,
        slm=ElementParams(kind='slm', name='slm', pattern_charge=int(slm['pattern_charge']),
                          diffraction_efficiency=float(slm['diffraction_efficiency'])),
        coupler=ElementParams(kind='coupler', name='coupler',
                              transmission=_get(section['coupler'], 'transmission', 'loop.coupler')),
        coupler_extinction=_get(section, 'coupler_extinction', 'loop'),
    )


def _build_mz(settings: Mapping, c: float) -> MzParams:
    section = settings['mz']
    return MzParams(
        arm_delay=_get(section, 'arm_delay_m', 'mz') / c,
        splitting=_get(section, 'splitting', 'mz'),
        relative_phase=_get(section, 'relative_phase_rad', 'mz'),
        arm_loss=_get(section, 'arm_loss', 'mz'),
        coherence=_get(section, 'coherence', 'mz'),
    )


def _build_lg(settings: Mapping, cavity: CavityParams) -> Tuple[LGParams, GridSettings]:
    section = settings['lg']
    wavelength = _get(section, 'wavelength_nm', 'lg') * NM
    w0 = mode_waist(cavity) if section['w0_um'] is None else _get(section, 'w0_um', 'lg') * UM
    grid = GridSettings(
        n_r=_get(section, 'n_r', 'lg', int),
        n_alpha=_get(section, 'n_alpha', 'lg', int),
        extent_w=_get(section, 'extent_w', 'lg'),
        l_values=tuple(int(l) for l in section['l_values']),
    )
    if grid.n_alpha % 2 or grid.n_alpha < 2:
        raise ConfigError("n_alpha must be a positive even number", field='lg.n_alpha')
    if grid.extent_w < 4.0:
        raise ConfigError("Grid extent must cover at least 4 beam radii", field='lg.extent_w')
    return LGParams(w0=w0, wavelength=wavelength), grid


def _build_analysis(settings: Mapping) -> AnalysisSettings:
    section = settings['analysis']
    bandwidth = section['bandwidth_mhz']
    return AnalysisSettings(
        pulse_fwhm=_get(section, 'pulse_fwhm_ns', 'analysis') * NS,
        pulse_shape=str(section['pulse_shape']),
        bandwidth=None if bandwidth is None else float(bandwidth) * 1e6,
        sample_period=_get(section, 'sample_ns', 'analysis') * NS,
        floor_db=_get(section, 'floor_db', 'analysis'),
        sweep_points=_get(section, 'sweep_points', 'analysis', int),
        jitter_rms=_get(section, 'jitter_rms', 'analysis'),
        repetition_hz=_get(section, 'repetition_hz', 'analysis'),
        slm_frame_hz=_get(section, 'slm_frame_hz', 'analysis'),
        detection_threshold_db=_get(section, 'detection_threshold_db', 'analysis'),
    )


def build_config(settings: Mapping, profile: str = 'lab-2016') -> RunConfig:
    """
    Validate merged settings and build the typed configuration.

    Raises:
        ConfigError: naming the offending dotted key
    """
    try:
        scenario = settings['scenario']
        if scenario not in SCENARIOS:
            raise ConfigError(f"Unknown scenario '{scenario}', expected one of {SCENARIOS}", field='scenario')
        c = speed_of_light(settings['speed_of_light'])
        cavity = _build_cavity(settings, c)
        lg, grid = _build_lg(settings, cavity)
        loop = _build_loop(settings)
        inputs = settings['inputs']
        sweep = settings['sweep']
        config = RunConfig(
            scenario=scenario,
            seed=_get(settings, 'seed', '', int),
            output_dir=Path(settings['output_dir']),
            speed_of_light=settings['speed_of_light'],
            cavity=cavity,
            lock=_build_lock(settings),
            loop=loop,
            mz=_build_mz(settings, c),
            lg=lg,
            grid=grid,
            analysis=_build_analysis(settings),
            inputs=InputSettings(
                l_values=tuple(int(l) for l in inputs['l_values']),
                state_file=None if inputs['state_file'] is None else Path(inputs['state_file']),
            ),
            sweep=SweepSettings(
                parameter=str(sweep['parameter']),
                start=_get(sweep, 'start', 'sweep'),
                stop=_get(sweep, 'stop', 'sweep'),
                points=_get(sweep, 'points', 'sweep', int),
            ),
            settings=copy.deepcopy(dict(settings)),
            profile=profile,
        )
    except ConfigError:
        raise
    except TranscoderError as e:
        raise ConfigError(e.message, field=e.field) from e

    if config.sweep.points < 1:
        raise ConfigError("Sweep needs at least one point", field='sweep.points')
    if max(config.inputs.l_values, default=0) > config.loop.max_loops:
        raise ConfigError("Input charges exceed max_loops", field='inputs.l_values')
    return config


def load_config(
    path: Optional[Union[str, Path]] = None,
    profile: str = 'lab-2016',
    overrides: Optional[Mapping] = None,
) -> RunConfig:
    """
    Load a YAML run file on top of a built-in profile.

    Args:
        path: Run file; the bare profile is used when None
        profile: Built-in profile name
        overrides: Extra settings applied after the file

    Returns:
        RunConfig
    """
    settings = get_profile(profile)
    if path is not None:
        source = Path(path)
        yaml = YAML(typ='safe')
        try:
            with source.open('r', encoding='utf-8') as fh:
                data = yaml.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"Config file not found: {source}", field='config')
        except YAMLError as e:
            raise ConfigError(f"Cannot parse {source}: {e}", field='config')
        if data is None:
            data = {}
        if not isinstance(data, Mapping):
            raise ConfigError("Config root must be a mapping", field='config')
        settings = merge_settings(settings, data)
        logger.info(f"Loaded run file {source} over profile '{profile}'")
    if overrides:
        settings = merge_settings(settings, overrides)
    return build_config(settings, profile)
