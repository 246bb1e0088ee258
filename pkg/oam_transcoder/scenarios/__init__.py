"""Scenario framework for the OAM transcoder."""

from .base import BaseScenario, get_all_scenarios, get_scenario, register_scenario
from .forward import ForwardScenario
from .reverse import ReverseScenario
from .cavity_spectrum import CavitySpectrumScenario
from .fringe_pattern import FringePatternScenario
from .crosstalk import CrosstalkScenario
from .visibility import VisibilityScenario
from .sweep import SweepScenario

__all__ = [
    'BaseScenario',
    'register_scenario',
    'get_all_scenarios',
    'get_scenario',
    'ForwardScenario',
    'ReverseScenario',
    'CavitySpectrumScenario',
    'FringePatternScenario',
    'CrosstalkScenario',
    'VisibilityScenario',
    'SweepScenario',
]
