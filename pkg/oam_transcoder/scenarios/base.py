"""Base scenario class and registry for the OAM transcoder."""

import logging
from abc import ABC, abstractmethod
from typing import Dict, List, Type

from ..config import RunConfig
from ..exceptions import ConfigError
from ..mode_algebra import PulseState
from ..utils.io import OutputWriter
from ..utils.validators import load_state_file, state_from_charges

logger = logging.getLogger(__name__)


# Scenario registry
_scenario_registry: Dict[str, Type['BaseScenario']] = {}


def register_scenario(cls: Type['BaseScenario']) -> Type['BaseScenario']:
    """
    Decorator to register a scenario class.

    Usage:
        @register_scenario
        class MyScenario(BaseScenario):
            pass
    """
    _scenario_registry[cls.slug] = cls
    return cls


def get_all_scenarios() -> List[Type['BaseScenario']]:
    """Get all registered scenarios, in display order."""
    return sorted(_scenario_registry.values(), key=lambda cls: cls.order)


def get_scenario(slug: str) -> Type['BaseScenario']:
    """Get a scenario by slug."""
    try:
        return _scenario_registry[slug]
    except KeyError:
        raise ConfigError(f"Unknown scenario '{slug}'", field='scenario')


class BaseScenario(ABC):
    """
    Base class for batch scenarios.

    All scenarios must inherit from this class and implement:
    - slug: Scenario name as used in run files
    - command: CLI subcommand
    - name: Display name
    - description: Brief description
    - get_results(): Write output files and return the summary metrics
    """

    slug: str = None
    command: str = None
    name: str = None
    description: str = None
    order: int = 0

    def __init__(self, config: RunConfig, writer: OutputWriter, workers: int = 1):
        """
        Initialize the scenario.

        Args:
            config: Validated run configuration
            writer: Output writer for the run directory
            workers: Worker threads for matrix rows and sweep points
        """
        self.config = config
        self.writer = writer
        self.workers = max(1, int(workers))

    def input_states(self) -> Dict[int, PulseState]:
        """Inputs keyed by charge: the state file as a single entry when given, else one basis state per l."""
        inputs = self.config.inputs
        if inputs.state_file is not None:
            return {0: load_state_file(inputs.state_file)}
        return state_from_charges(inputs.l_values, t0=self.config.loop.t0)

    def write_states(self, name: str, states: Dict[int, PulseState]):
        """One CSV row per populated label of each output state."""
        header = ('input', 'bin', 'pol', 'l', 'p', 're', 'im', 'power')
        rows = []
        for key, state in states.items():
            for label, amp in state.items():
                rows.append((key, label.bin, label.pol.value, label.l, label.p, amp.real, amp.imag, abs(amp) ** 2))
        return self.writer.write_csv(name, header, rows)

    def write_traces(self, name: str, traces: Dict):
        records = []
        for key, trace in traces.items():
            records.extend({'input': key, **record} for record in trace.to_records())
        return self.writer.write_jsonl(name, records)

    @abstractmethod
    def get_results(self) -> Dict:
        """
        Run the scenario.

        Must write its files through self.writer and return the summary metrics
        that go into the manifest.

        Returns:
            Summary dictionary
        """
        raise NotImplementedError("Subclasses must implement get_results()")

    def run(self) -> Dict:
        """
        Run the scenario and return its metadata and summary.

        Returns:
            Dictionary with scenario metadata and summary
        """
        logger.info(f"Running scenario '{self.slug}'")
        summary = self.get_results()
        return {
            'slug': self.slug,
            'name': self.name,
            'description': self.description,
            'order': self.order,
            'summary': summary,
        }

    def __str__(self):
        return self.name or self.slug

    def __repr__(self):
        return f"<{self.__class__.__name__}: {self.slug}>"
