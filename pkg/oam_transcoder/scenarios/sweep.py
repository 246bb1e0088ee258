"""Parameter sweep: loss scaling as one run-file setting is varied."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Tuple

from ..config import build_config, set_setting
from ..mode_algebra import marginal
from ..transcoder import FORWARD_MODE, REVERSE_MODE, gamma, per_loop_transmission, run_forward
from ..utils.validators import state_from_charges
from .base import BaseScenario, register_scenario

logger = logging.getLogger(__name__)


@register_scenario
class SweepScenario(BaseScenario):
    """
    Rebuilds the configuration for each value of `sweep.parameter` (a dotted run-file key).

    Points are evaluated on a worker pool; per-point files are written and merged in index order.
    """

    slug = 'sweep'
    command = 'sweep'
    name = 'Parameter Sweep'
    description = 'Per-loop transmission and gamma versus one setting'
    order = 70

    def _evaluate(self, point: Tuple[int, float]) -> Dict:
        index, value = point
        settings = set_setting(self.config.settings, self.config.sweep.parameter, value)
        config = build_config(settings, self.config.profile)
        loop = config.loop
        efficiencies = {}
        for l, state in state_from_charges(config.inputs.l_values, t0=loop.t0).items():
            output, _ = run_forward(state, loop, config.cavity)
            efficiencies[l] = marginal(output, 'bin').get(l, 0.0)
        logger.debug(f"Sweep point {index}: {config.sweep.parameter}={value}")
        return {
            'index': index,
            'value': value,
            'per_loop_transmission': per_loop_transmission(loop, FORWARD_MODE),
            'gamma': gamma(loop, FORWARD_MODE),
            'reverse_gamma': gamma(loop, REVERSE_MODE),
            'efficiencies': efficiencies,
        }

    def get_results(self) -> Dict:
        sweep = self.config.sweep
        points = list(enumerate(sweep.values()))
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(self._evaluate, points))
        else:
            results = [self._evaluate(point) for point in points]

        for result in results:
            self.writer.write_json(f"points/point_{result['index']:03d}.json", result)

        l_values = self.config.inputs.l_values
        header = ('index', sweep.parameter, 'per_loop_transmission', 'gamma', 'reverse_gamma') + tuple(
            f'efficiency_l{l}' for l in l_values)
        rows = [
            (result['index'], result['value'], result['per_loop_transmission'], result['gamma'],
             result['reverse_gamma'], *(result['efficiencies'][l] for l in l_values))
            for result in results
        ]
        self.writer.write_csv('sweep.csv', header, rows)
        return {
            'parameter': sweep.parameter,
            'points': len(results),
            'gamma_range': [min(r['gamma'] for r in results), max(r['gamma'] for r in results)],
        }
