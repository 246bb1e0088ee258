"""Time-bin to OAM conversion scenario."""

import logging
from typing import Dict

from ..analysis import crosstalk_table, efficiency_summary, oam_generation_rate, projective_measurement
from ..mode_algebra import PulseState, marginal
from ..transcoder import REVERSE_MODE, conversion_matrix, gamma, per_loop_transmission, run_reverse
from .base import BaseScenario, register_scenario

logger = logging.getLogger(__name__)


@register_scenario
class ReverseScenario(BaseScenario):
    """
    A pulse injected l round trips before the trigger leaves carrying charge l.

    Basis inputs are Gaussian pulses in bin -l; a state file is used as given.
    """

    slug = 'reverse'
    command = 'simulate-reverse'
    name = 'Time-Bin to OAM'
    description = 'Reverse conversion, projective detection and mode-switching rate'
    order = 20

    def input_states(self) -> Dict[int, PulseState]:
        states = super().input_states()
        if self.config.inputs.state_file is not None:
            return states
        return {l: state.map_labels(lambda label: label.with_(l=0, bin=-label.l)) for l, state in states.items()}

    def get_results(self) -> Dict:
        config = self.config
        loop, cavity, analysis = config.loop, config.cavity, config.analysis

        outputs, traces, detected = {}, {}, []
        for key, state in self.input_states().items():
            output, trace = run_reverse(state, loop, cavity)
            outputs[key], traces[key] = output, trace
            charges = sorted(set(config.inputs.l_values) | set(marginal(output, 'l')))
            for j in charges:
                power = projective_measurement(output, j, loop.slm, loop.coupler, loop.coupler_extinction)
                detected.append((key, j, power))

        self.write_states('output_state.csv', outputs)
        self.write_traces('trace.jsonl', traces)
        self.writer.write_csv('detection.csv', ('input', 'slm_charge', 'power'), detected)

        matrix = conversion_matrix(REVERSE_MODE, config.inputs.l_values, loop, cavity, workers=self.workers)
        self.writer.write_json('efficiency_matrix.json', matrix.to_dict())
        table = crosstalk_table(matrix, analysis.floor_db)
        self.writer.write_json('crosstalk.json', table.to_dict())

        return {
            'per_loop_transmission': per_loop_transmission(loop, REVERSE_MODE),
            'gamma': gamma(loop, REVERSE_MODE),
            'crosstalk_mean_db': table.mean_db if table.defined else None,
            'generation_rate': oam_generation_rate(analysis.repetition_hz, analysis.slm_frame_hz),
            **efficiency_summary(matrix),
        }
