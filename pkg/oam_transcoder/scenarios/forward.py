"""OAM to time-bin conversion scenario."""

import logging
from typing import Dict

from ..analysis import crosstalk_table, efficiency_summary, render_waveform
from ..constants import NS
from ..mode_algebra import marginal
from ..transcoder import (
    FORWARD_MODE,
    conversion_matrix,
    gamma,
    improved_loop,
    max_convertible_modes,
    per_loop_transmission,
    run_forward,
)
from .base import BaseScenario, register_scenario

logger = logging.getLogger(__name__)


@register_scenario
class ForwardScenario(BaseScenario):
    """Each input charge is converted into a pulse train; the photodiode sees one peak per populated bin."""

    slug = 'forward'
    command = 'simulate-forward'
    name = 'OAM to Time-Bin'
    description = 'Forward conversion, waveform, efficiency matrix and loss scaling'
    order = 10

    def get_results(self) -> Dict:
        config = self.config
        loop, cavity, analysis = config.loop, config.cavity, config.analysis

        outputs, traces, rows = {}, {}, []
        peaks = {}
        for key, state in self.input_states().items():
            output, trace = run_forward(state, loop, cavity)
            outputs[key], traces[key] = output, trace
            waveform = render_waveform(output, analysis.pulse_fwhm, analysis.bandwidth, loop.T,
                                       analysis.sample_period, analysis.pulse_shape)
            rows.extend((key, t / NS, value) for t, value in waveform.samples)
            powers = marginal(output, 'bin')
            peaks[key] = max(powers, key=powers.get) if powers else None

        self.write_states('output_state.csv', outputs)
        self.write_traces('trace.jsonl', traces)
        self.writer.write_csv('waveform.csv', ('input', 't_ns', 'intensity'), rows)

        matrix = conversion_matrix(FORWARD_MODE, config.inputs.l_values, loop, cavity, workers=self.workers)
        self.writer.write_json('efficiency_matrix.json', matrix.to_dict())
        table = crosstalk_table(matrix, analysis.floor_db)
        self.writer.write_json('crosstalk.json', table.to_dict())

        upgraded = improved_loop(loop)
        return {
            'per_loop_transmission': per_loop_transmission(loop, FORWARD_MODE),
            'gamma': gamma(loop, FORWARD_MODE),
            'improved_per_loop_transmission': per_loop_transmission(upgraded, FORWARD_MODE),
            'improved_gamma': gamma(upgraded, FORWARD_MODE),
            'peak_bins': peaks,
            'crosstalk_mean_db': table.mean_db if table.defined else None,
            'max_convertible_modes': max_convertible_modes(loop, cavity, analysis.detection_threshold_db),
            **efficiency_summary(matrix),
        }
