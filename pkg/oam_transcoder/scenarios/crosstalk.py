"""Nearest-neighbour cross-talk of both conversion directions."""

import logging
from typing import Dict

from ..analysis import crosstalk_table
from ..transcoder import DIRECTIONS, conversion_matrix
from .base import BaseScenario, register_scenario

logger = logging.getLogger(__name__)

# Band the calibrated defaults are expected to land in
CROSSTALK_BAND_DB = (-25.0, -15.0)


@register_scenario
class CrosstalkScenario(BaseScenario):
    slug = 'crosstalk'
    command = 'crosstalk'
    name = 'Cross-talk'
    description = 'Forward and reverse cross-talk tables in dB'
    order = 50

    def get_results(self) -> Dict:
        config = self.config
        low, high = CROSSTALK_BAND_DB
        summary = {'band_db': list(CROSSTALK_BAND_DB)}
        for direction in DIRECTIONS:
            matrix = conversion_matrix(direction, config.inputs.l_values, config.loop, config.cavity,
                                       workers=self.workers)
            table = crosstalk_table(matrix, config.analysis.floor_db)
            self.writer.write_json(f'efficiency_{direction}.json', matrix.to_dict())
            rows = table.to_dict()['rows']
            self.writer.write_csv(f'crosstalk_{direction}.csv', ('input', 'minus_db', 'plus_db'),
                                  ((row['input'], row['minus_db'], row['plus_db']) for row in rows))
            mean = table.mean_db if table.defined else None
            summary[direction] = {
                'mean_db': mean,
                'in_band': mean is not None and low <= mean <= high,
            }
            logger.info(f"{direction} cross-talk mean {mean} dB")
        return summary
