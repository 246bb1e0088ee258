"""Mirror-image interference diagnostic: an LG beam overlapped with its reflection shows 2l fringes."""

import logging
from typing import Dict

from ..constants import UM
from ..lg_fields import count_fringes, mirror_interference_pattern, mode_overlap
from .base import BaseScenario, register_scenario

logger = logging.getLogger(__name__)


@register_scenario
class FringePatternScenario(BaseScenario):
    slug = 'fringe-pattern'
    command = 'fringe-pattern'
    name = 'Fringe Pattern'
    description = 'Intensity of |LG(0,l) + LG(0,-l)|^2 and its fringe count'
    order = 40

    def get_results(self) -> Dict:
        lg, grid = self.config.lg, self.config.grid
        fringes, norms = {}, {}
        for l in grid.l_values:
            pattern = mirror_interference_pattern(lg, l, n_r=grid.n_r, n_alpha=grid.n_alpha, extent_w=grid.extent_w)
            self.writer.write_csv(f'fringes_l{l}.csv', ('r_um', 'alpha_rad', 'intensity'),
                                  ((r / UM, alpha, value) for r, alpha, value in pattern.rows()))
            self.writer.write_pgm(f'fringes_l{l}.pgm', pattern.grayscale())
            fringes[l] = count_fringes(pattern)
            norms[l] = abs(mode_overlap(lg, (0, l), lg, (0, l), n_r=grid.n_r, n_alpha=grid.n_alpha))
            logger.info(f"l={l}: {fringes[l]} fringes")

        return {
            'w0_um': lg.w0 / UM,
            'fringe_counts': fringes,
            'expected_counts': {l: 2 * abs(l) for l in grid.l_values},
            'counts_match': all(count == 2 * abs(l) for l, count in fringes.items()),
            'normalization': norms,
        }
