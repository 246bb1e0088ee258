"""Mode-filtering cavity scenario: Airy spectrum, Gouy comb, clean OAM range and lock residual."""

import logging
from typing import Dict

import numpy as np

from ..cavity import (
    LINEWIDTH_CONVENTIONS,
    airy_transmission,
    fsr,
    max_clean_oam,
    mode_waist,
    pulse_fits_cavity,
    pulse_linewidth,
    simulate_lock,
    spectrum,
    transmission_spectrum,
)
from ..constants import NM, UM
from .base import BaseScenario, register_scenario

logger = logging.getLogger(__name__)

AIRY_POINTS = 2001
# Reported next to the derived scan; the lab quotes a clean range of l < 201
QUOTED_CLEAN_RANGE = 200


@register_scenario
class CavitySpectrumScenario(BaseScenario):
    slug = 'cavity-spectrum'
    command = 'cavity-spectrum'
    name = 'Cavity Spectrum'
    description = 'Finesse, FSR, linewidth, transverse-mode comb and lock residual'
    order = 30

    def get_results(self) -> Dict:
        config = self.config
        cavity = config.cavity

        nu = np.linspace(0.0, 2.0 * fsr(cavity), AIRY_POINTS)
        self.writer.write_csv('airy.csv', ('nu_hz', 'transmission'),
                              zip(nu.tolist(), airy_transmission(cavity, nu).tolist()))

        modes = transmission_spectrum(cavity, config.grid.l_values, points=AIRY_POINTS)
        header = ('detuning_hz',) + tuple(f'l{l}' for l in modes['modes'])
        columns = [modes['detuning_hz']] + list(modes['modes'].values())
        self.writer.write_csv('modes.csv', header, np.column_stack(columns).tolist())

        lock = config.lock
        trace = simulate_lock(cavity, lock.initial_state(), lock.steps, lock.dt, config.seed,
                              step=lock.step, settle_steps=lock.settle_steps)
        self.writer.write_csv('lock.csv', ('t_us', 'length_error_nm', 'detuning_hz'),
                              zip((trace.times / 1e-6).tolist(), (trace.length_errors / NM).tolist(),
                                  trace.detunings.tolist()))

        clean = max_clean_oam(cavity, 1.0)
        duration = config.analysis.pulse_fwhm
        return {
            **spectrum(cavity).to_dict(),
            'max_clean_oam': clean,
            'max_clean_oam_half_fwhm': max_clean_oam(cavity, 0.5),
            'quoted_clean_oam': QUOTED_CLEAN_RANGE,
            'clean_range_matches_quote': clean == QUOTED_CLEAN_RANGE,
            'pulse_linewidth_hz': {name: pulse_linewidth(duration, name) for name in LINEWIDTH_CONVENTIONS},
            'pulse_fits_cavity': pulse_fits_cavity(cavity, duration),
            'mode_waist_um': mode_waist(cavity) / UM,
            'lock': trace.summary(),
        }
