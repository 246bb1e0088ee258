"""Coherence of converted superpositions, read out with the unbalanced Mach-Zehnder."""

import cmath
import logging
import math
from dataclasses import replace
from typing import Dict

import numpy as np

from ..analysis import apply_intensity_jitter, fringe_phase, projective_measurement, visibility_from_sweep
from ..mode_algebra import ModeLabel, Polarization, basis_state, marginal, superpose
from ..transcoder import mz_compensating_arm_loss, mz_prepare, mz_readout, run_forward, run_reverse
from .base import BaseScenario, register_scenario

logger = logging.getLogger(__name__)

# Reverse check: the two Mach-Zehnder copies are converted into charges i and i + delay
REVERSE_CHARGE = 0


@register_scenario
class VisibilityScenario(BaseScenario):
    """
    Forward: (|0> + e^{i phi}|1>)/sqrt(2) is converted and its two bins interfered in the Mach-Zehnder.
    Reverse: a pulse split by the Mach-Zehnder is converted and projected on (|i> + e^{i theta}|i+1>)/sqrt(2).
    """

    slug = 'visibility'
    command = 'visibility'
    name = 'Visibility'
    description = 'Interference visibility and fringe phase in both directions'
    order = 60

    def _phases(self):
        points = self.config.analysis.sweep_points
        return (np.arange(points) * (2.0 * math.pi / points)).tolist()

    def _forward(self) -> Dict:
        config = self.config
        loop, cavity, mz = config.loop, config.cavity, config.mz
        phi = mz.relative_phase
        state = superpose([(ModeLabel(Polarization.H, 0), 1.0 / math.sqrt(2.0)),
                           (ModeLabel(Polarization.H, 1), cmath.exp(1j * phi) / math.sqrt(2.0))], t0=loop.t0)
        output, _ = run_forward(state, loop, cavity)
        phases = self._phases()
        seed = config.seed

        readout = apply_intensity_jitter(mz_readout(output, mz, phases, loop), config.analysis.jitter_rms, seed)
        compensating = mz_compensating_arm_loss(loop, cavity)
        balanced = replace(mz, arm_loss=compensating)
        readout_balanced = apply_intensity_jitter(mz_readout(output, balanced, phases, loop),
                                                  config.analysis.jitter_rms, seed + 1)
        self.writer.write_csv('visibility_forward.csv', ('phase_rad', 'intensity', 'intensity_balanced'),
                              ((phase, value, other) for (phase, value), (_, other) in zip(readout, readout_balanced)))

        powers = marginal(output, 'bin')
        bins = sorted(powers)
        early, late = powers[bins[0]] * mz.arm_loss, powers.get(bins[0] + mz.delay_bins(loop.T), 0.0)
        ratio = math.sqrt(late / early) if early > 0 else 0.0
        return {
            'input_phase_rad': phi,
            'visibility': visibility_from_sweep(readout),
            'fringe_phase_rad': fringe_phase(readout),
            'amplitude_ratio': ratio,
            'expected_visibility': mz.coherence * 2.0 * ratio / (1.0 + ratio ** 2),
            'compensating_arm_loss': compensating,
            'balanced_visibility': visibility_from_sweep(readout_balanced),
        }

    def _reverse(self) -> Dict:
        config = self.config
        loop, cavity, mz = config.loop, config.cavity, config.mz
        i, delay = REVERSE_CHARGE, mz.delay_bins(loop.T)
        pulse = basis_state(ModeLabel(Polarization.H, 0, 0, -(i + delay)), t0=loop.t0)
        output, _ = run_reverse(mz_prepare(pulse, mz, loop), loop, cavity)

        sweep = []
        for theta in self._phases():
            target = {i: 1.0, i + delay: cmath.exp(1j * theta)}
            sweep.append((theta, projective_measurement(output, target, loop.slm, loop.coupler,
                                                        loop.coupler_extinction)))
        sweep = apply_intensity_jitter(sweep, config.analysis.jitter_rms, config.seed + 2)
        self.writer.write_csv('visibility_reverse.csv', ('theta_rad', 'power'), sweep)
        return {
            'charges': [i, i + delay],
            'visibility': visibility_from_sweep(sweep),
            'fringe_phase_rad': fringe_phase(sweep),
        }

    def get_results(self) -> Dict:
        return {
            'forward': self._forward(),
            'reverse': self._reverse(),
        }
