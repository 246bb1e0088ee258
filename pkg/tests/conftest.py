"""Shared fixtures: the lab-2016 profile and loops derived from it."""

import pytest

from oam_transcoder.config import load_config
from oam_transcoder.transcoder import lossless_loop


@pytest.fixture(scope="session")
def run_config():
    return load_config()


@pytest.fixture
def cavity(run_config):
    return run_config.cavity


@pytest.fixture
def loop(run_config):
    return run_config.loop


@pytest.fixture
def ideal_cavity(cavity):
    """Perfect filter: LG00 fully transmitted, everything else fully reflected."""
    return cavity.with_(peak_transmission=1.0, off_resonance_reflection=1.0, transverse_leak=0.0)


@pytest.fixture
def ideal_loop(loop):
    return lossless_loop(loop)
