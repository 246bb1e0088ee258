"""Utility functions for the OAM transcoder."""

from .io import *
from .validators import *
