"""Physical constants and unit helpers."""

from scipy.constants import c as C_CODATA

from .exceptions import ValidationError

C_ROUNDED = 3.0e8

SPEED_OF_LIGHT = {
    'codata': C_CODATA,
    'rounded': C_ROUNDED,
}

NS = 1e-9
MM = 1e-3
UM = 1e-6
NM = 1e-9
MHZ = 1e6

# Intensity tolerance for power bookkeeping
POWER_TOLERANCE = 1e-12
DEFAULT_PRUNE_THRESHOLD = 1e-15


def speed_of_light(convention: str = 'codata') -> float:
    """
    Resolve a speed-of-light convention name.

    Args:
        convention: 'codata' or 'rounded'

    Returns:
        Speed of light in m/s
    """
    try:
        return SPEED_OF_LIGHT[convention]
    except KeyError:
        raise ValidationError(
            f"Unknown speed_of_light convention '{convention}', expected one of {sorted(SPEED_OF_LIGHT)}",
            field='speed_of_light',
        )
