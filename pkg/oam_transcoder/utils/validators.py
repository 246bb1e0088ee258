"""Validators for user-supplied input states."""

import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Mapping, Tuple, Union

from ..exceptions import ConfigError
from ..mode_algebra import ModeLabel, Polarization, PulseState, superpose

logger = logging.getLogger(__name__)

__all__ = ['validate_state_document', 'load_state_file', 'state_from_charges']

REQUIRED_TERM_FIELDS = ('pol', 'l', 're', 'im')


def validate_state_document(data) -> Tuple[bool, List[str]]:
    """
    Check the structure of a JSON input state.

    Expected shape: {"t0_ns": float, "terms": [{"pol": "H", "l": 1, "p": 0, "bin": 0, "re": .., "im": ..}]}

    Args:
        data: Parsed JSON document

    Returns:
        Tuple of (is_valid, list of problems)
    """
    problems = []
    if not isinstance(data, Mapping):
        return False, ['document must be a mapping']
    terms = data.get('terms')
    if not isinstance(terms, list) or not terms:
        return False, ['terms must be a non-empty list']

    for index, term in enumerate(terms):
        if not isinstance(term, Mapping):
            problems.append(f'terms[{index}] must be a mapping')
            continue
        for field in REQUIRED_TERM_FIELDS:
            if field not in term:
                problems.append(f'terms[{index}].{field} is missing')
        if term.get('pol', 'H') not in (Polarization.H.value, Polarization.V.value):
            problems.append(f'terms[{index}].pol must be H or V')
        for field in ('re', 'im'):
            value = term.get(field, 0.0)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                problems.append(f'terms[{index}].{field} must be a finite number')

    return (len(problems) == 0, problems)


def load_state_file(path: Union[str, Path]) -> PulseState:
    """Read and validate a JSON input state; power above 1 is rejected."""
    source = Path(path)
    try:
        data = json.loads(source.read_text(encoding='utf-8'))
    except FileNotFoundError:
        raise ConfigError(f"State file not found: {source}", field='inputs.state_file')
    except json.JSONDecodeError as e:
        raise ConfigError(f"Cannot parse {source}: {e}", field='inputs.state_file')

    valid, problems = validate_state_document(data)
    if not valid:
        raise ConfigError(f"Invalid state file {source}: {'; '.join(problems)}", field='inputs.state_file')
    return PulseState.from_dict(data)


def state_from_charges(l_values, t0: float = 0.0) -> Dict[int, PulseState]:
    """One normalized H-polarized basis input per charge, keyed by charge."""
    states = {}
    for l in l_values:
        states[int(l)] = superpose([(ModeLabel(Polarization.H, int(l)), 1.0)], t0=t0)
    return states
