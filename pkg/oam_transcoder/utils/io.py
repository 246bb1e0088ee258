"""Output files: CSV, JSON, JSON-lines, PGM and the run manifest."""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from ..exceptions import TranscoderError

logger = logging.getLogger(__name__)

__all__ = ['MANIFEST_NAME', 'ERROR_NAME', 'OutputWriter', 'to_jsonable', 'write_error']

MANIFEST_NAME = 'manifest.json'
ERROR_NAME = 'error.json'


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays, paths and complex numbers to plain JSON types."""
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, complex):
        return {'re': value.real, 'im': value.imag}
    if isinstance(value, Path):
        return value.as_posix()
    return value


def _dumps(data: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(to_jsonable(data), sort_keys=True, indent=indent, allow_nan=False)


class OutputWriter:
    """
    Writes run artifacts into one directory and remembers every file it wrote.

    Paths are relative to `root`; the manifest lists them in write order.
    """

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self.files: List[str] = []

    def _path(self, name: str) -> Path:
        path = self.root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        relative = Path(name).as_posix()
        if relative not in self.files:
            self.files.append(relative)
        return path

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
        path = self._path(name)
        with path.open('w', newline='', encoding='utf-8') as fh:
            writer = csv.writer(fh, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([to_jsonable(value) for value in row])
        logger.debug(f"Wrote {path}")
        return path

    def write_json(self, name: str, data: Any) -> Path:
        path = self._path(name)
        path.write_text(_dumps(data) + '\n', encoding='utf-8')
        logger.debug(f"Wrote {path}")
        return path

    def write_jsonl(self, name: str, records: Iterable[Dict]) -> Path:
        path = self._path(name)
        with path.open('w', encoding='utf-8') as fh:
            for record in records:
                fh.write(_dumps(record, indent=None) + '\n')
        logger.debug(f"Wrote {path}")
        return path

    def write_pgm(self, name: str, image: np.ndarray, levels: int = 255) -> Path:
        """Plain (P2) grayscale image; rows of `image` become image rows."""
        image = np.asarray(image, dtype=int)
        if image.ndim != 2 or image.min(initial=0) < 0 or image.max(initial=0) > levels:
            raise TranscoderError(f"PGM image must be 2-D with values in [0, {levels}]", field='image')
        path = self._path(name)
        lines = ['P2', f'{image.shape[1]} {image.shape[0]}', str(levels)]
        lines.extend(' '.join(str(value) for value in row) for row in image.tolist())
        path.write_text('\n'.join(lines) + '\n', encoding='ascii')
        logger.debug(f"Wrote {path}")
        return path

    def write_manifest(self, scenario: str, summary: Dict, status: int = 0) -> Path:
        """Manifest listing every file written so far plus the scenario summary."""
        files = list(self.files)
        path = self._path(MANIFEST_NAME)
        manifest = {
            'scenario': scenario,
            'status': status,
            'files': files,
            'summary': summary,
        }
        path.write_text(_dumps(manifest) + '\n', encoding='utf-8')
        logger.info(f"Wrote manifest with {len(files)} files to {path}")
        return path


def write_error(writer: OutputWriter, error: TranscoderError) -> Path:
    """Machine-readable error report."""
    return writer.write_json(ERROR_NAME, error.to_dict())
