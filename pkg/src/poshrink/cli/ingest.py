"""
Reading count files with header ``unit_id,x[,y]``.
"""

import collections
import csv
import io
import logging
import typing as t

import numpy as np
from smart_open import open

from poshrink.cli.exceptions import IngestParseError, IngestValidationError

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ["unit_id", "x"]
OPTIONAL_COLUMNS = ["y"]


class CountTable(t.NamedTuple):
    ids: t.List[str]
    x: np.ndarray
    y: t.Optional[np.ndarray]

    @property
    def d(self) -> int:
        return self.x.size

    @property
    def has_targets(self) -> bool:
        return self.y is not None


def _parse_count(value: str, column: str, line: int) -> int:
    try:
        number = float(value)
    except ValueError:
        raise IngestParseError(f"Column `{column}` holds a non-numeric value {value!r}", line)
    if not np.isfinite(number) or number != np.floor(number):
        raise IngestParseError(f"Column `{column}` must hold integer counts, got {value!r}", line)
    if number < 0:
        raise IngestValidationError(f"Negative count {value!r} in column `{column}` (line {line})")
    return int(number)


def parse_counts(text: str) -> CountTable:
    """
    Parse CSV text. Rows with a missing ``x`` are excluded; every other defect is reported with its line number.

    :param text: CSV content.

    :return: Unit ids, observed counts and, when the ``y`` column is present, future counts.
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise IngestParseError("File is empty", 1)
    header = [name.strip() for name in rows[0]]
    if header[:2] != REQUIRED_COLUMNS or header[2:] not in ([], OPTIONAL_COLUMNS):
        raise IngestParseError(f"Header must be `unit_id,x` or `unit_id,x,y`, got `{','.join(header)}`", 1)
    has_y = len(header) == 3

    ids, x, y = [], [], []
    for offset, row in enumerate(rows[1:]):
        line = offset + 2
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise IngestParseError(f"Expected {len(header)} fields, got {len(row)}", line)
        cells = [cell.strip() for cell in row]
        if not cells[1]:
            logger.warning(f"Skipping unit {cells[0]!r} with missing `x` (line {line})")
            continue
        ids.append(cells[0])
        x.append(_parse_count(cells[1], "x", line))
        if has_y:
            if not cells[2]:
                raise IngestParseError(f"Missing `y` for unit {cells[0]!r}", line)
            y.append(_parse_count(cells[2], "y", line))

    if not ids:
        raise IngestValidationError("No complete rows in count file")
    duplicated = sorted(uid for uid, count in collections.Counter(ids).items() if count > 1)
    if duplicated:
        raise IngestValidationError(f"Duplicated unit ids: {duplicated}")
    logger.info(f"Read {len(ids)} units{' with targets' if has_y else ''}")
    return CountTable(
        ids=ids,
        x=np.array(x, dtype=np.int64),
        y=np.array(y, dtype=np.int64) if has_y else None,
    )


def ingest_counts(path: str) -> CountTable:
    """
    Read a count file from a local path or URL.

    :param path: Location understood by ``smart_open``.

    :return: Parsed :class:`CountTable`; ``d`` is the number of complete rows.
    """
    with open(path, "r") as f:
        return parse_counts(f.read())
