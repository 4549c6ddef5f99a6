import io
import logging
import re

import numpy as np
import pandas as pd

from src.data.dataset import Dataset
from src.system import ParseError, is_strictly_increasing, write_atomic

logger = logging.getLogger(__name__)

_PANDAS_LINE = re.compile(r"line (\d+)")


def _read_cells(path):
    """Read every cell as text; header row included. Returns a DataFrame of str/NaN."""
    try:
        return pd.read_csv(path, header=None, dtype=str, keep_default_na=False,
                           skip_blank_lines=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise ParseError("load_csv: the file is empty.", line=1) from None
    except pd.errors.ParserError as err:
        # pandas reports rows with too many fields as "... in line L, saw K"
        match = _PANDAS_LINE.search(str(err))
        line = int(match.group(1)) if match else None
        raise ParseError("load_csv: ragged row (too many fields).", line=line) from None


def _cell_float(cell):
    try:
        return float(cell)
    except ValueError:
        return np.nan


# correctly rounded, so a saved float loads back bit for bit
_exact_floats = np.vectorize(_cell_float, otypes=[float])


def _first_bad(mask):
    """(row, column) of the first True entry in row-major order."""
    rows, cols = np.nonzero(mask)
    return int(rows[0]), int(cols[0])


def load_csv(path):
    """
    Load a dataset from a CSV file.

    The first row is a header ``y,t_1,...,t_p`` whose cells after the first
    are the grid values; every following row is one observation, the response
    first and then the curve values.

    Parameters
    ----------
    path : str or os.PathLike
        CSV file.

    Returns
    -------
    Dataset
        The parsed data.

    Raises
    ------
    ParseError
        On a missing header, ragged rows, non-numeric or non-finite cells, or a
        grid that is not strictly increasing. The error carries the 1-based
        line and column of the first offending cell.

    Examples
    --------
    A file holding::

        y,0.0,0.5
        1.0,2.0,3.0
        2.0,4.0,5.0
        3.0,6.0,7.0

    loads as a dataset with ``n = 3`` and ``p = 2``.
    """
    cells = _read_cells(path)
    if cells.shape[0] < 1 or cells.shape[1] < 2:
        raise ParseError("load_csv: expected a header 'y,t_1,...,t_p' and at least one grid column.", line=1)

    header = cells.iloc[0]
    if str(header.iloc[0]).strip().lower() != "y":
        raise ParseError("load_csv: the first header cell must be 'y'.", line=1, column=1)

    grid_text = header.iloc[1:]
    grid = _exact_floats(grid_text.to_numpy(dtype=str))
    bad = ~np.isfinite(grid)
    if bad.any():
        j = int(np.argmax(bad))
        raise ParseError(f"load_csv: grid value {grid_text.iloc[j]!r} is not a finite number.", line=1, column=j + 2)
    if not is_strictly_increasing(grid):
        j = int(np.argmax(grid[1:] <= grid[:-1])) + 1
        raise ParseError("load_csv: the grid is not strictly increasing.", line=1, column=j + 2)

    body = cells.iloc[1:]
    if body.shape[0] == 0:
        raise ParseError("load_csv: no observation rows.", line=2)

    text = body.fillna("").astype(str).to_numpy().astype(str)
    missing = np.char.strip(text) == ""
    if missing.any():
        r, c = _first_bad(missing)
        raise ParseError("load_csv: ragged row or empty cell.", line=r + 2, column=c + 1)

    values = _exact_floats(text)
    bad = ~np.isfinite(values)
    if bad.any():
        r, c = _first_bad(bad)
        raise ParseError(f"load_csv: cell {body.iat[r, c]!r} is not a finite number.", line=r + 2, column=c + 1)

    logger.debug("load_csv: %s -> n=%d, p=%d", path, values.shape[0], grid.size)
    return Dataset(X=values[:, 1:], y=values[:, 0], grid=grid)


def format_float(value) -> str:
    """Shortest round-trip text of a float."""
    return repr(float(value))


def frame_to_text(frame):
    """CSV text of a DataFrame: no index, '\\n' line endings, shortest round-trip floats."""
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def dataset_frame(dataset):
    """The dataset as a DataFrame whose columns are ``y`` and the grid values."""
    columns = ["y"] + [format_float(t) for t in dataset.grid]
    return pd.DataFrame(np.column_stack([dataset.y, dataset.X]), columns=columns)


def save_csv(dataset, path):
    """
    Write a dataset in the format read by :func:`load_csv`.

    Parameters
    ----------
    dataset : Dataset
        Data to write.
    path : str or os.PathLike
        Destination; written atomically.
    """
    write_atomic(path, frame_to_text(dataset_frame(dataset)))


def save_table(frame, path):
    """Write a plot-ready table (any DataFrame) atomically as CSV."""
    write_atomic(path, frame_to_text(frame))
