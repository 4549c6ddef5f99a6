import os
import tempfile

import numpy as np


def is_strictly_increasing(a):
    """
    Check if an array or list is sorted in strictly increasing order.

    This is the requirement on an evaluation grid: no two grid points may
    coincide and they must be listed from left to right.

    Parameters
    ----------
    a : array_like
        Input sequence.

    Returns
    -------
    bool
        True if every element is strictly less than the next one.

    Examples
    --------
    >>> is_strictly_increasing([0.0, 0.25, 0.5])
    True
    >>> is_strictly_increasing([0.0, 0.5, 0.5])
    False
    >>> is_strictly_increasing([0.0, 0.5, 0.25])
    False
    """
    a = np.asarray(a)
    return bool(np.all(a[1:] > a[:-1]))


def all_finite(*arrays):
    """
    Check that every entry of every given array is finite.

    Parameters
    ----------
    *arrays : array_like
        Arrays to check.

    Returns
    -------
    bool
        False as soon as one array holds a NaN or an infinity.
    """
    return all(bool(np.all(np.isfinite(np.asarray(a, dtype=float)))) for a in arrays)


def write_atomic(path, text):
    """
    Write ``text`` to ``path`` through a temporary file and a rename.

    Readers never observe a partially written file: the content goes to a
    temporary file in the target directory, which then replaces ``path``.

    Parameters
    ----------
    path : str or os.PathLike
        Destination file.
    text : str
        Full file content.
    """
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
