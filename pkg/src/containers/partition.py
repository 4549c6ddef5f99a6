import numpy as np
from tabulate import tabulate

from src.containers.container import Container
from src.system import InvalidArgument, InvalidData, is_strictly_increasing


class IntervalPartition(Container):
    """
    An ordered, contiguous, non-overlapping cover of a grid by D intervals.

    Intervals are stored by the grid index of their first point: the item of
    key ``k`` is ``lo_k`` and interval ``k`` spans grid indices
    ``lo_k .. lo_{k+1} - 1`` (the last one ends at ``p - 1``). Keys are the
    0-based interval positions ``0 .. D-1``, so after every edit they are
    renumbered sequentially like the knot keys of a knot vector.

    Parameters
    ----------
    starts : array_like
        First grid index of every interval. Must start at 0 and be strictly
        increasing.
    grid : array_like
        Strictly increasing evaluation grid ``t_0 < ... < t_{p-1}``.
    name : str, optional
        Optional name identifier for display.

    Attributes
    ----------
    grid : ndarray
        The evaluation grid, shape (p,).
    items : ndarray
        Interval start indices, shape (D,).
    keys : ndarray
        Interval positions ``0 .. D-1``.

    Examples
    --------
    >>> part = IntervalPartition([0, 2], grid=[0.0, 0.25, 0.5, 0.75])
    >>> part.boundaries
    array([[0, 1],
           [2, 3]])
    >>> part.lengths
    array([0.25, 0.25])
    >>> part.find_interval(3)
    1

    Notes
    -----
    - Interval lengths are ``t_hi - t_lo``, so singleton intervals have length 0
    - Edits (``merge``) follow the copy-or-in-place convention of the package
    """

    def __init__(self, starts, grid, name=None):
        grid = np.asarray(grid, dtype=float)
        starts = np.asarray(starts, dtype=int)
        if grid.ndim != 1 or grid.size < 1:
            raise InvalidData("IntervalPartition: the grid must be a nonempty vector.")
        if not is_strictly_increasing(grid):
            raise InvalidData("IntervalPartition: the grid must be strictly increasing.")
        if starts.ndim != 1 or starts.size < 1 or starts[0] != 0:
            raise InvalidArgument("IntervalPartition: the first interval must start at index 0.")
        if not is_strictly_increasing(starts) or starts[-1] >= grid.size:
            raise InvalidArgument("IntervalPartition: interval starts must be increasing grid indices.")

        self.grid = grid
        super().__init__(items=starts, first_index=0, name=name)

    @classmethod
    def singletons(cls, grid, name=None):
        """One interval per grid point (D = p)."""
        grid = np.asarray(grid, dtype=float)
        return cls(np.arange(grid.size), grid, name=name)

    @classmethod
    def whole(cls, grid, name=None):
        """A single interval covering the whole grid (D = 1)."""
        return cls([0], grid, name=name)

    @classmethod
    def from_bounds(cls, bounds, grid, name=None):
        """
        Build a partition from ``[lo, hi]`` index pairs.

        Parameters
        ----------
        bounds : array_like
            Inclusive index ranges, shape (D, 2), in grid order.
        grid : array_like
            Evaluation grid.

        Raises
        ------
        InvalidArgument
            If the ranges do not tile ``0 .. p-1`` in order.
        """
        bounds = np.asarray(bounds, dtype=int).reshape(-1, 2)
        grid = np.asarray(grid, dtype=float)
        if bounds.shape[0] == 0 or bounds[-1, 1] != grid.size - 1 \
                or np.any(bounds[1:, 0] != bounds[:-1, 1] + 1) or np.any(bounds[:, 1] < bounds[:, 0]):
            raise InvalidArgument("IntervalPartition: bounds must tile the grid contiguously.")
        return cls(bounds[:, 0], grid, name=name)

    @property
    def p(self) -> int:
        """Number of grid points."""
        return self.grid.size

    @property
    def D(self) -> int:
        """Number of intervals."""
        return self.nr_items

    @property
    def starts(self) -> np.ndarray:
        return self.items

    @property
    def stops(self) -> np.ndarray:
        """Last grid index of every interval (inclusive)."""
        return np.append(self.items[1:] - 1, self.p - 1)

    @property
    def boundaries(self) -> np.ndarray:
        """Inclusive index ranges ``[lo_k, hi_k]``, shape (D, 2)."""
        return np.column_stack([self.starts, self.stops])

    @property
    def sizes(self) -> np.ndarray:
        """Number of grid points in every interval."""
        return self.stops - self.starts + 1

    @property
    def lengths(self) -> np.ndarray:
        """Interval lengths ``l_k = t_hi - t_lo``."""
        return self.grid[self.stops] - self.grid[self.starts]

    @property
    def membership(self) -> np.ndarray:
        """Interval position of every grid point, shape (p,)."""
        return np.repeat(np.arange(self.D), self.sizes)

    def find_interval(self, l):
        """
        Find the interval containing grid index ``l``.

        Parameters
        ----------
        l : int
            Grid index in ``0 .. p-1``.

        Returns
        -------
        int or None
            Interval position, or None if ``l`` is outside the grid.
        """
        if not 0 <= l < self.p:
            return None
        return int(np.searchsorted(self.starts, l, side='right') - 1)

    def merge(self, groups, copy=False, name=None):
        """
        Merge groups of consecutive intervals into single intervals.

        Parameters
        ----------
        groups : iterable of iterable of int
            Each group lists consecutive interval positions to fuse. Groups
            must be disjoint; intervals outside every group pass through.
        copy : bool, optional
            If True, returns a merged copy; if False, merges in-place.
        name : str, optional
            New name for the merged partition.

        Returns
        -------
        IntervalPartition
            Partition with the groups fused. Returns copy if copy=True.

        Examples
        --------
        >>> part = IntervalPartition.singletons([0.0, 0.5, 1.0])
        >>> part.merge([[0, 1]], copy=True).boundaries
        array([[0, 1],
               [2, 2]])
        """
        mycopy = self.deepcopy() if copy else self

        keep = np.ones(mycopy.D, dtype=bool)
        for group in groups:
            group = np.sort(np.asarray(list(group), dtype=int))
            if group.size == 0:
                continue
            assert np.all(np.diff(group) == 1), f"IntervalPartition.merge: group {group.tolist()} is not consecutive."
            assert 0 <= group[0] and group[-1] < mycopy.D, "IntervalPartition.merge: group out of range."
            keep[group[1:]] = False

        mycopy.items = mycopy.items[keep]
        mycopy.keys = np.arange(mycopy.items.size)
        if name is not None: mycopy.name = name
        return mycopy

    def __eq__(self, other):
        if not isinstance(other, IntervalPartition):
            return NotImplemented
        return np.array_equal(self.starts, other.starts) and np.array_equal(self.grid, other.grid)

    def __hash__(self):
        return hash((tuple(self.starts.tolist()), tuple(self.grid.tolist())))

    def __str__(self):
        return str([[float(self.grid[lo]), float(self.grid[hi])] for lo, hi in self.boundaries])

    def table(self, alpha=None):
        """
        Tabulate the intervals, optionally with their shrinkage coefficients.

        Parameters
        ----------
        alpha : array_like, optional
            One coefficient per interval.

        Returns
        -------
        str
            Formatted table with index range, grid range and coefficient.
        """
        rows = []
        for k, (lo, hi) in enumerate(self.boundaries):
            row = [k, lo, hi, self.grid[lo], self.grid[hi]]
            if alpha is not None:
                row += [alpha[k], alpha[k] != 0]
            rows.append(row)
        headers = ["Interval", "lo", "hi", "t_lo", "t_hi"]
        if alpha is not None:
            headers += ["alpha", "Selected"]
        return tabulate(rows, headers=headers, tablefmt='orgtbl')
