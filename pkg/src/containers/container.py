import numpy as np

from src.system import Copyable


class Container(Copyable):
    """
    Items stored under unique ascending integer keys.

    Base of :class:`IntervalPartition`, whose items are interval start
    indices keyed by interval position.

    Parameters
    ----------
    items : array_like
        Stored values.
    keys : array_like, optional
        One key per item, ascending. Defaults to ``first_index, first_index + 1, ...``.
    first_index : int, optional
        First sequential key when ``keys`` is omitted (default 0).
    name : str, optional
        Label shown by ``repr``.

    Examples
    --------
    >>> Container([100, 200, 300], keys=[5, 6, 7])[6]
    200
    """

    def __init__(self, items, keys=None, first_index=0, name=None):
        self.items = np.asarray(items)
        self.keys = np.arange(self.items.size) + first_index if keys is None else np.asarray(keys)
        assert self.keys.size == self.items.size, "Container: one key per item is required."
        self.name = name

    @property
    def nr_items(self) -> int:
        return self.keys.size

    def __len__(self):
        return self.nr_items

    def __getitem__(self, keys):
        # keys are ascending, so a binary search finds positions
        return self.items[np.searchsorted(self.keys, np.asarray(keys))]

    def __str__(self):
        return str(dict(zip(self.keys.tolist(), self.items.tolist()))) if self.nr_items else "empty"

    def __repr__(self):
        label = f" {self.name}" if self.name is not None else ""
        return f"[{self.__class__.__name__}]{label} = {self}"
