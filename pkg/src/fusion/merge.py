import logging

import numpy as np

from src.system import InvalidArgument

logger = logging.getLogger(__name__)


def _runs(mask):
    """Maximal runs of True as inclusive (first, last) index pairs."""
    padded = np.concatenate([[False], mask, [False]]).astype(int)
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[0::2], edges[1::2] - 1))


def merge_groups(partition, D1, D2):
    """
    Index ranges fused by the neighbor and squeeze rules.

    Parameters
    ----------
    partition : IntervalPartition
    D1, D2 : set of int
        Disjoint sets of strong non-zeros and strong zeros (0-based positions).

    Returns
    -------
    list of (int, int)
        Inclusive, disjoint, sorted ranges ``(first, last)`` with
        ``last > first``; overlapping rule groups are united.
    """
    D = partition.D
    D1, D2 = set(D1), set(D2)
    if D1 & D2:
        raise InvalidArgument(f"merge_step: D1 and D2 overlap on {sorted(D1 & D2)}.")
    if any(not 0 <= k < D for k in D1 | D2):
        raise InvalidArgument("merge_step: index outside the partition.")

    in1 = np.zeros(D, dtype=bool)
    in2 = np.zeros(D, dtype=bool)
    in1[list(D1)] = True
    in2[list(D2)] = True

    # link[k] fuses intervals k and k+1
    link = np.zeros(max(D - 1, 0), dtype=bool)

    # neighbor rule
    for mask in (in1, in2):
        for first, last in _runs(mask):
            link[first:last] = True

    # squeeze rule
    lengths = partition.lengths
    for k in range(D - 2):
        longer = lengths[k] + lengths[k + 2] > lengths[k + 1]
        if not longer:
            continue
        if (in1[k] and in1[k + 2] and not in2[k + 1]) or (in2[k] and in2[k + 2] and not in1[k + 1]):
            link[k:k + 2] = True

    return [(int(first), int(last) + 1) for first, last in _runs(link)]


def merge_step(partition, D1, D2):
    """
    Fuse intervals by the neighbor and squeeze rules.

    Neighbor rule: maximal runs of consecutive positions all in D1, or all in
    D2, are fused. Squeeze rule: positions ``k, k+1, k+2`` are fused when
    ``k`` and ``k+2`` are in D1 and ``k+1`` is not in D2 (or the same with D1
    and D2 exchanged) and ``l_k + l_{k+2} > l_{k+1}``. Groups from both rules
    that overlap are united before merging.

    Parameters
    ----------
    partition : IntervalPartition
        Left untouched.
    D1, D2 : set of int
        Disjoint strong non-zeros and strong zeros.

    Returns
    -------
    IntervalPartition
        A new partition; equal to the input when no group forms.

    Examples
    --------
    >>> from src.containers import IntervalPartition
    >>> part = IntervalPartition.singletons([0.0, 0.5, 1.0])
    >>> merge_step(part, {0, 1}, set()).boundaries
    array([[0, 1],
           [2, 2]])
    """
    groups = merge_groups(partition, D1, D2)
    merged = partition.merge([range(first, last + 1) for first, last in groups], copy=True)
    logger.debug("merge_step: D %d -> %d (%d groups)", partition.D, merged.D, len(groups))
    return merged
