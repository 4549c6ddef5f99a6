import logging
import os
from concurrent.futures import ThreadPoolExecutor

from src.system.errors import InvalidArgument

logger = logging.getLogger(__name__)

THREADS_ENV = "SISIR_THREADS"


def thread_count():
    """
    Number of worker threads for fold-parallel computations.

    Read from the ``SISIR_THREADS`` environment variable; defaults to 1.

    Returns
    -------
    int
        A positive worker count.

    Raises
    ------
    InvalidArgument
        If the variable is set to anything but a positive integer.
    """
    raw = os.environ.get(THREADS_ENV, "1").strip()
    try:
        n = int(raw)
    except ValueError:
        raise InvalidArgument(f"{THREADS_ENV} must be a positive integer, got {raw!r}.") from None
    if n < 1:
        raise InvalidArgument(f"{THREADS_ENV} must be a positive integer, got {n}.")
    return n


def ordered_map(func, items, workers=None):
    """
    Apply ``func`` to every item, possibly on a thread pool, keeping input order.

    The per-item computations must be pure and independent. Results come back
    in the order of ``items`` whatever the number of workers, so reductions
    over them are deterministic.

    Parameters
    ----------
    func : callable
        Function of one argument.
    items : iterable
        Arguments.
    workers : int, optional
        Worker count; defaults to :func:`thread_count`.

    Returns
    -------
    list
        ``[func(item) for item in items]``.
    """
    items = list(items)
    workers = thread_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug("ordered_map: %d items on %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        futures = [ex.submit(func, item) for item in items]
        return [f.result() for f in futures]
