import copy
import logging

logger = logging.getLogger(__name__)


class Copyable:
    """
    A mixin class providing object copying and a per-class registry.

    Subclasses get ``deepcopy()`` for the copy-or-in-place editing convention
    used across the package (methods taking ``copy=True`` work on
    ``self.deepcopy()``, otherwise on ``self``), and a class-level registry
    storing deep copies of expensive-to-build instances under hashable keys.

    Attributes
    ----------
    registry : dict
        Class-level dictionary of cached instances. Subclasses that use the
        cache must declare their own ``registry = dict()`` so entries do not
        leak between classes.

    Examples
    --------
    >>> class Factor(Copyable):
    ...     registry = dict()
    ...     def __init__(self, value):
    ...         self.value = value
    >>> Factor.store('k', Factor(3))
    >>> Factor.retrieve('k').value
    3
    >>> Factor.retrieve('missing') is None
    True

    Notes
    -----
    - The registry stores and returns deep copies, so cached items cannot be
      mutated through a handle obtained from ``retrieve``
    - Overwriting an existing key is logged at debug level
    """

    registry = dict()

    def deepcopy(self):
        """Independent deep copy of this object."""
        return copy.deepcopy(self)

    @classmethod
    def retrieve(cls, key):
        """Deep copy of the object cached under ``key``, or None on a miss."""
        return cls.registry[key].deepcopy() if key in cls.registry else None

    @classmethod
    def store(cls, key, item):
        """Cache a deep copy of ``item`` under the hashable ``key``."""
        if key in cls.registry:
            logger.debug("%s.store: overwriting key %r", cls.__name__, key)
        cls.registry[key] = item.deepcopy()

    @classmethod
    def clear(cls):
        """Drop every cached object of this class."""
        cls.registry.clear()
