import numpy as np

NumericValues = (int, float, np.integer, np.floating)
"""
A tuple of real scalar types accepted wherever a function also takes arrays.

Used with ``isinstance()`` to decide whether a result should be returned as a
Python ``float`` (scalar input) or as an ``ndarray`` (array input), e.g. by the
Matérn kernel.

Notes
-----
- ``bool`` is a subclass of ``int`` and therefore matches; callers that care
  reject it explicitly
- Complex types are deliberately absent: every quantity in the package is real
"""
