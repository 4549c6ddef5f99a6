from .container import Container
from .partition import IntervalPartition
