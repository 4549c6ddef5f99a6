from .copyable import Copyable
from .datatypes import NumericValues
from .errors import (SisirError, InvalidArgument, InvalidData, NumericalFailure, SingularMatrix,
                     RankDeficient, SimulationFailure, ParseError, ModelFileError, UnsupportedVersion)
from .misc import is_strictly_increasing, all_finite, write_atomic
from .parallel import ordered_map, thread_count
