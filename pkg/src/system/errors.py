class SisirError(RuntimeError):
    """
    Base class of every error raised by the toolkit.

    Each subclass carries a machine-readable ``category`` that the command line
    front end prints on failure, so scripts can branch on the kind of failure
    without parsing messages.

    Attributes
    ----------
    category : str
        Stable identifier of the error family (e.g. ``"singular-matrix"``).
    """
    category = "sisir-error"


class InvalidArgument(SisirError, ValueError):
    """A parameter is outside its admissible range (e.g. ``H > n``)."""
    category = "invalid-argument"


class InvalidData(SisirError, ValueError):
    """Input data violate a structural requirement (non-finite values, bad grid)."""
    category = "invalid-data"


class NumericalFailure(SisirError):
    """A numerical routine did not converge or a factorization failed."""
    category = "numerical-failure"


class SingularMatrix(SisirError):
    """A matrix that must be inverted is numerically singular."""
    category = "singular-matrix"


class RankDeficient(SisirError):
    """A basis that must have full column rank under a metric does not."""
    category = "rank-deficient"


class SimulationFailure(SisirError):
    """The simulator could not produce a valid dataset."""
    category = "simulation-failure"


class ParseError(SisirError):
    """
    A dataset file could not be parsed.

    Parameters
    ----------
    message : str
        Description of the problem.
    line : int, optional
        1-based line number in the file (the header is line 1).
    column : int, optional
        1-based column number in the file.
    """
    category = "parse-error"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where += f" (line {line}"
            where += f", column {column})" if column is not None else ")"
        super().__init__(message + where)


class ModelFileError(SisirError):
    """A model or collection file is truncated or does not follow the schema."""
    category = "model-file-error"


class UnsupportedVersion(ModelFileError):
    """A model or collection file declares a format version this code cannot read."""
    category = "unsupported-version"
