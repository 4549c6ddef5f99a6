import hashlib
import json
import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from src.containers import IntervalPartition
from src.fusion import ModelRecord
from src.system import InvalidArgument, InvalidData, ModelFileError, UnsupportedVersion, write_atomic

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def config_hash(config):
    """SHA-256 of the canonical JSON text of a configuration mapping."""
    text = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _dumps(payload):
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _matrix(values):
    """Shape and rows of a matrix; the shape keeps zero-column matrices readable."""
    values = np.asarray(values, dtype=float)
    return {"shape": list(values.shape), "values": values.tolist()}


def _read_matrix(entry, what):
    try:
        shape = tuple(int(s) for s in entry["shape"])
        values = np.asarray(entry["values"], dtype=float).reshape(shape)
    except (KeyError, TypeError, ValueError) as err:
        raise ModelFileError(f"{what}: ill-shaped matrix ({err}).") from None
    return values


def _field(payload, key, what):
    try:
        return payload[key]
    except (KeyError, TypeError):
        raise ModelFileError(f"{what}: missing field {key!r}.") from None


def _read_payload(path, kind):
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except json.JSONDecodeError as err:
        raise ModelFileError(f"{path}: not a complete model file ({err.msg} at line {err.lineno}).") from None
    if not isinstance(payload, dict):
        raise ModelFileError(f"{path}: expected a JSON object.")
    version = _field(payload, "format_version", path)
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"{path}: format_version {version!r} is not supported (expected {FORMAT_VERSION}).")
    if _field(payload, "kind", path) != kind:
        raise ModelFileError(f"{path}: expected a {kind} file, found {payload['kind']!r}.")
    return payload


def _partition(bounds, grid, what):
    try:
        return IntervalPartition.from_bounds(bounds, grid)
    except (InvalidArgument, InvalidData, ValueError, TypeError) as err:
        raise ModelFileError(f"{what}: invalid partition ({err}).") from None


@dataclass(frozen=True, eq=False)
class ModelFile:
    """
    A selected interval model, as written by ``select`` and read by ``project`` and ``report``.

    Attributes
    ----------
    grid : ndarray
    partition : IntervalPartition
    alpha_star : ndarray
        One shrinkage coefficient per interval.
    mu1_star, mu2 : float
    d : int
        Number of ridge directions.
    H : int
    A_sparse : ndarray
        Shrunk directions, shape (p, k) with ``k <= d``.
    cv_trace : tuple of (int, float)
        ``(D, cv_error)`` of every model of the fusion run.
    provenance : dict
        Seed, configuration hash and preprocessing.
    """
    grid: np.ndarray
    partition: IntervalPartition
    alpha_star: np.ndarray
    mu1_star: float
    mu2: float
    d: int
    H: int
    A_sparse: np.ndarray
    cv_trace: tuple = ()
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        p = self.grid.size
        if self.partition.p != p or self.alpha_star.size != self.partition.D:
            raise ModelFileError("ModelFile: partition, grid and coefficients disagree.")
        if self.A_sparse.ndim != 2 or self.A_sparse.shape[0] != p or self.A_sparse.shape[1] > self.d:
            raise ModelFileError(f"ModelFile: A_sparse has shape {self.A_sparse.shape} for p={p}, d={self.d}.")

    @property
    def selected(self) -> np.ndarray:
        """Flags of the intervals with a nonzero coefficient."""
        return self.alpha_star != 0

    @property
    def empty(self) -> bool:
        return not np.any(self.selected)

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "kind": "model",
            "grid": self.grid.tolist(),
            "partition": self.partition.boundaries.tolist(),
            "alpha_star": self.alpha_star.tolist(),
            "mu1_star": float(self.mu1_star),
            "mu2": float(self.mu2),
            "d": int(self.d),
            "H": int(self.H),
            "A_sparse": _matrix(self.A_sparse),
            "cv_trace": [[int(D), float(err)] for D, err in self.cv_trace],
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, payload, what="model"):
        grid = np.asarray(_field(payload, "grid", what), dtype=float)
        try:
            trace = tuple((int(D), float(err)) for D, err in _field(payload, "cv_trace", what))
            return cls(grid=grid,
                       partition=_partition(_field(payload, "partition", what), grid, what),
                       alpha_star=np.asarray(_field(payload, "alpha_star", what), dtype=float).ravel(),
                       mu1_star=float(_field(payload, "mu1_star", what)),
                       mu2=float(_field(payload, "mu2", what)),
                       d=int(_field(payload, "d", what)),
                       H=int(_field(payload, "H", what)),
                       A_sparse=_read_matrix(_field(payload, "A_sparse", what), what),
                       cv_trace=trace,
                       provenance=dict(_field(payload, "provenance", what)))
        except (TypeError, ValueError) as err:
            raise ModelFileError(f"{what}: malformed field ({err}).") from None

    def table(self):
        """Interval table with coefficients and selection flags."""
        return self.partition.table(self.alpha_star)

    def interval_frame(self):
        """Plot-ready interval table: index range, grid range, coefficient, selection flag."""
        bounds = self.partition.boundaries
        return pd.DataFrame({
            "lo": bounds[:, 0],
            "hi": bounds[:, 1],
            "t_lo": self.grid[bounds[:, 0]],
            "t_hi": self.grid[bounds[:, 1]],
            "alpha": self.alpha_star,
            "selected": self.selected.astype(int),
        })


@dataclass(frozen=True, eq=False)
class CollectionFile:
    """
    Every model of a fusion run, as written by ``fit``.

    Attributes
    ----------
    grid : ndarray
    H : int
    mu2 : float
    A : ndarray
        Ridge directions, shape (p, d).
    records : tuple of ModelRecord
    A_sparse : tuple of ndarray
        Shrunk directions of every record.
    selected : int
    truncated, stalled : bool
    provenance : dict
    """
    grid: np.ndarray
    H: int
    mu2: float
    A: np.ndarray
    records: tuple
    A_sparse: tuple
    selected: int
    truncated: bool = False
    stalled: bool = False
    provenance: dict = field(default_factory=dict)

    @classmethod
    def from_collection(cls, collection, grid, provenance=None):
        """Freeze a ModelCollection, computing the shrunk directions of every record."""
        fit = collection.fit
        return cls(grid=np.asarray(grid, dtype=float), H=collection.H, mu2=fit.mu2, A=fit.A,
                   records=collection.records,
                   A_sparse=tuple(r.directions(fit).A_sparse for r in collection.records),
                   selected=collection.selected, truncated=collection.truncated, stalled=collection.stalled,
                   provenance=dict(provenance or {}))

    @property
    def d(self) -> int:
        return self.A.shape[1]

    def cv_trace(self):
        return tuple((r.D, r.cv_error) for r in self.records)

    def select(self, index=None):
        """
        Model of one record, the CV-selected one by default.

        Returns
        -------
        ModelFile
        """
        index = self.selected if index is None else index
        if not 0 <= index < len(self.records):
            raise InvalidArgument(f"CollectionFile.select: no record {index}.")
        record = self.records[index]
        return ModelFile(grid=self.grid, partition=record.partition, alpha_star=record.alpha_star,
                         mu1_star=record.mu1_star, mu2=self.mu2, d=self.d, H=self.H,
                         A_sparse=self.A_sparse[index], cv_trace=self.cv_trace(),
                         provenance=dict(self.provenance, iteration=record.iteration))

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "kind": "collection",
            "grid": self.grid.tolist(),
            "H": int(self.H),
            "mu2": float(self.mu2),
            "A": _matrix(self.A),
            "records": [{
                "partition": r.partition.boundaries.tolist(),
                "alpha_star": r.alpha_star.tolist(),
                "mu1_star": float(r.mu1_star),
                "cv_error": float(r.cv_error),
                "iteration": int(r.iteration),
                "proportion": float(r.proportion),
                "appended": bool(r.appended),
                "A_sparse": _matrix(A_sparse),
            } for r, A_sparse in zip(self.records, self.A_sparse)],
            "selected": int(self.selected),
            "truncated": bool(self.truncated),
            "stalled": bool(self.stalled),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, payload, what="collection"):
        grid = np.asarray(_field(payload, "grid", what), dtype=float)
        records, A_sparse = [], []
        try:
            for k, entry in enumerate(_field(payload, "records", what)):
                where = f"{what} record {k}"
                alpha = np.asarray(_field(entry, "alpha_star", where), dtype=float).ravel()
                partition = _partition(_field(entry, "partition", where), grid, where)
                if alpha.size != partition.D:
                    raise ModelFileError(f"{where}: {alpha.size} coefficients for {partition.D} intervals.")
                records.append(ModelRecord(partition=partition, alpha_star=alpha,
                                           mu1_star=float(_field(entry, "mu1_star", where)),
                                           cv_error=float(_field(entry, "cv_error", where)),
                                           iteration=int(_field(entry, "iteration", where)),
                                           proportion=float(_field(entry, "proportion", where)),
                                           appended=bool(entry.get("appended", False))))
                A_sparse.append(_read_matrix(_field(entry, "A_sparse", where), where))
            A = _read_matrix(_field(payload, "A", what), what)
            selected = int(_field(payload, "selected", what))
            out = cls(grid=grid, H=int(_field(payload, "H", what)), mu2=float(_field(payload, "mu2", what)), A=A,
                      records=tuple(records), A_sparse=tuple(A_sparse), selected=selected,
                      truncated=bool(_field(payload, "truncated", what)),
                      stalled=bool(_field(payload, "stalled", what)),
                      provenance=dict(_field(payload, "provenance", what)))
        except (TypeError, ValueError) as err:
            raise ModelFileError(f"{what}: malformed field ({err}).") from None
        if not out.records or not 0 <= selected < len(out.records):
            raise ModelFileError(f"{what}: selected index {selected} outside the records.")
        if A.shape[0] != grid.size:
            raise ModelFileError(f"{what}: A has {A.shape[0]} rows for {grid.size} grid points.")
        return out


def save_model(model, path):
    """Write a ModelFile as versioned, sorted, indented JSON (atomically)."""
    write_atomic(path, _dumps(model.to_dict()))
    logger.debug("save_model: %s", path)


def load_model(path):
    """
    Read a file written by :func:`save_model`.

    Raises
    ------
    UnsupportedVersion
        If ``format_version`` is not 1.
    ModelFileError
        If the file is truncated, is a collection, or violates the schema.
    """
    return ModelFile.from_dict(_read_payload(path, "model"), what=str(path))


def save_collection(collection_file, path):
    """Write a CollectionFile as versioned, sorted, indented JSON (atomically)."""
    write_atomic(path, _dumps(collection_file.to_dict()))
    logger.debug("save_collection: %s", path)


def load_collection(path):
    """Read a file written by :func:`save_collection`; errors as :func:`load_model`."""
    return CollectionFile.from_dict(_read_payload(path, "collection"), what=str(path))


def save_tune(result, path, provenance=None):
    """Write a TuneResult: the chosen pair, the alternation trace and both criterion tables."""
    payload = {
        "format_version": FORMAT_VERSION,
        "kind": "tune",
        "mu2_values": list(result.mu2_values),
        "mu2_star": float(result.mu2_star),
        "d_star": int(result.d_star),
        "trace": [[float(mu2), int(d)] for mu2, d in result.trace],
        "stabilized": bool(result.stabilized),
        "cv_err": _matrix(result.cv_err),
        "r_hat": _matrix(result.r_hat),
        "provenance": dict(provenance or {}),
    }
    write_atomic(path, _dumps(payload))


def load_tune(path):
    """
    Chosen ``(mu2*, d*)`` of a file written by :func:`save_tune`.

    Returns
    -------
    mu2_star : float
    d_star : int
    """
    payload = _read_payload(path, "tune")
    try:
        return float(_field(payload, "mu2_star", path)), int(_field(payload, "d_star", path))
    except (TypeError, ValueError) as err:
        raise ModelFileError(f"{path}: malformed field ({err}).") from None
