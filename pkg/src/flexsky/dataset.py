"""Dataset model: schemas, relations, CSV ingestion, normalization, synthetic data.

Every query operator in this package consumes *normalized* relations: all
attribute values rescaled to [0, 1] with the convention that lower values are
better. Raw data may prefer larger values on some attributes (e.g. performance),
so each attribute carries an optimization direction and :func:`normalize` flips
MAX attributes while rescaling.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import CsvError


class Direction(Enum):
    """Whether smaller or larger raw values of an attribute are preferred."""

    MIN = "min"
    MAX = "max"


class Distribution(Enum):
    """Synthetic data families used by the benchmark harness."""

    INDEPENDENT = "independent"
    CORRELATED = "correlated"
    ANTICORRELATED = "anticorrelated"


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    direction: Direction = Direction.MIN

    def __post_init__(self):
        if not self.name:
            raise ValueError("attribute name must be non-empty")
        if not isinstance(self.direction, Direction):
            object.__setattr__(self, "direction", Direction(self.direction))


@dataclass(frozen=True)
class Schema:
    """Ordered attribute list; arity is the dimensionality of the value space."""

    attributes: tuple[AttributeSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if len(self.attributes) < 1:
            raise ValueError("schema needs at least one attribute")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise ValueError("attribute names must be unique")

    @property
    def arity(self) -> int:
        return len(self.attributes)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def index(self, name: str) -> int:
        for i, attr in enumerate(self.attributes):
            if attr.name == name:
                return i
        raise KeyError(name)


def parse_schema(text: str) -> Schema:
    """Parse the CLI schema syntax ``"name:min|max,name:min|max,..."``."""
    attrs = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            raise ValueError("empty attribute in schema")
        name, _, direction = piece.partition(":")
        direction = direction.strip().lower() or "min"
        if direction not in ("min", "max"):
            raise ValueError(f"bad direction {direction!r} for attribute {name!r}")
        attrs.append(AttributeSpec(name.strip(), Direction(direction)))
    return Schema(tuple(attrs))


class RawTuple(NamedTuple):
    id: object
    values: tuple[float, ...]


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Relation:
    """An immutable set of identified numeric tuples over a schema.

    ``values`` holds the raw data, one row per tuple. ``normalized`` is either
    ``None`` (raw relation) or an equally shaped array in [0, 1] oriented so
    that lower is better on every attribute.
    """

    schema: Schema
    ids: tuple
    values: np.ndarray
    normalized: np.ndarray | None = None

    def __post_init__(self):
        values = _readonly(self.values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "ids", tuple(self.ids))
        n, d = len(self.ids), self.schema.arity
        if values.shape != (n, d):
            raise ValueError(f"values shape {values.shape} does not match {n} ids x {d} attributes")
        if n and not np.all(np.isfinite(values)):
            raise ValueError("relation values must be finite")
        if len(set(self.ids)) != n:
            raise ValueError("tuple ids must be unique")
        if self.normalized is not None:
            norm = _readonly(self.normalized)
            if norm.shape != (n, d):
                raise ValueError("normalized array shape mismatch")
            if n and (norm.min() < 0.0 or norm.max() > 1.0):
                raise ValueError("normalized values must lie in [0, 1]")
            object.__setattr__(self, "normalized", norm)

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def d(self) -> int:
        return self.schema.arity

    @property
    def tuples(self) -> tuple[RawTuple, ...]:
        return tuple(RawTuple(i, tuple(row)) for i, row in zip(self.ids, self.values))

    @cached_property
    def distinct(self) -> "DistinctView":
        return distinct_view(self)


@dataclass(frozen=True, eq=False)
class DistinctView:
    """Distinct normalized value vectors, each with the ids that share it.

    Dominance-based operators compare distinct vectors only; a selected vector
    expands to its whole id group in results.
    """

    vectors: np.ndarray
    groups: tuple[tuple, ...]
    _index: dict = field(repr=False)

    @classmethod
    def build(cls, vectors: np.ndarray, ids: Sequence) -> "DistinctView":
        seen: dict[tuple, int] = {}
        rows: list[int] = []
        groups: list[list] = []
        for pos, vec in enumerate(vectors):
            key = tuple(vec)
            if key in seen:
                groups[seen[key]].append(ids[pos])
            else:
                seen[key] = len(rows)
                rows.append(pos)
                groups.append([ids[pos]])
        distinct = _readonly(vectors[rows] if rows else np.empty((0, vectors.shape[1])))
        return cls(
            vectors=distinct,
            groups=tuple(tuple(sorted(g)) for g in groups),
            _index={tuple(v): i for i, v in enumerate(distinct)},
        )

    def __len__(self) -> int:
        return len(self.groups)

    def position(self, vector) -> int:
        """Row index of an exact vector match; raises if the vector is absent."""
        key = tuple(np.asarray(vector, dtype=float))
        if key not in self._index:
            raise ValueError("vector does not occur in the relation")
        return self._index[key]

    def ids_for(self, rows: Iterable[int]) -> list:
        return sorted(x for r in rows for x in self.groups[r])


def distinct_view(relation: Relation) -> DistinctView:
    """Group tuple ids by exact equality of their normalized vectors."""
    if relation.normalized is None:
        raise ValueError("relation is not normalized")
    return DistinctView.build(relation.normalized, relation.ids)


def normalize(relation: Relation) -> Relation:
    """Rescale every attribute to [0, 1] with lower-is-better orientation.

    MIN attributes map v to (v - min) / (max - min); MAX attributes flip to
    (max - v) / (max - min). A constant attribute maps to 0.0 everywhere so it
    stays neutral for every operator.
    """
    if relation.n == 0:
        raise ValueError("cannot normalize an empty relation")
    values = relation.values
    out = np.empty_like(values)
    for j, attr in enumerate(relation.schema.attributes):
        col = values[:, j]
        lo, hi = col.min(), col.max()
        if hi == lo:
            out[:, j] = 0.0
        elif attr.direction is Direction.MIN:
            out[:, j] = (col - lo) / (hi - lo)
        else:
            out[:, j] = (hi - col) / (hi - lo)
    return Relation(relation.schema, relation.ids, relation.values, out)


def ingest_csv(path: str, schema: Schema, id_column: str | None = None) -> Relation:
    """Read a comma-separated file with a header row into a raw relation.

    Header names must cover every schema attribute (order may differ; extra
    columns are ignored). Ids come from ``id_column`` when given, otherwise
    from the 0-based data row index. Every referenced cell must parse as a
    finite real; violations report the row and column.
    """
    if not os.path.isfile(path):
        raise CsvError(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise CsvError("empty file: missing header row")
        header = [h.strip() for h in header]
        col_of = {name: i for i, name in enumerate(header)}
        if len(col_of) != len(header):
            raise CsvError("duplicate column name in header")
        missing = [name for name in schema.names if name not in col_of]
        if missing:
            raise CsvError(f"unknown column {missing[0]!r}")
        if id_column is not None and id_column not in col_of:
            raise CsvError(f"unknown column {id_column!r}")
        cols = [col_of[name] for name in schema.names]
        id_col = col_of[id_column] if id_column is not None else None

        ids: list = []
        rows: list[list[float]] = []
        for rownum, row in enumerate(reader):
            if len(row) != len(header):
                raise CsvError(f"row {rownum}: expected {len(header)} cells, found {len(row)}")
            parsed = []
            for name, c in zip(schema.names, cols):
                cell = row[c].strip()
                try:
                    value = float(cell)
                except ValueError:
                    raise CsvError(f"row {rownum}, column {name!r}: not a number: {cell!r}") from None
                if not math.isfinite(value):
                    raise CsvError(f"row {rownum}, column {name!r}: non-finite value {cell!r}")
                parsed.append(value)
            ids.append(row[id_col].strip() if id_col is not None else rownum)
            rows.append(parsed)
    values = np.array(rows, dtype=float).reshape(len(rows), schema.arity)
    return Relation(schema, tuple(ids), values)


_DIST_STREAM = {
    Distribution.INDEPENDENT: 0,
    Distribution.CORRELATED: 1,
    Distribution.ANTICORRELATED: 2,
}


def gen_synthetic(n: int, d: int, dist: Distribution | str, seed: int) -> Relation:
    """Generate ``n`` points in [0, 1]^d, deterministic given the seed.

    INDEPENDENT draws attributes i.i.d. uniform. CORRELATED adds per-attribute
    noise around a shared latent factor, so attributes move together and the
    skyline stays small. ANTICORRELATED recenters each point onto the
    hyperplane sum(v) = d/2 before adding noise, concentrating mass along the
    anti-diagonal where skylines are large. Values double as their own
    normalization (already in [0, 1], all attributes MIN).
    """
    dist = Distribution(dist)
    if n < 1:
        raise ValueError("n must be >= 1")
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = np.random.default_rng([_DIST_STREAM[dist], seed])
    if dist is Distribution.INDEPENDENT:
        vals = rng.random((n, d))
    elif dist is Distribution.CORRELATED:
        latent = rng.random((n, 1))
        vals = latent + rng.normal(0.0, 0.15, (n, d))
        vals = np.abs(vals)  # reflect at the boundaries instead of clipping,
        vals = np.clip(1.0 - np.abs(1.0 - vals), 0.0, 1.0)  # no corner mass
    else:
        raw = rng.random((n, d))
        centered = raw - raw.mean(axis=1, keepdims=True)
        vals = np.clip(centered + 0.5 + rng.normal(0.0, 0.05, (n, d)), 0.0, 1.0)
    schema = Schema(tuple(AttributeSpec(f"a{j + 1}") for j in range(d)))
    return Relation(schema, tuple(range(n)), vals, vals)
