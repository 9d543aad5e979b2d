"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np

from flexsky import AttributeSpec, LinearConstraint, Relation, Schema, WeightPolytope

R0_ROWS = [[0.2, 0.3], [0.4, 0.5], [0.1, 0.8], [0.9, 0.9]]
R1_ROWS = [[0.1, 0.9], [0.5, 0.5], [0.9, 0.1]]


def schema(d: int) -> Schema:
    return Schema(tuple(AttributeSpec(f"a{j + 1}") for j in range(d)))


def make_relation(rows, ids=None) -> Relation:
    """Relation whose rows are already normalized, min-better values."""
    vals = np.asarray(rows, dtype=float)
    ids = tuple(ids) if ids is not None else tuple(range(len(vals)))
    return Relation(schema(vals.shape[1]), ids, vals, vals)


def r0() -> Relation:
    return make_relation(R0_ROWS, ids=("t1", "t2", "t3", "t4"))


def r1() -> Relation:
    return make_relation(R1_ROWS, ids=("t1", "t2", "t3"))


def w1_ge_w2() -> WeightPolytope:
    return WeightPolytope(2, (LinearConstraint((-1.0, 1.0), 0.0),))


def random_relation(rng, n: int, d: int, snap: int | None = None) -> Relation:
    """Uniform random relation; ``snap`` quantizes values to produce duplicates."""
    vals = rng.random((n, d))
    if snap:
        vals = np.round(vals * snap) / snap
    return make_relation(vals)


def region_through(rng, d: int, m: int, point=None):
    """m random halfspaces through one interior point; nonempty by construction."""
    point = rng.dirichlet(np.ones(d)) if point is None else np.asarray(point, dtype=float)
    constraints = []
    while len(constraints) < m:
        normal = rng.normal(size=d)
        norm = float(np.linalg.norm(normal))
        if norm == 0.0:
            continue
        normal = normal / norm
        constraints.append(LinearConstraint(tuple(normal), float(normal @ point)))
    return WeightPolytope(d, tuple(constraints)), tuple(constraints), point
