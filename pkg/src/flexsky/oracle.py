"""Brute-force reference implementations used to cross-check the engine.

These are deliberately written against the definitions, not against the
engine's code paths: an all-pairs skyline filter, a sampling check for
region dominance, a grid search for potential optimality, and a full-sort
top-k. Where exhaustive search is impossible the verdicts are one-sided:
a violating sample or a grid witness is conclusive, its absence is only
evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Relation
from .dominance import EPS_DOM
from .errors import EmptyRegionError
from .preference import WeightPolytope


@dataclass(frozen=True)
class OracleConfig:
    sample_count: int = 10_000
    grid_step: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if not (0.0 < self.grid_step < 1.0):
            raise ValueError("grid_step must lie in (0, 1)")


def oracle_skyline(relation: Relation) -> frozenset:
    """Culling dominance filter over the raw tuple rows.

    Takes the first remaining tuple as a candidate, discards everything it
    dominates, keeps it when nothing left dominates it, and repeats. A
    dominator of any later candidate can never have been discarded earlier,
    so checking candidates against the current remainder is exhaustive.
    """
    data = relation.normalized
    if data is None:
        raise ValueError("relation is not normalized")
    front = []
    remaining = np.arange(relation.n)
    while remaining.size:
        candidate = data[remaining[0]]
        rest = data[remaining]
        culled = (candidate <= rest).all(axis=1) & (candidate < rest).any(axis=1)
        keep = remaining[~culled]
        survivors = data[keep]
        dominated = bool(((survivors <= candidate).all(axis=1) & (survivors < candidate).any(axis=1)).any())
        if not dominated:
            front.append(relation.ids[remaining[0]])
        remaining = keep[1:]
    return frozenset(front)


def oracle_f_dominates(t, s, polytope: WeightPolytope, cfg: OracleConfig) -> bool:
    """Sampled check of region dominance of t over s.

    Samples cover the vertices, their midpoints and interior points, so a
    violating sample conclusively refutes dominance and the strict-preference
    witness is found whenever one exists at a vertex.
    """
    if polytope.is_empty():
        raise EmptyRegionError("empty weight region")
    delta = np.asarray(t, dtype=float) - np.asarray(s, dtype=float)
    samples = polytope.sample(cfg.sample_count, cfg.seed)
    gaps = samples @ delta
    return bool(np.all(gaps <= EPS_DOM) and np.any(gaps < -EPS_DOM))


def _feasible_grid(polytope: WeightPolytope, step: float) -> np.ndarray:
    """Deterministic grid over the region: free coordinates stepped, last implied."""
    d = polytope.dimension
    if d == 1:
        grid = np.array([[1.0]])
    else:
        axis = np.linspace(0.0, 1.0, round(1.0 / step) + 1)
        mesh = np.meshgrid(*([axis] * (d - 1)), indexing="ij")
        free = np.stack(mesh, axis=-1).reshape(-1, d - 1)
        last = 1.0 - free.sum(axis=1)
        grid = np.hstack([free, last[:, None]])
        grid = grid[last >= -polytope.eps_feas]
    if len(polytope.constraints):
        a = np.array([c.coeffs for c in polytope.constraints])
        b = np.array([c.bound for c in polytope.constraints])
        grid = grid[np.all(grid @ a.T <= b + polytope.eps_feas, axis=1)]
    return grid


def oracle_po_member(t, relation: Relation, polytope: WeightPolytope, cfg: OracleConfig) -> bool:
    """Grid search for a weight making t the strict unique minimizer.

    A hit is conclusive; a miss may overlook a witness region thinner than
    the grid step.
    """
    if polytope.is_empty():
        raise EmptyRegionError("empty weight region")
    view = relation.distinct
    row = view.position(t)
    grid = _feasible_grid(polytope, cfg.grid_step)
    if grid.shape[0] == 0:
        return False
    if len(view) == 1:
        return True
    scores = view.vectors @ grid.T
    others = np.delete(scores, row, axis=0)
    return bool(np.any(scores[row] < others.min(axis=0)))


def oracle_topk(relation: Relation, weights, k: int) -> list:
    """Score every tuple, stable-sort by (score, id), return the first k ids."""
    data = relation.normalized
    if data is None:
        raise ValueError("relation is not normalized")
    scores = data @ np.asarray(weights, dtype=float)
    order = sorted(range(relation.n), key=lambda i: (scores[i], relation.ids[i]))
    return [relation.ids[i] for i in order[:k]]
