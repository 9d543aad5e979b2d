"""Dominance kernels: classic Pareto dominance and dominance over a weight region.

Both relations assume normalized, min-better value vectors. Region dominance
("F-dominance") of t over s holds when every scoring function in the region
weakly prefers t and at least one strictly prefers it; with weighted-sum
scoring this reduces to the sign of max/min of w . (t - s) over the region,
both attained at vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import DistinctView
from .errors import BudgetError, EmptyRegionError
from .preference import WeightPolytope

EPS_DOM = 1e-9


@dataclass(frozen=True)
class DominanceVerdict:
    """Outcome of a region-dominance test, with a diagnostic weight vector.

    On ``dominates=True`` the witness is a weight proving strict preference;
    on a failure of the universal test it is a weight refuting dominance. It
    is ``None`` when the test fails only for lack of strict preference.
    """

    dominates: bool
    witness: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.dominates


def _as_pair(t, s) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(t, dtype=float).ravel()
    s = np.asarray(s, dtype=float).ravel()
    if t.size != s.size:
        raise ValueError(f"arity mismatch: {t.size} vs {s.size}")
    return t, s


def pareto_dominates(t, s) -> bool:
    """True iff t is at least as good everywhere and strictly better somewhere."""
    t, s = _as_pair(t, s)
    return bool(np.all(t <= s) and np.any(t < s))


def f_dominates(t, s, polytope: WeightPolytope, eps: float = EPS_DOM) -> DominanceVerdict:
    """Test whether t dominates s under every weight vector of the region."""
    t, s = _as_pair(t, s)
    if t.size != polytope.dimension:
        raise ValueError("vector arity does not match the polytope dimension")
    delta = t - s
    worst, w_max = polytope.lp_max(delta)
    if worst > eps:
        return DominanceVerdict(False, w_max)
    best_neg, w_min = polytope.lp_max(-delta)
    if -best_neg < -eps:
        return DominanceVerdict(True, w_min)
    return DominanceVerdict(False, None)


def vertex_scores(vectors: np.ndarray, polytope: WeightPolytope) -> np.ndarray | None:
    """Score matrix of the vectors at every polytope vertex, or None beyond budget."""
    try:
        verts = polytope.vertices()
    except BudgetError:
        return None
    if verts.shape[0] == 0:
        raise EmptyRegionError("empty weight region")
    return vectors @ verts.T


def f_dominator_mask(scores: np.ndarray, row: int, eps: float = EPS_DOM) -> np.ndarray:
    """Boolean mask of the score-matrix rows that dominate ``row`` over the region.

    ``scores[i, j]`` is the score of vector i at vertex j; the row itself is
    never marked (its score differences are identically zero).
    """
    diff = scores - scores[row]
    return (diff.max(axis=1) <= eps) & (diff.min(axis=1) < -eps)


def f_dominator_counts(scores: np.ndarray, eps: float = EPS_DOM, chunk: int = 256) -> np.ndarray:
    """Per-row count of region-dominating rows, over the whole score matrix.

    Works on candidate blocks with a running max/min across the vertex axis,
    which keeps the heavy operations on large flat matrices.
    """
    m, n_vert = scores.shape
    counts = np.zeros(m, dtype=np.int64)
    for start in range(0, m, chunk):
        block = scores[start : start + chunk]
        widest = narrowest = scores[:, 0][None, :] - block[:, 0][:, None]
        for j in range(1, n_vert):
            diff = scores[:, j][None, :] - block[:, j][:, None]
            widest = np.maximum(widest, diff)
            narrowest = np.minimum(narrowest, diff)
        dominating = (widest <= eps) & (narrowest < -eps)
        counts[start : start + chunk] = dominating.sum(axis=1)
    return counts


def dominance_count(
    vector,
    view: DistinctView,
    polytope: WeightPolytope | None = None,
    eps: float = EPS_DOM,
) -> int:
    """Number of distinct vectors in the view dominating ``vector``.

    With ``polytope=None`` the count uses Pareto dominance; otherwise it uses
    region dominance over the given polytope.
    """
    row = view.position(vector)
    vectors = view.vectors
    if polytope is None:
        target = vectors[row]
        mask = np.all(vectors <= target, axis=1) & np.any(vectors < target, axis=1)
        return int(mask.sum())
    if polytope.is_empty():
        raise EmptyRegionError("empty weight region")
    scores = vertex_scores(vectors, polytope)
    if scores is not None:
        return int(f_dominator_mask(scores, row, eps).sum())
    target = vectors[row]
    return sum(
        1
        for i in range(vectors.shape[0])
        if i != row and f_dominates(vectors[i], target, polytope, eps).dominates
    )
