"""Query operators: skyline, flexible skylines (ND/PO), top-k, lexicographic, skybands.

All operators consume a normalized relation, compare distinct value vectors
only, and expand a selected vector to its full id group in the result. Outputs
are deterministic: unscored operators order by ascending id, top-k orders by
ascending score with ties broken by ascending id.
"""

from __future__ import annotations

import time
import weakref
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import simplex
from .dataset import DistinctView, Relation
from .dominance import EPS_DOM, f_dominates, f_dominator_counts, vertex_scores
from .errors import BudgetError, EmptyRegionError
from .preference import LinearConstraint, ScoringFunction, WeightPolytope

EPS_PO = 1e-9  # potential-optimality margin: the best strict-win gap must exceed it


class Kind(Enum):
    SKY = "sky"
    ND = "nd"
    PO = "po"
    TOPK = "topk"
    LEX = "lex"
    SKYBAND = "skyband"
    F_SKYBAND = "fskyband"


@dataclass(frozen=True)
class ResultMeta:
    kind: Kind
    input_size: int
    dimension: int
    distinct: int
    vertex_count: int | None
    elapsed_ms: float


@dataclass(frozen=True, eq=False)
class ResultSet:
    """Ordered (id, score) entries plus run metadata; scores are None when unscored."""

    entries: tuple[tuple[object, float | None], ...]
    meta: ResultMeta

    @property
    def ids(self) -> tuple:
        return tuple(i for i, _ in self.entries)

    @property
    def id_set(self) -> frozenset:
        return frozenset(self.ids)

    def __len__(self) -> int:
        return len(self.entries)


def _require_normalized(relation: Relation) -> np.ndarray:
    if relation.normalized is None:
        raise ValueError("relation is not normalized; run dataset.normalize first")
    return relation.normalized


def _vertex_count(polytope: WeightPolytope | None) -> int | None:
    if polytope is None:
        return None
    try:
        return int(polytope.vertices().shape[0])
    except BudgetError:
        return None


def _result(
    kind: Kind,
    relation: Relation,
    entries,
    started: float,
    polytope: WeightPolytope | None = None,
) -> ResultSet:
    meta = ResultMeta(
        kind=kind,
        input_size=relation.n,
        dimension=relation.d,
        distinct=len(relation.distinct) if relation.normalized is not None else relation.n,
        vertex_count=_vertex_count(polytope),
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
    )
    return ResultSet(tuple(entries), meta)


def _unscored(view: DistinctView, rows) -> list[tuple[object, None]]:
    return [(i, None) for i in view.ids_for(rows)]


# Skyline ----------------------------------------------------------------------


def _pareto_front_rows_naive(vectors: np.ndarray) -> list[int]:
    keep = []
    for i in range(vectors.shape[0]):
        t = vectors[i]
        dominated = bool(np.any(np.all(vectors <= t, axis=1) & np.any(vectors < t, axis=1)))
        if not dominated:
            keep.append(i)
    return keep


def _pareto_front_rows_sorted(vectors: np.ndarray, groups) -> list[int]:
    # A dominator has a strictly smaller coordinate sum, so after sorting by
    # sum it is enough to filter each vector against the front kept so far.
    m = vectors.shape[0]
    sums = vectors.sum(axis=1)
    order = sorted(range(m), key=lambda i: (sums[i], groups[i][0]))
    front = np.empty_like(vectors)
    kept_rows: list[int] = []
    for i in order:
        t = vectors[i]
        k = len(kept_rows)
        if k:
            head = front[:k]
            if bool(np.any(np.all(head <= t, axis=1) & np.any(head < t, axis=1))):
                continue
        front[k] = t
        kept_rows.append(i)
    return sorted(kept_rows)


_front_cache: "weakref.WeakKeyDictionary[DistinctView, list[int]]" = weakref.WeakKeyDictionary()


def _pareto_front_rows(view: DistinctView, algo: str = "sorted") -> list[int]:
    if algo == "naive":
        return _pareto_front_rows_naive(view.vectors)
    if algo != "sorted":
        raise ValueError(f"unknown skyline algorithm {algo!r}")
    rows = _front_cache.get(view)
    if rows is None:
        rows = _pareto_front_rows_sorted(view.vectors, view.groups)
        _front_cache[view] = rows
    return list(rows)


def skyline(relation: Relation, algo: str = "sorted") -> ResultSet:
    """Ids whose distinct vectors no other distinct vector Pareto-dominates."""
    started = time.perf_counter()
    _require_normalized(relation)
    view = relation.distinct
    rows = _pareto_front_rows(view, algo)
    return _result(Kind.SKY, relation, _unscored(view, rows), started)


# Flexible skylines -------------------------------------------------------------


_nd_cache: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _nd_rows(view: DistinctView, polytope: WeightPolytope, eps: float) -> list[int]:
    """Rows not region-dominated by any other row.

    Pareto dominance implies region dominance (weights are nonnegative), so
    the computation first reduces to skyline rows; transitivity makes checking
    survivors against each other sufficient. Results are memoized per
    (view, polytope, eps): both inputs are immutable.
    """
    per_polytope = _nd_cache.setdefault(view, weakref.WeakKeyDictionary())
    cached = per_polytope.get(polytope)
    if cached is not None and cached[0] == eps:
        return list(cached[1])
    rows = _nd_rows_uncached(view, polytope, eps)
    per_polytope[polytope] = (eps, rows)
    return list(rows)


def _nd_rows_uncached(view: DistinctView, polytope: WeightPolytope, eps: float) -> list[int]:
    sky_rows = _pareto_front_rows(view)
    candidates = view.vectors[sky_rows]
    scores = vertex_scores(candidates, polytope)
    if scores is not None:
        counts = f_dominator_counts(scores, eps)
        return [row for pos, row in enumerate(sky_rows) if counts[pos] == 0]
    out: list[int] = []
    for pos, row in enumerate(sky_rows):
        target = candidates[pos]
        dominated = any(
            f_dominates(candidates[other], target, polytope, eps).dominates
            for other in range(len(sky_rows))
            if other != pos
        )
        if not dominated:
            out.append(row)
    return out


def nd(relation: Relation, polytope: WeightPolytope, eps: float = EPS_DOM) -> ResultSet:
    """Non-dominated flexible skyline: ids free of region dominance."""
    started = time.perf_counter()
    _require_normalized(relation)
    if polytope.is_empty():
        raise EmptyRegionError("empty weight region")
    view = relation.distinct
    rows = _nd_rows(view, polytope, eps)
    return _result(Kind.ND, relation, _unscored(view, rows), started, polytope)


def _mixture_gap_lp(diffs: np.ndarray) -> tuple[float, np.ndarray]:
    """Maximize the worst-case gap ``min_s lam @ diffs[s]`` over the mixture simplex.

    Entries lie in [-1, 1], so substituting u = gap + 1 >= 0 keeps all
    variables nonnegative. Returns the optimal gap and mixture.
    """
    n_comp, n_vert = diffs.shape
    c = np.zeros(n_vert + 1)
    c[-1] = 1.0
    a_ub = np.hstack([-diffs, np.ones((n_comp, 1))])
    b_ub = np.ones(n_comp)
    a_eq = np.concatenate([np.ones(n_vert), [0.0]]).reshape(1, -1)
    value, x = simplex.linprog_max(c, a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=[1.0])
    return value - 1.0, x[:n_vert]


def _po_gap_vertex_space(diffs: np.ndarray) -> float:
    """Best worst-case winning gap, searching over vertex mixtures.

    ``diffs[s, j]`` holds the score difference (competitor s minus candidate)
    at vertex j; with w = sum_j lam_j * vertex_j the gap of the candidate is
    min_s lam . diffs[s], maximized over the mixture simplex. Constraint rows
    are generated lazily: solve over an active subset, then add the rows the
    current mixture violates until none are left.
    """
    active: list[int] = sorted(set(np.argmin(diffs, axis=0).tolist()))
    seen = set(active)
    for _ in range(100):
        gap, mixture = _mixture_gap_lp(diffs[active])
        achieved = diffs @ mixture
        violated = np.nonzero(achieved < gap - 1e-12)[0]
        if violated.size == 0:
            return gap
        worst_first = violated[np.argsort(achieved[violated])]
        took = 0
        for row in worst_first:
            if int(row) not in seen:
                seen.add(int(row))
                active.append(int(row))
                took += 1
            if took >= diffs.shape[1] + 4:
                break
        if took == 0:
            return gap
        active.sort()
    gap, _ = _mixture_gap_lp(diffs)  # safety net: solve the full program
    return gap


def _po_gap_weight_space(candidate: np.ndarray, competitors: np.ndarray, polytope: WeightPolytope) -> float:
    """Same optimum computed directly over (w, gap) when vertices are unavailable."""
    d = polytope.dimension
    n_comp = competitors.shape[0]
    c = np.zeros(d + 1)
    c[-1] = 1.0
    rows = [np.concatenate([-(s - candidate), [1.0]]) for s in competitors]
    for con in polytope.constraints:
        rows.append(np.concatenate([con.coeffs, [0.0]]))
    b_ub = np.concatenate([np.ones(n_comp), [con.bound for con in polytope.constraints]])
    a_eq = np.concatenate([np.ones(d), [0.0]]).reshape(1, -1)
    value, _ = simplex.linprog_max(c, a_ub=np.array(rows), b_ub=b_ub, a_eq=a_eq, b_eq=[1.0])
    return value - 1.0


def _po_bounds(scores: np.ndarray, chunk: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Per-candidate bracket of the best winning gap over competitor rows.

    The lower bound is the best single-vertex win margin (a feasible mixture);
    the upper bound is min over competitors s of max over vertices of the
    score difference, since no mixture beats s by more than s's widest gap.
    """
    k, n_vert = scores.shape
    smallest_two = np.partition(scores, 1, axis=0)[:2]
    # column minimum excluding the candidate itself: the runner-up when the
    # candidate holds the minimum, the global minimum otherwise
    excluded_min = np.where(scores == smallest_two[0], smallest_two[1], smallest_two[0])
    lower = (excluded_min - scores).max(axis=1)
    upper = np.empty(k)
    for start in range(0, k, chunk):
        block = scores[start : start + chunk]
        widest = scores[:, 0][None, :] - block[:, 0][:, None]
        for j in range(1, n_vert):
            widest = np.maximum(widest, scores[:, j][None, :] - block[:, j][:, None])
        rows = np.arange(block.shape[0])
        widest[rows, start + rows] = np.inf  # a candidate does not compete with itself
        upper[start : start + chunk] = widest.min(axis=1)
    return lower, upper


def _po_rows(view: DistinctView, polytope: WeightPolytope, eps: float, eps_po: float) -> list[int]:
    nd_rows = _nd_rows(view, polytope, eps)
    if len(nd_rows) <= 1:
        return nd_rows
    vectors = view.vectors[nd_rows]
    try:
        verts = polytope.vertices()
    except BudgetError:
        verts = None
    winners: list[int] = []
    if verts is not None:
        scores = vectors @ verts.T
        lower, upper = _po_bounds(scores)
        for pos, row in enumerate(nd_rows):
            if lower[pos] > eps_po:
                winners.append(row)
                continue
            if upper[pos] <= eps_po:
                continue
            diffs = np.delete(scores, pos, axis=0) - scores[pos]
            if _po_gap_vertex_space(diffs) > eps_po:
                winners.append(row)
        return winners
    for pos, row in enumerate(nd_rows):
        competitors = np.delete(vectors, pos, axis=0)
        if _po_gap_weight_space(vectors[pos], competitors, polytope) > eps_po:
            winners.append(row)
    return winners


def po(
    relation: Relation,
    polytope: WeightPolytope,
    eps: float = EPS_DOM,
    eps_po: float = EPS_PO,
) -> ResultSet:
    """Potentially optimal flexible skyline: ids strictly best under some weight.

    A distinct vector qualifies when some feasible weight makes it a strict
    unique minimizer; competitors can be restricted to the non-dominated rows
    because beating those strictly also beats everything they dominate.
    """
    started = time.perf_counter()
    _require_normalized(relation)
    if polytope.is_empty():
        raise EmptyRegionError("empty weight region")
    view = relation.distinct
    rows = _po_rows(view, polytope, eps, eps_po)
    return _result(Kind.PO, relation, _unscored(view, rows), started, polytope)


# Ranking and lexicographic ------------------------------------------------------


def topk(relation: Relation, weights, k: int) -> ResultSet:
    """The k lowest weighted-sum scores, ascending, ties broken by ascending id."""
    started = time.perf_counter()
    data = _require_normalized(relation)
    if k < 1:
        raise ValueError("k must be >= 1")
    scorer = ScoringFunction(np.asarray(weights, dtype=float))
    if scorer.weights.size != relation.d:
        raise ValueError("weight vector arity does not match the schema")
    scores = scorer(data)
    order = sorted(range(relation.n), key=lambda i: (scores[i], relation.ids[i]))
    take = order[: min(k, relation.n)]
    entries = [(relation.ids[i], float(scores[i])) for i in take]
    return _result(Kind.TOPK, relation, entries, started)


def lex_best(relation: Relation, priority: Sequence[str]) -> ResultSet:
    """Stagewise minimization following a strict attribute priority order.

    Each stage keeps the tuples minimizing the current attribute among the
    survivors; filtering stops early once a single distinct vector remains.
    """
    started = time.perf_counter()
    data = _require_normalized(relation)
    names = relation.schema.names
    if sorted(priority) != sorted(names):
        raise ValueError("priority must be a permutation of the schema attributes")
    survivors = np.arange(relation.n)
    if relation.n == 0:
        return _result(Kind.LEX, relation, [], started)
    for name in priority:
        col = data[survivors, relation.schema.index(name)]
        survivors = survivors[col == col.min()]
        if len(survivors) == 1 or np.unique(data[survivors], axis=0).shape[0] == 1:
            break
    entries = [(i, None) for i in sorted(relation.ids[j] for j in survivors)]
    return _result(Kind.LEX, relation, entries, started)


# Skybands ----------------------------------------------------------------------


def k_skyband(relation: Relation, k: int) -> ResultSet:
    """Ids whose distinct vector fewer than k distinct vectors Pareto-dominate."""
    started = time.perf_counter()
    _require_normalized(relation)
    if k < 1:
        raise ValueError("k must be >= 1")
    view = relation.distinct
    vectors = view.vectors
    rows = []
    for i in range(vectors.shape[0]):
        t = vectors[i]
        count = int((np.all(vectors <= t, axis=1) & np.any(vectors < t, axis=1)).sum())
        if count < k:
            rows.append(i)
    return _result(Kind.SKYBAND, relation, _unscored(view, rows), started)


def f_skyband(relation: Relation, polytope: WeightPolytope, k: int, eps: float = EPS_DOM) -> ResultSet:
    """Ids whose distinct vector fewer than k distinct vectors region-dominate."""
    started = time.perf_counter()
    _require_normalized(relation)
    if k < 1:
        raise ValueError("k must be >= 1")
    if polytope.is_empty():
        raise EmptyRegionError("empty weight region")
    view = relation.distinct
    vectors = view.vectors
    scores = vertex_scores(vectors, polytope)
    if scores is not None:
        counts = f_dominator_counts(scores, eps)
        rows = [i for i in range(vectors.shape[0]) if counts[i] < k]
    else:
        rows = []
        for i in range(vectors.shape[0]):
            count = sum(
                1
                for j in range(vectors.shape[0])
                if j != i and f_dominates(vectors[j], vectors[i], polytope, eps).dominates
            )
            if count < k:
                rows.append(i)
    return _result(Kind.F_SKYBAND, relation, _unscored(view, rows), started, polytope)


# Request envelope ----------------------------------------------------------------


@dataclass(frozen=True)
class QuerySpec:
    """Validated operator request: kind plus the parameters that kind needs."""

    kind: Kind
    k: int | None = None
    weights: tuple[float, ...] | None = None
    constraints: tuple[LinearConstraint, ...] | None = None
    priority: tuple[str, ...] | None = None
    algo: str = "sorted"

    def validate(self, schema) -> None:
        kind = self.kind
        if kind is Kind.TOPK:
            if self.weights is None or self.k is None:
                raise ValueError("topk requires weights and k")
        elif self.weights is not None:
            raise ValueError(f"weights are not accepted by {kind.value}")
        if kind is Kind.LEX:
            if self.priority is None:
                raise ValueError("lex requires a priority order")
            if sorted(self.priority) != sorted(schema.names):
                raise ValueError("priority must be a permutation of the schema attributes")
        elif self.priority is not None:
            raise ValueError(f"priority is not accepted by {kind.value}")
        if kind in (Kind.TOPK, Kind.SKYBAND, Kind.F_SKYBAND):
            if self.k is None or self.k < 1:
                raise ValueError(f"{kind.value} requires k >= 1")
        elif self.k is not None:
            raise ValueError(f"k is not accepted by {kind.value}")
        if kind not in (Kind.ND, Kind.PO, Kind.F_SKYBAND) and self.constraints:
            raise ValueError(f"constraints are not accepted by {kind.value}")
        if self.algo not in ("naive", "sorted"):
            raise ValueError(f"unknown skyline algorithm {self.algo!r}")


def run_query(relation: Relation, spec: QuerySpec) -> ResultSet:
    """Dispatch a validated request against a normalized relation."""
    spec.validate(relation.schema)
    kind = spec.kind
    if kind in (Kind.ND, Kind.PO, Kind.F_SKYBAND):
        polytope = WeightPolytope(relation.d, spec.constraints or ())
        if kind is Kind.ND:
            return nd(relation, polytope)
        if kind is Kind.PO:
            return po(relation, polytope)
        return f_skyband(relation, polytope, spec.k)
    if kind is Kind.SKY:
        return skyline(relation, spec.algo)
    if kind is Kind.TOPK:
        return topk(relation, spec.weights, spec.k)
    if kind is Kind.LEX:
        return lex_best(relation, spec.priority)
    if kind is Kind.SKYBAND:
        return k_skyband(relation, spec.k)
    raise ValueError(f"unknown operator kind {kind!r}")
