"""Array-first selector estimators with a scikit-learn style API.

Each selector wraps one query operator: ``fit(X)`` computes which rows of a
2-D array survive the operator and exposes ``support_`` / ``indices_``;
``transform(X)`` filters the rows of the fitted array. The classes implement
``get_params`` / ``set_params`` so they compose with pipeline and model-search
tooling without requiring scikit-learn itself.
"""

from __future__ import annotations

import inspect

import numpy as np

from . import operators
from .dataset import AttributeSpec, Direction, Relation, Schema, normalize
from .preference import LinearConstraint, WeightPolytope, parse_constraints


class NotFittedError(ValueError):
    """Raised when transform is called before fit."""


def check_matrix(x) -> np.ndarray:
    """Coerce to a finite 2-D float array with at least one row and column."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("input array must have at least one row and one column")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input array contains NaN or infinity")
    return arr


def check_is_fitted(estimator, attribute: str = "support_") -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(f"{type(estimator).__name__} is not fitted yet; call fit first")


def _build_relation(x: np.ndarray, directions, normalize_input: bool) -> Relation:
    d = x.shape[1]
    if directions is None:
        dirs = [Direction.MIN] * d
    else:
        if len(directions) != d:
            raise ValueError(f"directions has {len(directions)} entries for {d} columns")
        dirs = [Direction(str(v).lower()) for v in directions]
    if not normalize_input and any(v is Direction.MAX for v in dirs):
        raise ValueError("max directions require normalize=True")
    schema = Schema(tuple(AttributeSpec(f"a{j + 1}", v) for j, v in enumerate(dirs)))
    relation = Relation(schema, tuple(range(x.shape[0])), x)
    if normalize_input:
        return normalize(relation)
    return Relation(schema, relation.ids, x, x)


class BaseSelector:
    """Estimator plumbing: introspected get_params/set_params, shared fit glue."""

    @classmethod
    def _param_names(cls) -> list[str]:
        signature = inspect.signature(cls.__init__)
        return sorted(name for name in signature.parameters if name != "self")

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = self._param_names()
        for name, value in params.items():
            if name not in valid:
                raise ValueError(f"invalid parameter {name!r} for {type(self).__name__}")
            setattr(self, name, value)
        return self

    def _run(self, relation: Relation) -> operators.ResultSet:
        raise NotImplementedError

    def fit(self, x, y=None):
        x = check_matrix(x)
        relation = _build_relation(x, getattr(self, "directions", None), getattr(self, "normalize", True))
        result = self._run(relation)
        mask = np.zeros(x.shape[0], dtype=bool)
        mask[list(result.ids)] = True
        self.support_ = mask
        self.indices_ = np.array(sorted(result.ids), dtype=int)
        self.n_features_in_ = x.shape[1]
        self.result_ = result
        return self

    def transform(self, x) -> np.ndarray:
        check_is_fitted(self)
        x = check_matrix(x)
        if x.shape[0] != self.support_.size:
            raise ValueError(
                f"transform expects the fitted array ({self.support_.size} rows), got {x.shape[0]}"
            )
        return x[self.support_]

    def fit_transform(self, x, y=None) -> np.ndarray:
        return self.fit(x, y).transform(x)

    def fit_predict(self, x, y=None) -> np.ndarray:
        """Boolean membership mask over the rows of ``x``."""
        return self.fit(x, y).support_.copy()


class SkylineSelector(BaseSelector):
    """Keep the rows no other row Pareto-dominates.

    Parameters
    ----------
    directions : sequence of "min"/"max" per column, default all "min".
    normalize : rescale each column to [0, 1] before comparing (required when
        any direction is "max"); pass False for data already normalized.
    algo : "sorted" (sum-ordered filter) or "naive" (all pairs).
    """

    def __init__(self, directions=None, normalize=True, algo="sorted"):
        self.directions = directions
        self.normalize = normalize
        self.algo = algo

    def _run(self, relation):
        return operators.skyline(relation, algo=self.algo)


class FlexibleSkylineSelector(BaseSelector):
    """Keep the rows surviving a flexible skyline under weight constraints.

    ``kind`` selects the operator: "nd" keeps rows nobody region-dominates,
    "po" keeps rows that win strictly under some feasible weight.
    ``constraints`` is text in the weight mini-language (one inequality per
    line, weights named ``w_a1 .. w_ad``), a sequence of prebuilt
    :class:`LinearConstraint`, or None for the unconstrained simplex.
    """

    def __init__(self, kind="nd", constraints=None, directions=None, normalize=True):
        self.kind = kind
        self.constraints = constraints
        self.directions = directions
        self.normalize = normalize

    def _polytope(self, relation: Relation) -> WeightPolytope:
        constraints = self.constraints
        if constraints is None:
            parsed = ()
        elif isinstance(constraints, str):
            parsed = tuple(parse_constraints(constraints, relation.schema))
        else:
            parsed = tuple(constraints)
            for con in parsed:
                if not isinstance(con, LinearConstraint):
                    raise ValueError("constraints must be text or LinearConstraint objects")
        return WeightPolytope(relation.d, parsed)

    def _run(self, relation):
        if self.kind == "nd":
            return operators.nd(relation, self._polytope(relation))
        if self.kind == "po":
            return operators.po(relation, self._polytope(relation))
        raise ValueError(f"unknown kind {self.kind!r}; expected 'nd' or 'po'")


class TopKSelector(BaseSelector):
    """Keep the k best rows under a weighted sum (lower is better).

    ``weights`` defaults to uniform. After ``fit``, ``ranking_`` holds row
    indices in score order and ``scores_`` the matching scores; ``transform``
    returns the selected rows in that order.
    """

    def __init__(self, k=1, weights=None, directions=None, normalize=True):
        self.k = k
        self.weights = weights
        self.directions = directions
        self.normalize = normalize

    def _run(self, relation):
        weights = self.weights
        if weights is None:
            weights = np.full(relation.d, 1.0 / relation.d)
        return operators.topk(relation, weights, self.k)

    def fit(self, x, y=None):
        super().fit(x, y)
        self.ranking_ = np.array([i for i, _ in self.result_.entries], dtype=int)
        self.scores_ = np.array([s for _, s in self.result_.entries], dtype=float)
        return self

    def transform(self, x) -> np.ndarray:
        check_is_fitted(self, "ranking_")
        x = check_matrix(x)
        if x.shape[0] != self.support_.size:
            raise ValueError(
                f"transform expects the fitted array ({self.support_.size} rows), got {x.shape[0]}"
            )
        return x[self.ranking_]


class SkybandSelector(BaseSelector):
    """Keep the rows dominated by fewer than k others.

    Without constraints the dominance test is Pareto; with constraints it is
    region dominance over the constrained weight polytope, which never keeps
    more rows than the Pareto variant.
    """

    def __init__(self, k=1, constraints=None, directions=None, normalize=True):
        self.k = k
        self.constraints = constraints
        self.directions = directions
        self.normalize = normalize

    def _run(self, relation):
        if self.constraints is None:
            return operators.k_skyband(relation, self.k)
        if isinstance(self.constraints, str):
            parsed = tuple(parse_constraints(self.constraints, relation.schema))
        else:
            parsed = tuple(self.constraints)
        return operators.f_skyband(relation, WeightPolytope(relation.d, parsed), self.k)


class LexicographicSelector(BaseSelector):
    """Keep the winners of stagewise minimization over a column priority order.

    ``priority`` lists column indices, most important first; None means left
    to right.
    """

    def __init__(self, priority=None, directions=None, normalize=True):
        self.priority = priority
        self.directions = directions
        self.normalize = normalize

    def _run(self, relation):
        priority = self.priority
        if priority is None:
            priority = range(relation.d)
        names = [relation.schema.names[int(i)] for i in priority]
        return operators.lex_best(relation, names)
