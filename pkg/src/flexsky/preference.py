"""Constrained weight regions: parsing, vertex enumeration, LP oracles, sampling.

A scoring family is a set of weighted sums whose weight vector w lives on the
probability simplex (w >= 0, sum w = 1) intersected with user-supplied linear
inequalities. Because every score is linear in w, the maximum and minimum of
any linear form over the region sit on vertices, which makes universally and
existentially quantified preference tests exact once the vertex set is known.
"""

from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import simplex
from .dataset import Schema
from .errors import BudgetError, EmptyRegionError, ParseError

EPS_FEAS = 1e-9    # feasibility slack for membership tests
EPS_VERTEX = 1e-9  # L-inf tolerance below which two vertices are one
EPS_LP = 1e-7      # allowed disagreement between vertex scan and LP

DIM_BUDGET = 8
CONSTRAINT_BUDGET = 32


def check_weight_vector(w, dimension: int | None = None, eps: float = EPS_FEAS) -> np.ndarray:
    """Validate that ``w`` is a nonnegative vector summing to 1 (within eps)."""
    arr = np.asarray(w, dtype=float).ravel()
    if dimension is not None and arr.size != dimension:
        raise ValueError(f"weight vector has {arr.size} components, expected {dimension}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("weight vector must be finite")
    if arr.min() < -eps:
        raise ValueError("weight components must be nonnegative")
    if abs(arr.sum() - 1.0) > max(eps, 1e-12 * arr.size):
        raise ValueError("weight components must sum to 1")
    return arr


@dataclass(frozen=True)
class LinearConstraint:
    """One linear inequality ``coeffs @ w <= bound`` over the weight vector."""

    coeffs: tuple[float, ...]
    bound: float

    def __post_init__(self):
        coeffs = tuple(float(x) + 0.0 for x in self.coeffs)  # -0.0 -> 0.0
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "bound", float(self.bound) + 0.0)
        if not any(x != 0.0 for x in coeffs):
            raise ValueError("constraint needs at least one nonzero coefficient")


@dataclass(frozen=True, eq=False)
class ScoringFunction:
    """Weighted sum over normalized, min-better values; lower scores are better."""

    weights: np.ndarray

    def __post_init__(self):
        w = check_weight_vector(self.weights)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __call__(self, values) -> np.ndarray | float:
        return np.asarray(values, dtype=float) @ self.weights


class WeightPolytope:
    """The weight simplex intersected with user constraints.

    Vertices are enumerated lazily, at most once, and cached; afterwards every
    query on the polytope is pure and safe to call concurrently. Exact
    enumeration is budgeted (`dim_budget`, `constraint_budget`); beyond the
    budget, optimization falls back to a simplex-method LP.
    """

    def __init__(
        self,
        dimension: int,
        constraints: Iterable[LinearConstraint] = (),
        *,
        eps_feas: float = EPS_FEAS,
        eps_vertex: float = EPS_VERTEX,
        dim_budget: int = DIM_BUDGET,
        constraint_budget: int = CONSTRAINT_BUDGET,
    ):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = int(dimension)
        self.constraints = tuple(constraints)
        for con in self.constraints:
            if len(con.coeffs) != self.dimension:
                raise ValueError("constraint arity does not match the polytope dimension")
        self.eps_feas = float(eps_feas)
        self.eps_vertex = float(eps_vertex)
        self.dim_budget = int(dim_budget)
        self.constraint_budget = int(constraint_budget)
        m = len(self.constraints)
        self._a = np.array([c.coeffs for c in self.constraints], dtype=float).reshape(m, self.dimension)
        self._b = np.array([c.bound for c in self.constraints], dtype=float)
        self._vertices: np.ndarray | None = None
        self._lock = threading.Lock()

    @classmethod
    def full_simplex(cls, dimension: int) -> "WeightPolytope":
        return cls(dimension)

    def __repr__(self):
        return f"WeightPolytope(d={self.dimension}, constraints={len(self.constraints)})"

    @property
    def within_budget(self) -> bool:
        return self.dimension <= self.dim_budget and len(self.constraints) <= self.constraint_budget

    def contains(self, w, tol: float | None = None) -> bool:
        tol = self.eps_feas if tol is None else tol
        w = np.asarray(w, dtype=float).ravel()
        if w.size != self.dimension:
            return False
        if w.min() < -tol or abs(w.sum() - 1.0) > tol:
            return False
        if len(self.constraints) and np.any(self._a @ w > self._b + tol):
            return False
        return True

    def vertices(self) -> np.ndarray:
        """Exact vertex set, lexicographically sorted; empty array iff the region is empty."""
        if not self.within_budget:
            raise BudgetError(
                f"vertex enumeration budget exceeded (d={self.dimension}, "
                f"m={len(self.constraints)}); use the LP path instead"
            )
        if self._vertices is None:
            with self._lock:
                if self._vertices is None:
                    self._vertices = self._enumerate_vertices()
        return self._vertices

    def _enumerate_vertices(self) -> np.ndarray:
        d = self.dimension
        # Facet pool: nonnegativity rows first, then user rows. A vertex is a
        # feasible solution of sum(w) = 1 plus d-1 facets made active.
        pool_a = np.vstack([-np.eye(d), self._a]) if len(self.constraints) else -np.eye(d)
        pool_b = np.concatenate([np.zeros(d), self._b])
        found: list[np.ndarray] = []
        for combo in itertools.combinations(range(pool_a.shape[0]), d - 1):
            rows = list(combo)
            mat = np.vstack([np.ones((1, d)), pool_a[rows]])
            rhs = np.concatenate([[1.0], pool_b[rows]])
            try:
                w = np.linalg.solve(mat, rhs)
            except np.linalg.LinAlgError:
                continue
            if not np.all(np.isfinite(w)):
                continue
            if w.min() < -self.eps_feas:
                continue
            if len(self.constraints) and np.any(self._a @ w > self._b + self.eps_feas):
                continue
            found.append(w + 0.0)  # -0.0 -> 0.0
        found.sort(key=lambda v: tuple(v))
        kept: list[np.ndarray] = []
        for w in found:
            if all(np.max(np.abs(w - u)) > self.eps_vertex for u in kept):
                kept.append(w)
        arr = np.array(kept, dtype=float).reshape(len(kept), d)
        arr.setflags(write=False)
        return arr

    def is_empty(self) -> bool:
        if self.within_budget:
            return self.vertices().shape[0] == 0
        try:
            self._lp(np.zeros(self.dimension))
        except simplex.Infeasible:
            return True
        return False

    def _lp(self, c: np.ndarray) -> tuple[float, np.ndarray]:
        m = len(self.constraints)
        return simplex.linprog_max(
            c,
            a_ub=self._a if m else None,
            b_ub=self._b if m else None,
            a_eq=np.ones((1, self.dimension)),
            b_eq=[1.0],
        )

    def lp_max(self, c, method: str = "auto") -> tuple[float, np.ndarray]:
        """Maximum of ``c @ w`` over the region, with a maximizing vertex.

        ``method`` picks the route: "vertex" scans the enumerated vertex set,
        "lp" runs the simplex solver, "auto" prefers vertices within budget.
        """
        c = np.asarray(c, dtype=float).ravel()
        if c.size != self.dimension:
            raise ValueError("objective arity does not match the polytope dimension")
        if method == "auto":
            method = "vertex" if self.within_budget else "lp"
        if method == "vertex":
            verts = self.vertices()
            if verts.shape[0] == 0:
                raise EmptyRegionError("empty weight region")
            vals = verts @ c
            best = int(np.argmax(vals))
            return float(vals[best]), verts[best]
        if method != "lp":
            raise ValueError(f"unknown method {method!r}")
        try:
            value, w = self._lp(c)
        except simplex.Infeasible:
            raise EmptyRegionError("empty weight region") from None
        return value, w

    def sample(self, count: int, seed: int) -> np.ndarray:
        """Deterministic feasible samples: vertices, their midpoints, then interior points.

        The prefix order is fixed (sorted vertices, pairwise midpoints, then
        rejection-sampled interior points), truncated or extended to ``count``.
        When rejection sampling cannot cover the region (it may have zero
        volume), the remainder comes from random mixtures of the vertices,
        which stay feasible by convexity.
        """
        if count < 1:
            raise ValueError("count must be >= 1")
        if self.is_empty():
            raise EmptyRegionError("empty weight region")
        parts: list[np.ndarray] = []
        have = 0
        if self.within_budget:
            verts = self.vertices()
            parts.append(verts)
            have = verts.shape[0]
            if verts.shape[0] > 1:
                mids = [
                    (verts[i] + verts[j]) / 2.0
                    for i, j in itertools.combinations(range(verts.shape[0]), 2)
                ]
                parts.append(np.array(mids))
                have += len(mids)
        rng = np.random.default_rng(seed)
        alpha = np.ones(self.dimension)
        # Thin or measure-zero regions reject almost everything; with vertices
        # at hand, give up early and fill with vertex mixtures instead.
        max_attempts = 32 if self.within_budget else 512
        attempts = 0
        while have < count and attempts < max_attempts:
            batch = rng.dirichlet(alpha, size=1024)
            if len(self.constraints):
                ok = np.all(batch @ self._a.T <= self._b + self.eps_feas, axis=1)
                batch = batch[ok]
            if batch.size:
                parts.append(batch)
                have += batch.shape[0]
            attempts += 1
        if have < count:
            if not self.within_budget or self.vertices().shape[0] == 0:
                raise RuntimeError("rejection sampling failed to cover the region")
            verts = self.vertices()
            lam = rng.dirichlet(np.ones(verts.shape[0]), size=count - have)
            parts.append(lam @ verts)
        out = np.vstack(parts)[:count]
        out.setflags(write=False)
        return out


# Function-style surface over the polytope methods -----------------------------


def polytope_vertices(polytope: WeightPolytope) -> np.ndarray:
    return polytope.vertices()


def lp_max(c, polytope: WeightPolytope, method: str = "auto") -> tuple[float, np.ndarray]:
    return polytope.lp_max(c, method=method)


def is_empty(polytope: WeightPolytope) -> bool:
    return polytope.is_empty()


def sample_weights(polytope: WeightPolytope, count: int, seed: int) -> np.ndarray:
    return polytope.sample(count, seed)


# Constraint mini-language ----------------------------------------------------
#
#   constraint := expr ("<=" | ">=" | "=") expr
#   expr       := ["-"] term (("+" | "-") term)*
#   term       := number "*" weight | weight | number
#   weight     := "w_" attribute-name
#
# One constraint per line. ">=" rows are negated into "<=", "=" expands into a
# pair of "<=" rows, and coefficients are indexed by schema attribute order.

_TOKEN = re.compile(
    r"""(?P<number>\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)
      | (?P<weight>w_\w+)
      | (?P<op><=|>=|=)
      | (?P<plus>\+)
      | (?P<minus>-)
      | (?P<star>\*)
      | (?P<ws>\s+)
    """,
    re.VERBOSE,
)


def _tokenize(text: str, lineno: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append((kind, match.group(), pos + 1))
        pos = match.end()
    return tokens


class _SideParser:
    """Accumulates one side of a constraint into (coefficients, constant)."""

    def __init__(self, tokens, start, lineno, schema: Schema):
        self.tokens = tokens
        self.pos = start
        self.lineno = lineno
        self.schema = schema
        self.coeffs = np.zeros(schema.arity)
        self.constant = 0.0

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, "", 0)

    def _weight_index(self, token: str, col: int) -> int:
        name = token[2:]
        try:
            return self.schema.index(name)
        except KeyError:
            raise ParseError(f"unknown weight name {token!r}", self.lineno, col) from None

    def parse(self) -> int:
        sign = 1.0
        kind, _, _ = self._peek()
        if kind == "minus":
            sign = -1.0
            self.pos += 1
        while True:
            self._term(sign)
            kind, _, _ = self._peek()
            if kind == "plus":
                sign = 1.0
                self.pos += 1
            elif kind == "minus":
                sign = -1.0
                self.pos += 1
            else:
                return self.pos

    def _term(self, sign: float) -> None:
        kind, text, col = self._peek()
        if kind == "number":
            value = float(text)
            self.pos += 1
            kind, text, col = self._peek()
            if kind == "star":
                self.pos += 1
                kind, text, col = self._peek()
                if kind != "weight":
                    raise ParseError("expected a weight after '*'", self.lineno, col)
                self.coeffs[self._weight_index(text, col)] += sign * value
                self.pos += 1
            else:
                self.constant += sign * value
        elif kind == "weight":
            self.coeffs[self._weight_index(text, col)] += sign
            self.pos += 1
        else:
            raise ParseError("expected a number or weight term", self.lineno, col or 1)


def parse_constraints(text: str, schema: Schema) -> list[LinearConstraint]:
    """Parse the constraint mini-language into ``coeffs @ w <= bound`` rows."""
    out: list[LinearConstraint] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        tokens = _tokenize(line, lineno)
        left = _SideParser(tokens, 0, lineno, schema)
        pos = left.parse()
        if pos >= len(tokens) or tokens[pos][0] != "op":
            col = tokens[pos][2] if pos < len(tokens) else len(line) + 1
            raise ParseError("expected '<=', '>=' or '='", lineno, col)
        op = tokens[pos][1]
        right = _SideParser(tokens, pos + 1, lineno, schema)
        pos = right.parse()
        if pos != len(tokens):
            raise ParseError("trailing input after constraint", lineno, tokens[pos][2])
        coeffs = left.coeffs - right.coeffs
        bound = right.constant - left.constant
        if not np.any(coeffs != 0.0):
            raise ParseError("constraint has no net weight term", lineno, 1)
        if op in ("<=", "="):
            out.append(LinearConstraint(tuple(coeffs), bound))
        if op in (">=", "="):
            out.append(LinearConstraint(tuple(-coeffs), -bound))
    return out
