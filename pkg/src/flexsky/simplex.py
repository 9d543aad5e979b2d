"""Small dense linear-program solver: two-phase primal simplex with Bland's rule.

Sized for the tiny, well-scaled programs this package produces (weight
polytopes and gap programs with at most a few hundred rows). Bland's entering
rule keeps the method cycle-free and deterministic.
"""

from __future__ import annotations

import numpy as np

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-8
MAX_ITERS = 100_000


class Infeasible(Exception):
    """The program has no feasible point."""


class Unbounded(Exception):
    """The objective is unbounded above on the feasible set."""


def _pivot(tableau: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    pivot_row = tableau[row]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, pivot_row)
    basis[row] = col


def _run(tableau: np.ndarray, basis: list[int], objective: np.ndarray) -> None:
    """Pivot until no reduced cost improves the (maximization) objective."""
    ncols = tableau.shape[1] - 1
    for _ in range(MAX_ITERS):
        reduced = objective - objective[basis] @ tableau[:, :ncols]
        reduced[basis] = 0.0
        improving = np.nonzero(reduced > PIVOT_TOL)[0]
        if improving.size == 0:
            return
        enter = int(improving[0])  # Bland: smallest improving index
        col = tableau[:, enter]
        positive = col > PIVOT_TOL
        if not positive.any():
            raise Unbounded
        ratios = np.full(col.shape, np.inf)
        ratios[positive] = tableau[positive, -1] / col[positive]
        best = ratios.min()
        candidates = np.nonzero(ratios == best)[0]
        leave = int(min(candidates, key=lambda i: basis[i]))
        _pivot(tableau, basis, leave, enter)
    raise RuntimeError("simplex did not converge")


def linprog_max(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None) -> tuple[float, np.ndarray]:
    """Maximize ``c @ x`` over ``x >= 0`` with ``a_ub @ x <= b_ub`` and ``a_eq @ x == b_eq``.

    Returns ``(value, x)``. Raises :class:`Infeasible` or :class:`Unbounded`.
    """
    c = np.asarray(c, dtype=float).ravel()
    nvar = c.size

    ub_rows = 0
    if a_ub is not None:
        a_ub = np.atleast_2d(np.asarray(a_ub, dtype=float))
        b_ub = np.asarray(b_ub, dtype=float).ravel()
        ub_rows = a_ub.shape[0]
    eq_rows = 0
    if a_eq is not None:
        a_eq = np.atleast_2d(np.asarray(a_eq, dtype=float))
        b_eq = np.asarray(b_eq, dtype=float).ravel()
        eq_rows = a_eq.shape[0]

    m = ub_rows + eq_rows
    total = nvar + ub_rows  # slack variables turn the <= rows into equalities
    a = np.zeros((m, total))
    b = np.zeros(m)
    if ub_rows:
        a[:ub_rows, :nvar] = a_ub
        a[:ub_rows, nvar:] = np.eye(ub_rows)
        b[:ub_rows] = b_ub
    if eq_rows:
        a[ub_rows:, :nvar] = a_eq
        b[ub_rows:] = b_eq

    negative = b < 0
    a[negative] *= -1.0
    b[negative] *= -1.0

    # Phase 1: slack columns serve as the starting basis wherever the row was
    # not negated; only the remaining rows need artificial variables.
    basis = [0] * m
    art_count = 0
    for i in range(m):
        if i < ub_rows and not negative[i]:
            basis[i] = nvar + i
        else:
            basis[i] = total + art_count
            art_count += 1
    art = np.zeros((m, art_count))
    for i in range(m):
        if basis[i] >= total:
            art[i, basis[i] - total] = 1.0
    tableau = np.hstack([a, art, b[:, None]])

    if art_count:
        phase1 = np.zeros(total + art_count)
        phase1[total:] = -1.0
        _run(tableau, basis, phase1)
        if -(phase1[basis] @ tableau[:, -1]) > FEAS_TOL:
            raise Infeasible
        # Drive leftover artificials out of the basis; drop redundant rows.
        keep = []
        for i in range(m):
            if basis[i] < total:
                keep.append(i)
                continue
            pivot_cols = np.nonzero(np.abs(tableau[i, :total]) > PIVOT_TOL)[0]
            if pivot_cols.size:
                _pivot(tableau, basis, i, int(pivot_cols[0]))
                keep.append(i)
        tableau = np.hstack([tableau[keep][:, :total], tableau[keep][:, -1:]])
        basis = [basis[i] for i in keep]
    else:
        tableau = np.hstack([tableau[:, :total], tableau[:, -1:]])

    phase2 = np.concatenate([c, np.zeros(ub_rows)])
    _run(tableau, basis, phase2)

    x = np.zeros(total)
    x[basis] = tableau[:, -1]
    return float(c @ x[:nvar]), x[:nvar]
