"""Benchmark harness: run operators over a synthetic data matrix, emit CSV reports.

Each cell of the matrix is (distribution, n, d, constraint count); for every
seed the harness generates data, draws a random nonempty weight region, runs
SKY, ND and PO, and records output cardinality, vertex count and wall time.
Everything except the timings is deterministic given the seeds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import operators
from .dataset import Distribution, gen_synthetic
from .preference import LinearConstraint, WeightPolytope

BENCH_FIELDS = ("dist", "n", "d", "m_constraints", "seed", "op", "out_card", "vertices", "ms")

_DIST_CODE = {
    Distribution.INDEPENDENT: 0,
    Distribution.CORRELATED: 1,
    Distribution.ANTICORRELATED: 2,
}


@dataclass(frozen=True)
class RunReport:
    dist: str
    n: int
    d: int
    m_constraints: int
    seed: int
    op: str
    out_card: int
    vertices: int
    ms: float

    def __post_init__(self):
        if self.out_card > self.n:
            raise ValueError("output cardinality cannot exceed the input size")
        if self.ms < 0:
            raise ValueError("elapsed time cannot be negative")

    def csv_row(self) -> str:
        return (
            f"{self.dist},{self.n},{self.d},{self.m_constraints},"
            f"{self.seed},{self.op},{self.out_card},{self.vertices},{self.ms:.3f}"
        )


def random_region(d: int, m: int, seed: int, dist_code: int = 0, n: int = 0) -> WeightPolytope:
    """Draw m random halfspaces through one interior simplex point.

    Every hyperplane passes through the same point p, so p stays feasible and
    the region is nonempty by construction.
    """
    rng = np.random.default_rng([3, dist_code, n, d, m, seed])
    p = rng.dirichlet(np.ones(d))
    constraints = []
    for _ in range(m):
        normal = rng.normal(size=d)
        norm = float(np.linalg.norm(normal))
        if norm == 0.0:
            continue
        normal /= norm
        constraints.append(LinearConstraint(tuple(normal), float(normal @ p)))
    return WeightPolytope(d, constraints)


def run_cells(
    dists: Sequence[Distribution | str],
    ns: Sequence[int],
    ds: Sequence[int],
    constraint_counts: Sequence[int],
    seeds: Sequence[int],
) -> list[RunReport]:
    """Run SKY, ND and PO for every (dist, n, d, m, seed) cell, in matrix order."""
    reports: list[RunReport] = []
    cells = itertools.product(dists, ns, ds, constraint_counts, seeds)
    for dist, n, d, m, seed in cells:
        dist = Distribution(dist)
        relation = gen_synthetic(n, d, dist, seed)
        polytope = random_region(d, m, seed, _DIST_CODE[dist], n)
        runs = (
            ("sky", lambda: operators.skyline(relation), d),
            ("nd", lambda: operators.nd(relation, polytope), None),
            ("po", lambda: operators.po(relation, polytope), None),
        )
        for op, runner, simplex_vertices in runs:
            result = runner()
            vertices = simplex_vertices
            if vertices is None:
                vertices = result.meta.vertex_count if result.meta.vertex_count is not None else 0
            reports.append(
                RunReport(
                    dist=dist.value,
                    n=n,
                    d=d,
                    m_constraints=m,
                    seed=seed,
                    op=op,
                    out_card=len(result),
                    vertices=vertices,
                    ms=result.meta.elapsed_ms,
                )
            )
    return reports


def write_reports(reports: Iterable[RunReport], stream: TextIO) -> int:
    stream.write(",".join(BENCH_FIELDS) + "\n")
    count = 0
    for report in reports:
        stream.write(report.csv_row() + "\n")
        count += 1
    return count
