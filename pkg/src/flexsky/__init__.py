"""flexsky: multi-objective query operators over finite tabular datasets.

Skyline, top-k, lexicographic and flexible-skyline (ND/PO) queries built on
Pareto dominance and dominance over constrained weight regions, plus a CLI,
a benchmark harness and brute-force oracles for verification.
"""

from .dataset import (
    AttributeSpec,
    Direction,
    DistinctView,
    Distribution,
    Relation,
    Schema,
    distinct_view,
    gen_synthetic,
    ingest_csv,
    normalize,
    parse_schema,
)
from .dominance import DominanceVerdict, dominance_count, f_dominates, pareto_dominates
from .errors import BudgetError, CsvError, EmptyRegionError, FlexskyError, ParseError
from .operators import (
    Kind,
    QuerySpec,
    ResultMeta,
    ResultSet,
    f_skyband,
    k_skyband,
    lex_best,
    nd,
    po,
    run_query,
    skyline,
    topk,
)
from .preference import (
    LinearConstraint,
    ScoringFunction,
    WeightPolytope,
    is_empty,
    lp_max,
    parse_constraints,
    polytope_vertices,
    sample_weights,
)
from .select import (
    FlexibleSkylineSelector,
    LexicographicSelector,
    SkybandSelector,
    SkylineSelector,
    TopKSelector,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeSpec",
    "BudgetError",
    "CsvError",
    "Direction",
    "DistinctView",
    "Distribution",
    "DominanceVerdict",
    "EmptyRegionError",
    "FlexibleSkylineSelector",
    "FlexskyError",
    "Kind",
    "LexicographicSelector",
    "LinearConstraint",
    "ParseError",
    "QuerySpec",
    "Relation",
    "ResultMeta",
    "ResultSet",
    "Schema",
    "ScoringFunction",
    "SkybandSelector",
    "SkylineSelector",
    "TopKSelector",
    "WeightPolytope",
    "dominance_count",
    "distinct_view",
    "f_dominates",
    "f_skyband",
    "gen_synthetic",
    "ingest_csv",
    "is_empty",
    "k_skyband",
    "lex_best",
    "lp_max",
    "nd",
    "normalize",
    "parse_constraints",
    "parse_schema",
    "pareto_dominates",
    "po",
    "polytope_vertices",
    "run_query",
    "sample_weights",
    "skyline",
    "topk",
]
