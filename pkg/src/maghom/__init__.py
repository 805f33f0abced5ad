"""Magnitude homology of finite graphs."""

__version__ = "0.1.0"

from .graph import (  # noqa: E402
    INF,
    Graph,
    GraphError,
    box_product,
    build_named,
    disjoint_union,
    join,
    wedge,
)
from .homology import (  # noqa: E402
    BigradedGroup,
    PowerSeries,
    compute_homology,
    magnitude_by_counting,
    magnitude_by_euler,
    magnitude_by_inverse_series,
    series_equal,
)

__all__ = [
    "INF",
    "BigradedGroup",
    "Graph",
    "GraphError",
    "PowerSeries",
    "box_product",
    "build_named",
    "compute_homology",
    "disjoint_union",
    "join",
    "magnitude_by_counting",
    "magnitude_by_euler",
    "magnitude_by_inverse_series",
    "series_equal",
    "wedge",
]
