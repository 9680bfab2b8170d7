"""Bond-incident-degree indices: sums over edges of a function of the endpoint degrees."""

from __future__ import annotations

import math
from enum import Enum
from typing import Mapping

from .tree import Graph, edge_type_counts

__all__ = ["IndexKind", "edge_weight", "index_value", "index_from_counts", "abs_index"]


class IndexKind(str, Enum):
    ABS = "abs"
    ABC = "abc"
    SC = "sc"
    RANDIC = "randic"


def edge_weight(kind: IndexKind | str, du: int, dv: int) -> float:
    """Weight contributed by one edge whose endpoints have degrees ``du`` and ``dv``."""
    kind = IndexKind(kind)
    if du < 1 or dv < 1:
        raise ValueError(f"degrees must be positive, got ({du}, {dv})")
    s = du + dv
    if kind is IndexKind.ABS:
        return math.sqrt(1.0 - 2.0 / s)
    if kind is IndexKind.ABC:
        return math.sqrt((s - 2) / (du * dv))
    if kind is IndexKind.SC:
        return 1.0 / math.sqrt(s)
    return 1.0 / math.sqrt(du * dv)


def index_value(g: Graph, kind: IndexKind | str = IndexKind.ABS) -> float:
    """Sum of :func:`edge_weight` over the edges of ``g``."""
    kind = IndexKind(kind)
    deg = g.degrees
    return math.fsum(edge_weight(kind, deg[u], deg[v]) for u, v in g.edges)


def index_from_counts(counts: Mapping[tuple[int, int], int], kind: IndexKind | str = IndexKind.ABS) -> float:
    """Index value from edge-type counts, summed in sorted key order.

    Trees with equal counts get bit-identical values, which keeps tie
    detection in exhaustive searches free of summation-order noise.
    """
    kind = IndexKind(kind)
    return math.fsum(c * edge_weight(kind, i, j) for (i, j), c in sorted(counts.items()))


def abs_index(g: Graph) -> float:
    return index_from_counts(edge_type_counts(g))
