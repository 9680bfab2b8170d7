"""Tree surgeries paired with closed-form ABS deltas.

Every transform returns a :class:`TransformOutcome` carrying both the delta
predicted from the original degrees alone and the delta recomputed from the
two full index sums. The ``*_sites`` generators list every valid input so the
sign and formula claims can be checked exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .analytic import f_xy, g_s
from .indices import index_value
from .tree import Graph, InternalPath, Tree, internal_paths, leaf_partition

__all__ = [
    "TransformOutcome",
    "TransformError",
    "add_edge",
    "suppress_degree2",
    "merge_adjacent_branching",
    "contract_internal_path",
    "relocate_branch",
    "add_edge_sites",
    "suppress_sites",
    "merge_sites",
    "contract_sites",
    "relocate_sites",
    "endpoint_contract_findings",
]

DELTA_TOL = 1e-9


class TransformError(ValueError):
    """A transform was asked to act on an input violating its preconditions."""


@dataclass(frozen=True)
class TransformOutcome:
    result: Graph
    delta_closed_form: float
    delta_recomputed: float

    @property
    def consistent(self) -> bool:
        return abs(self.delta_closed_form - self.delta_recomputed) <= DELTA_TOL


def _outcome(before: Graph, after: Graph, closed: float) -> TransformOutcome:
    return TransformOutcome(after, closed, index_value(after) - index_value(before))


def _drop_vertex(order: int, edges: list[tuple[int, int]], gone: int) -> Tree:
    def lab(x: int) -> int:
        return x - 1 if x > gone else x

    return Tree(order - 1, tuple((lab(a), lab(b)) for a, b in edges))


def add_edge(g: Graph, u: int, v: int) -> TransformOutcome:
    """Join two non-adjacent vertices; the result is a general graph."""
    if u == v or g.has_edge(u, v):
        raise TransformError(f"vertices {u} and {v} must be distinct and non-adjacent")
    d = g.degrees
    closed = f_xy(d[u] + 1, d[v] + 1)
    for a in (u, v):
        for x in g.neighbors(a):
            closed += f_xy(d[a] + 1, d[x]) - f_xy(d[a], d[x])
    result = Graph(g.order, g.edges + ((u, v),))
    return _outcome(g, result, closed)


def suppress_degree2(t: Tree, v: int) -> TransformOutcome:
    """Delete a degree-2 vertex and join its two neighbours."""
    if t.degree(v) != 2:
        raise TransformError(f"vertex {v} has degree {t.degree(v)}, expected 2")
    u, w = t.neighbors(v)
    du, dw = t.degree(u), t.degree(w)
    closed = f_xy(du, dw) - f_xy(du, 2) - f_xy(dw, 2)
    edges = [e for e in t.edges if v not in e] + [(u, w)]
    return _outcome(t, _drop_vertex(t.order, edges, v), closed)


def merge_adjacent_branching(t: Tree, u: int, v: int) -> TransformOutcome:
    """Contract the edge between adjacent branching vertices ``u`` and ``v`` into ``u``."""
    if not t.has_edge(u, v):
        raise TransformError(f"vertices {u} and {v} are not adjacent")
    d = t.degrees
    if d[u] < 3 or d[v] < 3:
        raise TransformError(f"both endpoints need degree >= 3, got {d[u]} and {d[v]}")
    merged = d[u] + d[v] - 2
    drop = f_xy(d[u], d[v])
    for hub, other in ((u, v), (v, u)):
        for x in t.neighbors(hub):
            if x != other:
                drop += f_xy(d[hub], d[x]) - f_xy(merged, d[x])
    edges = [e for e in t.edges if v not in e] + [(u, x) for x in t.neighbors(v) if x != u]
    return _outcome(t, _drop_vertex(t.order, edges, v), -drop)


def _contract(t: Tree, path: InternalPath, w: int, y: int) -> TransformOutcome:
    verts = path.vertices
    v, u = verts[0], verts[-1]
    first, last = verts[1], verts[-2]
    d = t.degrees
    closed = g_s(d[u] - 2, 2, d[v]) - g_s(d[u] - 2, 2, 2) + g_s(1, 1, d[w]) - g_s(1, 1, 2)
    cut = {tuple(sorted((v, first))), tuple(sorted((u, last)))}
    edges = [e for e in t.edges if e not in cut] + [(v, u), (y, first)]
    return _outcome(t, Tree(t.order, tuple(edges)), closed)


def contract_internal_path(t: Tree, path: InternalPath, w: int, y: int) -> TransformOutcome:
    """Short-circuit an internal path of length >= 2 and hang its interior off leaf ``y``.

    Edges ``v0 v1`` and ``vr v(r-1)`` are removed, ``v0 vr`` and ``y v1`` added.
    ``w`` must be a neighbour of leaf ``y``, and neither may lie on the path.
    """
    verts = path.vertices
    if path.length < 2:
        raise TransformError(f"internal path must have length >= 2, got {path.length}")
    known = {q.vertices for q in internal_paths(t)}
    if verts not in known and verts[::-1] not in known:
        raise TransformError(f"{verts} is not an internal path of the tree")
    if t.degree(y) != 1 or not t.has_edge(w, y):
        raise TransformError(f"{y} must be a leaf adjacent to {w}")
    if w in verts or y in verts:
        raise TransformError("w and y must not lie on the path")
    return _contract(t, path, w, y)


def _detached_side(t: Tree, x: int, v: int) -> set[int]:
    # vertices reachable from x without passing through v, excluding x
    seen = {x, v}
    stack = [x]
    while stack:
        for z in t.neighbors(stack.pop()):
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return seen - {x, v}


def relocate_branch(t: Tree, x: int, v: int, y: int) -> TransformOutcome:
    """Move everything hanging off ``x`` (away from ``v``) onto leaf ``y``; ``x`` becomes a leaf."""
    if not t.has_edge(x, v):
        raise TransformError(f"{x} is not adjacent to {v}")
    if t.degree(x) < 2:
        raise TransformError(f"{x} must have degree >= 2")
    if t.degree(y) != 1:
        raise TransformError(f"{y} is not a leaf")
    if y in (x, v) or y in _detached_side(t, x, v):
        raise TransformError(f"leaf {y} lies in the branch being moved or at its base")
    d = t.degrees
    (u,) = t.neighbors(y)
    closed = g_s(d[x] - 1, 1, d[u]) - g_s(d[x] - 1, 1, d[v])
    moved = [z for z in t.neighbors(x) if z != v]
    edges = [e for e in t.edges if not (x in e and v not in e)] + [(z, y) for z in moved]
    return _outcome(t, Tree(t.order, tuple(edges)), closed)


# -- exhaustive site generators ---------------------------------------------------


def add_edge_sites(g: Graph) -> Iterator[tuple[int, int]]:
    for u in range(g.order):
        for v in range(u + 1, g.order):
            if not g.has_edge(u, v):
                yield u, v


def suppress_sites(t: Tree) -> Iterator[int]:
    return (v for v in range(t.order) if t.degree(v) == 2)


def merge_sites(t: Tree) -> Iterator[tuple[int, int]]:
    """Ordered adjacent pairs of branching vertices (both orientations)."""
    for a, b in t.edges:
        if t.degree(a) >= 3 and t.degree(b) >= 3:
            yield a, b
            yield b, a


def _both_orientations(path: InternalPath) -> tuple[InternalPath, InternalPath]:
    return path, InternalPath(path.vertices[::-1])


def contract_sites(t: Tree) -> Iterator[tuple[InternalPath, int, int]]:
    """All (oriented path, w, y) choices with the path of length >= 2 and w, y off the path."""
    if t.order < 3:
        return
    w2 = leaf_partition(t).w2
    for path in internal_paths(t):
        if path.length < 2:
            continue
        for oriented in _both_orientations(path):
            on_path = set(oriented.vertices)
            for w in sorted(w2 - on_path):
                for y in t.neighbors(w):
                    if t.degree(y) == 1:
                        yield oriented, w, y


def relocate_sites(t: Tree) -> Iterator[tuple[int, int, int]]:
    leaves = t.leaves()
    for x in range(t.order):
        if t.degree(x) < 2:
            continue
        for v in t.neighbors(x):
            side = _detached_side(t, x, v)
            for y in leaves:
                if y != v and y not in side:
                    yield x, v, y


def endpoint_contract_findings(t: Tree) -> list[dict]:
    """Apply the path contraction with ``w`` at a path end, a case the preconditions exclude.

    Returns one record per configuration with both deltas, so the behaviour of
    the closed form outside its preconditions can be reported.
    """
    out = []
    for path in internal_paths(t):
        if path.length < 2:
            continue
        for oriented in _both_orientations(path):
            for w in oriented.ends:
                for y in t.neighbors(w):
                    if t.degree(y) != 1:
                        continue
                    res = _contract(t, oriented, w, y)
                    out.append(
                        {
                            "path": list(oriented.vertices),
                            "w": w,
                            "y": y,
                            "delta_closed_form": res.delta_closed_form,
                            "delta_recomputed": res.delta_recomputed,
                            "formula_matches": res.consistent,
                            "decreases": res.delta_recomputed < 0,
                        }
                    )
    return out
