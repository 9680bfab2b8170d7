"""Labeled trees, degree utilities, canonical codes and structural decompositions.

Vertices are dense integer labels ``0..n-1``. Edges are stored as sorted pairs
``(u, v)`` with ``u < v``. Both :class:`Graph` and :class:`Tree` are immutable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Graph",
    "Tree",
    "TreeFormatError",
    "VertexPartition",
    "InternalPath",
    "degree_sequence",
    "pendent_count",
    "leaf_partition",
    "internal_paths",
    "edge_type_counts",
    "canonical_code",
    "tree_center",
    "path_tree",
    "star_tree",
    "spider",
    "tree_from_parents",
    "relabel",
    "parse_tree",
    "parse_trees",
    "format_tree",
    "format_trees",
    "read_tree",
]


class TreeFormatError(ValueError):
    """Raised when tree text cannot be parsed; carries the offending line."""

    def __init__(self, message: str, line: int | None = None, source: str = "<string>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on vertices ``0..order-1``.

    Edges are stored as sorted ``(u, v)`` pairs with ``u < v``, so two graphs
    compare equal exactly when they have the same labeled edge set.
    """

    order: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be positive, got {self.order}")
        norm = []
        seen = set()
        for e in self.edges:
            u, v = e
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise ValueError(f"edge ({u}, {v}) has a label outside 0..{self.order - 1}")
            pair = (u, v) if u < v else (v, u)
            if pair in seen:
                raise ValueError(f"duplicate edge {pair}")
            seen.add(pair)
            norm.append(pair)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.order)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @cached_property
    def _edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    @property
    def max_degree(self) -> int:
        return max(self.degrees) if self.order > 1 else 0

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            for w in self.adjacency[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.order


@dataclass(frozen=True)
class Tree(Graph):
    """A labeled free tree. Construction fails unless the edges form a spanning tree."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.edges) != self.order - 1:
            raise ValueError(f"a tree of order {self.order} needs {self.order - 1} edges, got {len(self.edges)}")
        if not self.is_connected():
            raise ValueError("edges do not form a connected graph")

    def leaves(self) -> list[int]:
        return [v for v, d in enumerate(self.degrees) if d == 1]


@dataclass(frozen=True)
class VertexPartition:
    w1: frozenset[int]
    w2: frozenset[int]
    w3: frozenset[int]


@dataclass(frozen=True)
class InternalPath:
    """Branching-to-branching path whose interior vertices all have degree 2."""

    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def ends(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    @property
    def interior(self) -> tuple[int, ...]:
        return self.vertices[1:-1]


def degree_sequence(t: Graph) -> tuple[int, ...]:
    """Degrees of all vertices, non-increasing."""
    return tuple(sorted(t.degrees, reverse=True))


def pendent_count(t: Graph) -> int:
    return sum(1 for d in t.degrees if d == 1)


def leaf_partition(t: Tree) -> VertexPartition:
    """Split V(t) into leaves, neighbours of leaves, and the rest.

    Only defined for ``n >= 3``; for smaller trees a leaf would be adjacent to
    a leaf and the cells would overlap.
    """
    if t.order < 3:
        raise ValueError(f"leaf partition needs order >= 3, got {t.order}")
    w1 = frozenset(t.leaves())
    w2 = frozenset(u for v in w1 for u in t.neighbors(v))
    w3 = frozenset(range(t.order)) - w1 - w2
    return VertexPartition(w1, w2, w3)


def internal_paths(t: Tree) -> list[InternalPath]:
    """All maximal paths joining two branching vertices through degree-2 vertices.

    Each path is reported once, oriented from the smaller end label.
    """
    deg = t.degrees
    out = []
    for b in range(t.order):
        if deg[b] < 3:
            continue
        for nxt in t.neighbors(b):
            walk = [b]
            prev, cur = b, nxt
            while deg[cur] == 2:
                walk.append(cur)
                a, c = t.neighbors(cur)
                prev, cur = cur, (c if a == prev else a)
            walk.append(cur)
            if deg[cur] >= 3 and b < cur:
                out.append(InternalPath(tuple(walk)))
    out.sort(key=lambda p: p.vertices)
    return out


def edge_type_counts(t: Graph) -> dict[tuple[int, int], int]:
    """Number of edges per unordered pair of endpoint degrees, keyed ``(i, j)`` with ``i <= j``."""
    deg = t.degrees
    c: Counter[tuple[int, int]] = Counter()
    for u, v in t.edges:
        a, b = deg[u], deg[v]
        c[(a, b) if a <= b else (b, a)] += 1
    return dict(sorted(c.items()))


def tree_center(t: Tree) -> tuple[int, ...]:
    """The one or two central vertices, found by repeatedly stripping leaves."""
    n = t.order
    if n <= 2:
        return tuple(range(n))
    deg = list(t.degrees)
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in t.neighbors(v):
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return tuple(sorted(layer))


def _rooted_code(t: Tree, root: int) -> bytes:
    # iterative post-order so deep paths never hit the recursion limit
    parent = [-1] * t.order
    order = [root]
    parent[root] = root
    for v in order:
        for w in t.neighbors(v):
            if parent[w] == -1:
                parent[w] = v
                order.append(w)
    kids: list[list[bytes]] = [[] for _ in range(t.order)]
    code = b""
    for v in reversed(order):
        code = b"(" + b"".join(sorted(kids[v])) + b")"
        if v != root:
            kids[parent[v]].append(code)
    return code


def canonical_code(t: Tree) -> bytes:
    """Label-invariant code: equal codes exactly when the trees are isomorphic.

    The tree is rooted at its center and encoded as nested parentheses with
    sorted child encodings. A bicentral tree takes the smaller of its two codes.
    """
    return min(_rooted_code(t, c) for c in tree_center(t))


# -- constructors -----------------------------------------------------------


def path_tree(n: int) -> Tree:
    return Tree(n, tuple((i, i + 1) for i in range(n - 1)))


def star_tree(n: int) -> Tree:
    """Star on ``n`` vertices with center 0."""
    return Tree(n, tuple((0, i) for i in range(1, n)))


def spider(legs: Sequence[int]) -> Tree:
    """Vertex 0 with one pendent path of each given length attached."""
    edges = []
    nxt = 1
    for length in legs:
        if length < 1:
            raise ValueError("leg lengths must be positive")
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Tree(nxt, tuple(edges))


def tree_from_parents(parents: Sequence[int]) -> Tree:
    """Tree from a parent array where ``parents[0]`` is ignored (the root)."""
    return Tree(len(parents), tuple((parents[i], i) for i in range(1, len(parents))))


def relabel(t: Graph, perm: Sequence[int]) -> Graph:
    """Apply the vertex bijection ``v -> perm[v]``."""
    cls = type(t)
    return cls(t.order, tuple((perm[u], perm[v]) for u, v in t.edges))


# -- text format --------------------------------------------------------------


def parse_tree(text: str, source: str = "<string>", first_line: int = 1) -> Tree:
    """Parse one tree: a line ``n`` followed by ``n-1`` lines ``u v`` with ``u < v``."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines or not lines[0].strip():
        raise TreeFormatError("missing order line", first_line, source)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise TreeFormatError(f"order must be an integer, got {lines[0].strip()!r}", first_line, source) from None
    if n < 1:
        raise TreeFormatError(f"order must be positive, got {n}", first_line, source)

    root = list(range(n))

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    edges = []
    body = lines[1:]
    for i, raw in enumerate(body):
        lineno = first_line + 1 + i
        parts = raw.split()
        if len(parts) != 2:
            raise TreeFormatError(f"expected 'u v', got {raw!r}", lineno, source)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise TreeFormatError(f"non-integer vertex in {raw!r}", lineno, source) from None
        if not (0 <= u < v < n):
            raise TreeFormatError(f"edge must satisfy 0 <= u < v < {n}, got {u} {v}", lineno, source)
        ru, rv = find(u), find(v)
        if ru == rv:
            raise TreeFormatError(f"edge {u} {v} closes a cycle", lineno, source)
        root[ru] = rv
        edges.append((u, v))
    if len(edges) != n - 1:
        raise TreeFormatError(
            f"expected {n - 1} edges, found {len(edges)}; graph is disconnected",
            first_line + len(lines) - 1,
            source,
        )
    return Tree(n, tuple(edges))


def parse_trees(text: str, source: str = "<string>") -> Iterator[Tree]:
    """Parse a stream of trees separated by blank lines."""
    block: list[str] = []
    start = 1
    for lineno, line in enumerate(text.splitlines() + [""], start=1):
        if line.strip():
            if not block:
                start = lineno
            block.append(line)
        elif block:
            yield parse_tree("\n".join(block), source, start)
            block = []


def format_tree(t: Tree) -> str:
    lines = [str(t.order)] + [f"{u} {v}" for u, v in sorted(t.edges)]
    return "\n".join(lines) + "\n"


def format_trees(trees: Iterable[Tree]) -> str:
    return "\n".join(format_tree(t) for t in trees)


def read_tree(path: str | Path) -> Tree:
    path = Path(path)
    return parse_tree(path.read_text(), str(path))
