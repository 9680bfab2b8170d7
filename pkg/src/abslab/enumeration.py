"""Duplicate-free generation of non-isomorphic free trees.

Trees are produced as canonical level sequences of center-rooted trees using
the constant-amortized-time successor rule of Wright, Richmond, Odlyzko and
McKay (SIAM J. Comput. 15, 1986). Each free tree appears exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .tree import Tree

__all__ = ["EnumSpec", "enumerate_trees", "count_trees", "level_sequences", "parents_from_levels"]


@dataclass(frozen=True)
class EnumSpec:
    order: int
    pendent: int | None = None
    max_degree: int | None = None

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if self.max_degree is not None and self.max_degree < 1:
            raise ValueError(f"max_degree must be >= 1, got {self.max_degree}")

    def is_empty(self) -> bool:
        """True when no tree can meet the filters, so generation can be skipped."""
        n, p, d = self.order, self.pendent, self.max_degree
        if p is not None:
            if n == 1 and p != 0:
                return True
            if n == 2 and p != 2:
                return True
            if n >= 3 and not 2 <= p <= n - 1:
                return True
        if d is not None and n >= 3:
            if d < 2:
                return True
            if d == 2 and p not in (None, 2):
                return True
        return False


def _next_rooted(seq: list[int], p: int) -> list[int] | None:
    # successor of a rooted level sequence, changing positions >= p
    if p == 0:
        return None
    q = p - 1
    while seq[q] != seq[p] - 1:
        q -= 1
    out = seq[:]
    shift = p - q
    for i in range(p, len(out)):
        out[i] = out[i - shift]
    return out


def _last_non_one(seq: list[int]) -> int:
    p = len(seq) - 1
    while seq[p] == 1:
        p -= 1
    return p


def _split(seq: list[int]) -> tuple[list[int], list[int]]:
    # first principal subtree (levels shifted up by one) and the rest with the root
    m = len(seq)
    for i in range(2, len(seq)):
        if seq[i] == 1:
            m = i
            break
    left = [x - 1 for x in seq[1:m]]
    rest = [0] + seq[m:]
    return left, rest


def _repair(seq: list[int]) -> list[int]:
    """Return ``seq`` if it encodes a canonical free tree, else the next sequence that does."""
    left, rest = _split(seq)
    lh, rh = max(left), max(rest)
    ok = rh >= lh
    if ok and rh == lh:
        if len(left) > len(rest) or (len(left) == len(rest) and left > rest):
            ok = False
    if ok:
        return seq
    p = len(left)
    nxt = _next_rooted(seq, p)
    if seq[p] > 2:
        new_left, _ = _split(nxt)
        tail = list(range(1, max(new_left) + 2))
        nxt[len(nxt) - len(tail):] = tail
    return nxt


def level_sequences(n: int) -> Iterator[list[int]]:
    """Canonical level sequences, one per free tree of order ``n``."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if n <= 3:
        yield list(range(min(n, 2))) + [1] * max(0, n - 2)
        return
    seq: list[int] | None = list(range(n // 2 + 1)) + list(range(1, (n + 1) // 2))
    while seq is not None:
        seq = _repair(seq)
        yield seq
        seq = _next_rooted(seq, _last_non_one(seq))


def parents_from_levels(seq: list[int]) -> list[int]:
    parents = [0] * len(seq)
    last = [0] * (max(seq) + 1)
    for i, lv in enumerate(seq):
        if i:
            parents[i] = last[lv - 1]
        last[lv] = i
    return parents


def _degrees(parents: list[int]) -> list[int]:
    deg = [0] * len(parents)
    for i in range(1, len(parents)):
        deg[i] += 1
        deg[parents[i]] += 1
    return deg


def _filtered(spec: EnumSpec) -> Iterator[list[int]]:
    if spec.is_empty():
        return
    n, p, dmax = spec.order, spec.pendent, spec.max_degree
    if dmax is not None and dmax <= 2 and n >= 3:
        # only the path qualifies
        yield list(range(n))
        return
    for seq in level_sequences(n):
        if p is None and dmax is None:
            yield seq
            continue
        deg = _degrees(parents_from_levels(seq))
        if p is not None and deg.count(1) != p:
            continue
        if dmax is not None and max(deg) > dmax:
            continue
        yield seq


def enumerate_trees(spec: EnumSpec, shard: tuple[int, int] | None = None) -> Iterator[Tree]:
    """Yield one tree per isomorphism class meeting ``spec``, in a fixed order.

    ``shard=(i, k)`` keeps only positions ``i, i+k, i+2k, ...`` of the filtered
    stream, so ``k`` workers with ``i = 0..k-1`` together cover it exactly once.
    """
    if shard is not None:
        i, k = shard
        if not (k >= 1 and 0 <= i < k):
            raise ValueError(f"invalid shard {shard}")
    for pos, seq in enumerate(_filtered(spec)):
        if shard is not None and pos % shard[1] != shard[0]:
            continue
        parents = parents_from_levels(seq)
        yield Tree(len(seq), tuple((parents[v], v) for v in range(1, len(seq))))


def count_trees(spec: EnumSpec) -> int:
    """Number of trees :func:`enumerate_trees` would yield, without building them."""
    return sum(1 for _ in _filtered(spec))
