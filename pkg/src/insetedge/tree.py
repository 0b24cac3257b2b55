"""Trees, edge-list parsing, side counts and Wiener index.

Vertices are dense ids ``0..n-1`` assigned in order of first appearance;
the original tokens are kept in :attr:`Tree.labels` for output.
"""

from __future__ import annotations

import heapq
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

MAX_VERTICES = 2_000_000


class TreeError(ValueError):
    """Input does not describe a valid tree."""


class SizeGuardError(ValueError):
    """Tree is too large for exact 64-bit distance sums."""


def check_size(n: int) -> None:
    if n > MAX_VERTICES:
        raise SizeGuardError(f"n={n} exceeds the supported maximum of {MAX_VERTICES}")


@dataclass(frozen=True)
class Tree:
    n: int
    labels: tuple[str, ...]
    adj: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    _index: dict[str, int] = field(repr=False, compare=False, hash=False, default=None)

    @classmethod
    def from_edges(cls, pairs: Iterable[tuple[object, object]]) -> "Tree":
        """Build a tree from labeled edges, validating the tree invariants."""
        index: dict[str, int] = {}
        labels: list[str] = []
        edges: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()

        def vid(token: object) -> int:
            key = str(token)
            if key not in index:
                index[key] = len(labels)
                labels.append(key)
            return index[key]

        for a, b in pairs:
            u, v = vid(a), vid(b)
            if u == v:
                raise TreeError(f"self-loop at vertex {labels[u]!r}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise TreeError(f"duplicate edge {labels[u]} {labels[v]}")
            seen.add(key)
            edges.append((u, v))

        n = len(labels)
        if n == 0:
            raise TreeError("empty input")
        check_size(n)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)

        reached = _bfs_order(adj, 0)
        if len(reached) < n:
            raise TreeError(f"disconnected input: {n - len(reached)} vertices unreachable")
        if len(edges) != n - 1:
            raise TreeError(f"cycle detected: {len(edges)} edges on {n} vertices")

        return cls(n, tuple(labels), tuple(tuple(a) for a in adj), tuple(edges), index)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def vertex(self, label: object) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"unknown vertex {label!r}") from None

    def has_edge(self, u: int, v: int) -> bool:
        a, b = (u, v) if len(self.adj[u]) <= len(self.adj[v]) else (v, u)
        return b in self.adj[a]

    def to_text(self) -> str:
        lines = [f"# n={self.n}"]
        lines += [f"{self.labels[u]} {self.labels[v]}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def parse_tree(text: str | bytes) -> Tree:
    """Parse the whitespace-separated edge-list format.

    Blank lines and ``#`` comments are skipped. A single-vertex tree can't be
    written in this format, so every valid input has at least one edge.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TreeError(f"line {lineno}: expected two vertex tokens, got {len(parts)}")
        pairs.append((parts[0], parts[1]))
    return Tree.from_edges(pairs)


def _bfs_order(adj: Sequence[Sequence[int]], source: int) -> list[int]:
    seen = [False] * len(adj)
    seen[source] = True
    order = [source]
    for u in order:
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                order.append(w)
    return order


@dataclass(frozen=True)
class SplitTable:
    """Side counts for every tree edge, from leaf stripping.

    Stripping roots the tree at the last surviving vertex: ``parent[v]`` is
    the neighbor ``v`` was stripped towards and ``weight[v]`` the number of
    vertices removed through ``v`` (its subtree size). The root has parent -1.
    """

    n: int
    parent: tuple[int, ...]
    weight: tuple[int, ...]
    ops: int = 0

    def side(self, u: int, v: int) -> int:
        """Number of vertices strictly closer to ``u`` than to ``v`` (uv a tree edge)."""
        if self.parent[u] == v:
            return self.weight[u]
        if self.parent[v] == u:
            return self.n - self.weight[v]
        raise KeyError(f"({u}, {v}) is not a tree edge")

    def pair(self, u: int, v: int) -> tuple[int, int]:
        return self.side(u, v), self.side(v, u)

    def items(self):
        """Yield ``(u, v, side_u, side_v)`` with ``v`` the stripping parent of ``u``."""
        for u, p in enumerate(self.parent):
            if p >= 0:
                yield u, p, self.weight[u], self.n - self.weight[u]


def edge_splits(tree: Tree) -> SplitTable:
    """Leaf-stripping computation of all edge side counts in O(n)."""
    n = tree.n
    adj = tree.adj
    deg = [len(a) for a in adj]
    weight = [1] * n
    parent = [-1] * n
    removed = [False] * n
    queue = deque(v for v in range(n) if deg[v] == 1)
    remaining = n - 1
    ops = n
    while queue and remaining:
        v = queue.popleft()
        removed[v] = True
        for u in adj[v]:
            ops += 1
            if not removed[u]:
                break
        parent[v] = u
        weight[u] += weight[v]
        remaining -= 1
        deg[u] -= 1
        if deg[u] == 1:
            queue.append(u)
        ops += 4
    return SplitTable(n, tuple(parent), tuple(weight), ops)


def wiener_from_splits(splits: SplitTable) -> int:
    check_size(splits.n)
    return sum(a * b for _, _, a, b in splits.items())


def bfs_distances(tree: Tree, source: int) -> list[int]:
    dist = [-1] * tree.n
    dist[source] = 0
    queue = [source]
    for u in queue:
        du = dist[u] + 1
        for w in tree.adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def wiener_bfs(tree: Tree) -> int:
    """Wiener index by one BFS per vertex. O(n^2); oracle use only."""
    return sum(sum(bfs_distances(tree, s)) for s in range(tree.n)) // 2


def distance_matrix(tree: Tree):
    import numpy as np

    return np.array([bfs_distances(tree, s) for s in range(tree.n)], dtype=np.int64)


def average_distance(d: int, n: int) -> Fraction:
    if n < 2:
        raise ValueError("average distance needs at least two vertices")
    return Fraction(d, n * (n - 1) // 2)


def tree_path(tree: Tree, x: int, y: int) -> list[int]:
    if x == y:
        raise ValueError("path endpoints must differ")
    for v in (x, y):
        if not 0 <= v < tree.n:
            raise KeyError(f"unknown vertex {v}")
    prev = [-1] * tree.n
    prev[x] = x
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if u == y:
            break
        for w in tree.adj[u]:
            if prev[w] < 0:
                prev[w] = u
                queue.append(w)
    path = [y]
    while path[-1] != x:
        path.append(prev[path[-1]])
    path.reverse()
    return path


# -- generators ---------------------------------------------------------------

GENERATOR_KINDS = ("path", "star", "caterpillar", "random")


def generate(kind: str, n: int, seed: int = 0) -> Tree:
    """Deterministic tree on labels ``1..n``.

    ``random`` decodes a uniformly drawn Prüfer sequence, so it is uniform
    over labeled trees. ``caterpillar`` uses a spine of ``ceil(n/2)`` vertices
    with the rest attached as legs round-robin; only ``random`` uses the seed.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    check_size(n)
    if kind == "path":
        pairs = [(i, i + 1) for i in range(1, n)]
    elif kind == "star":
        pairs = [(1, i) for i in range(2, n + 1)]
    elif kind == "caterpillar":
        spine = (n + 1) // 2
        pairs = [(i, i + 1) for i in range(1, spine)]
        pairs += [(1 + (j % spine), spine + 1 + j) for j in range(n - spine)]
    elif kind == "random":
        rng = random.Random(seed)
        pairs = prufer_decode([rng.randint(1, n) for _ in range(n - 2)], n)
    else:
        raise ValueError(f"unknown tree kind {kind!r}")
    return Tree.from_edges(pairs)


def prufer_decode(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * (n + 1)
    for s in seq:
        degree[s] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    pairs = []
    for s in seq:
        leaf = heapq.heappop(leaves)
        pairs.append((leaf, s))
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(leaves, s)
    pairs.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return pairs
