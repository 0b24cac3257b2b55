"""Direct evaluation of the Wiener decrease for a single inset edge.

Three independent evaluators share the signature ``(tree, x, y) -> int``:

* :func:`dprime_lemma2` via the coefficient-matrix norm over weight vectors
  built from the split table,
* :func:`dprime_lemma1` via pairwise tree distances across the cycle halves,
  with trailing-tree sizes found by nearest-cycle-vertex counting,
* :func:`dprime_shortcut_oracle` via all-pairs distances before and after
  adding the edge.

Weight vectors are ordered from the inset endpoint towards the middle:
``vx[0]`` belongs to ``x`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .tree import SplitTable, Tree, check_size, distance_matrix, edge_splits, tree_path


class NotInsetEdgeError(ValueError):
    """The vertex pair is equal or already adjacent in the tree."""


def _require_inset(tree: Tree, x: int, y: int) -> None:
    if x == y:
        raise NotInsetEdgeError(f"x == y == {x}")
    if tree.has_edge(x, y):
        raise NotInsetEdgeError(f"({x}, {y}) is already a tree edge")


@dataclass(frozen=True)
class CyclePartition:
    x: int
    y: int
    k: int
    cx: tuple[int, ...]
    cy: tuple[int, ...]
    cm: Optional[int]


@dataclass(frozen=True)
class WeightVectors:
    k: int
    vx: tuple[int, ...]
    vy: tuple[int, ...]


@dataclass(frozen=True)
class CoefficientMatrix:
    k: int
    entries: tuple[tuple[int, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]


def cycle_partition(tree: Tree, x: int, y: int) -> CyclePartition:
    _require_inset(tree, x, y)
    path = tree_path(tree, x, y)
    k = len(path)
    half = k // 2
    cm = path[half] if k % 2 else None
    return CyclePartition(x, y, k, tuple(path[:half]), tuple(reversed(path[-half:])), cm)


def _half_weights(splits: SplitTable, side: tuple[int, ...], beyond: int) -> list[int]:
    # beyond: the cycle vertex following side[-1] towards the other endpoint
    n = splits.n
    chain = list(side) + [beyond]
    out = [splits.side(chain[0], chain[1])]
    for i in range(1, len(side)):
        c = chain[i]
        out.append(n - splits.side(chain[i - 1], c) - splits.side(chain[i + 1], c))
    return out


def weight_vectors(tree: Tree, splits: SplitTable, part: CyclePartition) -> WeightVectors:
    """Trailing-tree sizes of the cycle halves, read off the split table in O(k)."""
    if part.cm is not None:
        after_x = after_y = part.cm
    else:
        after_x, after_y = part.cy[-1], part.cx[-1]
    vx = _half_weights(splits, part.cx, after_x)
    vy = _half_weights(splits, part.cy, after_y)
    return WeightVectors(part.k, tuple(vx), tuple(vy))


def coefficient_matrix(k: int) -> CoefficientMatrix:
    """Build F_k twice (piecewise D_k + O_k and closed form) and insist they agree."""
    if k < 3:
        raise ValueError("cycle length must be at least 3")
    half = k // 2
    piecewise = []
    closed = []
    for i in range(1, half + 1):
        prow, crow = [], []
        for j in range(1, half + 1):
            d = 2 * (half - i - j + 1) if i + j <= half else 0
            o = (1 if i + j - 1 <= half else 0) if k % 2 else 0
            prow.append(d + o)
            crow.append(max(k + 2 - 2 * (i + j), 0))
        piecewise.append(tuple(prow))
        closed.append(tuple(crow))
    if piecewise != closed:
        raise AssertionError(f"coefficient constructions disagree for k={k}")
    return CoefficientMatrix(k, tuple(closed))


def norm_lemma2(w: WeightVectors) -> int:
    k = w.k
    total = 0
    for i, a in enumerate(w.vx):
        for j, b in enumerate(w.vy):
            c = k - 2 - 2 * (i + j)
            if c <= 0:
                break
            total += c * a * b
    return total


def dprime_lemma2(tree: Tree, x: int, y: int, splits: Optional[SplitTable] = None) -> int:
    if splits is None:
        splits = edge_splits(tree)
    check_size(tree.n)
    return norm_lemma2(weight_vectors(tree, splits, cycle_partition(tree, x, y)))


def dprime_lemma1(tree: Tree, x: int, y: int, dist: Optional[np.ndarray] = None) -> int:
    """Pairwise cycle formula using tree distances only (no split table)."""
    _require_inset(tree, x, y)
    if dist is None:
        dist = distance_matrix(tree)
    path = tree_path(tree, x, y)
    k = len(path)
    dx, dy = dist[x, path], dist[y, path]
    cx = [v for v, a, b in zip(path, dx, dy) if a < b]
    cy = [v for v, a, b in zip(path, dx, dy) if a > b]
    # T_v size: vertices whose nearest cycle vertex is v (unique in a tree)
    nearest = np.argmin(dist[:, path], axis=1)
    w = np.bincount(nearest, minlength=k)
    pos = {v: i for i, v in enumerate(path)}
    wx = np.array([w[pos[v]] for v in cx], dtype=np.int64)
    wy = np.array([w[pos[v]] for v in cy], dtype=np.int64)
    d = dist[np.ix_(cx, cy)]
    coef = np.where(2 * d > k, 2 * d - k, 0)
    return int((coef * np.outer(wx, wy)).sum())


def dprime_shortcut_oracle(tree: Tree, x: int, y: int, dist: Optional[np.ndarray] = None) -> int:
    """D(T) - D(T + xy) from all-pairs distances, O(n^2)."""
    _require_inset(tree, x, y)
    if dist is None:
        dist = distance_matrix(tree)
    via_xy = dist[:, x, None] + 1 + dist[None, y, :]
    via_yx = dist[:, y, None] + 1 + dist[None, x, :]
    shortened = np.minimum(dist, np.minimum(via_xy, via_yx))
    return int((dist - shortened).sum()) // 2


def adprime(dp: int, n: int) -> Fraction:
    if n < 3:
        raise ValueError("inset edges need at least three vertices")
    return Fraction(dp, n * (n - 1) // 2)


EVALUATORS = {
    "lemma2": dprime_lemma2,
    "lemma1": dprime_lemma1,
    "shortcut": dprime_shortcut_oracle,
}
