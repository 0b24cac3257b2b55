"""Middle-partitioned sweep computing the Wiener decrease of every inset edge.

Each inset edge has a unique middle (vertex for odd cycles, edge for even
ones). Starting from every middle, cycle frames are grown outward two
vertices at a time; each extension updates the decrease and the band norm
from the parent frame using one antidiagonal sum, so no distances are ever
recomputed.

Two implementations of the frame step exist. :func:`extend_frame` works on
explicit :class:`SweepFrame` objects and is used for inspection and tests.
:func:`sweep_all` runs the same recurrence on an explicit stack over shared
buffers (vectors stored middle-first so that extension only writes two
slots, mirrored into numpy for long antidiagonals), which is what the CLI
uses.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from operator import mul
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .tree import SplitTable, Tree, check_size, edge_splits, tree_path

# op charges, one unit per arithmetic operation on a 64-bit value
INIT_VERTEX_OPS = 4
INIT_EDGE_OPS = 12
EXTEND_OPS = 20
FRAME_OPS = 2

# frames at least this long take the antidiagonal from the numpy mirror
NUMPY_DIAG_MIN = 40


@dataclass(frozen=True)
class Middle:
    kind: str  # "vertex" or "edge"
    u: int
    v: int = -1

    def __str__(self) -> str:
        return f"vertex {self.u}" if self.kind == "vertex" else f"edge {self.u}-{self.v}"


@dataclass(frozen=True, slots=True)
class InsetRecord:
    x: int
    y: int
    k: int
    dprime: int


@dataclass(frozen=True)
class SweepFrame:
    """Incremental state for one growing cycle.

    ``px``/``py`` are the cycle neighbors of the current endpoints, i.e. the
    directions extension must not take.
    """

    k: int
    x: int
    y: int
    px: int
    py: int
    vx: tuple[int, ...]
    vy: tuple[int, ...]
    sx: int
    sy: int
    wu: int
    dprime: int


@dataclass
class OpCounter:
    basic_ops: int = 0

    def charge(self, amount: int) -> None:
        self.basic_ops += amount


@dataclass(frozen=True)
class SweepStats:
    records: int
    basic_ops: int


def middle_of(tree: Tree, x: int, y: int) -> Middle:
    if x == y or tree.has_edge(x, y):
        raise ValueError(f"({x}, {y}) is not an inset edge")
    path = tree_path(tree, x, y)
    d = len(path) - 1
    if d % 2 == 0:
        return Middle("vertex", path[d // 2])
    a, b = path[d // 2], path[d // 2 + 1]
    return Middle("edge", min(a, b), max(a, b))


def enumerate_middles(tree: Tree) -> list[Middle]:
    deg = [len(a) for a in tree.adj]
    out = [Middle("vertex", v) for v in range(tree.n) if deg[v] >= 2]
    edges = sorted((min(u, v), max(u, v)) for u, v in tree.edges)
    out += [Middle("edge", u, v) for u, v in edges if deg[u] >= 2 and deg[v] >= 2]
    return out


def init_vertex_frames(tree: Tree, splits: SplitTable, v: int) -> list[SweepFrame]:
    nbrs = tree.adj[v]
    if len(nbrs) < 2:
        raise ValueError(f"vertex {v} has degree {len(nbrs)} < 2")
    frames = []
    for i, a in enumerate(nbrs):
        wa = splits.side(a, v)
        for b in nbrs[i + 1 :]:
            wb = splits.side(b, v)
            frames.append(SweepFrame(3, a, b, v, v, (wa,), (wb,), wa, wb, wa * wb, wa * wb))
    return frames


def init_edge_frames(tree: Tree, splits: SplitTable, e: tuple[int, int]) -> list[SweepFrame]:
    u, v = e
    if len(tree.adj[u]) < 2 or len(tree.adj[v]) < 2:
        raise ValueError(f"edge {u}-{v} needs both endpoint degrees >= 2")
    su, sv = splits.pair(u, v)
    frames = []
    for a in tree.adj[u]:
        if a == v:
            continue
        wa = splits.side(a, u)
        vx = (wa, su - wa)
        for b in tree.adj[v]:
            if b == u:
                continue
            wb = splits.side(b, v)
            vy = (wb, sv - wb)
            wu = vx[0] * vy[0] + vx[0] * vy[1] + vx[1] * vy[0]
            frames.append(SweepFrame(4, a, b, u, v, vx, vy, su, sv, wu, 2 * vx[0] * vy[0]))
    return frames


def antidiagonal(vx: tuple[int, ...], vy: tuple[int, ...]) -> int:
    """Sum of vx[i]*vy[j] over i + j = len - 1 (the band's outermost diagonal)."""
    return sum(map(mul, vx, reversed(vy)))


def step(frame: SweepFrame, a: int, b: int, diag: int) -> tuple[int, int]:
    """Decrease and band norm of the child frame grown by weights ``a``, ``b``."""
    k = frame.k
    c = 1 if k % 2 else 2
    xn, yn = frame.vx[-1], frame.vy[-1]
    dprime = frame.dprime - 2 * frame.wu + c * diag + a * (2 * frame.sy - c * yn) + b * (2 * frame.sx - c * xn)
    wu = frame.wu - diag + a * yn + b * xn
    if k == 3:
        dprime += a * b
        wu -= a * b
    return dprime, wu


def extend_frame(
    frame: SweepFrame,
    u: int,
    v: int,
    splits: SplitTable,
    tree: Optional[Tree] = None,
    counter: Optional[OpCounter] = None,
) -> SweepFrame:
    """Grow ``frame`` by the edges ``x-u`` and ``y-v``.

    The new endpoints' trailing trees are carved out of the old endpoints'
    ones, so ``vx`` becomes ``[w_u, vx[0] - w_u, vx[1], ...]``.
    """
    if u == frame.px or v == frame.py:
        raise ValueError("extension must leave the cycle path")
    if tree is not None and (not tree.has_edge(u, frame.x) or not tree.has_edge(v, frame.y)):
        raise ValueError("extension vertices must neighbor the frame endpoints")
    a = splits.side(u, frame.x)
    b = splits.side(v, frame.y)
    diag = antidiagonal(frame.vx, frame.vy)
    dprime, wu = step(frame, a, b, diag)
    if counter is not None:
        counter.charge(EXTEND_OPS + 2 * len(frame.vx))
    return replace(
        frame,
        k=frame.k + 2,
        x=u,
        y=v,
        px=frame.x,
        py=frame.y,
        vx=(a, frame.vx[0] - a) + frame.vx[1:],
        vy=(b, frame.vy[0] - b) + frame.vy[1:],
        wu=wu,
        dprime=dprime,
    )


def _initial_entries(tree: Tree, splits: SplitTable, middle: Middle) -> list[tuple]:
    # stack entries: (k, x, px, y, py, dprime, wu, sx, sy, x_inner, x_end, y_inner, y_end)
    if middle.kind == "vertex":
        frames = init_vertex_frames(tree, splits, middle.u)
        return [(3, f.x, f.px, f.y, f.py, f.dprime, f.wu, f.sx, f.sy, 0, f.vx[0], 0, f.vy[0]) for f in frames]
    frames = init_edge_frames(tree, splits, (middle.u, middle.v))
    return [
        (4, f.x, f.px, f.y, f.py, f.dprime, f.wu, f.sx, f.sy, f.vx[1], f.vx[0], f.vy[1], f.vy[0])
        for f in frames
    ]


def sweep_middles(
    tree: Tree,
    splits: SplitTable,
    middles: Iterable[Middle],
    sink: Callable[[int, int, int, int], None],
    charge: Optional[Callable[[int, int, int], None]] = None,
    probe: Optional[Callable[..., None]] = None,
) -> SweepStats:
    """Run the sweep over the given middles, calling ``sink(x, y, k, dprime)`` per inset edge.

    ``charge(x, y, ops)`` receives the operations attributed to each emitted
    frame; ``probe(x, y, k, vx, vy, dprime, wu)`` exposes the frame vectors.
    Both are for verification and slow the sweep down.
    """
    adj = tree.adj
    parent = splits.parent
    weight = splits.weight
    n = splits.n
    # vectors stored middle-first: slot 0 is nearest the middle
    xb = [0] * (n // 2 + 2)
    yb = [0] * (n // 2 + 2)
    xm = np.zeros(n // 2 + 2, dtype=np.int64)
    ym = np.zeros(n // 2 + 2, dtype=np.int64)
    dot = np.dot
    ops = 0
    count = 0
    for middle in middles:
        stack = _initial_entries(tree, splits, middle)
        pop = stack.pop
        push = stack.append
        while stack:
            k, x, px, y, py, dp, wu, sx, sy, xi, xe, yi, ye = pop()
            K = k >> 1
            if K >= 2:
                xb[K - 2] = xm[K - 2] = xi
                yb[K - 2] = ym[K - 2] = yi
            xb[K - 1] = xm[K - 1] = xe
            yb[K - 1] = ym[K - 1] = ye
            if x < y:
                sink(x, y, k, dp)
            else:
                sink(y, x, k, dp)
            count += 1
            fops = FRAME_OPS + (INIT_VERTEX_OPS if k == 3 else INIT_EDGE_OPS if k == 4 else EXTEND_OPS)
            if probe is not None:
                probe(x, y, k, tuple(reversed(xb[:K])), tuple(reversed(yb[:K])), dp, wu)
            ax = adj[x]
            ay = adj[y]
            if len(ax) > 1 and len(ay) > 1:
                if K >= NUMPY_DIAG_MIN:
                    diag = int(dot(xm[:K], ym[K - 1 :: -1]))
                elif K > 1:
                    diag = sum(map(mul, xb[:K], yb[K - 1 :: -1]))
                else:
                    diag = xb[0] * yb[0]
                fops += 2 * K
                c = 1 if k & 1 else 2
                xn = xb[0]
                yn = yb[0]
                # same recurrence as step(), inlined
                base = dp - 2 * wu + c * diag
                ty = 2 * sy - c * yn
                tx = 2 * sx - c * xn
                wbase = wu - diag
                k2 = k + 2
                for u in ax:
                    if u == px:
                        continue
                    a = weight[u] if parent[u] == x else n - weight[x]
                    da = base + a * ty
                    wa = wbase + a * yn
                    xa = xe - a
                    for v in ay:
                        if v == py:
                            continue
                        b = weight[v] if parent[v] == y else n - weight[y]
                        if k == 3:
                            ab = a * b
                            push((k2, u, x, v, y, da + b * tx + ab, wa + b * xn - ab, sx, sy, xa, a, ye - b, b))
                        else:
                            push((k2, u, x, v, y, da + b * tx, wa + b * xn, sx, sy, xa, a, ye - b, b))
            ops += fops
            if charge is not None:
                charge(x, y, fops)
    return SweepStats(count, ops)


def sweep_all(
    tree: Tree,
    splits: SplitTable,
    sink: Callable[[int, int, int, int], None],
    charge: Optional[Callable[[int, int, int], None]] = None,
    probe: Optional[Callable[..., None]] = None,
) -> SweepStats:
    check_size(tree.n)
    if tree.n < 3:
        return SweepStats(0, 0)
    return sweep_middles(tree, splits, enumerate_middles(tree), sink, charge, probe)


def collect_rows(tree: Tree, splits: Optional[SplitTable] = None) -> tuple[list[tuple[int, int, int, int]], SweepStats]:
    """Raw ``(x, y, k, dprime)`` tuples sorted by ``(x, y)``, plus sweep stats."""
    if splits is None:
        splits = edge_splits(tree)
    rows: list[tuple[int, int, int, int]] = []
    append = rows.append
    stats = sweep_all(tree, splits, lambda x, y, k, d: append((x, y, k, d)))
    rows.sort()
    return rows, stats


def collect(tree: Tree, splits: Optional[SplitTable] = None) -> list[InsetRecord]:
    """All inset records, sorted by ``(x, y)``."""
    return [InsetRecord(*r) for r in collect_rows(tree, splits)[0]]


@dataclass(frozen=True)
class RecordColumns:
    """Bulk sweep output: one contiguous int64 array per field."""

    x: np.ndarray
    y: np.ndarray
    k: np.ndarray
    dprime: np.ndarray

    def __len__(self) -> int:
        return len(self.x)

    @classmethod
    def from_rows(cls, rows: Sequence[tuple[int, int, int, int]]) -> "RecordColumns":
        flat = np.array(rows, dtype=np.int64).reshape(-1, 4)
        return cls(*(np.ascontiguousarray(flat[:, i]) for i in range(4)))

    def take(self, order: np.ndarray) -> "RecordColumns":
        return RecordColumns(self.x[order], self.y[order], self.k[order], self.dprime[order])

    def records(self, lo: int = 0, hi: Optional[int] = None) -> list[InsetRecord]:
        cols = (c[lo:hi].tolist() for c in (self.x, self.y, self.k, self.dprime))
        return [InsetRecord(*r) for r in zip(*cols)]


def collect_columns(tree: Tree, splits: Optional[SplitTable] = None, workers: int = 1) -> RecordColumns:
    """Sweep output as :class:`RecordColumns` in ``(x, y)`` order."""
    if splits is None:
        splits = edge_splits(tree)
    if workers > 1:
        return RecordColumns.from_rows(_parallel_rows(tree, splits, workers))
    return RecordColumns.from_rows(collect_rows(tree, splits)[0])


# -- parallel driver ----------------------------------------------------------

_WORKER_STATE: dict = {}


def _worker_init(tree: Tree, splits: SplitTable) -> None:
    _WORKER_STATE["tree"] = tree
    _WORKER_STATE["splits"] = splits


def _worker_run(middles: list[Middle]) -> list[tuple[int, int, int, int]]:
    rows: list[tuple[int, int, int, int]] = []
    append = rows.append
    sweep_middles(_WORKER_STATE["tree"], _WORKER_STATE["splits"], middles, lambda x, y, k, d: append((x, y, k, d)))
    return rows


def _parallel_rows(tree: Tree, splits: SplitTable, workers: int) -> list[tuple[int, int, int, int]]:
    check_size(tree.n)
    middles = enumerate_middles(tree) if tree.n >= 3 else []
    if workers <= 1 or len(middles) < 2:
        return collect_rows(tree, splits)[0]
    chunks = [middles[i::workers] for i in range(workers)]
    chunks = [c for c in chunks if c]
    rows: list[tuple[int, int, int, int]] = []
    with ProcessPoolExecutor(len(chunks), initializer=_worker_init, initargs=(tree, splits)) as pool:
        for part in pool.map(_worker_run, chunks):
            rows.extend(part)
    rows.sort()
    return rows


def sweep_parallel(tree: Tree, splits: SplitTable, workers: Optional[int] = None) -> list[InsetRecord]:
    """Same records as :func:`collect`, with middles spread over worker processes."""
    if workers is None:
        workers = os.cpu_count() or 1
    return [InsetRecord(*r) for r in _parallel_rows(tree, splits, workers)]
