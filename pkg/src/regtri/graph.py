"""Compact simple graphs with exact triangle census.

A :class:`Graph` is an immutable undirected simple graph on vertices
``0..n-1``. Each adjacency row is a bitset; the packed ``uint64`` word matrix
(:attr:`Graph.bits`) feeds the kernels, and the same rows as Python ints
(:attr:`Graph.rows`) serve the set-algebra in this module.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ._backend import kernels
from ._pykernels import rows_to_bits
from .errors import EdgeError, KernelCheckError, ValidationError

MAX_VERTICES = 4096


def _iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def normalize_edges(pairs, n: int) -> list[tuple[int, int]]:
    """Validate pairs as an edge set on ``n`` vertices; return sorted (u, v), u < v."""
    seen = set()
    for pair in pairs:
        u, v = (int(x) for x in pair)
        if u == v:
            raise EdgeError(f"self-loop at {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeError(f"edge ({u}, {v}) out of range for n={n}")
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise EdgeError(f"duplicate edge {e}")
        seen.add(e)
    return sorted(seen)


class Graph:
    """Immutable simple graph stored as adjacency bitsets."""

    __slots__ = ("n", "_rows", "_bits", "_edges")

    def __init__(self, n: int, rows, *, _trusted: bool = False):
        if n < 0 or n > MAX_VERTICES:
            raise ValidationError(f"vertex count {n} outside [0, {MAX_VERTICES}]")
        rows = tuple(int(r) for r in rows)
        if len(rows) != n:
            raise ValidationError(f"expected {n} rows, got {len(rows)}")
        if not _trusted:
            full = (1 << n) - 1
            for v, r in enumerate(rows):
                if r & ~full or r < 0:
                    raise EdgeError(f"row {v} has bits outside 0..{n - 1}")
                if (r >> v) & 1:
                    raise EdgeError(f"self-loop at {v}")
                for u in _iter_bits(r):
                    if not (rows[u] >> v) & 1:
                        raise EdgeError(f"asymmetric adjacency between {v} and {u}")
        self.n = n
        self._rows = rows
        self._bits = None
        self._edges = None

    @classmethod
    def from_edges(cls, n: int, edges) -> Graph:
        rows = [0] * n
        for u, v in normalize_edges(edges, n):
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows, _trusted=True)

    @classmethod
    def from_rows(cls, rows) -> Graph:
        rows = list(rows)
        return cls(len(rows), rows)

    @classmethod
    def from_bits(cls, bits) -> Graph:
        arr = np.asarray(bits, dtype=np.uint64)
        rows = [int.from_bytes(r.tobytes(), "little") for r in arr]
        return cls(len(rows), rows)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, [0] * n, _trusted=True)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)], _trusted=True)

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> Graph:
        left = (1 << a) - 1
        right = ((1 << b) - 1) << a
        return cls(a + b, [right] * a + [left] * b, _trusted=True)

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def bits(self) -> np.ndarray:
        """Read-only (n, words) uint64 adjacency matrix, bit j of row i = edge ij."""
        if self._bits is None:
            arr = rows_to_bits(self._rows, self.n)
            arr.flags.writeable = False
            self._bits = arr
        return self._bits

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._rows[u] >> v) & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_iter_bits(self._rows[v]))

    def degree(self, v: int) -> int:
        return self._rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self._rows]

    def edges(self) -> list[tuple[int, int]]:
        if self._edges is None:
            out = []
            for u, r in enumerate(self._rows):
                out.extend((u, v) for v in _iter_bits(r >> (u + 1) << (u + 1)))
            self._edges = out
        return list(self._edges)

    @property
    def num_edges(self) -> int:
        total = sum(self.degrees())
        assert total % 2 == 0
        return total // 2

    def is_regular(self, k: int | None = None) -> bool:
        degs = set(self.degrees())
        if not degs:
            return True
        return len(degs) == 1 and (k is None or degs == {k})

    def common_neighbors(self, u: int, v: int) -> int:
        return (self._rows[u] & self._rows[v]).bit_count()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._rows == other._rows

    def __hash__(self):
        return hash((self.n, self._rows))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


# ---------------------------------------------------------------- census

@dataclass(frozen=True)
class TriangleCensus:
    total: int
    per_vertex: tuple[int, ...]
    per_edge: dict = field(repr=False)

    def check(self) -> None:
        if sum(self.per_vertex) != 3 * self.total:
            raise KernelCheckError("sum of T(v) != 3 T(G)")
        if sum(self.per_edge.values()) != 3 * self.total:
            raise KernelCheckError("sum of T(e) != 3 T(G)")


def naive_triangle_count(g: Graph) -> int:
    """Triple loop over vertex triples. Independent oracle; n <= 64 only."""
    if g.n > 64:
        raise ValidationError("naive triangle count is limited to n <= 64")
    return sum(1 for a, b, c in combinations(range(g.n), 3)
               if g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c))


def count_triangles(g: Graph, cross_check: bool = False) -> TriangleCensus:
    """Exact triangle census: T(G), T(v) for every vertex, T(e) for every edge.

    Per-edge counts come from row intersections; per-edge keys follow the
    row-major edge order. With ``cross_check`` (n <= 64) the total is also
    recomputed by the naive triple loop.
    """
    edges, counts = kernels.edge_triangles(g.bits)
    per_vertex = np.zeros(g.n, dtype=np.int64)
    np.add.at(per_vertex, edges[:, 0], counts)
    np.add.at(per_vertex, edges[:, 1], counts)
    s = int(counts.sum())
    if s % 3:
        raise KernelCheckError("edge triangle counts do not sum to a multiple of 3")
    census = TriangleCensus(
        total=s // 3,
        per_vertex=tuple(int(x) // 2 for x in per_vertex),
        per_edge=dict(zip(map(tuple, edges.tolist()), counts.tolist())),
    )
    if cross_check and g.n <= 64:
        naive = naive_triangle_count(g)
        if naive != census.total:
            raise KernelCheckError(f"census mismatch: bitset {census.total}, naive {naive}")
    return census


def triangle_total(g: Graph) -> int:
    return int(kernels.triangle_total(g.bits))


def find_triangle(g: Graph, vertices: int | None = None):
    """Some triangle (a, b, c) with a < b < c, or None. Optionally inside a vertex mask."""
    rows = g.rows
    allowed = (1 << g.n) - 1 if vertices is None else vertices
    for a in _iter_bits(allowed):
        ra = rows[a] & allowed
        for b in _iter_bits(ra >> (a + 1) << (a + 1)):
            common = ra & rows[b]
            common = common >> (b + 1) << (b + 1)
            if common:
                return a, b, (common & -common).bit_length() - 1
    return None


# ---------------------------------------------------------- bipartiteness

@dataclass(frozen=True)
class BipartiteResult:
    bipartite: bool
    coloring: tuple[int, ...] | None = None
    odd_cycle: tuple[int, ...] | None = None

    def __bool__(self):
        return self.bipartite


def is_bipartite(g: Graph) -> BipartiteResult:
    """BFS two-colouring. Returns a proper colouring, or an odd cycle witness."""
    # layer-by-layer BFS on bitsets; the slower per-vertex walk only runs to
    # extract a witness
    rows = g.rows
    unseen = (1 << g.n) - 1
    sides = [0, 0]
    while unseen:
        frontier = unseen & -unseen
        side = 0
        while frontier:
            unseen &= ~frontier
            sides[side] |= frontier
            nxt = 0
            for v in _iter_bits(frontier):
                nxt |= rows[v]
            frontier = nxt & unseen
            side ^= 1
    if all(rows[v] & sides[0] == 0 for v in _iter_bits(sides[0])) and \
            all(rows[v] & sides[1] == 0 for v in _iter_bits(sides[1])):
        return BipartiteResult(True, coloring=tuple((sides[1] >> v) & 1 for v in range(g.n)))
    return _bfs_witness(g)


def _bfs_witness(g: Graph) -> BipartiteResult:
    color = [-1] * g.n
    parent = [-1] * g.n
    depth = [0] * g.n
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in _iter_bits(g.rows[u]):
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    queue.append(w)
                elif color[w] == color[u]:
                    return BipartiteResult(False, odd_cycle=_tree_cycle(u, w, parent, depth))
    return BipartiteResult(True, coloring=tuple(color))


def _tree_cycle(u, w, parent, depth):
    # u, w adjacent and same colour: climb both to their lowest common ancestor
    left, right = [u], [w]
    while depth[u] > depth[w]:
        u = parent[u]
        left.append(u)
    while depth[w] > depth[u]:
        w = parent[w]
        right.append(w)
    while u != w:
        u = parent[u]
        w = parent[w]
        left.append(u)
        right.append(w)
    right.pop()
    return tuple(left + right[::-1])


def shortest_odd_cycle(g: Graph) -> int | None:
    """Length of a shortest odd cycle (None if bipartite), by BFS from every vertex.

    From a root on a shortest odd cycle of length 2l+1, the BFS finds an edge
    joining two vertices at depth l; every same-depth edge closes an odd walk
    of length 2d+1, which contains an odd cycle no longer than that.
    """
    best = None
    for root in range(g.n):
        dist = [-1] * g.n
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if best is not None and 2 * du + 1 >= best:
                break
            for w in _iter_bits(g.rows[u]):
                if dist[w] < 0:
                    dist[w] = du + 1
                    queue.append(w)
                elif dist[w] == du:
                    best = 2 * du + 1 if best is None else min(best, 2 * du + 1)
    return best


def has_c5_through(g: Graph, restrict=None):
    """Search the subgraph induced by ``restrict`` for a 5-cycle.

    Returns (found, witness) with witness a 5-tuple in cycle order. Paths
    v0 v1 v2 v3 v4 are enumerated with v0 the minimum vertex of the cycle and
    v1 < v4, so each cycle has one canonical representative.
    """
    allowed = _mask(g, restrict)
    rows = [r & allowed for r in g.rows]
    for v0 in _iter_bits(allowed):
        above = allowed >> (v0 + 1) << (v0 + 1)
        n0 = rows[v0] & above
        for v1 in _iter_bits(n0):
            used = (1 << v0) | (1 << v1)
            for v2 in _iter_bits(rows[v1] & above & ~used):
                used2 = used | (1 << v2)
                for v3 in _iter_bits(rows[v2] & above & ~used2):
                    used3 = used2 | (1 << v3)
                    closing = rows[v3] & n0 & ~used3
                    closing = closing >> (v1 + 1) << (v1 + 1)
                    if closing:
                        v4 = (closing & -closing).bit_length() - 1
                        return True, (v0, v1, v2, v3, v4)
    return False, None


def _mask(g: Graph, subset) -> int:
    if subset is None:
        return (1 << g.n) - 1
    m = 0
    for v in subset:
        if not 0 <= v < g.n:
            raise ValidationError(f"vertex {v} out of range")
        m |= 1 << v
    return m


# ----------------------------------------------------------------- edits

def delete_edges(g: Graph, edges) -> Graph:
    """Remove the given edges. Deleting a non-edge raises EdgeError."""
    rows = list(g.rows)
    for u, v in normalize_edges(edges, g.n):
        if not (rows[u] >> v) & 1:
            raise EdgeError(f"({u}, {v}) is not an edge")
        rows[u] ^= 1 << v
        rows[v] ^= 1 << u
    return Graph(g.n, rows, _trusted=True)


def induced(g: Graph, subset) -> Graph:
    """Subgraph induced by ``subset``, relabelled 0.. in increasing vertex order."""
    verts = sorted(set(subset))
    _mask(g, verts)
    runs = []  # (start, length, new offset) of consecutive kept vertices
    for i, v in enumerate(verts):
        if runs and runs[-1][0] + runs[-1][1] == v:
            s, ln, o = runs[-1]
            runs[-1] = (s, ln + 1, o)
        else:
            runs.append((v, 1, i))
    rows = []
    for v in verts:
        r = g.rows[v]
        rows.append(sum(((r >> s) & ((1 << ln) - 1)) << o for s, ln, o in runs))
    return Graph(len(verts), rows, _trusted=True)


def remove_vertices(g: Graph, vertices) -> Graph:
    drop = set(vertices)
    return induced(g, [v for v in range(g.n) if v not in drop])


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, [(full ^ r) & ~(1 << v) for v, r in enumerate(g.rows)], _trusted=True)


def to_dot(g: Graph, labels=None, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        label = labels[v] if labels is not None else v
        lines.append(f'  {v} [label="{label}"];')
    lines.extend(f"  {u} -- {v};" for u, v in g.edges())
    lines.append("}")
    return "\n".join(lines) + "\n"
