"""Heavy-edge decomposition, bipartization recipe, max-cut and Moon-Moser.

Every threshold test is done in integers. An edge e is heavy when
``3*T(e) >= 3k - n - 1``. A vertex is in U when ``4*d_H(u)**2 >= 9k``, i.e.
``d_H(u) >= 1.5*sqrt(k)``, ties included.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ._backend import kernels
from .errors import NotRegularError, ValidationError
from .graph import (Graph, TriangleCensus, _iter_bits, count_triangles, delete_edges,
                    find_triangle, has_c5_through, is_bipartite)
from .graph6 import emit_graph6

EXACT_MAXCUT_LIMIT = 26


@dataclass(frozen=True)
class HeavyDecomposition:
    n: int
    k: int
    heavy_edges: tuple[tuple[int, int], ...]
    g_prime: Graph
    u_set: tuple[int, ...]
    threshold_num: int
    h_degrees: tuple[int, ...]
    graph: Graph
    census: TriangleCensus

    @property
    def heavy_graph(self) -> Graph:
        return Graph.from_edges(self.n, self.heavy_edges)


@dataclass(frozen=True)
class Check:
    holds: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.holds


def require_regular(g: Graph, k: int) -> None:
    if not g.is_regular(k):
        degs = sorted(set(g.degrees()))
        raise NotRegularError(f"graph is not {k}-regular (degrees {degs})")


def heavy_decompose(g: Graph, k: int, census: TriangleCensus | None = None) -> HeavyDecomposition:
    require_regular(g, k)
    census = census or count_triangles(g)
    threshold = 3 * k - g.n - 1
    heavy = tuple(e for e, t in census.per_edge.items() if 3 * t >= threshold)
    h_deg = [0] * g.n
    for u, v in heavy:
        h_deg[u] += 1
        h_deg[v] += 1
    u_set = tuple(v for v in range(g.n) if 4 * h_deg[v] ** 2 >= 9 * k)
    return HeavyDecomposition(
        n=g.n, k=k, heavy_edges=heavy, g_prime=delete_edges(g, heavy), u_set=u_set,
        threshold_num=threshold, h_degrees=tuple(h_deg), graph=g, census=census,
    )


def check_gprime_triangle_free(d: HeavyDecomposition) -> Check:
    """G' should never contain a triangle; a witness here means a bug."""
    tri = find_triangle(d.g_prime)
    return Check(tri is None, tri)


def check_gprime_minus_u_c5_free(d: HeavyDecomposition) -> Check:
    """Whether G' minus U has no 5-cycle. A report: small graphs may fail it."""
    rest = [v for v in range(d.n) if v not in set(d.u_set)]
    found, witness = has_c5_through(d.g_prime, rest)
    return Check(not found, witness)


def check_triangles_have_heavy_edge(g: Graph, k: int, census: TriangleCensus | None = None) -> Check:
    """Every triangle has an edge with 3*T(e) >= 3k - n (the strict form)."""
    census = census or count_triangles(g)
    need = 3 * k - g.n
    rows = g.rows
    pe = census.per_edge
    for (u, v), t_uv in pe.items():
        for w in _iter_bits((rows[u] & rows[v]) >> (v + 1) << (v + 1)):
            if max(3 * t_uv, 3 * pe[(u, w)], 3 * pe[(v, w)]) < need:
                return Check(False, (u, v, w))
    return Check(True)


def bipartization_bound(k: int) -> int:
    """ceil(7.5 * k**1.5), computed exactly."""
    sq = 225 * k ** 3          # (15 k sqrt k)^2
    s = math.isqrt(sq)
    if s * s == sq:
        return (s + 1) // 2
    return s // 2 + 1


def within_bipartization_bound(size: int, k: int) -> bool:
    """size <= 7.5 * k**1.5, via (2 size)^2 <= 225 k^3."""
    return size >= 0 and 4 * size * size <= 225 * k ** 3


def hypothesis_holds(g: Graph, k: int, triangles: int) -> bool:
    """n odd, k even, 2n/5 < k < n/2 and T(G) <= k(3k-n-1)/4."""
    n = g.n
    if n % 2 == 0 or k % 2 or 5 * k <= 2 * n or 2 * k >= n:
        return False
    return 4 * triangles <= k * (3 * k - n - 1)


@dataclass(frozen=True)
class RecipeReport:
    deletion: tuple[tuple[int, int], ...]
    deletion_size: int
    bound: int
    within_bound: bool
    bipartite_after: bool
    heavy_count: int
    heavy_within: bool
    u_size: int
    u_within: bool
    hypothesis_holds: bool

    @property
    def all_hold(self) -> bool:
        return self.within_bound and self.bipartite_after and self.heavy_within and self.u_within


class RecipeViolation(AssertionError):
    pass


def bipartization_recipe(d: HeavyDecomposition, hypothesis: bool | None = None,
                         strict: bool = False) -> RecipeReport:
    """Delete E(H) plus every edge of G' meeting U, and report on the result.

    With ``strict`` and the hypothesis holding, any failed inequality raises
    :class:`RecipeViolation`; otherwise everything is only reported.
    """
    u = set(d.u_set)
    extra = [e for e in d.g_prime.edges() if e[0] in u or e[1] in u]
    deletion = tuple(sorted(set(d.heavy_edges) | set(extra)))
    remainder = delete_edges(d.graph, deletion)
    k = d.k
    if hypothesis is None:
        hypothesis = hypothesis_holds(d.graph, k, d.census.total)
    rep = RecipeReport(
        deletion=deletion,
        deletion_size=len(deletion),
        bound=bipartization_bound(k),
        within_bound=within_bipartization_bound(len(deletion), k),
        bipartite_after=is_bipartite(remainder).bipartite,
        heavy_count=len(d.heavy_edges),
        heavy_within=4 * len(d.heavy_edges) <= 9 * k,
        u_size=len(u),
        u_within=len(u) ** 2 <= 9 * k,
        hypothesis_holds=hypothesis,
    )
    if strict and hypothesis and not rep.all_hold:
        raise RecipeViolation(f"bipartization recipe failed under its hypothesis: {rep}")
    return rep


def max_cut(g: Graph) -> tuple[int, frozenset]:
    """Exact maximum cut (n <= 26) and one optimal side."""
    if g.n > EXACT_MAXCUT_LIMIT:
        raise ValidationError(f"exact max-cut is limited to n <= {EXACT_MAXCUT_LIMIT}")
    value, mask = kernels.max_cut(g.bits)
    return int(value), frozenset(_iter_bits(int(mask)))


def exact_bipartization(g: Graph) -> int:
    """Minimum number of edge deletions making g bipartite: e(G) - maxcut(G)."""
    return g.num_edges - max_cut(g)[0]


def local_search_cut(g: Graph, seed=0, restarts: int = 8) -> tuple[int, frozenset]:
    """Heuristic (NOT exact) cut by single-vertex flips; for reports on large graphs."""
    rng = random.Random(seed)
    rows = g.rows
    best, best_side = -1, 0
    for _ in range(restarts):
        side = rng.getrandbits(g.n) if g.n else 0
        improved = True
        while improved:
            improved = False
            for v in range(g.n):
                r = rows[v]
                same = (r & side).bit_count() if (side >> v) & 1 else (r & ~side).bit_count()
                if 2 * same > r.bit_count():
                    side ^= 1 << v
                    improved = True
        cut = sum(1 for u, v in g.edges() if ((side >> u) ^ (side >> v)) & 1)
        if cut > best:
            best, best_side = cut, side
    return best, frozenset(_iter_bits(best_side))


def moon_moser_floor(g: Graph) -> Fraction:
    """(4e/3)(e/n - n/4), exact. Any n-vertex graph with e edges has at least this many triangles."""
    if g.n == 0:
        raise ValidationError("Moon-Moser bound needs at least one vertex")
    e = g.num_edges
    return Fraction(4 * e, 3) * (Fraction(e, g.n) - Fraction(g.n, 4))


def census_report(g: Graph, k: int) -> dict:
    """Everything the census command prints, JSON-ready."""
    d = heavy_decompose(g, k)
    rec = bipartization_recipe(d)
    mm = moon_moser_floor(g)
    tri_free = check_gprime_triangle_free(d)
    c5_free = check_gprime_minus_u_c5_free(d)
    out = {
        "n": g.n,
        "k": k,
        "edges": g.num_edges,
        "triangles": d.census.total,
        "per_vertex": list(d.census.per_vertex),
        "threshold_num": d.threshold_num,
        "heavy_count": rec.heavy_count,
        "heavy_within_9k_4": rec.heavy_within,
        "u_set": list(d.u_set),
        "u_size": rec.u_size,
        "u_within_3sqrtk": rec.u_within,
        "deletion_size": rec.deletion_size,
        "bound": rec.bound,
        "within_bound": rec.within_bound,
        "bipartite_after": rec.bipartite_after,
        "hypothesis_holds": rec.hypothesis_holds,
        "prop41": tri_free.holds,
        "prop41_witness": list(tri_free.witness) if tri_free.witness else None,
        "prop42": c5_free.holds,
        "prop42_witness": list(c5_free.witness) if c5_free.witness else None,
        "moon_moser_num": mm.numerator,
        "moon_moser_den": mm.denominator,
        "moon_moser_holds": mm <= d.census.total,
        "graph6": emit_graph6(g),
    }
    if g.n <= EXACT_MAXCUT_LIMIT:
        out["exact_bipartization"] = exact_bipartization(g)
    else:
        cut, _ = local_search_cut(g)
        out["heuristic_bipartization"] = g.num_edges - cut
        out["heuristic_note"] = "local-search cut, an upper bound only"
    return out
