"""Audits of the counting inequalities behind the triangle bound, on concrete graphs.

Verdicts come in two kinds. ``ASSERT`` audits check identities or
inequalities that hold for every regular graph, so a failure is a real
contradiction (or a bug). ``REPORT`` audits evaluate steps that only hold
under extra hypotheses (huge n, few triangles, a maximal cycle choice);
their failures on small graphs are data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .census import heavy_decompose, require_regular
from .errors import InfeasibleError, KernelCheckError, ValidationError
from .graph import Graph, _iter_bits, count_triangles, find_triangle
from .graph6 import emit_graph6, parse_graph6

ASSERT = "ASSERT"
REPORT = "REPORT"


@dataclass
class Verdict:
    audit: str
    kind: str
    holds: bool
    slack: Fraction
    params: dict = field(default_factory=dict)
    witness: object = None
    witness_graph: Graph | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "audit": self.audit,
            "kind": self.kind,
            "params": self.params,
            "holds": self.holds,
            "slack_num": self.slack.numerator,
            "slack_den": self.slack.denominator,
            "witness": self.witness,
            "witness_graph6": emit_graph6(self.witness_graph) if self.witness_graph is not None else None,
            **self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=str)


def phi(g: Graph) -> int:
    """Sum of squared degrees."""
    return sum(d * d for d in g.degrees())


# ------------------------------------------------------------ phi lemma

@dataclass
class PhiAudit:
    r: int
    e: int
    n_cap: int
    beta: Fraction
    phi: int
    bound: Fraction
    holds: bool
    equality: bool
    extremal_witness: str
    structure_phi: int | None
    structure_attains_max: bool | None
    maximizer_with_structure: bool
    graphs_examined: int

    def verdict(self) -> Verdict:
        return Verdict(
            audit="phi", kind=REPORT, holds=self.holds, slack=self.bound - self.phi,
            params={"r": self.r, "e": self.e, "n_cap": self.n_cap},
            witness_graph=parse_graph6(self.extremal_witness),
            extra={"phi": self.phi, "bound_num": self.bound.numerator,
                   "bound_den": self.bound.denominator, "equality": self.equality,
                   "structure_phi": self.structure_phi,
                   "structure_attains_max": self.structure_attains_max,
                   "maximizer_with_structure": self.maximizer_with_structure},
        )


def phi_bound(r: int, e: int) -> Fraction:
    """(b^2 - 2b + 2) r^2 + (5b - 4) r with b = e/r."""
    b = Fraction(e, r)
    return (b * b - 2 * b + 2) * r * r + (5 * b - 4) * r


def star_structure(r: int, e: int, n: int) -> Graph | None:
    """Vertex 0 of degree r; its neighbour 1 has degree e - r + 1; the rest isolated."""
    extra = e - r
    if extra < 0 or extra > r - 1 or r + 1 > n:
        return None
    edges = [(0, i) for i in range(1, r + 1)] + [(1, i) for i in range(2, 2 + extra)]
    return Graph.from_edges(n, edges)


def has_star_structure(g: Graph, r: int, e: int) -> bool:
    degs = g.degrees()
    if sum(1 for d in degs if d) != r + 1 or g.num_edges != e:
        return False
    return any(degs[u] == r and any(degs[v] == e - r + 1 for v in g.neighbors(u))
               for u in range(g.n))


def max_phi_bruteforce(r: int, e: int, n_cap: int):
    """Maximum sum of squared degrees over graphs on n_cap vertices with
    max degree <= r and exactly e edges.

    Edges are added in lexicographic order and each new vertex label must be
    the next unused one; every graph has such a labelling (BFS discovery
    order, one component after another, isolated vertices last), so the
    search is exhaustive up to isomorphism.
    Returns (max_phi, witness_rows, examined, any_maximizer_with_structure).
    """
    deg = [0] * n_cap
    rows = [0] * n_cap
    st = {"best": -1, "rows": None, "examined": 0, "struct": False}

    def rec(u, v, left, top, cur):
        if left == 0:
            st["examined"] += 1
            if cur >= st["best"]:
                if cur > st["best"]:
                    st["best"], st["rows"], st["struct"] = cur, tuple(rows), False
                if not st["struct"]:
                    g = Graph(n_cap, rows, _trusted=True)
                    st["struct"] = has_star_structure(g, r, e)
            return
        # u may also be top + 1, the root of a new component
        while u < n_cap - 1 and (u <= top or (u == top + 1 and deg[top])):
            if deg[u] < r:
                vmax = min(n_cap - 1, max(top, u + 1))
                for w in range(max(v, u + 1), vmax + 1):
                    if deg[w] >= r or (rows[u] >> w) & 1:
                        continue
                    gain = 2 * deg[u] + 1 + 2 * deg[w] + 1
                    deg[u] += 1
                    deg[w] += 1
                    rows[u] |= 1 << w
                    rows[w] |= 1 << u
                    rec(u, w + 1, left - 1, max(top, u + 1, w + 1), cur + gain)
                    rows[u] ^= 1 << w
                    rows[w] ^= 1 << u
                    deg[u] -= 1
                    deg[w] -= 1
            u += 1
            v = 0

    rec(0, 1, e, 0, 0)
    return st["best"], st["rows"], st["examined"], st["struct"]


def audit_lemma_phi(r: int, e: int, n_cap: int = 10) -> PhiAudit:
    """Brute-force check of the sum-of-squared-degrees bound at small r.

    Needs r <= e < 6r/5. Only a report: the bound is claimed for huge r.
    """
    if r < 1 or e < r or 5 * e >= 6 * r:
        raise InfeasibleError(f"need 1 <= e/r < 6/5 (r={r}, e={e})")
    if n_cap > 12:
        raise ValidationError("n_cap is limited to 12 for exhaustive mode")
    if e > n_cap * (n_cap - 1) // 2 or 2 * e > n_cap * r:
        raise InfeasibleError(f"no graph on {n_cap} vertices with max degree {r} and {e} edges")
    best, rows, examined, struct = max_phi_bruteforce(r, e, n_cap)
    if best < 0:
        raise InfeasibleError(f"no graph on {n_cap} vertices with max degree {r} and {e} edges")
    witness = Graph(n_cap, rows, _trusted=True)
    bound = phi_bound(r, e)
    sg = star_structure(r, e, n_cap)
    sphi = phi(sg) if sg is not None else None
    return PhiAudit(
        r=r, e=e, n_cap=n_cap, beta=Fraction(e, r), phi=best, bound=bound,
        holds=best <= bound, equality=best == bound,
        extremal_witness=emit_graph6(witness),
        structure_phi=sphi,
        structure_attains_max=None if sphi is None else sphi == best,
        maximizer_with_structure=struct,
        graphs_examined=examined,
    )


# ------------------------------------------------- partition inequality

def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def audit_partition_inequality(g: Graph, k: int, part) -> Verdict:
    """For a bipartition (X, Y): every edge uv inside X has
    T(uv) >= d_Y(u) + d_Y(v) - |Y|, and summing,
    T(G) >= sum over uv in E(X) of (2k - |Y| - d_X(u) - d_X(v)) = e(X)(2k-|Y|) - phi(G[X]).
    Holds for every k-regular graph.
    """
    require_regular(g, k)
    x_mask = _mask(part)
    if x_mask >> g.n:
        raise ValidationError("partition vertex out of range")
    y_mask = ((1 << g.n) - 1) & ~x_mask
    y_size = y_mask.bit_count()
    census = count_triangles(g)
    rows = g.rows
    d_x = [(r & x_mask).bit_count() for r in rows]
    d_y = [(r & y_mask).bit_count() for r in rows]
    rhs = 0
    e_x = 0
    worst = None
    pointwise_ok = True
    for (u, v), t in census.per_edge.items():
        if not ((x_mask >> u) & 1 and (x_mask >> v) & 1):
            continue
        e_x += 1
        lower = d_y[u] + d_y[v] - y_size
        if t < lower:
            pointwise_ok = False
            worst = worst or (u, v)
        rhs += 2 * k - y_size - d_x[u] - d_x[v]
    phi_x = sum(d_x[v] ** 2 for v in range(g.n) if (x_mask >> v) & 1)
    if rhs != e_x * (2 * k - y_size) - phi_x:
        raise KernelCheckError("partition sum does not match e(X)(2k-|Y|) - phi(G[X])")
    slack = census.total - rhs
    holds = pointwise_ok and slack >= 0
    return Verdict(
        audit="partition", kind=ASSERT, holds=holds, slack=Fraction(slack),
        params={"n": g.n, "k": k, "x": sorted(_iter_bits(x_mask))},
        witness=worst, witness_graph=None if holds else g,
        extra={"triangles": census.total, "rhs": rhs, "e_x": e_x, "phi_x": phi_x,
               "pointwise": pointwise_ok},
    )


# ---------------------------------------------------- triangle identity

def triangle_profile(g: Graph, tri) -> tuple[int, int, int, int]:
    """(m0, m1, m2, m3): number of vertices with exactly i neighbours on the triangle."""
    a, b, c = (g.rows[v] for v in tri)
    m3 = (a & b & c).bit_count()
    m2 = ((a & b) | (a & c) | (b & c)).bit_count() - m3
    m1 = (a | b | c).bit_count() - m2 - m3
    return g.n - m1 - m2 - m3, m1, m2, m3


def audit_triangle_identity(g: Graph, k: int) -> Verdict:
    """For each triangle: sum m_i = n, sum i*m_i = 3k, T(e1)+T(e2)+T(e3) = m2 + 3m3,
    and m2 + 3m3 >= 3k - n + m0.
    """
    require_regular(g, k)
    census = count_triangles(g)
    pe = census.per_edge
    rows = g.rows
    n = g.n
    checked = 0
    min_slack = None
    bad = None
    for (u, v), t_uv in pe.items():
        for w in _iter_bits((rows[u] & rows[v]) >> (v + 1) << (v + 1)):
            checked += 1
            m0, m1, m2, m3 = triangle_profile(g, (u, v, w))
            tsum = t_uv + pe[(u, w)] + pe[(v, w)]
            slack = m2 + 3 * m3 - (3 * k - n + m0)
            ok = (m0 + m1 + m2 + m3 == n and m1 + 2 * m2 + 3 * m3 == 3 * k
                  and tsum == m2 + 3 * m3 and slack >= 0)
            if min_slack is None or slack < min_slack:
                min_slack = slack
            if not ok and bad is None:
                bad = {"triangle": (u, v, w), "m": (m0, m1, m2, m3), "tsum": tsum}
    return Verdict(
        audit="identity", kind=ASSERT, holds=bad is None,
        slack=Fraction(min_slack if min_slack is not None else 0),
        params={"n": n, "k": k}, witness=bad, witness_graph=None if bad is None else g,
        extra={"triangles_checked": checked},
    )


# ------------------------------------------------------- C5 structure

@dataclass
class C5StructureAudit:
    cycle: tuple[int, ...]
    n_sets: tuple[tuple[int, ...], ...]
    z: tuple[int, ...]
    a_i: tuple[int, ...]
    a: int
    b: int
    disjoint: bool
    gprime_triangle_free: bool
    union_upper: bool        # n >= |union N_i|
    union_lower: bool        # |union N_i| >= 3 sum d_G'(v_i) - 5n
    n_lower: tuple[bool, ...]
    n_upper: tuple[bool, ...]
    z_lower: bool
    z_upper: bool
    slacks: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return (self.union_upper and self.union_lower and all(self.n_lower)
                and all(self.n_upper) and self.z_lower and self.z_upper)

    def verdict(self, params: dict | None = None) -> Verdict:
        return Verdict(
            audit="c5", kind=REPORT, holds=self.holds,
            slack=Fraction(min(self.slacks.values())) if self.slacks else Fraction(0),
            params=params or {}, witness=list(self.cycle),
            extra={"n_sizes": [len(s) for s in self.n_sets], "z_size": len(self.z),
                   "a_i": list(self.a_i), "a": self.a, "b": self.b,
                   "disjoint": self.disjoint, "union_bounds": self.union_upper and self.union_lower,
                   "part_bounds": all(self.n_lower) and all(self.n_upper),
                   "z_bounds": self.z_lower and self.z_upper},
        )


def audit_c5_structure(g: Graph, k: int, cycle, decomposition=None) -> C5StructureAudit:
    """Common-neighbourhood structure around a 5-cycle of G' (the graph minus its heavy edges).

    N_i = N'(v_{i-1}) & N'(v_{i+1}), Z = V minus the union of the N_i,
    a_i = d_H(v_i), a = sum a_i, b = 5k/2 - n. Evaluated (report only):
    n >= |union N_i| >= 3 sum d'(v_i) - 5n; k/2 - a + b <= |N_i| <= k/2 + 3a - 5b;
    a/2 - b <= |Z| <= a - 2b. Pairwise disjointness of the N_i follows from
    G' being triangle-free and is asserted.
    """
    d = decomposition or heavy_decompose(g, k)
    cyc = tuple(int(v) for v in cycle)
    gp = d.g_prime
    if len(cyc) != 5 or len(set(cyc)) != 5 or not all(0 <= v < g.n for v in cyc):
        raise ValidationError("cycle must be 5 distinct vertices")
    if not all(gp.has_edge(cyc[i], cyc[(i + 1) % 5]) for i in range(5)):
        raise ValidationError(f"{cyc} is not a 5-cycle of G'")
    if k % 2:
        raise ValidationError("k must be even")
    n = g.n
    rows = gp.rows
    sets = [rows[cyc[(i - 1) % 5]] & rows[cyc[(i + 1) % 5]] for i in range(5)]
    union = 0
    for s in sets:
        union |= s
    disjoint = sum(s.bit_count() for s in sets) == union.bit_count()
    tri_free = find_triangle(gp) is None
    if tri_free and not disjoint:
        raise KernelCheckError("N_i overlap although G' is triangle-free")
    z = ((1 << n) - 1) & ~union
    a_i = tuple(d.h_degrees[v] for v in cyc)
    a = sum(a_i)
    b = (5 * k - 2 * n) // 2
    dsum = sum(gp.degree(v) for v in cyc)
    size_union = union.bit_count()
    sizes = [s.bit_count() for s in sets]
    zs = z.bit_count()
    lo_n = Fraction(k, 2) - a + b
    hi_n = Fraction(k, 2) + 3 * a - 5 * b
    slacks = {
        "union_upper": n - size_union,
        "union_lower": size_union - (3 * dsum - 5 * n),
        "n_lower": min(s - lo_n for s in sizes),
        "n_upper": min(hi_n - s for s in sizes),
        "z_lower": zs - (Fraction(a, 2) - b),
        "z_upper": (a - 2 * b) - zs,
    }
    return C5StructureAudit(
        cycle=cyc,
        n_sets=tuple(tuple(_iter_bits(s)) for s in sets),
        z=tuple(_iter_bits(z)),
        a_i=a_i, a=a, b=b, disjoint=disjoint, gprime_triangle_free=tri_free,
        union_upper=slacks["union_upper"] >= 0,
        union_lower=slacks["union_lower"] >= 0,
        n_lower=tuple(s >= lo_n for s in sizes),
        n_upper=tuple(s <= hi_n for s in sizes),
        z_lower=slacks["z_lower"] >= 0,
        z_upper=slacks["z_upper"] >= 0,
        slacks=slacks,
    )


def c5_blowup(m: int) -> Graph:
    """Balanced blow-up of C5: parts of size m, part i complete to parts i +- 1.
    2m-regular on 5m vertices and triangle-free.
    """
    n = 5 * m
    edges = []
    for i in range(5):
        j = (i + 1) % 5
        edges.extend((i * m + x, j * m + y) for x in range(m) for y in range(m))
    return Graph.from_edges(n, edges)
