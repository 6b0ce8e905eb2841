"""The extremal family G(n, k), the closed-form minimum, and random k-regular graphs.

Vertex layout of :func:`build_extremal` (fixed, so outputs are reproducible):
``X = [0, h)``, ``Y = [h, 2h)`` with ``h = (n-1)/2``, apex ``v = n-1``,
``A`` = first k/2 vertices of X, ``B`` = first k/2 vertices of Y.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleError, ParamsError, ValidationError
from .graph import (Graph, complement, count_triangles, is_bipartite, remove_vertices,
                    triangle_total)

MAX_SAFE = 1 << 62


@dataclass(frozen=True)
class ExtremalParams:
    n: int
    k: int

    @property
    def half(self) -> int:
        """Size of each side X, Y."""
        return (self.n - 1) // 2

    @property
    def apex_side(self) -> int:
        """|A| = |B| = k/2."""
        return self.k // 2

    @property
    def rest_side(self) -> int:
        """|X \\ A| = |Y \\ B| = (n-k-1)/2."""
        return (self.n - self.k - 1) // 2

    @property
    def r1(self) -> int:
        """Degree of the factor removed inside A x B."""
        return (self.n - 2 * self.k + 1) // 2

    @property
    def r2(self) -> int:
        """Degree of the factor removed inside (X \\ A) x (Y \\ B)."""
        return (self.n - 2 * self.k - 1) // 2

    @property
    def apex(self) -> int:
        return self.n - 1

    @property
    def apex_edge_triangles(self) -> int:
        return (3 * self.k - self.n - 1) // 2


def validate_params(n: int, k: int) -> ExtremalParams:
    """Check n odd, k even and 2n/5 < k < n/2.

    Error codes: ``parity``, ``range-low`` (k <= 2n/5), ``range-high`` (k >= n/2).
    """
    if n <= 0 or k <= 0:
        raise ParamsError(f"n and k must be positive (n={n}, k={k})", code="parity")
    if n % 2 == 0 or k % 2 == 1:
        raise ParamsError(f"need n odd and k even (n={n}, k={k})", code="parity")
    if 5 * k <= 2 * n:
        raise ParamsError(f"k={k} must exceed 2n/5={Fraction(2 * n, 5)}", code="range-low")
    if 2 * k >= n:
        raise ParamsError(f"k={k} must be below n/2={Fraction(n, 2)}", code="range-high")
    p = ExtremalParams(n, k)
    assert p.r2 >= 0 and p.r1 == p.r2 + 1
    assert p.r1 <= p.apex_side and p.r2 <= p.rest_side
    return p


def formula_t(params: ExtremalParams) -> int:
    """k(3k-n-1)/4, as (k/2)((3k-n-1)/2); both factors are integers."""
    a = params.k // 2
    b = (3 * params.k - params.n - 1) // 2
    if abs(a) >= MAX_SAFE or abs(b) >= MAX_SAFE or abs(a * b) >= MAX_SAFE:
        raise OverflowError("formula_t outside the 63-bit range")
    return a * b


@dataclass(frozen=True)
class CorollaryFloor:
    value: Fraction
    equality: bool
    k_star: int | None


def corollary_floor(n: int) -> CorollaryFloor:
    """(n+1)^2/50 for odd n; attained at k = 2(n+1)/5 exactly when 5 | n+1."""
    if n % 2 == 0:
        raise ParamsError(f"n={n} must be odd", code="parity")
    eq = (n + 1) % 5 == 0
    return CorollaryFloor(Fraction((n + 1) ** 2, 50), eq, 2 * (n + 1) // 5 if eq else None)


@dataclass(frozen=True)
class FactorSpec:
    """An r-regular bipartite factor between two parts of size m."""

    m: int
    r: int
    mode: str = "circulant"
    offsets: tuple[int, ...] | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.m < 0 or self.r < 0:
            raise ValidationError("factor size and degree must be nonnegative")
        if self.r > self.m:
            raise ValidationError(f"factor degree {self.r} exceeds part size {self.m}")
        if self.mode == "circulant":
            offs = tuple(range(self.r)) if self.offsets is None else tuple(self.offsets)
            if len(offs) != self.r or (self.m and len({o % self.m for o in offs}) != self.r):
                raise ValidationError("circulant offsets must be r distinct residues mod m")
            object.__setattr__(self, "offsets", offs)
        elif self.mode == "random":
            if self.seed is None:
                raise ValidationError("random factor needs a seed")
        else:
            raise ValidationError(f"unknown factor mode {self.mode!r}")

    def to_dict(self) -> dict:
        d = {"m": self.m, "r": self.r, "mode": self.mode}
        if self.mode == "circulant":
            d["offsets"] = list(self.offsets)
        else:
            d["seed"] = self.seed
        return d

    @classmethod
    def from_dict(cls, d: dict) -> FactorSpec:
        offs = d.get("offsets")
        return cls(int(d["m"]), int(d["r"]), d.get("mode", "circulant"),
                   tuple(offs) if offs is not None else None, d.get("seed"))


def circulant_factor(spec: FactorSpec) -> list[tuple[int, int]]:
    """Factor edges as (left, right) local indices.

    Circulant mode joins left i to right (i + o) mod m for each offset.
    Random mode relabels both sides of a circulant factor by seeded
    permutations, then mixes it with bipartite 2-switches.
    """
    m, r = spec.m, spec.r
    if spec.mode == "circulant":
        return sorted((i, (i + o) % m) for i in range(m) for o in spec.offsets)
    rng = random.Random(spec.seed)
    left = list(range(m))
    right = list(range(m))
    rng.shuffle(left)
    rng.shuffle(right)
    edges = [(left[i], right[(i + o) % m]) for i in range(m) for o in range(r)]
    present = set(edges)
    for _ in range(10 * len(edges)):
        if len(edges) < 2:
            break
        x, y = rng.randrange(len(edges)), rng.randrange(len(edges))
        (a, b), (c, d) = edges[x], edges[y]
        if a == c or b == d or (a, d) in present or (c, b) in present:
            continue
        present -= {(a, b), (c, d)}
        present |= {(a, d), (c, b)}
        edges[x], edges[y] = (a, d), (c, b)
    return sorted(edges)


def default_factors(params: ExtremalParams, mode: str = "circulant", seed: int | None = None):
    if mode == "random":
        rng = random.Random(seed)
        s1, s2 = rng.getrandbits(63), rng.getrandbits(63)
        return (FactorSpec(params.apex_side, params.r1, "random", seed=s1),
                FactorSpec(params.rest_side, params.r2, "random", seed=s2))
    return (FactorSpec(params.apex_side, params.r1),
            FactorSpec(params.rest_side, params.r2))


def build_extremal(params: ExtremalParams, factor1: FactorSpec | None = None,
                   factor2: FactorSpec | None = None, verify: bool = True) -> Graph:
    """A member of G(n, k): complete bipartite X-Y, apex joined to A and B,
    ``factor1`` removed inside A x B, ``factor2`` inside (X\\A) x (Y\\B).
    """
    d1, d2 = default_factors(params)
    factor1 = factor1 or d1
    factor2 = factor2 or d2
    if (factor1.m, factor1.r) != (params.apex_side, params.r1):
        raise ValidationError(f"factor1 must have m={params.apex_side}, r={params.r1}")
    if (factor2.m, factor2.r) != (params.rest_side, params.r2):
        raise ValidationError(f"factor2 must have m={params.rest_side}, r={params.r2}")
    n, h, s = params.n, params.half, params.apex_side
    apex = params.apex
    x_mask = (1 << h) - 1
    y_mask = x_mask << h
    rows = [y_mask] * h + [x_mask] * h + [0]
    for i, j in circulant_factor(factor1):
        x, y = i, h + j
        rows[x] ^= 1 << y
        rows[y] ^= 1 << x
    for i, j in circulant_factor(factor2):
        x, y = s + i, h + s + j
        rows[x] ^= 1 << y
        rows[y] ^= 1 << x
    for v in list(range(s)) + list(range(h, h + s)):
        rows[v] |= 1 << apex
        rows[apex] |= 1 << v
    g = Graph(n, rows, _trusted=True)
    if verify:
        if not g.is_regular(params.k):
            raise AssertionError(f"G({n},{params.k}) construction is not {params.k}-regular")
        t = triangle_total(g)
        if t != formula_t(params):
            raise AssertionError(f"G({n},{params.k}) has {t} triangles, expected {formula_t(params)}")
    return g


def extremal_report(params: ExtremalParams, g: Graph) -> dict:
    """The family's defining properties, checked on a built graph."""
    census = count_triangles(g)
    apex = params.apex
    apex_counts = {census.per_edge[(min(apex, w), max(apex, w))] for w in g.neighbors(apex)}
    return {
        "n": params.n,
        "k": params.k,
        "regular": g.is_regular(params.k),
        "triangles": census.total,
        "formula": formula_t(params),
        "apex_triangles": census.per_vertex[apex],
        "apex_edge_triangles": sorted(apex_counts),
        "apex_bipartite": is_bipartite(remove_vertices(g, [apex])).bipartite,
    }


def _check_degree_pair(n: int, k: int) -> None:
    if n <= 0 or k < 0 or k >= n or (n * k) % 2:
        raise InfeasibleError(f"no {k}-regular simple graph on {n} vertices")


def random_regular(n: int, k: int, seed) -> Graph:
    """Seeded k-regular graph: pairing model with up to 100 restarts, then
    switch-repair of the last pairing's loops and multi-edges. Dense degrees
    (k > (n-1)/2) are sampled as the complement of an (n-1-k)-regular graph.
    """
    _check_degree_pair(n, k)
    if 2 * k > n - 1:
        return complement(random_regular(n, n - 1 - k, seed))
    rng = random.Random(seed)
    points = [v for v in range(n) for _ in range(k)]
    pairs = []
    for _ in range(100):
        rng.shuffle(points)
        pairs = [(min(points[i], points[i + 1]), max(points[i], points[i + 1]))
                 for i in range(0, len(points), 2)]
        if all(a != b for a, b in pairs) and len(set(pairs)) == len(pairs):
            return Graph.from_edges(n, pairs)
    return Graph.from_edges(n, _switch_repair(pairs, rng))


def _switch_repair(pairs, rng, max_iter: int = 1_000_000):
    edges = list(pairs)
    count = Counter(edges)
    m = len(edges)

    def bad(e):
        return e[0] == e[1] or count[e] > 1

    for _ in range(max_iter):
        bad_idx = [i for i, e in enumerate(edges) if bad(e)]
        if not bad_idx:
            return edges
        for i in bad_idx:
            if not bad(edges[i]):
                continue
            a, b = edges[i]
            j = rng.randrange(m)
            c, d = edges[j]
            if rng.random() < 0.5:
                c, d = d, c
            if j == i or c == d or c in (a, b) or d in (a, b):
                continue
            e1 = (min(a, c), max(a, c))
            e2 = (min(b, d), max(b, d))
            if e1 == e2 or count[e1] or count[e2]:
                continue
            for e in (edges[i], edges[j]):
                count[e] -= 1
            edges[i], edges[j] = e1, e2
            count[e1] += 1
            count[e2] += 1
    raise RuntimeError("switch repair did not converge")
