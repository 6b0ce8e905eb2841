from fractions import Fraction

from hypothesis import given, settings, strategies as st

from regtri.census import moon_moser_floor
from regtri.construct import random_regular
from regtri.graph import (Graph, complement, count_triangles, is_bipartite, naive_triangle_count,
                          shortest_odd_cycle)
from regtri.graph6 import emit_graph6, parse_graph6


@st.composite
def graphs(draw, max_n=40):
    n = draw(st.integers(0, max_n))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


@st.composite
def regular_graphs(draw):
    n = draw(st.integers(5, 30))
    k = draw(st.integers(1, min(n - 1, 10)))
    if n * k % 2:
        k -= 1
    return random_regular(n, k, draw(st.integers(0, 2 ** 32))), k


@given(graphs(max_n=70))
@settings(max_examples=150, deadline=None)
def test_graph6_round_trip(g):
    s = emit_graph6(g)
    assert parse_graph6(s) == g
    assert emit_graph6(parse_graph6(s)) == s


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_census_identities(g):
    c = count_triangles(g)
    assert sum(c.per_vertex) == 3 * c.total
    assert sum(c.per_edge.values()) == 3 * c.total
    assert c.total == naive_triangle_count(g)
    assert sum(g.degrees()) == 2 * g.num_edges


@given(graphs(max_n=20))
@settings(max_examples=150, deadline=None)
def test_bipartite_iff_no_odd_cycle(g):
    assert is_bipartite(g).bipartite == (shortest_odd_cycle(g) is None)


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_moon_moser(g):
    if g.n:
        assert moon_moser_floor(g) <= count_triangles(g).total


@given(regular_graphs())
@settings(max_examples=60, deadline=None)
def test_complement_regular(gk):
    g, k = gk
    assert g.is_regular(k)
    assert complement(g).is_regular(g.n - 1 - k)
