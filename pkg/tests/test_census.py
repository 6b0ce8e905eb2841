import itertools
import math
from fractions import Fraction

import pytest

from conftest import gnp
from regtri.census import (bipartization_bound, bipartization_recipe, census_report,
                           check_gprime_minus_u_c5_free, check_gprime_triangle_free,
                           check_triangles_have_heavy_edge, exact_bipartization, heavy_decompose,
                           hypothesis_holds, local_search_cut, max_cut, moon_moser_floor,
                           within_bipartization_bound, RecipeViolation)
from regtri.construct import build_extremal, random_regular, validate_params
from regtri.errors import NotRegularError, ValidationError
from regtri.graph import Graph, count_triangles


def brute_max_cut(g):
    best = 0
    for side in range(1 << max(g.n - 1, 0)):
        best = max(best, sum(1 for u, v in g.edges() if ((side >> u) ^ (side >> v)) & 1))
    return best


def test_heavy_examples():
    g = build_extremal(validate_params(9, 4))
    d = heavy_decompose(g, 4)
    c = count_triangles(g)
    assert d.threshold_num == 2
    assert set(d.heavy_edges) == {e for e, t in c.per_edge.items() if t >= 1}

    d = heavy_decompose(Graph.cycle(5), 2)
    assert d.threshold_num == 0 and len(d.heavy_edges) == 5 and d.g_prime.num_edges == 0

    d = heavy_decompose(Graph.complete(4), 3)
    assert d.threshold_num == 4 and len(d.heavy_edges) == 6


def test_decomposition_invariants(rng):
    for i in range(40):
        n = rng.randint(8, 30)
        k = rng.choice([4, 5, 6, 8])
        if n * k % 2 or k >= n:
            continue
        g = random_regular(n, k, i)
        d = heavy_decompose(g, k)
        c = d.census
        heavy = set(d.heavy_edges)
        for e, t in c.per_edge.items():
            assert (e in heavy) == (3 * t >= 3 * k - n - 1)
        for v in range(n):
            assert (v in d.u_set) == (4 * d.h_degrees[v] ** 2 >= 9 * k)
            # same test with floats, away from ties, as a sanity check
            if d.h_degrees[v] != 1.5 * math.sqrt(k):
                assert (v in d.u_set) == (d.h_degrees[v] > 1.5 * math.sqrt(k))
        assert set(d.g_prime.edges()) == set(g.edges()) - heavy


def test_u_tie_included():
    # k = 4: d_H = 3 sits exactly on 1.5*sqrt(k) = 3
    ties = 0
    for seed in range(200):
        d = heavy_decompose(random_regular(9, 4, seed), 4)
        for v, h in enumerate(d.h_degrees):
            if h == 3:
                ties += 1
                assert v in d.u_set
            elif h < 3:
                assert v not in d.u_set
    assert ties > 0


def test_not_regular():
    with pytest.raises(NotRegularError):
        heavy_decompose(Graph.path(4), 2)


def test_gprime_checks():
    assert check_gprime_triangle_free(heavy_decompose(Graph.empty(4), 0))
    assert check_gprime_triangle_free(heavy_decompose(build_extremal(validate_params(13, 6)), 6))
    assert check_gprime_minus_u_c5_free(heavy_decompose(Graph.cycle(5), 2)).holds
    rep = check_gprime_minus_u_c5_free(heavy_decompose(build_extremal(validate_params(25, 12)), 12))
    assert isinstance(rep.holds, bool)


def test_every_triangle_has_heavy_edge(rng):
    for i in range(60):
        n = rng.randint(8, 30)
        k = rng.choice([3, 4, 6, 8])
        if n * k % 2 or k >= n:
            continue
        assert check_triangles_have_heavy_edge(random_regular(n, k, 1000 + i), k)


def test_bound_exact():
    for k in range(1, 400):
        b = bipartization_bound(k)
        assert b - 1 < 7.5 * k ** 1.5 <= b + 1e-9
        assert within_bipartization_bound(b - 1, k)
    assert bipartization_bound(4) == 60          # 7.5 * 8 exactly
    assert bipartization_bound(16) == 480
    assert within_bipartization_bound(60, 4) and not within_bipartization_bound(61, 4)


def test_recipe_examples():
    rep = bipartization_recipe(heavy_decompose(Graph.cycle(5), 2))
    assert rep.deletion_size == 5 and rep.bipartite_after
    rep = bipartization_recipe(heavy_decompose(Graph.complete(4), 3))
    assert not rep.hypothesis_holds
    for n, k in [(9, 4), (13, 6), (25, 12), (41, 18)]:
        g = build_extremal(validate_params(n, k))
        rep = bipartization_recipe(heavy_decompose(g, k), strict=True)
        assert rep.hypothesis_holds and rep.all_hold
        assert exact_bipartization(g) <= rep.deletion_size if n <= 26 else True


def test_recipe_strict_raises_when_claimed():
    d = heavy_decompose(Graph.complete(5), 4)
    rep = bipartization_recipe(d)
    assert not rep.all_hold
    with pytest.raises(RecipeViolation):
        bipartization_recipe(d, hypothesis=True, strict=True)


def test_hypothesis_flag():
    g = build_extremal(validate_params(13, 6))
    assert hypothesis_holds(g, 6, 6)
    assert not hypothesis_holds(g, 6, 7)
    assert not hypothesis_holds(Graph.complete(4), 3, 4)


@pytest.mark.parametrize("g,expect", [(Graph.cycle(5), 1), (Graph.complete(4), 2),
                                      (Graph.complete(5), 4), (Graph.cycle(6), 0)])
def test_exact_bipartization_examples(backend, g, expect):
    assert exact_bipartization(g) == expect


def test_max_cut_matches_brute_force(backend, rng):
    for _ in range(40):
        g = gnp(rng.randint(1, 11), rng.random(), rng)
        value, side = max_cut(g)
        assert value == brute_max_cut(g)
        assert value == sum(1 for u, v in g.edges() if (u in side) != (v in side))


def test_max_cut_limit():
    with pytest.raises(ValidationError):
        max_cut(Graph.empty(27))


def test_local_search_is_an_upper_bound(rng):
    for _ in range(20):
        g = gnp(rng.randint(2, 14), 0.5, rng)
        cut, side = local_search_cut(g, seed=1)
        assert cut <= max_cut(g)[0]
        assert cut == sum(1 for u, v in g.edges() if (u in side) != (v in side))


def test_moon_moser_examples():
    assert moon_moser_floor(Graph.complete(4)) == 4
    assert moon_moser_floor(Graph.complete(5)) == 10
    assert moon_moser_floor(Graph.cycle(5)) == Fraction(-5, 3)
    with pytest.raises(ValidationError):
        moon_moser_floor(Graph.empty(0))


def test_census_report_keys():
    g = build_extremal(validate_params(9, 4))
    rep = census_report(g, 4)
    for key in ["n", "k", "heavy_count", "u_size", "deletion_size", "bound", "bipartite_after",
                "prop41", "prop42", "moon_moser_num", "moon_moser_den"]:
        assert key in rep
    assert rep["prop41"] is True
    assert rep["exact_bipartization"] <= rep["deletion_size"]
    big = census_report(build_extremal(validate_params(31, 14)), 14)
    assert "heuristic_bipartization" in big and "exact_bipartization" not in big
