import itertools
from fractions import Fraction

import pytest

from regtri.construct import (ExtremalParams, FactorSpec, build_extremal, circulant_factor,
                              corollary_floor, default_factors, extremal_report, formula_t,
                              random_regular, validate_params)
from regtri.errors import InfeasibleError, ParamsError, ValidationError
from regtri.graph import Graph, count_triangles, is_bipartite, naive_triangle_count, remove_vertices


def valid_pairs(n_max):
    for n in range(3, n_max + 1, 2):
        for k in range(2, n, 2):
            if 5 * k > 2 * n and 2 * k < n:
                yield n, k


def test_validate_params_examples():
    p = validate_params(9, 4)
    assert (p.r1, p.r2) == (1, 0)
    validate_params(13, 6)
    with pytest.raises(ParamsError) as e:
        validate_params(13, 4)
    assert e.value.code == "range-low"
    with pytest.raises(ParamsError) as e:
        validate_params(13, 8)
    assert e.value.code == "range-high"
    for n, k in [(12, 6), (13, 5), (-3, 2)]:
        with pytest.raises(ParamsError) as e:
            validate_params(n, k)
        assert e.value.code == "parity"


def test_boundary_k_rejected():
    with pytest.raises(ParamsError) as e:
        validate_params(15, 6)      # k = 2n/5 exactly
    assert e.value.code == "range-low"
    # the largest valid k has r2 = 0
    assert validate_params(17, 8).r2 == 0


@pytest.mark.parametrize("n,k,t", [(9, 4, 2), (13, 6, 6), (25, 12, 30), (19, 8, 8)])
def test_formula_values(n, k, t):
    assert formula_t(validate_params(n, k)) == t
    assert 4 * t == k * (3 * k - n - 1)


def test_formula_overflow():
    with pytest.raises(OverflowError):
        formula_t(ExtremalParams(2 ** 64 + 1, 2 ** 63))


def test_formula_increasing_in_k():
    for n in range(9, 200, 2):
        vals = [formula_t(validate_params(n, k)) for _, k in valid_pairs_at(n)]
        assert vals == sorted(set(vals))


def valid_pairs_at(n):
    return [(n, k) for k in range(2, n, 2) if 5 * k > 2 * n and 2 * k < n]


def test_corollary_floor():
    f = corollary_floor(9)
    assert f.value == 2 and f.equality and f.k_star == 4
    f = corollary_floor(13)
    assert f.value == Fraction(196, 50) and not f.equality and f.k_star is None
    f = corollary_floor(19)
    assert f.value == 8 and f.k_star == 8
    with pytest.raises(ParamsError):
        corollary_floor(10)


def test_circulant_factor_examples():
    assert circulant_factor(FactorSpec(3, 1, offsets=(0,))) == [(0, 0), (1, 1), (2, 2)]
    assert circulant_factor(FactorSpec(4, 0)) == []
    assert circulant_factor(FactorSpec(3, 3)) == sorted(itertools.product(range(3), repeat=2))
    with pytest.raises(ValidationError):
        FactorSpec(2, 3)
    with pytest.raises(ValidationError):
        FactorSpec(4, 2, offsets=(1, 5))


@pytest.mark.parametrize("mode", ["circulant", "random"])
def test_factor_degree_uniform(mode):
    for m in range(0, 9):
        for r in range(0, m + 1):
            spec = FactorSpec(m, r, mode, seed=m * 31 + r if mode == "random" else None)
            edges = circulant_factor(spec)
            assert len(edges) == len(set(edges)) == r * m
            for side in (0, 1):
                deg = [0] * m
                for e in edges:
                    deg[e[side]] += 1
                assert all(d == r for d in deg)


def test_factor_spec_json_round_trip():
    for spec in [FactorSpec(5, 2, offsets=(1, 3)), FactorSpec(4, 1, "random", seed=9)]:
        assert FactorSpec.from_dict(spec.to_dict()) == spec


def test_extremal_9_4_by_brute_force():
    g = build_extremal(validate_params(9, 4))
    assert g.is_regular(4)
    assert naive_triangle_count(g) == 2
    apex = 8
    tris = [t for t in itertools.combinations(range(9), 3)
            if all(g.has_edge(a, b) for a, b in itertools.combinations(t, 2))]
    assert all(apex in t for t in tris)


def test_extremal_small_range():
    for n, k in valid_pairs(61):
        p = validate_params(n, k)
        for mode, seed in [("circulant", None), ("random", n * k)]:
            g = build_extremal(p, *default_factors(p, mode, seed))
            rep = extremal_report(p, g)
            assert rep["triangles"] == formula_t(p)
            assert rep["apex_edge_triangles"] == [p.apex_edge_triangles]
            assert rep["apex_triangles"] == rep["triangles"]
            assert rep["apex_bipartite"]
            assert is_bipartite(remove_vertices(g, [p.apex])).bipartite


def test_layout_is_fixed():
    p = validate_params(13, 6)
    g = build_extremal(p)
    assert sorted(g.neighbors(12)) == [0, 1, 2, 6, 7, 8]


def test_build_rejects_wrong_factor():
    p = validate_params(13, 6)
    with pytest.raises(ValidationError):
        build_extremal(p, FactorSpec(3, 2), FactorSpec(3, 0))


def test_random_regular():
    assert random_regular(4, 3, 0) == Graph.complete(4)
    g = random_regular(5, 2, 1)
    assert g.is_regular(2) and g.num_edges == 5
    g = random_regular(13, 6, 1)
    assert g.is_regular(6) and g.num_edges == 39
    assert random_regular(13, 6, 1) == g
    for seed in range(200):
        n = 8 + seed % 25
        k = [3, 4, 6, 7][seed % 4]
        if n * k % 2:
            n += 1
        assert random_regular(n, k, seed).is_regular(k)
    # dense case stresses the switch repair
    assert random_regular(20, 17, 3).is_regular(17)
    for n, k in [(5, 3), (3, 3), (0, 0)]:
        with pytest.raises(InfeasibleError):
            random_regular(n, k, 0)
