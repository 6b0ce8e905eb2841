import itertools
import random
import json
from fractions import Fraction

import pytest

from regtri.census import heavy_decompose
from regtri.construct import build_extremal, random_regular, validate_params
from regtri.errors import InfeasibleError, ValidationError
from regtri.graph import Graph, count_triangles, has_c5_through
from regtri.graph6 import parse_graph6
from regtri.minimizer import switch_step
from regtri.prooflab import (audit_c5_structure, audit_lemma_phi, audit_partition_inequality,
                             audit_triangle_identity, c5_blowup, has_star_structure,
                             max_phi_bruteforce, phi, phi_bound, star_structure,
                             triangle_profile)


def _graphical(seq):
    s = sorted(seq, reverse=True)
    if sum(s) % 2:
        return False
    return all(sum(s[:j]) <= j * (j - 1) + sum(min(d, j) for d in s[j:])
               for j in range(1, len(s) + 1))


def phi_oracle(r, e, n):
    """Max sum of squares over graphical degree sequences (Erdos-Gallai)."""
    best = -1
    for seq in itertools.combinations_with_replacement(range(r + 1), n):
        if sum(seq) == 2 * e and _graphical(seq):
            best = max(best, sum(d * d for d in seq))
    return best


@pytest.mark.parametrize("r,e,n", [(1, 1, 4), (1, 2, 4), (2, 2, 6), (3, 3, 6), (4, 4, 10),
                                   (5, 5, 10), (5, 4, 6), (6, 7, 10), (3, 5, 6), (4, 6, 7)])
def test_phi_bruteforce_matches_degree_sequences(r, e, n):
    assert max_phi_bruteforce(r, e, n)[0] == phi_oracle(r, e, n)


@pytest.mark.parametrize("r,e,expect", [(1, 1, 2), (4, 4, 20), (5, 5, 30), (6, 7, 48)])
def test_phi_audit_equality_cases(r, e, expect):
    a = audit_lemma_phi(r, e, 10)
    assert a.phi == expect == a.bound
    assert a.holds and a.equality and a.maximizer_with_structure and a.structure_attains_max
    w = parse_graph6(a.extremal_witness)
    assert phi(w) == a.phi and w.num_edges == e and max(w.degrees()) <= r


def test_phi_bound_formula():
    assert phi_bound(4, 4) == 20
    assert phi_bound(5, 6) == Fraction(36 - 60 + 50) + 10
    b = Fraction(7, 6)
    assert phi_bound(6, 7) == (b * b - 2 * b + 2) * 36 + (5 * b - 4) * 6


def test_phi_audit_preconditions():
    with pytest.raises(InfeasibleError):
        audit_lemma_phi(5, 6)          # e/r = 6/5 is excluded
    with pytest.raises(InfeasibleError):
        audit_lemma_phi(4, 3)
    with pytest.raises(ValidationError):
        audit_lemma_phi(4, 4, n_cap=13)
    with pytest.raises(InfeasibleError):
        audit_lemma_phi(4, 4, n_cap=3)


def test_star_structure():
    g = star_structure(4, 5, 8)
    assert g.degrees()[:2] == [4, 2] and g.num_edges == 5
    assert has_star_structure(g, 4, 5)
    assert not has_star_structure(Graph.cycle(5), 4, 5)
    assert star_structure(4, 8, 8) is None


def test_phi_verdict_json():
    v = audit_lemma_phi(4, 4).verdict()
    d = json.loads(v.to_json())
    assert d["kind"] == "REPORT" and d["slack_num"] == 0 and d["witness_graph6"]


def test_triangle_profile():
    # in K4 each triangle vertex sees the other two; vertex 3 sees all three
    assert triangle_profile(Graph.complete(4), (0, 1, 2)) == (0, 0, 3, 1)
    # C5 plus a chord-free pendant structure: use K5 minus an edge
    g = Graph.from_edges(5, [e for e in itertools.combinations(range(5), 2) if e != (3, 4)])
    assert triangle_profile(g, (0, 1, 2)) == (0, 0, 3, 2)


def test_identity_on_examples():
    for g, k in [(Graph.complete(4), 3), (Graph.complete(5), 4),
                 (build_extremal(validate_params(13, 6)), 6)]:
        v = audit_triangle_identity(g, k)
        assert v.holds and v.kind == "ASSERT"
        assert v.extra["triangles_checked"] == count_triangles(g).total


def test_identity_on_random_graphs():
    for seed in range(50):
        g = random_regular(15, 4, seed)
        assert audit_triangle_identity(g, 4).holds


def test_partition_inequality(rng):
    assert audit_partition_inequality(Graph.complete(4), 3, [0, 1]).holds
    for seed in range(60):
        n = rng.randint(8, 24)
        k = rng.choice([4, 6, 8])
        if k >= n:
            continue
        g = random_regular(n, k, seed)
        part = [v for v in range(n) if rng.random() < 0.5]
        v = audit_partition_inequality(g, k, part)
        assert v.holds and v.slack >= 0


def test_partition_bad_vertex():
    with pytest.raises(ValidationError):
        audit_partition_inequality(Graph.complete(4), 3, [7])


def test_c5_blowup_tight():
    g = c5_blowup(2)
    assert g.is_regular(4) and count_triangles(g).total == 0
    found, cyc = has_c5_through(g)
    assert found
    a = audit_c5_structure(g, 4, [0, 2, 4, 6, 8])
    assert a.holds and a.disjoint and a.z == ()
    assert [len(s) for s in a.n_sets] == [2] * 5
    assert all(v == 0 for v in a.slacks.values())


def test_c5_rejects_non_cycle():
    g = c5_blowup(2)
    with pytest.raises(ValidationError):
        audit_c5_structure(g, 4, [0, 1, 2, 3, 4])
    with pytest.raises(ValidationError):
        audit_c5_structure(g, 4, [0, 2, 4, 6])


def test_c5_on_perturbed_blowups():
    seen = 0
    for seed in range(40):
        g = c5_blowup(4)
        rng = random.Random(seed)
        for _ in range(seed % 7):
            g = switch_step(g, rng)
        d = heavy_decompose(g, 8)
        found, cyc = has_c5_through(d.g_prime)
        if not found:
            continue
        seen += 1
        a = audit_c5_structure(g, 8, cyc, d)
        assert a.gprime_triangle_free and a.disjoint
        v = a.verdict({"seed": seed})
        assert v.kind == "REPORT" and isinstance(v.holds, bool)
    assert seen > 0
