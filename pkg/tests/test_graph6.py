import networkx as nx
import pytest

from conftest import gnp
from regtri.errors import Graph6Error
from regtri.graph import Graph
from regtri.graph6 import _encode_n, append_graph6, emit_graph6, parse_graph6, read_graph6_file


def _unpack_by_hand(s):
    # independent decoder: flatten all 6-bit groups, walk columns
    n = ord(s[0]) - 63
    bits = "".join(format(ord(c) - 63, "06b") for c in s[1:])
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    return n, sorted(p for p, b in zip(pairs, bits) if b == "1")


def test_known_string():
    g = parse_graph6("D?{")
    n, edges = _unpack_by_hand("D?{")
    assert g.n == n == 5
    assert g.edges() == edges == [(0, 4), (1, 4), (2, 4), (3, 4)]
    assert emit_graph6(g) == "D?{"


def test_base_cases():
    assert emit_graph6(Graph.empty(1)) == "@"
    assert emit_graph6(Graph.empty(0)) == "?"
    assert parse_graph6("@").n == 1
    assert parse_graph6(">>graph6<<D?{") == parse_graph6("D?{")


def test_matches_networkx(rng):
    for n in [2, 3, 7, 30, 62, 63, 64, 100, 130]:
        g = gnp(n, 0.3, rng)
        h = nx.empty_graph(n)
        h.add_edges_from(g.edges())
        ref = nx.to_graph6_bytes(h, header=False).decode().strip()
        assert emit_graph6(g) == ref
        assert parse_graph6(ref) == g


def test_long_form_prefix():
    s = emit_graph6(Graph.empty(63))
    assert s.startswith("~??~")
    assert len(_encode_n(258047)) == 4
    assert _encode_n(258048).startswith("~~") and len(_encode_n(258048)) == 8


@pytest.mark.parametrize("text,offset", [
    ("D?", 2),            # too short: reported where data ends
    ("D?{?", 3),          # too long
    ("D?|", 2),           # nonzero padding in the last byte
    ("D?\x7f", 2),        # byte out of range
    ("~??_", 0),          # long prefix for n <= 62
    ("", 0),
])
def test_errors_carry_offset(text, offset):
    with pytest.raises(Graph6Error) as exc:
        parse_graph6(text)
    assert exc.value.offset == offset


def test_file_round_trip(tmp_path, rng):
    path = tmp_path / "g.g6"
    graphs = [gnp(rng.randint(0, 20), 0.5, rng) for _ in range(10)]
    append_graph6(path, graphs[:4])
    append_graph6(path, graphs[4:])
    assert read_graph6_file(path) == graphs
