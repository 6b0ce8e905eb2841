"""graph6 encoding and decoding.

The format packs the upper triangle of the adjacency matrix column by column
(x(0,1), x(0,2), x(1,2), x(0,3), ...) into 6-bit groups, each written as the
byte ``value + 63``. The vertex count comes first: one byte for n <= 62,
``~`` plus three bytes for n <= 258047, ``~~`` plus six bytes beyond that.
"""

from __future__ import annotations

from .errors import Graph6Error
from .graph import Graph

HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 0:
        raise ValueError("negative vertex count")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n < 1 << 36:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("vertex count too large for graph6")


def emit_graph6(g: Graph) -> str:
    n = g.n
    rows = g.rows
    out = [_encode_n(n)]
    acc = 0
    nbits = 0
    for j in range(1, n):
        rj = rows[j]
        for i in range(j):
            acc = (acc << 1) | ((rj >> i) & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def _decode_n(data: bytes, start: int) -> tuple[int, int]:
    def group(pos):
        if pos >= len(data):
            raise Graph6Error("truncated length prefix", pos)
        b = data[pos]
        if not 63 <= b <= 126:
            raise Graph6Error(f"invalid byte {b!r} in length prefix", pos)
        return b - 63

    first = group(start)
    if first != 63:
        return first, start + 1
    if start + 1 < len(data) and data[start + 1] == 126:
        pos = start + 2
        width = 6
    else:
        pos = start + 1
        width = 3
    n = 0
    for i in range(width):
        n = (n << 6) | group(pos + i)
    if width == 3 and n <= 62:
        raise Graph6Error("non-canonical long length prefix", start)
    if width == 6 and n <= 258047:
        raise Graph6Error("non-canonical long length prefix", start)
    return n, pos + width


def parse_graph6(text) -> Graph:
    """Decode one graph6 line (an optional ``>>graph6<<`` header is accepted)."""
    if isinstance(text, str):
        data = text.strip().encode("ascii", errors="replace")
    else:
        data = bytes(text).strip()
    start = len(HEADER) if data.startswith(HEADER.encode()) else 0
    if start >= len(data):
        raise Graph6Error("empty input", start)
    n, pos = _decode_n(data, start)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != nbytes:
        raise Graph6Error(f"expected {nbytes} data bytes for n={n}, got {len(body)}",
                          pos + min(len(body), nbytes))
    rows = [0] * n
    i, j = 0, 1
    for off, b in enumerate(body):
        if not 63 <= b <= 126:
            raise Graph6Error(f"invalid byte {b!r}", pos + off)
        val = b - 63
        for s in range(5, -1, -1):
            if j >= n:
                if (val >> s) & 1:
                    raise Graph6Error("nonzero padding bits", pos + off)
                continue
            if (val >> s) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            i += 1
            if i == j:
                i = 0
                j += 1
    return Graph(n, rows)


def read_graph6_file(path) -> list[Graph]:
    graphs = []
    with open(path, "rb") as fh:
        for line in fh:
            line = line.strip()
            if line:
                graphs.append(parse_graph6(line))
    return graphs


def append_graph6(path, graphs) -> None:
    """Append graphs to a graph6 file, one per line."""
    with open(path, "a", encoding="ascii") as fh:
        for g in graphs:
            fh.write(emit_graph6(g) + "\n")
