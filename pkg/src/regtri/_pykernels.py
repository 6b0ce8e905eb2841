"""Pure-Python implementations of the hot kernels.

This is the fallback used when the compiled ``_ckernels`` extension is not
available (or when ``REGTRI_PURE_PYTHON=1``). Every function here has the same
signature and, given the same inputs and seed, the same result as its
compiled twin. Adjacency rows are handled as Python ints used as bitsets.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

MODE_ENUMERATE = 0
MODE_MINIMIZE = 1
MODE_COLLECT = 2


def splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step: returns (new_state, output)."""
    state = (state + _GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def bits_to_rows(bits: np.ndarray) -> list[int]:
    return [int.from_bytes(row.tobytes(), "little") for row in bits]


def rows_to_bits(rows, n: int) -> np.ndarray:
    words = max(1, (n + 63) // 64)
    buf = b"".join(r.to_bytes(words * 8, "little") for r in rows)
    return np.frombuffer(buf, dtype="<u8").astype(np.uint64).reshape(len(rows), words)


def edge_triangles(bits):
    """Every edge u<v (row-major order) with its triangle count |N(u) & N(v)|."""
    rows = bits_to_rows(bits)
    edges = []
    counts = []
    for u, ru in enumerate(rows):
        higher = ru >> (u + 1)
        while higher:
            low = higher & -higher
            v = u + low.bit_length()
            edges.append((u, v))
            counts.append((ru & rows[v]).bit_count())
            higher ^= low
    return (np.array(edges, dtype=np.int64).reshape(-1, 2),
            np.array(counts, dtype=np.int64))


def _total(rows) -> int:
    total = 0
    for u, ru in enumerate(rows):
        higher = ru >> (u + 1)
        while higher:
            low = higher & -higher
            v = u + low.bit_length()
            # common neighbours above v: each triangle counted once at its two lowest vertices
            total += ((ru & rows[v]) >> (v + 1)).bit_count()
            higher ^= low
    return total


def triangle_total(bits) -> int:
    return _total(bits_to_rows(bits))


def _apply_switch(rows, a, b, c, d) -> int:
    """Replace ab, cd by ac, bd in place; return the change in triangle count."""
    delta = -(rows[a] & rows[b]).bit_count()
    rows[a] ^= 1 << b
    rows[b] ^= 1 << a
    delta -= (rows[c] & rows[d]).bit_count()
    rows[c] ^= 1 << d
    rows[d] ^= 1 << c
    delta += (rows[a] & rows[c]).bit_count()
    rows[a] |= 1 << c
    rows[c] |= 1 << a
    delta += (rows[b] & rows[d]).bit_count()
    rows[b] |= 1 << d
    rows[d] |= 1 << b
    return delta


def _undo_switch(rows, a, b, c, d) -> None:
    rows[a] ^= (1 << c) | (1 << b)
    rows[c] ^= (1 << a) | (1 << d)
    rows[b] ^= (1 << d) | (1 << a)
    rows[d] ^= (1 << b) | (1 << c)


def switch_delta(bits, a: int, b: int, c: int, d: int) -> int:
    """Triangle change of the switch ab,cd -> ac,bd, without applying it."""
    rows = bits_to_rows(bits)
    return _apply_switch(rows, a, b, c, d)


def anneal(bits, edges, steps: int, t0: float, decay: float, t_floor: float,
           seed: int, check_every: int = 0, k: int = -1):
    """Simulated annealing on the 2-switch chain, minimising the triangle count.

    Returns (best, best_bits, final, evaluations, accepted, checks).
    """
    n = bits.shape[0]
    rows = bits_to_rows(bits)
    el = [(int(u), int(v)) for u, v in edges]
    m = len(el)
    cur = _total(rows)
    best = cur
    best_rows = list(rows)
    temp = t0
    state = seed & MASK64
    evaluations = accepted = checks = 0
    for step in range(steps):
        if m >= 2:
            state, z = splitmix64(state)
            i = z % m
            state, z = splitmix64(state)
            j = z % m
            state, z = splitmix64(state)
            if i != j:
                a, b = el[i]
                if z & 1:
                    a, b = b, a
                c, d = el[j]
                if (a != c and a != d and b != c and b != d
                        and not (rows[a] >> c) & 1 and not (rows[b] >> d) & 1):
                    delta = _apply_switch(rows, a, b, c, d)
                    evaluations += 1
                    take = delta <= 0
                    if not take:
                        state, z = splitmix64(state)
                        take = (z >> 11) * (1.0 / 9007199254740992.0) < math.exp(-delta / temp)
                    if take:
                        el[i] = (a, c)
                        el[j] = (b, d)
                        cur += delta
                        accepted += 1
                        if cur < best:
                            best = cur
                            best_rows = list(rows)
                    else:
                        _undo_switch(rows, a, b, c, d)
        if check_every and (step + 1) % check_every == 0:
            checks += 1
            if _total(rows) != cur:
                raise AssertionError(f"incremental triangle count drifted at step {step}")
            if k >= 0 and any(r.bit_count() != k for r in rows):
                raise AssertionError(f"regularity lost at step {step}")
        temp = temp * decay
        if temp < t_floor:
            temp = t_floor
    return best, rows_to_bits(best_rows, n), cur, evaluations, accepted, checks


def regular_search(n: int, k: int, mode: int = MODE_MINIMIZE, incumbent: int = -1,
                   fixed=(), resume=(), node_budget: int = 0,
                   collect_limit: int = 0, visitor=None) -> dict:
    """Backtracking over adjacency rows of labeled k-regular graphs on n vertices.

    Row i picks its neighbours among j > i, lexicographically. ``fixed`` pins
    the first rows exactly; ``resume`` skips every branch lexicographically
    before the given row prefix. ``incumbent`` < 0 means no bound yet.
    """
    adj = [0] * n
    rem = [k] * n
    chosen = [0] * n
    st = {
        "best": incumbent if incumbent >= 0 else n * n * n,
        "best_rows": None,
        "leaves": 0,
        "nodes": 0,
        "minimizers": [],
        "minimizer_count": 0,
        "stopped": False,
        "checkpoint": None,
    }
    nfixed = len(fixed)
    nresume = len(resume)

    def leaf(t):
        st["leaves"] += 1
        snap = tuple(adj)
        if visitor is not None:
            visitor(snap)
        if t < st["best"]:
            st["best"] = t
            st["best_rows"] = snap
            if mode == MODE_COLLECT:
                st["minimizers"] = [snap]
                st["minimizer_count"] = 1
        elif t == st["best"]:
            if st["best_rows"] is None:
                st["best_rows"] = snap
            if mode == MODE_COLLECT:
                st["minimizer_count"] += 1
                if len(st["minimizers"]) < collect_limit:
                    st["minimizers"].append(snap)

    def row(i, t, on_path):
        if i == n:
            leaf(t)
            return
        st["nodes"] += 1
        if node_budget and st["nodes"] > node_budget:
            st["stopped"] = True
            st["checkpoint"] = chosen[:i]
            return
        need = rem[i]
        cands = [j for j in range(i + 1, n) if rem[j] > 0]
        if need > len(cands):
            return
        choose(i, cands, 0, need, t, 0, on_path)

    def finish_row(i, t, mask, on_path):
        if i < nfixed and mask != fixed[i]:
            return
        child_on_path = False
        if on_path and i < nresume:
            r = resume[i]
            if mask == r:
                child_on_path = True
            else:
                diff = mask ^ r
                if mask & diff & -diff:
                    return
        live = [j for j in range(i + 1, n) if rem[j] > 0]
        slots = len(live) - 1
        for j in live:
            if rem[j] > slots:
                return
        chosen[i] = mask
        row(i + 1, t, child_on_path)

    def choose(i, cands, pos, need, t, mask, on_path):
        if st["stopped"]:
            return
        if need == 0:
            finish_row(i, t, mask, on_path)
            return
        if len(cands) - pos < need:
            return
        j = cands[pos]
        nt = t + (adj[i] & adj[j] & ((1 << i) - 1)).bit_count()
        best = st["best"]
        pruned = (mode == MODE_MINIMIZE and nt >= best) or (mode == MODE_COLLECT and nt > best)
        if not pruned:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
            rem[j] -= 1
            choose(i, cands, pos + 1, need - 1, nt, mask | (1 << j), on_path)
            rem[j] += 1
            adj[i] ^= 1 << j
            adj[j] ^= 1 << i
        choose(i, cands, pos + 1, need, t, mask, on_path)

    if n > 0:
        row(0, 0, nresume > 0)
    else:
        leaf(0)
    found = st["best_rows"] is not None
    return {
        "leaves": st["leaves"],
        "best": st["best"] if found else -1,
        "best_rows": st["best_rows"],
        "minimizers": st["minimizers"],
        "minimizer_count": st["minimizer_count"],
        "nodes": st["nodes"],
        "finished": not st["stopped"],
        "checkpoint": st["checkpoint"],
    }


def max_cut(bits):
    """Exact maximum cut by a Gray-code walk over bipartitions.

    The last vertex stays on side 0; each step flips one vertex and updates
    the cut in O(n/64). Returns (best_cut, side_mask).
    """
    rows = bits_to_rows(bits)
    n = len(rows)
    if n <= 1:
        return 0, 0
    deg = [r.bit_count() for r in rows]
    full = (1 << n) - 1
    side = 0
    cut = 0
    best = 0
    best_side = 0
    for s in range(1, 1 << (n - 1)):
        v = (s & -s).bit_length() - 1
        r = rows[v]
        if (side >> v) & 1:
            same = (r & side).bit_count()
        else:
            same = (r & ~side & full).bit_count()
        cut += 2 * same - deg[v]
        side ^= 1 << v
        if cut > best:
            best = cut
            best_side = side
    return best, best_side
