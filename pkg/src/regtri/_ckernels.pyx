# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Mirrors ``_pykernels`` function for function."""

from libc.math cimport exp
from libc.stdint cimport uint64_t, int64_t

import numpy as np

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long x) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long x) nogil

cdef enum:
    MAXN = 64

MODE_ENUMERATE = 0
MODE_MINIMIZE = 1
MODE_COLLECT = 2


cdef inline uint64_t _mix(uint64_t* state) noexcept nogil:
    state[0] += <uint64_t>0x9E3779B97F4A7C15ULL
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


def splitmix64(state):
    cdef uint64_t s = <uint64_t>(state & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t z = _mix(&s)
    return int(s), int(z)


cdef inline int _common(const uint64_t[:, ::1] B, Py_ssize_t u, Py_ssize_t v,
                        Py_ssize_t W) noexcept nogil:
    cdef int c = 0
    cdef Py_ssize_t x
    for x in range(W):
        c += popcount64(B[u, x] & B[v, x])
    return c


cdef inline uint64_t _above(Py_ssize_t u, Py_ssize_t w) noexcept nogil:
    # mask of bit positions > u inside word w
    if w > (u >> 6):
        return ~(<uint64_t>0)
    return ~((<uint64_t>2 << (u & 63)) - 1)


def edge_triangles(const uint64_t[:, ::1] bits):
    cdef Py_ssize_t n = bits.shape[0], W = bits.shape[1]
    cdef Py_ssize_t u, v, w, idx = 0, m = 0
    cdef uint64_t word
    for u in range(n):
        for w in range(W):
            m += popcount64(bits[u, w])
    m //= 2
    out_e = np.empty((m, 2), dtype=np.int64)
    out_c = np.empty(m, dtype=np.int64)
    cdef int64_t[:, ::1] E = out_e
    cdef int64_t[::1] C = out_c
    for u in range(n):
        for w in range(u >> 6, W):
            word = bits[u, w] & _above(u, w)
            while word:
                v = w * 64 + ctz64(word)
                E[idx, 0] = u
                E[idx, 1] = v
                C[idx] = _common(bits, u, v, W)
                idx += 1
                word &= word - 1
    return out_e, out_c


cdef long long _total(const uint64_t[:, ::1] B) noexcept nogil:
    cdef Py_ssize_t n = B.shape[0], W = B.shape[1]
    cdef Py_ssize_t u, v, w, x
    cdef uint64_t word
    cdef long long total = 0
    for u in range(n):
        for w in range(u >> 6, W):
            word = B[u, w] & _above(u, w)
            while word:
                v = w * 64 + ctz64(word)
                for x in range(v >> 6, W):
                    total += popcount64(B[u, x] & B[v, x] & _above(v, x))
                word &= word - 1
    return total


def triangle_total(const uint64_t[:, ::1] bits):
    return int(_total(bits))


cdef inline void _flip(uint64_t[:, ::1] B, Py_ssize_t u, Py_ssize_t v) noexcept nogil:
    B[u, v >> 6] ^= (<uint64_t>1) << (v & 63)
    B[v, u >> 6] ^= (<uint64_t>1) << (u & 63)


cdef inline bint _has(uint64_t[:, ::1] B, Py_ssize_t u, Py_ssize_t v) noexcept nogil:
    return (B[u, v >> 6] >> (v & 63)) & 1


cdef long long _apply_switch(uint64_t[:, ::1] B, Py_ssize_t W, Py_ssize_t a,
                             Py_ssize_t b, Py_ssize_t c, Py_ssize_t d) noexcept nogil:
    cdef long long delta = -_common(B, a, b, W)
    _flip(B, a, b)
    delta -= _common(B, c, d, W)
    _flip(B, c, d)
    delta += _common(B, a, c, W)
    _flip(B, a, c)
    delta += _common(B, b, d, W)
    _flip(B, b, d)
    return delta


cdef inline void _undo_switch(uint64_t[:, ::1] B, Py_ssize_t a, Py_ssize_t b,
                              Py_ssize_t c, Py_ssize_t d) noexcept nogil:
    _flip(B, a, c)
    _flip(B, b, d)
    _flip(B, a, b)
    _flip(B, c, d)


def switch_delta(const uint64_t[:, ::1] bits, Py_ssize_t a, Py_ssize_t b,
                 Py_ssize_t c, Py_ssize_t d):
    work = np.array(bits, dtype=np.uint64, order="C")
    cdef uint64_t[:, ::1] B = work
    return int(_apply_switch(B, B.shape[1], a, b, c, d))


def anneal(bits, edges, long long steps, double t0, double decay, double t_floor,
           seed, long long check_every=0, int k=-1):
    work = np.array(bits, dtype=np.uint64, order="C")
    best_work = work.copy()
    el_arr = np.array(edges, dtype=np.int64, order="C").reshape(-1, 2)
    cdef uint64_t[:, ::1] B = work
    cdef uint64_t[:, ::1] BB = best_work
    cdef int64_t[:, ::1] el = el_arr
    cdef Py_ssize_t n = B.shape[0], W = B.shape[1]
    cdef uint64_t m = <uint64_t>el.shape[0]
    cdef uint64_t state = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t z, i, j
    cdef Py_ssize_t a, b, c, d, tmp, v, x
    cdef long long cur = _total(B), best, delta, step
    cdef long long evaluations = 0, accepted = 0, checks = 0
    cdef double temp = t0
    cdef bint take
    cdef int deg
    best = cur
    for step in range(steps):
        if m >= 2:
            i = _mix(&state) % m
            j = _mix(&state) % m
            z = _mix(&state)
            if i != j:
                a = el[i, 0]
                b = el[i, 1]
                if z & 1:
                    tmp = a
                    a = b
                    b = tmp
                c = el[j, 0]
                d = el[j, 1]
                if (a != c and a != d and b != c and b != d
                        and not _has(B, a, c) and not _has(B, b, d)):
                    delta = _apply_switch(B, W, a, b, c, d)
                    evaluations += 1
                    take = delta <= 0
                    if not take:
                        z = _mix(&state)
                        take = (z >> 11) * (1.0 / 9007199254740992.0) < exp(-(<double>delta) / temp)
                    if take:
                        el[i, 0] = a
                        el[i, 1] = c
                        el[j, 0] = b
                        el[j, 1] = d
                        cur += delta
                        accepted += 1
                        if cur < best:
                            best = cur
                            BB[:, :] = B
                    else:
                        _undo_switch(B, a, b, c, d)
        if check_every and (step + 1) % check_every == 0:
            checks += 1
            if _total(B) != cur:
                raise AssertionError(f"incremental triangle count drifted at step {step}")
            if k >= 0:
                for v in range(n):
                    deg = 0
                    for x in range(W):
                        deg += popcount64(B[v, x])
                    if deg != k:
                        raise AssertionError(f"regularity lost at step {step}")
        temp = temp * decay
        if temp < t_floor:
            temp = t_floor
    return int(best), best_work, int(cur), int(evaluations), int(accepted), int(checks)


cdef class _Search:
    cdef int n, k, mode, nfixed, nresume, collect_limit
    cdef long long best, node_budget, nodes, leaves, minimizer_count
    cdef bint stopped, found
    cdef uint64_t adj[MAXN]
    cdef int rem[MAXN]
    cdef uint64_t chosen[MAXN]
    cdef uint64_t fixed[MAXN]
    cdef uint64_t resume[MAXN]
    cdef int cands[MAXN][MAXN]
    cdef object visitor, best_rows, minimizers, checkpoint

    cdef object snapshot(self):
        return tuple([int(self.adj[i]) for i in range(self.n)])

    cdef int leaf(self, long long t) except -1:
        cdef object snap = None
        self.leaves += 1
        if self.visitor is not None:
            snap = self.snapshot()
            self.visitor(snap)
        if t < self.best:
            self.best = t
            snap = snap if snap is not None else self.snapshot()
            self.best_rows = snap
            self.found = True
            if self.mode == MODE_COLLECT:
                self.minimizers = [snap]
                self.minimizer_count = 1
        elif t == self.best:
            if not self.found:
                self.best_rows = snap if snap is not None else self.snapshot()
                self.found = True
            if self.mode == MODE_COLLECT:
                self.minimizer_count += 1
                if len(self.minimizers) < self.collect_limit:
                    self.minimizers.append(snap if snap is not None else self.snapshot())
        return 0

    cdef int row(self, int i, long long t, bint on_path) except -1:
        cdef int j, nc = 0
        if i == self.n:
            return self.leaf(t)
        self.nodes += 1
        if self.node_budget and self.nodes > self.node_budget:
            self.stopped = True
            self.checkpoint = [int(self.chosen[x]) for x in range(i)]
            return 0
        for j in range(i + 1, self.n):
            if self.rem[j] > 0:
                self.cands[i][nc] = j
                nc += 1
        if self.rem[i] > nc:
            return 0
        return self.choose(i, nc, 0, self.rem[i], t, 0, on_path)

    cdef int finish_row(self, int i, long long t, uint64_t mask, bint on_path) except -1:
        cdef bint child_on_path = False
        cdef uint64_t r, diff
        cdef int j, live = 0
        if i < self.nfixed and mask != self.fixed[i]:
            return 0
        if on_path and i < self.nresume:
            r = self.resume[i]
            if mask == r:
                child_on_path = True
            else:
                diff = mask ^ r
                if mask & diff & (~diff + 1):
                    return 0
        for j in range(i + 1, self.n):
            if self.rem[j] > 0:
                live += 1
        for j in range(i + 1, self.n):
            if self.rem[j] > 0 and self.rem[j] > live - 1:
                return 0
        self.chosen[i] = mask
        return self.row(i + 1, t, child_on_path)

    cdef int choose(self, int i, int nc, int pos, int need, long long t,
                    uint64_t mask, bint on_path) except -1:
        cdef int j
        cdef long long nt
        cdef bint pruned
        cdef uint64_t low
        if self.stopped:
            return 0
        if need == 0:
            return self.finish_row(i, t, mask, on_path)
        if nc - pos < need:
            return 0
        j = self.cands[i][pos]
        low = ((<uint64_t>1) << i) - 1
        nt = t + popcount64(self.adj[i] & self.adj[j] & low)
        if self.mode == MODE_MINIMIZE:
            pruned = nt >= self.best
        elif self.mode == MODE_COLLECT:
            pruned = nt > self.best
        else:
            pruned = False
        if not pruned:
            self.adj[i] |= (<uint64_t>1) << j
            self.adj[j] |= (<uint64_t>1) << i
            self.rem[j] -= 1
            self.choose(i, nc, pos + 1, need - 1, nt, mask | ((<uint64_t>1) << j), on_path)
            self.rem[j] += 1
            self.adj[i] ^= (<uint64_t>1) << j
            self.adj[j] ^= (<uint64_t>1) << i
        return self.choose(i, nc, pos + 1, need, t, mask, on_path)


def regular_search(int n, int k, int mode=MODE_MINIMIZE, long long incumbent=-1,
                   fixed=(), resume=(), long long node_budget=0,
                   int collect_limit=0, visitor=None):
    if n > MAXN:
        raise ValueError(f"compiled search supports n <= {MAXN}")
    cdef _Search s = _Search()
    cdef int i
    s.n = n
    s.k = k
    s.mode = mode
    s.best = incumbent if incumbent >= 0 else <long long>n * n * n
    s.node_budget = node_budget
    s.collect_limit = collect_limit
    s.visitor = visitor
    s.best_rows = None
    s.minimizers = []
    s.checkpoint = None
    s.nodes = s.leaves = s.minimizer_count = 0
    s.stopped = s.found = False
    s.nfixed = len(fixed)
    s.nresume = len(resume)
    for i in range(n):
        s.adj[i] = 0
        s.rem[i] = k
        s.chosen[i] = 0
    for i in range(s.nfixed):
        s.fixed[i] = <uint64_t>fixed[i]
    for i in range(s.nresume):
        s.resume[i] = <uint64_t>resume[i]
    if n > 0:
        s.row(0, 0, s.nresume > 0)
    else:
        s.leaf(0)
    return {
        "leaves": s.leaves,
        "best": s.best if s.found else -1,
        "best_rows": s.best_rows,
        "minimizers": s.minimizers,
        "minimizer_count": s.minimizer_count,
        "nodes": s.nodes,
        "finished": not s.stopped,
        "checkpoint": s.checkpoint,
    }


def max_cut(const uint64_t[:, ::1] bits):
    cdef Py_ssize_t n = bits.shape[0]
    if n <= 1:
        return 0, 0
    if n > 63:
        raise ValueError("exact max-cut supports n <= 63")
    cdef uint64_t rows[MAXN]
    cdef int deg[MAXN]
    cdef Py_ssize_t v
    for v in range(n):
        rows[v] = bits[v, 0]
        deg[v] = popcount64(rows[v])
    cdef uint64_t full = ((<uint64_t>1) << n) - 1
    cdef uint64_t side = 0, best_side = 0, s, limit = (<uint64_t>1) << (n - 1)
    cdef long long cut = 0, best = 0
    cdef int same
    with nogil:
        s = 1
        while s < limit:
            v = ctz64(s)
            if (side >> v) & 1:
                same = popcount64(rows[v] & side)
            else:
                same = popcount64(rows[v] & ~side & full)
            cut += 2 * same - deg[v]
            side ^= (<uint64_t>1) << v
            if cut > best:
                best = cut
                best_side = side
            s += 1
    return int(best), int(best_side)
