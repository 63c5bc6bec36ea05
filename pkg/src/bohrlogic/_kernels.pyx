# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Same contracts as ``_kernels_py``.

Frame routines run on ``uint64`` words when the poset has at most 64 atoms
in total and otherwise defer to the pure-Python versions.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

from . import _kernels_py as _py
from ._kernels_py import CapExceeded

ctypedef uint64_t u64


cdef inline bint _fits(up_images):
    return len(up_images) <= 64


cdef u64* _words(values) except NULL:
    cdef Py_ssize_t n = len(values), i
    cdef u64* buf = <u64*> malloc((n if n > 0 else 1) * sizeof(u64))
    if buf == NULL:
        raise MemoryError()
    for i in range(n):
        buf[i] = <u64> values[i]
    return buf


def implies_bits(up_images, s, t):
    if not _fits(up_images):
        return _py.implies_bits(up_images, s, t)
    cdef Py_ssize_t nb = len(up_images), g
    cdef u64* up = _words(up_images)
    cdef u64 bad = (<u64> s) & ~(<u64> t)
    cdef u64 out = 0
    for g in range(nb):
        if not (up[g] & bad):
            out |= (<u64> 1) << g
    free(up)
    return out


def neg_bits(up_images, s):
    if not _fits(up_images):
        return _py.neg_bits(up_images, s)
    cdef Py_ssize_t nb = len(up_images), g
    cdef u64* up = _words(up_images)
    cdef u64 ss = <u64> s
    cdef u64 out = 0
    for g in range(nb):
        if not (up[g] & ss):
            out |= (<u64> 1) << g
    free(up)
    return out


def notnot_bits(up_images, s):
    if not _fits(up_images):
        return _py.notnot_bits(up_images, s)
    cdef Py_ssize_t nb = len(up_images), g
    cdef u64* up = _words(up_images)
    cdef u64 ss = <u64> s
    cdef u64 reach = 0, out = 0
    for g in range(nb):
        if up[g] & ss:
            reach |= (<u64> 1) << g
    for g in range(nb):
        if not (up[g] & ~reach):
            out |= (<u64> 1) << g
    free(up)
    return out


def is_upset(up_images, s):
    if not _fits(up_images):
        return _py.is_upset(up_images, s)
    cdef Py_ssize_t nb = len(up_images), g
    cdef u64* up = _words(up_images)
    cdef u64 ss = <u64> s
    cdef bint ok = True
    for g in range(nb):
        if (ss >> g) & 1 and (up[g] & ~ss):
            ok = False
            break
    free(up)
    return ok


def enumerate_upsets(up_images, cap):
    if not _fits(up_images):
        return _py.enumerate_upsets(up_images, cap)
    cdef Py_ssize_t nb = len(up_images), g, top
    cdef int64_t limit = cap
    cdef u64* rest = _words(up_images)
    cdef u64* stack_s = <u64*> malloc((2 * nb + 2) * sizeof(u64))
    cdef Py_ssize_t* stack_g = <Py_ssize_t*> malloc((2 * nb + 2) * sizeof(Py_ssize_t))
    cdef u64 s
    cdef list out = []
    if stack_s == NULL or stack_g == NULL:
        free(rest)
        free(stack_s)
        free(stack_g)
        raise MemoryError()
    try:
        for g in range(nb):
            rest[g] &= ~((<u64> 1) << g)
        top = 0
        stack_g[0] = nb - 1
        stack_s[0] = 0
        while top >= 0:
            g = stack_g[top]
            s = stack_s[top]
            top -= 1
            if g < 0:
                out.append(s)
                if len(out) > limit:
                    raise CapExceeded(f"frame has more than {cap} elements")
                continue
            top += 1
            stack_g[top] = g - 1
            stack_s[top] = s
            if not (rest[g] & ~s):
                top += 1
                stack_g[top] = g - 1
                stack_s[top] = s | ((<u64> 1) << g)
    finally:
        free(rest)
        free(stack_s)
        free(stack_g)
    out.sort()
    return out


def prime_elements(elements, top):
    if top >= (1 << 64) or any(e >= (1 << 64) for e in elements):
        return _py.prime_elements(elements, top)
    cdef Py_ssize_t n = len(elements), i, a, b, m
    cdef u64* el = _words(elements)
    cdef u64* outside = <u64*> malloc((n if n > 0 else 1) * sizeof(u64))
    cdef u64 p, t = <u64> top
    cdef bint ok
    cdef list out = []
    if outside == NULL:
        free(el)
        raise MemoryError()
    for i in range(n):
        p = el[i]
        if p == t:
            continue
        m = 0
        for a in range(n):
            if el[a] & ~p:
                outside[m] = el[a]
                m += 1
        ok = True
        for a in range(m):
            for b in range(a, m):
                if not ((outside[a] & outside[b]) & ~p):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(i)
    free(el)
    free(outside)
    return out


def adjunction_violations(elements, implies_table):
    if any(e >= (1 << 64) for e in elements):
        return _py.adjunction_violations(elements, implies_table)
    cdef Py_ssize_t n = len(elements), si, ti, ri
    cdef u64* el = _words(elements)
    cdef u64* imp = _words(implies_table)
    cdef u64 s, t, r, im
    cdef long long bad = 0
    for si in range(n):
        s = el[si]
        for ti in range(n):
            t = el[ti]
            im = imp[si * n + ti]
            for ri in range(n):
                r = el[ri]
                if (not (r & ~im)) != (not ((r & s) & ~t)):
                    bad += 1
    free(el)
    free(imp)
    return bad


# --- exactly-one-per-block search -------------------------------------------

cdef struct Search:
    int n_vars
    int n_blocks
    int* blk_start     # CSR: block -> variables
    int* blk_vars
    int* var_start     # CSR: variable -> blocks
    int* var_blks
    int* val
    int* ones
    int* free_
    int* trail
    int trail_len
    int* queue_v
    int* queue_x
    long long nodes


cdef bint _assign(Search* S, int v0, int x0):
    cdef int qn = 0, v, x, k, b, w, kk
    S.queue_v[0] = v0
    S.queue_x[0] = x0
    qn = 1
    while qn > 0:
        qn -= 1
        v = S.queue_v[qn]
        x = S.queue_x[qn]
        if S.val[v] != -1:
            if S.val[v] != x:
                return False
            continue
        S.val[v] = x
        S.trail[S.trail_len] = v
        S.trail_len += 1
        for k in range(S.var_start[v], S.var_start[v + 1]):
            b = S.var_blks[k]
            S.free_[b] -= 1
            S.ones[b] += x
        for k in range(S.var_start[v], S.var_start[v + 1]):
            b = S.var_blks[k]
            if x == 1:
                if S.ones[b] > 1:
                    return False
                for kk in range(S.blk_start[b], S.blk_start[b + 1]):
                    w = S.blk_vars[kk]
                    if S.val[w] == -1:
                        S.queue_v[qn] = w
                        S.queue_x[qn] = 0
                        qn += 1
            elif S.ones[b] == 0:
                if S.free_[b] == 0:
                    return False
                if S.free_[b] == 1:
                    for kk in range(S.blk_start[b], S.blk_start[b + 1]):
                        w = S.blk_vars[kk]
                        if S.val[w] == -1:
                            S.queue_v[qn] = w
                            S.queue_x[qn] = 1
                            qn += 1
                            break
    return True


cdef void _undo(Search* S, int mark):
    cdef int v, x, k, b
    while S.trail_len > mark:
        S.trail_len -= 1
        v = S.trail[S.trail_len]
        x = S.val[v]
        S.val[v] = -1
        for k in range(S.var_start[v], S.var_start[v + 1]):
            b = S.var_blks[k]
            S.free_[b] += 1
            S.ones[b] -= x


cdef bint _rec(Search* S):
    cdef int b, best = -1, best_free = 0, k, v, mark
    for b in range(S.n_blocks):
        if S.ones[b] == 0 and (best == -1 or S.free_[b] < best_free):
            best = b
            best_free = S.free_[b]
    if best == -1:
        return True
    for k in range(S.blk_start[best], S.blk_start[best + 1]):
        v = S.blk_vars[k]
        if S.val[v] != -1:
            continue
        S.nodes += 1
        mark = S.trail_len
        if _assign(S, v, 1) and _rec(S):
            return True
        _undo(S, mark)
    return False


def exactly_one_search(n_vars, blocks):
    cdef Search S
    cdef int i, b, k, total = 0, qcap
    blocks = [list(blk) for blk in blocks]
    S.n_vars = n_vars
    S.n_blocks = len(blocks)
    qcap = 2
    for blk in blocks:
        total += len(blk)
        qcap += len(blk) * len(blk) + len(blk)
    # one propagation pushes at most |b| entries per block for a 1 and one for a 0
    S.blk_start = <int*> malloc((S.n_blocks + 1) * sizeof(int))
    S.blk_vars = <int*> malloc((total + 1) * sizeof(int))
    S.var_start = <int*> malloc((n_vars + 2) * sizeof(int))
    S.var_blks = <int*> malloc((total + 1) * sizeof(int))
    S.val = <int*> malloc((n_vars + 1) * sizeof(int))
    S.ones = <int*> malloc((S.n_blocks + 1) * sizeof(int))
    S.free_ = <int*> malloc((S.n_blocks + 1) * sizeof(int))
    S.trail = <int*> malloc((n_vars + 1) * sizeof(int))
    S.queue_v = <int*> malloc(qcap * sizeof(int))
    S.queue_x = <int*> malloc(qcap * sizeof(int))
    try:
        if (S.blk_start == NULL or S.blk_vars == NULL or S.var_start == NULL or
                S.var_blks == NULL or S.val == NULL or S.ones == NULL or
                S.free_ == NULL or S.trail == NULL or S.queue_v == NULL or S.queue_x == NULL):
            raise MemoryError()
        k = 0
        for b in range(S.n_blocks):
            S.blk_start[b] = k
            for v in blocks[b]:
                S.blk_vars[k] = v
                k += 1
            S.ones[b] = 0
            S.free_[b] = len(blocks[b])
        S.blk_start[S.n_blocks] = k
        counts = [0] * (n_vars + 1)
        for blk in blocks:
            for v in blk:
                counts[v] += 1
        k = 0
        for i in range(n_vars):
            S.var_start[i] = k
            k += counts[i]
        S.var_start[n_vars] = k
        fill = [S.var_start[i] for i in range(n_vars)]
        for b in range(S.n_blocks):
            for v in blocks[b]:
                S.var_blks[fill[v]] = b
                fill[v] += 1
        for i in range(n_vars):
            S.val[i] = -1
        S.trail_len = 0
        S.nodes = 0
        if _rec(&S):
            result = [S.val[i] if S.val[i] > 0 else 0 for i in range(n_vars)]
        else:
            result = None
        return result, S.nodes
    finally:
        free(S.blk_start)
        free(S.blk_vars)
        free(S.var_start)
        free(S.var_blks)
        free(S.val)
        free(S.ones)
        free(S.free_)
        free(S.trail)
        free(S.queue_v)
        free(S.queue_x)
