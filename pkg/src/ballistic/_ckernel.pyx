# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Same algorithms and contracts as ``_pykernel``."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef enum:
    RENEWED_ = 0
    CENSORED_ = 1
    NEED_MORE_ = 2

RENEWED = RENEWED_
CENSORED = CENSORED_
NEED_MORE = NEED_MORE_

IMPLEMENTATION = "cython"

# kinds returned by the victim search
cdef enum:
    V_NONE = 0
    V_PLUS = 1
    V_SURV = 2
    V_RESCUE = 3
    V_TRIPLE = 4


cdef struct Engine:
    int cap
    signed char *sp
    long *death
    long *partner
    long *kill_by
    long *cm
    long *plus
    long nplus
    long *zeros
    long nzeros
    long nsurv0


cdef int engine_init(Engine *e, long cap) except -1:
    e.cap = cap
    e.sp = <signed char *>malloc(cap * sizeof(signed char))
    e.death = <long *>malloc(cap * sizeof(long))
    e.partner = <long *>malloc(cap * sizeof(long))
    e.kill_by = <long *>malloc(cap * sizeof(long))
    e.cm = <long *>malloc(cap * sizeof(long))
    e.plus = <long *>malloc(cap * sizeof(long))
    e.zeros = <long *>malloc(cap * sizeof(long))
    if (e.sp == NULL or e.death == NULL or e.partner == NULL or e.kill_by == NULL
            or e.cm == NULL or e.plus == NULL or e.zeros == NULL):
        engine_free(e)
        raise MemoryError()
    e.nplus = 0
    e.nzeros = 0
    e.nsurv0 = 0
    return 0


cdef void engine_free(Engine *e) noexcept:
    free(e.sp)
    free(e.death)
    free(e.partner)
    free(e.kill_by)
    free(e.cm)
    free(e.plus)
    free(e.zeros)
    e.sp = NULL
    e.death = NULL
    e.partner = NULL
    e.kill_by = NULL
    e.cm = NULL
    e.plus = NULL
    e.zeros = NULL


# ---------------------------------------------------------------- forward

cdef inline void fwd_append(Engine *e, long m, int s) noexcept nogil:
    cdef long b, x, d, t2, a, settle, top
    e.sp[m] = s
    if s == 1:
        e.death[m] = -1
        e.plus[e.nplus] = m
        e.nplus += 1
    elif s == 0:
        if e.nplus > 0:
            e.nplus -= 1
            b = e.plus[e.nplus]
            e.death[b] = 2 * (m - b)
            e.death[m] = 2 * (m - b)
            e.partner[m] = b
            e.kill_by[b] = m
            settle = 2 * m - b
            if e.nzeros > 0:
                top = e.zeros[e.nzeros - 1]
                if e.death[top] >= 0 and e.cm[top] > settle:
                    settle = e.cm[top]
            e.cm[m] = settle
        else:
            e.death[m] = -1
            e.cm[m] = -1
            e.nsurv0 += 1
        e.zeros[e.nzeros] = m
        e.nzeros += 1
    else:
        while e.nzeros > 0:
            x = e.zeros[e.nzeros - 1]
            d = e.death[x]
            if d < 0 or d >= 2 * (m - x):
                break
            e.nzeros -= 1
        x = e.zeros[e.nzeros - 1] if e.nzeros > 0 else -1
        if e.nplus > 0 and (x < 0 or m + e.plus[e.nplus - 1] > 2 * x):
            e.nplus -= 1
            b = e.plus[e.nplus]
            e.death[b] = m - b
            e.death[m] = m - b
            e.kill_by[b] = m
        elif x >= 0:
            e.nzeros -= 1
            t2 = 2 * (m - x)
            d = e.death[x]
            e.death[m] = t2
            if d < 0:
                e.death[x] = t2
                e.nsurv0 -= 1
            elif d > t2:
                a = e.partner[x]
                e.death[a] = -1
                e.plus[e.nplus] = a
                e.nplus += 1
                e.death[x] = t2
            else:
                e.kill_by[e.partner[x]] = m
        else:
            e.death[m] = -1


cdef inline long settle_index(Engine *e, long b) noexcept nogil:
    cdef long k = e.kill_by[b]
    if e.sp[k] == 0:
        return 2 * k - b
    return k


cdef inline long pending_settle(Engine *e) noexcept nogil:
    cdef long top
    if e.nzeros == 0:
        return -1
    top = e.zeros[e.nzeros - 1]
    if e.death[top] < 0:
        return -1
    return e.cm[top]


def xi_fast(speeds):
    cdef signed char[::1] sv = np.ascontiguousarray(speeds, dtype=np.int8)
    cdef long n = sv.shape[0]
    cdef long m
    cdef Engine e
    out = np.empty(n, dtype=np.int8)
    cdef signed char[::1] ov = out
    engine_init(&e, n if n > 0 else 1)
    try:
        with nogil:
            for m in range(n):
                fwd_append(&e, m, sv[m])
            for m in range(n):
                ov[m] = e.sp[m] if e.death[m] < 0 else 2
    finally:
        engine_free(&e)
    return out


cdef long renewal_core(Engine *e, const signed char[::1] sv, long L, long horizon,
                       long *eta, long *z, long *revealed) noexcept nogil:
    cdef long w, k, g, target
    fwd_append(e, 0, 0)
    fwd_append(e, 1, 1)
    w = 1
    while True:
        if e.nplus > 0:
            k = e.plus[0]
            while e.death[k] < 0 or settle_index(e, k) > w:
                if w + 1 > horizon:
                    z[0] = e.nsurv0
                    revealed[0] = w
                    return CENSORED_
                if w + 1 >= L:
                    revealed[0] = w + 1
                    return NEED_MORE_
                w += 1
                fwd_append(e, w, sv[w])
            g = e.kill_by[k]
            if e.sp[g] == -1:
                eta[0] = w
                z[0] = e.nsurv0
                revealed[0] = w
                return RENEWED_
            continue
        target = pending_settle(e)
        if target <= w:
            eta[0] = w
            z[0] = e.nsurv0
            revealed[0] = w
            return RENEWED_
        while w < target:
            if w + 1 > horizon:
                z[0] = e.nsurv0
                revealed[0] = w
                return CENSORED_
            if w + 1 >= L:
                revealed[0] = w + 1
                return NEED_MORE_
            w += 1
            fwd_append(e, w, sv[w])
            if e.nplus > 0:
                break


def renewal(speeds, long horizon):
    cdef const signed char[::1] sv = np.ascontiguousarray(speeds, dtype=np.int8)
    cdef long L = sv.shape[0]
    cdef long eta = -1, z = 0, revealed = 1, status
    cdef int s1
    cdef Engine e
    if L < 2:
        return NEED_MORE_, -1, 0, 1
    s1 = sv[1]
    if s1 != 1:
        return RENEWED_, 1, (2 if s1 == 0 else 0), 1
    engine_init(&e, min(L, horizon + 1))
    try:
        with nogil:
            status = renewal_core(&e, sv, L, horizon, &eta, &z, &revealed)
    finally:
        engine_free(&e)
    if status == NEED_MORE_:
        return NEED_MORE_, -1, 0, revealed
    if status == CENSORED_:
        return CENSORED_, -1, z, revealed
    return RENEWED_, eta, z, revealed


# ---------------------------------------------------------------- undoable

cdef struct Undo:
    int kind      # 0 '+', 1 '0', V_* for -1 appends
    long x
    long old


cdef inline void victim(Engine *e, long m, int *kind, long *idx) noexcept nogil:
    cdef long j, zz, d, x = -1
    j = e.nzeros - 1
    while j >= 0:
        zz = e.zeros[j]
        d = e.death[zz]
        if d < 0 or d >= 2 * (m - zz):
            x = zz
            break
        j -= 1
    if e.nplus > 0 and (x < 0 or m + e.plus[e.nplus - 1] > 2 * x):
        kind[0] = V_PLUS
        idx[0] = e.plus[e.nplus - 1]
        return
    idx[0] = x
    if x < 0:
        kind[0] = V_NONE
        return
    d = e.death[x]
    if d < 0:
        kind[0] = V_SURV
    elif d > 2 * (m - x):
        kind[0] = V_RESCUE
    else:
        kind[0] = V_TRIPLE


cdef inline void u_apply(Engine *e, long m, int s, Undo *u) noexcept nogil:
    cdef long b, a, x
    cdef int kind
    e.sp[m] = s
    if s == 1:
        e.death[m] = -1
        e.plus[e.nplus] = m
        e.nplus += 1
        u.kind = -2
        return
    if s == 0:
        e.zeros[e.nzeros] = m
        e.nzeros += 1
        u.kind = -1
        if e.nplus > 0:
            e.nplus -= 1
            b = e.plus[e.nplus]
            e.death[b] = 2 * (m - b)
            e.death[m] = 2 * (m - b)
            e.partner[m] = b
            e.kill_by[b] = m
            u.x = b
        else:
            e.death[m] = -1
            e.nsurv0 += 1
            u.x = -1
        return
    victim(e, m, &kind, &x)
    u.kind = kind
    u.x = x
    if kind == V_PLUS:
        e.nplus -= 1
        e.death[x] = m - x
        e.death[m] = m - x
        e.kill_by[x] = m
    elif kind == V_SURV:
        e.death[x] = 2 * (m - x)
        e.death[m] = 2 * (m - x)
        e.nsurv0 -= 1
    elif kind == V_RESCUE:
        a = e.partner[x]
        u.old = e.death[x]
        e.death[a] = -1
        e.plus[e.nplus] = a
        e.nplus += 1
        e.death[x] = 2 * (m - x)
        e.death[m] = 2 * (m - x)
    elif kind == V_TRIPLE:
        e.death[m] = 2 * (m - x)
        e.kill_by[e.partner[x]] = m
    else:
        e.death[m] = -1


cdef inline void u_undo(Engine *e, Undo *u) noexcept nogil:
    cdef long a
    if u.kind == -2:
        e.nplus -= 1
    elif u.kind == -1:
        e.nzeros -= 1
        if u.x >= 0:
            e.plus[e.nplus] = u.x
            e.nplus += 1
            e.death[u.x] = -1
        else:
            e.nsurv0 -= 1
    elif u.kind == V_PLUS:
        e.plus[e.nplus] = u.x
        e.nplus += 1
        e.death[u.x] = -1
    elif u.kind == V_SURV:
        e.death[u.x] = -1
        e.nsurv0 += 1
    elif u.kind == V_RESCUE:
        e.nplus -= 1
        a = e.plus[e.nplus]
        e.death[a] = u.old
        e.death[u.x] = u.old
        e.kill_by[a] = u.x
    elif u.kind == V_TRIPLE:
        e.kill_by[e.partner[u.x]] = u.x


cdef struct LeftCtx:
    Engine *e
    long maxn
    long width
    long long *a_counts
    long long *g_counts
    long long nodes


cdef inline bint left_expandable(Engine *e, long m) noexcept nogil:
    cdef long k
    if e.death[1] < 0:
        return True
    k = e.kill_by[1]
    return e.sp[k] == 0 and 2 * k - 1 > m


cdef void left_record(LeftCtx *c, long m, long nz) noexcept nogil:
    cdef Engine *e = c.e
    cdef long n = m + 1
    cdef int kind
    cdef long x
    c.nodes += 1
    if e.nplus == 1 and e.plus[0] == 1:
        c.a_counts[n * c.width + nz] += 1
    victim(e, n, &kind, &x)
    if (kind == V_PLUS and x == 1) or (kind == V_TRIPLE and e.partner[x] == 1):
        c.g_counts[n * c.width + nz] += 1


cdef void left_dfs(LeftCtx *c, long m, long nz) noexcept nogil:
    cdef Undo u
    cdef int s
    left_record(c, m, nz)
    if m + 2 > c.maxn or not left_expandable(c.e, m):
        return
    for s in range(-1, 2):
        u_apply(c.e, m + 1, s, &u)
        left_dfs(c, m + 1, nz + (1 if s == 0 else 0))
        u_undo(c.e, &u)


def enum_left(long maxn, prefix=()):
    cdef Engine e
    cdef LeftCtx c
    cdef Undo u
    cdef long m = 1, nz = 0
    cdef int s
    a_counts = np.zeros((maxn + 1, maxn + 1), dtype=np.int64)
    g_counts = np.zeros((maxn + 1, maxn + 1), dtype=np.int64)
    cdef long long[:, ::1] av = a_counts
    cdef long long[:, ::1] gv = g_counts
    engine_init(&e, maxn + 2)
    try:
        u_apply(&e, 0, 0, &u)
        u_apply(&e, 1, 1, &u)
        for s in prefix:
            if m + 2 > maxn or not left_expandable(&e, m):
                return a_counts, g_counts, 0
            m += 1
            u_apply(&e, m, s, &u)
            nz += 1 if s == 0 else 0
        c.e = &e
        c.maxn = maxn
        c.width = maxn + 1
        c.a_counts = &av[0, 0]
        c.g_counts = &gv[0, 0]
        c.nodes = 0
        with nogil:
            left_dfs(&c, m, nz)
    finally:
        engine_free(&e)
    return a_counts, g_counts, c.nodes


cdef struct RightCtx:
    Engine *e
    long maxlen
    long width
    long long *counts
    long long *prime
    long long nodes


cdef void right_dfs(RightCtx *c, long length, long nz) noexcept nogil:
    cdef Engine *e = c.e
    cdef Undo u
    cdef int s
    if length >= 1:
        c.nodes += 1
        c.counts[(length * c.width + nz) * c.width + e.nsurv0] += 1
        if e.sp[length - 1] == 1 and e.nplus == 1:
            c.prime[length * c.width + nz] += 1
    if length >= c.maxlen:
        return
    for s in range(-1, 2):
        u_apply(e, length, s, &u)
        if not (s == -1 and u.kind == V_NONE):
            right_dfs(c, length + 1, nz + (1 if s == 0 else 0))
        u_undo(e, &u)


def enum_right(long maxlen, prefix=()):
    cdef Engine e
    cdef RightCtx c
    cdef Undo u
    cdef long length = 0, nz = 0
    cdef int s
    counts = np.zeros((maxlen + 1, maxlen + 1, maxlen + 1), dtype=np.int64)
    prime = np.zeros((maxlen + 1, maxlen + 1), dtype=np.int64)
    cdef long long[:, :, ::1] cv = counts
    cdef long long[:, ::1] pv = prime
    engine_init(&e, maxlen + 1)
    try:
        for s in prefix:
            if length >= maxlen:
                return counts, prime, 0
            u_apply(&e, length, s, &u)
            if s == -1 and u.kind == V_NONE:
                return counts, prime, 0
            length += 1
            nz += 1 if s == 0 else 0
        c.e = &e
        c.maxlen = maxlen
        c.width = maxlen + 1
        c.counts = &cv[0, 0, 0]
        c.prime = &pv[0, 0]
        c.nodes = 0
        with nogil:
            right_dfs(&c, length, nz)
    finally:
        engine_free(&e)
    return counts, prime, c.nodes
