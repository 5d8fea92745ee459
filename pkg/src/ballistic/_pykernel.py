"""Pure-Python hot kernels.  Mirrors ``_ckernel.pyx`` line for line.

All engines process particles left to right.  Appending a particle at the
right end of a unit-spaced configuration only disturbs the existing history
through the new particle itself:

* a +1 particle never meets anything;
* an inert particle is hit by the rightmost surviving +1, if any;
* a -1 particle hits the first particle still alive at the spot where it
  arrives.  Killing an inert particle before its pending +1 killer arrives
  frees that +1, which then becomes the rightmost surviving +1 and escapes.

Death times are stored doubled (``time2``); ``-1`` marks a survivor.  An event
at (pos2, time2) cannot be changed by particles beyond index W once
``pos2 + time2 < 2 (W + 1)``; for a +1 particle this "settle index" is
``2x - b`` when killed by the inert particle at x and ``m`` when killed by the
-1 particle at m.
"""
from __future__ import annotations

import numpy as np

RENEWED = 0
CENSORED = 1
NEED_MORE = 2

IMPLEMENTATION = "python"


class _Forward:
    """Append-only engine used by the simulator and the renewal sampler.

    Zeros that can no longer be reached by any future -1 are discarded lazily
    from the top of ``zeros``, so a full sweep is amortised O(n).
    """

    def __init__(self, cap):
        self.sp = [0] * cap
        self.death = [-1] * cap
        self.partner = [-1] * cap  # for zeros: pending +1 killer
        self.kill_by = [-1] * cap  # for +1: destroyer (larger index on triples)
        self.cm = [-1] * cap  # for stacked zeros: max settle index since last survivor
        self.plus = []
        self.zeros = []
        self.nsurv0 = 0

    def append(self, m, s):
        sp, death = self.sp, self.death
        sp[m] = s
        if s == 1:
            death[m] = -1
            self.plus.append(m)
        elif s == 0:
            zeros = self.zeros
            if self.plus:
                b = self.plus.pop()
                death[b] = death[m] = 2 * (m - b)
                self.partner[m] = b
                self.kill_by[b] = m
                settle = 2 * m - b
                if zeros and death[zeros[-1]] >= 0 and self.cm[zeros[-1]] > settle:
                    settle = self.cm[zeros[-1]]
                self.cm[m] = settle
            else:
                death[m] = -1
                self.cm[m] = -1
                self.nsurv0 += 1
            zeros.append(m)
        else:
            zeros = self.zeros
            while zeros:
                x = zeros[-1]
                d = death[x]
                if d < 0 or d >= 2 * (m - x):
                    break
                zeros.pop()
            x = zeros[-1] if zeros else -1
            plus = self.plus
            if plus and (x < 0 or m + plus[-1] > 2 * x):
                b = plus.pop()
                death[b] = death[m] = m - b
                self.kill_by[b] = m
            elif x >= 0:
                zeros.pop()
                t2 = 2 * (m - x)
                d = death[x]
                death[m] = t2
                if d < 0:
                    death[x] = t2
                    self.nsurv0 -= 1
                elif d > t2:
                    a = self.partner[x]
                    death[a] = -1
                    plus.append(a)
                    death[x] = t2
                else:
                    self.kill_by[self.partner[x]] = m
            else:
                death[m] = -1

    def settle_index(self, b):
        k = self.kill_by[b]
        if self.sp[k] == 0:
            return 2 * k - b
        return k

    def pending_settle(self):
        """Largest settle index among +1 -> 0 collisions right of the
        rightmost surviving inert particle, or -1."""
        if not self.zeros:
            return -1
        top = self.zeros[-1]
        if self.death[top] < 0:
            return -1
        return self.cm[top]


def xi_fast(speeds):
    n = len(speeds)
    eng = _Forward(n)
    for m in range(n):
        eng.append(m, int(speeds[m]))
    out = np.empty(n, dtype=np.int8)
    for i in range(n):
        out[i] = eng.sp[i] if eng.death[i] < 0 else 2
    return out


def renewal(speeds, horizon):
    """Renewal index construction on the revealed prefix ``speeds``.

    Returns ``(status, eta, z, revealed_max)``.  ``status == NEED_MORE`` means
    an index beyond ``len(speeds) - 1`` (but within ``horizon``) is required;
    ``revealed_max`` then holds that index.
    """
    L = len(speeds)
    if L < 2:
        return NEED_MORE, -1, 0, 1
    s1 = int(speeds[1])
    if s1 != 1:
        return RENEWED, 1, (2 if s1 == 0 else 0), 1
    eng = _Forward(min(L, horizon + 1))
    eng.append(0, 0)
    eng.append(1, 1)
    w = 1
    while True:
        if eng.plus:
            k = eng.plus[0]
            while eng.death[k] < 0 or eng.settle_index(k) > w:
                if w + 1 > horizon:
                    return CENSORED, -1, eng.nsurv0, w
                if w + 1 >= L:
                    return NEED_MORE, -1, 0, w + 1
                w += 1
                eng.append(w, int(speeds[w]))
            g = eng.kill_by[k]
            if eng.sp[g] == -1:
                return RENEWED, w, eng.nsurv0, w
            continue
        target = eng.pending_settle()
        if target <= w:
            return RENEWED, w, eng.nsurv0, w
        while w < target:
            if w + 1 > horizon:
                return CENSORED, -1, eng.nsurv0, w
            if w + 1 >= L:
                return NEED_MORE, -1, 0, w + 1
            w += 1
            eng.append(w, int(speeds[w]))
            if eng.plus:
                break


class _Undoable:
    """Engine with exact undo, for depth-first enumeration of short words."""

    def __init__(self, cap):
        self.sp = [0] * cap
        self.death = [-1] * cap
        self.partner = [-1] * cap
        self.kill_by = [-1] * cap
        self.plus = []
        self.zeros = []
        self.nsurv0 = 0

    def victim(self, m):
        """Victim of a -1 appended at m: (kind, index) with kind in
        'p' (+1), 's' (surviving 0), 'r' (rescue), 't' (triple), 'n' (none)."""
        death = self.death
        x = -1
        for j in range(len(self.zeros) - 1, -1, -1):
            z = self.zeros[j]
            d = death[z]
            if d < 0 or d >= 2 * (m - z):
                x = z
                break
        if self.plus and (x < 0 or m + self.plus[-1] > 2 * x):
            return "p", self.plus[-1]
        if x < 0:
            return "n", -1
        d = death[x]
        t2 = 2 * (m - x)
        if d < 0:
            return "s", x
        if d > t2:
            return "r", x
        return "t", x

    def apply(self, m, s):
        sp, death = self.sp, self.death
        sp[m] = s
        if s == 1:
            death[m] = -1
            self.plus.append(m)
            return ("+",)
        if s == 0:
            self.zeros.append(m)
            if self.plus:
                b = self.plus.pop()
                death[b] = death[m] = 2 * (m - b)
                self.partner[m] = b
                self.kill_by[b] = m
                return ("0", b)
            death[m] = -1
            self.nsurv0 += 1
            return ("0", -1)
        kind, x = self.victim(m)
        if kind == "p":
            self.plus.pop()
            death[x] = death[m] = m - x
            self.kill_by[x] = m
        elif kind == "s":
            death[x] = death[m] = 2 * (m - x)
            self.nsurv0 -= 1
        elif kind == "r":
            a = self.partner[x]
            old = death[x]
            death[a] = -1
            self.plus.append(a)
            death[x] = death[m] = 2 * (m - x)
            return ("r", x, old)
        elif kind == "t":
            death[m] = 2 * (m - x)
            self.kill_by[self.partner[x]] = m
        else:
            death[m] = -1
        return (kind, x)

    def undo(self, rec):
        death = self.death
        kind = rec[0]
        if kind == "+":
            self.plus.pop()
        elif kind == "0":
            self.zeros.pop()
            b = rec[1]
            if b >= 0:
                self.plus.append(b)
                death[b] = -1
            else:
                self.nsurv0 -= 1
        elif kind == "p":
            b = rec[1]
            self.plus.append(b)
            death[b] = -1
        elif kind == "s":
            death[rec[1]] = -1
            self.nsurv0 += 1
        elif kind == "r":
            x, old = rec[1], rec[2]
            a = self.plus.pop()
            death[a] = old
            death[x] = old
            self.kill_by[a] = x
        elif kind == "t":
            x = rec[1]
            self.kill_by[self.partner[x]] = x


def enum_left(maxn, prefix=()):
    """Count left blocks x_2..x_{n-1} behind a seed and a +1 at index 1.

    For every n <= maxn, ``a_counts[n, I]`` counts blocks after which an inert
    particle at n is hit by a_1 as a pair, and ``g_counts[n, I]`` counts blocks
    after which a -1 particle at n destroys a_1 (larger index on triples).
    I is the number of zeros in the block.  Only nodes at or below ``prefix``
    are recorded.
    """
    a_counts = np.zeros((maxn + 1, maxn + 1), dtype=np.int64)
    g_counts = np.zeros((maxn + 1, maxn + 1), dtype=np.int64)
    eng = _Undoable(maxn + 2)
    eng.apply(0, 0)
    eng.apply(1, 1)
    nodes = 0

    def alive_or_pending(m):
        if eng.death[1] < 0:
            return True
        k = eng.kill_by[1]
        return eng.sp[k] == 0 and 2 * k - 1 > m

    def record(m, nz):
        nonlocal nodes
        nodes += 1
        n = m + 1
        if len(eng.plus) == 1 and eng.plus[0] == 1:
            a_counts[n, nz] += 1
        kind, x = eng.victim(n)
        if (kind == "p" and x == 1) or (kind == "t" and eng.partner[x] == 1):
            g_counts[n, nz] += 1

    def dfs(m, nz):
        record(m, nz)
        if m + 2 > maxn or not alive_or_pending(m):
            return
        for s in (-1, 0, 1):
            rec = eng.apply(m + 1, s)
            dfs(m + 1, nz + (s == 0))
            eng.undo(rec)

    m, nz = 1, 0
    for s in prefix:
        if m + 2 > maxn or not alive_or_pending(m):
            return a_counts, g_counts, nodes
        m += 1
        eng.apply(m, int(s))
        nz += s == 0
    dfs(m, nz)
    return a_counts, g_counts, nodes


def enum_right(maxlen, prefix=()):
    """Count isolated words of length 1..maxlen with no surviving -1.

    ``counts[l, I, z]``: words of length l with I zeros and z surviving zeros.
    ``prime[l, I]``: those whose only surviving active particle is a +1 in
    the last slot.  Only nodes at or below ``prefix`` are recorded.
    """
    counts = np.zeros((maxlen + 1, maxlen + 1, maxlen + 1), dtype=np.int64)
    prime = np.zeros((maxlen + 1, maxlen + 1), dtype=np.int64)
    eng = _Undoable(maxlen + 1)
    nodes = 0

    def record(length, nz):
        nonlocal nodes
        nodes += 1
        counts[length, nz, eng.nsurv0] += 1
        if eng.sp[length - 1] == 1 and len(eng.plus) == 1:
            prime[length, nz] += 1

    def dfs(length, nz):
        if length >= 1:
            record(length, nz)
        if length >= maxlen:
            return
        for s in (-1, 0, 1):
            rec = eng.apply(length, s)
            if not (s == -1 and rec[0] == "n"):
                dfs(length + 1, nz + (s == 0))
            eng.undo(rec)

    length, nz = 0, 0
    for s in prefix:
        if length >= maxlen:
            return counts, prime, nodes
        rec = eng.apply(length, int(s))
        if s == -1 and rec[0] == "n":
            return counts, prime, nodes
        length += 1
        nz += s == 0
    dfs(length, nz)
    return counts, prime, nodes
