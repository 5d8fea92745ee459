"""Exact count tables for the first-collision events of the +1 particle a_1.

A configuration is ``(0, 1, x_2, ..., x_k)``.  Three families are counted:

* ``A_n``: length ``2n``, a_1 is annihilated by the inert a_n as a pure pair.
  Keyed by ``(I, z1)`` with I the number of zeros among ``x_2..x_{2n-1}`` and
  z1 the number of surviving inert particles.
* ``A'_n``: the subset of ``A_n`` whose only surviving active particle is a
  +1 at index ``2n-1``.  Keyed by I.
* gamma-minus: length ``n+1`` with ``x_n = -1`` and ``a_n`` the destroyer of
  a_1.  Keyed by the number of zeros among ``x_2..x_{n-1}``.

``A_n`` factorises around ``x_n = 0``.  The left block ``x_2..x_{n-1}`` must
leave a_1 as the only surviving +1, and the right block ``x_{n+1}..x_{2n-1}``,
run on its own, must not emit a -1.  Then the surviving inert particles are
the seed plus those of the right block.  Both blocks are enumerated depth
first by the kernel and combined here.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _kernel
from .kinematics import as_configuration, destroyer_of, run_ba

TABLE_VERSION = 1


class TableFileError(ValueError):
    """Unreadable, corrupted or incompatible table file."""


class EnumerationError(RuntimeError):
    pass


@dataclass
class CountTables:
    depth: int
    an: dict = field(default_factory=dict)  # n -> {(I, z1): count}
    aprime: dict = field(default_factory=dict)  # n -> {I: count}
    gamma_minus: dict = field(default_factory=dict)  # n -> {I: count}
    meta: dict = field(default_factory=dict)

    def payload(self) -> dict:
        """Canonical serialisable form without ``meta``."""
        tables = []
        for n in range(2, self.depth + 1):
            an = self.an.get(n, {})
            ap = self.aprime.get(n, {})
            gm = self.gamma_minus.get(n, {})
            tables.append({
                "n": n,
                "an": [{"i": i, "z1": z, "count": str(an[i, z])} for i, z in sorted(an)],
                "aprime": [{"i": i, "count": str(ap[i])} for i in sorted(ap)],
                "gamma_minus": [{"i": i, "count": str(gm[i])} for i in sorted(gm)],
            })
        return {"version": TABLE_VERSION, "depth": self.depth, "tables": tables}

    def checksum(self) -> str:
        return _checksum(self.payload())

    def same_counts(self, other: "CountTables") -> bool:
        return self.payload() == other.payload()

    def truncate(self, depth: int) -> "CountTables":
        if not 2 <= depth <= self.depth:
            raise ValueError(f"cannot truncate depth {self.depth} tables to {depth}")
        keep = range(2, depth + 1)
        return CountTables(
            depth,
            {n: dict(self.an.get(n, {})) for n in keep},
            {n: dict(self.aprime.get(n, {})) for n in keep},
            {n: dict(self.gamma_minus.get(n, {})) for n in keep},
            dict(self.meta),
        )


def _checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


# ---------------------------------------------------------------- classify

@dataclass(frozen=True)
class Classification:
    in_an: bool
    z1: Optional[int] = None
    in_aprime: bool = False

    def __str__(self):
        if not self.in_an:
            return "NotInAn"
        tag = f"InAn(z1={self.z1})"
        return tag + (f", InAnPrime(z1={self.z1})" if self.in_aprime else "")


NOT_IN_AN = Classification(False)


def classify(config) -> Classification:
    """Classify a window ``(0, 1, x_2, ..., x_{2n-1})`` by direct simulation."""
    config = as_configuration(config)
    if len(config) < 4 or len(config) % 2 or config[0] != 0 or config[1] != 1:
        raise ValueError("classify expects (0, 1, ...) of even length >= 4")
    n = len(config) // 2
    if config[n] != 0:
        return NOT_IN_AN
    out = run_ba(config)
    ev = out.event_of(1)
    if ev is None or ev.participants != (1, n):
        return NOT_IN_AN
    z1 = out.surviving_inert()
    active = [i for i, v in enumerate(out.xi) if v in (-1, 1)]
    prime = active == [2 * n - 1] and out.xi[2 * n - 1] == 1
    return Classification(True, z1, prime)


def is_gamma_minus(config) -> bool:
    """True iff ``config`` ends in a -1 that destroys a_1 (larger index on a triple)."""
    config = as_configuration(config)
    n = len(config) - 1
    if n < 2 or config[0] != 0 or config[1] != 1 or config[n] != -1:
        return False
    return destroyer_of(run_ba(config), 1) == n


def oracle_tables(depth: int) -> CountTables:
    """Full sweep over every configuration, no pruning.  Exponential; small depths only."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    t = CountTables(depth, meta={"generator": "oracle"})
    for n in range(2, depth + 1):
        an, ap, gm = {}, {}, {}
        for tail in itertools.product((-1, 0, 1), repeat=2 * n - 2):
            if tail[n - 2] != 0:  # x_n must be inert
                continue
            c = classify((0, 1) + tail)
            if c.in_an:
                i = tail.count(0)
                an[i, c.z1] = an.get((i, c.z1), 0) + 1
                if c.in_aprime:
                    ap[i] = ap.get(i, 0) + 1
        for mid in itertools.product((-1, 0, 1), repeat=n - 2):
            if is_gamma_minus((0, 1) + mid + (-1,)):
                i = mid.count(0)
                gm[i] = gm.get(i, 0) + 1
        t.an[n], t.aprime[n], t.gamma_minus[n] = an, ap, gm
    return t


# ---------------------------------------------------------------- enumerate

def _left_task(maxn, prefix):
    a, g, nodes = _kernel.enum_left(maxn, prefix)
    return "L", a, g, nodes


def _right_task(maxlen, prefix):
    c, pr, nodes = _kernel.enum_right(maxlen, prefix)
    return "R", c, pr, nodes


def _tasks(depth, split):
    """Disjoint cover of both search trees: one shallow task per tree plus one
    task per prefix of length ``split``.  Each prefix task records only nodes
    at or below its prefix, the shallow task only nodes above."""
    maxn, maxlen = depth, depth - 1
    if split <= 0:
        return [(_left_task, maxn, ()), (_right_task, maxlen, ())]
    out = [(_left_task, min(maxn, split + 1), ()), (_right_task, min(maxlen, split - 1), ())]
    for pre in itertools.product((-1, 0, 1), repeat=split):
        out.append((_left_task, maxn, pre))
        out.append((_right_task, maxlen, pre))
    return out


def _run(task):
    fn, size, pre = task
    return fn(size, pre)


def _accumulate(target, arr):
    sl = tuple(slice(0, s) for s in arr.shape)
    target[sl] += arr


def enumerate_tables(depth: int, threads: int = 1, split: Optional[int] = None,
                     progress=None) -> CountTables:
    """Exact tables up to ``depth``.  Output is independent of ``threads``."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    threads = max(1, int(threads or 1))
    if split is None:
        split = 0 if threads == 1 else min(4, max(1, depth - 3))
    if split and split > depth - 2:
        split = depth - 2
    t0 = time.perf_counter()
    maxn, maxlen = depth, depth - 1
    left_a = np.zeros((maxn + 1, maxn + 1), dtype=object)
    left_g = np.zeros((maxn + 1, maxn + 1), dtype=object)
    right = np.zeros((maxlen + 1, maxlen + 1, maxlen + 1), dtype=object)
    prime = np.zeros((maxlen + 1, maxlen + 1), dtype=object)
    nodes = {"L": 0, "R": 0}
    tasks = _tasks(depth, split)
    try:
        if threads == 1:
            results = [_run(t) for t in tasks]
        else:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_run, tasks))
    except MemoryError as exc:
        raise EnumerationError(f"out of memory enumerating depth {depth}") from exc
    for kind, x, y, k in results:
        nodes[kind] += int(k)
        if kind == "L":
            _accumulate(left_a, x.astype(object))
            _accumulate(left_g, y.astype(object))
        else:
            _accumulate(right, x.astype(object))
            _accumulate(prime, y.astype(object))

    tables = CountTables(depth)
    for n in range(2, depth + 1):
        an, ap, gm = {}, {}, {}
        for il in range(n - 1):
            g = int(left_g[n, il])
            if g:
                gm[il] = g
            a = int(left_a[n, il])
            if not a:
                continue
            ln = n - 1
            for ir in range(ln + 1):
                for z in range(ln + 1):
                    c = int(right[ln, ir, z])
                    if c:
                        key = (il + 1 + ir, z + 1)
                        an[key] = an.get(key, 0) + a * c
                c = int(prime[ln, ir])
                if c:
                    ap[il + 1 + ir] = ap.get(il + 1 + ir, 0) + a * c
        tables.an[n], tables.aprime[n], tables.gamma_minus[n] = an, ap, gm
        if progress is not None:
            progress(n, sum(an.values()), sum(gm.values()))
    tables.meta = {
        "generator": f"ballistic {_version()} ({_kernel.IMPLEMENTATION} kernel)",
        "wall_time_s": round(time.perf_counter() - t0, 3),
        "nodes_left": nodes["L"],
        "nodes_right": nodes["R"],
        "threads": threads,
    }
    tables.meta["checksum"] = tables.checksum()
    return tables


def _version():
    from . import __version__
    return __version__


# ---------------------------------------------------------------- files

def save_tables(tables: CountTables, path) -> None:
    doc = tables.payload()
    doc["checksum"] = _checksum(doc)
    doc["meta"] = {k: v for k, v in tables.meta.items() if k != "checksum"}
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")
    os.replace(tmp, path)


def load_tables(path) -> CountTables:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise TableFileError(f"{path}: malformed table file ({exc.msg})") from exc
    if not isinstance(doc, dict):
        raise TableFileError(f"{path}: malformed table file")
    if doc.get("version") != TABLE_VERSION:
        raise TableFileError(f"{path}: unsupported table version {doc.get('version')!r}")
    try:
        payload = {"version": doc["version"], "depth": doc["depth"], "tables": doc["tables"]}
        stored = doc["checksum"]
    except KeyError as exc:
        raise TableFileError(f"{path}: missing field {exc}") from exc
    if _checksum(payload) != stored:
        raise TableFileError(f"{path}: checksum mismatch")
    try:
        depth = int(doc["depth"])
        t = CountTables(depth, meta=dict(doc.get("meta", {})))
        for block in doc["tables"]:
            n = int(block["n"])
            t.an[n] = {(int(e["i"]), int(e["z1"])): int(e["count"]) for e in block["an"]}
            t.aprime[n] = {int(e["i"]): int(e["count"]) for e in block["aprime"]}
            t.gamma_minus[n] = {int(e["i"]): int(e["count"]) for e in block["gamma_minus"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise TableFileError(f"{path}: malformed table entry ({exc})") from exc
    t.meta["checksum"] = stored
    return t


# ---------------------------------------------------------------- evaluation

def _q(p):
    if isinstance(p, Fraction):
        return (1 - p) / 2
    return (1.0 - p) / 2.0


def _check_p(p):
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")


def weight(p, zeros: int, length: int):
    """Probability of one word of ``length`` free speeds containing ``zeros`` zeros."""
    return p ** zeros * _q(p) ** (length - zeros)


def gamma_tail(tables: CountTables, p):
    """P(a_1 is destroyed by some a_n with n <= depth), given X_0 = 0, X_1 = 1."""
    _check_p(p)
    total = 0
    for n in range(2, tables.depth + 1):
        for i, c in tables.gamma_minus.get(n, {}).items():
            total += c * weight(p, i, n - 1)
        for (i, _z), c in tables.an.get(n, {}).items():
            total += c * weight(p, i, 2 * n - 2)
    return total
