"""Lower bounds on the expected offspring count E Z and the thresholds they imply.

Levels, with q = (1 - p) / 2:

* L0: ``2p``
* L1: ``2p + q``
* L2: ``2p + q m(p)``
* L3: ``2p + q (m(p) + b(p) / (1 - b(p)) (m(p) - 1))``

L2 and L3 need count tables.  Passing p as a ``Fraction`` keeps every
evaluation exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .enumeration import CountTables, weight

LEVELS = (0, 1, 2, 3)


class BoundError(ArithmeticError):
    """b(p) >= 1: impossible for valid tables, signals corruption."""


class NoCrossing(ValueError):
    pass


class MultipleCrossings(ValueError):
    pass


def parse_level(level) -> int:
    text = str(level).strip().upper().lstrip("L")
    if text not in ("0", "1", "2", "3"):
        raise ValueError(f"unknown bound level {level!r}")
    return int(text)


def _q(p):
    return (1 - p) / 2


def eval_m(tables: CountTables, p):
    total = 0
    for n, entries in tables.an.items():
        for (i, z), c in entries.items():
            if z > 1:
                total += c * (z - 1) * weight(p, i, 2 * n - 2)
    return 1 + total


def eval_b(tables: CountTables, p):
    total = 0
    for n, entries in tables.aprime.items():
        for i, c in entries.items():
            total += c * weight(p, i, 2 * n - 2)
    if total >= 1:
        raise BoundError(f"b({p}) = {total} >= 1; tables are corrupt")
    return total


def bound(tables: Optional[CountTables], p, level):
    level = parse_level(level)
    q = _q(p)
    if level == 0:
        return 2 * p
    if level == 1:
        return 2 * p + q
    if tables is None:
        raise ValueError(f"level {level} needs count tables")
    m = eval_m(tables, p)
    if level == 2:
        return 2 * p + q * m
    b = eval_b(tables, p)
    return 2 * p + q * (m + b / (1 - b) * (m - 1))


@dataclass(frozen=True)
class BoundCurve:
    level: int
    depth: Optional[int]
    samples: tuple  # of (p, value)

    def to_csv(self) -> str:
        depth = "" if self.depth is None else self.depth
        rows = ["p,level,depth,value"]
        rows += [f"{p!r},{self.level},{depth},{v!r}" for p, v in self.samples]
        return "\n".join(rows) + "\n"


def bound_curve(tables, level, p0: float, p1: float, steps: int) -> BoundCurve:
    level = parse_level(level)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not 0 < p0 <= p1 < 1:
        raise ValueError("need 0 < p0 <= p1 < 1")
    if steps == 1:
        ps = [p0]
    else:
        ps = [round(p0 + (p1 - p0) * k / (steps - 1), 12) for k in range(steps)]
    samples = tuple((p, float(bound(tables, p, level))) for p in ps)
    depth = tables.depth if tables is not None and level >= 2 else None
    return BoundCurve(level, depth, samples)


def find_threshold(tables: Optional[CountTables], level, tol: float = 1e-9,
                   grid: int = 512) -> float:
    """Smallest p with bound(p) > 1, to within ``tol``.

    The open interval (0, 1) is scanned on ``grid`` points first; the
    indicator ``bound > 1`` must switch exactly once, from False to True.
    The returned p satisfies bound(p) > 1 and bound(p - tol) <= 1.
    """
    level = parse_level(level)
    if tol <= 0:
        raise ValueError("tol must be positive")

    def above(p):
        return bound(tables, p, level) > 1

    ps = [k / grid for k in range(1, grid)]
    flags = [above(p) for p in ps]
    switches = [k for k in range(1, len(flags)) if flags[k] != flags[k - 1]]
    if not any(flags):
        raise NoCrossing(f"level {level} bound never exceeds 1 on the scan grid")
    if len(switches) > 1 or (switches and not flags[-1]):
        raise MultipleCrossings(f"level {level}: bound crosses 1 at {len(switches)} grid cells")
    if not switches:
        lo, hi = 0.0, ps[0]
    else:
        lo, hi = ps[switches[0] - 1], ps[switches[0]]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if above(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------- heuristic

def heuristic_w(p):
    """Inert density gained per inert particle: p (1 - q)^2."""
    q = _q(p)
    return p - 2 * p * q + p * q * q


def heuristic_z(p):
    q = _q(p)
    return 2 * (q - q * q - p * q)


def _bisect(f, lo, hi, tol):
    flo = f(lo)
    if flo == 0:
        return lo
    if (flo > 0) == (f(hi) > 0):
        raise NoCrossing("no sign change on the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def heuristic_pc(mode: str = "fraction", tol: float = 1e-10) -> float:
    """Root in (0, 1/2) of the density balance.

    ``fraction``: w / (w + z) = 1/4.  ``literal``: w = z / 4.
    """
    if mode == "fraction":
        def f(p):
            w, z = heuristic_w(p), heuristic_z(p)
            return w / (w + z) - 0.25
    elif mode == "literal":
        def f(p):
            return heuristic_w(p) - heuristic_z(p) / 4
    else:
        raise ValueError(f"unknown heuristic mode {mode!r}")
    return _bisect(f, 1e-12, 0.5, tol)


def triple_collision_probability(p):
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    return p * _q(p) ** 2


def as_exact(p) -> Fraction:
    """Exact rational for ``p``; decimal strings are read literally."""
    if isinstance(p, Fraction):
        return p
    if isinstance(p, float):
        return Fraction(repr(p))
    return Fraction(p)


def isclose(a, b, tol):
    return math.isclose(float(a), float(b), rel_tol=0.0, abs_tol=tol)
