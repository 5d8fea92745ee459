"""Exact ballistic annihilation of unit-spaced particles with speeds -1, 0, +1.

Particle ``a_i`` starts at integer position ``i``.  Every meeting of two such
particles happens at a half-integer time and position, so all kinematics are
done on integers scaled by two (``time2``, ``pos2``).  No floating point.

This module is the reference simulator: it resolves collisions by repeatedly
extracting the globally earliest meeting among adjacent live particles.  The
fast incremental engines in the kernel modules are checked against it.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Optional, Sequence

ANNIHILATED = 2


class Speed(IntEnum):
    MINUS = -1
    ZERO = 0
    PLUS = 1

    @property
    def inert(self) -> bool:
        return self is Speed.ZERO


Configuration = tuple  # tuple of ints in {-1, 0, 1}; index == initial position


def as_configuration(speeds: Iterable[int]) -> tuple:
    config = tuple(int(s) for s in speeds)
    if not config:
        raise ValueError("configuration must be nonempty")
    for s in config:
        if s not in (-1, 0, 1):
            raise ValueError(f"speed {s} not in {{-1, 0, 1}}")
    return config


def parse_speeds(text: str) -> tuple:
    """Parse the comma-separated text encoding, e.g. ``"0,1,-1"``."""
    try:
        values = [int(tok) for tok in text.replace(" ", "").split(",") if tok != ""]
    except ValueError as exc:
        raise ValueError(f"cannot parse speeds {text!r}") from exc
    return as_configuration(values)


def format_speeds(values: Iterable[int]) -> str:
    return ",".join(str(int(v)) for v in values)


@dataclass(frozen=True)
class CollisionEvent:
    time2: int
    pos2: int
    participants: tuple

    @property
    def time(self):
        return self.time2 / 2

    @property
    def pos(self):
        return self.pos2 / 2

    @property
    def is_triple(self) -> bool:
        return len(self.participants) == 3


@dataclass(frozen=True)
class SimOutcome:
    speeds: tuple
    xi: tuple
    events: tuple

    def event_of(self, i: int) -> Optional[CollisionEvent]:
        for ev in self.events:
            if i in ev.participants:
                return ev
        return None

    @property
    def survivors(self) -> list:
        return [i for i, v in enumerate(self.xi) if v != ANNIHILATED]

    def surviving_inert(self) -> int:
        return sum(1 for v in self.xi if v == 0)


def _meeting(l: int, r: int, speeds: Sequence[int]):
    """(time2, pos2) at which a_l and a_r (l < r) would meet, or None."""
    sl, sr = speeds[l], speeds[r]
    if sl <= sr:
        return None
    if sl - sr == 2:
        return r - l, l + r
    if sl == 1:  # +1 chasing an inert particle
        return 2 * (r - l), 2 * r
    return 2 * (r - l), 2 * l  # -1 arriving at an inert particle


def run_ba(config: Iterable[int]) -> SimOutcome:
    """Run ballistic annihilation on a finite configuration to completion."""
    speeds = as_configuration(config)
    n = len(speeds)
    # doubly linked list over live particles with sentinels -1 and n
    left = list(range(-1, n - 1))
    right = list(range(1, n + 1))
    alive = [True] * n
    heap = []

    def push(l, r):
        m = _meeting(l, r, speeds)
        if m is not None:
            heapq.heappush(heap, (m[0], m[1], l, r))

    for i in range(n - 1):
        push(i, i + 1)

    xi = list(speeds)
    events = []
    while heap:
        t2 = heap[0][0]
        groups: dict = {}
        while heap and heap[0][0] == t2:
            _, pos2, l, r = heapq.heappop(heap)
            if alive[l] and alive[r] and right[l] == r:
                groups.setdefault(pos2, set()).update((l, r))
        removed = []
        for pos2 in sorted(groups):
            members = tuple(sorted(groups[pos2]))
            assert len(members) <= 3
            events.append(CollisionEvent(t2, pos2, members))
            removed.extend(members)
        for i in removed:
            alive[i] = False
            xi[i] = ANNIHILATED
            l, r = left[i], right[i]
            if l >= 0:
                right[l] = r
            if r < n:
                left[r] = l
        for i in removed:
            l = left[i]
            while l >= 0 and not alive[l]:
                l = left[l]
            if l >= 0 and right[l] < n:
                push(l, right[l])
    return SimOutcome(speeds, tuple(xi), tuple(events))


def xi(outcome: SimOutcome) -> tuple:
    return outcome.xi


def reflect(config: Iterable[int]) -> tuple:
    """Reverse the index order and negate every speed."""
    return tuple(-s for s in reversed(as_configuration(config)))


def destroyer_of(outcome: SimOutcome, i: int) -> Optional[int]:
    """Index of the particle that annihilates ``a_i``.

    On a triple collision the larger of the two partner indices is returned,
    which for a +1 particle is the -1 particle.
    """
    ev = outcome.event_of(i)
    if ev is None:
        return None
    return max(j for j in ev.participants if j != i)
