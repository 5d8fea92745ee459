"""Renewal sampling on lazily revealed random configurations.

From a seed at 0 the sampler reveals speeds to the right until it reaches an
index eta such that only inert particles survive in the window [0, eta] and
the fates in that window can no longer be changed by the speeds beyond eta.
The surviving inert particles (Z of them) then seed independent copies,
which gives a Galton-Watson process; E Z > 1 means the seed survives with
positive probability.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import _kernel
from .kinematics import Speed

RENEWED = "Renewed"
CENSORED = "Censored"

DEFAULT_HORIZON = 10 ** 5
_BLOCK0 = 64


class LazyConfiguration:
    """Speeds ``X_0 = 0, X_1, X_2, ...`` with ``X_i`` a pure function of
    ``(rng_seed, stream, i)``.

    Index space is split into blocks of doubling size; block k gets its own
    generator keyed by ``(rng_seed, stream, k)``, so revealing more never
    changes what was already revealed.  ``overrides`` replaces individual
    speeds (used to rewrite a suffix in tests).
    """

    def __init__(self, rng_seed: int, p: float, stream: int = 0, overrides: Optional[dict] = None):
        if not 0 <= p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if rng_seed < 0 or stream < 0:
            raise ValueError("seeds must be nonnegative")
        self.rng_seed = int(rng_seed)
        self.stream = int(stream)
        self.p = float(p)
        self.overrides = dict(overrides or {})
        self._blocks: list = []
        self._size = 0

    def _grow(self, n: int):
        while self._size < n:
            k = len(self._blocks)
            size = _BLOCK0 << k
            rng = np.random.default_rng([self.rng_seed, self.stream, k])
            u = rng.random(size)
            q = (1.0 - self.p) / 2.0
            block = np.where(u < q, -1, np.where(u < q + self.p, 0, 1)).astype(np.int8)
            self._blocks.append(block)
            self._size += size

    def prefix(self, n: int) -> np.ndarray:
        """Speeds at indices 0..n-1."""
        self._grow(n)
        out = np.concatenate(self._blocks)[:n].copy() if n else np.empty(0, np.int8)
        if n:
            out[0] = 0
        for i, s in self.overrides.items():
            if 0 < i < n:
                out[i] = s
        return out

    def speed_at(self, i: int) -> Speed:
        return Speed(int(self.prefix(i + 1)[i]))

    def with_overrides(self, overrides: dict) -> "LazyConfiguration":
        merged = dict(self.overrides)
        merged.update(overrides)
        return LazyConfiguration(self.rng_seed, self.p, self.stream, merged)


@dataclass(frozen=True)
class RenewalSample:
    status: str
    eta: Optional[int]
    z: int
    revealed_max: int
    horizon: int

    @property
    def renewed(self) -> bool:
        return self.status == RENEWED


def renewal_on(speeds, horizon: int):
    """Run the kernel on a fixed prefix.  Returns ``(status, eta, z, revealed_max)``
    with the kernel's integer status codes."""
    return _kernel.renewal(np.ascontiguousarray(speeds, dtype=np.int8), horizon)


def sample_renewal(lazy: LazyConfiguration, horizon: int = DEFAULT_HORIZON) -> RenewalSample:
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    length = min(horizon + 1, 256)
    while True:
        status, eta, z, revealed = renewal_on(lazy.prefix(length), horizon)
        if status != _kernel.NEED_MORE:
            break
        length = min(horizon + 1, max(2 * length, revealed + 1))
    if status == _kernel.RENEWED:
        return RenewalSample(RENEWED, int(eta), int(z), int(revealed), horizon)
    return RenewalSample(CENSORED, None, 0, int(revealed), horizon)


# ---------------------------------------------------------------- estimator

@dataclass(frozen=True)
class OffspringEstimate:
    p: float
    horizon: int
    reps: int
    seed: int
    mean_lower: float
    censor_rate: float
    ci_halfwidth: float

    def record(self) -> dict:
        return asdict(self)


def _chunk(args):
    p, horizon, seed, start, stop = args
    zs = np.zeros(stop - start, dtype=np.int64)
    censored = 0
    for r in range(start, stop):
        s = sample_renewal(LazyConfiguration(seed, p, stream=r), horizon)
        if s.renewed:
            zs[r - start] = s.z
        else:
            censored += 1
    return int(zs.sum()), int((zs * zs).sum()), censored


def _chunks(reps, threads):
    size = max(1, min(10_000, -(-reps // (4 * threads))))
    return [(a, min(reps, a + size)) for a in range(0, reps, size)]


def estimate_offspring_mean(p: float, horizon: int = DEFAULT_HORIZON, reps: int = 10_000,
                            seed: int = 0, threads: int = 1) -> OffspringEstimate:
    """Mean of Z over ``reps`` samples, censored samples counted as 0."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    jobs = [(p, horizon, seed, a, b) for a, b in _chunks(reps, threads)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_chunk, jobs))
    else:
        parts = [_chunk(j) for j in jobs]
    s1 = sum(x[0] for x in parts)
    s2 = sum(x[1] for x in parts)
    cens = sum(x[2] for x in parts)
    mean = s1 / reps
    var = max(0.0, s2 / reps - mean * mean) * reps / max(1, reps - 1)
    half = 1.959963984540054 * math.sqrt(var / reps)
    return OffspringEstimate(float(p), horizon, reps, seed, mean, cens / reps, half)


# ---------------------------------------------------------------- branching

@dataclass(frozen=True)
class GenerationTrace:
    extinct: bool
    sizes: tuple  # generation sizes, sizes[0] == 1
    censored: int
    capped: bool  # stopped early because the population cap was hit


def simulate_generations(p: float, horizon: int, max_generations: int, seed: int,
                         population_cap: int = 10_000) -> GenerationTrace:
    """Branching process driven by renewal samples, explored depth first.

    Every individual draws its own offspring count from an independent
    stream.  Censored samples end their branch.  Exploration stops once a
    generation exceeds ``population_cap`` (reported as not extinct).
    """
    if max_generations < 1:
        raise ValueError("max_generations must be >= 1")
    sizes = [1] + [0] * max_generations
    stack = [0]
    stream = 0
    censored = 0
    while stack:
        g = stack.pop()
        if g >= max_generations:
            continue
        s = sample_renewal(LazyConfiguration(seed, p, stream=stream), horizon)
        stream += 1
        if not s.renewed:
            censored += 1
            continue
        if s.z:
            sizes[g + 1] += s.z
            if sizes[g + 1] > population_cap:
                return GenerationTrace(False, tuple(sizes[: g + 2]), censored, True)
            stack.extend([g + 1] * s.z)
    last = max_generations
    while last > 0 and sizes[last] == 0:
        last -= 1
    extinct = last < max_generations
    return GenerationTrace(extinct, tuple(sizes[: last + 2] if extinct else sizes), censored, False)


def empirical_extinction_probability(offspring, tol: float = 1e-12) -> float:
    """Smallest fixed point in [0, 1] of the empirical offspring pgf."""
    z = np.asarray(offspring, dtype=np.int64)
    if z.size == 0:
        raise ValueError("need at least one offspring count")
    probs = np.bincount(z) / z.size
    s = 0.0
    for _ in range(100_000):
        nxt = float(np.polynomial.polynomial.polyval(s, probs))
        if abs(nxt - s) < tol:
            return nxt
        s = nxt
    return s


def offspring_samples(p: float, horizon: int, reps: int, seed: int) -> np.ndarray:
    """Raw Z values (censored samples as 0)."""
    out = np.zeros(reps, dtype=np.int64)
    for r in range(reps):
        s = sample_renewal(LazyConfiguration(seed, p, stream=r), horizon)
        out[r] = s.z if s.renewed else 0
    return out
