"""Monte-Carlo cross-checks of the count tables and finite-window seed survival."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import _kernel
from .enumeration import CountTables, classify, weight

MIN_REPS_FOR_SIGMA = 1000
_CHUNK = 200_000


def _sample_speeds(rng, p, shape):
    q = (1.0 - p) / 2.0
    u = rng.random(shape)
    return np.where(u < q, -1, np.where(u < q + p, 0, 1)).astype(np.int8)


def exact_an(tables: CountTables, p: float, n: int):
    """(P(A_n), E[1_{A_n} (Z_1 - 1)]) from the tables."""
    prob = gain = 0.0
    for (i, z), c in tables.an.get(n, {}).items():
        w = c * weight(p, i, 2 * n - 2)
        prob += w
        gain += w * (z - 1)
    return prob, gain


def _zscore(mc, exact, var, reps):
    if reps < MIN_REPS_FOR_SIGMA:
        return None
    sd = math.sqrt(var / reps)
    if sd == 0:
        return 0.0 if mc == exact else math.inf
    return (mc - exact) / sd


def mc_check_tables(tables: CountTables, p: float, n: int, reps: int, seed: int) -> dict:
    """Sample ``(0, 1, X_2..X_{2n-1})`` and compare the frequency of A_n and the
    mean of ``1_{A_n}(Z_1 - 1)`` with the exact table values."""
    if not 2 <= n <= tables.depth:
        raise ValueError(f"n must lie in [2, {tables.depth}]")
    p_exact, g_exact = exact_an(tables, p, n)
    out = {"n": n, "p": p, "reps": reps, "seed": seed,
           "p_An_exact": p_exact, "gain_exact": g_exact,
           "p_An_mc": None, "gain_mc": None, "z_sigma": None, "gain_z_sigma": None}
    if reps <= 0:
        return out
    rng = np.random.default_rng(seed)
    powers = 3 ** np.arange(2 * n - 2, dtype=np.int64)
    cache: dict = {}
    hits = gain = gain_sq = 0
    done = 0
    while done < reps:
        k = min(_CHUNK, reps - done)
        tails = _sample_speeds(rng, p, (k, 2 * n - 2))
        keys = ((tails.astype(np.int64) + 1) * powers).sum(axis=1)
        uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
        for key, idx, cnt in zip(uniq.tolist(), first.tolist(), counts.tolist()):
            c = cache.get(key)
            if c is None:
                c = classify((0, 1) + tuple(int(s) for s in tails[idx]))
                cache[key] = c
            if c.in_an:
                hits += cnt
                gain += cnt * (c.z1 - 1)
                gain_sq += cnt * (c.z1 - 1) ** 2
        done += k
    p_mc = hits / reps
    g_mc = gain / reps
    g_var = gain_sq / reps - g_exact * g_exact if reps else 0.0
    out.update({
        "p_An_mc": p_mc,
        "gain_mc": g_mc,
        "z_sigma": _zscore(p_mc, p_exact, p_exact * (1 - p_exact), reps),
        "gain_z_sigma": _zscore(g_mc, g_exact, max(g_var, 0.0), reps),
    })
    return out


def _survival_chunk(args):
    p, window, seed, start, stop = args
    alive = 0
    for r in range(start, stop):
        rng = np.random.default_rng([seed, r])
        speeds = _sample_speeds(rng, p, window + 1)
        speeds[0] = 0
        if _kernel.xi_fast(speeds)[0] == 0:
            alive += 1
    return alive


def mc_seed_survival(p: float, window: int, reps: int, seed: int,
                     threads: int = 1) -> dict:
    """Fraction of samples in which the seed survives on ``[0, window]``.
    An upper-bound proxy for the survival probability on the half line."""
    if window < 1:
        raise ValueError("window must be >= 1")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    step = max(1, -(-reps // (4 * threads)))
    jobs = [(p, window, seed, a, min(reps, a + step)) for a in range(0, reps, step)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            alive = sum(pool.map(_survival_chunk, jobs))
    else:
        alive = sum(map(_survival_chunk, jobs))
    frac = alive / reps
    half = 1.959963984540054 * math.sqrt(frac * (1 - frac) / reps)
    return {"p": p, "window": window, "reps": reps, "seed": seed,
            "survival": frac, "ci_halfwidth": half}


def seed_survival_curve(p: float, windows, reps: int, seed: int) -> list:
    return [mc_seed_survival(p, w, reps, seed) for w in windows]


__all__ = ["mc_check_tables", "mc_seed_survival", "exact_an", "seed_survival_curve"]
