import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import SAMPLE18, step_sim
from ballistic.kinematics import (
    Speed,
    as_configuration,
    destroyer_of,
    format_speeds,
    parse_speeds,
    reflect,
    run_ba,
    xi,
)

configs = st.lists(st.sampled_from((-1, 0, 1)), min_size=1, max_size=40)


def test_speed_variants():
    assert [int(s) for s in Speed] == [-1, 0, 1]
    assert Speed.ZERO.inert and not Speed.PLUS.inert


def test_single_particle():
    out = run_ba((0,))
    assert out.xi == (0,) and out.events == ()


def test_head_on_pair():
    out = run_ba((0, -1))
    assert out.xi == (2, 2)
    assert [(e.time2, e.pos2, e.participants) for e in out.events] == [(2, 0, (0, 1))]


def test_symmetric_triple():
    out = run_ba((0, 1, 0, -1))
    assert out.xi == (0, 2, 2, 2)
    (ev,) = out.events
    assert (ev.time2, ev.pos2, ev.participants) == (2, 4, (1, 2, 3))
    assert ev.is_triple


def test_sample18():
    out = run_ba(SAMPLE18)
    assert out.survivors == [0, 10, 17]
    ev = out.event_of(1)
    assert ev.participants == (1, 9) and ev.time2 == 16 and ev.pos2 == 18
    assert destroyer_of(out, 1) == 9


def test_xi_accessor():
    assert xi(run_ba((0, -1))) == (2, 2)
    assert xi(run_ba((0,))) == (0,)
    assert xi(run_ba((0, 1, 0, 1))) == (0, 2, 2, 1)


def test_reflect():
    assert reflect((0, 1, -1)) == (1, -1, 0)
    assert reflect((0, -1)) == (1, 0)
    assert reflect(reflect((0, 1, 0, -1))) == (0, 1, 0, -1)


def test_destroyer_of():
    assert destroyer_of(run_ba((0, 1, 0, -1)), 1) == 3
    assert destroyer_of(run_ba((0, 1, -1)), 1) == 2
    assert destroyer_of(run_ba((0, 1, -1)), 0) is None


def test_parse_and_format():
    assert parse_speeds("0, 1,-1") == (0, 1, -1)
    assert format_speeds((0, 2, -1)) == "0,2,-1"
    for bad in ("", "0,2", "a,b"):
        with pytest.raises(ValueError):
            parse_speeds(bad)
    with pytest.raises(ValueError):
        as_configuration([])


def _check_outcome(config):
    out = run_ba(config)
    seen = {}
    for ev in out.events:
        sp = [config[i] for i in ev.participants]
        assert len(ev.participants) in (2, 3)
        assert len(set(sp)) == len(sp)
        if ev.is_triple:
            assert set(sp) == {-1, 0, 1}
            assert ev.time2 % 2 == 0 and ev.pos2 % 2 == 0
        for i in ev.participants:
            assert i not in seen
            seen[i] = ev
    for i, v in enumerate(out.xi):
        assert (v == 2) == (i in seen)
        if v != 2:
            assert v == config[i]
    times = [(e.time2, e.pos2) for e in out.events]
    assert times == sorted(times)
    n = len(config) - 1
    assert all(e.time2 <= 2 * n for e in out.events)
    dead_plus = sum(1 for i in seen if config[i] == 1)
    dead_minus = sum(1 for i in seen if config[i] == -1)
    plus_zero = sum(1 for e in out.events if sorted(config[i] for i in e.participants) == [0, 1])
    zero_minus = sum(1 for e in out.events if sorted(config[i] for i in e.participants) == [-1, 0])
    assert dead_plus - dead_minus == plus_zero - zero_minus
    return out


@settings(max_examples=400, deadline=None)
@given(configs)
def test_outcome_invariants(config):
    _check_outcome(tuple(config))


@settings(max_examples=400, deadline=None)
@given(configs)
def test_matches_stepping_simulator(config):
    config = tuple(config)
    out = run_ba(config)
    xi_ref, events_ref = step_sim(config)
    assert out.xi == xi_ref
    assert [(e.time2, e.pos2, e.participants) for e in out.events] == events_ref


@settings(max_examples=300, deadline=None)
@given(configs)
def test_mirror_symmetry(config):
    config = tuple(config)
    n = len(config) - 1
    a, b = run_ba(config), run_ba(reflect(config))
    mapped = sorted((e.time2, 2 * n - e.pos2, tuple(sorted(n - i for i in e.participants)))
                    for e in a.events)
    assert mapped == sorted((e.time2, e.pos2, e.participants) for e in b.events)
    assert tuple(reversed([v if v == 2 else -v for v in a.xi])) == b.xi


def test_deterministic():
    assert run_ba(SAMPLE18) == run_ba(SAMPLE18)


def _rewrite_after(config, k, rng):
    return config[: k + 1] + tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(0, 12)))


@settings(max_examples=300, deadline=None)
@given(configs, st.randoms(use_true_random=False))
def test_minus_destroyer_locality(config, rng):
    config = tuple(config)
    out = run_ba(config)
    for i in range(len(config)):
        j = destroyer_of(out, i)
        if j is None or config[j] != -1:
            continue
        other = _rewrite_after(config, j, rng)
        assert destroyer_of(run_ba(other), i) == j


@settings(max_examples=300, deadline=None)
@given(configs, st.randoms(use_true_random=False))
def test_inert_window_locality(config, rng):
    config = tuple(config)
    out = run_ba(config)
    for ev in out.events:
        if len(ev.participants) != 2:
            continue
        i, j = ev.participants
        if (config[i], config[j]) != (1, 0) or 2 * j - i >= len(config):
            continue
        other = _rewrite_after(config, 2 * j - i, rng)
        ev2 = run_ba(other).event_of(i)
        assert (ev2.time2, ev2.pos2, ev2.participants) == (ev.time2, ev.pos2, ev.participants)


def test_large_random_configuration_terminates():
    rng = random.Random(3)
    config = tuple(rng.choice((-1, 0, 1)) for _ in range(3000))
    _check_outcome(config)
