import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from _support import SAMPLE18
from ballistic.enumeration import (
    CountTables,
    TableFileError,
    classify,
    enumerate_tables,
    gamma_tail,
    is_gamma_minus,
    load_tables,
    oracle_tables,
    save_tables,
)


def test_classify_examples():
    c = classify((0, 1, 0, 0))
    assert c.in_an and c.z1 == 2 and not c.in_aprime
    c = classify((0, 1, 0, 1))
    assert c.in_an and c.z1 == 1 and c.in_aprime
    assert not classify((0, 1, 0, -1)).in_an  # triple: the -1 takes over
    c = classify(SAMPLE18)
    assert c.in_an and c.z1 == 2 and c.in_aprime
    assert str(c) == "InAn(z1=2), InAnPrime(z1=2)"


@pytest.mark.parametrize("bad", [(1, 1, 0, 0), (0, 0, 0, 0), (0, 1, 0), (0, 1)])
def test_classify_rejects_malformed(bad):
    with pytest.raises(ValueError):
        classify(bad)


def test_gamma_minus_predicate():
    assert is_gamma_minus((0, 1, -1))
    assert is_gamma_minus((0, 1, 0, -1))  # triple, larger index
    assert not is_gamma_minus((0, 1, 1, -1))


def test_depth2_tables():
    t = enumerate_tables(2)
    assert t.an[2] == {(2, 2): 1, (1, 1): 1}
    assert t.aprime[2] == {1: 1}
    assert t.gamma_minus[2] == {0: 1}


def test_depth2_matches_golden(golden2):
    assert enumerate_tables(2).same_counts(golden2)
    assert golden2.checksum() == golden2.meta["checksum"]


def test_oracle_equivalence_depth6(tables6, oracle6):
    for n in range(2, 7):
        assert tables6.an[n] == oracle6.an[n], n
        assert tables6.aprime[n] == oracle6.aprime[n], n
        assert tables6.gamma_minus[n] == oracle6.gamma_minus[n], n


def test_oracle_equivalence_n7():
    # first level at which undo bugs in the pruned search showed up
    t = enumerate_tables(7, threads=1)
    an, ap = {}, {}
    for tail in itertools.product((-1, 0, 1), repeat=12):
        if tail[5] != 0:
            continue
        c = classify((0, 1) + tail)
        if c.in_an:
            i = tail.count(0)
            an[i, c.z1] = an.get((i, c.z1), 0) + 1
            if c.in_aprime:
                ap[i] = ap.get(i, 0) + 1
    assert t.an[7] == an and t.aprime[7] == ap


def test_gamma_minus_oracle_to_n10():
    t = enumerate_tables(10)
    for n in range(2, 11):
        gm = {}
        for mid in itertools.product((-1, 0, 1), repeat=n - 2):
            if is_gamma_minus((0, 1) + mid + (-1,)):
                gm[mid.count(0)] = gm.get(mid.count(0), 0) + 1
        assert t.gamma_minus[n] == gm, n


@pytest.mark.parametrize("threads,split", [(2, 1), (2, 3), (3, 5), (4, None)])
def test_parallel_determinism(threads, split):
    base = enumerate_tables(9)
    other = enumerate_tables(9, threads=threads, split=split)
    assert base.payload() == other.payload()
    assert base.checksum() == other.checksum()


def test_table_invariants(tables6):
    t = enumerate_tables(9)
    for n in range(2, 10):
        total = sum(t.an[n].values())
        assert total <= 3 ** (2 * n - 2)
        for (i, z), c in t.an[n].items():
            assert 0 <= i <= 2 * n - 2 and 1 <= z <= n and c > 0
        marginal = {}
        for (i, _z), c in t.an[n].items():
            marginal[i] = marginal.get(i, 0) + c
        for i, c in t.aprime[n].items():
            assert c <= marginal.get(i, 0)
        assert all(0 <= i <= n - 2 for i in t.gamma_minus[n])
    for p in np.linspace(0.01, 0.99, 25):
        assert gamma_tail(t, p) <= 1 + 1e-12


def test_gamma_tail_depth2_symbolic():
    t = enumerate_tables(2)
    for p in (Fraction(1, 10), Fraction(1, 4), Fraction(2, 5)):
        q = (1 - p) / 2
        assert gamma_tail(t, p) == q + p * p + p * q


def test_gamma_tail_monotone_in_depth():
    tables = [enumerate_tables(d) for d in range(2, 11)]
    for p in (0.1, 0.287, 0.5, 0.9):
        vals = [gamma_tail(t, p) for t in tables]
        assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))


def test_gamma_tail_rejects_bad_p(tables6):
    for p in (0, 1, -0.1):
        with pytest.raises(ValueError):
            gamma_tail(tables6, p)


def test_truncate_equals_shallower_run(tables6):
    assert tables6.truncate(4).same_counts(enumerate_tables(4))


def test_save_load_round_trip(tmp_path, tables6):
    path = tmp_path / "t6.json"
    save_tables(tables6, path)
    back = load_tables(path)
    assert back.same_counts(tables6)
    assert back.depth == 6


def test_load_truncated_file(tmp_path, tables6):
    path = tmp_path / "t6.json"
    save_tables(tables6, path)
    blob = path.read_text()
    path.write_text(blob[: len(blob) // 2])
    with pytest.raises(TableFileError):
        load_tables(path)


def test_load_detects_tampering(tmp_path):
    t = enumerate_tables(3)
    path = tmp_path / "t3.json"
    save_tables(t, path)
    doc = json.loads(path.read_text())
    doc["tables"][0]["an"][0]["count"] = "7"
    path.write_text(json.dumps(doc))
    with pytest.raises(TableFileError, match="checksum"):
        load_tables(path)


def test_load_version_mismatch(tmp_path):
    path = tmp_path / "v.json"
    path.write_text(json.dumps({"version": 2, "depth": 2, "tables": [], "checksum": ""}))
    with pytest.raises(TableFileError, match="version"):
        load_tables(path)


def test_meta_excluded_from_checksum(tmp_path):
    t = enumerate_tables(3)
    path = tmp_path / "t3.json"
    save_tables(t, path)
    doc = json.loads(path.read_text())
    doc["meta"]["wall_time_s"] = 123.0
    path.write_text(json.dumps(doc))
    assert load_tables(path).same_counts(t)


def test_big_counts_survive_round_trip(tmp_path):
    big = 3 ** 80 + 1
    t = CountTables(2, an={2: {(1, 1): big}}, aprime={2: {}}, gamma_minus={2: {0: big}})
    path = tmp_path / "big.json"
    save_tables(t, path)
    assert load_tables(path).an[2][1, 1] == big


def test_oracle_small_matches(tables6):
    assert oracle_tables(4).same_counts(tables6.truncate(4))


def test_depth_must_be_at_least_two():
    with pytest.raises(ValueError):
        enumerate_tables(1)
