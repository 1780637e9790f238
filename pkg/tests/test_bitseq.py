import random

import pytest

from ctxdel.bitseq import (
    PatternSet,
    complement,
    complement_set,
    contains_any,
    decompose_runs,
    join_runs,
)
from conftest import strings


def test_decompose_example():
    runs = decompose_runs("0111001")
    assert [(r.bit, r.len) for r in runs] == [("0", 1), ("1", 3), ("0", 2), ("1", 1)]
    assert [r.start for r in runs] == [1, 2, 5, 7]


def test_decompose_trivial():
    assert decompose_runs("") == []
    assert [(r.bit, r.len) for r in decompose_runs("1111")] == [("1", 4)]


def test_decompose_roundtrip_exhaustive():
    for n in range(0, 13):
        for x in strings(n):
            runs = decompose_runs(x)
            assert join_runs(runs) == x
            for a, b in zip(runs, runs[1:]):
                assert a.bit != b.bit
                assert b.start == a.start + a.len


def test_contains_any_examples():
    assert contains_any("110100", ["0010", "1101"]) == (True, 1)
    assert contains_any("0101", ["0010", "1101"]) == (False, None)


def naive_find(x, pats):
    best = None
    for p in pats:
        for i in range(len(x) - len(p) + 1):
            if x[i : i + len(p)] == p:
                end = i + len(p)
                if best is None or end < best[0]:
                    best = (end, i + 1)
                break
    return None if best is None else best[1]


def test_contains_any_matches_naive():
    rng = random.Random(7)
    for _ in range(40):
        pats = {"".join(rng.choice("01") for _ in range(rng.randint(1, 5))) for _ in range(rng.randint(1, 4))}
        ps = PatternSet(pats)
        for n in range(0, 11):
            for x in strings(n):
                got = ps.find(x)
                want = naive_find(x, pats)
                assert (got is None) == (want is None), (x, pats)


def test_reduced_check():
    PatternSet(["0010", "1101"], reduced=True)
    with pytest.raises(ValueError):
        PatternSet(["00", "1001"], reduced=True)


def test_complement():
    assert complement("0010") == "1101"
    e0 = {"00100", "001011"}
    assert complement_set(e0) == {"11011", "110100"}
    rng = random.Random(1)
    for _ in range(100):
        x = "".join(rng.choice("01") for _ in range(rng.randint(0, 30)))
        assert complement(complement(x)) == x
        assert [r.len for r in decompose_runs(complement(x))] == [r.len for r in decompose_runs(x)]
