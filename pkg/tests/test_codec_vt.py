import random
from collections import defaultdict
from functools import lru_cache

import pytest

from ctxdel.bitseq import all_strings
from ctxdel.channel import contextual_positions, delete_at, deletion_set, sequential_traces
from ctxdel.codec_vt import (
    DOUBLE_DESK,
    SINGLE_DESK,
    DecodeError,
    DoubleCodec,
    HelbergHash,
    SingleCodec,
    extract_f,
    reinsert,
    short_decode,
    short_encode,
    vt_decode,
    vt_syndrome,
    window_property,
)
from ctxdel.constrained import CepsParams, Enumerator, build_dfa_Ceps_prime, ceps_predicate, regular_predicate

TINY = [CepsParams(12, 4, 2, 8, 2, 8), CepsParams(11, 3, 2, 11, 3, 11), CepsParams(13, 3, 2, 8, 3, 8)]


@lru_cache(maxsize=None)
def members(p):
    return tuple(x for x in all_strings(p.n) if ceps_predicate(x, p))


def drops_exactly(a, b, t):
    """b is a by exactly t deletions."""
    if len(a) - len(b) != t:
        return False
    it = iter(a)
    return all(c in it for c in b)


def test_f_worked_example():
    x = "1" + "000000" + "100110000" + "1111" + "001110" + "1111111" + "00" + "111111" + "01" + "000" + "11"
    e = extract_f(x, 5, 3)
    assert e.subseq == "000000100110000" + "1111" + "1111111" + "00" + "111111" + "01" + "000"
    # runs 2..7 then runs 11..16, as two non-adjacent blocks
    assert e.segments == ((2, 19), (27, 20))
    assert "".join(x[s - 1 : s - 1 + n] for s, n in e.segments) == e.subseq


def test_f_empty_without_long_runs():
    assert extract_f("0101101001", 3, 2).subseq == ""
    assert extract_f("", 3, 2).segments == ()


def test_f_segments_non_adjacent():
    rng = random.Random(3)
    for _ in range(500):
        x = "".join(rng.choice("01") for _ in range(60))
        e = extract_f(x, 3, 2)
        for (s1, n1), (s2, _) in zip(e.segments, e.segments[1:]):
            assert s1 + n1 < s2


@pytest.mark.parametrize("p", TINY)
def test_f_length_bound(p):
    assert all(len(extract_f(x, p.k, p.l).subseq) <= p.rmax * (p.lmax + p.w) for x in members(p))


@pytest.mark.parametrize("p", TINY)
def test_f_deletions_simultaneous(p):
    for x in members(p):
        fx = extract_f(x, p.k, p.l).subseq
        for y in deletion_set(x, p.k, 2, "simultaneous"):
            assert drops_exactly(fx, extract_f(y, p.k, p.l).subseq, len(x) - len(y))


def test_cascade_breaks_f_deletions():
    # deleting the lone 1 merges the zeros, which exposes the 11 to a second
    # deletion; the shortened 1-run no longer closes the block, so f(y) grows
    p = CepsParams(12, 4, 2, 8, 2, 8)
    x = "000010110001"
    assert ceps_predicate(x, p)
    y = "0000010001"
    assert y in deletion_set(x, 4, 2, "sequential")
    assert y not in deletion_set(x, 4, 2, "simultaneous")
    assert extract_f(x, 4, 2).subseq == "00001011"
    assert extract_f(y, 4, 2).subseq == "0000010001"


@pytest.mark.parametrize("p", TINY)
@pytest.mark.parametrize("mode", ["sequential", "simultaneous"])
def test_f_determines_preimage(p, mode):
    pre = defaultdict(set)
    for x in members(p):
        for y in deletion_set(x, p.k, 2, mode):
            pre[y].add(x)
    for y, xs in pre.items():
        seen = {}
        for x in xs:
            fx = extract_f(x, p.k, p.l).subseq
            assert seen.setdefault(fx, x) == x


@pytest.mark.parametrize("p", TINY)
def test_reinsert_single(p):
    for x in members(p):
        fx = extract_f(x, p.k, p.l).subseq
        for q in contextual_positions(x, p.k):
            y = delete_at(x, [q])
            assert reinsert(y, extract_f(y, p.k, p.l), fx, p.k, p.l) == x


@pytest.mark.parametrize("p", TINY)
def test_reinsert_double(p):
    acc = lambda z: ceps_predicate(z, p)  # noqa: E731
    n = 0
    for x in members(p):
        fx = extract_f(x, p.k, p.l).subseq
        for _, y in sequential_traces(x, p.k, 2):
            fy = extract_f(y, p.k, p.l)
            if not drops_exactly(fx, fy.subseq, 2):
                continue  # cascade, see test_cascade_breaks_f_deletions
            assert reinsert(y, fy, fx, p.k, p.l, accept=acc) == x
            n += 1
    assert n > 0


def test_reinsert_identity():
    x = "0000101100"
    assert reinsert(x, extract_f(x, 4, 2), extract_f(x, 4, 2).subseq, 4, 2) == x


def test_vt_syndrome_values():
    assert vt_syndrome("101") == 0
    assert vt_syndrome("0000") == 0
    assert vt_syndrome("11", 10) == 3


def test_vt_decode_exhaustive():
    for n in range(1, 13):
        for w in all_strings(n):
            a = vt_syndrome(w)
            for i in range(n):
                assert vt_decode(w[:i] + w[i + 1 :], a) == w


def test_short_code_one_deletion():
    for hb in range(1, 9):
        for h in all_strings(hb):
            c = short_encode(h)
            for i in range(len(c)):
                assert short_decode(c[:i] + c[i + 1 :], hb) == h


def test_single_codec_exhaustive_small():
    p = CepsParams(16, 3, 2, 8, 3, 8)
    c = SingleCodec(p, msg_bits=10)
    hits = 0
    for v in range(2**c.msg_bits):
        m = format(v, "010b")
        cw = c.encode(m)
        assert ceps_predicate(cw[: p.n], p)
        assert c.decode(cw) == m
        for q in contextual_positions(cw, p.k):
            y = delete_at(cw, [q])
            assert len(c.candidates(y)) == 1
            assert c.decode(y) == m
            hits += 1
    assert hits > 0


def test_single_codec_redundancy_formula():
    c = SingleCodec(SINGLE_DESK)
    assert c.msg_bits == SINGLE_DESK.n - 1
    assert len(c.encode("0" * c.msg_bits)) == c.length
    assert c.redundancy == 4 + c.h_bits + c.red_short


def test_single_codec_rejects():
    with pytest.raises(ValueError):
        SingleCodec(CepsParams(16, 2, 1, 8, 3, 8), msg_bits=1)
    c = SingleCodec(CepsParams(16, 3, 2, 8, 3, 8), msg_bits=4)
    with pytest.raises(DecodeError):
        c.decode("0" * (c.length - 3))


def test_helberg_hash_two_deletions():
    hh = HelbergHash(10)
    for n in range(0, 11):
        for w in all_strings(n):
            h = hh.hash(w)
            ys = {w}
            for i in range(n):
                z = w[:i] + w[i + 1 :]
                ys.add(z)
                ys.update(z[:j] + z[j + 1 :] for j in range(len(z)))
            for y in ys:
                assert hh.decode(y, h) == w


def test_double_codec_roundtrip():
    d = DoubleCodec(DOUBLE_DESK)
    rng = random.Random(11)
    for _ in range(50):
        m = "".join(rng.choice("01") for _ in range(d.msg_bits))
        cw = d.encode(m)
        assert len(cw) == d.length
        assert d.decode(cw) == m
        # the header and separator never host a deletion
        assert all(q > d.header_len + 2 for q in contextual_positions(cw, DOUBLE_DESK.k))


def test_double_codec_infeasible_header():
    with pytest.raises(ValueError):
        DoubleCodec(CepsParams(64, 4, 2, 16, 2, 8))


def test_window_property_of_f():
    # l = 3 so that f can outgrow the window; every member is visited
    p, d = CepsParams(24, 4, 3, 24, 6, 24), 6
    e = Enumerator(build_dfa_Ceps_prime(p, d), p.n)
    long_f = 0
    for c in range(e.size):
        x = e.unrank(c)
        assert regular_predicate(x, d)
        f = extract_f(x, p.k, p.l).subseq
        assert window_property(f, 2 * d)
        long_f += len(f) > 2 * d
    assert long_f > 0
