import math
import random

import pytest

from ctxdel.bitseq import all_strings
from ctxdel.codec_vt import vt_syndrome
from ctxdel.constrained import CepsParams
from ctxdel.oracle import (
    CodeBook,
    bounds_report,
    confusion_balls,
    greedy_gv,
    in_R_hat,
    r_hat_cap,
    verify_code,
    vt_classes,
)


def test_singleton_code():
    assert verify_code(CodeBook.of(["0011"], k=2, t=1))


def test_conflicting_pair_has_witness():
    n = 6
    pair = {"0" * (n - 1) + "1", "0" * (n - 2) + "10"}
    v = verify_code(CodeBook.of(pair, k=3, t=1))
    assert not v
    a, b, y = v.witness
    assert {a, b} == pair and y == "0" * (n - 1)


def test_all_zero_word_has_no_partner_output():
    # 0^n has no deletable position, so it only ever emits itself
    assert verify_code(CodeBook.of(["0" * 6, "0" * 5 + "1"], k=3, t=1))


def test_vt_code_passes():
    # a classical single-deletion code corrects contextual deletions too
    for n in range(4, 11):
        C = CodeBook.of([x for x in all_strings(n) if vt_syndrome(x) == 0], k=2, t=1)
        assert verify_code(C) and verify_code(C, "simultaneous")


def test_verify_order_free():
    words = ["010011", "110100", "001101", "101010"]
    a = verify_code(CodeBook.of(words, k=2, t=1)).ok
    b = verify_code(CodeBook.of(reversed(words), k=2, t=1)).ok
    assert a == b


def test_mode_monotone():
    rng = random.Random(1)
    for _ in range(200):
        C = CodeBook.of(rng.sample(list(all_strings(8)), 4), k=2, t=2)
        if verify_code(C):
            assert verify_code(C, "simultaneous")


def test_r_hat():
    assert in_R_hat("01" * 20, 3)
    n = 16
    assert r_hat_cap(n, 12) < n
    assert not in_R_hat("0" * n, 12)


def test_r_hat_fraction():
    rng = random.Random(0)
    xs = ["".join(rng.choice("01") for _ in range(24)) for _ in range(2000)]
    assert sum(in_R_hat(x, 4) for x in xs) / len(xs) >= 0.9


def test_greedy_t0_is_r_hat():
    C = greedy_gv(8, 3, 0)
    assert C.codewords == {x for x in all_strings(8) if in_R_hat(x, 3)}


def test_greedy_gv_valid_and_large():
    n, k, t = 12, 3, 1
    C = greedy_gv(n, k, t)
    assert verify_code(C) and verify_code(C, "simultaneous")
    balls = confusion_balls(n, k, t)
    r_hat = sum(in_R_hat(x, k) for x in all_strings(n))
    # every kept word rules out at most its ball
    assert math.log2(len(C)) >= math.log2(r_hat) - math.log2(max(balls.values()))
    assert math.log2(len(C)) >= n - 2 * math.log2(max(balls.values()))


@pytest.mark.parametrize("p", [CepsParams(12, 4, 2, 8, 2, 8), CepsParams(11, 3, 2, 11, 3, 11)])
def test_vt_classes_are_codes(p):
    classes = vt_classes(p)
    assert len(classes) > 1
    assert all(verify_code(C) for C in classes.values())


def test_bounds_report():
    r = bounds_report(2**20, 2, C=0.75)
    assert r.lower == pytest.approx(10) and r.upper_gv == pytest.approx(20)
    assert bounds_report(2**10, 3, C=1.0).lower == 0
    assert bounds_report(2**10, 0, k=5).upper_gv == 0
    assert bounds_report(2**10, 1, k=10).constant_regime
    assert bounds_report(2**10, 1, k=5).single_construction == pytest.approx(10)
    with pytest.raises(ValueError):
        bounds_report(2**10, 1)
