import mpmath
import pytest
import sympy as sp

from ctxdel.bitseq import PatternSet, all_strings
from ctxdel.channel import apply_extremal
from ctxdel.capacity import (
    PATTERN_SETS,
    ExtremalCode,
    ExtremalDecodeError,
    H_patterns,
    J_patterns,
    Z,
    asymptotic_check,
    baseline_residue,
    capacity_bounds,
    coeffs,
    correlation_poly,
    dominant_real_root,
    gen_fn,
    hprime_tail_patterns,
    is_in_Hprime,
    normal_form_J,
    pad_to_Hprime,
    poly,
    residue_at,
    solve_forbidden_system,
    taylor_counts,
    transfer_matrix_count,
)


def test_correlation_examples():
    assert coeffs(correlation_poly("11010", "01011")) == [1, 0, 1]
    for k in range(2, 7):
        a = "0" * k + "10"
        assert coeffs(correlation_poly(a, a)) == [1] + [0] * k + [1]
        assert correlation_poly(a, "1" * k + "01").is_zero


def test_baseline_closed_form():
    for k in range(2, 8):
        F = solve_forbidden_system(["0" * k + "10", "1" * k + "01"])
        assert coeffs(F.num) == [1] + [0] * k + [1]
        assert coeffs(F.den) == [1] + [0] * (k - 1) + [-2, 1]


def test_H_denominators():
    for k in range(2, 11):
        want = sp.Poly(Z ** (2 * k + 2) - 2 * Z ** (2 * k + 1) + Z ** (k + 1) - 1, Z)
        assert gen_fn("H", k).den == want


J_DENOMINATORS = {
    2: Z**10 - 2 * Z**9 + Z**7 - Z**4 - Z**3 + Z**2 - 1,
    3: Z**13 - 3 * Z**12 + 3 * Z**11 - 3 * Z**10 + 4 * Z**9 - 4 * Z**8 + 4 * Z**7 - 4 * Z**6
    + 3 * Z**5 - 3 * Z**4 + 2 * Z**3 - Z**2 + Z - 1,
    4: Z**18 - 2 * Z**17 + Z**13 - Z**8 - Z**5 + Z**4 - 1,
}


@pytest.mark.parametrize("k", sorted(J_DENOMINATORS))
def test_J_denominators(k):
    assert gen_fn("J", k).den == sp.Poly(J_DENOMINATORS[k], Z)


def test_J_sets_reduced():
    for k in range(2, 6):
        PatternSet(J_patterns(k), reduced=True)
        PatternSet(H_patterns(k), reduced=True)


def naive_count(pats, n):
    ps = PatternSet(pats)
    return sum(not ps.contains_any(x) for x in all_strings(n))


@pytest.mark.parametrize("tag", sorted(PATTERN_SETS))
@pytest.mark.parametrize("k", [2, 3])
def test_counts_agree(tag, k):
    pats = PATTERN_SETS[tag](k)
    series = taylor_counts(gen_fn(tag, k), 25)
    for n in range(1, 26):
        assert series[n - 1] == transfer_matrix_count(pats, n)
    for n in range(1, 13):
        assert series[n - 1] == naive_count(pats, n)


def test_small_counts():
    assert taylor_counts(gen_fn("baseline", 2), 4)[3] == 14
    assert transfer_matrix_count(["00", "11"], 10) == 2


def test_dominant_root_examples():
    r = dominant_real_root(poly([-1, -1, 1]))
    with mpmath.workdps(40):
        assert abs(r.rho - (1 + mpmath.sqrt(5)) / 2) < mpmath.mpf(10) ** -28
    assert r.simple
    r = dominant_real_root(poly([-2, 1]))
    assert r.rho == 2 and r.simple
    r = dominant_real_root(poly([1, -2, 1]))  # (z-1)^2
    assert abs(r.rho - 1) < 1e-25 and not r.simple
    with pytest.raises(ValueError):
        dominant_real_root(poly([1, 0, 1]))


def test_residue_forms_agree():
    with mpmath.workdps(40):
        for k in range(2, 7):
            F = gen_fn("baseline", k)
            rho = dominant_real_root(F.den).rho
            assert abs(residue_at(F, rho) - baseline_residue(k, rho)) < 1e-25


def test_asymptotic_decay():
    F = gen_fn("baseline", 2)
    errs = [asymptotic_check(F, n) for n in (20, 40, 60)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-6


def test_columns_monotone():
    with mpmath.workdps(40):
        for k in range(2, 8):
            b = capacity_bounds(k, which=("rll", "baseline", "xi"))
            assert b["rll"].log2_rho <= b["baseline"].log2_rho <= b["xi"].log2_rho
            if k > 2:
                prev = capacity_bounds(k - 1, which=("baseline",))["baseline"]
                assert abs(b["rll"].log2_rho - prev.log2_rho) < 1e-25


def test_hprime_count_matches_predicate():
    for k in (2, 3):
        for n in range(1, 14):
            want = sum(is_in_Hprime(x, k) for x in all_strings(n))
            assert transfer_matrix_count(H_patterns(k), n, hprime_k=k) == want


def test_padding_cases():
    k = 3
    # final long run: pad 1 0 1^(k-1) 0
    assert pad_to_Hprime("1000", k) == "1000" + "10110"
    # ends with 0^k 1
    assert pad_to_Hprime("10001", k) == "10001" + "0110" + "1"
    # ends with 0^k 1 0
    assert pad_to_Hprime("100010", k) == "100010" + "110" + "10"
    with pytest.raises(ValueError):
        pad_to_Hprime("000100", k)


@pytest.mark.parametrize("k", [2, 3])
def test_padding_exhaustive(k):
    bad = PatternSet(H_patterns(k))
    for n in range(k + 3, 17):
        seen = set()
        for x in all_strings(n - k - 2):
            if bad.contains_any(x):
                continue
            y = pad_to_Hprime(x, k)
            assert len(y) == n and is_in_Hprime(y, k)
            seen.add(y)
        assert len(seen) == transfer_matrix_count(H_patterns(k), n - k - 2)


def test_extremal_code_small():
    code = ExtremalCode(12, 2)
    for c in range(code.size):
        x = code.encode_index(c)
        assert code.decode_index(apply_extremal(x, 2)) == c
    msg = "1" * code.msg_bits
    assert code.decode(apply_extremal(code.encode(msg), 2)) == msg


def test_extremal_decode_rejects():
    code = ExtremalCode(10, 2)
    with pytest.raises(ExtremalDecodeError):
        code.decode_index("0" * 8 + "11")


def test_extremal_no_long_runs_identity():
    code = ExtremalCode(10, 3)
    x = code.encode_index(0)
    assert code.decode_index(apply_extremal(x, 3)) == 0


@pytest.mark.parametrize("k", [2, 3])
def test_normal_form(k):
    bad = PatternSet(J_patterns(k))
    for n in range(1, 15):
        for x in all_strings(n):
            y = normal_form_J(x, k)
            assert len(y) <= n
            assert not bad.contains_any(y)
            assert apply_extremal(y, k) == apply_extremal(x, k)
            if not bad.contains_any(x):
                assert y == x


def test_hprime_tails_are_outside():
    for k in (2, 3):
        for t in hprime_tail_patterns(k):
            assert not is_in_Hprime("01" * 3 + t if t[0] == "0" else "10" * 3 + t, k)
