"""Forbidden-pattern generating functions and capacity bounds for the extremal channel.

Generating functions follow the Guibas-Odlyzko convention F(z) = sum_n f(n) z^-n,
so the denominator d(z) has its dominant root rho > 1 and log2(rho) is the growth
rate. Polynomials are sympy ``Poly`` objects over ZZ; ``coeffs`` gives the dense
ascending integer list used in the TSV output.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy as sp
from sympy.polys.matrices import DomainMatrix

from .bitseq import PatternSet, complement, decompose_runs
from .channel import apply_extremal
from .constrained import Enumerator, build_pattern_avoider, count_table

Z = sp.Symbol("z")
_R = sp.ZZ[Z]


def poly(coeffs_ascending) -> sp.Poly:
    return sp.Poly(list(reversed(list(coeffs_ascending))) or [0], Z, domain=sp.ZZ)


def coeffs(p: sp.Poly) -> list[int]:
    """Dense ascending integer coefficients."""
    return [int(c) for c in reversed(p.all_coeffs())]


# -- pattern sets ----------------------------------------------------------------


def rll_patterns(k: int) -> list[str]:
    return ["0" * k, "1" * k]


def baseline_patterns(k: int) -> list[str]:
    return ["0" * k + "10", "1" * k + "01"]


def _with_complements(ps):
    return list(ps) + [complement(p) for p in ps]


def E_patterns(k: int) -> list[str]:
    e0 = ["0" * k + "10" + "1" * j + "0" for j in range(k - 1)] + ["0" * k + "10" + "1" * k]
    return _with_complements(e0)


def H_patterns(k: int) -> list[str]:
    return E_patterns(k) + _with_complements(["0" * (k + 1) + "1" * k + "00"])


def F_patterns(k: int) -> list[str]:
    f0 = ["0" * (k + 1) + "1" * k + "0" * g + "1" for g in range(2, k)]
    f0.append("0" * (k + 1) + "1" * k + "0" * (k + 1))
    return _with_complements(f0)


def J_patterns(k: int) -> list[str]:
    return E_patterns(k) + F_patterns(k)


PATTERN_SETS = {
    "rll": rll_patterns,
    "baseline": baseline_patterns,
    "H": H_patterns,
    "J": J_patterns,
}


# -- correlation polynomials and the linear system --------------------------------


def correlation_poly(A: str, B: str) -> sp.Poly:
    """Coefficient of z^(i-1) is 1 iff the length-i suffix of A is the length-i prefix of B."""
    c = [0] * min(len(A), len(B))
    for i in range(1, len(c) + 1):
        if A[-i:] == B[:i]:
            c[i - 1] = 1
    return poly(c)


@dataclass(frozen=True)
class RationalGenFn:
    num: sp.Poly
    den: sp.Poly

    def series(self, n_max: int) -> list[int]:
        """f(0), ..., f(n_max) from the expansion in w = 1/z."""
        a, b = self.num.degree(), self.den.degree()
        if a > b:
            raise ValueError("F(z) must be bounded at infinity")
        # F(1/w) = w^(b-a) * rev(num)(w) / rev(den)(w)
        top = [0] * (b - a) + [int(c) for c in self.num.all_coeffs()]
        bot = [int(c) for c in self.den.all_coeffs()]
        lead = bot[0]
        out: list[int] = []
        for n in range(n_max + 1):
            acc = Fraction(top[n] if n < len(top) else 0)
            for j in range(1, min(n, len(bot) - 1) + 1):
                acc -= bot[j] * out[n - j]
            v = acc / lead
            if v.denominator != 1:
                raise ArithmeticError("non-integer coefficient")
            out.append(int(v))
        return out


def _normalize(num: sp.Poly, den: sp.Poly) -> RationalGenFn:
    g = sp.gcd(num, den)
    num, den = num.quo(g), den.quo(g)
    c = sp.gcd(num.content(), den.content()) if not num.is_zero else den.content()
    if den.LC() < 0:
        c = -c
    return RationalGenFn(num.quo_ground(c), den.quo_ground(c))


def solve_forbidden_system(P, q_alpha: int = 2) -> RationalGenFn:
    """Exact F(z) for words avoiding the reduced pattern set P.

    Unknowns are F, F_A, ..., F_T. The first equation is
    (z - q) F + z sum_X F_X = z and, for every pattern A,
    F - z sum_X (X o A)_z F_X = 0. F is obtained by Cramer's rule with
    fraction-free determinants over ZZ[z].
    """
    pats = sorted(P.patterns if isinstance(P, PatternSet) else set(P), key=lambda p: (len(p), p))
    PatternSet(pats, reduced=True)
    m = len(pats)
    if not m:
        raise ValueError("empty pattern set")
    z = _R.from_sympy(Z)

    def lift(p: sp.Poly):
        return _R.from_sympy(p.as_expr())

    rows = [[z - q_alpha] + [z] * m]
    for A in pats:
        rows.append([_R.one] + [-(z * lift(correlation_poly(X, A))) for X in pats])
    M = DomainMatrix(rows, (m + 1, m + 1), _R)
    rhs = [z] + [_R.zero] * m
    MF = DomainMatrix([[rhs[i]] + rows[i][1:] for i in range(m + 1)], (m + 1, m + 1), _R)
    det = M.det()
    if det == _R.zero:
        raise ArithmeticError("singular forbidden-pattern system")
    num = sp.Poly(_R.to_sympy(MF.det()), Z, domain=sp.ZZ)
    den = sp.Poly(_R.to_sympy(det), Z, domain=sp.ZZ)
    return _normalize(num, den)


def taylor_counts(F: RationalGenFn, n_max: int) -> list[int]:
    """f(1), ..., f(n_max)."""
    return F.series(n_max)[1:]


# -- roots ------------------------------------------------------------------------


@dataclass(frozen=True)
class RootResult:
    rho: mpmath.mpf
    interval: tuple[Fraction, Fraction]
    simple: bool


def dominant_real_root(d: sp.Poly, precision: int = 30) -> RootResult:
    """Largest-magnitude real root of d, isolated and refined with exact rationals."""
    if d.degree() < 1:
        raise ValueError("constant polynomial")
    sqf = d.sqf_part()
    tol = Fraction(1, 10 ** (precision + 2))
    ivs = [sqf.refine_root(a, b, eps=sp.Rational(tol.numerator, tol.denominator)) for (a, b), _ in sqf.intervals()]
    if not ivs:
        raise ValueError("no real root")
    # intervals are disjoint and tiny; compare by the magnitude of their midpoints
    a, b = max(ivs, key=lambda ab: (abs(ab[0] + ab[1]), ab[0] + ab[1]))
    lo, hi = Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))
    g = sp.gcd(d, d.diff(Z))
    simple = g.degree() == 0 or g.count_roots(a, b) == 0
    with mpmath.workdps(precision + 10):
        rho = (mpmath.mpf(lo.numerator) / lo.denominator + mpmath.mpf(hi.numerator) / hi.denominator) / 2
    return RootResult(rho, (lo, hi), simple)


@dataclass(frozen=True)
class CapacityResult:
    k: int
    tag: str
    denominator: sp.Poly
    rho: mpmath.mpf
    log2_rho: mpmath.mpf
    simple: bool

    def log2_str(self, digits: int = 7) -> str:
        return _fixed(self.log2_rho, digits)


def _fixed(v, digits: int) -> str:
    """Round-half-even decimal string with a fixed number of fractional digits."""
    d = Decimal(mpmath.nstr(v, digits + 20, strip_zeros=False))
    return format(d.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN), "f")


@lru_cache(maxsize=None)
def gen_fn(tag: str, k: int) -> RationalGenFn:
    return solve_forbidden_system(PATTERN_SETS[tag](k))


def bound(tag: str, k: int, precision: int = 30) -> CapacityResult:
    F = gen_fn(tag, k)
    r = dominant_real_root(F.den, precision)
    with mpmath.workdps(precision + 10):
        lg = mpmath.log(r.rho, 2) if r.rho != 1 else mpmath.mpf(0)
    return CapacityResult(k, tag, F.den, r.rho, lg, r.simple)


BOUND_TAGS = {"rll": "rll", "baseline": "baseline", "xi": "H", "nu": "J"}


def capacity_bounds(k: int, precision: int = 30, which=("rll", "baseline", "xi", "nu")) -> dict[str, CapacityResult]:
    """Table-style bounds for threshold k.

    ``nu`` is the growth rate of |J_n| itself; the union over lengths up to n
    only adds a polynomial factor.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    return {name: bound(BOUND_TAGS[name], k, precision) for name in which}


def residue_at(F: RationalGenFn, rho) -> mpmath.mpf:
    """Residue of F at a simple pole rho: num(rho) / den'(rho)."""
    n = [int(c) for c in F.num.all_coeffs()]
    d1 = [int(c) for c in F.den.diff(Z).all_coeffs()]
    return mpmath.polyval(n, rho) / mpmath.polyval(d1, rho)


def baseline_residue(k: int, rho) -> mpmath.mpf:
    """Closed form 2 rho / ((k+1) rho - 2k) for the baseline system."""
    return 2 * rho / ((k + 1) * rho - 2 * k)


def asymptotic_check(F: RationalGenFn, n: int, precision: int = 40) -> mpmath.mpf:
    """Relative error of f(n) against alpha * rho^(n-1)."""
    with mpmath.workdps(precision):
        r = dominant_real_root(F.den, precision)
        alpha = residue_at(F, r.rho)
        f = F.series(n)[n]
        return abs(f - alpha * r.rho ** (n - 1)) / f


def transfer_matrix_count(P, n: int, hprime_k: int | None = None) -> int:
    """Exact count of length-n words avoiding P, optionally restricted to H'_n."""
    tail = hprime_tail_patterns(hprime_k) if hprime_k is not None else ()
    return count_table(build_pattern_avoider(P, end_forbidden=tail), n).total


# -- the constructive zero-error code ------------------------------------------------


def hprime_tail_patterns(k: int) -> list[str]:
    """Suffixes that make an H_n word fall outside H'_n.

    Inside H_n, every 0^k 1 0 can only continue as 1^(k-1) 0, so the extra
    condition fails exactly when the word ends in the middle of that shape or
    ends on a long run.
    """
    z = "0" * k
    tails = [z, z + "1", z + "10"] + [z + "10" + "1" * j for j in range(1, k)]
    return _with_complements(tails)


def is_in_H(x: str, k: int) -> bool:
    return not PatternSet(H_patterns(k)).contains_any(x)


def is_in_Hprime(x: str, k: int) -> bool:
    """Direct check of the run condition on top of H membership."""
    if not is_in_H(x, k):
        return False
    runs = decompose_runs(x)
    for i, r in enumerate(runs):
        if r.len < k:
            continue
        if i + 1 < len(runs) and runs[i + 1].len >= 2:
            continue
        c = complement(r.bit)
        want = c + r.bit + c * (k - 1) + r.bit
        start = r.end  # 0-indexed position right after the run
        if x[start : start + len(want)] == want:
            continue
        return False
    return True


def pad_to_Hprime(x: str, k: int) -> str:
    """Append k+2 bits to x in H so the result lies in H'."""
    if not is_in_H(x, k):
        raise ValueError("input is not in H")
    runs = decompose_runs(x)
    S = len(runs)
    longs = [i for i, r in enumerate(runs) if r.len >= k]
    pad = ""
    if longs:
        j = longs[-1]
        b = runs[j].bit
        c = complement(b)
        after = S - 1 - j
        if after == 0:
            pad = c + b + c * (k - 1) + b
        elif after == 1 and runs[S - 1].len == 1:
            pad = b + c * (k - 1) + b
        elif after == 2 and runs[S - 2].len == 1:
            pad = c * (k - 1) + b
        elif after == 3 and runs[S - 3].len == 1:
            pad = c * (k - 1 - runs[S - 1].len) + b
    y = x + pad
    target = len(x) + k + 2
    while len(y) < target:
        y += "1" if (not y or y[-1] == "0") else "0"
    return y


class ExtremalDecodeError(ValueError):
    pass


def reinsert_extremal(y: str, k: int) -> str:
    """Reinsert the bits deleted by the extremal channel, scanning left to right."""
    s = y
    cursor = 0  # 0-indexed; every long run starting at or after it is still unprocessed
    while True:
        runs = decompose_runs(s)
        idx = next((i for i, r in enumerate(runs) if r.start - 1 >= cursor and r.len >= k), None)
        if idx is None:
            return s
        r = runs[idx]
        c = complement(r.bit)
        end = r.end  # 0-indexed slot right after the run
        last = idx == len(runs) - 1
        if last:
            raise ExtremalDecodeError("long run at the end of the output")
        if r.len > k and runs[idx + 1].len == k - 1:
            s = s[: end - 1] + c + s[end - 1 :]
            cursor = end
        else:
            s = s[:end] + c + s[end:]
            cursor = end


def extremal_decode_word(y: str, n: int, k: int) -> str:
    x = reinsert_extremal(y, k)
    if len(x) != n or not is_in_Hprime(x, k) or apply_extremal(x, k) != y:
        raise ExtremalDecodeError("output is not the image of an H' word")
    return x


class ExtremalCode:
    """Zero-error code for the extremal channel: unrank into H_(n-k-2), then pad."""

    def __init__(self, n: int, k: int):
        if n < k + 3:
            raise ValueError("n must exceed k + 2")
        self.n, self.k = n, k
        self.m = n - k - 2
        self.enum = Enumerator(build_pattern_avoider(H_patterns(k)), self.m)

    @property
    def size(self) -> int:
        return self.enum.size

    @property
    def msg_bits(self) -> int:
        return self.enum.capacity_bits

    def encode_index(self, c: int) -> str:
        return pad_to_Hprime(self.enum.unrank(c), self.k)

    def decode_index(self, y: str) -> int:
        x = extremal_decode_word(y, self.n, self.k)
        return self.enum.rank(x[: self.m])

    def encode(self, msg: str) -> str:
        if len(msg) != self.msg_bits:
            raise ValueError(f"message must have {self.msg_bits} bits")
        return self.encode_index(int(msg, 2) if msg else 0)

    def decode(self, y: str) -> str:
        c = self.decode_index(y)
        if c >> self.msg_bits:
            raise ExtremalDecodeError("index outside the message range")
        return format(c, "b").zfill(self.msg_bits) if self.msg_bits else ""


def extremal_encode(msg: str, n: int, k: int) -> str:
    return ExtremalCode(n, k).encode(msg)


def extremal_decode(y: str, n: int, k: int) -> str:
    return ExtremalCode(n, k).decode(y)


# -- normal form for the upper bound ------------------------------------------------


def _replace_leftmost(x: str, rules) -> tuple[str, bool]:
    best = None
    for pat, rep in rules:
        i = x.find(pat)
        if i >= 0 and (best is None or i < best[0]):
            best = (i, pat, rep)
    if best is None:
        return x, False
    i, pat, rep = best
    return x[:i] + rep + x[i + len(pat) :], True


def _merge_stray(x: str, k: int) -> str:
    rules = [("0" * k + "1" + "0" * k, "0" * (2 * k)), ("1" * k + "0" + "1" * k, "1" * (2 * k))]
    changed = True
    while changed:
        x, changed = _replace_leftmost(x, rules)
    return x


def _push_single(x: str, k: int) -> str:
    i = 0
    while True:
        runs = decompose_runs(x)
        if i >= len(runs) - 2:
            return x
        r, one, nxt = runs[i], runs[i + 1], runs[i + 2]
        if r.len >= k and one.len == 1:
            b, c = r.bit, one.bit
            g = nxt.len
            follow = runs[i + 3] if i + 3 < len(runs) else None
            head = x[: r.start - 1]
            tail = x[nxt.end :]
            if follow is not None and follow.len == k - 1:
                mid = b * (r.len + g - 1) + c + b
            else:
                mid = b * (r.len + g) + c
            x = head + mid + tail
        i += 1


def _fold_F(x: str, k: int) -> str:
    rules = []
    for b in "01":
        c = complement(b)
        for g in range(2, k):
            rules.append((b * (k + 1) + c * k + b * g + c, b * k + c + b + c * (k - 1) + b * (g - 1) + c))
        rules.append((b * (k + 1) + c * k + b * (k + 1), b * k + c + b + c * (k - 1) + b * k))
    changed = True
    while changed:
        x, changed = _replace_leftmost(x, rules)
    return x


def normal_form_J(x: str, k: int) -> str:
    """Shorter-or-equal word avoiding E and F with the same extremal-channel output."""
    bad = PatternSet(J_patterns(k))
    if not bad.contains_any(x):
        # already in J; the single-run push would still fire on words like 0^k 1 0
        return x
    for _ in range(len(x) + 1):
        x = _fold_F(_push_single(_merge_stray(x, k), k), k)
        if not bad.contains_any(x):
            return x
    raise AssertionError("normal form did not converge")
