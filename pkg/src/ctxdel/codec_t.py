"""General-t contextual deletion code.

A word s of the structured set S_k is summarised by a hash vector H(s) indexed
by the short window that follows the last long run of each cluster of long runs.
t contextual deletions move at most 2t entries of H, so a Reed-Solomon syndrome
of H lets the decoder rebuild H(s) and then s itself. Messages are pushed into
S_k by XOR masks from a small-bias generator and a repeated k-bit pattern; the
mask seeds travel in the header.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

import sympy

from .bitseq import bits_to_int, check_bits, decompose_runs, int_to_bits, max_run
from .channel import contextual_preimages, make_rng
from .constrained import clog2, rll_decode, rll_encode


class RecoveryError(ValueError):
    """The received word is inconsistent with the promised deletions."""


# -- parameters -------------------------------------------------------------------


@dataclass(frozen=True)
class SkParams:
    n: int
    k: int
    t: int = 1
    G: int | None = None
    imax: int | None = None
    rmax2: int | None = None
    long_cap: int | None = None
    seed_m: int = 8  # AGHP field degree; the seed has 2 * seed_m bits

    def __post_init__(self):
        lg = self.lg
        defaults = {
            "G": 3 * (lg - self.k),
            "imax": math.ceil(3 * lg / self.k),
            "rmax2": 2 * lg,
            "long_cap": self.n * lg // 2 ** (self.k - 1),
        }
        for name, v in defaults.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, v)
        if self.k < 2:
            raise ValueError("need k >= 2")
        if self.G < 2:
            raise ValueError("need G >= 2 (k too close to log n)")
        if self.imax < 1:
            raise ValueError("need imax >= 1")
        if self.t < 1:
            raise ValueError("need t >= 1")

    @property
    def lg(self) -> int:
        return clog2(self.n)

    @property
    def L(self) -> int:
        """Length of the hash vector."""
        return 2 ** (self.G - 1)

    @property
    def radix(self) -> int:
        """Number of values of one V_m entry (run length, gap, parity bit)."""
        return 2 * self.rmax2 * (self.G + 1)

    @property
    def N(self) -> int:
        """Sentinel hash value; packed V_m values lie in [0, N-1]."""
        return self.radix**self.imax

    @property
    def seed_bits(self) -> int:
        return 2 * self.seed_m


# -- S_k membership --------------------------------------------------------------


@dataclass(frozen=True)
class SkCheck:
    ok: bool
    prop: int | None = None  # first violated property

    def __bool__(self) -> bool:
        return self.ok


def _window(s: str, end: int, G: int) -> str:
    """The G bits after 0-indexed position ``end``, zero padded past the end."""
    w = s[end + 1 : end + 1 + G]
    return w + "0" * (G - len(w))


@dataclass(frozen=True)
class RunClustering:
    clusters: tuple[tuple[tuple[int, int], ...], ...]  # (1-indexed start, length)


def cluster_runs(s: str, params: SkParams) -> RunClustering:
    """Greedy left-to-right grouping of long runs with gaps <= G."""
    clusters: list[list[tuple[int, int]]] = []
    prev_end = None
    for r in decompose_runs(s):
        if r.len < params.k:
            continue
        if prev_end is not None and r.start - prev_end - 1 <= params.G:
            clusters[-1].append((r.start, r.len))
        else:
            clusters.append([(r.start, r.len)])
        prev_end = r.end
    return RunClustering(tuple(tuple(c) for c in clusters))


def check_Sk(s: str, params: SkParams) -> SkCheck:
    check_bits(s)
    p = params
    runs = decompose_runs(s)
    if sum(r.len >= p.k for r in runs) > p.long_cap:
        return SkCheck(False, 1)
    if any(r.len >= p.rmax2 for r in runs):
        return SkCheck(False, 2)
    seen: set[str] = set()
    for r in runs:
        if r.len >= p.k - 1:
            w = _window(s, r.end - 1, p.G)
            a, b = w[:-1], w[1:]
            if a == b or a in seen or b in seen:
                return SkCheck(False, 3)
            seen.update((a, b))
    if any(len(c) > p.imax for c in cluster_runs(s, p).clusters):
        return SkCheck(False, 4)
    return SkCheck(True)


# -- the hash vector ---------------------------------------------------------------


def cluster_vectors(s: str, params: SkParams) -> list[tuple[str, list[tuple[int, int, int]]]]:
    """(key window, V_m) for every cluster, keys as (G-1)-bit strings."""
    p = params
    n = len(s)
    cl = cluster_runs(s, p).clusters
    out = []
    for m, c in enumerate(cl):
        nxt = cl[m + 1][0][0] if m + 1 < len(cl) else n + 2
        V = []
        for j, (a, ln) in enumerate(c):
            if j + 1 < len(c):
                b = c[j + 1][0]
                gap = b - a - ln
            else:
                b = nxt
                gap = (b - a) % 2
            # XOR of the bits between the run and b, leaving out the last one
            x = s[a - 1 + ln : b - 2].count("1") % 2
            V.append((ln, gap, x))
        a, ln = c[-1]
        out.append((_window(s, a + ln - 2, p.G)[:-1], V))
    return out


def pack_vector(V: list[tuple[int, int, int]], params: SkParams) -> int | None:
    """Mixed-radix packing, entry j as digit j (least significant first).

    Digit = (run length * (G + 1) + gap) * 2 + xor. Returns None when V does not
    fit (too many runs, run too long, gap too wide).
    """
    p = params
    if len(V) > p.imax:
        return None
    v = 0
    for ln, gap, x in reversed(V):
        if not 1 <= ln < p.rmax2 or gap > p.G:
            return None
        v = v * p.radix + (ln * (p.G + 1) + gap) * 2 + x
    return v


def unpack_vector(v: int, params: SkParams) -> list[tuple[int, int, int]]:
    p = params
    out = []
    for _ in range(p.imax):
        v, d = divmod(v, p.radix)
        d, x = divmod(d, 2)
        ln, gap = divmod(d, p.G + 1)
        if ln == 0:
            break
        out.append((ln, gap, x))
    return out


def compute_hash(s: str, params: SkParams) -> list[int]:
    p = params
    H = [p.N] * p.L
    for key, V in cluster_vectors(s, p):
        v = pack_vector(V, p)
        w = bits_to_int(key) if key else 0
        if v is not None and H[w] == p.N:
            H[w] = v
    return H


# -- Reed-Solomon syndromes over a prime field ---------------------------------------


@dataclass(frozen=True)
class RsCode:
    L: int
    t: int
    q: int

    @classmethod
    def for_params(cls, L: int, t: int, min_q: int = 0) -> "RsCode":
        """Smallest prime q above L + 4t (and above min_q)."""
        return cls(L, t, int(sympy.nextprime(max(L + 4 * t, min_q))))

    @cached_property
    def alpha(self) -> int:
        return int(sympy.primitive_root(self.q))

    @property
    def nsyn(self) -> int:
        return 4 * self.t

    @property
    def symbol_bits(self) -> int:
        return clog2(self.q)

    @cached_property
    def _locators(self) -> list[int]:
        return [pow(self.alpha, i, self.q) for i in range(self.L)]


def rs_syndrome(h: list[int], code: RsCode) -> list[int]:
    """S_j = sum_i h_i alpha^(i j) for j = 1..4t."""
    if len(h) != code.L:
        raise ValueError("length mismatch")
    q = code.q
    out = []
    for j in range(1, code.nsyn + 1):
        out.append(sum(hi * pow(X, j, q) for hi, X in zip(h, code._locators) if hi) % q)
    return out


def _berlekamp_massey(S: list[int], q: int) -> list[int]:
    """Shortest LFSR (connection polynomial, ascending) generating S."""
    C, B = [1], [1]
    L, m, b = 0, 1, 1
    for i in range(len(S)):
        d = S[i]
        for j in range(1, L + 1):
            d = (d + C[j] * S[i - j]) % q
        if d == 0:
            m += 1
            continue
        coef = d * pow(b, q - 2, q) % q
        T = C[:]
        C = C + [0] * (len(B) + m - len(C))
        for j, bj in enumerate(B):
            C[j + m] = (C[j + m] - coef * bj) % q
        if 2 * L <= i:
            L, B, b, m = i + 1 - L, T, d, 1
        else:
            m += 1
    return C[: L + 1]


def _solve_mod(A: list[list[int]], y: list[int], q: int) -> list[int] | None:
    n = len(A)
    M = [row[:] + [v] for row, v in zip(A, y)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] % q), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], q - 2, q)
        M[c] = [v * inv % q for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [(a - f * b) % q for a, b in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def rs_recover(h_corrupt: list[int], syn: list[int], code: RsCode) -> list[int]:
    """The unique vector within 2t substitutions of h_corrupt with syndrome syn."""
    q = code.q
    S = [(a - b) % q for a, b in zip(syn, rs_syndrome(h_corrupt, code))]
    if not any(S):
        return list(h_corrupt)
    lam = _berlekamp_massey(S, q)
    nu = len(lam) - 1
    if nu > 2 * code.t:
        raise RecoveryError("more than 2t substitutions")
    # error positions: Lambda(X^-1) = 0
    pos = []
    for i, X in enumerate(code._locators):
        xi = pow(X, q - 2, q)
        acc, pw = 0, 1
        for c in lam:
            acc = (acc + c * pw) % q
            pw = pw * xi % q
        if acc == 0:
            pos.append(i)
    if len(pos) != nu:
        raise RecoveryError("error locator does not split")
    Xs = [code._locators[i] for i in pos]
    A = [[pow(X, j, q) for X in Xs] for j in range(1, nu + 1)]
    e = _solve_mod(A, S[:nu], q)
    if e is None:
        raise RecoveryError("singular error-value system")
    out = list(h_corrupt)
    for i, ei in zip(pos, e):
        out[i] = (out[i] + ei) % q
    if rs_syndrome(out, code) != list(syn):
        raise RecoveryError("syndrome mismatch after correction")
    return out


# -- small-bias generator ---------------------------------------------------------------


@lru_cache(maxsize=None)
def gf2_irreducible(m: int) -> int:
    """Lowest irreducible polynomial of degree m over GF(2), as an int bit mask."""
    for poly in range((1 << m) | 1, 1 << (m + 1), 2):
        if _gf2_irreducible(poly, m):
            return poly
    raise ValueError("no irreducible polynomial")  # pragma: no cover


def _gf2_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def _gf2_irreducible(poly: int, m: int) -> bool:
    return all(_gf2_mod(poly, d) for d in range(2, 1 << (m // 2 + 1)))


def gf2m_mul(a: int, b: int, m: int) -> int:
    poly = gf2_irreducible(m)
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= poly
    return r


def gf2m_inv(a: int, m: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    # a^(2^m - 2)
    r, e = 1, (1 << m) - 2
    while e:
        if e & 1:
            r = gf2m_mul(r, a, m)
        a = gf2m_mul(a, a, m)
        e >>= 1
    return r


@lru_cache(maxsize=None)
def _gf2m_tables(m: int) -> tuple[list[int], list[int]]:
    """exp and log tables of GF(2^m) for some primitive element."""
    order = (1 << m) - 1
    for g in range(2, 1 << m):
        exp, a = [], 1
        for _ in range(order):
            exp.append(a)
            a = gf2m_mul(a, g, m)
        if len(set(exp)) == order:
            log = [0] * (1 << m)
            for i, e in enumerate(exp):
                log[e] = i
            return exp, log
    return [1], [0, 0]  # m = 1: the field is {0, 1}


def aghp_generate(seed: str, n: int, m: int | None = None) -> str:
    """Powering small-bias generator: bit i is <x^i, y> over GF(2^m).

    seed = x ∘ y, each m bits. Bias of any XOR of outputs is at most (n-1)/2^m.
    """
    check_bits(seed)
    m = len(seed) // 2 if m is None else m
    if len(seed) != 2 * m:
        raise ValueError(f"seed must have {2 * m} bits")
    x, y = bits_to_int(seed[:m]), bits_to_int(seed[m:])
    if x == 0:
        pows = [1] + [0] * (n - 1) if n else []
    else:
        exp, log = _gf2m_tables(m)
        lx, order = log[x], len(exp)
        # x^i has period order / gcd(log x, order), and so does the output
        period = order // math.gcd(lx, order)
        pows = [exp[i * lx % order] for i in range(min(n, period))]
    out = "".join("1" if bin(pw & y).count("1") & 1 else "0" for pw in pows)
    return (out * -(-n // len(out)))[:n] if out else ""


def aghp_bias_bound(n: int, m: int) -> float:
    return (n - 1) / 2**m


# -- masking ---------------------------------------------------------------------------


def _xor(a: str, b: str) -> str:
    if len(a) != len(b):
        raise ValueError("length mismatch")
    return format(int(a, 2) ^ int(b, 2), "b").zfill(len(a)) if a else ""


def rep(mk: str, n: int) -> str:
    return (mk * -(-n // len(mk)))[:n]


def apply_mask(x: str, u: str, mk: str, params: SkParams) -> str:
    return _xor(_xor(x, aghp_generate(u, len(x), params.seed_m)), rep(mk, len(x)))


def mask_candidates(params: SkParams, seed: int, budget: int):
    """Zero pair first, then random pairs, then the lexicographic sweep."""
    d, k = params.seed_bits, params.k
    yield "0" * d, "0" * k
    rng = make_rng(seed)
    half = budget // 2
    for _ in range(half - 1):
        u = int(rng.integers(0, 1 << d))
        mk = int(rng.integers(0, 1 << k))
        yield int_to_bits(u, d), int_to_bits(mk, k)
    for c in range(budget - half):
        if c >= 1 << (d + k):
            return
        u, mk = divmod(c, 1 << k)
        yield int_to_bits(u, d), int_to_bits(mk, k)


_RUN = re.compile(r"0+|1+")


@lru_cache(maxsize=None)
def _cascade_pattern(k: int, t: int) -> re.Pattern:
    return re.compile(f"0{{{k}}}1{{1,{t}}}(?!1)|1{{{k}}}0{{1,{t}}}(?!0)")


@lru_cache(maxsize=None)
def _long_pattern(r: int) -> re.Pattern:
    return re.compile(f"0{{{r}}}|1{{{r}}}")


def cascade_free(s: str, k: int, t: int) -> bool:
    """Every run right after a run of length >= k has more than t bits.

    Then t contextual deletions can shorten runs but never empty one, so no two
    runs merge and no position becomes deletable that was not so in s.
    """
    return _cascade_pattern(k, t).search(s) is None


def _quick_reject(s: str, params: SkParams, no_cascade: bool) -> bool:
    """Cheap screens ahead of the full S_k test."""
    p = params
    if _long_pattern(p.rmax2).search(s) or (no_cascade and not cascade_free(s, p.k, p.t)):
        return True
    return len(_long_pattern(p.k).findall(s)) > p.long_cap


def mask_encode(x: str, params: SkParams, seed: int = 0, budget: int = 4096, accept=None,
                no_cascade: bool = False):
    """Find (u, m) with x + g(u) + Rep(m) in S_k (and passing ``accept``)."""
    for u, mk in mask_candidates(params, seed, budget):
        xp = apply_mask(x, u, mk, params)
        if _quick_reject(xp, params, no_cascade):
            continue
        if check_Sk(xp, params) and (accept is None or accept(xp, u, mk)):
            return xp, u, mk
    raise RecoveryError(f"no mask found within {budget} attempts")


# -- recovering s from s' and H(s) --------------------------------------------------


def recover_sequence(s_corrupt: str, H: list[int], params: SkParams, n: int | None = None) -> str:
    """The unique member of S_k with hash H reaching s_corrupt by contextual deletions.

    Candidates are all contextual preimages of s_corrupt at the right depth.
    """
    n = params.n if n is None else n
    t = n - len(s_corrupt)
    if t < 0 or t > params.t:
        raise RecoveryError("length outside the deletion budget")
    if t == 0:
        if compute_hash(s_corrupt, params) != H:
            raise RecoveryError("hash mismatch with no deletions")
        return s_corrupt
    hits = [
        s
        for s in sorted(contextual_preimages(s_corrupt, params.k, t))
        if compute_hash(s, params) == H and check_Sk(s, params)
    ]
    if len(hits) != 1:
        raise RecoveryError(f"{len(hits)} preimages match the hash")
    return hits[0]


# -- the codec ---------------------------------------------------------------------------


class GeneralCodec:
    """Enc(x) = E(s_info) ∘ (1 - x'_1) ∘ x' with s_info = u ∘ m ∘ syn(H(x'))."""

    def __init__(self, params: SkParams, seed: int = 0, budget: int = 1 << 16, no_cascade: bool = True):
        self.params = params
        self.seed = seed
        self.budget = budget
        self.no_cascade = no_cascade
        self.code = RsCode.for_params(params.L, params.t, params.N)
        self.info_len = params.seed_bits + params.k + self.code.nsyn * self.code.symbol_bits
        self.header_len = self.info_len + 1

    @property
    def length(self) -> int:
        return self.header_len + 1 + self.params.n

    @property
    def redundancy(self) -> int:
        return self.length - self.params.n

    def s_info(self, xp: str, u: str, mk: str) -> str:
        syn = rs_syndrome(compute_hash(xp, self.params), self.code)
        b = self.code.symbol_bits
        return u + mk + "".join(int_to_bits(v, b) for v in syn)

    def _header_ok(self, xp: str, u: str, mk: str) -> bool:
        return max_run(rll_encode(self.s_info(xp, u, mk))) < self.params.k - 1

    def encode(self, msg: str) -> str:
        check_bits(msg)
        p = self.params
        if len(msg) != p.n:
            raise ValueError(f"message must have {p.n} bits")
        xp, u, mk = mask_encode(msg, p, self.seed, self.budget, accept=self._header_ok, no_cascade=self.no_cascade)
        header = rll_encode(self.s_info(xp, u, mk))
        assert max_run(header) < p.k - 1
        return header + ("1" if xp[0] == "0" else "0") + xp

    def decode(self, y: str) -> str:
        check_bits(y)
        p = self.params
        if not 0 <= self.length - len(y) <= p.t:
            raise RecoveryError("wrong length")
        try:
            info = rll_decode(y[: self.header_len])
        except ValueError as e:
            raise RecoveryError("damaged header") from e
        d, k, b = p.seed_bits, p.k, self.code.symbol_bits
        u, mk = info[:d], info[d : d + k]
        syn = [bits_to_int(info[i : i + b]) for i in range(d + k, len(info), b)]
        tail = y[self.header_len + 1 :]
        H = rs_recover(compute_hash(tail, p), syn, self.code)
        xp = recover_sequence(tail, H, p)
        return apply_mask(xp, u, mk, p)


@lru_cache(maxsize=8)
def general_codec(params: SkParams) -> GeneralCodec:
    return GeneralCodec(params)


def encode_t(msg: str, params: SkParams) -> str:
    return general_codec(params).encode(msg)


def decode_t(y: str, params: SkParams) -> str:
    return general_codec(params).decode(y)


GENERAL_DESK = SkParams(n=1024, k=8, t=3, imax=2)
