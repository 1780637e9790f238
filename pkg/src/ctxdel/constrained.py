"""Finite automata with enumerative (rank/unrank) coding and run-length limited maps.

Automata are built by exploring a transition function over hashable register
tuples and interning the reachable tuples to dense integer ids. State 0 is always
the absorbing reject state.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable

import numpy as np

from .bitseq import PatternSet, bits_to_int, check_bits, decompose_runs, int_to_bits

REJECT = 0


def clog2(x: int) -> int:
    """Ceiling of log2 for positive integers (exact)."""
    if x < 1:
        raise ValueError("clog2 needs x >= 1")
    return (x - 1).bit_length()


@dataclass
class Dfa:
    delta: np.ndarray  # shape (nstates, 2), int64
    accepting: np.ndarray  # shape (nstates,), bool
    start: int
    labels: list = field(default_factory=list, repr=False)

    @property
    def nstates(self) -> int:
        return len(self.accepting)

    @cached_property
    def trans(self) -> list[list[int]]:
        """Transition table as nested Python lists (fast scalar lookups)."""
        return self.delta.tolist()

    def run(self, x: str, q: int | None = None) -> int:
        q = self.start if q is None else q
        d = self.trans
        for c in x:
            q = d[q][c == "1"]
        return q

    def accepts(self, x: str) -> bool:
        return bool(self.accepting[self.run(x)])


def build_dfa(start: Hashable, step: Callable, accept: Callable) -> Dfa:
    """Explore ``step(state, bit) -> state | None`` from ``start``.

    ``None`` means reject. ``accept(state)`` marks final states.
    """
    ids = {None: REJECT, start: 1}
    labels: list = [None, start]
    edges = [[REJECT, REJECT]]
    todo = deque([start])
    while todo:
        s = todo.popleft()
        row = []
        for a in (0, 1):
            t = step(s, a)
            if t not in ids:
                ids[t] = len(labels)
                labels.append(t)
                todo.append(t)
            row.append(ids[t])
        edges.append(row)
    delta = np.array(edges, dtype=np.int64)
    acc = np.array([s is not None and bool(accept(s)) for s in labels], dtype=bool)
    return Dfa(delta, acc, 1, labels)


# -- count tables and enumerative coding ---------------------------------------


class CountTable:
    """T[i][q] = number of length-i suffixes accepted from state q (exact ints)."""

    def __init__(self, dfa: Dfa, n: int):
        self.dfa = dfa
        self.n = n
        d0 = dfa.delta[:, 0]
        d1 = dfa.delta[:, 1]
        cur = np.array([int(a) for a in dfa.accepting], dtype=object)
        rows = [cur]
        for _ in range(n):
            cur = cur[d0] + cur[d1]
            rows.append(cur)
        self.rows = rows

    def __call__(self, q: int, i: int) -> int:
        return int(self.rows[i][q])

    @property
    def total(self) -> int:
        return self(self.dfa.start, self.n)


def count_table(dfa: Dfa, n: int) -> CountTable:
    return CountTable(dfa, n)


def rank(dfa: Dfa, T: CountTable, x: str) -> int:
    n = T.n
    if len(x) != n:
        raise ValueError(f"expected length {n}, got {len(x)}")
    q, c = dfa.start, 0
    d = dfa.trans
    for i, ch in enumerate(x, 1):
        if ch == "1":
            c += T(d[q][0], n - i)
            q = d[q][1]
        else:
            q = d[q][0]
    if not dfa.accepting[q]:
        raise ValueError("word not accepted")
    return c


def unrank(dfa: Dfa, T: CountTable, c: int, n: int | None = None) -> str:
    n = T.n if n is None else n
    if n != T.n:
        raise ValueError("count table built for a different length")
    if not 0 <= c < T.total:
        raise ValueError(f"index {c} out of range [0, {T.total})")
    q = dfa.start
    d = dfa.trans
    out = []
    for i in range(1, n + 1):
        z = T(d[q][0], n - i)
        if c < z:
            out.append("0")
            q = d[q][0]
        else:
            c -= z
            out.append("1")
            q = d[q][1]
    return "".join(out)


class Enumerator:
    """A DFA together with its count table for one block length."""

    def __init__(self, dfa: Dfa, n: int):
        self.dfa = dfa
        self.n = n
        self.table = CountTable(dfa, n)

    @property
    def size(self) -> int:
        return self.table.total

    @property
    def capacity_bits(self) -> int:
        """Largest m with 2^m <= number of accepted words."""
        return self.size.bit_length() - 1

    def rank(self, x: str) -> int:
        return rank(self.dfa, self.table, x)

    def unrank(self, c: int) -> str:
        return unrank(self.dfa, self.table, c, self.n)

    def encode_bits(self, msg: str, m: int | None = None) -> str:
        m = self.capacity_bits if m is None else m
        if len(msg) != m:
            raise ValueError(f"message must have {m} bits")
        return self.unrank(bits_to_int(msg))

    def decode_bits(self, x: str, m: int | None = None) -> str:
        m = self.capacity_bits if m is None else m
        return int_to_bits(self.rank(x), m)


# -- the C_eps family -----------------------------------------------------------


@dataclass(frozen=True)
class CepsParams:
    n: int
    k: int
    l: int
    w: int
    rmax: int
    lmax: int

    def __post_init__(self):
        if not 1 <= self.l < self.k:
            raise ValueError("need 1 <= l < k")
        if not self.l <= self.w:
            raise ValueError("need l <= w")
        if self.k > self.lmax:
            raise ValueError("need k <= lmax")
        if self.rmax < 0:
            raise ValueError("rmax must be >= 0")

    @classmethod
    def from_rates(cls, n: int, C: float, eps: float) -> "CepsParams":
        """Parameters from the asymptotic recipe, rounded up to integers."""
        lg = math.log2(n)
        k = math.ceil(C * lg)
        l = math.ceil((1 + eps / 2) * lg) - k
        w = min(n, math.ceil(n ** (1 - C + eps)))
        return cls(n, k, l, w, int(n * lg / 2**k), math.ceil(2 * lg))

    @classmethod
    def standard(cls, n: int, k: int, l: int, w: int) -> "CepsParams":
        lg = math.log2(n)
        return cls(n, k, l, w, int(n * lg / 2**k), math.ceil(2 * lg))

    def state_bound(self) -> int:
        return 2 + (self.rmax + 1) * self.lmax * (self.k + 1) * self.w**2 * 2


def ceps_predicate(x: str, p: CepsParams) -> bool:
    """Direct check of the four C_eps properties (brute-force oracle)."""
    runs = decompose_runs(x)
    if sum(r.len >= p.k for r in runs) > p.rmax:
        return False
    if any(r.len >= p.lmax for r in runs):
        return False
    if "0" * p.k + "1" * p.l in x or "1" * p.k + "0" * p.l in x:
        return False
    zl, ol = "0" * p.l, "1" * p.l
    for i in range(len(x) - p.w + 1):
        win = x[i : i + p.w]
        if zl not in win or ol not in win:
            return False
    return True


def _ceps_step(p: CepsParams, compact: bool):
    k, l, w = p.k, p.l, p.w

    def step(s, a):
        if s == ():
            q1, q2, q3, q4, q5 = 0, 1, 0, 1, 1
        elif a == s[5]:
            q1, q2, q3, q4, q5, _ = s
            q1 += q2 == k - 1
            q2, q4, q5 = q2 + 1, q4 + 1, q5 + 1
        else:
            q1, q2, q3, q4, q5, _ = s
            q2, q3, q4, q5 = 1, min(q2, k), q4 + 1, q5 + 1
        # a run of the current bit reaching length l resets that bit's window
        if q2 >= l:
            if a == 0:
                q4 = l - 1
            else:
                q5 = l - 1
        if q1 > p.rmax or q2 >= p.lmax or (q2 == l and q3 == k) or q4 >= w or q5 >= w:
            return None
        if compact:
            # only "previous run >= k" matters, and only until the run reaches l
            q3 = k if (q3 == k and q2 < l) else 0
        return (q1, q2, q3, q4, q5, a)

    return step


def build_dfa_Ceps(p: CepsParams, compact: bool = True) -> Dfa:
    """Automaton for C_eps.

    With ``compact`` the previous-run register keeps only whether that run was
    long, which is all the acceptance test ever reads.
    """
    return build_dfa((), _ceps_step(p, compact), lambda s: s != ())


def regular_predicate(x: str, d: int) -> bool:
    return all("00" in x[i : i + d] and "11" in x[i : i + d] for i in range(len(x) - d + 1))


def build_dfa_Ceps_prime(p: CepsParams, d_window: int, compact: bool = True) -> Dfa:
    """C_eps intersected with: every length-d_window window has 00 and 11.

    Two extra registers hold the length of the longest window ending here
    without a 00 (resp. 11).
    """
    if d_window < 4:
        raise ValueError("d_window must be >= 4")
    if p.l >= 2 and d_window >= p.w:
        # every w-window already holds 0^l and 1^l, hence 00 and 11
        return build_dfa_Ceps(p, compact)
    base = _ceps_step(p, compact)

    def step(s, a):
        if s == ():
            q = base((), a)
            return None if q is None else (q, 1, 1)
        q, g0, g1 = s
        prev = q[5]
        nq = base(q, a)
        if nq is None:
            return None
        g0 = 1 if (a == 0 and prev == 0) else g0 + 1
        g1 = 1 if (a == 1 and prev == 1) else g1 + 1
        if g0 >= d_window or g1 >= d_window:
            return None
        return (nq, g0, g1)

    return build_dfa((), step, lambda s: s != ())


def build_pattern_avoider(P, n: int | None = None, end_forbidden=()) -> Dfa:
    """Automaton accepting exactly the words avoiding every pattern of P.

    Patterns in ``end_forbidden`` may occur anywhere except as a suffix of the
    whole word. ``n`` is accepted for interface symmetry; the automaton does
    not depend on it.
    """
    forb = frozenset(P.patterns if isinstance(P, PatternSet) else P)
    tail = frozenset(end_forbidden)
    if not forb:
        raise ValueError("empty pattern set")
    ps = PatternSet(forb | tail)
    m = len(ps.goto)
    delta = np.zeros((m + 1, 2), dtype=np.int64)
    dead = [bool(e & forb) for e in ps.ends]
    for s in range(m):
        for b in (0, 1):
            t = ps.goto[s][b]
            delta[s + 1, b] = REJECT if dead[t] else t + 1
    acc = np.array([False] + [not d and not (e & tail) for d, e in zip(dead, ps.ends)], dtype=bool)
    return Dfa(delta, acc, 1)


def count_accepted(dfa: Dfa, n: int) -> int:
    return CountTable(dfa, n).total


# -- runlength-limited maps ------------------------------------------------------
#
# rll_encode works on the difference string z (z_i = y_i xor y_{i-1}): a run of
# length L in y is a 1 followed by L-1 zeros in z, so bounding zero-runs of z
# bounds both kinds of runs in y. Zero-runs of z are removed by sequence
# replacement: every 0^q found while scanning x is cut out and a q-bit record
# "1 <pos> 1 0" is appended after a terminating flag bit 1.


def _rll_q(l: int) -> tuple[int, int]:
    r = clog2(max(l, 1))
    return r, r + 3


def rll_max_run(l: int) -> int:
    """Run-length guarantee of rll_encode on length-l inputs."""
    return clog2(max(l, 1)) + 3


def rll_encode(x: str) -> str:
    check_bits(x)
    l = len(x)
    r, q = _rll_q(l)
    kept: list[str] = []
    zeros = 0
    records = []
    for c in x:
        kept.append(c)
        zeros = zeros + 1 if c == "0" else 0
        if zeros == q:
            del kept[-q:]
            pos = len(kept)
            records.append("1" + (format(pos, "b").zfill(r) if r else "") + "10")
            zeros = 0
            for ch in reversed(kept):
                if ch != "0":
                    break
                zeros += 1
    z = "".join(kept) + "1" + "".join(records)
    out = []
    prev = 0
    for c in z:
        prev ^= c == "1"
        out.append("01"[prev])
    return "".join(out)


def rll_decode(y: str) -> str:
    check_bits(y)
    if not y:
        raise ValueError("empty codeword")
    l = len(y) - 1
    r, q = _rll_q(l)
    z = [y[0]] + ["1" if a != b else "0" for a, b in zip(y, y[1:])]
    records = []
    while z and z[-1] == "0":
        if len(z) < q + 1:
            raise ValueError("not an rll codeword")
        rec = z[-q:]
        del z[-q:]
        records.append(int("".join(rec[1 : 1 + r]), 2) if r else 0)
    if not z or z[-1] != "1":
        raise ValueError("not an rll codeword")
    z.pop()
    for pos in records:
        if pos > len(z):
            raise ValueError("not an rll codeword")
        z[pos:pos] = "0" * q
    x = "".join(z)
    if len(x) != l or rll_encode(x) != y:
        raise ValueError("not an rll codeword")
    return x


RLL_STAR_BLOCKS = 64
RLL_STAR_REDUNDANCY = 2 * RLL_STAR_BLOCKS - 1


def _star_blocks(n: int) -> list[int]:
    m = n - RLL_STAR_REDUNDANCY
    if n < 128 * 64:
        raise ValueError("encode_rll_star needs n >= 8192")
    b = -(-m // RLL_STAR_BLOCKS)
    sizes = [b] * (RLL_STAR_BLOCKS - 1) + [m - b * (RLL_STAR_BLOCKS - 1)]
    return sizes


def encode_rll_star(x: str, n: int | None = None) -> str:
    """Encode len(x) = n - 127 bits into n bits with every run at most log2 n long."""
    n = len(x) + RLL_STAR_REDUNDANCY if n is None else n
    if len(x) != n - RLL_STAR_REDUNDANCY:
        raise ValueError("message must have n - 127 bits")
    parts = []
    pos = 0
    for i, size in enumerate(_star_blocks(n)):
        e = rll_encode(x[pos : pos + size])
        pos += size
        if i:
            parts.append("1" if parts[-1][-1] == "0" else "0")
        parts.append(e)
    return "".join(parts)


def decode_rll_star(y: str) -> str:
    n = len(y)
    out = []
    pos = 0
    for i, size in enumerate(_star_blocks(n)):
        if i:
            pos += 1
        out.append(rll_decode(y[pos : pos + size + 1]))
        pos += size + 1
    return "".join(out)
