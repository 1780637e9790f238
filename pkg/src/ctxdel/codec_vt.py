"""Codecs built on the extraction map f(x).

f(x) keeps, for every long run (length >= k), that run and the runs after it up
to the first opposite-parity run whose length lies in [l, k-1]. Contextual
deletions in a word of C_eps show up as the same number of ordinary deletions in
f(x), so a short syndrome of f(x) is enough to undo them.

Two codecs live here: a single-deletion code that protects a VT syndrome of f
with a short systematic code, and a double-deletion wrapper around any
:class:`TwoDeletionHash`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Protocol

from .bitseq import bits_to_int, check_bits, decompose_runs, int_to_bits
from .channel import contextual_preimages, contextual_insertions, deletion_set
from .constrained import (
    CepsParams,
    Enumerator,
    build_dfa_Ceps,
    build_dfa_Ceps_prime,
    clog2,
    rll_decode,
    rll_encode,
    rll_max_run,
)


class DecodeError(ValueError):
    """Input is not a codeword hit by the promised number of deletions."""


# -- extraction -----------------------------------------------------------------


@dataclass(frozen=True)
class Extraction:
    subseq: str
    segments: tuple[tuple[int, int], ...]  # (1-indexed start in x, length)

    def positions(self) -> list[int]:
        """0-indexed source position of every bit of subseq."""
        return [s - 1 + j for s, ln in self.segments for j in range(ln)]


def extract_f(x: str, k: int, l: int) -> Extraction:
    if not l < k:
        raise ValueError("need l < k")
    runs = decompose_runs(x)
    long = [i for i, r in enumerate(runs) if r.len >= k]
    blocks: list[list[int]] = []
    for s, i in enumerate(long):
        nxt = long[s + 1] if s + 1 < len(long) else len(runs)
        j = nxt - 1
        for jj in range(i + 1, nxt):
            r = runs[jj]
            if r.bit != runs[i].bit and l <= r.len <= k - 1:
                j = jj
                break
        if blocks and blocks[-1][1] + 1 == i:
            blocks[-1][1] = j
        else:
            blocks.append([i, j])
    segs = []
    for i, j in blocks:
        start = runs[i].start
        segs.append((start, runs[j].end - start + 1))
    sub = "".join(x[s - 1 : s - 1 + ln] for s, ln in segs)
    return Extraction(sub, tuple(segs))


def reinsert(
    y: str,
    f_y: Extraction,
    f_x: str,
    k: int,
    l: int,
    accept: Callable[[str], bool] | None = None,
) -> str:
    """Rebuild x from y, its extraction and the original f(x).

    Every way of aligning f_y.subseq inside f_x names the bits to put back and
    where, in f coordinates. Each such slot is mapped to y (a slot on a segment
    boundary may sit at the end of one segment or the start of the next) and a
    candidate survives only if it reproduces f_x, can reach y through t
    contextual deletions and passes ``accept``.
    """
    t = len(f_x) - len(f_y.subseq)
    if t < 0:
        raise DecodeError("f(x) shorter than f(y)")
    if t == 0:
        if f_x != f_y.subseq:
            raise DecodeError("f mismatch with no deletions")
        return y
    pos = f_y.positions()
    fy = f_y.subseq
    found: set[str] = set()
    for dels in itertools.combinations(range(len(f_x)), t):
        rest = "".join(c for i, c in enumerate(f_x) if i not in dels)
        if rest != fy:
            continue
        # slot of each inserted bit in f_y coordinates
        slots = [d - i for i, d in enumerate(dels)]
        choices = []
        for s in slots:
            opts = set()
            if s > 0:
                opts.add(pos[s - 1] + 1)
            if s < len(pos):
                opts.add(pos[s])
            if not pos:
                opts.update(range(len(y) + 1))
            choices.append(sorted(opts))
        for ys in itertools.product(*choices):
            if any(a > b for a, b in zip(ys, ys[1:])):
                continue
            out, prev = [], 0
            for yp, d in zip(ys, dels):
                out.append(y[prev:yp])
                out.append(f_x[d])
                prev = yp
            out.append(y[prev:])
            found.add("".join(out))
    good = [
        x
        for x in sorted(found)
        if extract_f(x, k, l).subseq == f_x
        and (accept is None or accept(x))
        and y in deletion_set(x, k, t)
    ]
    if len(good) != 1:
        raise DecodeError(f"{len(good)} reinsertion candidates")
    return good[0]


# -- VT syndromes -----------------------------------------------------------------


def vt_syndrome(w: str, modulus: int | None = None) -> int:
    m = len(w) + 1 if modulus is None else modulus
    return sum(i for i, c in enumerate(w, 1) if c == "1") % m


def vt_decode(y: str, a: int, modulus: int | None = None) -> str:
    """Undo one deletion given the syndrome a of the original word.

    The modulus must be at least len(original) + 1 (default len(y) + 2).
    """
    n = len(y) + 1
    m = n + 1 if modulus is None else modulus
    if m < n + 1:
        raise ValueError("modulus too small")
    wt = y.count("1")
    delta = (a - vt_syndrome(y, m)) % m
    if delta <= wt:
        # a 0 with delta ones to its right
        ones = 0
        for i in range(len(y), -1, -1):
            if ones == delta:
                return y[:i] + "0" + y[i:]
            if i and y[i - 1] == "1":
                ones += 1
    else:
        zeros_left = delta - wt - 1
        zeros = 0
        for i in range(len(y) + 1):
            if zeros == zeros_left:
                return y[:i] + "1" + y[i:]
            if y[i] == "0":
                zeros += 1
    raise DecodeError("syndrome inconsistent with one deletion")


# -- short single-deletion code ----------------------------------------------------


def short_encode(h: str) -> str:
    """h followed by its VT syndrome with every syndrome bit tripled."""
    check_bits(h)
    sb = clog2(len(h) + 1)
    s = int_to_bits(vt_syndrome(h), sb) if sb else ""
    return h + "".join(c * 3 for c in s)


def short_len(hbits: int) -> int:
    return hbits + 3 * clog2(hbits + 1)


def short_decode(y: str, hbits: int) -> str:
    """Recover h from short_encode(h) with exactly one bit deleted."""
    sb = clog2(hbits + 1)
    if len(y) != short_len(hbits) - 1:
        raise DecodeError("short code length mismatch")
    if hbits == 0:
        return ""
    # the last 3*sb - 1 bits are the tripled syndrome minus one bit either way
    tail = y[len(y) - (3 * sb - 1) :] if sb else ""
    s = "".join(r.bit * -(-r.len // 3) for r in decompose_runs(tail))
    if len(s) != sb:
        raise DecodeError("damaged syndrome")
    return vt_decode(y[: hbits - 1], bits_to_int(s) if sb else 0, hbits + 1)


# -- single contextual deletion ----------------------------------------------------


class SingleCodec:
    """Corrects one contextual deletion (threshold k > 2).

    Codeword: x ∘ b b (1-b) ∘ short(h) with x in C_eps, b the complement of the
    last bit of x and h the VT syndrome of f(x) modulo m_VT.
    """

    def __init__(self, params: CepsParams, msg_bits: int | None = None):
        if params.k <= 2:
            raise ValueError("single codec needs k > 2")
        self.params = params
        self.dfa = build_dfa_Ceps(params)
        self.enum = Enumerator(self.dfa, params.n)
        self.m_vt = params.rmax * (params.lmax + params.w) + 1
        self.h_bits = clog2(self.m_vt)
        self.msg_bits = params.n - 1 if msg_bits is None else msg_bits
        if self.enum.capacity_bits < self.msg_bits:
            raise ValueError(
                f"infeasible: C_eps holds 2^{self.enum.capacity_bits} words, need 2^{self.msg_bits}"
            )
        self.short_len = short_len(self.h_bits)

    @property
    def length(self) -> int:
        return self.params.n + 3 + self.short_len

    @property
    def red_short(self) -> int:
        return self.short_len - self.h_bits

    @property
    def redundancy(self) -> int:
        return self.length - self.msg_bits

    def syndrome(self, x: str) -> int:
        p = self.params
        return vt_syndrome(extract_f(x, p.k, p.l).subseq, self.m_vt)

    def encode(self, msg: str) -> str:
        check_bits(msg)
        if len(msg) != self.msg_bits:
            raise ValueError(f"message must have {self.msg_bits} bits")
        x = self.enum.unrank(bits_to_int(msg))
        h = int_to_bits(self.syndrome(x), self.h_bits)
        b = "1" if x[-1] == "0" else "0"
        return x + b + b + ("1" if b == "0" else "0") + short_encode(h)

    def candidates(self, y: str) -> list[str]:
        """All words of C_eps consistent with y (exactly one for a valid input)."""
        n, k = self.params.n, self.params.k
        if len(y) == self.length:
            x = y[:n]
            return [x] if self.dfa.accepts(x) else []
        if len(y) != self.length - 1:
            raise DecodeError("wrong length")
        h = bits_to_int(short_decode(y[len(y) - (self.short_len - 1) :], self.h_bits))
        run = next(r for r in decompose_runs(y) if r.start <= n + 1 <= r.end)
        p = y[: run.start - 1] if run.len <= 2 else y[: run.end - 2]
        if len(p) == n:
            return [p] if self.dfa.accepts(p) and self.syndrome(p) == h else []
        if len(p) != n - 1:
            return []
        # the deleted bit opened a run after a long one: put it back there
        return [
            c
            for c in sorted(contextual_insertions(p, k))
            if self.dfa.accepts(c) and self.syndrome(c) == h
        ]

    def decode(self, y: str) -> str:
        check_bits(y)
        c = self.candidates(y)
        if len(c) != 1:
            raise DecodeError(f"{len(c)} candidates pass")
        return self.enum.decode_bits(c[0], self.msg_bits)


@lru_cache(maxsize=8)
def single_codec(params: CepsParams, msg_bits: int | None = None) -> SingleCodec:
    return SingleCodec(params, msg_bits)


def encode_single(msg: str, params: CepsParams) -> str:
    return single_codec(params).encode(msg)


def decode_single(y: str, params: CepsParams) -> str:
    return single_codec(params).decode(y)


# -- two-deletion hashes ------------------------------------------------------------


class TwoDeletionHash(Protocol):
    bits: int

    def hash(self, w: str) -> str: ...

    def decode(self, y: str, h: str) -> str: ...


def _helberg_weights(n: int) -> list[int]:
    v = [0, 0]
    for _ in range(n + 1):
        v.append(1 + v[-1] + v[-2])
    return v[2:]  # v[i-1] is the weight of position i


class HelbergHash:
    """Two-deletion hash: |w| mod 3 plus a Helberg weighted syndrome.

    Weights v_i = 1 + v_{i-1} + v_{i-2} make the syndrome modulo v_{N+1}
    two-deletion-correcting for every length up to N, with no regularity
    assumption. Decoding scans the insertion ball of the received word.
    Costs about 0.69 bits per input bit, so it only suits short f(x).
    """

    def __init__(self, max_len: int):
        self.max_len = max_len
        v = _helberg_weights(max_len)
        self.v = v[:max_len]
        self.modulus = v[max_len]
        self.res_bits = clog2(self.modulus)
        self.bits = 2 + self.res_bits

    def _res(self, w: str) -> int:
        return sum(vi for vi, c in zip(self.v, w) if c == "1") % self.modulus

    def hash(self, w: str) -> str:
        if len(w) > self.max_len:
            raise ValueError(f"word longer than {self.max_len}")
        return int_to_bits(len(w) % 3, 2) + int_to_bits(self._res(w), self.res_bits)

    def decode(self, y: str, h: str) -> str:
        if len(h) != self.bits:
            raise DecodeError("hash length mismatch")
        t = (bits_to_int(h[:2]) - len(y)) % 3
        target = bits_to_int(h[2:])
        n = len(y) + t
        if n > self.max_len:
            raise DecodeError("too long")
        M, v = self.modulus, self.v
        # pre[s][p]: weighted sum of y[:p] when every bit is shifted right by s
        pre = []
        for s in range(t + 1):
            acc, row = 0, [0]
            for q, c in enumerate(y):
                if c == "1":
                    acc += v[q + s]
                row.append(acc)
            pre.append(row)
        yl = len(y)
        hits: set[str] = set()
        if t == 0:
            if self._res(y) == target:
                hits.add(y)
        elif t == 1:
            for a in range(yl + 1):
                base = pre[0][a] + pre[1][yl] - pre[1][a]
                for c in (0, 1):
                    if (base + c * v[a]) % M == target:
                        hits.add(y[:a] + "01"[c] + y[a:])
        else:
            for a in range(yl + 1):
                left = pre[0][a]
                for b in range(a, yl + 1):
                    base = left + pre[1][b] - pre[1][a] + pre[2][yl] - pre[2][b]
                    for c1 in (0, 1):
                        for c2 in (0, 1):
                            if (base + c1 * v[a] + c2 * v[b + 1]) % M == target:
                                hits.add(y[:a] + "01"[c1] + y[a:b] + "01"[c2] + y[b:])
        if len(hits) != 1:
            raise DecodeError(f"{len(hits)} words match the hash")
        return hits.pop()


# -- double contextual deletion ------------------------------------------------------


def window_property(x: str, W: int) -> bool:
    """Every length-W window of x holds both 00 and 11."""
    return all("00" in x[i : i + W] and "11" in x[i : i + W] for i in range(len(x) - W + 1))


class DoubleCodec:
    """Corrects up to two contextual deletions.

    Codeword: E(h2) ∘ (1 - x_1) ∘ x with x in C'_eps and h2 the two-deletion
    hash of f(x). The header has no run of length k-1, so no deletion can land
    before x.
    """

    def __init__(
        self,
        params: CepsParams,
        d_window: int | None = None,
        hash2: TwoDeletionHash | None = None,
        msg_bits: int | None = None,
    ):
        p = params
        self.params = p
        self.d_window = p.w if d_window is None else d_window
        self.dfa = build_dfa_Ceps_prime(p, self.d_window)
        self.enum = Enumerator(self.dfa, p.n)
        self.hash2 = HelbergHash(p.rmax * (p.lmax + p.w)) if hash2 is None else hash2
        if rll_max_run(self.hash2.bits) >= p.k - 1:
            raise ValueError(
                f"infeasible: header runs up to {rll_max_run(self.hash2.bits)}, need < k-1"
            )
        self.header_len = self.hash2.bits + 1
        self.msg_bits = self.enum.capacity_bits if msg_bits is None else msg_bits
        if self.enum.capacity_bits < self.msg_bits or self.msg_bits < 1:
            raise ValueError("infeasible: C'_eps too small")

    @property
    def length(self) -> int:
        return self.header_len + 1 + self.params.n

    @property
    def redundancy(self) -> int:
        return self.length - self.msg_bits

    def encode(self, msg: str) -> str:
        check_bits(msg)
        if len(msg) != self.msg_bits:
            raise ValueError(f"message must have {self.msg_bits} bits")
        p = self.params
        x = self.enum.unrank(bits_to_int(msg))
        h2 = self.hash2.hash(extract_f(x, p.k, p.l).subseq)
        return rll_encode(h2) + ("1" if x[0] == "0" else "0") + x

    def decode(self, y: str) -> str:
        check_bits(y)
        p = self.params
        t = self.length - len(y)
        if not 0 <= t <= 2:
            raise DecodeError("wrong length")
        try:
            h2 = rll_decode(y[: self.header_len])
        except ValueError as e:
            raise DecodeError("damaged header") from e
        tail = y[self.header_len + 1 :]
        try:
            fy = extract_f(tail, p.k, p.l)
            fx = self.hash2.decode(fy.subseq, h2)
            x = reinsert(tail, fy, fx, p.k, p.l, accept=self.dfa.accepts)
        except DecodeError:
            # a cascade (a deletion enabled by an earlier one) can make f(tail)
            # more than a t-deletion of f(x); match the hash over all preimages
            x = self._search(tail, h2, t)
        return self.enum.decode_bits(x, self.msg_bits)

    def _search(self, tail: str, h2: str, t: int) -> str:
        p = self.params
        hits = [
            x
            for x in sorted(contextual_preimages(tail, p.k, t))
            if self.dfa.accepts(x) and self.hash2.hash(extract_f(x, p.k, p.l).subseq) == h2
        ]
        if len(hits) != 1:
            raise DecodeError(f"{len(hits)} preimages match the hash")
        return hits[0]


@lru_cache(maxsize=8)
def double_codec(params: CepsParams, d_window: int | None = None) -> DoubleCodec:
    return DoubleCodec(params, d_window)


def encode_double(msg: str, params: CepsParams, hash2: TwoDeletionHash | None = None) -> str:
    codec = double_codec(params) if hash2 is None else DoubleCodec(params, hash2=hash2)
    return codec.encode(msg)


def decode_double(y: str, params: CepsParams, hash2: TwoDeletionHash | None = None) -> str:
    codec = double_codec(params) if hash2 is None else DoubleCodec(params, hash2=hash2)
    return codec.decode(y)


# desk parameters used by the tests, demos and CLI defaults
SINGLE_DESK = CepsParams(n=256, k=8, l=2, w=40, rmax=4, lmax=12)
DOUBLE_DESK = CepsParams(n=128, k=11, l=2, w=24, rmax=2, lmax=14)
