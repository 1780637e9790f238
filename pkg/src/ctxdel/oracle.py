"""Brute-force ground truth for small codes.

Everything here enumerates deletion sets directly through the channel module,
so it is slow by design and meant for lengths up to about 16.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .bitseq import all_strings, check_bits, run_lengths
from .channel import Mode, deletion_set
from .codec_vt import extract_f, vt_syndrome
from .constrained import CepsParams, ceps_predicate


@dataclass(frozen=True)
class CodeBook:
    codewords: frozenset[str]
    n: int
    k: int
    t: int

    def __post_init__(self):
        for c in self.codewords:
            check_bits(c)
            if len(c) != self.n:
                raise ValueError(f"codeword {c!r} does not have length {self.n}")

    @classmethod
    def of(cls, words: Iterable[str], k: int, t: int) -> "CodeBook":
        words = frozenset(words)
        n = len(next(iter(words))) if words else 0
        return cls(words, n, k, t)

    def __len__(self) -> int:
        return len(self.codewords)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: tuple[str, str, str] | None = None  # (c, c', common output)

    def __bool__(self) -> bool:
        return self.ok


def verify_code(C: CodeBook, mode: Mode = "sequential") -> Verdict:
    """True iff no two codewords share an output of <= t contextual deletions."""
    owner: dict[str, str] = {}
    for c in sorted(C.codewords):
        for y in deletion_set(c, C.k, C.t, mode):
            prev = owner.setdefault(y, c)
            if prev != c:
                return Verdict(False, (prev, c, y))
    return Verdict(True)


def r_hat_cap(n: int, k: int) -> int:
    """ceil(n log^2 n / 2^(k-1)), the allowance for total long-run length."""
    if n < 2:
        return 0
    return math.ceil(n * math.log2(n) ** 2 / 2 ** (k - 1))


def in_R_hat(x: str, k: int) -> bool:
    check_bits(x)
    return sum(r for r in run_lengths(x) if r >= k) <= r_hat_cap(len(x), k)


def greedy_gv(n: int, k: int, t: int, mode: Mode = "sequential") -> CodeBook:
    """Lexicographic greedy code inside R_hat: keep x when D_t(x) misses every kept D_t."""
    covered: set[str] = set()
    chosen = []
    for x in all_strings(n):
        if not in_R_hat(x, k):
            continue
        d = deletion_set(x, k, t, mode)
        if covered.isdisjoint(d):
            chosen.append(x)
            covered |= d
    return CodeBook(frozenset(chosen), n, k, t)


def confusion_balls(n: int, k: int, t: int, mode: Mode = "sequential", words=None) -> dict[str, int]:
    """|B_t(x)| for every x: the number of length-n words sharing an output with x."""
    words = list(all_strings(n)) if words is None else list(words)
    dsets = {x: deletion_set(x, k, t, mode) for x in words}
    sources = defaultdict(set)
    for x, d in dsets.items():
        for y in d:
            sources[y].add(x)
    return {x: len(set().union(*(sources[y] for y in d))) for x, d in dsets.items()}


def vt_classes(p: CepsParams, modulus: int | None = None) -> dict[int, CodeBook]:
    """Brute-force C_eps split by the VT syndrome of f(x)."""
    m = p.rmax * (p.lmax + p.w) + 1 if modulus is None else modulus
    groups = defaultdict(list)
    for x in all_strings(p.n):
        if ceps_predicate(x, p):
            groups[vt_syndrome(extract_f(x, p.k, p.l).subseq, m)].append(x)
    return {a: CodeBook(frozenset(ws), p.n, p.k, 1) for a, ws in sorted(groups.items())}


@dataclass(frozen=True)
class BoundsReport:
    """Leading terms only; lower-order o(.) and O(.) parts are left out."""

    n: int
    C: float
    t: int
    log_n: float
    lower: float  # (1 - C) t log n
    upper_gv: float  # 2 (1 - C) t log n
    general_construction: float  # 12 (1 - C) t log n
    single_construction: float | None  # 2 (1 - C) log n, t = 1 only
    constant_regime: bool  # k >= log n: O(1) redundancy for any t
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "C": self.C,
            "t": self.t,
            "log_n": self.log_n,
            "leading_terms": {
                "lower": self.lower,
                "upper_gv": self.upper_gv,
                "general_construction": self.general_construction,
                "single_construction": self.single_construction,
            },
            "constant_regime": self.constant_regime,
            "notes": list(self.notes),
        }


def bounds_report(n: int, t: int, C: float | None = None, k: int | None = None) -> BoundsReport:
    """Evaluate the redundancy bounds at n, t and k = C log n (give C or k)."""
    if n < 2 or t < 0:
        raise ValueError("need n >= 2 and t >= 0")
    lg = math.log2(n)
    if C is None:
        if k is None:
            raise ValueError("give C or k")
        C = k / lg
    scale = max(0.0, 1 - C) * t * lg
    notes = ["asymptotic leading terms, lower-order terms omitted"]
    if C >= 1:
        notes.append("k >= log n: a constant-redundancy code exists for every t")
    return BoundsReport(
        n=n,
        C=C,
        t=t,
        log_n=lg,
        lower=scale,
        upper_gv=2 * scale,
        general_construction=12 * scale,
        single_construction=2 * max(0.0, 1 - C) * lg if t == 1 else None,
        constant_regime=C >= 1,
        notes=tuple(notes),
    )
