"""Binary strings, run decompositions and multi-pattern scanning.

A bit string is an immutable ``str`` over ``'0'`` and ``'1'``. Positions in
this module are 1-indexed.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

_FLIP = str.maketrans("01", "10")


def check_bits(x: str) -> str:
    if not isinstance(x, str) or x.strip("01"):
        raise ValueError(f"not a binary string: {x!r}")
    return x


@dataclass(frozen=True)
class Run:
    bit: str
    start: int  # 1-indexed
    len: int

    @property
    def end(self) -> int:
        """Last position covered by the run (inclusive)."""
        return self.start + self.len - 1


def decompose_runs(x: str) -> list[Run]:
    runs = []
    pos = 1
    for bit, grp in itertools.groupby(x):
        n = sum(1 for _ in grp)
        runs.append(Run(bit, pos, n))
        pos += n
    return runs


def run_lengths(x: str) -> list[int]:
    return [sum(1 for _ in g) for _, g in itertools.groupby(x)]


def max_run(x: str) -> int:
    return max(run_lengths(x), default=0)


def join_runs(runs: Iterable[Run]) -> str:
    return "".join(r.bit * r.len for r in runs)


def complement(x: str) -> str:
    return x.translate(_FLIP)


def complement_set(patterns: Iterable[str]) -> frozenset[str]:
    return frozenset(complement(p) for p in patterns)


def all_strings(n: int) -> Iterator[str]:
    """All binary strings of length n in lexicographic order."""
    for t in itertools.product("01", repeat=n):
        yield "".join(t)


def int_to_bits(v: int, n: int) -> str:
    if v < 0 or v >> n:
        raise ValueError(f"{v} does not fit in {n} bits")
    return format(v, "b").zfill(n) if n else ""


def bits_to_int(x: str) -> int:
    return int(x, 2) if x else 0


class PatternSet:
    """A finite set of binary patterns with an Aho-Corasick scanner.

    States of the automaton are also exposed (``goto``, ``dead``) so that the
    capacity module can build transfer matrices on top of it.
    """

    def __init__(self, patterns: Iterable[str], reduced: bool = False):
        self.patterns = frozenset(check_bits(p) for p in patterns)
        if any(p == "" for p in self.patterns):
            raise ValueError("empty pattern")
        if reduced:
            for a in self.patterns:
                for b in self.patterns:
                    if a != b and a in b:
                        raise ValueError(f"pattern set not reduced: {a!r} in {b!r}")
        self._build()

    def _build(self) -> None:
        children: list[dict[str, int]] = [{}]
        ends: list[set[str]] = [set()]  # patterns that are suffixes of the node's string
        for p in sorted(self.patterns):
            s = 0
            for c in p:
                if c not in children[s]:
                    children.append({})
                    ends.append(set())
                    children[s][c] = len(children) - 1
                s = children[s][c]
            ends[s].add(p)
        nstates = len(children)
        fail = [0] * nstates
        goto = [[0, 0] for _ in range(nstates)]
        q = deque()
        for b, c in enumerate("01"):
            if c in children[0]:
                t = children[0][c]
                goto[0][b] = t
                q.append(t)
        while q:
            s = q.popleft()
            ends[s] |= ends[fail[s]]
            for b, c in enumerate("01"):
                if c in children[s]:
                    t = children[s][c]
                    fail[t] = goto[fail[s]][b]
                    goto[s][b] = t
                    q.append(t)
                else:
                    goto[s][b] = goto[fail[s]][b]
        self.goto = goto
        self.ends = [frozenset(e) for e in ends]
        # length of the shortest pattern ending at each node, 0 if none
        self.match_len = [min(map(len, e), default=0) for e in ends]
        self.dead = [bool(e) for e in ends]

    def find(self, x: str) -> int | None:
        """1-indexed start of the leftmost-ending match, or None."""
        s = 0
        goto, out = self.goto, self.match_len
        for i, c in enumerate(x):
            s = goto[s][c == "1"]
            if out[s]:
                return i + 2 - out[s]
        return None

    def contains_any(self, x: str) -> bool:
        return self.find(x) is not None

    def complement(self) -> "PatternSet":
        return PatternSet(complement_set(self.patterns))

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.patterns, key=lambda p: (len(p), p)))

    def __len__(self) -> int:
        return len(self.patterns)

    def __repr__(self) -> str:
        return f"PatternSet({sorted(self.patterns)!r})"


def contains_any(x: str, patterns: PatternSet | Iterable[str]) -> tuple[bool, int | None]:
    """Whether x contains some pattern, with the 1-indexed position of the first match."""
    ps = patterns if isinstance(patterns, PatternSet) else PatternSet(patterns)
    pos = ps.find(x)
    return pos is not None, pos
