"""Contextual deletion channels.

A bit is contextually deletable at threshold ``k`` when it opens a run and the
run just before it has length at least ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .bitseq import all_strings, decompose_runs

Mode = Literal["sequential", "simultaneous"]


@dataclass(frozen=True)
class ChannelParams:
    k: int
    p: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


@dataclass(frozen=True)
class DeletionTrace:
    """Positions are 1-indexed. In sequential mode each position refers to the
    string left by the previous deletions."""

    mode: Mode
    positions: tuple[int, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        # 0-indexed for external consumers
        return {"mode": self.mode, "positions": [p - 1 for p in self.positions]}


def contextual_positions(x: str, k: int) -> list[int]:
    if k < 1:
        raise ValueError("k must be >= 1")
    runs = decompose_runs(x)
    return [runs[i].start for i in range(1, len(runs)) if runs[i - 1].len >= k]


def delete_at(x: str, positions) -> str:
    """Delete the given 1-indexed positions of x simultaneously."""
    drop = set(positions)
    return "".join(c for i, c in enumerate(x, 1) if i not in drop)


def apply_extremal(x: str, k: int) -> str:
    return delete_at(x, contextual_positions(x, k))


def apply_trace(x: str, k: int, trace: DeletionTrace) -> str:
    """Apply a trace, checking each position is eligible when it is used."""
    if trace.mode == "simultaneous":
        elig = set(contextual_positions(x, k))
        if any(p not in elig for p in trace.positions):
            raise ValueError("trace position not eligible")
        return delete_at(x, trace.positions)
    for p in trace.positions:
        if p not in contextual_positions(x, k):
            raise ValueError(f"position {p} not eligible in {x}")
        x = x[: p - 1] + x[p:]
    return x


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))


def sample_channel(x: str, params: ChannelParams, seed: int) -> tuple[str, DeletionTrace]:
    elig = contextual_positions(x, params.k)
    if params.p >= 1.0:
        hit = elig
    elif params.p <= 0.0:
        hit = []
    else:
        u = make_rng(seed).random(len(elig))
        hit = [pos for pos, v in zip(elig, u) if v < params.p]
    return delete_at(x, hit), DeletionTrace("simultaneous", tuple(hit))


def deletion_set(x: str, k: int, t: int, mode: Mode = "sequential") -> set[str]:
    if t < 0:
        raise ValueError("t must be >= 0")
    if mode == "simultaneous":
        from itertools import combinations

        elig = contextual_positions(x, k)
        out = set()
        for r in range(min(t, len(elig)) + 1):
            for sub in combinations(elig, r):
                out.add(delete_at(x, sub))
        return out
    seen = {x}
    frontier = {x}
    for _ in range(t):
        nxt = set()
        for y in frontier:
            for p in contextual_positions(y, k):
                z = y[: p - 1] + y[p:]
                if z not in seen:
                    nxt.add(z)
        seen |= nxt
        frontier = nxt
        if not frontier:
            break
    return seen


def sequential_traces(x: str, k: int, t: int):
    """Yield (trace, output) for every sequential trace of exactly t deletions."""
    if t == 0:
        yield (), x
        return
    for p in contextual_positions(x, k):
        y = x[: p - 1] + x[p:]
        for rest, z in sequential_traces(y, k, t - 1):
            yield (p,) + rest, z


def contextual_insertions(y: str, k: int) -> set[str]:
    """Every x with one contextual deletion taking x to y.

    The removed bit opened a run right after a run of length >= k, so it can only
    be put back after k equal bits, as the complement of the bit before it.
    """
    out = set()
    tail = 0
    for i in range(1, len(y) + 1):
        tail = tail + 1 if i > 1 and y[i - 1] == y[i - 2] else 1
        if tail >= k:
            out.add(y[:i] + ("1" if y[i - 1] == "0" else "0") + y[i:])
    return out


def contextual_preimages(y: str, k: int, t: int) -> set[str]:
    """All x of length |y| + t reaching y by t sequential contextual deletions."""
    layer = {y}
    for _ in range(t):
        layer = {x for z in layer for x in contextual_insertions(z, k)}
    return layer


def inverse_ball(x: str, k: int, t: int, n_src: int, mode: Mode = "sequential") -> set[str]:
    """All length-n_src strings whose deletion set meets that of x. Exhaustive."""
    if n_src < len(x):
        raise ValueError("n_src must be >= |x|")
    if n_src - len(x) > t:
        raise ValueError("n_src - |x| exceeds t")
    dx = deletion_set(x, k, t, mode)
    return {z for z in all_strings(n_src) if not dx.isdisjoint(deletion_set(z, k, t, mode))}
