"""
Correcting one or two contextual deletions
==========================================

Both codecs encode into a constrained set where the deletable region is
captured by a short subsequence f(x). A VT style hash of f(x) is protected
separately and pins the deletion.
"""
import random

from ctxdel.channel import contextual_positions, delete_at, sequential_traces
from ctxdel.codec_vt import DOUBLE_DESK, SINGLE_DESK, DoubleCodec, SingleCodec

rng = random.Random(0)

single = SingleCodec(SINGLE_DESK)
m = "".join(rng.choice("01") for _ in range(single.msg_bits))
cw = single.encode(m)
pos = contextual_positions(cw, SINGLE_DESK.k)
print(f"single: {single.msg_bits} -> {single.length} bits, {len(pos)} deletable positions")
for q in pos:
    assert single.decode(delete_at(cw, [q])) == m
print("  every single deletion decoded")

double = DoubleCodec(DOUBLE_DESK)
tries = 0
while True:
    tries += 1
    m = "".join(rng.choice("01") for _ in range(double.msg_bits))
    cw = double.encode(m)
    traces = list(sequential_traces(cw, DOUBLE_DESK.k, 2))
    if traces:
        break
print(f"double: {double.msg_bits} -> {double.length} bits, found a word with a deletion pair after {tries} draws")
for positions, y in traces:
    assert double.decode(y) == m
    print("  deleted", positions, "decoded")
