"""
The contextual deletion channel
===============================

A bit is deletable only when it starts a run whose preceding run has at
least k bits. The script lists those positions, applies the extremal channel
(every deletable bit goes) and samples the probabilistic channel.
"""
from ctxdel.channel import ChannelParams, apply_extremal, contextual_positions, deletion_set, sample_channel

x = "0001100111101"
k = 3
print("word       ", x)
print("deletable  ", contextual_positions(x, k), "(1-indexed)")
print("extremal   ", apply_extremal(x, k))

# each deletable bit is dropped independently with probability p
for seed in range(3):
    y, trace = sample_channel(x, ChannelParams(k, 0.5), seed)
    print(f"seed {seed}     {y}  trace {trace.to_json()}")

# Sequential deletions look at the current word, so one deletion can expose
# another. Simultaneous deletions only use positions of the original word.
for mode in ("simultaneous", "sequential"):
    print(mode, "outputs with <= 2 deletions:", len(deletion_set(x, k, 2, mode)))
