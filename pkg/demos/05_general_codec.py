"""
Correcting t contextual deletions
=================================

The general codec masks the message into S_k with a small-bias sequence,
hashes the long-run clusters and protects the hash with a Reed-Solomon
syndrome. Encoding searches mask seeds and takes about a second.
"""
import random

from ctxdel.channel import contextual_positions, delete_at
from ctxdel.codec_t import GENERAL_DESK, GeneralCodec

p = GENERAL_DESK
codec = GeneralCodec(p)
print(p)
print(f"codeword {codec.length} bits, redundancy {codec.redundancy}")

rng = random.Random(5)
m = "".join(rng.choice("01") for _ in range(p.n))
cw = codec.encode(m)
for trial in range(5):
    y = cw
    for _ in range(p.t):
        y = delete_at(y, [rng.choice(contextual_positions(y, p.k))])
    ok = codec.decode(y) == m
    print(f"trace {trial}: {len(cw) - len(y)} deletions, decoded {'ok' if ok else 'WRONG'}")
