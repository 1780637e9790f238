"""
A zero-error code for the extremal channel
==========================================

Codewords are ranked words of H'_n. The channel output determines the input,
so decoding needs no redundancy beyond the rate loss.
"""
from ctxdel.capacity import ExtremalCode
from ctxdel.channel import apply_extremal

n, k = 16, 2
code = ExtremalCode(n, k)
print(f"n={n} k={k}: {code.size} codewords, {code.msg_bits} message bits")

msg = "1" * (code.msg_bits // 2) + "0" * (code.msg_bits - code.msg_bits // 2)
x = code.encode(msg)
y = apply_extremal(x, k)
print("message ", msg)
print("codeword", x)
print("received", y)
print("decoded ", code.decode(y))
assert code.decode(y) == msg
