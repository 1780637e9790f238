"""
Capacity bounds for the extremal channel
========================================

Each bound is log2 of the growth rate of a set of pattern-avoiding words. The
growth rate is the reciprocal of the smallest root of a generating function
denominator, which the transfer matrix counts confirm.
"""
from ctxdel.capacity import PATTERN_SETS, capacity_bounds, coeffs, gen_fn, taylor_counts, transfer_matrix_count

print(" k   rll        baseline   log xi     log nu")
for k in range(2, 6):
    res = capacity_bounds(k, 30)
    print(f"{k:2d}  " + "  ".join(f"{float(res[w].log2_rho):.7f}" for w in ("rll", "baseline", "xi", "nu")))

# denominators are printed with ascending coefficients
print("J denominator, k=2:", coeffs(gen_fn("J", 2).den))

# the series of the rational function counts the words exactly
F = gen_fn("H", 2)
print("series      ", taylor_counts(F, 10))
print("transfer    ", [transfer_matrix_count(PATTERN_SETS["H"](2), n) for n in range(1, 11)])
