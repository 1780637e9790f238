"""
Brute-force checks and redundancy bounds
========================================

verify_code enumerates every output of every codeword. It is the ground truth
the constructions are tested against.
"""
from ctxdel.oracle import CodeBook, bounds_report, greedy_gv, verify_code

v = verify_code(CodeBook.of(["000001", "000010"], k=3, t=1))
print("clashing pair:", v.ok, "witness", v.witness)

C = greedy_gv(12, 3, 1)
print(f"greedy code n=12 k=3 t=1: {len(C)} words, valid {verify_code(C).ok}")

for k in (5, 7, 10):
    r = bounds_report(1024, 2, k=k)
    print(f"k={k:2d}: lower {r.lower:.1f}  GV {r.upper_gv:.1f}  construction {r.general_construction:.1f}"
          f"  constant regime {r.constant_regime}")
