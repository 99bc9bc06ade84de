"""A short tour of extremal ray lengths.

Walks three families and prints, for each fan, its extremal rays with the
lengths and contraction types.  Everything is exact: lengths come out as
fractions, and the non-ACC family shows them climbing towards n - 1.

    python3 demos/lengths_tour.py
"""

from toricmori import canonical_divisor, mori_cone, ray_length, reid_profile
from toricmori.constructions import acc_family, flip_family, weighted_blowup_plane


def describe(label, F):
    K = canonical_divisor(F)
    print(f"{label}  (rank {F.rank}, {F.n_rays} rays)")
    for i, R in enumerate(mori_cone(F)):
        p = reid_profile(F, R)
        print(
            f"  ray {i}: K.C = {R.generator.degree(K)}, length {ray_length(F, R)}, "
            f"{p.kind}, dim A = {p.dimA}, dim B = {p.dimB}"
        )


describe("weighted blow-up of the plane", weighted_blowup_plane().fan)
print()

# Blow-ups of 1/(mk+1)(1, k^2, ..., k^2) at fixed n and m: the lengths
# n - 1 - m/k increase with k and never reach n - 1.
n, m = 3, 1
print(f"non-ACC family, n = {n}, m = {m}")
for k in range(1, 7):
    F = acc_family(n, k, m).fan
    (R,) = mori_cone(F)
    print(f"  k = {k}: length {ray_length(F, R)}")
print()

describe("small contraction, n = 4, k = 2, a = 3", flip_family(4, 2, 3).fan)
