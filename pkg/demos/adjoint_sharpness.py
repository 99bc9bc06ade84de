"""Why the coefficient n - 1 in K + (n-1)D cannot be lowered.

On the blow-up of P^n at a torus fixed point take D = f*H - E, which is
ample.  The adjoint divisor K + tD becomes nef exactly at t = n - 1, while
K + D already has sections: for smaller coefficients "effective" and "nef"
part ways.

    python3 demos/adjoint_sharpness.py
"""

from fractions import Fraction

from toricmori import canonical_divisor, is_nef, is_pseudo_effective, nef_threshold
from toricmori.constructions import blowup_point
from toricmori.divisor import sections_count

for n in (2, 3, 4):
    ex = blowup_point(n)
    F, D = ex.fan, ex.divisors["D"]
    K = canonical_divisor(F)
    print(f"blow-up of P^{n} at a point: nef threshold of D = {nef_threshold(F, D)}")
    for t in sorted({Fraction(1, 2), Fraction(1), Fraction(n - 1, 2), Fraction(n - 1)}):
        A = K + D * t
        print(
            f"  t = {t}: pseudo-effective {is_pseudo_effective(F, A)}, nef {is_nef(F, A)}"
            + (f", h0 = {sections_count(F, A)}" if t.denominator == 1 else "")
        )
