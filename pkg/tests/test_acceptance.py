"""Acceptance suite: thirteen exact checks over the families and the corpus.

Each ``criterion_*`` function returns ``(ok, detail)``; the pytest wrappers
assert on it and ``conftest.py`` prints one PASS/FAIL line per criterion.
Run the file directly to get the same lines without pytest.
"""

import random
import sys
import time
from fractions import Fraction
from math import gcd

import pytest

from toricmori.constructions import (
    acc_family,
    blowup_point,
    corpus,
    fake_projective_3fold,
    flip_family,
    p1112,
    projective_bundle,
    quadric_cone,
    quotient_blowup,
    sample_fake_wps,
    twisted_fibration,
    weighted_blowup_plane,
    weighted_projective_space,
)
from toricmori.divisor import (
    Verdict,
    canonical_divisor,
    cartier_index,
    discrepancies,
    global_generation,
    is_cartier,
    is_pseudo_effective,
    linearly_equivalent,
    principal_divisor,
    sections_count,
    top_self_intersection,
    very_ample,
)
from toricmori.fan import is_isomorphic, refinement_map, walls
from toricmori.harness import invariant_checks, pullback_functorial
from toricmori.intersect import fake_wps_audit, wall_degree
from toricmori.lattice import lattice_index
from toricmori.mori import (
    adjoint_report,
    bundle_structure,
    classify_divisorial,
    contract_ray,
    is_ample,
    is_nef,
    is_projective,
    mori_cone,
    nef_by_rays,
    nef_threshold,
    ray_length,
    reid_profile,
)

CORPUS = corpus()


def _wall(F, rays):
    rays = frozenset(rays)
    return next(w for w in walls(F) if w.wall == rays)


# ---------------------------------------------------------------------------
# criteria


def criterion_weighted_blowup_family():
    """Discrepancy, -K.C and E.C on the weighted blow-ups of 1/b(1,a,...,a)."""
    cases = 0
    for n in range(2, 6):
        for a in range(1, 6):
            for b in range(1, 6):
                if gcd(a, b) != 1:
                    continue
                ex = quotient_blowup(n, a, b)
                X, E = ex.fan, ex.divisors["E"]
                ((e, disc),) = discrepancies(refinement_map(X, ex.related["base"]))
                C = _wall(X, list(range(1, n - 1)) + [n])
                K = canonical_divisor(X)
                got = (disc, wall_degree(X, -K, C), wall_degree(X, E, C))
                want = (Fraction(1 + (n - 1) * a, b) - 1, Fraction(n - 1) - Fraction(b - 1, a), Fraction(-b, a))
                if e != n or got != want:
                    return False, f"n={n} a={a} b={b}: got {got}, want {want}"
                cases += 1
    return True, f"{cases} (n,a,b) cases"


def criterion_acc_lengths():
    """Minimal lengths n-1-m/k, strictly increasing in k at fixed (n, m)."""
    realized = {}
    cases = 0
    for n in range(2, 6):
        for k in range(1, 6):
            for m in range(1, k * (n - 1)):
                ex = acc_family(n, k, m)
                X = ex.fan
                rays = mori_cone(X)
                if len(rays) != 1:
                    return False, f"n={n} k={k} m={m}: {len(rays)} extremal rays"
                length = ray_length(X, rays[0])
                if length != Fraction(n - 1) - Fraction(m, k):
                    return False, f"n={n} k={k} m={m}: length {length}"
                realized.setdefault((n, m), []).append((k, length))
                cases += 1
    for (n, m), seq in realized.items():
        seq.sort()
        if any(l1 >= l2 for (_, l1), (_, l2) in zip(seq, seq[1:])):
            return False, f"lengths not increasing in k for n={n} m={m}: {seq}"
    return True, f"{cases} (n,k,m) cases"


def criterion_small_contractions():
    """Flipping contractions: small, exceptional dimension n-k, length n-k+1-k/a, K-positive antiflip."""
    cases = 0
    for n in range(3, 6):
        for k in range(2, n):
            for a in range(1, 5):
                if a * (n - k + 1) <= k:
                    continue
                ex = flip_family(n, k, a)
                X, Xp = ex.fan, ex.related["X_plus"]
                (R,) = mori_cone(X)
                p = reid_profile(X, R)
                con = contract_ray(X, R)
                (Rp,) = mori_cone(Xp)
                checks = (
                    p.kind == "small",
                    set(con.target.rays) == set(X.rays),
                    con.target == ex.related["W"],
                    p.dimA == n - k,
                    ray_length(X, R) == Fraction(n - k + 1) - Fraction(k, a),
                    Rp.generator.degree(canonical_divisor(Xp)) > 0,
                    reid_profile(Xp, Rp).dimA == k - 1,
                )
                if not all(checks):
                    return False, f"n={n} k={k} a={a}: {checks}"
                cases += 1
    return True, f"{cases} (n,k,a) cases"


def criterion_fake_wps_bound(count=240, seed=2024):
    """Random fake weighted projective spaces: min wall degree <= n+1 with rigid equality."""
    sample = sample_fake_wps(count, 4, seed=seed)
    equalities = 0
    for ex in sample:
        F = ex.fan
        audit = fake_wps_audit(F)
        n = F.rank
        if audit.min_degree > n + 1 or audit.distinguished.degree > n + 1:
            return False, f"{F.rays}: degree above {n + 1}"
        if audit.distinguished.closed_form != audit.distinguished.degree:
            return False, f"{F.rays}: closed form disagrees"
        for degree in {audit.min_degree, audit.distinguished.degree}:
            if degree == n + 1:
                equalities += 1
                if any(a != 1 for a in audit.weights) or audit.distinguished.mult_ratio != 1:
                    return False, f"{F.rays}: equality without unit weights and multiplicities"
    return True, f"{len(sample)} fans, {equalities} equality cases"


def criterion_length_bounds():
    """Birational, divisorial and small length bounds plus the equality classification."""
    rays = 0
    for ex in CORPUS:
        F = ex.fan
        n = F.rank
        for R in mori_cone(F):
            p = reid_profile(F, R)
            length = ray_length(F, R)
            if length <= 0 or not p.birational:
                continue
            rays += 1
            if not length < p.d + 1:
                return False, f"{ex.label}: l={length} d={p.d}"
            if p.kind == "divisorial" and p.d == n - 1:
                if length > n - 1:
                    return False, f"{ex.label}: divisorial length {length}"
                if length == n - 1:
                    cls = classify_divisorial(F, R)
                    if cls is None or not cls.is_weighted_blowup:
                        return False, f"{ex.label}: unclassified extremal divisorial ray"
            if p.kind == "small" and not length < n - 1:
                return False, f"{ex.label}: small length {length}"
    return True, f"{rays} K-negative birational rays over {len(CORPUS)} entries"


def criterion_adjoint_pe_iff_nef():
    """K+(n-1)D pseudo-effective iff nef; the constant n-1 is sharp."""
    tested = 0
    for ex in CORPUS:
        F = ex.fan
        if not ex.ample or not F.is_complete or not F.is_simplicial or not is_projective(F):
            continue
        D = ex.divisors[ex.ample]
        if not is_cartier(F, D) or not is_ample(F, D):
            continue
        rep = adjoint_report(F, D, F.rank - 1)
        if rep.pe != rep.nef:
            return False, f"{ex.label}: pe={rep.pe} nef={rep.nef}"
        tested += 1
    for n in (3, 4):
        ex = blowup_point(n)
        F, D = ex.fan, ex.divisors["D"]
        K = canonical_divisor(F)
        if nef_threshold(F, D) != n - 1:
            return False, f"threshold on blow-up of P^{n}"
        if sections_count(F, K + D) < 1 or is_nef(F, K + D) or not is_pseudo_effective(F, K + D):
            return False, f"K+D on blow-up of P^{n} is not an effective non-nef class"
    return True, f"{tested} marked ample entries; sharp on two blow-ups"


def criterion_long_rays_on_bundles():
    """Rays longer than n-1 only on P^{n-1}-bundles over P^1."""
    long_rays = 0
    for ex in CORPUS:
        F = ex.fan
        n = F.rank
        for R in mori_cone(F):
            if ray_length(F, R) > n - 1 and F.n_rays - n >= 2:
                long_rays += 1
                if F.n_rays - n != 2 or not bundle_structure(F).is_bundle:
                    return False, f"{ex.label}: long ray off a bundle"
    F = projective_bundle(3, [0, 0, 2]).fan
    fibre = [R for R in mori_cone(F) if reid_profile(F, R).kind == "fano"]
    if not bundle_structure(F).is_bundle or max(ray_length(F, R) for R in fibre) != 3:
        return False, "fibre ray of P(O+O+O(2)) should have length 3"
    T = twisted_fibration().fan
    if bundle_structure(T).is_bundle or max(ray_length(T, R) for R in mori_cone(T)) != 1:
        return False, "twisted fibration should be a non-bundle with length 1"
    return True, f"{long_rays} long rays in the corpus, all on bundles"


def criterion_quadric_cones():
    """P(1,1,2,...,2) with D = O(2): n+2 sections, D^n = 2, very ample."""
    for n in (2, 3):
        ex = quadric_cone(n)
        F, D = ex.fan, ex.divisors["D"]
        if F.n_rays - F.rank != 1 or not linearly_equivalent(F, -canonical_divisor(F), D * n):
            return False, f"n={n}: not a Picard-one Fano with -K = nD"
        got = (sections_count(F, D), top_self_intersection(F, D), very_ample(F, D, 12))
        if got != (n + 2, 2, Verdict.YES):
            return False, f"n={n}: got {got}"
    return True, "n = 2, 3"


def criterion_weighted_blowup_plane():
    """-K.E = 1, E^2 = -1/2, Cartier index 2, two rays contracting to P^2 and P(1,1,2)."""
    ex = weighted_blowup_plane()
    F, E = ex.fan, ex.divisors["E"]
    wE = _wall(F, [3])
    K = canonical_divisor(F)
    rays = mori_cone(F)
    targets = [contract_ray(F, R).target for R in rays]
    wanted = [weighted_projective_space([1, 1, 1]).fan, weighted_projective_space([1, 1, 2]).fan]
    got = (wall_degree(F, -K, wE), wall_degree(F, E, wE), cartier_index(F, E), len(rays))
    if got != (1, Fraction(-1, 2), 2, 2):
        return False, f"got {got}"
    if not all(any(is_isomorphic(t, w) for t in targets) for w in wanted):
        return False, "contractions do not land on P^2 and P(1,1,2)"
    return True, "golden values reproduced"


def criterion_fake_projective_3fold():
    """Index-2 ray lattice, -K ~ 4 D_4, Cartier index of D_4 is 2."""
    ex = fake_projective_3fold()
    F, D4 = ex.fan, ex.divisors["D4"]
    got = (
        lattice_index(F.rays),
        linearly_equivalent(F, -canonical_divisor(F), D4 * 4),
        cartier_index(F, D4),
        fake_wps_audit(F).is_weighted_projective_space,
        is_cartier(F, canonical_divisor(F)),
    )
    if got != (2, True, 2, False, True):
        return False, f"got {got}"
    return True, "index 2, -K ~ 4D_4, 2D_4 Cartier"


def criterion_oracle_equivalence(seed=11):
    """Support-function degrees equal the multiplicity-ratio closed form; principal divisors vanish."""
    rng = random.Random(seed)
    fake = 0
    for ex in CORPUS:
        F = ex.fan
        if F.is_complete and F.n_rays == F.rank + 1:
            audit = fake_wps_audit(F)
            if not audit.oracle_agrees:
                return False, f"{ex.label}: oracle mismatch"
            fake += 1
        interior = [w for w in walls(F) if w.interior]
        for _ in range(10):
            u = [rng.randint(-7, 7) for _ in range(F.rank)]
            P = principal_divisor(F, u)
            if any(wall_degree(F, P, w) != 0 for w in interior):
                return False, f"{ex.label}: div(chi^{u}) has nonzero degree"
    return True, f"{fake} fake weighted projective spaces, {len(CORPUS)} fans x 10 characters"


def criterion_generation_desk_cases():
    """Global generation of K+4D on P(1,1,1,2); very ampleness of K+4D with D = -K."""
    ex = p1112()
    F, D = ex.fan, ex.divisors["D"]
    K = canonical_divisor(F)
    if cartier_index(F, D) != 1 or not is_ample(F, D):
        return False, "D = O(2) should be ample Cartier"
    if cartier_index(F, K) == 1:
        return False, "K should not be Cartier on P(1,1,1,2)"
    gg = global_generation(F, K + D * 4)
    ex2 = weighted_blowup_plane()
    F2 = ex2.fan
    K2 = canonical_divisor(F2)
    va = very_ample(F2, K2 + ex2.divisors["D"] * 4)
    if gg != Verdict.YES or va != Verdict.YES:
        return False, f"global_generation={gg} very_ample={va}"
    return True, "both yes"


def criterion_property_suites():
    """Chart symmetry, pullback functoriality, nef duality, serialization round trip."""
    names = ("chart_symmetry", "pullback_functoriality", "nef_duality", "round_trip")
    checked = 0
    for ex in CORPUS:
        F = ex.fan
        results = {c.name: c.holds for c in invariant_checks(F, seed=5)}
        for name in names:
            if not results.get(name, False):
                return False, f"{ex.label}: {name} violated"
        for D in ex.divisors.values():
            if is_nef(F, D) != nef_by_rays(F, D):
                return False, f"{ex.label}: nef duality on a marked divisor"
        if not pullback_functorial(F):
            return False, f"{ex.label}: pullback functoriality"
        checked += 1
    return True, f"{checked} corpus entries, zero violations"


CRITERIA = [
    ("weighted blow-up discrepancies and degrees", criterion_weighted_blowup_family),
    ("non-ACC minimal lengths", criterion_acc_lengths),
    ("small contractions with long rays", criterion_small_contractions),
    ("fake weighted projective space bound", criterion_fake_wps_bound),
    ("birational length bounds over the corpus", criterion_length_bounds),
    ("adjoint pseudo-effective iff nef", criterion_adjoint_pe_iff_nef),
    ("long rays only on projective bundles", criterion_long_rays_on_bundles),
    ("quadric cone sections, degree, very ampleness", criterion_quadric_cones),
    ("weighted blow-up of the plane golden values", criterion_weighted_blowup_plane),
    ("fake projective 3-fold of index two", criterion_fake_projective_3fold),
    ("intersection oracle equivalence", criterion_oracle_equivalence),
    ("global generation and very ampleness desk cases", criterion_generation_desk_cases),
    ("property suites over the corpus", criterion_property_suites),
]


@pytest.mark.parametrize(
    "label,check", CRITERIA, ids=[f"{i:02d}-{fn.__name__[10:]}" for i, (_, fn) in enumerate(CRITERIA, 1)]
)
def test_acceptance(label, check, record_property):
    ok, detail = check()
    record_property("criterion", label)
    record_property("detail", detail)
    assert ok, f"{label}: {detail}"


def main():
    failures = 0
    for i, (label, check) in enumerate(CRITERIA, 1):
        start = time.perf_counter()
        try:
            ok, detail = check()
        except Exception as exc:  # report and keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'} [{i:2d}/{len(CRITERIA)}] {label} -- {detail} ({elapsed:.2f}s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
