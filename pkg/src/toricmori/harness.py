"""Verification harness: theorem checks, invariants and expected values.

Every check yields a :class:`~toricmori.mori.Check`; a fan passes when all
of them hold.  The same functions back ``toricmori verify`` and the test
suite.
"""

import random

from .constructions import corpus
from .divisor import (
    canonical_divisor,
    cartier_index,
    discrepancies,
    linearly_equivalent,
    prime_divisor,
    principal_divisor,
    pullback,
    sections_count,
    top_self_intersection,
)
from .document import FanDocument, parse_divisor
from .errors import ToricError
from .fan import is_isomorphic, refinement_map, star_subdivision, validate_fan, walls
from .intersect import fake_wps_audit, fan_weights, wall_degree
from .lattice import lattice_index, primitive, rank
from .mori import (
    Check,
    adjoint_report,
    bundle_structure,
    contract_ray,
    is_nef,
    mori_cone,
    nef_by_rays,
    nef_threshold,
    ray_length,
    reid_profile,
    theorem_suite,
)

SUITES = ("all", "lengths", "adjoint", "fakewps")


def _mori_ready(F):
    r = validate_fan(F)
    return r.is_fan and r.is_simplicial and (r.is_complete or r.is_convex_support)


# ---------------------------------------------------------------------------
# suites


def length_checks(F, delta=None):
    if not _mori_ready(F):
        return []
    return theorem_suite(F, delta).checks


def adjoint_checks(F, D):
    """pe <=> nef for K + (n-1)D, and nefness away from projective bundles."""
    if D is None or not F.is_complete or not F.is_simplicial:
        return []
    n = F.rank
    rep = adjoint_report(F, D, n - 1)
    out = [Check("adjoint_pe_iff_nef", -1, rep.consistent, f"pe={rep.pe} nef={rep.nef}")]
    if F.n_rays - n >= 2 and not bundle_structure(F).is_bundle:
        out.append(Check("adjoint_nef_off_bundles", -1, rep.nef, f"nef={rep.nef}"))
    return out


def fakewps_checks(F):
    if F.n_rays != F.rank + 1 or not _mori_ready(F) or not F.is_complete:
        return []
    audit = fake_wps_audit(F)
    return [
        Check("fakewps_bound", -1, audit.bound_holds, f"distinguished={audit.distinguished.degree}"),
        Check("fakewps_equality", -1, audit.equality_consistent, f"weights={audit.weights}"),
        Check("fakewps_oracle", -1, audit.oracle_agrees, "support function vs multiplicity ratio"),
    ]


def invariant_checks(F, seed=0, samples=10):
    """Chart symmetry, principal divisors, support-function reproduction, nef duality."""
    if not _mori_ready(F):
        return []
    out = []
    K = canonical_divisor(F)
    interior = [w for w in walls(F) if w.interior]
    sym = all(wall_degree(F, K, w) == wall_degree(F, K, w, swap=True) for w in interior)
    out.append(Check("chart_symmetry", -1, sym))
    rng = random.Random(seed)
    principal = True
    for _ in range(samples):
        u = [rng.randint(-5, 5) for _ in range(F.rank)]
        P = principal_divisor(F, u)
        principal = principal and all(wall_degree(F, P, w) == 0 for w in interior)
    out.append(Check("principal_degree_zero", -1, principal))
    nef_ok = True
    for _ in range(samples):
        D = type(K)([rng.randint(-3, 3) for _ in range(F.n_rays)])
        nef_ok = nef_ok and is_nef(F, D) == nef_by_rays(F, D)
    out.append(Check("nef_duality", -1, nef_ok))
    out.append(Check("pullback_functoriality", -1, pullback_functorial(F)))
    doc = FanDocument(F, {"K": K}, {})
    text = doc.to_json()
    out.append(Check("round_trip", -1, FanDocument.from_json(text).to_json() == text))
    return out


def _interior_subdivision(F):
    cone = F.max_cones[0]
    v = [sum(F.rays[i][k] for i in cone) for k in range(F.rank)]
    return star_subdivision(F, primitive(v))


def pullback_functorial(F):
    """(g f)^* = f^* g^* along two successive star subdivisions."""
    if F.rank < 2:
        return True
    G = _interior_subdivision(F)
    H = _interior_subdivision(G)
    gf = refinement_map(H, F)
    f, g = refinement_map(H, G), refinement_map(G, F)
    divisors = [canonical_divisor(F)] + [prime_divisor(F, i) for i in range(F.n_rays)]
    return all(pullback(gf, D) == pullback(f, pullback(g, D)) for D in divisors)


def run_suite(F, suite="all", ample=None, delta=None):
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    checks = []
    report = validate_fan(F)
    checks.append(Check("valid_fan", -1, report.is_fan, "; ".join(report.issues)))
    if not report.is_fan:
        return checks
    if suite in ("all", "lengths"):
        checks += length_checks(F, delta)
    if suite in ("all", "adjoint"):
        checks += adjoint_checks(F, ample)
    if suite in ("all", "fakewps"):
        checks += fakewps_checks(F)
    if suite == "all":
        checks += invariant_checks(F)
    return checks


# ---------------------------------------------------------------------------
# expected values attached by the builders


def _single_ray(F):
    rays = mori_cone(F)
    return rays[0]


def _fibre_ray(F):
    return next(R for R in mori_cone(F) if reid_profile(F, R).kind == "fano")


def _base_discrepancy(ex):
    disc = discrepancies(refinement_map(ex.fan, ex.related["base"]))
    (_, value), = disc
    return value


def _curve(ex):
    wall = frozenset(ex.notes["curve"])
    return next(w for w in walls(ex.fan) if w.wall == wall)


def _sections_divisor(ex):
    return ex.divisors.get("O1") or ex.divisors["D"]


def _mori_generators(ex):
    F = ex.fan
    got = set()
    for R in mori_cone(F):
        got |= {next(iter(w.wall)) for w in R.member_walls}
    want = set()
    for name in ex.expected["mori_generators"]:
        (i,) = ex.divisors[name].support
        want.add(i)
    return got == want


def _nef_generators(ex):
    F = ex.fan
    rays = mori_cone(F)
    rho = F.n_rays - F.rank
    classes = []
    for expr in ex.expected["nef_generators"]:
        D = parse_divisor(expr, F, ex.divisors)
        if not is_nef(F, D):
            return False
        zero = [R.direction for R in rays if R.generator.degree(D) == 0]
        if rank(zero) != rho - 1 if zero else rho != 1:
            return False
        classes.append(tuple(R.generator.degree(D) for R in rays))
    return len(set(tuple(x / max(c) for x in c) for c in classes)) == len(classes)


def _targets(ex):
    from .constructions import weighted_projective_space

    got = [contract_ray(ex.fan, R).target for R in mori_cone(ex.fan)]
    want = [weighted_projective_space(list(w)).fan for w in ex.expected["targets"]]
    return all(any(is_isomorphic(g, t) for g in got) for t in want) and len(got) == len(want)


EXPECTED = {
    "threshold_O1": lambda ex: nef_threshold(ex.fan, ex.divisors["O1"]),
    "threshold": lambda ex: nef_threshold(ex.fan, ex.divisors["D"]),
    "length": lambda ex: min(ray_length(ex.fan, R) for R in mori_cone(ex.fan)),
    "discrepancy": _base_discrepancy,
    "anticanonical_degree": lambda ex: wall_degree(ex.fan, -canonical_divisor(ex.fan), _curve(ex)),
    "E_degree": lambda ex: wall_degree(ex.fan, ex.divisors["E"], _curve(ex)),
    "exceptional_dim": lambda ex: reid_profile(ex.fan, _single_ray(ex.fan)).dimA,
    "antiflip_exceptional_dim": lambda ex: reid_profile(
        ex.related["X_plus"], _single_ray(ex.related["X_plus"])
    ).dimA,
    "fibre_length": lambda ex: ray_length(ex.fan, _fibre_ray(ex.fan)),
    "sections": lambda ex: sections_count(ex.fan, _sections_divisor(ex)),
    "volume": lambda ex: top_self_intersection(ex.fan, _sections_divisor(ex)),
    "lattice_index": lambda ex: lattice_index(ex.fan.rays),
    "anticanonical_multiple": lambda ex: next(
        m
        for m in range(1, 10)
        if linearly_equivalent(ex.fan, -canonical_divisor(ex.fan), ex.divisors["D4"] * m)
    ),
    "cartier_index_D4": lambda ex: cartier_index(ex.fan, ex.divisors["D4"]),
    "cartier_index_E": lambda ex: cartier_index(ex.fan, ex.divisors["E"]),
    "anticanonical_E": lambda ex: wall_degree(ex.fan, -canonical_divisor(ex.fan), _wall_of(ex, "E")),
    "E_squared": lambda ex: wall_degree(ex.fan, ex.divisors["E"], _wall_of(ex, "E")),
    "extremal_rays": lambda ex: len(mori_cone(ex.fan)),
    "targets": lambda ex: tuple(ex.expected["targets"]) if _targets(ex) else None,
    "mori_generators": lambda ex: ex.expected["mori_generators"] if _mori_generators(ex) else None,
    "nef_generators": lambda ex: ex.expected["nef_generators"] if _nef_generators(ex) else None,
    "weights": lambda ex: tuple(sorted(fan_weights(ex.related["contraction"]))),
    "anticanonical_weight": lambda ex: _anticanonical_weight(ex),
}


def _wall_of(ex, name):
    (i,) = ex.divisors[name].support
    return next(w for w in walls(ex.fan) if w.wall == frozenset([i]))


def _anticanonical_weight(ex):
    """-K = O(m) on a weighted projective space: m * D.C / deg D = -K.C on every wall."""
    F = ex.fan
    deg = ex.notes["degree"]
    K = canonical_divisor(F)
    values = {
        wall_degree(F, -K, w) / wall_degree(F, ex.divisors["D"], w) * deg
        for w in walls(F)
        if w.interior
    }
    (value,) = values
    return value


def expected_checks(ex):
    out = []
    for key, want in sorted(ex.expected.items()):
        fn = EXPECTED.get(key)
        if fn is None:
            out.append(Check(f"expected:{key}", -1, False, "no checker registered"))
            continue
        try:
            got = fn(ex)
        except ToricError as exc:
            out.append(Check(f"expected:{key}", -1, False, f"error: {exc}"))
            continue
        out.append(Check(f"expected:{key}", -1, got == want, f"got={got} want={want}"))
    return out


def verify_example(ex, suite="all"):
    ample = ex.divisors.get(ex.ample) if ex.ample else None
    checks = run_suite(ex.fan, suite, ample)
    if suite == "all":
        checks += expected_checks(ex)
    return checks


def verify_corpus(suite="all", examples=None):
    """(example label, checks) for every corpus entry."""
    return [(ex.label, verify_example(ex, suite)) for ex in (examples or corpus())]
