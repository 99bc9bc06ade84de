"""Mori cones, extremal rays, contractions and positivity of divisors.

Everything is computed from the classes of torus-invariant curves V(mu) for
interior walls mu; on complete (or convex-support) simplicial fans these
generate the closed cone of curves.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .divisor import (
    TorusDivisor,
    canonical_divisor,
    is_pseudo_effective,
    q_cartier_data,
    sections_count,
)
from .errors import (
    BadParameters,
    MergeNotAFan,
    NotAmple,
    NotCartier,
    NotComplete,
    NotProjective,
    NotSimplicial,
    ToricError,
    WrongProfile,
)
from .fan import (
    Fan,
    QuotientData,
    is_isomorphic,
    refinement_map,
    star_quotient,
    validate_fan,
    walls,
)
from .intersect import CurveClass, wall_classes, wall_degree
from .lattice import lcm_list, primitive, rank, saturation_quotient, solve, vec_mat
from .polyhedra import RationalPolyhedron, extreme_rays, lp_feasible


def _require_mori_setting(F):
    report = validate_fan(F)
    if not report.is_fan:
        raise ToricError("input is not a fan: " + "; ".join(report.issues))
    if not (report.is_complete or report.is_convex_support):
        raise NotComplete("Mori cone needs a complete fan or one with convex support")
    if not report.is_simplicial:
        raise NotSimplicial(
            "Mori cone operations need a simplicial fan; replace the input by a "
            "small Q-factorial modification first"
        )


# ---------------------------------------------------------------------------
# cone of curves


@dataclass(frozen=True)
class ExtremalRay:
    index: int
    generator: CurveClass  # class of the first member wall
    direction: tuple  # primitive integer vector on the ray
    member_walls: tuple

    def label(self):
        return f"R{self.index}"


def _direction(c):
    return primitive(c.pairings)


@lru_cache(maxsize=256)
def mori_cone(F):
    """Extremal rays of the cone spanned by all interior-wall classes."""
    _require_mori_setting(F)
    classes = wall_classes(F)
    vecs = [c.pairings for _, c in classes]
    nonzero = [k for k, v in enumerate(vecs) if any(v)]
    if not nonzero:
        return ()
    keep = extreme_rays([vecs[k] for k in nonzero])
    rays = []
    for idx, k in enumerate(keep):
        k = nonzero[k]
        d = _direction(classes[k][1])
        members = tuple(w for w, c in classes if any(c.pairings) and _direction(c) == d)
        rays.append(ExtremalRay(idx, classes[k][1], d, members))
    return tuple(rays)


def boundary(F, delta):
    """Validated boundary divisor: one coefficient in [0, 1] per ray."""
    delta = TorusDivisor(delta)
    if len(delta) != F.n_rays:
        raise BadParameters(f"boundary needs {F.n_rays} coefficients, got {len(delta)}")
    if any(not 0 <= c <= 1 for c in delta):
        raise BadParameters("boundary coefficients must lie in [0, 1]")
    return delta


def ray_length(F, R, delta=None):
    """min over member walls of -(K + Delta) . C."""
    K = canonical_divisor(F)
    if delta is not None:
        K = K + boundary(F, delta)
    return min(-c.degree(K) for c in (curve_class(F, w) for w in R.member_walls))


def curve_class(F, w):
    for v, c in wall_classes(F):
        if v == w:
            return c
    from .intersect import curve_class as _cc

    return _cc(F, w)


@dataclass(frozen=True)
class ContractionProfile:
    alpha: int
    beta: int
    n: int

    @property
    def dimA(self):
        return self.n - self.alpha

    @property
    def dimB(self):
        return self.beta - self.alpha

    @property
    def dimF(self):
        return self.n - self.beta

    @property
    def d(self):
        return self.dimF

    @property
    def kind(self):
        if self.alpha == 0:
            return "fano"
        if self.alpha == 1:
            return "divisorial"
        return "small"

    @property
    def birational(self):
        return self.alpha > 0


def reid_profile(F, R):
    p = R.generator.pairings
    neg = sum(1 for x in p if x < 0)
    pos = sum(1 for x in p if x > 0)
    return ContractionProfile(neg, F.rank + 1 - pos, F.rank)


# ---------------------------------------------------------------------------
# positivity


def is_nef(F, D, data=None):
    data = data or q_cartier_data(F, D)
    return all(wall_degree(F, D, w, data) >= 0 for w in walls(F) if w.interior)


def is_ample(F, D, data=None):
    data = data or q_cartier_data(F, D)
    return all(wall_degree(F, D, w, data) > 0 for w in walls(F) if w.interior)


def nef_by_rays(F, D):
    """Nefness tested against the extremal ray generators only."""
    return all(R.generator.degree(D) >= 0 for R in mori_cone(F))


@lru_cache(maxsize=256)
def ample_witness(F):
    """An ample divisor on a complete simplicial fan, or ``None`` if F is not projective.

    Coefficients on n independent rays are fixed to zero (every class has
    such a representative) and an LP asks for degree >= 1 on every wall.
    """
    classes = [c.pairings for _, c in wall_classes(F)]
    n = F.rank
    basis = next(
        (b for b in combinations(range(F.n_rays), n) if rank([F.rays[i] for i in b]) == n), None
    )
    if basis is None:
        return None
    free = [i for i in range(F.n_rays) if i not in basis]
    rows = []
    for c in classes:
        a = tuple(Fraction(c[i]) for i in free)
        if not any(a):
            return None
        rows.append((a, Fraction(1)))
    rows = tuple(sorted(set(rows)))
    res = lp_feasible(RationalPolyhedron(rows, (), dim=len(free)))
    if not res:
        return None
    coeffs = [Fraction(0)] * F.n_rays
    for i, x in zip(free, res.witness):
        coeffs[i] = Fraction(x)
    den = lcm_list([x.denominator for x in coeffs])
    return TorusDivisor([x * den for x in coeffs])


def is_projective(F):
    if not F.is_complete:
        return False
    if not F.is_simplicial:
        raise NotSimplicial("projectivity test needs a simplicial fan")
    return ample_witness(F) is not None


def require_projective(F):
    if not is_projective(F):
        raise NotProjective("the fan admits no ample divisor")


def nef_threshold(F, D):
    """Least t with K + tD nef, for ample Cartier D."""
    data = q_cartier_data(F, D)
    if not data.is_cartier:
        raise NotCartier("nef threshold needs a Cartier divisor")
    if not is_ample(F, D, data):
        raise NotAmple("nef threshold needs an ample divisor")
    K = canonical_divisor(F)
    kdata = q_cartier_data(F, K)
    return max(
        -wall_degree(F, K, w, kdata) / wall_degree(F, D, w, data) for w in walls(F) if w.interior
    )


@dataclass
class AdjointReport:
    coefficient: Fraction
    pe: bool
    nef: bool
    sections: int
    n: int

    @property
    def consistent(self):
        """At coefficient n-1, pseudo-effective and nef coincide."""
        if self.coefficient != self.n - 1:
            return True
        return self.pe == self.nef


def adjoint_report(F, D, c):
    c = Fraction(c)
    data = q_cartier_data(F, D)
    if not data.is_cartier:
        raise NotCartier("adjoint report needs a Cartier divisor")
    if not is_ample(F, D, data):
        raise NotAmple("adjoint report needs an ample divisor")
    A = canonical_divisor(F) + c * D
    return AdjointReport(c, is_pseudo_effective(F, A), is_nef(F, A), sections_count(F, A), F.rank)


# ---------------------------------------------------------------------------
# contractions


@dataclass
class Contraction:
    ray: ExtremalRay
    profile: ContractionProfile
    target: Fan
    refinement: object = None  # RefinementMap for birational rays
    projection: QuotientData = None  # for fibre-type rays
    merged: list = field(default_factory=list)


def _union_find(n):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    return find, union


def contract_ray(F, R):
    profile = reid_profile(F, R)
    if not profile.birational:
        return _contract_fibration(F, R, profile)
    find, union = _union_find(len(F.max_cones))
    for w in R.member_walls:
        union(w.left, w.right)
    groups = {}
    for ci in range(len(F.max_cones)):
        groups.setdefault(find(ci), []).append(ci)
    cones = []
    merged = []
    for root in sorted(groups):
        members = groups[root]
        rays = sorted(set().union(*(F.max_cones[ci] for ci in members)))
        if len(members) > 1:
            keep = extreme_rays([F.rays[i] for i in rays])
            rays = [rays[k] for k in keep]
            merged.append(tuple(members))
        cones.append(rays)
    used = sorted(set().union(*map(set, cones)))
    remap = {old: new for new, old in enumerate(used)}
    W = Fan([F.rays[i] for i in used], [[remap[i] for i in c] for c in cones], rank=F.rank)
    report = validate_fan(W)
    if not report.is_fan:
        raise MergeNotAFan("merged cones do not form a fan: " + "; ".join(report.issues), merged)
    return Contraction(R, profile, W, refinement=refinement_map(F, W), merged=merged)


def _contract_fibration(F, R, profile):
    positive = [i for i, x in enumerate(R.generator.pairings) if x > 0]
    P = saturation_quotient([F.rays[i] for i in positive], F.rank)
    qrank = len(P[0]) if P and P[0] else 0
    rays, ray_map = [], {}
    for i, v in enumerate(F.rays):
        img = vec_mat(v, P) if qrank else ()
        if not any(img):
            continue
        w = primitive(img)
        if w not in rays:
            rays.append(w)
        ray_map[i] = rays.index(w)
    cones = []
    for c in F.max_cones:
        img = sorted({ray_map[i] for i in c if i in ray_map})
        if img:
            keep = extreme_rays([rays[k] for k in img])
            img = [img[k] for k in keep]
        if img not in cones:
            cones.append(img)
    # drop images contained in other images' cones
    base_probe = Fan(rays, cones, rank=qrank) if rays else Fan([], [()], rank=qrank)
    maximal = []
    for c in cones:
        if not any(
            c != d and len(d) >= len(c) and all(base_probe.geometry(d).contains(rays[i]) for i in c)
            for d in cones
        ):
            maximal.append(c)
    B = Fan(rays, maximal, rank=qrank) if rays else Fan([], [()], rank=qrank)
    report = validate_fan(B)
    if not report.is_fan:
        raise MergeNotAFan("projected cones do not form a fan: " + "; ".join(report.issues), cones)
    quot = QuotientData(frozenset(positive), tuple(tuple(r) for r in P), ray_map)
    return Contraction(R, profile, B, projection=quot)


# ---------------------------------------------------------------------------
# classification of divisorial rays


@dataclass
class DivisorialClassification:
    exceptional_ray: int
    center_smooth: bool
    b: int
    weights: tuple
    a: int
    exceptional_is_projective_space: bool

    @property
    def is_weighted_blowup(self):
        n = len(self.weights)
        w = sorted(self.weights)
        return (
            self.center_smooth
            and self.b == 1
            and w == [1] + [self.a] * (n - 1)
            and self.exceptional_is_projective_space
        )


def projective_space_fan(n):
    rays = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple([-1] * n))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan(rays, cones, rank=n)


def classify_divisorial(F, R):
    profile = reid_profile(F, R)
    if profile.kind != "divisorial" or profile.dimB != 0:
        raise WrongProfile("need a divisorial ray contracting its divisor to a point")
    n = F.rank
    if ray_length(F, R) < n - 1:
        return None
    e = next(i for i, x in enumerate(R.generator.pairings) if x < 0)
    con = contract_ray(F, R)
    W = con.target
    target = con.refinement.cone_map[frozenset([e])]
    from .fan import multiplicity

    smooth = W.is_simplicial_cone(target) and multiplicity(W, target) == 1
    idx = sorted(target)
    coords = solve([list(r) for r in zip(*[W.rays[i] for i in idx])], list(F.rays[e]))
    b = lcm_list([Fraction(x).denominator for x in coords])
    weights = tuple(int(Fraction(x) * b) for x in coords)
    quotient, _ = star_quotient(F, [e])
    is_pn = quotient.rank == n - 1 and is_isomorphic(quotient, projective_space_fan(n - 1))
    return DivisorialClassification(e, smooth, b, weights, max(weights), is_pn)


# ---------------------------------------------------------------------------
# projective-space bundles over the line


@dataclass
class BundleCheck:
    is_bundle: bool
    a_plus: int = 0
    a_minus: int = 0
    fibre_rays: tuple = ()
    reason: str = ""


def bundle_structure(F):
    """Test whether F is the fan of a P^{n-1}-bundle over P^1.

    The fibre rays span a hyperplane L; in coordinates where L is the first
    n-1 axes the two remaining rays read (b, a_+) and (c, -a_-).  The fan is a
    bundle iff a_+ = a_- = 1, the fibre rays form the fan of P^{n-1} in L and
    the maximal cones are the joins of fibre cones with v_+ or v_-.
    """
    n = F.rank
    if not F.is_complete or not F.is_simplicial:
        return BundleCheck(False, reason="not complete simplicial")
    if F.n_rays != n + 2:
        return BundleCheck(False, reason="Picard number is not 2")
    for i, j in combinations(range(F.n_rays), 2):
        fibre = [k for k in range(F.n_rays) if k not in (i, j)]
        vecs = [F.rays[k] for k in fibre]
        if rank(vecs) != n - 1:
            continue
        P = saturation_quotient(vecs, n)
        ai, aj = vec_mat(F.rays[i], P)[0], vec_mat(F.rays[j], P)[0]
        if ai * aj >= 0:
            continue
        plus, minus = (i, j) if ai > 0 else (j, i)
        a_plus, a_minus = abs(ai), abs(aj)
        expected = {
            frozenset([k for k in fibre if k != drop] + [s]) for drop in fibre for s in (plus, minus)
        }
        cones_ok = {frozenset(c) for c in F.max_cones} == expected
        fibre_fan_ok = _fibre_is_projective_space(F, fibre)
        if cones_ok and fibre_fan_ok:
            ok = a_plus == 1 and a_minus == 1
            return BundleCheck(ok, a_plus, a_minus, tuple(fibre), "" if ok else "a_+ or a_- exceeds 1")
    return BundleCheck(False, reason="no fibration over the line in normal form")


def _fibre_is_projective_space(F, fibre):
    """Fibre rays are n primitive vectors of a saturated rank n-1 lattice summing to zero
    with any n-1 of them a basis."""
    vecs = [F.rays[k] for k in fibre]
    if any(sum(v[t] for v in vecs) != 0 for t in range(F.rank)):
        return False
    from .lattice import lattice_index

    for sub in combinations(vecs, len(vecs) - 1):
        if rank(list(sub)) != len(sub) or lattice_index(list(sub)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# verification suite


@dataclass
class Check:
    name: str
    ray: int
    holds: bool
    detail: str = ""


@dataclass
class RayReport:
    ray: ExtremalRay
    length: Fraction
    length_with_boundary: Fraction
    profile: ContractionProfile
    classification: object = None


@dataclass
class SuiteResult:
    rays: list
    checks: list

    @property
    def ok(self):
        return all(c.holds for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.holds]


def ray_reports(F, delta=None):
    out = []
    for R in mori_cone(F):
        prof = reid_profile(F, R)
        length = ray_length(F, R)
        lb = ray_length(F, R, delta) if delta is not None else None
        cls = None
        if prof.kind == "divisorial" and prof.dimB == 0 and length >= F.rank - 1:
            cls = classify_divisorial(F, R)
        out.append(RayReport(R, length, lb, prof, cls))
    return out


def theorem_suite(F, delta=None):
    """Length bounds for K-negative extremal rays, checked exactly."""
    n = F.rank
    if delta is not None:
        delta = boundary(F, delta)
    reports = ray_reports(F, delta)
    checks = []
    complete = F.is_complete
    for rep in reports:
        i, l, p = rep.ray.index, rep.length, rep.profile
        if l <= 0:
            continue
        if p.birational:
            checks.append(Check("birational_length_bound", i, l < p.d + 1, f"l={l}, d={p.d}"))
        if p.kind == "divisorial" and p.d == n - 1:
            checks.append(Check("divisorial_length_bound", i, l <= n - 1, f"l={l}"))
            if l == n - 1 and p.dimB == 0:
                cls = rep.classification
                ok = cls is not None and cls.is_weighted_blowup
                detail = f"weights={cls.weights}, b={cls.b}" if cls else "unclassified"
                checks.append(Check("weighted_blowup_classification", i, ok, detail))
        if p.kind == "small":
            checks.append(Check("small_length_bound", i, l < n - 1, f"l={l}"))
        if l > n - 1 and complete and F.n_rays - n >= 2:
            bundle = bundle_structure(F) if complete else BundleCheck(False, reason="not complete")
            ok = F.n_rays - n == 2 and bundle.is_bundle
            checks.append(Check("long_ray_bundle", i, ok, bundle.reason or "bundle"))
        if delta is not None:
            lb = rep.length_with_boundary
            if complete:
                small_boundary = sum(delta) < 1
                is_pn = small_boundary and is_isomorphic(F, projective_space_fan(n))
                limit = n + 1 if is_pn else n
                checks.append(Check("invariant_curve_bound", i, lb <= limit, f"l={lb}"))
            if p.kind == "divisorial" and lb > n - 1:
                e = next(k for k, x in enumerate(rep.ray.generator.pairings) if x < 0)
                checks.append(Check("boundary_support", i, delta[e] > 0, f"delta_E={delta[e]}"))
    return SuiteResult(reports, checks)
