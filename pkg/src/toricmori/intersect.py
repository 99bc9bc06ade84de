"""Intersection numbers of Q-Cartier divisors with torus-invariant curves.

For an interior wall mu between sigma and sigma', the curve V(mu) meets D in

    D . V(mu) = <u_sigma - u_sigma', w>,

where w is any lattice vector whose class generates N / N_mu and points into
sigma'.  The multiplicity-ratio formula for fake weighted projective spaces
is kept alongside as an independent oracle.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .divisor import canonical_divisor, local_functional, prime_divisor
from .errors import BoundaryWall, NotFakeWPS, NotQCartier, NotSimplicial
from .fan import multiplicity, walls
from .lattice import dot, lattice_index, nullspace, unit_preimage


def wall_normal(F, w):
    """Primitive functional vanishing on the wall, positive on the second cone."""
    rays = [F.rays[i] for i in sorted(w.wall)]
    normal = nullspace(rays, F.rank)
    if not normal or len(normal) != 1:
        raise ValueError("not a codimension-one cone")
    nu = normal[0]
    other = F.max_cones[w.right]
    probe = next(F.rays[i] for i in other if i not in w.wall)
    if dot(nu, probe) < 0:
        nu = tuple(-x for x in nu)
    return nu


def wall_lift(F, w):
    return unit_preimage(wall_normal(F, w))


def _functional(F, ci, D, data):
    if data is not None:
        u = data.functionals[ci]
    else:
        u, _ = local_functional(F, F.max_cones[ci], D)
    if u is None:
        raise NotQCartier(f"D has no linear functional on cone {ci}")
    return u


def wall_degree(F, D, w, data=None, swap=False):
    """D . V(mu) for an interior wall (exact rational)."""
    if not w.interior:
        raise BoundaryWall(f"wall {w.label()} lies on the boundary of the support")
    left, right = (w.right, w.left) if swap else (w.left, w.right)
    u1 = _functional(F, left, D, data)
    u2 = _functional(F, right, D, data)
    nu_w = wall_lift(F, w)
    if swap:
        nu_w = tuple(-x for x in nu_w)
    return Fraction(dot([a - b for a, b in zip(u1, u2)], nu_w))


@dataclass(frozen=True)
class CurveClass:
    """Numerical class of a torus-invariant curve: its degrees on every D_rho."""

    pairings: tuple

    def degree(self, D):
        return sum((Fraction(d) * p for d, p in zip(D, self.pairings)), Fraction(0))

    def __mul__(self, c):
        return CurveClass(tuple(Fraction(c) * p for p in self.pairings))

    __rmul__ = __mul__

    @property
    def is_zero(self):
        return not any(self.pairings)


def curve_class(F, w):
    for ci in w.cones:
        if not F.is_simplicial_cone(F.max_cones[ci]):
            raise NotSimplicial("curve classes need simplicial adjacent cones")
    if not w.interior:
        raise BoundaryWall(f"wall {w.label()} lies on the boundary of the support")
    lift = wall_lift(F, w)
    s1, s2 = F.max_cones[w.left], F.max_cones[w.right]
    support = set(s1) | set(s2)
    out = []
    for i in range(F.n_rays):
        if i not in support:
            out.append(Fraction(0))
            continue
        D = prime_divisor(F, i)
        u1, _ = local_functional(F, s1, D)
        u2, _ = local_functional(F, s2, D)
        out.append(Fraction(dot([a - b for a, b in zip(u1, u2)], lift)))
    return CurveClass(tuple(out))


@lru_cache(maxsize=512)
def wall_classes(F):
    """Interior walls of F together with their curve classes."""
    return tuple((w, curve_class(F, w)) for w in walls(F) if w.interior)


def numerical_class(F, D):
    """Degrees of D on all interior walls (its numerical equivalence class)."""
    return tuple(c.degree(D) for _, c in wall_classes(F))


def numerically_equivalent(F, D1, D2):
    return numerical_class(F, D1) == numerical_class(F, D2)


# ---------------------------------------------------------------------------
# fake weighted projective spaces


@dataclass
class FakeWPSWall:
    wall: frozenset
    omitted: tuple  # (i, j): rays off the wall
    degree: Fraction  # -K . V(mu) from support functions
    closed_form: Fraction  # sum(a)/a_j * mult(mu)/mult(sigma_i)
    mult_ratio: Fraction


@dataclass
class FakeWPSAudit:
    weights: tuple
    lattice_index: int
    walls: list
    distinguished: FakeWPSWall
    min_degree: Fraction
    bound: int

    @property
    def oracle_agrees(self):
        return all(w.degree == w.closed_form for w in self.walls)

    @property
    def bound_holds(self):
        return self.distinguished.degree <= self.bound and self.min_degree <= self.bound

    @property
    def equality_case(self):
        return self.distinguished.degree == self.bound

    @property
    def equality_consistent(self):
        """At equality every weight is 1 and the two multiplicities agree."""
        if not self.equality_case:
            return True
        return all(a == 1 for a in self.weights) and self.distinguished.mult_ratio == 1

    @property
    def is_weighted_projective_space(self):
        return self.lattice_index == 1


def fan_weights(F):
    """Positive primitive relation sum a_i v_i = 0 among n+1 rays."""
    cols = [[F.rays[i][k] for i in range(F.n_rays)] for k in range(F.rank)]
    ker = nullspace(cols, F.n_rays)
    if len(ker) != 1:
        raise NotFakeWPS("rays do not satisfy a unique linear relation")
    a = ker[0]
    if all(x < 0 for x in a):
        a = tuple(-x for x in a)
    if not all(x > 0 for x in a):
        raise NotFakeWPS("the ray relation is not positive")
    return tuple(a)


def fake_wps_audit(F):
    n = F.rank
    if F.n_rays != n + 1 or not F.is_simplicial or not F.is_complete:
        raise NotFakeWPS("need a complete simplicial fan with n+1 rays")
    a = fan_weights(F)
    total = sum(a)
    K = canonical_divisor(F)
    cone_of = {frozenset(c): ci for ci, c in enumerate(F.max_cones)}
    everything = frozenset(range(n + 1))
    rows = []
    for w in walls(F):
        i, j = sorted(everything - w.wall)
        deg = wall_degree(F, -K, w)
        sigma_i = everything - {i}  # contains v_j
        ratio = Fraction(multiplicity(F, w.wall), multiplicity(F, sigma_i))
        assert sigma_i in cone_of
        rows.append(FakeWPSWall(w.wall, (i, j), deg, Fraction(total, a[j]) * ratio, ratio))
    # the wall omitting the two largest weights
    order = sorted(range(n + 1), key=lambda k: (a[k], k))
    top, second = order[-1], order[-2]
    dist = next(r for r in rows if set(r.omitted) == {top, second})
    # orient the ratio so that sigma contains the largest weight's ray
    sigma = everything - {second}
    ratio = Fraction(multiplicity(F, dist.wall), multiplicity(F, sigma))
    dist = FakeWPSWall(dist.wall, (second, top), dist.degree, Fraction(total, a[top]) * ratio, ratio)
    return FakeWPSAudit(
        weights=a,
        lattice_index=lattice_index(F.rays),
        walls=rows,
        distinguished=dist,
        min_degree=min(r.degree for r in rows),
        bound=n + 1,
    )
