"""Torus-invariant divisors, support functions and divisor polytopes.

Sign conventions: a divisor ``D = sum d_rho D_rho`` has, on a maximal cone
sigma, a functional ``u_sigma`` with ``<u_sigma, v_rho> = -d_rho`` for the rays
of sigma.  Its polytope is ``P_D = {u : <u, v_rho> >= -d_rho}`` and the
lattice points of ``P_D`` index the global sections of ``O(D)``.
"""

import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import NotAmple, NotCartier, NotComplete, NotNef, NotQCartier
from .lattice import dot, integer_solve, lcm, solve
from .polyhedra import (
    RationalPolyhedron,
    lattice_points,
    lp_feasible,
    normalized_volume,
)

DEFAULT_SEARCH_BOUND = 12


def default_search_bound():
    value = os.environ.get("TORUS_SEARCH_BOUND")
    if value:
        bound = int(value)
        if bound <= 0:
            raise ValueError("TORUS_SEARCH_BOUND must be positive")
        return bound
    return DEFAULT_SEARCH_BOUND


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TorusDivisor:
    """Rational combination of the torus-invariant prime divisors of a fan."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]

    def __iter__(self):
        return iter(self.coefficients)

    def _check(self, other):
        if len(other.coefficients) != len(self.coefficients):
            raise ValueError("divisors live on different fans")

    def __add__(self, other):
        self._check(other)
        return TorusDivisor(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        self._check(other)
        return TorusDivisor(a - b for a, b in zip(self, other))

    def __neg__(self):
        return TorusDivisor(-a for a in self)

    def __mul__(self, c):
        c = Fraction(c)
        return TorusDivisor(c * a for a in self)

    __rmul__ = __mul__

    @property
    def is_integral(self):
        return all(c.denominator == 1 for c in self.coefficients)

    @property
    def is_boundary(self):
        return all(0 <= c <= 1 for c in self.coefficients)

    @property
    def support(self):
        return frozenset(i for i, c in enumerate(self.coefficients) if c)

    def __repr__(self):
        return "TorusDivisor(" + ", ".join(str(c) for c in self.coefficients) + ")"


def zero_divisor(F):
    return TorusDivisor([0] * F.n_rays)


def prime_divisor(F, i):
    return TorusDivisor([1 if j == i else 0 for j in range(F.n_rays)])


def canonical_divisor(F):
    return TorusDivisor([-1] * F.n_rays)


def principal_divisor(F, u):
    """div(chi^u) = sum <u, v_rho> D_rho."""
    return TorusDivisor(dot(u, r) for r in F.rays)


# ---------------------------------------------------------------------------
# support functions


@dataclass(frozen=True)
class SupportFunctionData:
    """Per-maximal-cone functionals of a divisor; ``None`` marks failure."""

    fan: object
    divisor: TorusDivisor
    functionals: tuple
    cartier_index: int

    @property
    def is_q_cartier(self):
        return all(u is not None for u in self.functionals)

    @property
    def is_cartier(self):
        return self.is_q_cartier and self.cartier_index == 1

    def u(self, cone_index):
        u = self.functionals[cone_index]
        if u is None:
            raise NotQCartier(f"no linear functional on cone {cone_index}")
        return u

    def value(self, x):
        """psi_D(x) = <u_sigma, x> for a maximal cone sigma containing x."""
        for ci in self.fan.max_cones_containing(x):
            return dot(self.u(ci), x)
        raise ValueError(f"{tuple(x)} is not in the support of the fan")


def local_functional(F, cone, D):
    """(u, m) for one cone: ``<u, v> = -d_v`` on its rays, m = integrality defect."""
    idx = sorted(cone)
    if not idx:
        return tuple(Fraction(0) for _ in range(F.rank)), 1
    A = [list(F.rays[i]) for i in idx]
    b = [-D[i] for i in idx]
    res = integer_solve(A, b)
    if res is None:
        return None, None
    return tuple(Fraction(x) for x in res[0]), res[1]


def q_cartier_data(F, D, strict=True):
    """Support-function data of D; raises ``NotQCartier`` unless ``strict`` is off."""
    if len(D) != F.n_rays:
        raise ValueError("divisor does not match the fan")
    funcs = []
    index = 1
    for ci, c in enumerate(F.max_cones):
        u, m = local_functional(F, c, D)
        if u is None:
            if strict:
                raise NotQCartier(f"D admits no linear functional on cone {ci} = {list(c)}")
            funcs.append(None)
            continue
        for i in c:
            assert dot(u, F.rays[i]) == -D[i]
        funcs.append(u)
        index = lcm(index, m)
    return SupportFunctionData(F, D, tuple(funcs), index)


def cartier_index(F, D):
    return q_cartier_data(F, D).cartier_index


def is_q_cartier(F, D):
    return q_cartier_data(F, D, strict=False).is_q_cartier


def is_cartier(F, D):
    return q_cartier_data(F, D, strict=False).is_cartier


# ---------------------------------------------------------------------------
# pullback


@dataclass(frozen=True)
class Pullback:
    divisor: TorusDivisor
    discrepancies: tuple  # ((fine ray index, a_i), ...) when D is canonical, else ()

    @property
    def crepant(self):
        return all(a == 0 for _, a in self.discrepancies)


def pullback(rmap, D, data=None):
    """f*D on the fine fan of a refinement map."""
    coarse = rmap.coarse
    data = data or q_cartier_data(coarse, D)
    coeffs = []
    for i, v in enumerate(rmap.fine.rays):
        target = rmap.cone_map[frozenset([i])]
        ci = next(k for k, c in enumerate(coarse.max_cones) if target <= frozenset(c))
        coeffs.append(-dot(data.u(ci), v))
    return TorusDivisor(coeffs)


def pullback_and_discrepancies(rmap, D):
    pulled = pullback(rmap, D)
    disc = ()
    if D == canonical_divisor(rmap.coarse):
        K = canonical_divisor(rmap.fine)
        disc = tuple((i, K[i] - pulled[i]) for i in rmap.exceptional_rays)
    return Pullback(pulled, disc)


def discrepancies(rmap):
    return pullback_and_discrepancies(rmap, canonical_divisor(rmap.coarse)).discrepancies


# ---------------------------------------------------------------------------
# polytopes and sections


def divisor_polytope(F, D):
    rows = tuple((tuple(Fraction(x) for x in r), -d) for r, d in zip(F.rays, D))
    return RationalPolyhedron(rows, (), dim=F.rank)


def sections(F, D):
    return lattice_points(divisor_polytope(F, D))


def sections_count(F, D):
    return len(sections(F, D))


def _require_complete(F):
    if not F.is_complete:
        raise NotComplete("operation requires a complete fan")


def is_pseudo_effective(F, D, check_projective=True):
    """D is pseudo-effective iff its polytope is nonempty (complete projective F)."""
    _require_complete(F)
    if check_projective and F.is_simplicial:
        from .mori import require_projective

        require_projective(F)
    return bool(lp_feasible(divisor_polytope(F, D)))


def linearly_equivalent(F, D1, D2):
    """D1 ~ D2 iff D1 - D2 = div(chi^u) for an integral u."""
    diff = [a - b for a, b in zip(D1, D2)]
    res = integer_solve([list(r) for r in F.rays], diff)
    return res is not None and res[1] == 1


def q_linearly_equivalent(F, D1, D2):
    diff = [a - b for a, b in zip(D1, D2)]
    return solve([list(r) for r in F.rays], diff) is not None


def polytope_vertices_of(F, D, data=None):
    """Distinct vertices u_sigma of P_D for a nef Q-Cartier D on a complete fan."""
    data = data or q_cartier_data(F, D)
    seen = []
    for u in data.functionals:
        if u not in seen:
            seen.append(u)
    return seen


def top_self_intersection(F, D):
    """D^n = n! vol(P_D) for nef Cartier D on a complete fan."""
    from .mori import is_nef

    _require_complete(F)
    data = q_cartier_data(F, D)
    if not data.is_cartier:
        raise NotCartier("top self-intersection requires a Cartier divisor")
    if not is_nef(F, D, data):
        raise NotNef("top self-intersection requires a nef divisor")
    verts = polytope_vertices_of(F, D, data)
    tight = [
        [k for k, u in enumerate(verts) if dot(u, r) == -d] for r, d in zip(F.rays, D)
    ]
    return normalized_volume(verts, tight)


# ---------------------------------------------------------------------------
# generation tests


def _dual_rays(F, cone):
    """Primitive generators of the dual of a full-dimensional simplicial cone."""
    g = F.geometry(cone)
    return [tuple(u) for u, _ in g.facets]


def _height_vector(F, cone):
    return [sum(F.rays[i][k] for i in cone) for k in range(F.rank)]


def _chart_points(F, cone, offsets, h, limit):
    """Lattice points m with <m, v> >= offsets[v] on the cone and h(m) <= limit."""
    rows = [(tuple(Fraction(x) for x in F.rays[i]), Fraction(offsets[i])) for i in sorted(cone)]
    rows.append((tuple(Fraction(-x) for x in h), Fraction(-limit)))
    return lattice_points(RationalPolyhedron(tuple(rows), (), dim=F.rank))


def _check_full_simplicial(F, cone):
    if F.cone_dim(cone) != F.rank or len(cone) != F.rank:
        raise NotComplete("chart tests need full-dimensional simplicial maximal cones")


def global_generation(F, D, search_bound=None):
    """Three-valued test that O(D) is generated by global sections.

    Cartier divisors are decided exactly through nefness.  For Weil divisors
    every chart module ``Gamma(U_sigma, O(D))`` is checked: each of its
    lattice points must dominate a global section in the order of sigma-dual.
    Points with ``<m - u_sigma, h> < sum h(dual rays)`` already generate the
    module; the search stops at ``search_bound`` height steps.
    """
    from .mori import is_nef

    _require_complete(F)
    bound = search_bound or default_search_bound()
    data = q_cartier_data(F, D, strict=False)
    if data.is_cartier:
        return Verdict.YES if is_nef(F, D, data) else Verdict.NO
    global_pts = sections(F, D)
    verdict = Verdict.YES
    for c in F.max_cones:
        _check_full_simplicial(F, c)
        h = _height_vector(F, c)
        u, _ = local_functional(F, c, D)
        duals = _dual_rays(F, c)
        base = dot(h, u)
        span = sum(dot(h, w) for w in duals)
        limit = base + min(span, bound)
        capped = span > bound
        offsets = {i: -D[i] for i in c}
        for m in _chart_points(F, c, offsets, h, limit):
            if not any(all(dot(F.rays[i], [a - b for a, b in zip(m, s)]) >= 0 for i in c) for s in global_pts):
                return Verdict.NO
        if capped:
            verdict = Verdict.INCONCLUSIVE
    return verdict


def very_ample(F, D, search_bound=None):
    """Three-valued very-ampleness test for an ample Cartier divisor.

    For every vertex ``u_sigma`` the differences ``P_D cap M - u_sigma`` must
    generate the semigroup ``sigma-dual cap M``; its Hilbert basis lies below
    height ``sum h(dual rays)``.
    """
    from .mori import is_ample

    _require_complete(F)
    bound = search_bound or default_search_bound()
    data = q_cartier_data(F, D)
    if not data.is_cartier:
        raise NotCartier("very ampleness test requires a Cartier divisor")
    if not is_ample(F, D, data):
        raise NotAmple("very ampleness test requires an ample divisor")
    pts = sections(F, D)
    verdict = Verdict.YES
    for ci, c in enumerate(F.max_cones):
        _check_full_simplicial(F, c)
        u = data.u(ci)
        h = _height_vector(F, c)
        duals = _dual_rays(F, c)
        span = sum(dot(h, w) for w in duals)
        limit = min(span, bound)
        gens = []
        for p in pts:
            s = tuple(int(a - b) for a, b in zip(p, u))
            if any(s) and dot(h, s) <= limit:
                gens.append(s)
        targets = _chart_points(F, c, {i: 0 for i in c}, h, limit)
        reach = {tuple([0] * F.rank)}
        frontier = list(reach)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = tuple(a + b for a, b in zip(x, g))
                    if y not in reach and dot(h, y) <= limit:
                        reach.add(y)
                        nxt.append(y)
            frontier = nxt
        if any(tuple(t) not in reach for t in targets):
            return Verdict.NO
        if span > bound:
            verdict = Verdict.INCONCLUSIVE
    return verdict
