"""Fans of rational polyhedral cones over a fixed lattice basis of N = Z^n.

A cone of a fan is a ``frozenset`` of indices into ``Fan.rays``.  Faces are
computed on demand from exact facet normals and cached per fan.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations

from .errors import (
    AlreadyARay,
    ConeNotInFan,
    NotAFinerLattice,
    NotARefinement,
    NotInSupport,
    NotSimplicial,
)
from .lattice import (
    det,
    dot,
    inverse,
    is_primitive,
    lattice_basis,
    lattice_index,
    nullspace,
    primitive,
    rank,
    saturation_quotient,
    vec_mat,
)
from .polyhedra import RationalPolyhedron, cone_is_pointed, extreme_rays, lp_feasible


class ConeGeometry:
    """H-description of the cone spanned by a list of integer vectors.

    ``span_equations`` cut out the linear span; ``facets`` lists pairs
    ``(inner_normal, local_indices_on_facet)`` relative to that span.
    """

    def __init__(self, generators, ambient):
        self.generators = [tuple(g) for g in generators]
        self.ambient = ambient
        self.dim = rank(self.generators) if self.generators else 0
        self.span_equations = nullspace(self.generators, ambient) if self.generators else [
            tuple(1 if i == j else 0 for j in range(ambient)) for i in range(ambient)
        ]
        self.facets = self._facets()

    def _facets(self):
        if self.dim == 0:
            return []
        gens = self.generators
        found = {}
        for combo in combinations(range(len(gens)), self.dim - 1):
            sub = [gens[i] for i in combo]
            if rank(sub) != self.dim - 1 if sub else False:
                continue
            ker = nullspace(sub + list(self.span_equations), self.ambient)
            if len(ker) != 1:
                continue
            u = ker[0]
            vals = [dot(u, g) for g in gens]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                u = tuple(-x for x in u)
                vals = [-v for v in vals]
            else:
                continue
            tight = frozenset(i for i, v in enumerate(vals) if v == 0)
            if len(tight) == len(gens):
                continue
            found.setdefault(tight, u)
        return [(u, t) for t, u in sorted(found.items(), key=lambda kv: sorted(kv[0]))]

    def contains(self, x):
        if any(dot(e, x) != 0 for e in self.span_equations):
            return False
        return all(dot(u, x) >= 0 for u, _ in self.facets)

    def in_relative_interior(self, x):
        if any(dot(e, x) != 0 for e in self.span_equations):
            return False
        return all(dot(u, x) > 0 for u, _ in self.facets)

    def face_containing(self, x):
        """Local indices of the smallest face containing x (x must lie in the cone)."""
        tight = [u for u, _ in self.facets if dot(u, x) == 0]
        return frozenset(i for i, g in enumerate(self.generators) if all(dot(u, g) == 0 for u in tight))


@dataclass(frozen=True)
class WallCurve:
    """A codimension-one cone with its adjacent maximal cones (indices into
    ``Fan.max_cones``).  Interior walls have two neighbours; the torus
    invariant curve V(wall) is complete only for those."""

    wall: frozenset
    cones: tuple

    @property
    def interior(self):
        return len(self.cones) == 2

    @property
    def left(self):
        return self.cones[0]

    @property
    def right(self):
        return self.cones[1] if self.interior else None

    def label(self):
        return "<" + ",".join(str(i) for i in sorted(self.wall)) + ">"


class Fan:
    """A fan given by primitive rays and its maximal cones.

    Rays are divided by the gcd of their coordinates on construction; the
    indices that had to be rescaled are kept in ``rescaled_rays``.
    """

    def __init__(self, rays, cones, rank=None, name=None):
        raw = [tuple(int(x) for x in as_int(r)) for r in rays]
        if rank is None:
            if not raw:
                raise ValueError("rank is required for a fan without rays")
            rank = len(raw[0])
        self.rank = rank
        rescaled = []
        prim = []
        for i, r in enumerate(raw):
            if len(r) != rank:
                raise ValueError(f"ray {i} has length {len(r)}, expected {rank}")
            if not any(r):
                raise ValueError(f"ray {i} is the zero vector")
            if not is_primitive(r):
                rescaled.append(i)
                r = primitive(r)
            prim.append(r)
        self.rays = tuple(prim)
        self.rescaled_rays = tuple(rescaled)
        cones = [tuple(sorted(set(int(i) for i in c))) for c in cones]
        for c in cones:
            for i in c:
                if not 0 <= i < len(self.rays):
                    raise ValueError(f"cone {c} refers to missing ray {i}")
        self.max_cones = tuple(cones)
        self.name = name
        self._geom = {}

    # -- identity ---------------------------------------------------------
    def _key(self):
        return (self.rank, self.rays, self.max_cones)

    def __eq__(self, other):
        return isinstance(other, Fan) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"Fan({label}rank={self.rank}, rays={len(self.rays)}, max_cones={len(self.max_cones)})"

    @property
    def n_rays(self):
        return len(self.rays)

    def ray_index(self, v):
        v = tuple(v)
        for i, r in enumerate(self.rays):
            if r == v:
                return i
        return None

    # -- geometry ---------------------------------------------------------
    def geometry(self, cone):
        cone = frozenset(cone)
        g = self._geom.get(cone)
        if g is None:
            idx = sorted(cone)
            g = ConeGeometry([self.rays[i] for i in idx], self.rank)
            g.indices = idx
            self._geom[cone] = g
        return g

    def cone_dim(self, cone):
        return self.geometry(cone).dim

    def facets_of(self, cone):
        g = self.geometry(cone)
        return [frozenset(g.indices[i] for i in t) for _, t in g.facets]

    def faces_of(self, cone):
        cone = frozenset(cone)
        seen = {cone}
        stack = [cone]
        while stack:
            c = stack.pop()
            for f in self.facets_of(c):
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
        return seen

    @cached_property
    def all_cones(self):
        """Every cone of the fan (including the zero cone), sorted by (dim, rays)."""
        out = set()
        for c in self.max_cones:
            out |= self.faces_of(c)
        return sorted(out, key=lambda c: (self.cone_dim(c), sorted(c)))

    def cones_of_dim(self, d):
        return [c for c in self.all_cones if self.cone_dim(c) == d]

    def contains_cone(self, cone):
        return frozenset(cone) in set(self.all_cones)

    @cached_property
    def full_dim_cones(self):
        return [i for i, c in enumerate(self.max_cones) if self.cone_dim(c) == self.rank]

    def is_simplicial_cone(self, cone):
        return len(cone) == self.cone_dim(cone)

    @cached_property
    def is_simplicial(self):
        return all(self.is_simplicial_cone(c) for c in self.max_cones)

    def max_cones_containing(self, x):
        return [i for i, c in enumerate(self.max_cones) if self.geometry(c).contains(x)]

    def locate(self, x):
        """The cone of the fan having x in its relative interior, or ``None``."""
        for c in self.max_cones:
            g = self.geometry(c)
            if g.contains(x):
                return frozenset(g.indices[i] for i in g.face_containing(x))
        return None

    @cached_property
    def report(self):
        return validate_fan(self)

    @property
    def is_complete(self):
        return self.report.is_complete

    @property
    def has_convex_support(self):
        return self.report.is_convex_support

    @cached_property
    def picard_number(self):
        """#rays - n, the Picard number for complete simplicial fans."""
        return self.n_rays - self.rank


def as_int(v):
    out = []
    for x in v:
        q = Fraction(x)
        if q.denominator != 1:
            raise ValueError(f"ray {tuple(v)} is not integral")
        out.append(q.numerator)
    return out


# ---------------------------------------------------------------------------
# validation


@dataclass
class FanReport:
    is_fan: bool
    is_complete: bool
    is_convex_support: bool
    is_simplicial: bool
    is_smooth: bool
    issues: list = field(default_factory=list)

    @property
    def support_note(self):
        if self.is_complete:
            return "complete"
        if self.is_convex_support:
            return "convex-support"
        return "general"


def _separated(F, s, t):
    """Whether cone(s) and cone(t) meet in their common face (separation LP)."""
    common = s & t
    n = F.rank
    rows = []
    eqs = []
    for i in common:
        eqs.append((F.rays[i], 0))
    for i in s - common:
        rows.append((F.rays[i], 1))
    for i in t - common:
        rows.append((tuple(-x for x in F.rays[i]), 1))
    if common:
        # common rays must themselves span a face of each cone
        pass
    return bool(lp_feasible(RationalPolyhedron(tuple(rows), tuple(eqs), dim=n)))


def validate_fan(F):
    """Check the fan axioms and classify the support.  Problems are reported,
    never raised."""
    issues = []
    ok = True
    for i in F.rescaled_rays:
        issues.append(f"ray {i} was not primitive and has been divided by its gcd")
    seen = {}
    for i, r in enumerate(F.rays):
        if r in seen:
            issues.append(f"rays {seen[r]} and {i} coincide")
            ok = False
        seen.setdefault(r, i)
    for ci, c in enumerate(F.max_cones):
        gens = [F.rays[i] for i in c]
        if not cone_is_pointed(gens):
            issues.append(f"cone {ci} is not strongly convex")
            ok = False
            continue
        if len(extreme_rays(gens)) != len(gens):
            issues.append(f"cone {ci} lists a generator that is not an extreme ray")
            ok = False
    if ok:
        for a, b in combinations(range(len(F.max_cones)), 2):
            s, t = frozenset(F.max_cones[a]), frozenset(F.max_cones[b])
            if not _separated(F, s, t):
                issues.append(f"cones {a} and {b} do not meet in a common face")
                ok = False
    if not ok:
        return FanReport(False, False, False, False, False, issues)

    simplicial = F.is_simplicial
    smooth = simplicial and all(lattice_index([F.rays[i] for i in c]) == 1 for c in F.max_cones)
    pure = all(F.cone_dim(c) == F.rank for c in F.max_cones) and len(F.max_cones) > 0
    complete = False
    convex = False
    if pure:
        counts = {}
        for c in F.max_cones:
            for f in F.facets_of(c):
                counts[f] = counts.get(f, 0) + 1
        boundary = [f for f, k in counts.items() if k == 1]
        complete = not boundary
        if complete:
            convex = True
        else:
            convex = True
            for f in boundary:
                # inner normal of the boundary facet taken from any adjacent cone
                owner = next(c for c in F.max_cones if f <= frozenset(c))
                g = F.geometry(owner)
                normal = next(u for u, t in g.facets if frozenset(g.indices[i] for i in t) == f)
                if any(dot(normal, r) < 0 for r in F.rays):
                    convex = False
                    break
    if F.rank == 0:
        complete = convex = True
    return FanReport(True, complete, convex, simplicial, smooth, issues)


# ---------------------------------------------------------------------------
# invariants of cones


def multiplicity(F, cone):
    """Index of the lattice spanned by the rays of a simplicial cone in N_sigma."""
    cone = frozenset(cone)
    if not F.is_simplicial_cone(cone):
        raise NotSimplicial(f"cone {sorted(cone)} is not simplicial")
    if not cone:
        return 1
    return lattice_index([F.rays[i] for i in sorted(cone)])


def walls(F):
    """All codimension-one cones that are faces of full-dimensional maximal cones."""
    adj = {}
    for ci in F.full_dim_cones:
        for f in F.facets_of(F.max_cones[ci]):
            adj.setdefault(f, []).append(ci)
    out = [WallCurve(w, tuple(sorted(cs))) for w, cs in adj.items()]
    return sorted(out, key=lambda w: sorted(w.wall))


def interior_walls(F):
    return [w for w in walls(F) if w.interior]


# ---------------------------------------------------------------------------
# constructions on fans


def star_subdivision(F, v, name=None):
    """Stellar subdivision of F at the primitive lattice vector v (appended as last ray)."""
    v = tuple(int(x) for x in v)
    if len(v) != F.rank or not any(v):
        raise ValueError("subdivision vector has the wrong shape")
    if not is_primitive(v):
        raise ValueError(f"{v} is not primitive")
    if F.ray_index(v) is not None:
        raise AlreadyARay(f"{v} is already ray {F.ray_index(v)}")
    hit = F.max_cones_containing(v)
    if not hit:
        raise NotInSupport(f"{v} is not in the support of the fan")
    new = len(F.rays)
    cones = []
    for ci, c in enumerate(F.max_cones):
        if ci not in hit:
            cones.append(tuple(c))
            continue
        for facet in F.facets_of(c):
            if not F.geometry(facet).contains(v):
                cones.append(tuple(sorted(facet)) + (new,))
    uniq = []
    for c in cones:
        if c not in uniq:
            uniq.append(c)
    return Fan(list(F.rays) + [v], uniq, rank=F.rank, name=name)


@dataclass(frozen=True)
class QuotientData:
    """Projection N -> N(tau): x maps to x * matrix; ``ray_map`` sends ray
    indices of the star of tau to rays of the quotient fan."""

    tau: frozenset
    matrix: tuple
    ray_map: dict

    def project(self, x):
        return vec_mat(x, self.matrix)


def star_quotient(F, tau):
    """The fan Star(tau) in N(tau) = N / N_tau, so that V(tau) = X(Star(tau))."""
    tau = frozenset(tau)
    if tau not in set(F.all_cones):
        raise ConeNotInFan(f"{sorted(tau)} is not a cone of the fan")
    P = saturation_quotient([F.rays[i] for i in sorted(tau)], F.rank)
    P = tuple(tuple(row) for row in P)
    qrank = len(P[0]) if P and P[0] else F.rank - F.cone_dim(tau)
    rays = []
    ray_map = {}
    cones = []
    for c in F.max_cones:
        if not tau <= frozenset(c):
            continue
        img = []
        for i in c:
            if i in tau:
                continue
            w = primitive(vec_mat(F.rays[i], P))
            if w not in rays:
                rays.append(w)
            ray_map[i] = rays.index(w)
            img.append(rays.index(w))
        cones.append(tuple(sorted(set(img))))
    return Fan(rays, cones, rank=qrank), QuotientData(tau, P, ray_map)


def finer_lattice_matrix(extra_generators, n):
    """Rows expressing the old basis vectors e_i in a basis of N + sum Z g.

    ``extra_generators`` are rational vectors in old coordinates; the returned
    integer matrix feeds ``rebase_lattice``.
    """
    gens = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    gens += [tuple(Fraction(x) for x in g) for g in extra_generators]
    basis = lattice_basis(gens)
    T = inverse(basis)
    return [[int(x) for x in row] for row in T], basis


def rebase_lattice(F, old_in_new, allow_coarser=False, name=None):
    """Rewrite F over another lattice containing N.

    ``old_in_new[i]`` is the old basis vector e_i expressed in the new basis.
    All entries must be integers (N sits inside the new lattice) unless
    ``allow_coarser`` is set; rays are re-primitivized afterwards.
    """
    T = [[Fraction(x) for x in row] for row in old_in_new]
    if len(T) != F.rank or any(len(row) != F.rank for row in T):
        raise ValueError("basis matrix has the wrong shape")
    if det(T) == 0:
        raise ValueError("basis matrix is singular")
    if not allow_coarser and any(x.denominator != 1 for row in T for x in row):
        raise NotAFinerLattice("some old lattice point has non-integral new coordinates")
    rays = [primitive(vec_mat(r, T)) for r in F.rays]
    return Fan(rays, F.max_cones, rank=F.rank, name=name or F.name)


@dataclass
class RefinementMap:
    fine: Fan
    coarse: Fan
    cone_map: dict
    ray_map: dict
    exceptional_rays: list

    @property
    def is_small(self):
        return not self.exceptional_rays and len(self.ray_map) == self.coarse.n_rays

    def image(self, cone):
        return self.cone_map[frozenset(cone)]


def refinement_map(fine, coarse):
    """Send every cone of ``fine`` to the smallest cone of ``coarse`` containing it."""
    if fine.rank != coarse.rank:
        raise NotARefinement("fans live in lattices of different rank")
    cone_map = {}
    for c in fine.all_cones:
        if not c:
            cone_map[c] = frozenset()
            continue
        x = [sum(fine.rays[i][k] for i in c) for k in range(fine.rank)]
        target = coarse.locate(x)
        if target is None or not all(coarse.geometry(target).contains(fine.rays[i]) for i in c):
            raise NotARefinement(f"cone {sorted(c)} of the fine fan lies in no coarse cone")
        cone_map[c] = target
    ray_map = {}
    exceptional = []
    for i, r in enumerate(fine.rays):
        j = coarse.ray_index(r)
        if j is None:
            exceptional.append(i)
        else:
            ray_map[i] = j
    return RefinementMap(fine, coarse, cone_map, ray_map, exceptional)


def compose_refinements(f, g):
    """The refinement ``g o f`` for f: X -> Y and g: Y -> Z."""
    return refinement_map(f.fine, g.coarse)


# ---------------------------------------------------------------------------
# isomorphism


def unimodular_equivalence(F, G):
    """A unimodular matrix T (rows: images of e_i) carrying F onto G, or ``None``."""
    if F.rank != G.rank or F.n_rays != G.n_rays or len(F.max_cones) != len(G.max_cones):
        return None
    n = F.rank
    if n == 0:
        return []
    target_rays = {r: i for i, r in enumerate(G.rays)}
    target_cones = {frozenset(c) for c in G.max_cones}
    src = next((c for c in F.max_cones if F.cone_dim(c) == n), None)
    if src is None:
        return None
    src = sorted(src)
    basis = next(b for b in combinations(src, n) if rank([F.rays[i] for i in b]) == n)
    A = [list(F.rays[i]) for i in basis]
    Ainv = inverse(A)
    for c in G.max_cones:
        if len(c) != len(src) or G.cone_dim(c) != n:
            continue
        for img in permutations(c, n):
            B = [list(G.rays[i]) for i in img]
            # x * T = y with rows A -> rows B, so T = A^{-1} B
            T = [[sum(Ainv[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            if any(x.denominator != 1 for row in T for x in row) or abs(det(T)) != 1:
                continue
            mapping = {}
            for i, r in enumerate(F.rays):
                y = tuple(int(x) for x in vec_mat(r, T))
                if y not in target_rays:
                    break
                mapping[i] = target_rays[y]
            else:
                if {frozenset(mapping[i] for i in c2) for c2 in F.max_cones} == target_cones:
                    return [[int(x) for x in row] for row in T]
    return None


def is_isomorphic(F, G):
    return unimodular_equivalence(F, G) is not None
