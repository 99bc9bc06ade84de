"""Exact polyhedral primitives: feasibility, projections, extreme rays,
lattice points and volumes.

Feasibility is decided by Fourier-Motzkin elimination over the integers.  Each
derived inequality carries the nonnegative multipliers that produced it, so a
"no" answer comes with a Farkas certificate and a "yes" answer with a witness
point; both are re-checked before being returned.  Redundant rows are pruned
with Chernikov's rule (a row combined from more than k+1 originals after k
eliminations is implied by the others).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, floor

from .errors import NotStronglyConvex, Unbounded
from .lattice import as_fraction_vector, det, dot, gcd_list, lcm_list, nullspace, primitive, rank, rref, solve

MAX_FM_VARIABLES = 12


@dataclass(frozen=True)
class RationalPolyhedron:
    """``{x : <normal, x> >= offset for every inequality, <a, x> = c for every equation}``.

    ``dim`` fixes the ambient dimension; it is inferred from the rows when
    omitted.
    """

    inequalities: tuple
    equations: tuple = ()
    dim: int = None

    def __post_init__(self):
        ineqs = tuple((as_fraction_vector(a), Fraction(b)) for a, b in self.inequalities)
        eqs = tuple((as_fraction_vector(a), Fraction(b)) for a, b in self.equations)
        object.__setattr__(self, "inequalities", ineqs)
        object.__setattr__(self, "equations", eqs)
        if self.dim is None:
            rows = ineqs + eqs
            object.__setattr__(self, "dim", len(rows[0][0]) if rows else 0)

    @property
    def ambient_dim(self):
        return self.dim

    def contains(self, x):
        x = as_fraction_vector(x)
        return all(dot(a, x) >= b for a, b in self.inequalities) and all(
            dot(a, x) == b for a, b in self.equations
        )


@dataclass
class Feasibility:
    feasible: bool
    witness: tuple = None
    certificate: dict = field(default=None, repr=False)

    def __bool__(self):
        return self.feasible


# ---------------------------------------------------------------------------
# Fourier-Motzkin


class _Row:
    __slots__ = ("a", "b", "hist")

    def __init__(self, a, b, hist):
        self.a = a
        self.b = b
        self.hist = hist

    def normalized(self):
        den = lcm_list([x.denominator for x in self.a] + [self.b.denominator])
        a = [x * den for x in self.a]
        b = self.b * den
        g = gcd_list([int(x) for x in a] + [int(b)])
        if g == 0:
            return _Row(tuple(Fraction(0) for _ in a), Fraction(0), self.hist)
        scale = Fraction(den, g)
        return _Row(
            tuple(x / g for x in a),
            b / g,
            {k: v * scale for k, v in self.hist.items()},
        )


def _combine(p, q, k):
    """Positive combination of rows p (a_k > 0) and q (a_k < 0) cancelling x_k."""
    cp, cq = -q.a[k], p.a[k]
    a = tuple(cp * x + cq * y for x, y in zip(p.a, q.a))
    hist = {key: cp * val for key, val in p.hist.items()}
    for key, val in q.hist.items():
        hist[key] = hist.get(key, 0) + cq * val
    return _Row(a, cp * p.b + cq * q.b, hist)


def _prune(rows):
    best = {}
    for r in rows:
        if not any(r.a):
            continue
        cur = best.get(r.a)
        if cur is None or r.b > cur.b or (r.b == cur.b and len(r.hist) < len(cur.hist)):
            best[r.a] = r
    return sorted(best.values(), key=lambda r: (r.a, r.b))


def _contradiction(rows):
    for r in rows:
        if not any(r.a) and r.b > 0:
            return r
    return None


def _eliminate(rows, k, eliminated):
    pos = [r for r in rows if r.a[k] > 0]
    neg = [r for r in rows if r.a[k] < 0]
    out = [r for r in rows if r.a[k] == 0]
    limit = eliminated + 1
    for p in pos:
        for q in neg:
            if len(p.hist.keys() | q.hist.keys()) > limit:
                continue
            out.append(_combine(p, q, k).normalized())
    bad = _contradiction(out)
    if bad is not None:
        return None, bad
    return _prune(out), None


def _fm_chain(rows, order):
    """Eliminate variables in ``order``; returns the list of intermediate systems.

    ``systems[i]`` is the system before eliminating ``order[i]``; the last entry
    is the system with every listed variable removed.  On infeasibility returns
    ``(None, contradicting_row)``.
    """
    bad = _contradiction(rows)
    if bad is not None:
        return None, bad
    systems = [_prune(rows)]
    for i, k in enumerate(order):
        nxt, bad = _eliminate(systems[-1], k, i + 1)
        if nxt is None:
            return None, bad
        systems.append(nxt)
    return systems, None


def _initial_rows(P):
    rows = []
    for i, (a, b) in enumerate(P.inequalities):
        rows.append(_Row(a, b, {i: Fraction(1)}).normalized())
    return rows


def _bounds(rows, k, values):
    """Bounds on x_k implied by rows once coordinates in ``values`` are fixed."""
    lo, hi = None, None
    for r in rows:
        c = r.a[k]
        rest = r.b - sum(r.a[j] * v for j, v in values.items())
        if c > 0:
            v = rest / c
            lo = v if lo is None or v > lo else lo
        elif c < 0:
            v = rest / c
            hi = v if hi is None or v < hi else hi
        elif rest > 0:
            return Fraction(1), Fraction(0)
    return lo, hi


def _pick(lo, hi):
    if (lo is None or lo <= 0) and (hi is None or hi >= 0):
        return Fraction(0)
    if lo is not None and lo > 0:
        c = Fraction(ceil(lo))
        return c if hi is None or c <= hi else lo
    c = Fraction(floor(hi))
    return c if lo is None or c >= lo else hi


def _reduce_equations(P):
    """Rewrite P in coordinates of its affine hull of equations.

    Returns ``(Q, origin, basis)`` with ``x = origin + sum t_i basis_i``, or
    ``None`` when the equations are inconsistent.
    """
    n = P.ambient_dim
    if not P.equations:
        return P, tuple(Fraction(0) for _ in range(n)), None
    A = [list(a) for a, _ in P.equations]
    origin = solve(A, [b for _, b in P.equations])
    if origin is None:
        return None
    basis = nullspace(A, n)
    ineqs = []
    for a, b in P.inequalities:
        ineqs.append(([dot(a, v) for v in basis], b - dot(a, origin)))
    return RationalPolyhedron(tuple(ineqs), dim=len(basis)), origin, basis


def lp_feasible(P):
    """Decide P != {} over Q.  The result is truthy iff feasible.

    A feasible result carries a witness point satisfying every row exactly;
    an infeasible one carries nonnegative multipliers (by inequality index)
    whose combination reads ``0 >= positive``.
    """
    reduced = _reduce_equations(P)
    if reduced is None:
        return Feasibility(False)
    Q, origin, basis = reduced
    n = Q.ambient_dim
    if n > MAX_FM_VARIABLES:
        raise ValueError(f"Fourier-Motzkin limited to {MAX_FM_VARIABLES} variables, got {n}")
    rows = _initial_rows(Q)
    order = list(range(n - 1, -1, -1))
    systems, bad = _fm_chain(rows, order)
    if systems is None:
        cert = dict(sorted(bad.hist.items()))
        _check_certificate(Q, cert)
        return Feasibility(False, certificate=cert)
    values = {}
    for j in range(n):
        rows_j = systems[n - 1 - j]
        lo, hi = _bounds(rows_j, j, values)
        values[j] = _pick(lo, hi)
    t = tuple(values[j] for j in range(n))
    if basis is None:
        x = t
    else:
        x = tuple(o + sum(ti * v[i] for ti, v in zip(t, basis)) for i, o in enumerate(origin))
    if not P.contains(x):
        raise AssertionError("Fourier-Motzkin witness failed re-check")
    return Feasibility(True, witness=x)


def _check_certificate(Q, cert):
    n = Q.ambient_dim
    combo = [Fraction(0)] * n
    rhs = Fraction(0)
    for i, lam in cert.items():
        if not isinstance(lam, Fraction):
            raise AssertionError("inexact Farkas multiplier")
        if lam < 0:
            raise AssertionError("negative Farkas multiplier")
        a, b = Q.inequalities[i]
        combo = [c + lam * x for c, x in zip(combo, a)]
        rhs += lam * b
    if any(combo) or rhs <= 0:
        raise AssertionError("Farkas certificate failed re-check")


def coordinate_range(P, j):
    """Exact (min, max) of coordinate j over P; ``None`` marks an unbounded side.

    Returns ``None`` when P is empty.
    """
    n = P.ambient_dim
    rows = [_Row(a, b, {i: Fraction(1)}).normalized() for i, (a, b) in enumerate(_as_inequalities(P))]
    order = [k for k in range(n - 1, -1, -1) if k != j]
    systems, _ = _fm_chain(rows, order)
    if systems is None:
        return None
    return _bounds(systems[-1], j, {})


def _as_inequalities(P):
    rows = list(P.inequalities)
    for a, b in P.equations:
        rows.append((a, b))
        rows.append((tuple(-x for x in a), -b))
    return rows


def lattice_points(P):
    """All integer points of a bounded polyhedron, in lexicographic order."""
    n = P.ambient_dim
    if n > MAX_FM_VARIABLES:
        raise ValueError(f"Fourier-Motzkin limited to {MAX_FM_VARIABLES} variables, got {n}")
    for j in range(n):
        rng = coordinate_range(P, j)
        if rng is None:
            return []
        lo, hi = rng
        if lo is None or hi is None:
            raise Unbounded(f"coordinate {j} is unbounded")
    rows = [_Row(a, b, {i: Fraction(1)}).normalized() for i, (a, b) in enumerate(_as_inequalities(P))]
    systems, _ = _fm_chain(rows, list(range(n - 1, -1, -1)))
    if systems is None:
        return []
    out = []

    def walk(j, values):
        if j == n:
            pt = tuple(int(values[k]) for k in range(n))
            if P.contains(pt):
                out.append(pt)
            return
        lo, hi = _bounds(systems[n - 1 - j], j, values)
        for v in range(ceil(lo), floor(hi) + 1):
            values[j] = Fraction(v)
            walk(j + 1, values)
        values.pop(j, None)

    if n == 0:
        return [()] if P.contains(()) else []
    walk(0, {})
    return out


def box_lattice_points(P, lower, upper):
    """Brute-force lattice points of P inside an explicit box (test oracle)."""
    ranges = [range(lo, hi + 1) for lo, hi in zip(lower, upper)]
    return [pt for pt in product(*ranges) if P.contains(pt)]


# ---------------------------------------------------------------------------
# Cones


def _span_coordinates(vectors):
    """Coordinates of the vectors in a basis of their common span."""
    R, pivots = rref([list(v) for v in vectors])
    return [tuple(Fraction(v[p]) for p in pivots) for v in vectors], len(pivots)


def cone_is_pointed(generators):
    gens = [g for g in generators if any(g)]
    if not gens:
        return True
    coords, r = _span_coordinates(gens)
    P = RationalPolyhedron(tuple((c, 1) for c in coords), dim=r)
    return bool(lp_feasible(P))


def cone_contains(generators, x):
    """Whether x lies in the cone generated by the given vectors (Farkas test)."""
    gens = [g for g in generators if any(g)]
    if not any(x):
        return True
    if not gens:
        return False
    coords, r = _span_coordinates(gens + [x])
    if r > rank(gens):
        return False
    xc = coords[-1]
    rows = [(c, 0) for c in coords[:-1]]
    rows.append((tuple(-v for v in xc), 1))
    return not lp_feasible(RationalPolyhedron(tuple(rows), dim=r))


def extreme_rays(generators):
    """Indices of generators spanning the extreme rays of the cone they generate.

    Zero vectors are ignored.  Generators pointing in the same direction are
    grouped and the group is represented by its first index.  Raises
    ``NotStronglyConvex`` when the cone contains a line.
    """
    idx = [i for i, g in enumerate(generators) if any(g)]
    if not idx:
        return []
    coords, r = _span_coordinates([generators[i] for i in idx])
    if not lp_feasible(RationalPolyhedron(tuple((c, 1) for c in coords), dim=r)):
        raise NotStronglyConvex("the generated cone contains a line")
    reps = {}
    for i, c in zip(idx, coords):
        reps.setdefault(primitive(c), (i, c))
    directions = list(reps.values())
    out = []
    for i, c in directions:
        rows = [(d, 0) for j, d in directions if j != i]
        rows.append((tuple(-v for v in c), 1))
        if lp_feasible(RationalPolyhedron(tuple(rows), dim=r)):
            out.append(i)
    return sorted(out)


# ---------------------------------------------------------------------------
# Polytopes


def affine_dimension(points):
    pts = [as_fraction_vector(p) for p in points]
    if not pts:
        return -1
    base = pts[0]
    return rank([[x - y for x, y in zip(p, base)] for p in pts[1:]]) if len(pts) > 1 else 0


def polytope_vertices(P):
    """Vertices of a bounded full-rank polytope by brute force over row subsets."""
    from itertools import combinations

    n = P.ambient_dim
    rows = _as_inequalities(P)
    found = set()
    for combo in combinations(range(len(rows)), n):
        A = [list(rows[i][0]) for i in combo]
        if rank(A) < n:
            continue
        x = solve(A, [rows[i][1] for i in combo])
        if x is not None and P.contains(x):
            found.add(x)
    return sorted(found)


def pulling_triangulation(vertices, tight_sets):
    """Triangulate conv(vertices) by pulling the lexicographically least vertex.

    ``tight_sets`` lists, per defining inequality, the indices of vertices on
    which it is tight; every face of the polytope is an intersection of these.
    Returns simplices as tuples of vertex indices.
    """
    verts = [as_fraction_vector(v) for v in vertices]
    tights = [frozenset(t) for t in tight_sets]
    memo = {}

    def rec(face, dim):
        key = face
        if key in memo:
            return memo[key]
        if dim == 0:
            res = [(next(iter(face)),)]
            memo[key] = res
            return res
        apex = min(face, key=lambda i: verts[i])
        facets = set()
        for t in tights:
            f = face & t
            if f != face and f and affine_dimension([verts[i] for i in f]) == dim - 1:
                facets.add(f)
        res = []
        for f in sorted(facets, key=sorted):
            if apex in f:
                continue
            for s in rec(f, dim - 1):
                res.append(s + (apex,))
        memo[key] = res
        return res

    all_idx = frozenset(range(len(verts)))
    d = affine_dimension(verts)
    if d < 0:
        return []
    return rec(all_idx, d)


def normalized_volume(vertices, tight_sets):
    """n! times the Euclidean volume of conv(vertices) (0 if not full-dimensional)."""
    verts = [as_fraction_vector(v) for v in vertices]
    if not verts:
        return Fraction(0)
    n = len(verts[0])
    if affine_dimension(verts) < n:
        return Fraction(0)
    total = Fraction(0)
    for simplex in pulling_triangulation(verts, tight_sets):
        base = verts[simplex[0]]
        M = [[x - y for x, y in zip(verts[i], base)] for i in simplex[1:]]
        total += abs(det(M))
    return total
