"""Builders for the named varieties used throughout the test corpus.

Each builder returns an :class:`Example` carrying the fan, marked divisors
(by ray identity), related fans (bases of contractions, the other side of a
flip, ...) and expected values computed from the builder's parameters.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .divisor import TorusDivisor, canonical_divisor, prime_divisor, pullback
from .errors import BadParameters, ToricError
from .fan import (
    Fan,
    finer_lattice_matrix,
    multiplicity,
    rebase_lattice,
    refinement_map,
    star_subdivision,
)
from .lattice import gcd_list, nullspace, primitive, rank, saturation_quotient, vec_mat


@dataclass
class Example:
    name: str
    params: dict
    fan: Fan
    divisors: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    related: dict = field(default_factory=dict)
    ample: str = None  # name of a marked ample Cartier divisor
    notes: dict = field(default_factory=dict)  # informational, never checked

    @property
    def label(self):
        if not self.params:
            return self.name
        parts = []
        for k, v in sorted(self.params.items()):
            if isinstance(v, (list, tuple)):
                v = ",".join(str(x) for x in v)
            parts.append(f"{k}={v}")
        return f"{self.name}[{' '.join(parts)}]"


def _require(cond, message):
    if not cond:
        raise BadParameters(message)


def _unit(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def _all_but_one(m):
    return [tuple(j for j in range(m) if j != i) for i in range(m)]


# ---------------------------------------------------------------------------
# basic spaces


def projective_space(n=2):
    _require(n >= 1, "n must be positive")
    rays = [_unit(n, i) for i in range(n)] + [tuple([-1] * n)]
    F = Fan(rays, _all_but_one(n + 1), rank=n, name=f"P^{n}")
    O1 = prime_divisor(F, n)
    return Example(
        "projective_space",
        {"n": n},
        F,
        divisors={"O1": O1, "K": canonical_divisor(F)},
        expected={"threshold_O1": Fraction(n + 1), "length": Fraction(n + 1)},
        ample="O1",
    )


def _wps_rays(weights):
    n = len(weights) - 1
    if 1 in weights:
        j = weights.index(1)
        rays = []
        others = [i for i in range(n + 1) if i != j]
        for i in range(n + 1):
            if i == j:
                rays.append(tuple(-weights[o] for o in others))
            else:
                rays.append(_unit(n, others.index(i)))
        return rays
    P = saturation_quotient([weights], n + 1)
    return [tuple(row) for row in P]


def wps_divisor(F, weights, degree):
    """A torus-invariant representative of O(degree) on a weighted projective space."""
    for i, a in enumerate(weights):
        if degree % a == 0:
            return prime_divisor(F, i) * (degree // a)
    raise BadParameters(f"no prime divisor degree divides {degree}")


def weighted_projective_space(weights=(1, 1, 2), degree=None):
    weights = tuple(int(a) for a in weights)
    _require(len(weights) >= 2, "need at least two weights")
    _require(all(a > 0 for a in weights), "weights must be positive")
    _require(gcd_list(weights) == 1, "weights must be coprime")
    n = len(weights) - 1
    rays = _wps_rays(list(weights))
    F = Fan(rays, _all_but_one(n + 1), rank=n, name="P(" + ",".join(map(str, weights)) + ")")
    l = 1
    for a in weights:
        l = l * a // gcd(l, a)
    degree = degree or l
    D = wps_divisor(F, weights, degree)
    return Example(
        "weighted_projective_space",
        {"weights": list(weights)},
        F,
        divisors={"D": D, "K": canonical_divisor(F)},
        expected={"anticanonical_weight": sum(weights)},
        ample="D" if degree % l == 0 else None,
        notes={"degree": degree},
    )


def p1xp1():
    F = Fan([(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)], name="P1xP1")
    H = prime_divisor(F, 0) + prime_divisor(F, 2)
    return Example("p1xp1", {}, F, divisors={"H": H}, ample="H")


def blown_up_quadric():
    """P^1 x P^1 blown up at the fixed point where the first and third divisors meet."""
    base = p1xp1().fan
    F = star_subdivision(base, (1, 1), name="Bl_P(P1xP1)")
    D = {f"D{i + 1}": prime_divisor(F, i) for i in range(4)}
    D["E"] = prime_divisor(F, 4)
    H = D["D2"] + D["D4"] + (D["D1"] + D["D3"] + D["E"])
    D["H"] = H
    return Example(
        "blown_up_quadric",
        {},
        F,
        divisors=D,
        expected={"mori_generators": ("E", "D1", "D3"), "nef_generators": ("D2", "D4", "D1+D3+E")},
        related={"base": base},
        ample="H",
    )


def fake_projective_3fold():
    """P^3's fan over the lattice Z^3 + (1/2, 1/2, 0) Z."""
    Y = projective_space(3).fan
    T, basis = finer_lattice_matrix([(Fraction(1, 2), Fraction(1, 2), 0)], 3)
    F = rebase_lattice(Y, T)
    F.name = "P^3/(Z/2)"
    return Example(
        "fake_projective_3fold",
        {},
        F,
        divisors={"D4": prime_divisor(F, 3), "K": canonical_divisor(F), "twoD4": prime_divisor(F, 3) * 2},
        expected={"lattice_index": 2, "anticanonical_multiple": 4, "cartier_index_D4": 2},
        related={"cover": Y},
        ample="twoD4",
    )


# ---------------------------------------------------------------------------
# weighted blow-ups of cyclic quotient points


def quotient_blowup(n=3, a=2, b=3):
    """Blow-up of the cyclic quotient point of the cone <e_1..e_n> in Z^n + Z(1,a,...,a)/b."""
    _require(n >= 2, "n must be at least 2")
    _require(a >= 1 and b >= 1, "a and b must be positive")
    _require(gcd(a, b) == 1, "gcd(a, b) must be 1")
    gen = [Fraction(1, b)] + [Fraction(a, b)] * (n - 1)
    T, _ = finer_lattice_matrix([gen], n)
    cone = Fan([_unit(n, i) for i in range(n)], [tuple(range(n))], rank=n)
    Y = rebase_lattice(cone, T, name=f"Y(n={n},a={a},b={b})")
    v = vec_mat(gen, T)
    assert all(x.denominator == 1 for x in map(Fraction, v))
    v = tuple(int(x) for x in v)
    assert primitive(v) == v
    X = star_subdivision(Y, v, name=f"X(n={n},a={a},b={b})")
    E = prime_divisor(X, n)
    curve = frozenset(list(range(1, n - 1)) + [n])
    return Example(
        "quotient_blowup",
        {"n": n, "a": a, "b": b},
        X,
        divisors={"E": E, "K": canonical_divisor(X)},
        expected={
            "discrepancy": Fraction(1 + (n - 1) * a, b) - 1,
            "anticanonical_degree": Fraction(n - 1) - Fraction(b - 1, a),
            "E_degree": Fraction(-b, a),
        },
        related={"base": Y},
        notes={"curve": sorted(curve)},
    )


def acc_family(n=3, k=2, m=1):
    """The weighted blow-up above with a = k^2 and b = mk + 1."""
    _require(k >= 1 and m >= 1, "k and m must be positive")
    ex = quotient_blowup(n, k * k, m * k + 1)
    ex.name = "acc_family"
    ex.params = {"n": n, "k": k, "m": m}
    ex.expected["length"] = Fraction(n - 1) - Fraction(m, k)
    ex.expected["discrepancy"] = Fraction(1 + k * k * (n - 1), m * k + 1) - 1
    return ex


# ---------------------------------------------------------------------------
# small contractions


def flip_family(n=3, k=2, a=2):
    """A flipping contraction X -> W and its antiflip side X+ over one cone."""
    _require(n >= 3, "n must be at least 3")
    _require(2 <= k <= n - 1, "need 2 <= k <= n-1")
    _require(a >= 1, "a must be positive")
    _require(a * (n - k + 1) > k, "need a > k/(n-k+1)")
    rays = [_unit(n, i) for i in range(n)]
    rays.append(tuple([a] * (n - k + 1) + [-1] * (k - 1)))
    everything = list(range(n + 1))
    X = Fan(rays, [tuple(j for j in everything if j != i) for i in range(n - k + 1)], rank=n, name="X")
    Xp = Fan(rays, [tuple(j for j in everything if j != i) for i in range(n - k + 1, n + 1)], rank=n, name="X+")
    W = Fan(rays, [tuple(everything)], rank=n, name="W")
    return Example(
        "flip_family",
        {"n": n, "k": k, "a": a},
        X,
        divisors={"K": canonical_divisor(X)},
        expected={
            "length": Fraction(n - k + 1) - Fraction(k, a),
            "exceptional_dim": n - k,
            "antiflip_exceptional_dim": k - 1,
        },
        related={"X_plus": Xp, "W": W},
    )


# ---------------------------------------------------------------------------
# surfaces and bundles


def twisted_fibration():
    """Surface with a P^1-fibration over P^1 that is not a P^1-bundle."""
    rays = [(0, 1), (0, -1), (2, 1), (-1, 0)]
    F = Fan(rays, [(0, 2), (1, 2), (1, 3), (0, 3)], name="twisted")
    H = _ample_cartier(F)
    return Example(
        "twisted_fibration",
        {},
        F,
        divisors={"K": canonical_divisor(F), "H": H},
        expected={"fibre_length": Fraction(1)},
        ample="H",
    )


def projective_bundle(n=3, twists=(0, 0, 2)):
    """P_{P^1}(O(c_0) + ... + O(c_{n-1})) in the normal form v_+ = e_n, v_- = (c - c_0, -1)."""
    twists = tuple(int(c) for c in twists)
    _require(n >= 2, "n must be at least 2")
    _require(len(twists) == n, "need exactly n twists")
    m = n - 1
    rays = [_unit(n, i) for i in range(m)]
    rays.append(tuple([-1] * m + [0]))
    rays.append(_unit(n, m))
    rays.append(tuple(c - twists[0] for c in twists[1:]) + (-1,))
    fibre = list(range(n))
    cones = []
    for s in (n, n + 1):
        for drop in fibre:
            cones.append(tuple(sorted([j for j in fibre if j != drop] + [s])))
    F = Fan(rays, cones, rank=n, name="P(" + ",".join(f"O({c})" for c in twists) + ")")
    return Example(
        "projective_bundle",
        {"n": n, "twists": list(twists)},
        F,
        divisors={"K": canonical_divisor(F), "H": _ample_cartier(F)},
        expected={"fibre_length": Fraction(n)},
        ample="H",
    )


def blowup_point(n=3):
    """P^n blown up at a torus-fixed point, with D = f*B - E."""
    _require(n >= 2, "n must be at least 2")
    Y = projective_space(n).fan
    X = star_subdivision(Y, tuple([1] * n), name=f"Bl_pt P^{n}")
    rmap = refinement_map(X, Y)
    B = TorusDivisor([1] * (n + 1))
    fB = pullback(rmap, B)
    E = prime_divisor(X, n + 1)
    D = fB - E
    return Example(
        "blowup_point",
        {"n": n},
        X,
        divisors={"D": D, "E": E, "fB": fB, "K": canonical_divisor(X)},
        expected={"threshold": Fraction(n - 1), "discrepancy": Fraction(n - 1)},
        related={"base": Y},
        ample="D",
    )


def weighted_blowup_plane():
    """P^2 blown up at a fixed point with weight (1, 2)."""
    Y = projective_space(2).fan
    X = star_subdivision(Y, (1, 2), name="Bl_(1,2) P^2")
    K = canonical_divisor(X)
    return Example(
        "weighted_blowup_plane",
        {},
        X,
        divisors={"K": K, "D": -K, "E": prime_divisor(X, 3), "Eprime": prime_divisor(X, 1)},
        expected={
            "anticanonical_E": Fraction(1),
            "E_squared": Fraction(-1, 2),
            "cartier_index_E": 2,
            "extremal_rays": 2,
            "targets": ((1, 1, 1), (1, 1, 2)),
        },
        related={"base": Y},
        ample="D",
    )


def quadric_cone(n=2):
    """P(1,1,2,...,2) with D = O(2), so that -K = nD."""
    _require(n >= 2, "n must be at least 2")
    ex = weighted_projective_space([1, 1] + [2] * (n - 1), degree=2)
    ex.name = "quadric_cone"
    ex.params = {"n": n}
    ex.expected.update({"sections": n + 2, "volume": Fraction(2)})
    ex.notes["degree"] = 2
    return ex


def quadric_cone_resolution(n=2):
    """P_{P^1}(O + ... + O + O(2)), a crepant resolution of P(1,1,2,...,2).

    The K-trivial ray is contracted to recover the singular quadric cone and
    O(2) is pulled back to the tautological bundle O_Y(1).
    """
    from .intersect import fan_weights
    from .mori import contract_ray, mori_cone, ray_length

    ex = projective_bundle(n, [0] * (n - 1) + [2])
    ex.name = "quadric_cone_resolution"
    ex.params = {"n": n}
    Y = ex.fan
    trivial = [R for R in mori_cone(Y) if ray_length(Y, R) == 0]
    assert len(trivial) == 1
    con = contract_ray(Y, trivial[0])
    X = con.target
    weights = fan_weights(X)
    ex.divisors["O1"] = pullback(con.refinement, wps_divisor(X, weights, 2))
    ex.related["contraction"] = X
    ex.expected.update({"sections": n + 2, "volume": Fraction(2), "weights": tuple(sorted(weights))})
    return ex


def _ample_cartier(F):
    from .divisor import cartier_index
    from .mori import ample_witness

    H = ample_witness(F)
    return H * cartier_index(F, H)


def p1112():
    ex = weighted_projective_space([1, 1, 1, 2], degree=2)
    ex.name = "p1112"
    ex.params = {}
    D = ex.divisors["D"]
    ex.divisors["adjoint"] = canonical_divisor(ex.fan) + D * 4
    return ex


# ---------------------------------------------------------------------------
# fake weighted projective spaces


def fake_wps_from_rays(rays, name="fake_wps"):
    n = len(rays[0])
    F = Fan(rays, _all_but_one(n + 1), rank=n)
    return Example(name, {}, F, divisors={"K": canonical_divisor(F)})


def random_fake_wps(n=3, seed=0, box=3, rng=None):
    """Sample n+1 primitive vectors in [-box, box]^n with a positive relation."""
    rng = rng or random.Random(seed)
    while True:
        vecs = []
        while len(vecs) < n + 1:
            v = tuple(rng.randint(-box, box) for _ in range(n))
            if any(v) and gcd_list(v) == 1 and v not in vecs:
                vecs.append(v)
        cols = [[v[k] for v in vecs] for k in range(n)]
        if rank(cols) != n:
            continue
        ker = nullspace(cols, n + 1)
        if len(ker) != 1:
            continue
        a = ker[0]
        if all(x > 0 for x in a) or all(x < 0 for x in a):
            ex = fake_wps_from_rays(vecs, name="random_fake_wps")
            ex.params = {"n": n, "seed": seed, "box": box}
            return ex


def sample_fake_wps(count, max_dim=4, seed=0):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = 2 + i % (max_dim - 1)
        ex = random_fake_wps(n, rng=rng)
        ex.name, ex.params = "fake_wps", {"n": n, "index": i}
        out.append(ex)
    return out


# ---------------------------------------------------------------------------
# registry


BUILDERS = {
    "projective_space": projective_space,
    "pn": projective_space,
    "weighted_projective_space": weighted_projective_space,
    "wps": weighted_projective_space,
    "p1xp1": p1xp1,
    "blown_up_quadric": blown_up_quadric,
    "fake_projective_3fold": fake_projective_3fold,
    "quotient_blowup": quotient_blowup,
    "acc_family": acc_family,
    "flip_family": flip_family,
    "twisted_fibration": twisted_fibration,
    "projective_bundle": projective_bundle,
    "blowup_point": blowup_point,
    "weighted_blowup_plane": weighted_blowup_plane,
    "quadric_cone": quadric_cone,
    "quadric_cone_resolution": quadric_cone_resolution,
    "p1112": p1112,
    "random_fake_wps": random_fake_wps,
}

LIST_PARAMS = {"weights", "twists"}


def build(name, **params):
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise BadParameters(f"unknown example {name!r}; known: {', '.join(sorted(BUILDERS))}")
    try:
        return builder(**params)
    except TypeError as exc:
        raise BadParameters(str(exc))


def weighted_blowup(F, cone, weights, name=None):
    """Star subdivision of a smooth maximal cone at sum w_i v_i."""
    cone = sorted(cone)
    _require(len(weights) == len(cone), "one weight per ray of the cone")
    _require(all(int(w) > 0 for w in weights), "weights must be positive")
    _require(gcd_list(weights) == 1, "weights must be coprime")
    if not F.is_simplicial_cone(cone) or multiplicity(F, cone) != 1:
        raise NotSmoothCone(f"cone {cone} is not smooth")
    v = tuple(sum(int(w) * F.rays[i][k] for w, i in zip(weights, cone)) for k in range(F.rank))
    return star_subdivision(F, v, name=name)


class NotSmoothCone(ToricError):
    pass


def corpus():
    """The shipped corpus used by the verification harness."""
    out = [projective_space(n) for n in (1, 2, 3, 4)]
    out += [p1xp1(), blown_up_quadric(), fake_projective_3fold(), twisted_fibration()]
    out += [weighted_blowup_plane(), p1112()]
    out += [weighted_projective_space(w) for w in ([1, 1, 2], [1, 2, 3], [1, 1, 1, 3], [1, 2, 2, 3])]
    out += [quadric_cone(n) for n in (2, 3)]
    out += [quadric_cone_resolution(n) for n in (2, 3)]
    out += [projective_bundle(3, t) for t in ([0, 0, 1], [0, 0, 2], [0, 1, 1], [0, 1, 2])]
    out += [projective_bundle(2, [0, 3])]
    out += [blowup_point(n) for n in (2, 3, 4)]
    out += [quotient_blowup(n, a, b) for n, a, b in ((2, 2, 1), (3, 2, 1), (3, 2, 3), (4, 3, 2), (3, 1, 2))]
    out += [acc_family(n, k, m) for n, k, m in ((3, 2, 1), (4, 2, 1), (4, 3, 2))]
    out += [flip_family(n, k, a) for n, k, a in ((3, 2, 2), (4, 2, 1), (4, 3, 2), (5, 3, 3))]
    out += sample_fake_wps(6, 4, seed=7)
    return out
