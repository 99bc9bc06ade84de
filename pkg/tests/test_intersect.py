from fractions import Fraction

import pytest

from toricmori.constructions import (
    corpus,
    fake_projective_3fold,
    projective_space,
    weighted_blowup_plane,
    weighted_projective_space,
)
from toricmori.divisor import canonical_divisor, prime_divisor, principal_divisor
from toricmori.errors import BoundaryWall, NotFakeWPS, NotQCartier
from toricmori.fan import Fan, multiplicity, walls
from toricmori.intersect import (
    curve_class,
    fake_wps_audit,
    fan_weights,
    numerically_equivalent,
    wall_classes,
    wall_degree,
    wall_normal,
)
from toricmori.lattice import nullspace

CORPUS = [ex for ex in corpus() if ex.fan.is_simplicial]


def wall_relation_class(F, w):
    """D_rho . V(tau) from the linear relation among the rays of the two cones.

    b v + b' v' + sum c_i u_i = 0 is scaled so that D_v . V(tau) equals
    mult(tau) / mult(sigma); the other degrees are proportional.
    """
    s1, s2 = F.max_cones[w.left], F.max_cones[w.right]
    (v,) = set(s1) - w.wall
    rays = sorted(set(s1) | set(s2))
    cols = [[F.rays[i][k] for i in rays] for k in range(F.rank)]
    (rel,) = nullspace(cols, len(rays))
    scale = Fraction(multiplicity(F, w.wall), multiplicity(F, s1)) / rel[rays.index(v)]
    out = [Fraction(0)] * F.n_rays
    for i, c in zip(rays, rel):
        out[i] = c * scale
    return tuple(out)


@pytest.mark.parametrize("ex", CORPUS, ids=lambda ex: ex.label)
def test_curve_classes_match_wall_relation(ex):
    for w, c in wall_classes(ex.fan):
        assert c.pairings == wall_relation_class(ex.fan, w)


def test_projective_space_lines():
    F = projective_space(3).fan
    for w, c in wall_classes(F):
        assert c.pairings == (1, 1, 1, 1)
        assert wall_degree(F, -canonical_divisor(F), w) == 4


def test_weighted_plane_degrees():
    F = weighted_projective_space([1, 1, 2]).fan
    degrees = sorted(wall_degree(F, -canonical_divisor(F), w) for w in walls(F))
    assert degrees == [2, 2, 4]
    D = prime_divisor(F, 2)
    assert sorted(wall_degree(F, D, w) for w in walls(F)) == [1, 1, 2]


def test_weighted_blowup_plane_golden_values():
    ex = weighted_blowup_plane()
    F = ex.fan
    (wE,) = [w for w in walls(F) if w.wall == frozenset([3])]
    assert wall_degree(F, -canonical_divisor(F), wE) == 1
    assert wall_degree(F, ex.divisors["E"], wE) == Fraction(-1, 2)


def test_chart_swap_and_normal_orientation():
    F = weighted_blowup_plane().fan
    K = canonical_divisor(F)
    for w in walls(F):
        nu = wall_normal(F, w)
        other = next(i for i in F.max_cones[w.right] if i not in w.wall)
        assert sum(a * b for a, b in zip(nu, F.rays[other])) > 0
        assert wall_degree(F, K, w) == wall_degree(F, K, w, swap=True)


def test_boundary_wall_and_non_q_cartier_errors():
    F = Fan([(1, 0), (1, 1), (0, 1)], [(0, 1), (1, 2)])
    boundary = next(w for w in walls(F) if not w.interior)
    with pytest.raises(BoundaryWall):
        wall_degree(F, canonical_divisor(F), boundary)
    with pytest.raises(BoundaryWall):
        curve_class(F, boundary)
    Q = Fan(
        [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1), (0, 0, -1)],
        [(0, 1, 2, 3), (0, 1, 4), (1, 2, 4), (2, 3, 4), (0, 3, 4)],
    )
    w = next(w for w in walls(Q) if w.wall == frozenset([0, 1]))
    with pytest.raises(NotQCartier):
        wall_degree(Q, prime_divisor(Q, 0), w)


def test_principal_divisors_are_numerically_trivial():
    F = weighted_blowup_plane().fan
    zero = prime_divisor(F, 0) * 0
    for u in [(1, 0), (0, 1), (3, -7)]:
        assert numerically_equivalent(F, principal_divisor(F, u), zero)


def test_fake_wps_audit_on_weighted_projective_space():
    F = weighted_projective_space([1, 1, 2]).fan
    audit = fake_wps_audit(F)
    assert audit.weights == (1, 1, 2)
    assert audit.oracle_agrees and audit.bound_holds
    assert audit.is_weighted_projective_space
    assert audit.distinguished.degree == 2 and audit.min_degree == 2
    assert not audit.equality_case


def test_fake_wps_audit_equality_on_projective_space():
    audit = fake_wps_audit(projective_space(3).fan)
    assert audit.equality_case and audit.equality_consistent


def test_fake_projective_3fold_index_and_weights():
    F = fake_projective_3fold().fan
    audit = fake_wps_audit(F)
    assert audit.lattice_index == 2 and not audit.is_weighted_projective_space
    assert audit.oracle_agrees
    assert fan_weights(F) == (1, 1, 1, 1)


def test_fan_weights_rejects_non_fake_wps():
    F = Fan([(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])
    with pytest.raises(NotFakeWPS):
        fan_weights(F)
