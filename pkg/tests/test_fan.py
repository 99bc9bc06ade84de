from fractions import Fraction

import pytest

from toricmori.constructions import projective_space, weighted_projective_space
from toricmori.errors import AlreadyARay, ConeNotInFan, NotARefinement, NotInSupport, NotSimplicial
from toricmori.fan import (
    Fan,
    finer_lattice_matrix,
    interior_walls,
    is_isomorphic,
    multiplicity,
    rebase_lattice,
    refinement_map,
    star_quotient,
    star_subdivision,
    unimodular_equivalence,
    validate_fan,
    walls,
)
from toricmori.lattice import inverse

P2 = Fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def test_projective_plane_is_a_complete_smooth_fan():
    r = validate_fan(P2)
    assert r.is_fan and r.is_complete and r.is_simplicial and r.is_smooth
    assert r.is_convex_support
    assert P2.picard_number == 1
    assert len(walls(P2)) == 3 and len(interior_walls(P2)) == 3


def test_rays_are_primitivized():
    F = Fan([(2, 0), (0, 3)], [(0, 1)])
    assert F.rays == ((1, 0), (0, 1))


def test_zero_ray_rejected():
    with pytest.raises(ValueError):
        Fan([(0, 0), (1, 0)], [(0, 1)])


def test_overlapping_cones_are_not_a_fan():
    F = Fan([(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
    r = validate_fan(F)
    assert not r.is_fan and r.issues


def test_non_pointed_cone_is_not_a_fan():
    F = Fan([(1, 0), (-1, 0), (0, 1)], [(0, 1, 2)])
    assert not validate_fan(F).is_fan


def test_incomplete_fan_with_convex_support():
    F = Fan([(1, 0), (1, 1), (0, 1)], [(0, 1), (1, 2)])
    r = validate_fan(F)
    assert r.is_fan and not r.is_complete and r.is_convex_support
    assert [w.interior for w in walls(F)].count(True) == 1


def test_non_convex_support():
    F = Fan([(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)])
    assert validate_fan(F).is_convex_support
    G = Fan([(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3)])
    assert not validate_fan(G).is_convex_support


def test_multiplicity():
    F = weighted_projective_space([1, 1, 2]).fan
    assert sorted(multiplicity(F, c) for c in F.max_cones) == [1, 1, 2]
    Q = Fan([(1, 0, 0), (0, 1, 0), (1, 1, 1), (0, 0, 1)], [(0, 1, 2, 3)])
    with pytest.raises(NotSimplicial):
        multiplicity(Q, (0, 1, 2, 3))


def test_star_subdivision_of_plane():
    X = star_subdivision(P2, (1, 2))
    assert X.rays == ((1, 0), (0, 1), (-1, -1), (1, 2))
    assert validate_fan(X).is_fan and validate_fan(X).is_complete
    assert len(X.max_cones) == 4
    with pytest.raises(AlreadyARay):
        star_subdivision(P2, (0, 1))
    F = Fan([(1, 0), (0, 1)], [(0, 1)])
    with pytest.raises(NotInSupport):
        star_subdivision(F, (-1, 1))


def test_star_quotient_of_exceptional_ray():
    X = star_subdivision(P2, (1, 2))
    Q, data = star_quotient(X, [3])
    assert Q.rank == 1 and Q.n_rays == 2 and validate_fan(Q).is_complete
    with pytest.raises(ConeNotInFan):
        star_quotient(X, [0, 1])


def test_refinement_map_exceptional_rays():
    X = star_subdivision(P2, (1, 1))
    f = refinement_map(X, P2)
    assert f.exceptional_rays == [3]
    assert f.image([3]) == frozenset([0, 1])
    assert not f.is_small
    with pytest.raises(NotARefinement):
        refinement_map(P2, X)


def test_finer_lattice_rebase_round_trip():
    F = projective_space(3).fan
    T, basis = finer_lattice_matrix([(0, 0, 0)], 3)
    assert rebase_lattice(F, T) == F
    T, _ = finer_lattice_matrix([(Fraction(1, 2), Fraction(1, 2), 0)], 3)
    G = rebase_lattice(F, T)
    assert validate_fan(G).is_fan
    assert rebase_lattice(G, inverse(T), allow_coarser=True) == F


def test_isomorphism_detects_coordinate_changes():
    G = Fan([(1, 1), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
    T = unimodular_equivalence(P2, G)
    assert T is not None
    assert is_isomorphic(P2, G)
    assert not is_isomorphic(P2, weighted_projective_space([1, 1, 2]).fan)

