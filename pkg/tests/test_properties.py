"""Property-based checks of the core invariants."""

from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from toricmori.constructions import corpus, projective_space, random_fake_wps
from toricmori.divisor import (
    TorusDivisor,
    discrepancies,
    prime_divisor,
    principal_divisor,
    pullback,
)
from toricmori.document import FanDocument
from toricmori.errors import AlreadyARay
from toricmori.fan import multiplicity, refinement_map, star_subdivision, validate_fan, walls
from toricmori.intersect import fake_wps_audit, wall_degree
from toricmori.lattice import gcd_list, solve
from toricmori.mori import is_nef, nef_by_rays

SETTINGS = settings(max_examples=40, deadline=None)
CORPUS = [ex for ex in corpus() if ex.fan.is_simplicial]

fans = st.sampled_from(CORPUS).map(lambda ex: ex.fan)
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)
fake_wps = st.tuples(st.integers(2, 4), st.integers(0, 10 ** 6)).map(
    lambda p: random_fake_wps(p[0], seed=p[1]).fan
)


def divisors(F):
    return st.lists(rationals, min_size=F.n_rays, max_size=F.n_rays).map(TorusDivisor)


def primitive_vectors(n):
    return st.lists(st.integers(-3, 3), min_size=n, max_size=n).filter(
        lambda v: any(v) and gcd_list(v) == 1
    )


@SETTINGS
@given(fake_wps)
def test_fake_wps_oracles_agree(F):
    audit = fake_wps_audit(F)
    assert audit.oracle_agrees
    assert audit.bound_holds
    assert audit.equality_consistent


@SETTINGS
@given(fans, st.data())
def test_chart_symmetry(F, data):
    D = data.draw(divisors(F))
    for w in walls(F):
        if w.interior:
            assert wall_degree(F, D, w) == wall_degree(F, D, w, swap=True)


@SETTINGS
@given(fans, st.data())
def test_principal_divisors_have_degree_zero(F, data):
    u = data.draw(st.lists(st.integers(-9, 9), min_size=F.rank, max_size=F.rank))
    P = principal_divisor(F, u)
    assert all(wall_degree(F, P, w) == 0 for w in walls(F) if w.interior)


@SETTINGS
@given(fans, st.data())
def test_nef_iff_nonnegative_on_extremal_rays(F, data):
    D = data.draw(divisors(F))
    assert is_nef(F, D) == nef_by_rays(F, D)


@SETTINGS
@given(fans, st.data())
def test_serialization_round_trip(F, data):
    D = data.draw(divisors(F))
    doc = FanDocument(F, {"D": D}, {"note": [Fraction(1, 3), 2]})
    text = doc.to_json()
    back = FanDocument.from_json(text)
    assert back.fan == F and back.divisors["D"] == D
    assert back.to_json() == text


@SETTINGS
@given(st.integers(2, 3), st.data())
def test_star_subdivision_discrepancy_matches_coordinates(n, data):
    """On P^n, K-discrepancy of the subdivision at v equals (sum of coordinates of v
    in the smooth cone containing it) - 1."""
    Y = projective_space(n).fan
    v = data.draw(primitive_vectors(n))
    try:
        X = star_subdivision(Y, v)
    except AlreadyARay:
        assume(False)
    assert validate_fan(X).is_complete
    f = refinement_map(X, Y)
    target = f.image([X.n_rays - 1])
    coords = solve([list(col) for col in zip(*[Y.rays[i] for i in sorted(target)])], list(v))
    ((_, a),) = discrepancies(f)
    assert a == sum(coords) - 1


@SETTINGS
@given(st.integers(2, 3), st.data())
def test_pullback_functoriality(n, data):
    Y = projective_space(n).fan
    v = data.draw(primitive_vectors(n))
    w = data.draw(primitive_vectors(n))
    try:
        X1 = star_subdivision(Y, v)
        X2 = star_subdivision(X1, w)
    except AlreadyARay:
        assume(False)
    direct = refinement_map(X2, Y)
    first, second = refinement_map(X1, Y), refinement_map(X2, X1)
    D = data.draw(divisors(Y))
    assert pullback(direct, D) == pullback(second, pullback(first, D))


@SETTINGS
@given(st.integers(2, 3), st.data())
def test_pullback_preserves_degrees_on_non_exceptional_curves(n, data):
    """Projection formula: f^*D . C = D . f_*C, so pullbacks of nef divisors are nef."""
    Y = projective_space(n).fan
    v = data.draw(primitive_vectors(n))
    try:
        X = star_subdivision(Y, v)
    except AlreadyARay:
        assume(False)
    f = refinement_map(X, Y)
    H = prime_divisor(Y, 0) * data.draw(st.integers(1, 3))
    assert is_nef(X, pullback(f, H))


@SETTINGS
@given(fake_wps)
def test_multiplicities_multiply_to_index_relation(F):
    """sum of the weights times the lattice index equals sum of cone multiplicities."""
    audit = fake_wps_audit(F)
    mults = [multiplicity(F, c) for c in F.max_cones]
    # mult(sigma_i) = a_i * index for the cone omitting ray i
    assert sorted(mults) == sorted(a * audit.lattice_index for a in audit.weights)
