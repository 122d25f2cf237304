import itertools
from math import comb

import pytest

from freelines.gf import field_make
from freelines.numerology import CIProfile, classify_tuple
from freelines.witness import (
    CERTIFIED_SMOOTH,
    CYCLIC,
    FERMAT,
    NO_FREE_LINES_CERTIFIED,
    NO_SINGULAR_UP_TO,
    SINGULAR_FOUND,
    cyclic_identities,
    cyclic_identities_check,
    cyclic_witness,
    detect_family,
    fermat,
    jacobian_minors,
    jacobian_singular_scan,
    lucas_binomial,
    projective_points,
    random_ci,
    vanishing_components,
    witness_hypotheses,
)


def test_fermat_shapes(F3, F7):
    assert fermat(3, 3, F7).render() == "t0^3 + t1^3 + t2^3 + t3^3"
    assert fermat(1, 2, F3).render() == "t0^2 + t1^2"
    assert len(fermat(5, 4, F3)) == 6


def test_cyclic_tilde(F2):
    g = cyclic_witness(7, 6, F2)
    assert len(g) == 9
    assert g.coefficient((6, 0, 0, 0, 0, 0, 0, 0)).code == 1
    assert g.coefficient((1, 0, 0, 0, 0, 0, 0, 5)).code == 1
    for j in range(7):
        e = [0] * 8
        e[j], e[j + 1] = 5, 1
        assert g.coefficient(e).code == 1


def test_cyclic_plain(F2):
    g = cyclic_witness(6, 6, F2)
    assert len(g) == 7
    assert g.coefficient((6, 0, 0, 0, 0, 0, 0)).code == 0


def test_cyclic_requires_p_divides_d(F2):
    with pytest.raises(ValueError, match="p does not divide d"):
        cyclic_witness(7, 5, F2)


def test_detect_family(F2, F3):
    assert detect_family(fermat(5, 4, F3)) == FERMAT
    assert detect_family(cyclic_witness(7, 6, F2)) == CYCLIC
    assert detect_family(fermat(5, 3, F3) + cyclic_witness(5, 3, F3)) is None


# -- Lucas ------------------------------------------------------------------------


@pytest.mark.parametrize("d,ell,p,value", [(4, 2, 3, 0), (7, 3, 5, 0), (9, 0, 2, 1), (10, 10, 7, 1)])
def test_lucas_examples(d, ell, p, value):
    assert lucas_binomial(d, ell, p) == value == comb(d, ell) % p


def test_lucas_out_of_range():
    with pytest.raises(ValueError):
        lucas_binomial(4, 5, 3)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_lucas_oracle(p):
    for d in range(41):
        for ell in range(d + 1):
            assert lucas_binomial(d, ell, p) == comb(d, ell) % p


# -- vanishing components ------------------------------------------------------------


def test_vanishing_fermat_quartic(F3):
    r = vanishing_components(fermat(5, 4, F3), FERMAT)
    assert r.computed_zero_set == (2,) == r.predicted_zero_set
    assert r.agree and r.verdict == NO_FREE_LINES_CERTIFIED


def test_vanishing_below_p(F3):
    r = vanishing_components(fermat(4, 2, F3), FERMAT)
    assert r.computed_zero_set == () and r.verdict is None


def test_vanishing_without_hint(F3):
    r = vanishing_components(fermat(5, 4, F3))
    assert r.predicted_zero_set is None and r.agree is None
    assert r.computed_zero_set == (2,)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_fermat_prediction_is_exact(p):
    F = field_make(p)
    for d in range(2, 21):
        r = vanishing_components(fermat(2, d, F), FERMAT)
        assert set(r.computed_zero_set) == set(r.predicted_zero_set), d


def test_vanishing_cyclic_7_6(F2):
    r = vanishing_components(cyclic_witness(7, 6, F2), CYCLIC)
    assert 3 in r.computed_zero_set
    assert all(ell % 4 == 3 for ell in r.predicted_zero_set)
    assert r.prediction["modulus"] == 4 and r.prediction["r"] == 2
    assert r.agree and r.verdict == NO_FREE_LINES_CERTIFIED


@pytest.mark.parametrize("n,d,p", [(7, 6, 2), (11, 10, 2), (13, 12, 3), (6, 6, 2), (5, 6, 3), (8, 9, 3)])
def test_cyclic_prediction_contained_in_computed(n, d, p):
    # ell outside the classes 0..r mod p^v must give a zero component
    F = field_make(p)
    r = vanishing_components(cyclic_witness(n, d, F), CYCLIC)
    assert set(r.predicted_zero_set) <= set(r.computed_zero_set)


def test_cyclic_prediction_is_one_sided(F2):
    r = vanishing_components(cyclic_witness(11, 10, F2), CYCLIC)
    assert r.predicted_zero_set == (3, 7)
    assert r.computed_zero_set == (3, 4, 5, 6, 7)


@pytest.mark.parametrize("n,d,p", [(7, 6, 2), (11, 10, 2), (13, 12, 3)])
def test_nonspecial_witness_certified(n, d, p):
    assert classify_tuple((d,), p) == "nonspecial" and d >= p and d % p == 0
    r = vanishing_components(cyclic_witness(n, d, field_make(p)), CYCLIC)
    assert r.verdict == NO_FREE_LINES_CERTIFIED


# -- smoothness ---------------------------------------------------------------------


def test_projective_point_order(F2):
    pts = list(projective_points(2, F2))
    assert len(pts) == 7
    assert pts == sorted(pts)
    assert pts[0] == (0, 0, 1)


def test_scan_fermat_cubic_char_3(F3):
    v = jacobian_singular_scan([fermat(3, 3, F3)], 3, F3, 1)
    assert v.status == SINGULAR_FOUND
    assert v.witness_point == (0, 0, 1, 2)
    g = fermat(3, 3, F3)
    assert g.evaluate(v.witness_point) == 0
    assert not any(jacobian_minors([g], v.witness_point))


def test_scan_fermat_cubic_char_7(F7):
    v = jacobian_singular_scan([fermat(3, 3, F7)], 3, F7, 2)
    assert v.status == CERTIFIED_SMOOTH and v.scanned_extensions == (1, 2)


def test_scan_cyclic(F2):
    v = jacobian_singular_scan([cyclic_witness(7, 6, F2)], 7, F2, 2)
    assert v.status == NO_SINGULAR_UP_TO
    assert v.certificate == "cyclic_identities"


def test_scan_singular_quadric_cone(F3):
    from freelines.mpoly import poly_parse

    g = poly_parse("t0^2 + t1^2 - t2^2", 4, F3)  # cone over a conic, vertex (0:0:0:1)
    v = jacobian_singular_scan([g], 3, F3, 1)
    assert v.status == SINGULAR_FOUND and v.witness_point == (0, 0, 0, 1)


def test_scan_singular_complete_intersection(F3):
    from freelines.mpoly import poly_parse

    # two quadrics tangent along (0:0:0:1): both contain it with parallel gradients
    g1 = poly_parse("t0*t3 + t1^2", 4, F3)
    g2 = poly_parse("t0*t3 + t2^2", 4, F3)
    v = jacobian_singular_scan([g1, g2], 3, F3, 1)
    assert v.status == SINGULAR_FOUND
    pt = v.witness_point
    assert g1.evaluate(pt) == g2.evaluate(pt) == 0
    assert not any(jacobian_minors([g1, g2], pt))


def test_scan_errors(F3):
    with pytest.raises(ValueError):
        jacobian_singular_scan([], 3, F3)
    with pytest.raises(ValueError):
        jacobian_singular_scan([fermat(2, 3, F3)], 3, F3)


def test_scan_independent_of_workers(F3):
    g = fermat(3, 3, F3)
    assert jacobian_singular_scan([g], 3, F3, 1, workers=1) == jacobian_singular_scan([g], 3, F3, 1, workers=3)


def test_scan_first_hit_is_globally_first(F3):
    g = fermat(4, 3, F3)  # every point is singular in char 3
    v = jacobian_singular_scan([g], 4, F3, 1)
    first = next(pt for pt in projective_points(4, F3) if g.evaluate(pt) == 0)
    assert v.witness_point == first


# -- cyclic identities ---------------------------------------------------------------


@pytest.mark.parametrize("n,d,p", [(7, 6, 2), (6, 6, 2), (11, 10, 2), (5, 6, 3), (8, 9, 3), (4, 5, 5)])
def test_cyclic_identities(n, d, p):
    assert cyclic_identities_check(n, d, p)
    assert cyclic_identities(n, d, p)["tilde"] == ((n + 1) % p == 0)


def test_cyclic_identities_error():
    with pytest.raises(ValueError):
        cyclic_identities_check(7, 5, 2)


def test_cyclic_partials_pointwise(F3):
    # independent check of identity (a): compare partials with the formula at every F_3 point
    n, d = 5, 6
    g = cyclic_witness(n, d, F3)
    partials = [g.partial(i) for i in range(n + 1)]
    for pt in itertools.islice(projective_points(n, F3), 200):
        for i in range(n + 1):
            expect = (pt[i - 1] ** (d - 1) - pt[i] ** (d - 2) * pt[(i + 1) % (n + 1)]) % 3
            assert partials[i].evaluate(pt) == expect


# -- random complete intersections ---------------------------------------------------


def test_random_ci_shape(F3):
    prof = CIProfile(8, (4, 2), 3)
    polys = random_ci(prof, F3, 0)
    assert polys[0] == fermat(8, 4, F3)
    assert polys[1].degree == 2 and len(polys[1]) > 1
    assert random_ci(prof, F3, 0) == polys
    assert random_ci(prof, F3, 1) != polys


def test_random_ci_smooth_for_some_seed(F3):
    prof = CIProfile(8, (4, 2), 3)
    statuses = []
    for seed in range(11):
        v = jacobian_singular_scan(random_ci(prof, F3, seed), 8, F3, 1)
        statuses.append(v.status)
        if v.status == NO_SINGULAR_UP_TO:
            break
    assert NO_SINGULAR_UP_TO in statuses


def test_witness_hypotheses():
    h = witness_hypotheses(FERMAT, 5, 4, 3)
    assert h["d_plus_1_label"] == "nonspecial" and h["p_prime_to_d"]
    h = witness_hypotheses(CYCLIC, 7, 6, 2)
    assert h["n_plus_1_p_divisible"] and h["d_label"] == "nonspecial"
