from fractions import Fraction as Q
from math import gcd

import pytest

from eala.ears import contains, datum_summary, maps_datum, radical, split_roots
from eala.exactnum import mat_vec, vec
from eala.gcm import (
    AffineVerdict,
    GCMError,
    affine_catalog,
    affine_root_datum,
    affinization_verdict,
    diagram_action,
    diagram_automorphisms,
    gcm,
    is_transitive,
    null_root,
    twisted_affine,
    untwisted_affine,
    validate_affine,
)
from eala.rootsys import TypeLabel, cartan_matrix


def test_validate_affine_a1():
    A = gcm([[2, -2], [-2, 2]])
    assert validate_affine(A).values == (1, 1)


def test_validate_affine_cycles():
    for ell in range(2, 9):
        A = untwisted_affine(TypeLabel("A", ell))
        assert validate_affine(A).values == (1,) * (ell + 1)


def test_finite_matrix_rejected():
    with pytest.raises(GCMError):
        validate_affine(gcm(cartan_matrix("A", 2)))


def test_gcm_axioms_enforced():
    with pytest.raises(GCMError):
        gcm([[2, -1], [0, 2]])
    with pytest.raises(GCMError):
        gcm([[1, 0], [0, 2]])
    with pytest.raises(GCMError):
        gcm([[2, 1], [1, 2]])


def test_twisted_marks():
    assert validate_affine(twisted_affine("A2even", 1)).values == (2, 1)
    assert validate_affine(twisted_affine("A2even", 4)).values == (2, 2, 2, 2, 1)
    assert validate_affine(twisted_affine("A2odd", 3)).values == (1, 1, 2, 1)
    assert validate_affine(twisted_affine("D2", 4)).values == (1,) * 5
    assert validate_affine(twisted_affine("E6_2")).values == (1, 2, 3, 2, 1)
    assert validate_affine(twisted_affine("D4_3")).values == (1, 2, 1)


def test_catalog_all_affine():
    cat = affine_catalog(9)
    names = [n for n, _ in cat]
    assert len(names) == len(set(names))
    for name, A in cat:
        marks = validate_affine(A).values
        assert all(m > 0 for m in marks)
        assert gcd(*marks) == 1 if len(marks) > 1 else marks[0] == 1
        assert A.size <= 9


def test_automorphisms_a1_affine():
    A = gcm([[2, -2], [-2, 2]])
    autos = diagram_automorphisms(A)
    assert len(autos) == 2
    periods = sorted(a.period for a in autos)
    assert periods == [1, 2]


def test_automorphisms_cycle_dihedral():
    for ell in (2, 3, 5):
        A = untwisted_affine(TypeLabel("A", ell))
        autos = diagram_automorphisms(A)
        assert len(autos) == 2 * (ell + 1)
        perms = {a.perm for a in autos}
        # closure under composition and inverse
        for a in autos:
            inv = tuple(a.perm.index(i) for i in range(ell + 1))
            assert inv in perms
            for b in autos:
                comp = tuple(a.perm[b.perm[i]] for i in range(ell + 1))
                assert comp in perms


def test_automorphism_trivial_cases():
    assert len(diagram_automorphisms(gcm([[2]]))) == 1
    # the order-2 twisted matrix has no symmetry (asymmetric bond)
    assert len(diagram_automorphisms(twisted_affine("A2even", 1))) == 1


def test_marks_invariant_under_automorphisms():
    for name, A in affine_catalog(9):
        marks = validate_affine(A).values
        for auto in diagram_automorphisms(A):
            assert all(marks[auto.perm[i]] == marks[i] for i in range(A.size))


def test_is_transitive():
    A3 = untwisted_affine(TypeLabel("A", 2))
    rot = next(a for a in diagram_automorphisms(A3) if a.perm == (1, 2, 0))
    assert is_transitive(rot)
    A1 = gcm([[2, -2], [-2, 2]])
    swap = next(a for a in diagram_automorphisms(A1) if a.perm == (1, 0))
    assert is_transitive(swap)
    A4 = untwisted_affine(TypeLabel("A", 3))
    fix_flip = next(a for a in diagram_automorphisms(A4) if a.perm == (0, 3, 2, 1))
    assert not is_transitive(fix_flip)


def test_verdicts():
    A3 = untwisted_affine(TypeLabel("A", 2))
    rot = next(a for a in diagram_automorphisms(A3) if a.perm == (1, 2, 0))
    v = affinization_verdict(A3, rot)
    assert v == AffineVerdict(True, False, None)
    A4 = untwisted_affine(TypeLabel("A", 3))
    flip = next(a for a in diagram_automorphisms(A4) if a.perm == (0, 3, 2, 1))
    assert affinization_verdict(A4, flip) == AffineVerdict(False, True, 2)
    ident = next(a for a in diagram_automorphisms(A4) if a.period == 1)
    assert affinization_verdict(A4, ident) == AffineVerdict(False, True, 2)


def test_affine_datum_a1():
    A = gcm([[2, -2], [-2, 2]])
    D = affine_root_datum(A, 4)
    assert len(radical(D)) == 1
    iso, noniso = split_roots(D)
    assert len(iso) == 1 and len(noniso) == 2
    assert all(c.moduli == (1,) for c in D.cosets)
    delta = null_root(A)
    alpha1 = vec([0, 1])
    assert contains(D, vec([a + 3 * d for a, d in zip(alpha1, delta)]))


def test_affine_datum_a2():
    A = untwisted_affine(TypeLabel("A", 2))
    D = affine_root_datum(A, 4)
    iso, noniso = split_roots(D)
    assert len(noniso) == 6 and len(iso) == 1


def test_affine_datum_twisted():
    A = twisted_affine("A2even", 1)
    D = affine_root_datum(A, 4)
    iso, noniso = split_roots(D)
    assert len(iso) == 1
    moduli = sorted(c.moduli[0] for c in noniso)
    assert moduli == [1, 1, 2, 2]
    norms = sorted(set(D.norm(c.rep) for c in noniso))
    assert norms[1] == 4 * norms[0]  # non-reduced pattern: long = 4x short


def test_datum_closed_under_diagram_action():
    A = untwisted_affine(TypeLabel("A", 3))
    D = affine_root_datum(A, 3)
    delta = null_root(A)
    for auto in diagram_automorphisms(A):
        M = diagram_action(A, auto)
        assert maps_datum(D, M)
        assert mat_vec(M, delta) == delta


def test_rotation_projects_simple_roots_to_null_fraction():
    for ell in range(1, 9):
        A = untwisted_affine(TypeLabel("A", ell)) if ell > 1 else gcm([[2, -2], [-2, 2]])
        n = ell + 1
        rot = next(a for a in diagram_automorphisms(A) if a.perm == tuple((i + 1) % n for i in range(n)))
        M = diagram_action(A, rot)
        delta = null_root(A)
        for j in range(n):
            alpha = vec([1 if k == j else 0 for k in range(n)])
            avg = [Q(0)] * n
            cur = alpha
            for _ in range(rot.period):
                avg = [a + c for a, c in zip(avg, cur)]
                cur = mat_vec(M, cur)
            avg = vec([a / rot.period for a in avg])
            assert avg == vec([d / n for d in delta])


def test_transitive_characterization_on_cycles():
    # rotations with exponent coprime to the node count are exactly the
    # transitive symmetries of the cycle diagrams
    for ell in (1, 2, 3, 4, 5):
        A = untwisted_affine(TypeLabel("A", ell)) if ell > 1 else gcm([[2, -2], [-2, 2]])
        n = ell + 1
        rot = tuple((i + 1) % n for i in range(n))
        for auto in diagram_automorphisms(A):
            expected = False
            for t in range(n):
                if gcd(t, n) == 1:
                    power = tuple(_apply_power(rot, t, i) for i in range(n))
                    if auto.perm == power:
                        expected = True
            assert is_transitive(auto) == expected


def _apply_power(perm, t, i):
    for _ in range(t):
        i = perm[i]
    return i


def test_unstable_bound_rejected():
    A = gcm([[2, -2], [-2, 2]])
    with pytest.raises(GCMError):
        affine_root_datum(A, 1)
