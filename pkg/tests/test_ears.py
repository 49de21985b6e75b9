from fractions import Fraction as Q

import pytest

from eala.exactnum import vec
from eala.ears import (
    Coset,
    DatumError,
    DegenerateDatum,
    bar_image,
    check_ea5a,
    check_ea5b,
    check_nondegenerate,
    compress_roots,
    contains,
    datum_from_json,
    datum_to_json,
    datum_summary,
    finite_datum,
    maps_datum,
    quantum_datum,
    radical,
    report,
    root_datum,
    split_roots,
    toroidal_datum,
)
from eala.rootsys import TypeLabel, recognize_type


def affine_a1_datum():
    # roots {±a + n d, n d} with (a,a) = 2 and d in the radical
    form = [[2, 0], [0, 0]]
    cosets = [
        Coset(vec([1, 0]), (1,)),
        Coset(vec([-1, 0]), (1,)),
        Coset(vec([0, 0]), (1,)),
    ]
    return root_datum(2, form, cosets, [vec([0, 1])])


def test_radical():
    assert radical(finite_datum(TypeLabel("A", 1))) == ()
    D = affine_a1_datum()
    rad = radical(D)
    assert len(rad) == 1 and rad[0][1] != 0 and rad[0][0] == 0
    T = toroidal_datum(TypeLabel("A", 1), 2)
    assert len(radical(T)) == 2


def test_split_roots():
    D = finite_datum(TypeLabel("A", 1))
    iso, noniso = split_roots(D)
    assert [c.rep for c in iso] == [(0, 0)[:1]] or [c.rep for c in iso] == [(Q(0),)]
    assert len(noniso) == 2
    A = affine_a1_datum()
    iso_a, noniso_a = split_roots(A)
    assert len(iso_a) == 1 and len(noniso_a) == 2
    Qd = quantum_datum(2, 1)
    iso_q, _ = split_roots(Qd)
    assert [c.moduli for c in iso_q] == [(1,)]


def test_contains_and_negation():
    D = affine_a1_datum()
    assert contains(D, vec([1, 5]))
    assert contains(D, vec([0, -3]))
    assert not contains(D, vec([2, 0]))
    assert not contains(D, vec([1, Q(1, 2)]))


def test_bar_image():
    D = affine_a1_datum()
    bar = bar_image(D)
    assert recognize_type(bar.roots, bar.form) == TypeLabel("A", 1)
    Qd = quantum_datum(3, 2)
    barq = bar_image(Qd)
    assert recognize_type(barq.roots, barq.form) == TypeLabel("A", 3)
    F = finite_datum(TypeLabel("A", 2))
    barf = bar_image(F)
    assert len(barf.roots) == 7


def test_bar_image_degenerate():
    form = [[0]]
    D = root_datum(1, form, [Coset(vec([0]), (1,)), Coset(vec([1]), (0,))], [vec([1])],
                   validate=False)
    with pytest.raises(DegenerateDatum):
        bar_image(D)


def test_ea5a():
    assert check_ea5a(finite_datum(TypeLabel("A", 2)))
    assert check_ea5a(quantum_datum(2, 1))
    # synthetic orthogonal union: two A1 blocks
    form = [[2, 0], [0, 2]]
    cosets = [Coset(vec([0, 0]), ()), Coset(vec([1, 0]), ()), Coset(vec([-1, 0]), ()),
              Coset(vec([0, 1]), ()), Coset(vec([0, -1]), ())]
    D = root_datum(2, form, cosets, ())
    assert not check_ea5a(D)


def test_ea5b_affine_and_finite():
    ok, _ = check_ea5b(affine_a1_datum())
    assert ok
    ok_f, _ = check_ea5b(finite_datum(TypeLabel("A", 1)))
    assert ok_f
    ok_q, _ = check_ea5b(quantum_datum(1, 2))
    assert ok_q


def test_ea5b_synthetic_failure():
    # {0, ±a, ±d', ±a±2d'} with a + d' missing
    form = [[2, 0], [0, 0]]
    iso = [vec([0, 1])]
    cosets = [
        Coset(vec([0, 0]), (0,)),
        Coset(vec([0, 1]), (0,)),
        Coset(vec([0, -1]), (0,)),
        Coset(vec([1, 0]), (0,)),
        Coset(vec([-1, 0]), (0,)),
        Coset(vec([1, 2]), (0,)),
        Coset(vec([1, -2]), (0,)),
        Coset(vec([-1, 2]), (0,)),
        Coset(vec([-1, -2]), (0,)),
    ]
    D = root_datum(2, form, cosets, iso)
    ok, witness = check_ea5b(D)
    assert not ok
    assert witness in (vec([0, 1]), vec([0, -1]))


def test_nondegenerate():
    assert check_nondegenerate(affine_a1_datum())
    assert check_nondegenerate(toroidal_datum(TypeLabel("A", 1), 2))
    assert check_nondegenerate(finite_datum(TypeLabel("A", 2)))


def test_report_affine_a1():
    rep = report(affine_a1_datum())
    assert rep.nullity == 1
    assert rep.type_label == TypeLabel("A", 1)
    assert rep.ea5a and rep.ea5b and rep.nondegenerate
    assert rep.isotropic_count == 1 and rep.nonisotropic_count == 2


def test_report_quantum_and_finite():
    rq = report(quantum_datum(4, 2))
    assert rq.nullity == 2 and rq.type_label == TypeLabel("A", 4)
    rf = report(finite_datum(TypeLabel("A", 2)))
    assert rf.nullity == 0 and rf.type_label == TypeLabel("A", 2)
    rt = report(toroidal_datum(TypeLabel("A", 1), 2))
    assert rt.nullity == 2 and rt.type_label == TypeLabel("A", 1)


def test_validation_rejects_asymmetric_set():
    form = [[2]]
    with pytest.raises(DatumError):
        root_datum(1, form, [Coset(vec([0]), ()), Coset(vec([1]), ())], ())


def test_validation_rejects_indefinite_form():
    form = [[-2]]
    with pytest.raises(DatumError):
        root_datum(1, form, [Coset(vec([0]), ()), Coset(vec([1]), ()), Coset(vec([-1]), ())], ())


def test_normalization_sets_minimal_norm_two():
    form = [[6]]
    D = root_datum(1, form, [Coset(vec([0]), ()), Coset(vec([1]), ()), Coset(vec([-1]), ())], ())
    assert D.norm(vec([1])) == 2


def test_maps_datum():
    D = affine_a1_datum()
    neg = [[-1, 0], [0, -1]]
    assert maps_datum(D, neg)
    shear = [[1, 0], [1, 1]]  # shifts every level by one: still the same root set
    assert maps_datum(D, shear)
    stretch = [[2, 0], [0, 1]]  # doubles the finite part: 2a is not a root
    assert not maps_datum(D, stretch)
    halve = [[1, 0], [0, Q(1, 2)]]  # breaks the isotropic lattice
    with pytest.raises(DatumError):
        maps_datum(D, halve)


def test_compress_roundtrip_affine():
    D = affine_a1_datum()
    roots = []
    for c in D.cosets:
        for n in range(-3, 4):
            roots.append(vec([c.rep[0], c.rep[1] + n]))
    comp = compress_roots(roots, D.form)
    assert datum_summary(comp.datum) == datum_summary(D)


def test_compress_mixed_moduli():
    # short roots on every level, long roots only on odd levels
    form = [[2, 0], [0, 0]]
    roots = []
    for n in range(-4, 5):
        roots.append(vec([1, n]))
        roots.append(vec([-1, n]))
        roots.append(vec([0, n]))
    for n in (-3, -1, 1, 3):
        roots.append(vec([2, n]))
        roots.append(vec([-2, n]))
    comp = compress_roots(roots, form)
    moduli = sorted(c.moduli[0] for c in comp.datum.cosets)
    assert moduli == [1, 1, 1, 2, 2]
    assert contains(comp.datum, vec([2, 5]))
    assert not contains(comp.datum, vec([2, 4]))


def test_compress_detects_non_progression():
    form = [[2, 0], [0, 0]]
    roots = [vec([0, 0]), vec([1, 0]), vec([-1, 0]), vec([1, 1]), vec([1, 3]),
             vec([1, 4]), vec([-1, 1]), vec([-1, 3]), vec([-1, 4])]
    with pytest.raises(DatumError):
        compress_roots(roots, form)


def test_json_roundtrip():
    for D in (affine_a1_datum(), quantum_datum(2, 2), finite_datum(TypeLabel("G", 2))):
        obj = datum_to_json(D)
        back = datum_from_json(obj)
        assert back == D
    with pytest.raises(DatumError):
        datum_from_json({"dim": 1, "form": [["x"]], "cosets": []})
