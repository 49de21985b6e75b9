"""Extended affine root data in a finite coset presentation.

An infinite root set (affine, toroidal, quantum-torus) is stored as finitely
many cosets: a representative root plus arithmetic progressions along a basis
of isotropic directions.  A modulus of 0 freezes the coefficient at the
representative's value, so purely finite data are the special case with all
moduli 0 or no isotropic directions at all.  Every check quantifies over this
finite presentation; sweeps over residues modulo the lcm of the moduli are
complete because membership conditions are congruences modulo the individual
coset moduli.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import product
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from functools import lru_cache

from .exactnum import (
    Cyclotomic,
    Matrix,
    Vector,
    as_matrix,
    basis_solver,
    coords_in_basis,
    form_value,
    gram,
    is_zero_vector,
    kernel,
    psd_witness,
    rank,
    rank_generic,
    row_basis,
    vec,
    vec_add,
    vec_scale,
    vec_sub,
)
from .rootsys import FiniteRootSystem, TypeLabel, build_finite, from_vectors, recognize_type


class DatumError(ValueError):
    pass


class DegenerateDatum(DatumError):
    """Raised when a computation needs nonisotropic roots and there are none."""


@dataclass(frozen=True)
class Coset:
    rep: Vector
    moduli: Tuple[int, ...]


@dataclass(frozen=True)
class RootDatum:
    dim: int
    form: Matrix
    cosets: Tuple[Coset, ...]
    isotropic_basis: Tuple[Vector, ...]
    m_period: Optional[int] = None

    def pairing(self, u: Vector, v: Vector) -> Q:
        return form_value(self.form, u, v)

    def norm(self, v: Vector) -> Q:
        return self.pairing(v, v)


@dataclass(frozen=True)
class EalaRootReport:
    nullity: int
    type_label: TypeLabel
    isotropic_count: int
    nonisotropic_count: int
    ea5a: bool
    ea5b: bool
    nondegenerate: bool


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def root_datum(
    dim: int,
    form,
    cosets: Iterable[Coset],
    isotropic_basis: Iterable[Vector] = (),
    m_period: Optional[int] = None,
    normalize: bool = True,
    validate: bool = True,
) -> RootDatum:
    form = as_matrix(form)
    iso = tuple(vec(v) for v in isotropic_basis)
    cs = tuple(Coset(vec(c.rep), tuple(int(m) for m in c.moduli)) for c in cosets)
    if len(form) != dim or any(len(r) != dim for r in form):
        raise DatumError("form has the wrong shape")
    for c in cs:
        if len(c.rep) != dim:
            raise DatumError("coset representative has the wrong dimension")
        if len(c.moduli) != len(iso):
            raise DatumError("moduli length must match the isotropic basis")
        if any(m < 0 for m in c.moduli):
            raise DatumError("moduli must be nonnegative")
    if normalize and cs:
        norms = [form_value(form, c.rep, c.rep) for c in cs]
        positive = [n for n in norms if n > 0]
        if positive and not any(n < 0 for n in norms) and min(positive) != 2:
            scale = Q(2) / min(positive)
            form = tuple(tuple(scale * x for x in row) for row in form)
    D = RootDatum(dim, form, cs, iso, m_period)
    if validate:
        validate_datum(D)
    return D


def validate_datum(D: RootDatum) -> None:
    if not D.cosets:
        raise DatumError("a root datum needs at least one coset")
    if D.isotropic_basis and rank(D.isotropic_basis) != len(D.isotropic_basis):
        raise DatumError("isotropic generators are dependent")
    span = row_basis([c.rep for c in D.cosets] + list(D.isotropic_basis))
    w = psd_witness(gram(span, D.form))
    if w is not None:
        bad = [Q(0)] * D.dim
        for coeff, b in zip(w, span):
            for k in range(D.dim):
                bad[k] += coeff * b[k]
        raise DatumError(f"form is not positive semidefinite on the root span; witness {tuple(bad)}")
    for g in D.isotropic_basis:
        if D.norm(g) != 0:
            raise DatumError("isotropic generator has nonzero norm")
        for c in D.cosets:
            if D.pairing(g, c.rep) != 0:
                raise DatumError("isotropic generator pairs nontrivially with a root")
    if not contains(D, vec([0] * D.dim)):
        raise DatumError("0 must be a root")
    neg = tuple(tuple(-Q(1) if i == j else Q(0) for j in range(D.dim)) for i in range(D.dim))
    bad_neg = maps_datum_witness(D, neg)
    if bad_neg is not None:
        raise DatumError(f"root set is not symmetric: -{bad_neg} is missing")
    iso_c, noniso_c = split_roots(D)
    for a in iso_c:
        for b in noniso_c:
            if D.pairing(a.rep, b.rep) != 0:
                raise DatumError("isotropic roots must pair to zero with nonisotropic roots")


def split_roots(D: RootDatum) -> Tuple[Tuple[Coset, ...], Tuple[Coset, ...]]:
    iso = tuple(c for c in D.cosets if D.norm(c.rep) == 0)
    noniso = tuple(c for c in D.cosets if D.norm(c.rep) != 0)
    return iso, noniso


@lru_cache(maxsize=256)
def _membership_index(D: RootDatum):
    """Hash the cosets by their coordinates transverse to the isotropic span."""
    nu = len(D.isotropic_basis)
    basis: List[Vector] = list(D.isotropic_basis)
    have = rank(basis) if basis else 0
    for j in range(D.dim):
        e = tuple(Q(1) if k == j else Q(0) for k in range(D.dim))
        if rank(basis + [e]) > have:
            basis.append(e)
            have += 1
    solver = basis_solver(basis)
    index: Dict[Tuple[Q, ...], List[Tuple[Coset, Tuple[Q, ...]]]] = {}
    for c in D.cosets:
        co = solver(c.rep)
        assert co is not None
        index.setdefault(co[nu:], []).append((c, co[:nu]))
    return solver, index, nu


def contains(D: RootDatum, v: Vector) -> bool:
    solver, index, nu = _membership_index(D)
    co = solver(v)
    if co is None:
        return False
    for c, rep_iso in index.get(co[nu:], ()):
        ok = True
        for x, y, m in zip(co[:nu], rep_iso, c.moduli):
            d = x - y
            if m == 0:
                if d != 0:
                    ok = False
                    break
            else:
                if d.denominator != 1 or int(d) % m:
                    ok = False
                    break
        if ok:
            return True
    return False


def coefficient_period(D: RootDatum) -> int:
    """lcm of all nonzero progression moduli; membership is periodic mod this."""
    L = 1
    for c in D.cosets:
        for m in c.moduli:
            if m:
                L = L * m // gcd(L, m)
    return L


def residue_lifts(D: RootDatum, c: Coset, period: Optional[int] = None) -> List[Vector]:
    """One concrete root per residue class of the coset's coefficients."""
    L = coefficient_period(D) if period is None else period
    ranges = []
    for m in c.moduli:
        ranges.append(range(L // m) if m else range(1))
    out = []
    for ns in product(*ranges):
        v = c.rep
        for n, m, g in zip(ns, c.moduli, D.isotropic_basis):
            if m and n:
                v = vec_add(v, vec_scale(Q(m * n), g))
        out.append(v)
    return out


def maps_datum_witness(D: RootDatum, M: Matrix) -> Optional[Vector]:
    """A root whose image under M leaves the root set, or None if M(R) ⊆ R.

    M must act on the isotropic generators as a signed permutation; root sets
    presented by progressions are only closed under such maps here.
    """
    for g in D.isotropic_basis:
        img = tuple(sum(row[j] * g[j] for j in range(D.dim)) for row in M)
        coords = coords_in_basis(D.isotropic_basis, img)
        if coords is None or sorted(abs(x) for x in coords) != [Q(0)] * (len(coords) - 1) + [Q(1)]:
            raise DatumError("map does not act on the isotropic lattice by a signed permutation")
    for c in D.cosets:
        for x in residue_lifts(D, c):
            img = tuple(sum(row[j] * x[j] for j in range(D.dim)) for row in M)
            if not contains(D, img):
                return x
    return None


def maps_datum(D: RootDatum, M: Matrix) -> bool:
    return maps_datum_witness(D, M) is None


# ---------------------------------------------------------------------------
# the radical and the finite quotient
# ---------------------------------------------------------------------------

def radical(D: RootDatum) -> Tuple[Vector, ...]:
    """Basis of the radical of the form on the span of the roots."""
    span = row_basis([c.rep for c in D.cosets] + list(D.isotropic_basis))
    if not span:
        return ()
    G = gram(span, D.form)
    w = psd_witness(G)
    if w is not None:
        raise DatumError(f"form is not positive semidefinite; witness coordinates {w}")
    out = []
    for coeffs in kernel(G):
        v = [Q(0)] * D.dim
        for coeff, b in zip(coeffs, span):
            for k in range(D.dim):
                v[k] += coeff * b[k]
        out.append(tuple(v))
    return tuple(out)


def _complement_basis(span: Sequence[Vector], rad: Sequence[Vector]) -> List[Vector]:
    chosen: List[Vector] = list(rad)
    comp: List[Vector] = []
    r = rank(chosen) if chosen else 0
    for b in span:
        if rank(chosen + [b]) > r:
            chosen.append(b)
            comp.append(b)
            r += 1
    return comp


def bar_image(D: RootDatum) -> FiniteRootSystem:
    """The image of the roots modulo the radical, as a finite root system."""
    iso_c, noniso_c = split_roots(D)
    if not noniso_c:
        raise DegenerateDatum("no nonisotropic roots: the quotient is not a root system")
    rad = radical(D)
    span = row_basis([c.rep for c in D.cosets] + list(D.isotropic_basis))
    comp = _complement_basis(span, rad)
    basis = list(rad) + comp
    bar_vectors = []
    for c in noniso_c:
        coords = coords_in_basis(basis, c.rep)
        assert coords is not None
        bar_vectors.append(vec(coords[len(rad):]))
    return from_vectors(bar_vectors + [vec([0] * len(comp))], gram(comp, D.form))


# ---------------------------------------------------------------------------
# axioms on the root side
# ---------------------------------------------------------------------------

def check_ea5a(D: RootDatum) -> bool:
    """Orthogonal indecomposability of the nonisotropic roots."""
    _, noniso = split_roots(D)
    if len(noniso) <= 1:
        return True
    reps = [c.rep for c in noniso]
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in range(len(reps)):
            if j not in seen and D.pairing(reps[i], reps[j]) != 0:
                seen.add(j)
                frontier.append(j)
    return len(seen) == len(reps)


def check_ea5b(D: RootDatum) -> Tuple[bool, Optional[Vector]]:
    """Every isotropic root admits a nonisotropic root whose shift stays a root."""
    iso_c, noniso_c = split_roots(D)
    L = coefficient_period(D)
    for c0 in iso_c:
        for delta in residue_lifts(D, c0, L):
            found = False
            for c1 in noniso_c:
                for alpha in residue_lifts(D, c1, L):
                    if contains(D, vec_add(alpha, delta)):
                        found = True
                        break
                if found:
                    break
            if not found:
                return False, delta
    return True, None


def check_nondegenerate(D: RootDatum) -> bool:
    """Rank of the isotropic span is the same over the rationals and over an extension."""
    iso_c, _ = split_roots(D)
    gens: List[Vector] = [c.rep for c in iso_c if any(c.rep)]
    for k, g in enumerate(D.isotropic_basis):
        if any(c.moduli[k] for c in iso_c):
            gens.append(g)
    if not gens:
        return True
    rank_q = rank(gens)
    one = Cyclotomic.one(4)
    rank_ext = rank_generic([[one * x for x in g] for g in gens])
    return rank_q == rank_ext


def report(D: RootDatum) -> EalaRootReport:
    iso_c, noniso_c = split_roots(D)
    if not noniso_c:
        raise DegenerateDatum("report needs nonisotropic roots")
    rad = radical(D)
    bar = bar_image(D)
    label = recognize_type(bar.roots, bar.form)
    ea5b_ok, _ = check_ea5b(D)
    return EalaRootReport(
        nullity=len(rad),
        type_label=label,
        isotropic_count=len(iso_c),
        nonisotropic_count=len(noniso_c),
        ea5a=check_ea5a(D),
        ea5b=ea5b_ok,
        nondegenerate=check_nondegenerate(D),
    )


# ---------------------------------------------------------------------------
# compression of enumerated roots into coset form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompressedDatum:
    datum: RootDatum
    members: Tuple[Tuple[int, Tuple[Vector, ...]], ...]  # coset index -> enumerated roots


def compress_roots(
    roots: Sequence[Vector],
    form,
    normalize: bool = False,
    m_period: Optional[int] = None,
) -> CompressedDatum:
    """Group an enumerated root list into bar-cosets with inferred progressions.

    Raises DatumError when some group's coefficient pattern is not a product
    of arithmetic progressions; callers should then enlarge their window.
    """
    form = as_matrix(form)
    roots = [vec(r) for r in roots]
    if not roots:
        raise DatumError("no roots to compress")
    dim = len(roots[0])
    span = row_basis([r for r in roots if any(r)])
    G = gram(span, form)
    rad_coeffs = kernel(G)
    rad = []
    for coeffs in rad_coeffs:
        v = [Q(0)] * dim
        for coeff, b in zip(coeffs, span):
            for k in range(dim):
                v[k] += coeff * b[k]
        rad.append(tuple(v))
    comp = _complement_basis(span, rad)
    basis = list(rad) + comp
    solver = basis_solver(basis)
    groups: Dict[Tuple[Q, ...], List[Tuple[Vector, Vector]]] = {}
    for r in roots:
        coords = solver(r)
        if coords is None:
            raise DatumError("root outside the span under compression")
        bar = tuple(coords[len(rad):])
        groups.setdefault(bar, []).append((tuple(coords[: len(rad)]), r))
    if not rad:
        distinct = sorted({r for r in roots})
        D = root_datum(dim, form, [Coset(r, ()) for r in distinct], (), m_period,
                       normalize=normalize)
        members = tuple((i, (r,)) for i, r in enumerate(distinct))
        return CompressedDatum(D, members)
    # infer the primitive isotropic lattice from all within-group differences
    diffs: List[Vector] = []
    for v in groups.values():
        base = v[0][0]
        for coords, _ in v[1:]:
            diffs.append(vec_sub(coords, base))
    lattice = _primitive_lattice(diffs, len(rad))
    gens = []
    for row in lattice:
        g = [Q(0)] * dim
        for coeff, b in zip(row, rad):
            for k in range(dim):
                g[k] += coeff * b[k]
        gens.append(tuple(g))
    lattice_solver = basis_solver(lattice)
    cosets = []
    member_list = []
    for bar_val, v in sorted(groups.items()):
        v = sorted(v)
        base = v[0][0]
        offsets = []
        for coords, r in v:
            off = lattice_solver(vec_sub(coords, base))
            if off is None or any(x.denominator != 1 for x in off):
                raise DatumError("group offsets do not lie in the inferred lattice")
            offsets.append((tuple(int(x) for x in off), r))
        moduli, rep = _infer_box(offsets, gens)
        cosets.append(Coset(rep, moduli))
        member_list.append(tuple(sorted(r for _, r in v)))
    D = root_datum(dim, form, cosets, gens, m_period, normalize=normalize)
    members = tuple((i, ms) for i, ms in enumerate(member_list))
    return CompressedDatum(D, members)


def _primitive_lattice(diffs: Sequence[Vector], nu: int) -> List[Vector]:
    """Basis of the lattice generated by the differences, in radical coordinates."""
    if nu == 0:
        return []
    nonzero = [d for d in diffs if any(d)]
    if not nonzero:
        # no progressions visible: fall back to unit steps in radical coordinates
        return [tuple(Q(1) if i == j else Q(0) for j in range(nu)) for i in range(nu)]
    basis: List[Vector] = []
    for axis in range(nu):
        vals = sorted({d[axis] for d in nonzero if d[axis] != 0}, key=abs)
        if not vals:
            continue
        step = None
        for v in vals:
            step = abs(v) if step is None else _qgcd(step, abs(v))
        e = [Q(0)] * nu
        e[axis] = step
        basis.append(tuple(e))
    if len(basis) < nu:
        for axis in range(nu):
            if not any(b[axis] for b in basis):
                e = [Q(0)] * nu
                e[axis] = Q(1)
                basis.append(tuple(e))
    # verify every difference is an integer combination
    for d in nonzero:
        coords = coords_in_basis(basis, d)
        if coords is None or any(x.denominator != 1 for x in coords):
            raise DatumError("difference lattice is not axis-aligned")
    return basis


def _qgcd(a: Q, b: Q) -> Q:
    num = gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Q(num, a.denominator * b.denominator)


def _infer_box(offsets, gens) -> Tuple[Tuple[int, ...], Vector]:
    """Per-axis progression inference for one group of offset vectors."""
    nu = len(gens)
    vecs = [o for o, _ in offsets]
    moduli = []
    residues = []
    for axis in range(nu):
        vals = sorted({o[axis] for o in vecs})
        if len(vals) == 1:
            moduli.append(0)
            residues.append(vals[0])
            continue
        steps = {b - a for a, b in zip(vals, vals[1:])}
        step = min(steps)
        if steps != {step}:
            raise DatumError("coefficients are not an arithmetic progression; enlarge the window")
        moduli.append(step)
        residues.append(vals[0] % step)
    expected = 1
    for axis in range(nu):
        if moduli[axis]:
            vals = {o[axis] for o in vecs}
            expected *= len(vals)
    if expected != len(set(vecs)):
        raise DatumError("coefficient pattern is not a product of progressions")
    # canonical representative: reduce each running coordinate into [0, modulus)
    base_off, base_root = min(offsets)
    rep = base_root
    for axis in range(nu):
        target = residues[axis] if moduli[axis] else base_off[axis]
        shift = target - base_off[axis]
        if shift:
            rep = vec_add(rep, vec_scale(Q(shift), gens[axis]))
    return tuple(moduli), rep


def datum_summary(D: RootDatum, with_type: bool = True):
    """A coordinate-free fingerprint used to compare data across constructions."""
    rad = radical(D)
    if with_type:
        try:
            bar = bar_image(D)
            label = str(recognize_type(bar.roots, bar.form))
        except DegenerateDatum:
            label = "degenerate"
    else:
        label = ""
    rows = sorted(
        (D.norm(c.rep), tuple(sorted(m for m in c.moduli)))
        for c in D.cosets
    )
    return (len(rad), label, tuple(rows))


# ---------------------------------------------------------------------------
# canned data used across the test corpus and the CLI
# ---------------------------------------------------------------------------

def finite_datum(label: TypeLabel) -> RootDatum:
    rs = build_finite(label)
    cosets = [Coset(r, ()) for r in sorted(rs.roots)]
    return root_datum(rs.dim, rs.form, cosets, ())


def toroidal_datum(label: TypeLabel, nu: int) -> RootDatum:
    """Roots of a torus-coordinatized algebra: finite roots shifted by a ν-lattice."""
    rs = build_finite(label)
    dim = rs.dim + nu
    form = [[rs.form[i][j] if i < rs.dim and j < rs.dim else Q(0) for j in range(dim)]
            for i in range(dim)]
    cosets = [Coset(vec(list(r) + [0] * nu), (1,) * nu) for r in sorted(rs.nonzero)]
    cosets.append(Coset(vec([0] * dim), (1,) * nu))
    iso = [vec([0] * (rs.dim + k) + [1] + [0] * (nu - k - 1)) for k in range(nu)]
    return root_datum(dim, form, cosets, iso)


def quantum_datum(ell: int, nu: int) -> RootDatum:
    """Roots of the matrix algebra over a ν-variable quantum torus (type A_ell)."""
    dim = ell + 1 + nu
    form = [[Q(1) if i == j and i < ell + 1 else Q(0) for j in range(dim)] for i in range(dim)]
    cosets = []
    for i in range(ell + 1):
        for j in range(ell + 1):
            if i != j:
                rep = [Q(0)] * dim
                rep[i], rep[j] = Q(1), Q(-1)
                cosets.append(Coset(tuple(rep), (1,) * nu))
    cosets.append(Coset(vec([0] * dim), (1,) * nu))
    iso = [vec([0] * (ell + 1 + k) + [1] + [0] * (nu - k - 1)) for k in range(nu)]
    return root_datum(dim, form, cosets, iso)


# ---------------------------------------------------------------------------
# JSON serialization (the CLI's wire format)
# ---------------------------------------------------------------------------

def _q_to_json(x: Q):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _q_from_json(x) -> Q:
    if isinstance(x, str):
        num, den = x.split("/")
        return Q(int(num), int(den))
    if isinstance(x, int):
        return Q(x)
    raise DatumError(f"expected an exact rational, got {x!r}")


def datum_to_json(D: RootDatum) -> dict:
    return {
        "dim": D.dim,
        "form": [[_q_to_json(x) for x in row] for row in D.form],
        "cosets": [
            {"rep": [_q_to_json(x) for x in c.rep], "progressions": list(c.moduli)}
            for c in D.cosets
        ],
        "isotropic_basis": [[_q_to_json(x) for x in g] for g in D.isotropic_basis],
    }


def datum_from_json(obj: dict) -> RootDatum:
    try:
        dim = int(obj["dim"])
        form = [[_q_from_json(x) for x in row] for row in obj["form"]]
        cosets = [
            Coset(tuple(_q_from_json(x) for x in c["rep"]), tuple(int(m) for m in c["progressions"]))
            for c in obj["cosets"]
        ]
        iso = [tuple(_q_from_json(x) for x in g) for g in obj.get("isotropic_basis", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise DatumError(f"malformed root datum JSON: {exc}") from exc
    return root_datum(dim, form, cosets, iso)
