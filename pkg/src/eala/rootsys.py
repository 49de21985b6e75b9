"""Finite irreducible root systems with exact arithmetic.

Conventions: a system is a finite spanning set of rational vectors together
with a positive-definite symmetric form; the zero vector is a member, and
non-reduced (BC) systems are allowed.  Systems are compared up to
form-preserving linear bijections and global rescaling of the form, so type
recognition works on Cartan integers only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .exactnum import (
    Matrix,
    Vector,
    as_matrix,
    coords_in_basis,
    form_value,
    gram,
    is_zero_vector,
    kernel,
    psd_witness,
    rank,
    row_basis,
    solve,
    vec,
)


class RootSystemError(ValueError):
    """An input violated a root-system axiom; `axiom` names the failure."""

    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        super().__init__(f"{axiom}: {detail}" if detail else axiom)


FAMILIES = ("A", "B", "C", "D", "E", "F", "G", "BC")


@dataclass(frozen=True)
class TypeLabel:
    family: str
    rank: int

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    def canonical(self) -> "TypeLabel":
        """Collapse the low-rank coincidences to one label per isomorphism class."""
        fam, r = self.family, self.rank
        if (fam, r) in (("B", 1), ("C", 1), ("D", 1)):
            return TypeLabel("A", 1)
        if (fam, r) == ("C", 2):
            return TypeLabel("B", 2)
        if (fam, r) == ("D", 2):
            raise RootSystemError("irreducible", "D2 is not irreducible")
        if (fam, r) == ("D", 3):
            return TypeLabel("A", 3)
        return self


def admissible(label: TypeLabel) -> bool:
    fam, r = label.family, label.rank
    if r < 1:
        return False
    if fam == "A" or fam == "BC":
        return True
    if fam == "B":
        return r >= 2
    if fam == "C":
        return r >= 3
    if fam == "D":
        return r >= 4
    if fam == "E":
        return r in (6, 7, 8)
    if fam == "F":
        return r == 4
    if fam == "G":
        return r == 2
    return False


def nonzero_count(label: TypeLabel) -> int:
    fam, r = label.family, label.rank
    if fam == "A":
        return r * (r + 1)
    if fam in ("B", "C"):
        return 2 * r * r
    if fam == "D":
        return 2 * r * (r - 1)
    if fam == "E":
        return {6: 72, 7: 126, 8: 240}[r]
    if fam == "F":
        return 48
    if fam == "G":
        return 12
    if fam == "BC":
        return 2 * r * (r + 1)
    raise RootSystemError("type", f"unknown family {fam}")


# ---------------------------------------------------------------------------
# Cartan matrices of the finite families; entry (i, j) is 2(a_i, a_j)/(a_i, a_i)
# ---------------------------------------------------------------------------

def cartan_matrix(family: str, r: int) -> Tuple[Tuple[int, ...], ...]:
    label = TypeLabel(family, r)
    if family == "BC" or not admissible(label):
        raise RootSystemError("type", f"no Cartan matrix for {label}")
    A = [[2 if i == j else 0 for j in range(r)] for i in range(r)]

    def bond(i, j, aij=-1, aji=-1):
        A[i][j] = aij
        A[j][i] = aji

    if family == "A":
        for i in range(r - 1):
            bond(i, i + 1)
    elif family == "B":
        for i in range(r - 2):
            bond(i, i + 1)
        bond(r - 2, r - 1, -1, -2)  # last simple root short
    elif family == "C":
        for i in range(r - 2):
            bond(i, i + 1)
        bond(r - 2, r - 1, -2, -1)  # last simple root long
    elif family == "D":
        for i in range(r - 3):
            bond(i, i + 1)
        bond(r - 3, r - 2)
        bond(r - 3, r - 1)
    elif family == "E":
        for i in range(r - 2):
            bond(i, i + 1)
        bond(2, r - 1)
    elif family == "F":
        bond(0, 1)
        bond(1, 2, -1, -2)
        bond(2, 3)
    elif family == "G":
        bond(0, 1, -1, -3)
    return tuple(tuple(row) for row in A)


def symmetrizer(A: Sequence[Sequence[int]]) -> Optional[Tuple[Q, ...]]:
    """Positive rationals d with d_i A_ij = d_j A_ji, or None if none exist."""
    n = len(A)
    d: List[Optional[Q]] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Q(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or A[i][j] == 0:
                    continue
                if A[j][i] == 0:
                    return None
                val = d[i] * Q(A[i][j], A[j][i])
                if d[j] is None:
                    d[j] = val
                    stack.append(j)
                elif d[j] != val:
                    return None
    mn = min(x for x in d if x is not None)
    return tuple(x / mn for x in d)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# the root system object
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteRootSystem:
    dim: int
    roots: FrozenSet[Vector]
    form: Matrix

    @property
    def nonzero(self) -> FrozenSet[Vector]:
        return frozenset(v for v in self.roots if any(v))

    def pairing(self, u: Vector, v: Vector) -> Q:
        return form_value(self.form, u, v)

    def norm(self, v: Vector) -> Q:
        return self.pairing(v, v)


def from_vectors(vectors: Iterable[Vector], form: Matrix, validate: bool = True) -> FiniteRootSystem:
    """Re-express the vectors in a basis of their span and wrap them up.

    The induced form is the Gram matrix of the chosen span basis, so the
    result always satisfies the spanning requirement.
    """
    vs = [vec(v) for v in vectors]
    form = as_matrix(form)
    basis = row_basis([v for v in vs if any(v)])
    if not basis:
        raise RootSystemError("span", "no nonzero vectors given")
    new_form = gram(basis, form)
    new_roots = set()
    for v in vs:
        c = coords_in_basis(basis, v)
        if c is None:
            raise RootSystemError("span", "vector outside the span of the root set")
        new_roots.add(vec(c))
    new_roots.add(vec([0] * len(basis)))
    rs = FiniteRootSystem(len(basis), frozenset(new_roots), new_form)
    if validate:
        validate_root_system(rs)
    return rs


def validate_root_system(rs: FiniteRootSystem) -> None:
    if vec([0] * rs.dim) not in rs.roots:
        raise RootSystemError("zero", "0 must belong to the root set")
    nz = list(rs.nonzero)
    if not nz:
        raise RootSystemError("span", "no nonzero roots")
    if rank(nz) != rs.dim:
        raise RootSystemError("span", "roots do not span the ambient space")
    w = psd_witness(rs.form)
    if w is not None or rank(rs.form) != rs.dim:
        raise RootSystemError("definiteness", "form is not positive definite")
    images = {v: tuple(sum(f * x for f, x in zip(row, v)) for row in rs.form) for v in nz}
    norms = {v: sum(a * b for a, b in zip(v, images[v])) for v in nz}
    for b in nz:
        nb = norms[b]
        gb = images[b]
        for a in nz:
            pab = sum(x * y for x, y in zip(a, gb))
            if not pab:
                continue  # reflection fixes a
            t = 2 * pab / nb
            if t.denominator != 1:
                raise RootSystemError(
                    "integrality", f"2(a,b)/(b,b) = {t} is not an integer"
                )
            refl = tuple(x - t * y for x, y in zip(a, b))
            if refl not in rs.roots or not any(refl):
                raise RootSystemError("reflection", "reflection leaves the root set")
    if not _orthogonally_connected(nz, rs.form):
        raise RootSystemError("irreducible", "nonzero roots split into orthogonal parts")


def _orthogonally_connected(vectors: Sequence[Vector], form: Matrix) -> bool:
    if not vectors:
        return True
    images = [tuple(sum(f * x for f, x in zip(row, v)) for row in form) for v in vectors]
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        gi = images[i]
        for j in range(len(vectors)):
            if j not in seen and sum(x * y for x, y in zip(vectors[j], gi)) != 0:
                seen.add(j)
                frontier.append(j)
    return len(seen) == len(vectors)


def build_finite(label: TypeLabel) -> FiniteRootSystem:
    """The standard realization of the given type, with 0 adjoined."""
    if not admissible(label):
        raise RootSystemError("type", f"inadmissible label {label}")
    r = label.rank
    if label.family == "BC":
        roots: Set[Vector] = set()
        for i in range(r):
            for s in (1, -1):
                e = [Q(0)] * r
                e[i] = Q(s)
                roots.add(tuple(e))
                roots.add(tuple(2 * x for x in e))
            for j in range(i + 1, r):
                for si in (1, -1):
                    for sj in (1, -1):
                        e = [Q(0)] * r
                        e[i], e[j] = Q(si), Q(sj)
                        roots.add(tuple(e))
        form = tuple(tuple(Q(2) if i == j else Q(0) for j in range(r)) for i in range(r))
        roots.add(vec([0] * r))
        rs = FiniteRootSystem(r, frozenset(roots), form)
    else:
        A = cartan_matrix(label.family, r)
        d = symmetrizer(A)
        assert d is not None
        form = tuple(tuple(d[i] * A[i][j] for j in range(r)) for i in range(r))
        simple = [tuple(Q(1) if j == i else Q(0) for j in range(r)) for i in range(r)]
        roots = set(simple)
        frontier = list(simple)
        while frontier:
            b = frontier.pop()
            for i in range(r):
                t = sum(A[i][j] * b[j] for j in range(r))
                nb = tuple(x - (t if j == i else 0) for j, x in enumerate(b))
                if nb not in roots:
                    roots.add(nb)
                    frontier.append(nb)
        roots.add(vec([0] * r))
        rs = FiniteRootSystem(r, frozenset(roots), form)
    if len(rs.nonzero) != nonzero_count(label):
        raise RootSystemError("count", f"bad root count for {label}")
    return rs


def reflect(rs: FiniteRootSystem, alpha: Vector, beta: Vector) -> Vector:
    """The reflection of beta in the hyperplane orthogonal to alpha."""
    na = rs.norm(alpha)
    if na == 0:
        raise RootSystemError("isotropic", "cannot reflect in an isotropic vector")
    t = 2 * rs.pairing(beta, alpha) / na
    return tuple(b - t * a for a, b in zip(alpha, beta))


def highest_root(label: TypeLabel) -> Tuple[Vector, FiniteRootSystem]:
    """The highest root in simple-root coordinates, with its system."""
    rs = build_finite(label)
    if label.family == "BC":
        raise RootSystemError("type", "highest root used only for reduced types")
    best = max(rs.nonzero, key=lambda v: sum(v))
    return best, rs


# ---------------------------------------------------------------------------
# orthogonal projection onto a subspace
# ---------------------------------------------------------------------------

def projector(rs: FiniteRootSystem, subspace: Sequence[Vector]):
    """The form-orthogonal projection onto the span of `subspace`."""
    basis = row_basis([vec(v) for v in subspace])
    if not basis:
        raise RootSystemError("subspace", "projection target is the zero subspace")
    if any(len(b) != rs.dim for b in basis):
        raise RootSystemError("subspace", "subspace vectors have the wrong dimension")
    G = gram(basis, rs.form)

    def p(x: Vector) -> Vector:
        rhs = tuple(form_value(rs.form, b, x) for b in basis)
        c = solve(G, rhs)
        assert c is not None  # G is definite on the span
        out = [Q(0)] * rs.dim
        for ci, b in zip(c, basis):
            for k in range(rs.dim):
                out[k] += ci * b[k]
        return tuple(out)

    return p


def project(rs: FiniteRootSystem, subspace: Sequence[Vector]) -> FrozenSet[Vector]:
    """Image of the nonzero roots under the orthogonal projection onto `subspace`."""
    p = projector(rs, subspace)
    return frozenset(p(b) for b in rs.nonzero)


@dataclass(frozen=True)
class ProjectionCheck:
    part_i: bool
    part_ii: bool
    witnesses: Tuple[Tuple[Vector, Optional[Vector]], ...]
    visible: FrozenSet[Vector]
    nearly_visible: FrozenSet[Vector]


def projection_check(rs: FiniteRootSystem, subspace: Sequence[Vector]) -> ProjectionCheck:
    """Check both projection properties of an irreducible system.

    part_i: every nonzero root pairs non-orthogonally with some root whose
    projection is nonzero.  part_ii: the nonzero projected roots are
    orthogonality-connected.  Both hold for genuine irreducible systems.
    """
    validate_root_system(rs)
    p = projector(rs, subspace)
    nz = sorted(rs.nonzero)
    proj = {b: p(b) for b in nz}
    visible = [b for b in nz if any(proj[b])]
    witnesses: List[Tuple[Vector, Optional[Vector]]] = []
    part_i = True
    vis_set = frozenset(visible)
    nearly = set()
    for a in nz:
        w = next((b for b in visible if rs.pairing(a, b) != 0), None)
        if w is not None:
            nearly.add(a)
        witnesses.append((a, w))
        if w is None:
            part_i = False
    images = sorted({proj[b] for b in visible})
    part_ii = _orthogonally_connected(images, rs.form)
    return ProjectionCheck(part_i, part_ii, tuple(witnesses), vis_set, frozenset(nearly))


# ---------------------------------------------------------------------------
# type recognition
# ---------------------------------------------------------------------------

def _generic_functional(roots: Sequence[Vector]) -> Vector:
    """A deterministic rational functional vanishing on no nonzero root.

    Uses the moment functionals (1, k, k^2, ...): each nonzero root kills at
    most dim-1 values of k, so the scan terminates.
    """
    dim = len(roots[0])
    k = 1
    while True:
        f = tuple(Q(k) ** i for i in range(dim))
        if all(sum(fi * xi for fi, xi in zip(f, v)) != 0 for v in roots if any(v)):
            return f
        k += 1


def _simple_system(rs: FiniteRootSystem) -> List[Vector]:
    nz = sorted(rs.nonzero)
    f = _generic_functional(nz)

    def height(v):
        return sum(fi * xi for fi, xi in zip(f, v))

    pos = [v for v in nz if height(v) > 0]
    pos_set = set(pos)
    indiv = [v for v in pos if tuple(x / 2 for x in v) not in rs.roots]
    indiv_set = set(indiv)
    simple = []
    for a in indiv:
        decomposable = any(
            tuple(x - y for x, y in zip(a, b)) in indiv_set and height(tuple(x - y for x, y in zip(a, b))) > 0
            for b in indiv
            if b != a and b in pos_set
        )
        if not decomposable:
            simple.append(a)
    return sorted(simple)


def _cartan_of(rs: FiniteRootSystem, simple: Sequence[Vector]) -> Tuple[Tuple[int, ...], ...]:
    out = []
    for a in simple:
        na = rs.norm(a)
        row = []
        for b in simple:
            t = 2 * rs.pairing(a, b) / na
            if t.denominator != 1:
                raise RootSystemError("integrality", "non-integral Cartan entry")
            row.append(int(t))
        out.append(tuple(row))
    return tuple(out)


def _cartan_isomorphic(A, B) -> bool:
    n = len(A)
    if len(B) != n:
        return False

    def profile(M, i):
        return tuple(sorted((M[i][j], M[j][i]) for j in range(n) if j != i and M[i][j]))

    pa = [profile(A, i) for i in range(n)]
    pb = [profile(B, i) for i in range(n)]
    if sorted(pa) != sorted(pb):
        return False
    assign: List[int] = []
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if used[j] or pa[i] != pb[j]:
                continue
            ok = all(
                A[i][k] == B[j][assign[k]] and A[k][i] == B[assign[k]][j]
                for k in range(i)
            )
            if ok:
                used[j] = True
                assign.append(j)
                if extend(i + 1):
                    return True
                assign.pop()
                used[j] = False
        return False

    return extend(0)


def _candidate_labels(r: int) -> List[TypeLabel]:
    out = [TypeLabel("A", r)]
    if r >= 2:
        out.append(TypeLabel("B", r))
    if r >= 3:
        out.append(TypeLabel("C", r))
    if r >= 4:
        out.append(TypeLabel("D", r))
    if r in (6, 7, 8):
        out.append(TypeLabel("E", r))
    if r == 4:
        out.append(TypeLabel("F", r))
    if r == 2:
        out.append(TypeLabel("G", r))
    return out


def recognize_type(vectors: Iterable[Vector], form: Matrix) -> TypeLabel:
    """Identify a finite irreducible root system up to isomorphism and scaling.

    Raises RootSystemError naming the violated axiom when the input is not a
    root system.  Non-reduced inputs are reported as BC of the ambient rank.
    """
    rs = from_vectors(vectors, form, validate=True)
    divisible = any(
        tuple(2 * x for x in v) in rs.roots for v in rs.nonzero
    )
    simple = _simple_system(rs)
    if len(simple) != rs.dim:
        raise RootSystemError("base", "simple system has the wrong size")
    C = _cartan_of(rs, simple)
    matched: Optional[TypeLabel] = None
    for cand in _candidate_labels(rs.dim):
        if _cartan_isomorphic(C, cartan_matrix(cand.family, cand.rank)):
            matched = cand
            break
    if matched is None:
        raise RootSystemError("classification", "Cartan matrix matches no finite type")
    if divisible:
        if matched == TypeLabel("A", 1) or matched.family == "B":
            label = TypeLabel("BC", rs.dim)
        else:
            raise RootSystemError(
                "classification", "divisible roots outside a BC configuration"
            )
    else:
        label = matched
    if len(rs.nonzero) != nonzero_count(label):
        raise RootSystemError("count", f"root count does not match {label}")
    return label
