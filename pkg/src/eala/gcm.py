"""Affine generalized Cartan matrices, marks, diagram automorphisms.

The affinity test is semantic (one-dimensional kernel with a positive
generator), never a table lookup.  Root data are produced by a reflection
fixpoint on the root lattice, then compressed to null-direction progressions;
the inferred progressions are required to be stable between two consecutive
enumeration bounds before they are trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .exactnum import Matrix, Vector, as_matrix, kernel, vec
from .ears import RootDatum, compress_roots, datum_summary
from .rootsys import TypeLabel, cartan_matrix, highest_root, symmetrizer


class GCMError(ValueError):
    pass


@dataclass(frozen=True)
class GCM:
    entries: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Marks:
    values: Tuple[int, ...]


@dataclass(frozen=True)
class DiagramAutomorphism:
    perm: Tuple[int, ...]
    period: int


@dataclass(frozen=True)
class AffineVerdict:
    empty_nonisotropic: bool
    tame_eala: bool
    nullity: Optional[int]


def gcm(rows) -> GCM:
    entries = tuple(tuple(int(x) for x in row) for row in rows)
    n = len(entries)
    if any(len(r) != n for r in entries):
        raise GCMError("matrix must be square")
    for i in range(n):
        if entries[i][i] != 2:
            raise GCMError("diagonal entries must equal 2")
        for j in range(n):
            if i != j:
                if entries[i][j] > 0:
                    raise GCMError("off-diagonal entries must be nonpositive")
                if (entries[i][j] == 0) != (entries[j][i] == 0):
                    raise GCMError("zero pattern must be symmetric")
    return GCM(entries)


def validate_affine(A: GCM) -> Marks:
    """The marks of an affine matrix: a positive primitive kernel generator."""
    ker = kernel(as_matrix(A.entries))
    if len(ker) != 1:
        raise GCMError(f"kernel dimension {len(ker)} != 1: not affine")
    gen = ker[0]
    denom = 1
    for x in gen:
        denom = lcm(denom, x.denominator)
    ints = [int(x * denom) for x in gen]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    if all(x < 0 for x in ints):
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise GCMError("kernel has no positive generator: not affine")
    return Marks(tuple(ints))


def null_root(A: GCM) -> Vector:
    return vec(validate_affine(A).values)


# ---------------------------------------------------------------------------
# diagram automorphisms
# ---------------------------------------------------------------------------

def _perm_period(perm: Sequence[int]) -> int:
    period = 1
    seen = set()
    for start in range(len(perm)):
        if start in seen:
            continue
        n, cur = 0, start
        while True:
            cur = perm[cur]
            n += 1
            seen.add(cur)
            if cur == start:
                break
        period = lcm(period, n)
    return period


def diagram_automorphisms(A: GCM) -> List[DiagramAutomorphism]:
    """All node permutations preserving the matrix, exact periods attached."""
    n = A.size
    E = A.entries

    def profile(i):
        return tuple(sorted((E[i][j], E[j][i]) for j in range(n) if j != i and E[i][j]))

    profs = [profile(i) for i in range(n)]
    found: List[DiagramAutomorphism] = []
    assign: List[int] = []
    used = [False] * n

    def extend(i: int):
        if i == n:
            found.append(DiagramAutomorphism(tuple(assign), _perm_period(assign)))
            return
        for j in range(n):
            if used[j] or profs[i] != profs[j]:
                continue
            if all(E[i][k] == E[j][assign[k]] and E[k][i] == E[assign[k]][j] for k in range(i)):
                used[j] = True
                assign.append(j)
                extend(i + 1)
                assign.pop()
                used[j] = False

    extend(0)
    return sorted(found, key=lambda d: d.perm)


def is_transitive(sigma: DiagramAutomorphism) -> bool:
    """Whether the cyclic group generated by the permutation has one orbit."""
    n = len(sigma.perm)
    orbit = {0}
    cur = 0
    while True:
        cur = sigma.perm[cur]
        if cur == 0:
            break
        orbit.add(cur)
    return len(orbit) == n


def affinization_verdict(A: GCM, sigma: DiagramAutomorphism) -> AffineVerdict:
    """Outcome of affinizing by a diagram automorphism, decided by transitivity."""
    validate_affine(A)
    if is_transitive(sigma):
        return AffineVerdict(empty_nonisotropic=True, tame_eala=False, nullity=None)
    return AffineVerdict(empty_nonisotropic=False, tame_eala=True, nullity=2)


def diagram_action(A: GCM, sigma: DiagramAutomorphism) -> Matrix:
    """Linear extension of the node permutation to the root lattice."""
    n = A.size
    return tuple(
        tuple(Q(1) if sigma.perm[j] == i else Q(0) for j in range(n)) for i in range(n)
    )


# ---------------------------------------------------------------------------
# root datum of an affine matrix
# ---------------------------------------------------------------------------

def real_roots_up_to_level(A: GCM, cap: Q) -> Set[Tuple[int, ...]]:
    """Reflection fixpoint of the simple roots, pruned by the node-0 level."""
    marks = validate_affine(A).values
    n = A.size
    E = A.entries
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots: Set[Tuple[int, ...]] = set(simple)
    frontier = list(simple)
    limit = cap * marks[0]
    while frontier:
        b = frontier.pop()
        for i in range(n):
            t = sum(E[i][j] * b[j] for j in range(n))
            if not t:
                continue
            nb = tuple(x - (t if j == i else 0) for j, x in enumerate(b))
            if nb not in roots and abs(nb[0]) <= limit:
                roots.add(nb)
                frontier.append(nb)
    return roots


def _gram_of(A: GCM) -> Matrix:
    d = symmetrizer(A.entries)
    if d is None:
        raise GCMError("matrix is not symmetrizable: no invariant form exists")
    n = A.size
    return tuple(tuple(d[i] * A.entries[i][j] for j in range(n)) for i in range(n))


def affine_root_datum(A: GCM, bound: int = 2) -> RootDatum:
    """Coset-form root datum of the affine matrix, stable across bounds.

    Real roots come from the reflection fixpoint; the isotropic roots are the
    integer multiples of the null root.  Progressions inferred at `bound` must
    agree with those inferred at `bound + 1`.
    """
    if bound < 2:
        raise GCMError("bound must be at least 2")
    marks = validate_affine(A).values
    form = _gram_of(A)
    delta = vec(marks)
    enumerated = real_roots_up_to_level(A, Q(bound + 2))

    def level(v: Vector) -> Q:
        return v[0] / marks[0]

    def windowed(w: int) -> List[Vector]:
        out = [v for v in enumerated if abs(level(v)) <= w]
        for t in range(-w, w + 1):
            out.append(tuple(Q(t) * x for x in delta))
        return out

    small = compress_roots(windowed(bound), form)
    big = compress_roots(windowed(bound + 1), form)
    if datum_summary(small.datum, with_type=False) != datum_summary(big.datum, with_type=False):
        raise GCMError(
            "inferred progressions unstable between bounds; enlarge the bound"
        )
    return small.datum


# ---------------------------------------------------------------------------
# the curated affine catalog
# ---------------------------------------------------------------------------

def untwisted_affine(label: TypeLabel) -> GCM:
    """Extended Cartan matrix: adjoin the negative of the highest root."""
    theta, rs = highest_root(label)
    r = label.rank
    C = cartan_matrix(label.family, r)
    tt = rs.norm(theta)
    row0 = [2]
    col0 = [2]
    for j in range(r):
        aj = tuple(Q(1) if k == j else Q(0) for k in range(r))
        pair = rs.pairing(theta, aj)
        a0j = -2 * pair / tt
        aj0 = -2 * pair / rs.norm(aj)
        if a0j.denominator != 1 or aj0.denominator != 1:
            raise GCMError("extended matrix entries are not integers")
        row0.append(int(a0j))
        col0.append(int(aj0))
    n = r + 1
    out = [[0] * n for _ in range(n)]
    out[0] = row0
    for j in range(1, n):
        out[j][0] = col0[j]
        for k in range(1, n):
            out[j][k] = C[j - 1][k - 1]
    return gcm(out)


def _chain_matrix(n: int, special: Dict[Tuple[int, int], int]) -> GCM:
    rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = -1
        rows[i + 1][i] = -1
    for (i, j), v in special.items():
        rows[i][j] = v
    return gcm(rows)


def twisted_affine(kind: str, ell: int = 0) -> GCM:
    """The twisted affine families, with their marks checked on construction."""
    if kind == "A2even":  # 2*ell nodes ell+1, marks (2,...,2,1)
        if ell == 1:
            M = gcm([[2, -4], [-1, 2]])
            expect = (2, 1)
        else:
            M = _chain_matrix(ell + 1, {(0, 1): -2, (ell - 1, ell): -2})
            expect = (2,) * ell + (1,)
    elif kind == "A2odd":  # 2*ell-1 with ell >= 3: fork then chain, marks (1,1,2,...,2,1)
        if ell < 3:
            raise GCMError("A2odd needs rank at least 3")
        n = ell + 1
        rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        rows[0][2] = rows[2][0] = -1
        rows[1][2] = rows[2][1] = -1
        for i in range(2, n - 1):
            rows[i][i + 1] = -1
            rows[i + 1][i] = -1
        rows[ell - 1][ell] = -2
        M = gcm(rows)
        expect = (1, 1) + (2,) * (ell - 2) + (1,)
    elif kind == "D2":  # ell+1 nodes, all marks 1
        if ell < 2:
            raise GCMError("D2 needs at least 3 nodes")
        M = _chain_matrix(ell + 1, {(0, 1): -2, (ell, ell - 1): -2})
        expect = (1,) * (ell + 1)
    elif kind == "E6_2":
        M = _chain_matrix(5, {(2, 3): -2})
        expect = (1, 2, 3, 2, 1)
    elif kind == "D4_3":
        M = gcm([[2, -1, 0], [-1, 2, -3], [0, -1, 2]])
        expect = (1, 2, 1)
    else:
        raise GCMError(f"unknown twisted kind {kind}")
    got = validate_affine(M).values
    if got != expect:
        raise GCMError(f"marks {got} disagree with the expected {expect} for {kind}, rank {ell}")
    return M


def affine_catalog(max_nodes: int = 9) -> List[Tuple[str, GCM]]:
    """All standard affine matrices with at most `max_nodes` nodes."""
    out: List[Tuple[str, GCM]] = []
    finite_labels: List[TypeLabel] = []
    finite_labels += [TypeLabel("A", r) for r in range(1, max_nodes)]
    finite_labels += [TypeLabel("B", r) for r in range(2, max_nodes)]
    finite_labels += [TypeLabel("C", r) for r in range(3, max_nodes)]
    finite_labels += [TypeLabel("D", r) for r in range(4, max_nodes)]
    finite_labels += [TypeLabel("E", r) for r in (6, 7, 8) if r + 1 <= max_nodes]
    finite_labels += [TypeLabel("F", 4), TypeLabel("G", 2)]
    for lab in finite_labels:
        if lab.rank + 1 <= max_nodes:
            out.append((f"{lab.family}{lab.rank}^(1)", untwisted_affine(lab)))
    for ell in range(1, max_nodes):
        if ell + 1 <= max_nodes:
            out.append((f"A{2 * ell}^(2)", twisted_affine("A2even", ell)))
    for ell in range(3, max_nodes):
        if ell + 1 <= max_nodes:
            out.append((f"A{2 * ell - 1}^(2)", twisted_affine("A2odd", ell)))
    for ell in range(2, max_nodes):
        if ell + 1 <= max_nodes:
            out.append((f"D{ell + 1}^(2)", twisted_affine("D2", ell)))
    if max_nodes >= 5:
        out.append(("E6^(2)", twisted_affine("E6_2")))
    if max_nodes >= 3:
        out.append(("D4^(3)", twisted_affine("D4_3")))
    return out
