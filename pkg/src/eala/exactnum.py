"""Exact scalars and exact linear algebra.

Everything downstream works over the rationals or over a cyclotomic field
Q(zeta_m); no floating point is used anywhere.  Vectors and matrices are
plain tuples of scalars, and the elimination routines are generic in the
scalar type: any value supporting +, -, *, /, bool and == works, which
covers both Fraction and Cyclotomic.
"""

from __future__ import annotations

from fractions import Fraction as Q
from functools import lru_cache
from math import gcd
from typing import List, Optional, Sequence, Tuple, Union

Vector = Tuple[Q, ...]
Matrix = Tuple[Vector, ...]
Scalar = Union[int, Q, "Cyclotomic"]


class ExactArithmeticError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer polynomial helpers (ascending coefficient lists)
# ---------------------------------------------------------------------------

def _poly_div_exact(num: List[int], den: Sequence[int]) -> List[int]:
    """Divide integer polynomials exactly; raises if the division has a remainder."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % lead:
            raise ExactArithmeticError("inexact polynomial division")
        q = c // lead
        out[k] = q
        if q:
            for i, d in enumerate(den):
                num[k + i] -= q * d
    if any(num[: len(den) - 1]):
        raise ExactArithmeticError("inexact polynomial division")
    return out


def _divisors(m: int) -> List[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> Tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, ascending, monic."""
    if m < 1:
        raise ExactArithmeticError("order must be positive")
    if m == 1:
        return (-1, 1)
    num = [-1] + [0] * (m - 1) + [1]
    for d in _divisors(m):
        if d < m:
            num = _poly_div_exact(num, cyclotomic_poly(d))
    return tuple(num)


def euler_phi(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


# ---------------------------------------------------------------------------
# cyclotomic numbers
# ---------------------------------------------------------------------------

class Cyclotomic:
    """An element of Q(zeta_m) in the power basis 1, z, ..., z^(phi(m)-1).

    The representation modulo the m-th cyclotomic polynomial is canonical, so
    equality and zero tests are exact.  Elements of different orders do not
    mix; embed rationals with :meth:`from_rational` instead.
    """

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Sequence[Q]):
        phi = euler_phi(m)
        cs = [Q(c) for c in coeffs]
        if len(cs) > phi:
            cs = _cyc_reduce(m, cs)
        cs += [Q(0)] * (phi - len(cs))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Cyclotomic is immutable")

    @classmethod
    def from_rational(cls, m: int, value) -> "Cyclotomic":
        return cls(m, [Q(value)])

    @classmethod
    def zero(cls, m: int) -> "Cyclotomic":
        return cls(m, [])

    @classmethod
    def one(cls, m: int) -> "Cyclotomic":
        return cls(m, [Q(1)])

    def _coerce(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.m != self.m:
                raise ExactArithmeticError(
                    f"incompatible cyclotomic fields Q(zeta_{self.m}) and Q(zeta_{other.m})"
                )
            return other
        if isinstance(other, (int, Q)):
            return Cyclotomic.from_rational(self.m, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Cyclotomic(self.m, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        prod = [Q(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return Cyclotomic(self.m, prod)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if not self:
            raise ZeroDivisionError("cyclotomic division by zero")
        phi = [Q(c) for c in cyclotomic_poly(self.m)]
        u = _poly_inverse_mod(list(self.coeffs), phi)
        return Cyclotomic(self.m, u)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclotomic.one(self.m)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Q)):
            other = Cyclotomic.from_rational(self.m, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.m == other.m and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Q:
        if not self.is_rational():
            raise ExactArithmeticError("not a rational element")
        return self.coeffs[0]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*z")
            else:
                terms.append(f"{c}*z^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"Cyc({self.m}; {body})"


def _cyc_reduce(m: int, coeffs: List[Q]) -> List[Q]:
    phi = cyclotomic_poly(m)
    deg = len(phi) - 1
    cs = list(coeffs)
    for k in range(len(cs) - 1, deg - 1, -1):
        c = cs[k]
        if c:
            cs[k] = Q(0)
            for i in range(deg):
                cs[k - deg + i] -= c * phi[i]
    return cs[:deg]


def _poly_inverse_mod(f: List[Q], mod: List[Q]) -> List[Q]:
    """Inverse of f modulo the irreducible polynomial `mod`, over Q."""

    def trim(p):
        while p and not p[-1]:
            p.pop()
        return p

    def pdivmod(a, b):
        a = list(a)
        qout = [Q(0)] * max(1, len(a) - len(b) + 1)
        while len(a) >= len(b) and any(a):
            if not a[-1]:
                a.pop()
                continue
            k = len(a) - len(b)
            c = a[-1] / b[-1]
            qout[k] = c
            for i, bc in enumerate(b):
                a[k + i] -= c * bc
            a.pop()
        return qout, trim(a)

    r0, r1 = list(mod), trim(list(f))
    s0, s1 = [Q(0)], [Q(1)]
    while r1:
        q, r = pdivmod(r0, r1)
        snew = list(s0)
        snew += [Q(0)] * (len(q) + len(s1) - 1 - len(snew))
        for i, qc in enumerate(q):
            if qc:
                for j, sc in enumerate(s1):
                    snew[i + j] -= qc * sc
        r0, r1 = r1, r
        s0, s1 = s1, trim(snew)
    # r0 is the gcd, a nonzero constant since mod is irreducible
    if len(r0) != 1:
        raise ExactArithmeticError("element not invertible modulo the given polynomial")
    c = r0[0]
    return [s / c for s in s0]


def zeta(m: int) -> Cyclotomic:
    """A primitive m-th root of unity."""
    return zeta_power(m, 1)


def zeta_power(m: int, k: int) -> Cyclotomic:
    """zeta_m^k, reduced to the canonical power-basis form."""
    if m < 1:
        raise ExactArithmeticError("order must be positive")
    k %= m
    coeffs = [Q(0)] * k + [Q(1)]
    return Cyclotomic(m, coeffs)


def scalar_root_of_unity(m: int, k: int) -> Scalar:
    """zeta_m^k as a Fraction when it is rational, else as a Cyclotomic."""
    z = zeta_power(m, k)
    return z.rational_value() if z.is_rational() else z


# ---------------------------------------------------------------------------
# vectors and matrices
# ---------------------------------------------------------------------------

def vec(entries) -> Vector:
    return tuple(Q(e) for e in entries)


def as_matrix(rows) -> Matrix:
    out = tuple(tuple(Q(e) for e in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ExactArithmeticError("matrix rows have unequal lengths")
    return out


def identity(n: int) -> Matrix:
    return tuple(tuple(Q(1) if i == j else Q(0) for j in range(n)) for i in range(n))


def mat_vec(M, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def mat_mul(A, B):
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def mat_sub(A, B):
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_pow(M, k: int):
    n = len(M)
    out = identity(n)
    base = M
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def transpose(M):
    return tuple(zip(*M))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def is_zero_vector(v) -> bool:
    return not any(v)


def form_value(form: Matrix, u, v):
    return sum(a * sum(f * b for f, b in zip(row, v)) for a, row in zip(u, form))


def gram(vectors: Sequence, form: Matrix) -> Matrix:
    return tuple(tuple(form_value(form, u, v) for v in vectors) for u in vectors)


# ---------------------------------------------------------------------------
# elimination, generic over the scalar field
# ---------------------------------------------------------------------------

def _rref(rows: List[List]) -> List[int]:
    """In-place reduced row echelon form; returns the pivot columns."""
    pivots: List[int] = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(M) -> int:
    rows = [list(r) for r in M]
    if not rows:
        return 0
    return len(_rref(rows))


def rank_generic(rows: Sequence[Sequence]) -> int:
    """Rank over whatever field the entries live in (rationals, cyclotomics)."""
    work = [list(r) for r in rows]
    if not work:
        return 0
    return len(_rref(work))


def row_basis(rows: Sequence) -> Tuple:
    """A basis of the row space, as reduced echelon rows."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return ()
    npiv = len(_rref(work))
    return tuple(tuple(r) for r in work[:npiv])


def kernel(M, one=Q(1)) -> Tuple:
    """Basis of the right nullspace {v : M v = 0}."""
    if not M:
        return ()
    ncols = len(M[0])
    rows = [list(r) for r in M if any(r)]
    zero = one - one
    if not rows:
        return tuple(
            tuple(one if i == j else zero for i in range(ncols)) for j in range(ncols)
        )
    pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc] * one
        basis.append(tuple(v))
    return tuple(basis)


def fixed_subspace(M, one=Q(1)) -> Tuple:
    """Basis of {v : M v = v}; requires a square matrix."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise ExactArithmeticError("fixed_subspace needs a square matrix")
    shifted = tuple(
        tuple(M[i][j] - one if i == j else M[i][j] for j in range(n)) for i in range(n)
    )
    return kernel(shifted, one=one)


def solve(M, b) -> Optional[Tuple]:
    """One solution of M x = b, or None when the system is inconsistent."""
    if not M:
        return () if not any(b) else None
    ncols = len(M[0])
    aug = [list(r) + [bv] for r, bv in zip(M, b)]
    pivots = _rref(aug)
    if ncols in pivots:
        return None
    zero = M[0][0] - M[0][0]
    x = [zero] * ncols
    for r, c in enumerate(pivots):
        x[c] = aug[r][ncols]
    return tuple(x)


def coords_in_basis(basis: Sequence, v) -> Optional[Tuple]:
    """Coordinates of v in the given basis (columns-of-basis solve)."""
    if not basis:
        return () if not any(v) else None
    M = tuple(zip(*basis))
    return solve(M, v)


def invert(M: Matrix) -> Matrix:
    n = len(M)
    aug = [list(M[i]) + [Q(1) if j == i else Q(0) for j in range(n)] for i in range(n)]
    pivots = _rref(aug)
    if len(pivots) != n:
        raise ExactArithmeticError("matrix is singular")
    return tuple(tuple(row[n:]) for row in aug)


def basis_solver(basis: Sequence[Vector]):
    """Precompute a fast coordinate map for repeated solves against one basis.

    Returns f(v) -> coordinates or None when v is outside the span.
    """
    basis = tuple(tuple(b) for b in basis)
    if not basis:
        return lambda v: () if not any(v) else None
    r = len(basis)
    n = len(basis[0])
    work = [list(b) for b in basis]
    piv_cols_probe = [list(b) for b in basis]
    pivots = _rref(piv_cols_probe)
    if len(pivots) != r:
        raise ExactArithmeticError("basis vectors are dependent")
    square = tuple(tuple(row[c] for c in pivots) for row in work)
    inv = invert(transpose(square))
    if r == n:
        # a square basis spans the ambient space: no residual to check
        def f_total(v):
            return mat_vec(inv, tuple(v[c] for c in pivots))

        return f_total

    def f(v):
        restricted = tuple(v[c] for c in pivots)
        coords = mat_vec(inv, restricted)
        for j in range(n):
            if sum(coords[i] * basis[i][j] for i in range(r)) != v[j]:
                return None
        return coords

    return f


# ---------------------------------------------------------------------------
# exact positive-semidefiniteness via Schur complements
# ---------------------------------------------------------------------------

def psd_witness(G: Matrix) -> Optional[Vector]:
    """None when G is positive semidefinite, else v with v^T G v < 0."""
    n = len(G)
    work = [list(r) for r in G]
    lifted: List[Tuple[int, List[Q]]] = []  # (pivot index, elimination row)

    def lift(v: List[Q]) -> Vector:
        for piv, row in reversed(lifted):
            v[piv] = -sum(row[j] * v[j] for j in range(n))
        return tuple(v)

    active = list(range(n))
    while active:
        diag = [(i, work[i][i]) for i in active]
        neg = next((i for i, d in diag if d < 0), None)
        if neg is not None:
            v = [Q(0)] * n
            v[neg] = Q(1)
            return lift(v)
        piv = next((i for i, d in diag if d > 0), None)
        if piv is None:
            # all diagonal entries are zero: PSD iff the block is zero
            for i in active:
                for j in active:
                    if work[i][j]:
                        v = [Q(0)] * n
                        v[i] = -Q(1) / work[i][j]
                        v[j] = Q(1)
                        # v^T G v = 2*w[i][j]*v[i]*v[j] = -2 on this block
                        return lift(v)
            return None
        d = work[piv][piv]
        elim = [work[piv][j] / d if j in active and j != piv else Q(0) for j in range(n)]
        elim_full = [Q(0)] * n
        for j in active:
            if j != piv:
                elim_full[j] = work[piv][j] / d
        lifted.append((piv, elim_full))
        new_active = [i for i in active if i != piv]
        for i in new_active:
            ci = work[i][piv]
            if ci:
                for j in new_active:
                    work[i][j] -= ci * work[piv][j] / d
        active = new_active
    return None


def is_positive_semidefinite(G: Matrix) -> bool:
    return psd_witness(G) is None


# ---------------------------------------------------------------------------
# integer lattices (for discreteness certificates)
# ---------------------------------------------------------------------------

def _int_echelon(rows: List[List[int]]) -> List[List[int]]:
    rows = [r[:] for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out: List[List[int]] = []
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[i0] = rows[i0], rows[r]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if r < len(rows) and rows[r][c]:
            if rows[r][c] < 0:
                rows[r] = [-a for a in rows[r]]
            r += 1
            if r == len(rows):
                break
    return [row for row in rows[:r] if any(row)]


def in_rational_lattice(gens: Sequence[Vector], v: Vector) -> bool:
    """Whether v lies in the Z-span of the given rational generators."""
    if is_zero_vector(v):
        return True
    if not gens:
        return False
    denoms = [x.denominator for g in gens for x in g] + [x.denominator for x in v]
    D = 1
    for d in denoms:
        D = D * d // gcd(D, d)
    int_gens = [[int(x * D) for x in g] for g in gens]
    target = [int(x * D) for x in v]
    ech = _int_echelon(int_gens)
    w = target[:]
    for row in ech:
        c = next(j for j, a in enumerate(row) if a)
        if w[c]:
            if w[c] % row[c]:
                return False
            t = w[c] // row[c]
            w = [a - t * b for a, b in zip(w, row)]
    return not any(w)
