"""Exact dense linear algebra over the rationals.

Matrices are plain lists of rows.  Entries may be :class:`~fractions.Fraction`
or :class:`~mongeampere.polynomial.Poly`; the routines below only need ring
operations unless they say otherwise (``inverse`` and :class:`ExactSolver`
require a rational coefficient matrix, though the solver accepts any
right-hand side that is a vector space over Q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .errors import DomainError
from .polynomial import Poly


def zeros(rows: int, cols: int, zero=Fraction(0)) -> list:
    return [[zero for _ in range(cols)] for _ in range(rows)]


def identity(n: int, one=Fraction(1), zero=Fraction(0)) -> list:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = x * y + acc
            out_row.append(acc if not isinstance(acc, int) else Fraction(acc))
        out.append(out_row)
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = x * y + acc
        out.append(acc if not isinstance(acc, int) else Fraction(acc))
    return out


def madd(a, b) -> list:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def msub(a, b) -> list:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mscale(a, c) -> list:
    return [[x * c for x in row] for row in a]


def trace(a) -> object:
    acc = 0
    for i in range(len(a)):
        acc = a[i][i] + acc
    return acc if not isinstance(acc, int) else Fraction(acc)


def is_symmetric(a) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det(a) -> object:
    """Determinant by the Leibniz formula for tiny matrices, else elimination.

    The Leibniz route works over any commutative ring (Poly entries); the
    elimination route needs a field and is used for rational matrices only.
    """
    n = len(a)
    if n == 0:
        return Fraction(1)
    rational = all(isinstance(x, (int, Fraction)) for row in a for x in row)
    if not rational:
        if n > 6:
            raise ValueError("polynomial determinant limited to 6x6")
        total = 0
        for perm in permutations(range(n)):
            term = _perm_sign(perm)
            for i, j in enumerate(perm):
                term = a[i][j] * term
                if not term:
                    break
            if term:
                total = term + total
        return total
    m = [[Fraction(x) for x in row] for row in a]
    result = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return result


def inverse(a) -> list:
    """Inverse of a rational matrix; raises DomainError when singular."""
    n = len(a)
    solver = ExactSolver([[Fraction(x) for x in row] for row in a])
    if solver.rank < n:
        raise DomainError("matrix is singular")
    cols = [solver.solve([Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return transpose(cols)


class ExactSolver:
    """Row-reduction of a fixed rational matrix, reusable over many right-hand sides.

    ``solve(b)`` returns the particular solution with free variables set to
    zero; it raises :class:`DomainError` if the system is inconsistent.  The
    right-hand side entries need only support ``+`` and multiplication by
    Fractions, so vectors of polynomials are fine.
    """

    def __init__(self, matrix: Sequence[Sequence[Fraction]]):
        rows = len(matrix)
        cols = len(matrix[0]) if rows else 0
        self.shape = (rows, cols)
        m = [[Fraction(x) for x in row] for row in matrix]
        t = identity(rows)
        pivots = []
        r = 0
        for c in range(cols):
            piv = next((i for i in range(r, rows) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            t[r], t[piv] = t[piv], t[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            t[r] = [x * inv for x in t[r]]
            for i in range(rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
                    t[i] = [x - f * y for x, y in zip(t[i], t[r])]
            pivots.append(c)
            r += 1
            if r == rows:
                break
        self.rank = r
        self.pivots = pivots
        self._transform = t
        self._rref = m

    @property
    def injective(self) -> bool:
        return self.rank == self.shape[1]

    def _apply(self, b: Sequence):
        if len(b) != self.shape[0]:
            raise ValueError(f"right-hand side has length {len(b)}, expected {self.shape[0]}")
        out = []
        for row in self._transform:
            acc = None
            for x, y in zip(row, b):
                if x and y:
                    term = y * x
                    acc = term if acc is None else acc + term
            out.append(acc)
        return out

    def residual(self, b: Sequence) -> list:
        """Components of the reduced right-hand side that must vanish for consistency."""
        y = self._apply(b)
        return [v for v in y[self.rank:] if v is not None and v]

    def solve(self, b: Sequence, zero=None):
        y = self._apply(b)
        bad = [v for v in y[self.rank:] if v is not None and v]
        if bad:
            raise InconsistentSystem(bad)
        if zero is None:
            zero = _zero_like(b)
        x = [zero] * self.shape[1]
        for r, c in enumerate(self.pivots):
            x[c] = y[r] if y[r] is not None else zero
        return x


class InconsistentSystem(DomainError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"linear system is inconsistent (residual {[str(r) for r in residual]})")


def _zero_like(b):
    for v in b:
        if isinstance(v, Poly):
            return Poly.zero(v.nvars)
    return Fraction(0)


def charpoly(a) -> list:
    """Coefficients ``[c0, c1, ..., cn]`` of ``det(x I - a)`` (Faddeev-LeVerrier).

    Needs division by integers only, so it works for Poly entries as well.
    """
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = zeros(n, n)
    ident = identity(n)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
        m = madd(matmul(a, m), mscale(ident, coeffs[n - k + 1]))
        am = matmul(a, m)
        coeffs[n - k] = trace(am) * Fraction(-1, k)
    return coeffs


def _sign_changes(seq: Sequence[Fraction]) -> int:
    signs = [1 if x > 0 else -1 for x in seq if x]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


@dataclass(frozen=True)
class SignatureResult:
    positive: int
    negative: int
    zero: int

    def as_list(self) -> list:
        return [self.positive, self.negative, self.zero]

    def __iter__(self):
        return iter((self.positive, self.negative, self.zero))


def signature_exact(m) -> SignatureResult:
    """Inertia of a symmetric rational matrix.

    The characteristic polynomial of a real symmetric matrix has only real
    roots, so Descartes' rule of signs is exact on ``p(x)`` and ``p(-x)``.
    """
    m = [[_as_rational(x) for x in row] for row in m]
    if not is_symmetric(m):
        raise DomainError("signature requires a symmetric matrix")
    n = len(m)
    c = charpoly(m)
    z = next(i for i, x in enumerate(c) if x)
    reduced = c[z:]
    pos = _sign_changes(list(reversed(reduced)))
    neg = _sign_changes([x * (-1) ** i for i, x in enumerate(reduced)][::-1])
    if pos + neg + z != n:
        raise ArithmeticError("Descartes count inconsistent; matrix not symmetric over R?")
    return SignatureResult(pos, neg, z)


def _as_rational(x) -> Fraction:
    if isinstance(x, Poly):
        return x.constant_value()
    return Fraction(x)


def rank(m) -> int:
    if not m:
        return 0
    return ExactSolver([[_as_rational(x) for x in row] for row in m]).rank
