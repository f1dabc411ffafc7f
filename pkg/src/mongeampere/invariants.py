"""Invariants of middle-degree forms under SL(2n) and Sp(n).

Everything here is built on :func:`phi_bracket`, the sl(2n)-valued pairing of
two n-forms obtained by contracting, wedging back and identifying
(2n-1)-forms with vectors through the volume form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Sequence

from . import linalg
from .errors import DomainError
from .exterior import (Endo, Form, PolyVectorField, basis_keys, contract_basis, lie_action,
                       symplectic_context, top_coefficient, two_form_matrix, wedge)
from .linalg import SignatureResult, signature_exact
from .polynomial import Poly

__all__ = [
    "phi_bracket", "hitchin_tensor", "pfaffian2", "hitchin_pfaffian", "lr_metric",
    "signature_exact", "SignatureResult", "sp_basis", "sp_coordinates", "ad_squared_matrix",
    "scalar_invariants", "q_invariant", "QuarticInvariant", "perfect_square_root", "SquareRoot",
    "dual_form", "SurdForm", "nijenhuis_endo", "endo_from_two_form", "moment_pairing",
]


def _require_middle(w: Form, name: str):
    if w.degree != w.n:
        raise DomainError(f"{name} expects forms of degree n={w.n}, got degree {w.degree}")


def _basis_covector(n: int, i: int) -> Form:
    return Form(n, 1, {(i,): 1})


def phi_bracket(w1: Form, w2: Form) -> Endo:
    """Phi(w1, w2)(X) = A((i_X w1) ^ w2 - (-1)^n w1 ^ (i_X w2)).

    Entry (i, j) is the e^i component of the image of e_j, computed as a top
    degree pairing rather than by forming the (2n-1)-form explicitly.
    """
    if w1.n != w2.n:
        raise DomainError(f"dimension mismatch: n={w1.n} vs n={w2.n}")
    _require_middle(w1, "phi_bracket")
    _require_middle(w2, "phi_bracket")
    n = w1.n
    dim = 2 * n
    vol_sign = symplectic_context(n).vol_sign
    sign_n = -1 if n % 2 else 1
    covs = [_basis_covector(n, i) for i in range(dim)]
    cov_w1 = [wedge(c, w1) for c in covs]
    rows = [[None] * dim for _ in range(dim)]
    for j in range(dim):
        c1 = contract_basis(j, w1)
        c2 = contract_basis(j, w2)
        for i in range(dim):
            v = top_coefficient(wedge(covs[i], c1), w2)
            v = v - top_coefficient(cov_w1[i], c2) * sign_n
            rows[i][j] = v if vol_sign > 0 else -v
    return Endo(n, rows)


def _constant(w: Form, point, name: str) -> Form:
    if point is not None:
        return w.at(point)
    if not w.is_constant():
        raise DomainError(f"{name} needs constant coefficients; pass a base point to evaluate")
    return w


def hitchin_tensor(w: Form, point=None) -> Endo:
    """K = Phi(w, w) / 2 for odd n; polynomial forms are allowed and stay symbolic."""
    _require_middle(w, "hitchin_tensor")
    if w.n % 2 == 0:
        raise DomainError("the Hitchin tensor vanishes for even n; use the ad^2 invariants")
    if point is not None:
        w = w.at(point)
    return phi_bracket(w, w) * Fraction(1, 2)


def pfaffian2(w: Form) -> Poly:
    """pf(w) with w ^ w = pf * Omega ^ Omega (n = 2)."""
    if w.n != 2 or w.degree != 2:
        raise DomainError("pfaffian2 needs a 2-form on T*R^2")
    om = symplectic_context(2).omega
    return top_coefficient(w, w) / top_coefficient(om, om).constant_value()


def hitchin_pfaffian(w: Form, point=None) -> Poly:
    """lambda(w) = tr(K^2)/6 for 3-forms on T*R^3, checked against K^2 = lambda Id."""
    if w.n != 3:
        raise DomainError("hitchin_pfaffian is defined for n = 3")
    k = hitchin_tensor(w, point)
    k2 = k @ k
    lam = k2.trace() * Fraction(1, 6)
    if k2 != Endo.identity(3) * lam:
        raise ArithmeticError("K^2 is not scalar; sign or index convention broken")
    return lam


def lr_metric(w: Form, point=None) -> list:
    """Symmetric matrix g = Omega_m K, i.e. g(e_a, e_b) = Omega(e_a, K e_b) (n = 3).

    The overall sign is chosen so that the special lagrangian form is
    negative definite, signature (0, 6).
    """
    if w.n != 3:
        raise DomainError("lr_metric is defined for n = 3")
    k = hitchin_tensor(w, point)
    om = symplectic_context(3).omega_matrix
    g = linalg.matmul([list(r) for r in om], [list(r) for r in k.rows])
    g = [[x if isinstance(x, Poly) else Poly.const(6, x) for x in row] for row in g]
    if not linalg.is_symmetric(g):
        raise ArithmeticError("Lychagin-Roubtsov metric is not symmetric; is the form primitive?")
    return g


# -- sp(n) and the ad^2 operator ------------------------------------------------

@dataclass(frozen=True)
class SpBasis:
    n: int
    elements: tuple
    labels: tuple


@lru_cache(maxsize=None)
def sp_basis(n: int) -> SpBasis:
    """A = Omega_m S for S running over the elementary symmetric matrices."""
    dim = 2 * n
    om = [list(r) for r in symplectic_context(n).omega_matrix]
    elements, labels = [], []
    for a in range(dim):
        for b in range(a, dim):
            s = linalg.zeros(dim, dim)
            s[a][b] = Fraction(1)
            s[b][a] = Fraction(1)
            elements.append(Endo(n, linalg.matmul(om, s)))
            labels.append((a, b))
    return SpBasis(n, tuple(elements), tuple(labels))


def sp_coordinates(a: Endo) -> list:
    """Coordinates of an element of sp(n) in :func:`sp_basis`; raises if not in sp."""
    n = a.n
    om = [list(r) for r in symplectic_context(n).omega_matrix]
    s = linalg.matmul(linalg.transpose(a.rows), om)
    if not linalg.is_symmetric(s):
        raise DomainError("matrix is not in sp(n): Omega(A., .) is not symmetric")
    return [s[i][j] for i, j in sp_basis(n).labels]


def _from_sp_coordinates(n: int, coords: Sequence) -> Endo:
    basis = sp_basis(n).elements
    dim = 2 * n
    rows = [[0] * dim for _ in range(dim)]
    for c, b in zip(coords, basis):
        if not c:
            continue
        for i in range(dim):
            for j in range(dim):
                if b.rows[i][j]:
                    rows[i][j] = b.rows[i][j] * c + rows[i][j]
    return Endo(n, rows)


def _rational(x) -> Fraction:
    return x.constant_value() if isinstance(x, Poly) else Fraction(x)


def ad_squared(w: Form, a: Endo) -> Endo:
    """ad^2_w(A) = Phi(w, L_A w)."""
    return phi_bracket(w, lie_action(a, w))


def ad_squared_matrix(w: Form) -> list:
    """Matrix of ad^2_w on sp(n) in :func:`sp_basis` (w constant and primitive, n even)."""
    n = w.n
    _require_middle(w, "ad_squared_matrix")
    if not w.is_constant():
        raise DomainError("ad_squared_matrix needs a constant form")
    if not wedge(w, symplectic_context(n).omega).is_zero():
        raise DomainError("ad^2 acts on sp(n) only for primitive forms; decompose first")
    cols = []
    for b in sp_basis(n).elements:
        img = ad_squared(w, b)
        cols.append([_rational(c) for c in sp_coordinates(img)])
    return linalg.transpose(cols)


def scalar_invariants(w: Form, kmax: int = 4, point=None) -> list:
    """a_k for k = 1..kmax: tr(K^{2k}) for odd n, tr((ad^2_w)^k) for even n."""
    _require_middle(w, "scalar_invariants")
    w = _constant(w, point, "scalar_invariants")
    if w.n % 2:
        k = hitchin_tensor(w).to_fractions()
        k2 = linalg.matmul(k, k)
        power = k2
        out = []
        for _ in range(kmax):
            out.append(linalg.trace(power))
            power = linalg.matmul(power, k2)
        return out
    r = ad_squared_matrix(w)
    power = r
    out = []
    for _ in range(kmax):
        out.append(linalg.trace(power))
        power = linalg.matmul(power, r)
    return out


# -- quartic invariant and square roots ------------------------------------------

def quartic_names(n: int) -> tuple:
    return tuple(f"Xq{i + 1}" for i in range(n)) + tuple(f"Xp{i + 1}" for i in range(n))


@dataclass(frozen=True)
class QuarticInvariant:
    n: int
    polynomial: Poly

    def __post_init__(self):
        if not self.polynomial.is_homogeneous(4):
            raise DomainError("quartic invariant must be homogeneous of degree 4")

    def is_zero(self) -> bool:
        return self.polynomial.is_zero()

    def __str__(self):
        return self.polynomial.to_str(quartic_names(self.n))


def rank_one_sp(n: int) -> Endo:
    """X (x) i_X Omega : Y -> Omega(X, Y) X, with symbolic X in 2n variables.

    Entries live in the quartic ring, whose variable count equals 2n as for
    forms, so the matrix is stored as an ordinary Endo.
    """
    dim = 2 * n
    om = symplectic_context(n).omega_matrix
    x = [Poly.var(dim, i) for i in range(dim)]
    iota = [sum((x[c] * om[c][b] for c in range(dim) if om[c][b]), Poly.zero(dim))
            for b in range(dim)]
    return Endo(n, [[x[a] * iota[b] for b in range(dim)] for a in range(dim)])


def q_invariant(w: Form, point=None):
    """Lychagin-Roubtsov quadratic form (odd n, as a matrix) or the quartic q_w (even n)."""
    _require_middle(w, "q_invariant")
    w = _constant(w, point, "q_invariant")
    n = w.n
    if n % 2:
        k = hitchin_tensor(w).to_fractions()
        om = [list(r) for r in symplectic_context(n).omega_matrix]
        return linalg.matmul(om, k)
    r = ad_squared_matrix(w)
    coords = sp_coordinates(rank_one_sp(n))
    image = linalg.matvec(r, coords)
    e = _from_sp_coordinates(n, image)
    return QuarticInvariant(n, (e @ e).trace())


@dataclass(frozen=True)
class SquareRoot:
    """q = factor * root^2, with root monic in graded-lex order."""

    factor: Fraction
    root: Poly

    @property
    def sign(self) -> int:
        return (self.factor > 0) - (self.factor < 0)


def perfect_square_root(q) -> SquareRoot | None:
    """Exact square root of a polynomial up to a rational factor, or None."""
    p = q.polynomial if isinstance(q, QuarticInvariant) else q
    if p.is_zero():
        return SquareRoot(Fraction(1), p)
    (lead_exp, lead_c) = p.leading_term()
    if any(k % 2 for k in lead_exp):
        return None
    target = p / lead_c
    half = tuple(k // 2 for k in lead_exp)
    root = Poly.monomial(p.nvars, half, 1)
    lead_root = (half, Fraction(1))
    for _ in range(len(target.terms) + 2):
        rem = target - root * root
        if rem.is_zero():
            return SquareRoot(lead_c, root)
        (e, c) = rem.leading_term()
        # next term t must satisfy 2 * lt(root) * t = lt(rem)
        if any(a < b for a, b in zip(e, lead_root[0])):
            return None
        t_exp = tuple(a - b for a, b in zip(e, lead_root[0]))
        if (sum(t_exp), t_exp) >= (sum(lead_root[0]), lead_root[0]):
            return None
        root = root + Poly.monomial(p.nvars, t_exp, c / 2)
    return None


# -- dual form -----------------------------------------------------------------

def rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    a, b = x.numerator, x.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


@dataclass(frozen=True)
class SurdForm:
    """The form ``rational * sqrt(radicand)``; radicand is 1 when exact."""

    rational: Form
    radicand: Fraction

    def is_rational(self) -> bool:
        return self.radicand == 1

    def exact(self) -> Form:
        if not self.is_rational():
            raise DomainError(f"form involves sqrt({self.radicand}); use .rational and .radicand")
        return self.rational

    def coefficient_floats(self) -> dict:
        scale = float(self.radicand) ** 0.5
        return {k: float(c.constant_value()) * scale for k, c in self.rational.coeffs.items()}


def first_slot(w: Form, k: Endo) -> Form:
    """The form (X, Y, ...) -> w(K X, Y, ...); raises if it fails to be alternating."""
    n = w.n
    dim = 2 * n
    deg = w.degree
    coeffs = {}
    table = {}
    for key in basis_keys(n, deg):
        v = Poly.zero(dim)
        for m in range(dim):
            kma = k.rows[m][key[0]]
            if kma:
                v = v + kma * w.coefficient((m,) + key[1:])
        table[key] = v
        coeffs[key] = v
    probe = lie_action(k, w) * Fraction(-1, deg)
    result = Form(n, deg, coeffs)
    if result != probe:
        raise ArithmeticError("w(K., ...) is not alternating")
    return result


def dual_form(w: Form) -> SurdForm:
    """The dual 3-form w(J., ., .) with J = K / sqrt|lambda|.

    J^2 = eps with eps = sign(lambda); w + sqrt(eps) * dual and
    w - sqrt(eps) * dual are the volume forms of the two eigenspaces of J.
    The pair is symmetric under dual -> -dual; the sign is fixed by J itself.
    """
    if w.n != 3 or w.degree != 3:
        raise DomainError("dual_form needs a 3-form on T*R^3")
    if not w.is_constant():
        raise DomainError("dual_form needs a constant form")
    lam = hitchin_pfaffian(w).constant_value()
    if lam == 0:
        raise DomainError("degenerate: no dual form (Hitchin pfaffian vanishes)")
    beta = first_slot(w, hitchin_tensor(w))
    root = rational_sqrt(abs(lam))
    if root is not None:
        return SurdForm(beta / root, Fraction(1))
    return SurdForm(beta / abs(lam), abs(lam))


# -- Jordan picture, Nijenhuis tensor, moment pairing ---------------------------

def endo_from_two_form(w: Form) -> Endo:
    """The A with w = Omega(A., .)."""
    n = w.n
    om = [list(r) for r in symplectic_context(n).omega_matrix]
    wm = two_form_matrix(w)
    return Endo(n, linalg.mscale(linalg.matmul(om, wm), -1))


def nijenhuis_endo(a: Endo) -> list:
    """N_A(e_i, e_j) for coordinate fields, as table[i][j] = list of 2n components.

    N(X, Y) = [AX, AY] - A[AX, Y] - A[X, AY] + A^2 [X, Y]; the last term
    vanishes on coordinate fields.
    """
    from .exterior import lie_bracket
    n = a.n
    dim = 2 * n
    cols = [a.column(i) for i in range(dim)]
    table = []
    for i in range(dim):
        row = []
        for j in range(dim):
            first = lie_bracket(cols[i], cols[j])
            # [A e_i, e_j] = -d_j(A e_i),  [e_i, A e_j] = d_i(A e_j)
            t1 = PolyVectorField(n, [-c.diff(j) for c in cols[i]])
            t2 = PolyVectorField(n, [c.diff(i) for c in cols[j]])
            val = first - (a @ t1) - (a @ t2)
            row.append(list(val.components))
        table.append(row)
    return table


def moment_pairing(w1: Form, w2: Form) -> Poly:
    """Theta(w1, w2) = w1 ^ w2 / vol."""
    ctx = symplectic_context(w1.n)
    v = top_coefficient(w1, w2)
    return v if ctx.vol_sign > 0 else -v
