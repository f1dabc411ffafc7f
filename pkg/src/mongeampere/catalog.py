"""Named forms and symbols used throughout the package, demos and tests."""

from __future__ import annotations

from fractions import Fraction

from .dsl import parse_form, parse_poly
from .exterior import Form
from .mae import HessSymbol, form_from_symbol, parse_symbol
from .polynomial import Poly

LAPLACE_2D = "dq1^dp2 - dq2^dp1"
WAVE_2D = "dq1^dp2 + dq2^dp1"
DEGENERATE_2D = "dq1^dp2"
MONGE_AMPERE_2D = "dp1^dp2 - dq1^dq2"

SLAG_3D = "dp1^dq2^dq3 + dq1^dp2^dq3 + dq1^dq2^dp3 - dp1^dp2^dp3"
HESS_3D = "dp1^dp2^dp3 - dq1^dq2^dq3"
LAPLACE_3D = "dp1^dq2^dq3 + dq1^dp2^dq3 + dq1^dq2^dp3"

# printed with a missing dq2^dp2 term; not primitive
BORN_INFELD_PRINTED = "(1-p1^2)*dq1^dp2 + p1*p2*dq1^dp1 + (1+p2^2)*dq2^dp1"
BORN_INFELD = "(1-p1^2)*dq1^dp2 + p1*p2*dq1^dp1 - p1*p2*dq2^dp2 + (1+p2^2)*dq2^dp1"
# (1 - u1^2) u22 + 2 u1 u2 u12 - (1 + u2^2) u11, with q1 the time variable
BORN_INFELD_SYMBOL = "(1-u1^2)*u22 + 2*u1*u2*u12 - (1+u2^2)*u11"

# the partial Legendre map (q1, q2, p1, p2) -> (q1, p2, p1, -q2)
PARTIAL_LEGENDRE = [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0]]

HESS3 = "(u11*u22*u33 + 2*u12*u13*u23 - u11*u23^2 - u22*u13^2 - u33*u12^2)"

# classification rows for n = 3: (row, symbol, lambda sign, signature)
TABLE2_SYMBOLS = [
    (1, f"{HESS3} - 1", 1, (3, 3, 0)),
    (2, f"u11 + u22 + u33 - {HESS3}", -1, (0, 6, 0)),
    (3, f"u11 - u22 - u33 - {HESS3}", -1, (4, 2, 0)),
    (4, "u11 + u22 + u33", 0, (0, 3, 3)),
    (5, "u11 - u22 - u33", 0, (2, 1, 3)),
    (6, "u22 + u33", 0, (0, 1, 5)),
    (7, "u22 - u33", 0, (1, 0, 5)),
    (8, "u11", 0, (0, 0, 6)),
]

TABLE1_FORMS = [("Laplace", LAPLACE_2D, 1), ("Wave", WAVE_2D, -1), ("Degenerate", DEGENERATE_2D, 0)]


def _det4() -> str:
    from itertools import permutations
    terms = []
    for perm in permutations(range(4)):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        mono = "*".join(f"u{min(i, p) + 1}{max(i, p) + 1}" for i, p in enumerate(perm))
        terms.append(("-" if inv % 2 else "+") + mono)
    return "(" + " ".join(terms) + ")"


def _sigma2_4() -> str:
    """Sum of principal 2x2 minors of the 4x4 Hessian."""
    parts = []
    for i in range(4):
        for j in range(i + 1, 4):
            parts.append(f"+ u{i + 1}{i + 1}*u{j + 1}{j + 1} - u{i + 1}{j + 1}^2")
    return "(" + " ".join(parts).lstrip("+ ") + ")"


DET4 = _det4()
SIGMA2_4 = _sigma2_4()

# n = 4 examples: (name, symbol, expected shape of the quartic invariant)
TABLE3_SYMBOLS = [
    ("usual Monge-Ampere", f"{DET4} - 1", "square of sum Xq_i Xp_i"),
    ("special lagrangian", f"{DET4} - {SIGMA2_4} + 1", "square of sum Xq_i^2 + Xp_i^2"),
    ("Plebanski first heavenly", "u12*u34 - u14*u23 - 1", "zero"),
    ("Plebanski second heavenly", "u11*u33 - u13^2 + u12 - u34", "positive multiple of Xq1^4"),
    ("Grant", "u11 + u14*u23 - u13*u24", "zero"),
]


def form(name_or_src: str, n: int) -> Form:
    return parse_form(name_or_src, n)


def slag_3d() -> Form:
    return parse_form(SLAG_3D, 3)


def hess_3d() -> Form:
    return parse_form(HESS_3D, 3)


def laplace_3d() -> Form:
    return parse_form(LAPLACE_3D, 3)


def laplace_2d() -> Form:
    return parse_form(LAPLACE_2D, 2)


def wave_2d() -> Form:
    return parse_form(WAVE_2D, 2)


def born_infeld() -> Form:
    return parse_form(BORN_INFELD, 2)


def born_infeld_printed() -> Form:
    return parse_form(BORN_INFELD_PRINTED, 2)


def tricomi(alpha=1, beta=1, gamma: Poly | str | None = None) -> Form:
    """(alpha p1 + beta p2 + gamma(q)) dq1^dq2 + dq1^dp2 - q2 dq2^dp1."""
    if gamma is None:
        gamma = Poly.zero(4)
    elif isinstance(gamma, str):
        gamma = parse_poly(gamma, 2)
    if any(gamma.depends_on(i) for i in (2, 3)):
        raise ValueError("gamma must depend on q only")
    p1, p2 = Poly.var(4, 2), Poly.var(4, 3)
    coeff = p1 * Fraction(alpha) + p2 * Fraction(beta) + gamma
    return Form.basis(2, (0, 1), coeff) + parse_form("dq1^dp2 - q2*dq2^dp1", 2)


def generic_2d(a, b, c, d, e) -> Form:
    """Primitive form of A + B u11 + 2C u12 + D u22 + E (u11 u22 - u12^2) = 0, constant A..E."""
    h = f"({a}) + ({b})*u11 + 2*({c})*u12 + ({d})*u22 + ({e})*(u11*u22 - u12^2)"
    return form_from_symbol(parse_symbol(h, 2))


def symbol(src: str, n: int) -> HessSymbol:
    return parse_symbol(src, n)


def from_symbol(src: str, n: int) -> Form:
    return form_from_symbol(parse_symbol(src, n))
