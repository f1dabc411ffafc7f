"""Monge-Ampere operators defined by n-forms on T*R^n.

A form w gives the operator f -> (df)^* w.  Pulling back along the graph of
df amounts to the jet substitution ``p_i -> u_i``, ``dp_i -> sum_j u_ij dq_j``;
:func:`mae_symbol` performs it with formal jet variables and every other
operator here factors through that symbol.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .errors import DomainError
from .exterior import (Form, basis_keys, divide_by_omega, ext_d, homotopy_potential,
                       is_primitive, lepage_decompose, merge_sign, symplectic_context)
from .invariants import (QuarticInvariant, SquareRoot, SurdForm, dual_form, hitchin_pfaffian,
                         lr_metric, perfect_square_root, pfaffian2, q_invariant,
                         rational_sqrt, scalar_invariants)
from .linalg import SignatureResult, signature_exact
from .polynomial import Poly, as_fraction


# -- Hessian symbols ----------------------------------------------------------

def hessian_pairs(n: int) -> tuple:
    return tuple((i, j) for i in range(n) for j in range(i, n))


@lru_cache(maxsize=None)
def symbol_names(n: int) -> tuple:
    """Variables of the symbol ring: q1..qn, u1..un, then u_ij for i <= j."""
    return (tuple(f"q{i + 1}" for i in range(n)) + tuple(f"u{i + 1}" for i in range(n))
            + tuple(f"u{i + 1}{j + 1}" for i, j in hessian_pairs(n)))


def symbol_nvars(n: int) -> int:
    return 2 * n + n * (n + 1) // 2


def hessian_var_index(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return 2 * n + hessian_pairs(n).index((i, j))


def hessian_var(n: int, i: int, j: int) -> Poly:
    return Poly.var(symbol_nvars(n), hessian_var_index(n, i, j))


def symbol_aliases(n: int) -> list:
    """Names accepted by the parser, including u_ji for u_ij."""
    names = list(symbol_names(n))
    return names


def parse_symbol(src: str, n: int) -> "HessSymbol":
    from .dsl import _Parser
    index = {name: i for i, name in enumerate(symbol_names(n))}
    for i in range(n):
        for j in range(i):
            index[f"u{i + 1}{j + 1}"] = hessian_var_index(n, i, j)
    p = _Parser(src, index, symbol_nvars(n), None)
    value = p.poly()
    p.expect_end()
    return HessSymbol(n, value)


@dataclass(frozen=True)
class HessSymbol:
    """Scalar form of a Monge-Ampere operator in the jet variables (q, u_i, u_ij).

    Construction checks that the polynomial is a combination of Hessian minors
    with coefficients depending on (q, u) only.
    """

    n: int
    poly: Poly
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.poly.nvars != symbol_nvars(self.n):
            raise DomainError("symbol polynomial lives in the wrong ring")
        if self.validate:
            _minor_coefficients(self)

    def __str__(self):
        return self.poly.to_str(symbol_names(self.n))

    def derivative(self, index: int) -> Poly:
        return self.poly.diff(index)

    def substitute_jets(self, f: Poly) -> Poly:
        """Replace u_i, u_ij by the derivatives of f(q) (result in the q, p ring)."""
        n = self.n
        dim = 2 * n
        grad = [f.diff(i) for i in range(n)]
        images = [Poly.var(dim, i) for i in range(n)] + grad
        images += [grad[i].diff(j) for i, j in hessian_pairs(n)]
        return self.poly.compose(images)

    def evaluate(self, q: Sequence, u: Sequence, hessian: Sequence[Sequence]) -> Fraction:
        n = self.n
        values = list(q) + list(u) + [hessian[i][j] for i, j in hessian_pairs(n)]
        return self.poly.evaluate(values)


def _to_symbol_ring(c: Poly, n: int) -> Poly:
    return c.extend(symbol_nvars(n), list(range(2 * n)))


def _from_symbol_ring(c: Poly, n: int) -> Poly:
    dim = 2 * n
    out = {}
    for e, v in c.terms.items():
        if any(e[dim:]):
            raise DomainError("coefficient depends on Hessian variables")
        out[e[:dim]] = v
    return Poly(dim, out)


def _jet_pullback(w: Form, coord_images: Sequence[Poly], dp_images) -> Poly:
    """Coefficient of dq_1..dq_n in the pullback p -> coord_images[n:], dp_i -> sum_j S_ij dq_j."""
    n = w.n
    total = Poly.zero(coord_images[0].nvars)
    for key, c in w.coeffs.items():
        qs = [i for i in key if i < n]
        ps = [i - n for i in key if i >= n]
        rest = [m for m in range(n) if m not in qs]
        sign, _ = merge_sign(tuple(qs), tuple(rest))
        minor = linalg.det([[dp_images[j][m] for m in rest] for j in ps])
        if not minor:
            continue
        term = c.compose(coord_images) * minor
        total = total + (term if sign > 0 else -term)
    return total


def mae_symbol(w: Form) -> HessSymbol:
    """Hessian symbol of the operator f -> (df)^* w."""
    n = w.n
    if w.degree != n:
        raise DomainError(f"a Monge-Ampere operator on R^{n} needs an {n}-form")
    m = symbol_nvars(n)
    coords = [Poly.var(m, i) for i in range(2 * n)]
    hess = [[hessian_var(n, i, j) for j in range(n)] for i in range(n)]
    return HessSymbol(n, _jet_pullback(w, coords, hess), validate=False)


def _require_base_function(f: Poly, n: int):
    if f.nvars != 2 * n:
        raise DomainError(f"function must live in the (q, p) ring of T*R^{n}")
    if any(f.depends_on(i) for i in range(n, 2 * n)):
        raise DomainError("function must depend on q only")


def mae_apply(w: Form, f: Poly) -> Form:
    """(df)^* w as a multiple of dq1 ^ ... ^ dqn."""
    _require_base_function(f, w.n)
    value = mae_symbol(w).substitute_jets(f)
    return Form(w.n, w.n, {tuple(range(w.n)): value})


@lru_cache(maxsize=None)
def _minor_system(n: int):
    keys = basis_keys(n, n)
    hess_idx = [hessian_var_index(n, i, j) for i, j in hessian_pairs(n)]
    columns = []
    monos = {}
    for key in keys:
        sym = mae_symbol(Form(n, n, {key: 1})).poly
        split = sym.coefficients_in(hess_idx)
        col = {}
        for e, c in split.items():
            col[e] = c.constant_value()
            monos.setdefault(e, len(monos))
        columns.append(col)
    rows = sorted(monos, key=lambda e: (sum(e), e))
    index = {e: r for r, e in enumerate(rows)}
    m = linalg.zeros(len(rows), len(keys))
    for c, col in enumerate(columns):
        for e, v in col.items():
            m[index[e]][c] = v
    return keys, rows, index, hess_idx, linalg.ExactSolver(m)


def _minor_coefficients(h: HessSymbol) -> list:
    n = h.n
    keys, rows, index, hess_idx, solver = _minor_system(n)
    m = symbol_nvars(n)
    rhs = [Poly.zero(m)] * len(rows)
    for e, c in h.poly.coefficients_in(hess_idx).items():
        if e not in index:
            raise DomainError(f"symbol {h} is not of Monge-Ampere type")
        rhs[index[e]] = c
    try:
        return solver.solve(rhs, zero=Poly.zero(m))
    except linalg.InconsistentSystem as exc:
        raise DomainError(f"symbol {h} is not of Monge-Ampere type") from exc


def form_from_symbol(h) -> Form:
    """The unique primitive n-form whose operator has symbol h."""
    if not isinstance(h, HessSymbol):
        raise TypeError("expected a HessSymbol")
    n = h.n
    keys = _minor_system(n)[0]
    coeffs = _minor_coefficients(h)
    candidate = Form(n, n, {k: _from_symbol_ring(c, n) for k, c in zip(keys, coeffs)})
    return lepage_decompose(candidate)[0]


# -- divergent type -------------------------------------------------------------

@dataclass(frozen=True)
class DivergentTypeResult:
    euler: Form
    is_divergent: bool
    alpha: Form
    mu: Poly | None


def divergent_type(w: Form) -> DivergentTypeResult:
    """Euler operator d(alpha) where d w = alpha ^ Omega; mu closes w + mu Omega when it vanishes."""
    if w.n != 2 or w.degree != 2:
        raise DomainError("divergent_type needs a 2-form on T*R^2")
    alpha = divide_by_omega(ext_d(w))
    euler = ext_d(alpha)
    if euler:
        return DivergentTypeResult(euler, False, alpha, None)
    mu = -homotopy_potential(alpha).scalar_value() if alpha else Poly.zero(4)
    if ext_d(w + symplectic_context(2).omega * mu):
        raise ArithmeticError("w + mu Omega failed to be closed")
    return DivergentTypeResult(euler, True, alpha, mu)


# -- linearization --------------------------------------------------------------

ELLIPTIC, HYPERBOLIC, PARABOLIC, INDEFINITE = "elliptic", "hyperbolic", "parabolic", "indefinite"


def classify_symmetric(principal) -> str:
    n = len(principal)
    sig = signature_exact(principal)
    if sig.zero:
        return PARABOLIC
    if (sig.positive, sig.negative) in ((n, 0), (0, n)):
        return ELLIPTIC
    if (sig.positive, sig.negative) in ((n - 1, 1), (1, n - 1)):
        return HYPERBOLIC
    return INDEFINITE


@dataclass(frozen=True)
class LinearizationResult:
    principal: list
    lower_order: list
    cls: str

    @property
    def signature(self) -> SignatureResult:
        return signature_exact(self.principal)


def _jets_at(phi: Poly, n: int, point: Sequence):
    point = [as_fraction(x) for x in point]
    if len(point) != n:
        raise DomainError(f"point needs {n} coordinates")
    full = point + [Fraction(0)] * n
    grad = [phi.diff(i) for i in range(n)]
    u = [g.evaluate(full) for g in grad]
    hess = [[grad[i].diff(j).evaluate(full) for j in range(n)] for i in range(n)]
    return point, u, hess


def linearize(w: Form, phi: Poly, point: Sequence) -> LinearizationResult:
    """Principal symbol and first-order part of t -> Delta_w(phi + t u) at a base point."""
    n = w.n
    _require_base_function(phi, n)
    h = mae_symbol(w)
    q, u, hess = _jets_at(phi, n, point)
    values = list(q) + list(u) + [hess[i][j] for i, j in hessian_pairs(n)]
    principal = [[Fraction(0)] * n for _ in range(n)]
    for i, j in hessian_pairs(n):
        d = h.poly.diff(hessian_var_index(n, i, j)).evaluate(values)
        if i == j:
            principal[i][i] = d
        else:
            principal[i][j] = principal[j][i] = d / 2
    lower = [h.poly.diff(n + i).evaluate(values) for i in range(n)]
    return LinearizationResult(principal, lower, classify_symmetric(principal))


def ellipticity_class(w: Form, phi: Poly, point: Sequence) -> str:
    return linearize(w, phi, point).cls


@dataclass(frozen=True)
class DualLinearization:
    matrix: list
    dual: SurdForm
    dual_value: Fraction  # Delta of dual.rational at the point


def linearize_via_dual(w: Form, phi: Poly, point: Sequence) -> list:
    """Principal symbol rebuilt from the dual equation and the metric.

    Returns Delta_{w_hat}(phi) times the inverse of the normalized metric
    g / sqrt|lambda| restricted to the graph of d phi.  At solutions of the
    equation this equals ``linearize(w, phi, point).principal``.
    """
    return dual_linearization(w, phi, point).matrix


def dual_linearization(w: Form, phi: Poly, point: Sequence) -> DualLinearization:
    n = w.n
    if n != 3 or w.degree != 3:
        raise DomainError("linearize_via_dual is defined for 3-forms on T*R^3")
    _require_base_function(phi, n)
    q, u, hess = _jets_at(phi, n, point)
    w_pt = w.at(list(q) + list(u))
    lam = hitchin_pfaffian(w_pt).constant_value()
    if lam == 0:
        raise DomainError("degenerate: the Hitchin pfaffian vanishes at this point")
    dual = dual_form(w_pt)
    value = mae_symbol(dual.rational).evaluate(q, u, hess)
    g = [[x.constant_value() for x in row] for row in lr_metric(w_pt)]
    frame = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)] + hess
    restricted = linalg.matmul(linalg.transpose(frame), linalg.matmul(g, frame))
    # sqrt(radicand) from the dual form times sqrt|lambda| from the normalization
    scale = dual_scale(dual, lam)
    inv = linalg.inverse(restricted)
    return DualLinearization(linalg.mscale(inv, value * scale), dual, value)


def dual_scale(dual: SurdForm, lam: Fraction) -> Fraction:
    if dual.is_rational():
        return rational_sqrt(abs(lam))
    return abs(lam)


# -- classification -------------------------------------------------------------

TABLE1 = {1: ("Laplace", "Δf = 0"), -1: ("Wave", "□f = 0"), 0: ("Degenerate", "∂²f/∂q1² = 0")}

TABLE2 = {
    (1, (3, 3, 0)): (1, "hess(f) = 1"),
    (-1, (0, 6, 0)): (2, "Δf - hess(f) = 0"),
    (-1, (4, 2, 0)): (3, "□f + hess(f) = 0"),
    (0, (0, 3, 3)): (4, "Δf = 0"),
    (0, (2, 1, 3)): (5, "□f = 0"),
    (0, (0, 1, 5)): (6, "Δ_{q2,q3} f = 0"),
    (0, (1, 0, 5)): (7, "□_{q2,q3} f = 0"),
    (0, (0, 0, 6)): (8, "∂²f/∂q1² = 0"),
}


@dataclass(frozen=True)
class Orbit2D:
    label: str
    normal_form: str
    pfaffian: Fraction
    warnings: tuple = ()


@dataclass(frozen=True)
class Orbit3D:
    row: int | None
    normal_form: str | None
    lambda_value: Fraction
    lambda_sign: int
    signature: SignatureResult
    warnings: tuple = ()

    @property
    def classified(self) -> bool:
        return self.row is not None


@dataclass(frozen=True)
class Report4D:
    invariants: list
    quartic: QuarticInvariant
    square_root: SquareRoot | None
    warnings: tuple = ()


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def classify(w: Form):
    """Orbit of a constant-coefficient equation (n = 2, 3) or the n = 4 invariant report."""
    n = w.n
    if w.degree != n:
        raise DomainError(f"classify expects an {n}-form")
    if not w.is_constant():
        raise DomainError("classify needs constant coefficients")
    notes = []
    if not is_primitive(w):
        w = lepage_decompose(w)[0]
        msg = "form was not primitive; classified its primitive part"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
    notes = tuple(notes)
    if n == 2:
        pf = pfaffian2(w).constant_value()
        label, normal = TABLE1[_sign(pf)]
        return Orbit2D(label, normal, pf, notes)
    if n == 3:
        lam = hitchin_pfaffian(w).constant_value()
        g = [[x.constant_value() for x in row] for row in lr_metric(w)]
        sig = signature_exact(g)
        row, normal = TABLE2.get((_sign(lam), tuple(sig)), (None, None))
        return Orbit3D(row, normal, lam, _sign(lam), sig, notes)
    if n == 4:
        a = scalar_invariants(w, 4)
        q = q_invariant(w)
        return Report4D(a, q, perfect_square_root(q), notes)
    raise DomainError("classification is available for n = 2, 3, 4")


# -- generating functions ----------------------------------------------------------

@dataclass(frozen=True)
class GeneratingResult:
    is_generating: bool
    beta: Form
    conjugate: Poly | None
    potential: Form | None


def generating_check(w: Form, f: Poly) -> GeneratingResult:
    """Is f a generating function, i.e. d(alpha) = f w + g Omega for some alpha and g?"""
    if w.n != 2 or w.degree != 2:
        raise DomainError("generating_check needs a 2-form on T*R^2")
    if ext_d(w):
        raise DomainError("form is not closed; normalize it as w + mu Omega via divergent_type")
    om = symplectic_context(2).omega
    beta = divide_by_omega(ext_d(w * f))
    if ext_d(beta):
        return GeneratingResult(False, beta, None, None)
    g = -homotopy_potential(beta).scalar_value() if beta else Poly.zero(4)
    closed = w * f + om * g
    alpha = homotopy_potential(closed) if closed else Form.zero(2, 1)
    if ext_d(alpha) != closed:
        raise ArithmeticError("potential check failed")
    return GeneratingResult(True, beta, g, alpha)
