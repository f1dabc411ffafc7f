"""Exterior calculus with polynomial coefficients on T*R^n.

Coordinates are ordered ``(q1..qn, p1..pn)`` and covector ``e^i`` is ``dq_{i+1}``
for ``i < n`` and ``dp_{i-n+1}`` otherwise; every sign in the package is
relative to this (0-based) order.  A basis k-form is keyed by the strictly
increasing tuple of its covector indices, and is evaluated on vectors by the
determinant convention ``(e^a ^ e^b)(X, Y) = X^a Y^b - X^b Y^a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import DomainError
from .polynomial import Poly, as_fraction


def coordinate_names(n: int) -> tuple:
    return tuple(f"q{i + 1}" for i in range(n)) + tuple(f"p{i + 1}" for i in range(n))


def covector_names(n: int) -> tuple:
    return tuple(f"dq{i + 1}" for i in range(n)) + tuple(f"dp{i + 1}" for i in range(n))


def merge_sign(a: Sequence[int], b: Sequence[int]):
    """Sign and sorted key of ``e^a ^ e^b``; ``(0, None)`` if they share an index."""
    if set(a) & set(b):
        return 0, None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


def sort_sign(indices: Sequence[int]):
    """Sign of the permutation sorting ``indices`` (0 on repeats) and the sorted tuple."""
    if len(set(indices)) != len(indices):
        return 0, None
    inv = sum(1 for i in range(len(indices)) for j in range(i + 1, len(indices))
              if indices[i] > indices[j])
    return (-1 if inv % 2 else 1), tuple(sorted(indices))


def _to_poly(c, nvars: int) -> Poly:
    if isinstance(c, Poly):
        if c.nvars != nvars:
            raise ValueError(f"coefficient ring has {c.nvars} variables, expected {nvars}")
        return c
    return Poly.const(nvars, c)


class Form:
    """Homogeneous differential form of degree ``degree`` on T*R^n."""

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n: int, degree: int, coeffs: Mapping[tuple, object] | None = None):
        if degree < 0:
            raise DomainError("form degree must be non-negative")
        self.n = n
        self.degree = degree
        dim = 2 * n
        clean = {}
        for key, c in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree or list(key) != sorted(set(key)) or any(not 0 <= i < dim for i in key):
                raise ValueError(f"invalid basis key {key} for a {degree}-form in dimension {dim}")
            c = _to_poly(c, dim)
            if c:
                clean[key] = c
        self.coeffs = clean

    @classmethod
    def _raw(cls, n, degree, coeffs):
        f = object.__new__(cls)
        f.n, f.degree, f.coeffs = n, degree, coeffs
        return f

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n: int, degree: int) -> "Form":
        return cls._raw(n, degree, {})

    @classmethod
    def basis(cls, n: int, key: Sequence[int], coeff=1) -> "Form":
        """Signed basis form for an arbitrary index sequence (sorted internally)."""
        sign, skey = sort_sign(tuple(key))
        if not sign:
            return cls.zero(n, len(key))
        return cls(n, len(key), {skey: _to_poly(coeff, 2 * n) * sign})

    @classmethod
    def scalar(cls, n: int, coeff) -> "Form":
        return cls(n, 0, {(): coeff})

    @classmethod
    def one_form(cls, n: int, components: Sequence) -> "Form":
        return cls(n, 1, {(i,): c for i, c in enumerate(components)})

    # -- queries --------------------------------------------------------
    @property
    def nvars(self) -> int:
        return 2 * self.n

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return all(c.is_constant() for c in self.coeffs.values())

    def coefficient(self, key: Sequence[int]) -> Poly:
        sign, skey = sort_sign(tuple(key))
        if not sign:
            return Poly.zero(self.nvars)
        c = self.coeffs.get(skey)
        if c is None:
            return Poly.zero(self.nvars)
        return c * sign

    def scalar_value(self) -> Poly:
        if self.degree != 0:
            raise DomainError("not a 0-form")
        return self.coeffs.get((), Poly.zero(self.nvars))

    def at(self, point: Sequence) -> "Form":
        """Freeze coefficients at a rational base point (a constant form)."""
        return Form(self.n, self.degree,
                    {k: c.evaluate(point) for k, c in self.coeffs.items()})

    def depends_on_p(self) -> bool:
        return any(c.depends_on(i) for c in self.coeffs.values() for i in range(self.n, 2 * self.n))

    def __call__(self, *vectors) -> Poly:
        """Evaluate on ``degree`` vectors (sequences of rationals or Polys)."""
        if len(vectors) != self.degree:
            raise DomainError(f"a {self.degree}-form takes {self.degree} vectors")
        total = Poly.zero(self.nvars)
        for key, c in self.coeffs.items():
            minor = linalg.det([[_to_poly(v[i], self.nvars) for v in vectors] for i in key])
            total = total + c * _to_poly(minor, self.nvars)
        return total

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "Form"):
        if not isinstance(other, Form):
            raise TypeError("expected a Form")
        if other.n != self.n:
            raise DomainError(f"dimension mismatch: n={self.n} vs n={other.n}")
        if other.degree != self.degree:
            raise DomainError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Form._raw(self.n, self.degree, out)

    def __neg__(self):
        return Form._raw(self.n, self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        """Multiply by a scalar function (Poly) or a rational."""
        if isinstance(c, Form):
            return NotImplemented
        c = _to_poly(c, self.nvars)
        out = {}
        for k, v in self.coeffs.items():
            w = v * c
            if w:
                out[k] = w
        return Form._raw(self.n, self.degree, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = as_fraction(c)
        return self * (1 / c)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (self.n, self.degree, self.coeffs) == (other.n, other.degree, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.coeffs.items())))

    def map_coefficients(self, fn) -> "Form":
        return Form(self.n, self.degree, {k: fn(c) for k, c in self.coeffs.items()})

    def wedge(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __repr__(self):
        from .dsl import format_form
        return f"Form(n={self.n}, degree={self.degree}, {format_form(self)!r})"


class PolyVectorField:
    """Vector field on R^{2n} with polynomial components along d/dq, d/dp."""

    __slots__ = ("n", "components")

    def __init__(self, n: int, components: Sequence):
        if len(components) != 2 * n:
            raise DomainError(f"vector field needs {2 * n} components, got {len(components)}")
        self.n = n
        self.components = tuple(_to_poly(c, 2 * n) for c in components)

    @classmethod
    def coordinate(cls, n: int, index: int) -> "PolyVectorField":
        return cls(n, [int(i == index) for i in range(2 * n)])

    @classmethod
    def zero(cls, n: int) -> "PolyVectorField":
        return cls(n, [0] * (2 * n))

    def __getitem__(self, i):
        return self.components[i]

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other):
        return PolyVectorField(self.n, [a + b for a, b in zip(self, other)])

    def __sub__(self, other):
        return PolyVectorField(self.n, [a - b for a, b in zip(self, other)])

    def __neg__(self):
        return PolyVectorField(self.n, [-a for a in self])

    def __mul__(self, c):
        return PolyVectorField(self.n, [a * c for a in self])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.n == other.n and self.components == other.components

    def is_zero(self) -> bool:
        return not any(self.components)

    def is_constant(self) -> bool:
        return all(c.is_constant() for c in self.components)

    def derivative(self, f: Poly) -> Poly:
        """Directional derivative X(f)."""
        total = Poly.zero(2 * self.n)
        for i, c in enumerate(self.components):
            if c:
                total = total + c * f.diff(i)
        return total

    def __repr__(self):
        names = coordinate_names(self.n)
        return "PolyVectorField(" + ", ".join(c.to_str(names) for c in self.components) + ")"


def lie_bracket(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    """[X, Y]^k = X(Y^k) - Y(X^k)."""
    return PolyVectorField(x.n, [x.derivative(yk) - y.derivative(xk) for xk, yk in zip(x, y)])


class Endo:
    """2n x 2n matrix of polynomials acting on column vectors."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Sequence[Sequence]):
        size = 2 * n
        if len(rows) != size or any(len(r) != size for r in rows):
            raise DomainError(f"endomorphism must be {size}x{size}")
        self.n = n
        self.rows = tuple(tuple(_to_poly(x, size) for x in r) for r in rows)

    @classmethod
    def identity(cls, n: int) -> "Endo":
        return cls(n, linalg.identity(2 * n))

    @classmethod
    def zero(cls, n: int) -> "Endo":
        return cls(n, linalg.zeros(2 * n, 2 * n))

    @property
    def size(self) -> int:
        return 2 * self.n

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> PolyVectorField:
        return PolyVectorField(self.n, [r[j] for r in self.rows])

    @classmethod
    def from_columns(cls, n: int, cols: Sequence[PolyVectorField]) -> "Endo":
        return cls(n, linalg.transpose([list(c.components) for c in cols]))

    def __matmul__(self, other):
        if isinstance(other, Endo):
            return Endo(self.n, linalg.matmul(self.rows, other.rows))
        if isinstance(other, PolyVectorField):
            return PolyVectorField(self.n, linalg.matvec(self.rows, other.components))
        return NotImplemented

    def __add__(self, other):
        return Endo(self.n, linalg.madd(self.rows, other.rows))

    def __sub__(self, other):
        return Endo(self.n, linalg.msub(self.rows, other.rows))

    def __neg__(self):
        return Endo(self.n, [[-x for x in r] for r in self.rows])

    def __mul__(self, c):
        return Endo(self.n, linalg.mscale(self.rows, c))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Endo.identity(self.n)
        for _ in range(k):
            out = out @ self
        return out

    def __eq__(self, other):
        if not isinstance(other, Endo):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def transpose(self) -> "Endo":
        return Endo(self.n, linalg.transpose(self.rows))

    def trace(self) -> Poly:
        return _to_poly(linalg.trace(self.rows), self.size)

    def is_constant(self) -> bool:
        return all(x.is_constant() for r in self.rows for x in r)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def to_fractions(self) -> list:
        return [[x.constant_value() for x in r] for r in self.rows]

    def at(self, point) -> "Endo":
        return Endo(self.n, [[x.evaluate(point) for x in r] for r in self.rows])

    def __repr__(self):
        names = coordinate_names(self.n)
        return "Endo([" + ", ".join("[" + ", ".join(x.to_str(names) for x in r) + "]" for r in self.rows) + "])"


@dataclass(frozen=True)
class SymplecticContext:
    """The fixed symplectic structure on T*R^n."""

    n: int
    omega: Form
    vol: Form
    omega_matrix: tuple
    poisson: tuple

    @property
    def vol_sign(self) -> int:
        """vol = vol_sign * e^0 ^ ... ^ e^{2n-1}."""
        return int(self.vol.coefficient(tuple(range(2 * self.n))).constant_value())


@lru_cache(maxsize=None)
def symplectic_context(n: int) -> SymplecticContext:
    dim = 2 * n
    omega = Form(n, 2, {(i, n + i): 1 for i in range(n)})
    power = Form.scalar(n, 1)
    for _ in range(n):
        power = wedge(power, omega)
    vol = power / factorial(n)
    om = linalg.zeros(dim, dim)
    for i in range(n):
        om[i][n + i] = Fraction(1)
        om[n + i][i] = Fraction(-1)
    poisson = linalg.inverse(om)
    return SymplecticContext(n, omega, vol, tuple(map(tuple, om)), tuple(map(tuple, poisson)))


def omega_form(n: int) -> Form:
    return symplectic_context(n).omega


def volume_form(n: int) -> Form:
    return symplectic_context(n).vol


# -- core operations --------------------------------------------------------

def wedge(a: Form, b: Form) -> Form:
    """Exterior product; the zero form when the degree exceeds 2n."""
    if a.n != b.n:
        raise DomainError(f"dimension mismatch: n={a.n} vs n={b.n}")
    out: dict = {}
    for ka, ca in a.coeffs.items():
        for kb, cb in b.coeffs.items():
            sign, key = merge_sign(ka, kb)
            if not sign:
                continue
            term = ca * cb
            if sign < 0:
                term = -term
            prev = out.get(key)
            out[key] = term if prev is None else prev + term
    return Form._raw(a.n, a.degree + b.degree, {k: v for k, v in out.items() if v})


def wedge_all(forms: Iterable[Form], n: int) -> Form:
    result = Form.scalar(n, 1)
    for f in forms:
        result = wedge(result, f)
    return result


def top_coefficient(a: Form, b: Form) -> Poly:
    """The scalar s with a ^ b = s * e^0 ^ ... ^ e^{2n-1} (complementary degrees)."""
    dim = 2 * a.n
    if a.degree + b.degree != dim:
        raise DomainError("top_coefficient needs complementary degrees")
    full = set(range(dim))
    total = Poly.zero(dim)
    for ka, ca in a.coeffs.items():
        kb = tuple(sorted(full - set(ka)))
        cb = b.coeffs.get(kb)
        if cb is None:
            continue
        sign, _ = merge_sign(ka, kb)
        term = ca * cb
        total = total + (term if sign > 0 else -term)
    return total


def contract(x: PolyVectorField, a: Form) -> Form:
    """Interior product: (i_X a)(Y, ...) = a(X, Y, ...)."""
    if x.n != a.n:
        raise DomainError(f"dimension mismatch: n={x.n} vs n={a.n}")
    if a.degree == 0:
        raise DomainError("cannot contract a 0-form")
    out: dict = {}
    for key, c in a.coeffs.items():
        for pos, i in enumerate(key):
            xi = x.components[i]
            if not xi:
                continue
            rest = key[:pos] + key[pos + 1:]
            term = c * xi
            if pos % 2:
                term = -term
            prev = out.get(rest)
            out[rest] = term if prev is None else prev + term
    return Form._raw(a.n, a.degree - 1, {k: v for k, v in out.items() if v})


def contract_basis(j: int, a: Form) -> Form:
    """Interior product with the coordinate field e_j."""
    if a.degree == 0:
        raise DomainError("cannot contract a 0-form")
    out = {}
    for key, c in a.coeffs.items():
        if j in key:
            pos = key.index(j)
            out[key[:pos] + key[pos + 1:]] = -c if pos % 2 else c
    return Form._raw(a.n, a.degree - 1, out)


def ext_d(a: Form) -> Form:
    dim = 2 * a.n
    out: dict = {}
    for key, c in a.coeffs.items():
        for j in range(dim):
            if j in key:
                continue
            dc = c.diff(j)
            if not dc:
                continue
            sign, k2 = merge_sign((j,), key)
            term = dc if sign > 0 else -dc
            prev = out.get(k2)
            out[k2] = term if prev is None else prev + term
    return Form._raw(a.n, a.degree + 1, {k: v for k, v in out.items() if v})


def exterior_derivative_of_function(f: Poly, n: int) -> Form:
    return ext_d(Form.scalar(n, f))


def _as_endo(A, n: int):
    if isinstance(A, Endo):
        return A
    return Endo(n, A)


def lie_action(A, a: Form) -> Form:
    """Algebraic action of gl(2n): (L_A a)(X_1..X_k) = -sum_i a(X_1, .., A X_i, .., X_k).

    Acts pointwise on coefficients (the base variables are not moved).  With
    this sign the map A -> L_A is a Lie algebra representation, and the n=2
    trace identity tr(ad^2) = 16 pf holds for ad^2(B) = Phi(w, L_B w).
    """
    A = _as_endo(A, a.n)
    if A.n != a.n:
        raise DomainError(f"dimension mismatch: n={A.n} vs n={a.n}")
    dim = 2 * a.n
    out: dict = {}
    # e^i o A = sum_b A_ib e^b, substituted slot by slot with an overall minus sign
    for key, c in a.coeffs.items():
        for pos, i in enumerate(key):
            row = A.rows[i]
            for b in range(dim):
                aib = row[b]
                if not aib:
                    continue
                new = key[:pos] + (b,) + key[pos + 1:]
                sign, k2 = sort_sign(new)
                if not sign:
                    continue
                term = c * aib
                if sign > 0:
                    term = -term
                prev = out.get(k2)
                out[k2] = term if prev is None else prev + term
    return Form._raw(a.n, a.degree, {k: v for k, v in out.items() if v})


def a_iso(theta: Form) -> PolyVectorField:
    """The vector A(theta) with <alpha, A(theta)> vol = alpha ^ theta."""
    n = theta.n
    if theta.degree != 2 * n - 1:
        raise DomainError(f"a_iso expects a {2 * n - 1}-form, got degree {theta.degree}")
    s = symplectic_context(n).vol_sign
    comps = []
    for i in range(2 * n):
        v = top_coefficient(Form.basis(n, (i,)), theta)
        comps.append(v if s > 0 else -v)
    return PolyVectorField(n, comps)


def euler_field(n: int) -> PolyVectorField:
    return PolyVectorField(n, [Poly.var(2 * n, i) for i in range(2 * n)])


def homotopy_potential(a: Form) -> Form:
    """Radial homotopy h with d(h(a)) = a for closed polynomial forms.

    A monomial of degree d in the coefficient of a k-form picks up 1/(d + k).
    """
    if a.degree < 1:
        raise DomainError("homotopy potential needs degree >= 1")
    da = ext_d(a)
    if da:
        from .dsl import format_form
        raise DomainError(f"form is not closed: d(a) = {format_form(da)}")
    k = a.degree
    dim = 2 * a.n
    out: dict = {}
    for key, c in a.coeffs.items():
        for pos, i in enumerate(key):
            rest = key[:pos] + key[pos + 1:]
            terms = {}
            for e, v in c.terms.items():
                e2 = list(e)
                e2[i] += 1
                terms[tuple(e2)] = v / (sum(e) + k)
            term = Poly(dim, terms)
            if pos % 2:
                term = -term
            prev = out.get(rest)
            out[rest] = term if prev is None else prev + term
    return Form._raw(a.n, k - 1, {kk: v for kk, v in out.items() if v})


@lru_cache(maxsize=None)
def basis_keys(n: int, k: int) -> tuple:
    return tuple(combinations(range(2 * n), k))


@lru_cache(maxsize=None)
def _lefschetz_solver(n: int, k: int):
    """Solver for beta ^ Omega^power = theta, keyed by (n, k) for power 1."""
    return _lefschetz_power_solver(n, k, 1)


@lru_cache(maxsize=None)
def _lefschetz_power_solver(n: int, k: int, power: int):
    src = basis_keys(n, k)
    dst = basis_keys(n, k + 2 * power)
    om = symplectic_context(n).omega
    op = Form.scalar(n, 1)
    for _ in range(power):
        op = wedge(op, om)
    index = {key: r for r, key in enumerate(dst)}
    m = linalg.zeros(len(dst), len(src))
    for col, key in enumerate(src):
        img = wedge(Form(n, k, {key: 1}), op)
        for k2, c in img.coeffs.items():
            m[index[k2]][col] = c.constant_value()
    return src, dst, linalg.ExactSolver(m) if dst else None


def _solve_lefschetz(theta: Form, k: int, power: int) -> Form:
    n = theta.n
    src, dst, solver = _lefschetz_power_solver(n, k, power)
    if not dst:
        return Form.zero(n, k)
    rhs = [theta.coeffs.get(key, Poly.zero(2 * n)) for key in dst]
    sol = solver.solve(rhs, zero=Poly.zero(2 * n))
    return Form(n, k, dict(zip(src, sol)))


def divide_by_omega(theta: Form) -> Form:
    """The unique beta with beta ^ Omega = theta, where wedge by Omega is injective."""
    n = theta.n
    k = theta.degree - 2
    if k < 0:
        raise DomainError("divide_by_omega needs degree >= 2")
    if k > n - 1:
        raise DomainError(
            f"wedge by Omega is not injective on {k}-forms (n={n}); use lepage_decompose")
    src, dst, solver = _lefschetz_power_solver(n, k, 1)
    rhs = [theta.coeffs.get(key, Poly.zero(2 * n)) for key in dst]
    residual = solver.residual(rhs)
    if residual:
        from .dsl import format_poly
        raise DomainError("form is not divisible by Omega; residual "
                          + ", ".join(format_poly(r, n) for r in residual))
    return _solve_lefschetz(theta, k, 1)


def lepage_decompose(omega: Form):
    """Split an n-form as omega0 + omega1 ^ Omega with omega0 primitive."""
    n = omega.n
    if omega.degree != n:
        raise DomainError(f"lepage_decompose expects an {n}-form, got degree {omega.degree}")
    if n < 2:
        # every form of degree n < 2 is primitive
        return omega, Form.zero(n, 0)
    om = symplectic_context(n).omega
    # omega1 ^ Omega^2 = omega ^ Omega; wedge by Omega^2 is bijective on (n-2)-forms
    omega1 = _solve_lefschetz(wedge(omega, om), n - 2, 2)
    omega0 = omega - wedge(omega1, om)
    return omega0, omega1


def is_primitive(omega: Form) -> bool:
    return wedge(omega, symplectic_context(omega.n).omega).is_zero()


def pullback_linear(F, a: Form) -> Form:
    """Pullback by the linear map x -> F x: (F*a)(X..) = a(FX, ..), coefficients f(x) -> f(Fx)."""
    n = a.n
    dim = 2 * n
    if isinstance(F, Endo):
        rows = F.to_fractions()
    else:
        rows = [[as_fraction(x) for x in r] for r in F]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise DomainError(f"pullback map must be {dim}x{dim}")
    if linalg.det(rows) == 0:
        raise DomainError("pullback map is singular")
    images = [Poly(dim, {tuple(int(b == j) for b in range(dim)): rows[i][j] for j in range(dim)})
              for i in range(dim)]
    covs = [Form.one_form(n, rows[i]) for i in range(dim)]
    out = Form.zero(n, a.degree)
    for key, c in a.coeffs.items():
        term = Form.scalar(n, c.compose(images))
        for i in key:
            term = wedge(term, covs[i])
        out = out + term
    return out


def two_form_matrix(w: Form) -> list:
    """Matrix w(e_a, e_b) of a 2-form."""
    if w.degree != 2:
        raise DomainError("expected a 2-form")
    dim = 2 * w.n
    m = linalg.zeros(dim, dim, Poly.zero(dim))
    for (a, b), c in w.coeffs.items():
        m[a][b] = c
        m[b][a] = -c
    return m


def two_form_from_matrix(n: int, m) -> Form:
    dim = 2 * n
    return Form(n, 2, {(a, b): m[a][b] for a in range(dim) for b in range(a + 1, dim)})


def embed_form(a: Form, n_new: int) -> Form:
    """Re-index a form on T*R^n into T*R^{n_new} (n_new >= n), keeping dq_i, dp_i labels."""
    n = a.n
    mapping = list(range(n)) + [n_new + i for i in range(n)]
    out = {}
    for key, c in a.coeffs.items():
        new = tuple(mapping[i] for i in key)
        sign, skey = sort_sign(new)
        c2 = c.extend(2 * n_new, mapping)
        out[skey] = c2 if sign > 0 else -c2
    return Form(n_new, a.degree, out)
