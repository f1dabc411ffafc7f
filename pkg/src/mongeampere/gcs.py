"""Generalized complex structures on T + T* of T*R^n built from a pair of 2-forms.

A section X + xi is stored as a 4n-vector: the 2n components of X along
d/dq, d/dp followed by the 2n components of xi along dq, dp.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DomainError
from .exterior import (Endo, Form, PolyVectorField, contract, ext_d, lie_bracket,
                       symplectic_context, two_form_from_matrix)
from .invariants import endo_from_two_form
from .polynomial import Poly


@dataclass(frozen=True)
class GenSection:
    n: int
    X: PolyVectorField
    xi: Form

    def __post_init__(self):
        if self.X.n != self.n or self.xi.n != self.n:
            raise DomainError("vector and form parts live over different n")
        if self.xi.degree != 1:
            raise DomainError("form part of a section must be a 1-form")

    @classmethod
    def zero(cls, n: int) -> "GenSection":
        return cls(n, PolyVectorField.zero(n), Form.zero(n, 1))

    @classmethod
    def from_vector(cls, n: int, comps: Sequence) -> "GenSection":
        dim = 2 * n
        return cls(n, PolyVectorField(n, list(comps[:dim])), Form.one_form(n, list(comps[dim:])))

    @classmethod
    def frame(cls, n: int, k: int) -> "GenSection":
        """k-th constant frame section: d/dx_k for k < 2n, else dx_{k-2n}."""
        return cls.from_vector(n, [int(i == k) for i in range(4 * n)])

    def as_vector(self) -> list:
        dim = 2 * self.n
        return list(self.X.components) + [self.xi.coefficient((b,)) for b in range(dim)]

    def __add__(self, other):
        return GenSection(self.n, self.X + other.X, self.xi + other.xi)

    def __sub__(self, other):
        return GenSection(self.n, self.X - other.X, self.xi - other.xi)

    def __neg__(self):
        return GenSection(self.n, -self.X, -self.xi)

    def __eq__(self, other):
        if not isinstance(other, GenSection):
            return NotImplemented
        return self.n == other.n and self.X == other.X and self.xi == other.xi

    def is_zero(self) -> bool:
        return self.X.is_zero() and not self.xi


def _one_form_eval(xi: Form, x: PolyVectorField) -> Poly:
    if not xi:
        return Poly.zero(xi.nvars)
    return contract(x, xi).scalar_value()


def pairing(s1: GenSection, s2: GenSection) -> Poly:
    """(X + xi, Y + eta) = (xi(Y) + eta(X)) / 2."""
    if s1.n != s2.n:
        raise DomainError("sections over different n")
    return (_one_form_eval(s1.xi, s2.X) + _one_form_eval(s2.xi, s1.X)) * Fraction(1, 2)


def pairing_matrix(n: int) -> list:
    dim = 2 * n
    half = Fraction(1, 2)
    return [[half if abs(i - j) == dim else Fraction(0) for j in range(2 * dim)]
            for i in range(2 * dim)]


def _lie_derivative(x: PolyVectorField, a: Form) -> Form:
    """Cartan formula on a 1-form."""
    out = contract(x, ext_d(a)) if a else Form.zero(a.n, 1)
    if a:
        out = out + ext_d(contract(x, a))
    return out


def courant_bracket(s1: GenSection, s2: GenSection) -> GenSection:
    """[X,Y] + L_X eta - L_Y xi - d(i_X eta - i_Y xi) / 2."""
    if s1.n != s2.n:
        raise DomainError("sections over different n")
    n = s1.n
    vec = lie_bracket(s1.X, s2.X)
    inner = Form.scalar(n, _one_form_eval(s2.xi, s1.X) - _one_form_eval(s1.xi, s2.X))
    form = _lie_derivative(s1.X, s2.xi) - _lie_derivative(s2.X, s1.xi) - ext_d(inner) * Fraction(1, 2)
    return GenSection(n, vec, form)


@dataclass(frozen=True)
class GCStructure:
    """J = [[A, Omega^-1], [wtilde, -A*]] acting on T + T*."""

    n: int
    A: Endo
    Binv: tuple
    wtilde: Form
    Astar: Endo
    matrix: tuple

    def apply(self, s: GenSection) -> GenSection:
        v = s.as_vector()
        out = []
        for row in self.matrix:
            total = Poly.zero(2 * self.n)
            for c, x in zip(row, v):
                if c and x:
                    total = total + c * x
            out.append(total)
        return GenSection.from_vector(self.n, out)

    def at(self, point: Sequence[float]) -> np.ndarray:
        return np.array([[c.evaluate_float(point) for c in row] for row in self.matrix])

    def squares_to_minus_one(self) -> bool:
        m = [list(r) for r in self.matrix]
        sq = linalg.matmul(m, m)
        size = len(m)
        return all(sq[i][j] == (-1 if i == j else 0) for i in range(size) for j in range(size))

    def pairing_compatible(self) -> bool:
        """(J a, b) = -(a, J b), i.e. J^T P + P J = 0."""
        m = [list(r) for r in self.matrix]
        p = pairing_matrix(self.n)
        lhs = linalg.madd(linalg.matmul(linalg.transpose(m), p), linalg.matmul(p, m))
        return all(not x for row in lhs for x in row)


def _poly(x, nvars: int) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(nvars, x)


def _assemble(w: Form) -> GCStructure:
    n = w.n
    dim = 2 * n
    ctx = symplectic_context(n)
    om = [list(r) for r in ctx.omega_matrix]
    a = endo_from_two_form(w)
    a_rows = [[x if isinstance(x, Poly) else Poly.const(dim, x) for x in r] for r in a.rows]
    one_plus = linalg.madd(linalg.identity(dim, Poly.one(dim), Poly.zero(dim)),
                           linalg.matmul(a_rows, a_rows))
    # wtilde(X, Y) = -Omega((1 + A^2) X, Y)
    wt = linalg.mscale(linalg.matmul(linalg.transpose(one_plus), om), -1)
    binv = linalg.inverse(linalg.transpose(om))
    flat_wt = linalg.transpose(wt)
    astar = linalg.transpose(a_rows)
    top = [a_rows[i] + [Poly.const(dim, x) for x in binv[i]] for i in range(dim)]
    bottom = [list(flat_wt[i]) + [-x for x in astar[i]] for i in range(dim)]
    matrix = tuple(tuple(_poly(x, dim) for x in r) for r in top + bottom)
    wt = [[_poly(x, dim) for x in r] for r in wt]
    return GCStructure(n, Endo(n, a_rows), tuple(map(tuple, binv)), two_form_from_matrix(n, wt),
                       Endo(n, astar), matrix)


def gcs_from_hitchin_pair(w: Form, ctx=None) -> GCStructure:
    """Generalized complex structure of the Hitchin pair (w, Omega); w must be closed."""
    if w.degree != 2:
        raise DomainError("a Hitchin pair needs a 2-form")
    if ctx is not None and ctx.n != w.n:
        raise DomainError("symplectic context does not match the form")
    if ext_d(w):
        raise DomainError("not a Hitchin pair (d w != 0); normalize via divergent_type first")
    j = _assemble(w)
    if not j.squares_to_minus_one():
        raise ArithmeticError("J^2 != -1")
    if not j.pairing_compatible():
        raise ArithmeticError("J is not compatible with the pairing")
    return j


def assemble_unchecked(w: Form) -> GCStructure:
    """Same block matrix without the closedness check.  Meant for testing non-examples."""
    if w.degree != 2:
        raise DomainError("expected a 2-form")
    return _assemble(w)


def gcs_integrability_residual(j: GCStructure) -> list:
    """N(a, b) = [Ja, Jb] - J[Ja, b] - J[a, Jb] - [a, b] on constant frame pairs.

    Returns table[a][b] = 4n-vector of Poly.
    """
    n = j.n
    size = 4 * n
    frame = [GenSection.frame(n, k) for k in range(size)]
    images = [j.apply(s) for s in frame]
    table = [[None] * size for _ in range(size)]
    for a in range(size):
        for b in range(size):
            if b < a:
                table[a][b] = [-x for x in table[b][a]]
                continue
            r = (courant_bracket(images[a], images[b])
                 - j.apply(courant_bracket(images[a], frame[b]))
                 - j.apply(courant_bracket(frame[a], images[b]))
                 - courant_bracket(frame[a], frame[b]))
            table[a][b] = r.as_vector()
    return table


def residual_is_zero(table) -> bool:
    return all(not x for row in table for entry in row for x in entry)


# -- sampled surfaces ----------------------------------------------------------------

@dataclass
class SampledSurface:
    """Samples of a 2-dimensional surface in T*R^2: base points and two tangent vectors."""

    points: np.ndarray  # (N, 4)
    tangents: np.ndarray  # (N, 2, 4)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.tangents = np.asarray(self.tangents, dtype=float)
        if self.points.ndim != 2 or self.points.shape[1] != 4:
            raise DomainError("points must be an (N, 4) array")
        if self.tangents.shape != (len(self.points), 2, 4):
            raise DomainError("tangents must be an (N, 2, 4) array")

    def __len__(self):
        return len(self.points)

    @classmethod
    def from_rows(cls, rows) -> "SampledSurface":
        data = np.asarray(rows, dtype=float)
        if data.ndim != 2 or data.shape[1] != 12:
            raise DomainError("each sample needs 12 numbers: 4 base coordinates, 8 tangent components")
        return cls(data[:, :4], data[:, 4:].reshape(-1, 2, 4))

    @classmethod
    def from_text(cls, text: str) -> "SampledSurface":
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 12:
                raise DomainError(f"line {lineno}: expected 12 numbers, got {len(parts)}")
            try:
                rows.append([float(x) for x in parts])
            except ValueError as exc:
                raise DomainError(f"line {lineno}: {exc}") from exc
        if not rows:
            raise DomainError("surface file has no samples")
        return cls.from_rows(rows)

    @classmethod
    def from_file(cls, path) -> "SampledSurface":
        return cls.from_text(Path(path).read_text())

    @classmethod
    def graph_of_gradient(cls, f: Poly, grid: Sequence[Sequence[float]]) -> "SampledSurface":
        """L = {(q, grad f(q))} at the given base points q."""
        grad = [f.diff(i) for i in range(2)]
        hess = [[g.diff(j) for j in range(2)] for g in grad]
        pts, tans = [], []
        for q1, q2 in grid:
            x = [q1, q2, 0.0, 0.0]
            pts.append([q1, q2] + [g.evaluate_float(x) for g in grad])
            h = [[e.evaluate_float(x) for e in row] for row in hess]
            tans.append([[1.0, 0.0, h[0][0], h[1][0]], [0.0, 1.0, h[0][1], h[1][1]]])
        return cls(np.array(pts), np.array(tans))

    def to_text(self) -> str:
        lines = []
        for p, t in zip(self.points, self.tangents):
            lines.append(" ".join(repr(float(x)) for x in list(p) + list(t.ravel())))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SampleReport:
    index: int
    degenerate: bool
    closed_under_j: bool
    lagrangian: bool
    a_closed: bool
    omega_vanishes: bool
    j_defect: float

    @property
    def passed(self) -> bool:
        return not self.degenerate and self.closed_under_j


def _rank(m: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def generalized_solution_check(j: GCStructure, surface: SampledSurface, tol: float = 1e-9) -> list:
    """Per-sample test that T_L + T_L^0 is J-invariant, with the split Omega / A checks."""
    if j.n != 2:
        raise DomainError("generalized_solution_check works on T*R^2")
    om = np.array([[float(x) for x in r] for r in symplectic_context(2).omega_matrix])
    reports = []
    for idx, (p, t) in enumerate(zip(surface.points, surface.tangents)):
        tmat = t.T  # 4 x 2
        if _rank(tmat, tol) < 2:
            reports.append(SampleReport(idx, True, False, False, False, False, float("inf")))
            continue
        jm = j.at(list(p))
        # annihilator of the tangent plane
        _, _, vt = np.linalg.svd(t)
        ann = vt[2:].T  # 4 x 2
        space = np.zeros((8, 4))
        space[:4, :2] = tmat
        space[4:, 2:] = ann
        image = jm @ space
        q, _ = np.linalg.qr(space)
        leftover = image - q @ (q.T @ image)
        scale = max(np.linalg.norm(image), 1.0)
        defect = float(np.linalg.norm(leftover) / scale)
        a = jm[:4, :4]
        norms = np.linalg.norm(t[0]) * np.linalg.norm(t[1])
        lag = abs(t[0] @ om @ t[1]) <= tol * norms * np.abs(om).max()
        a_img = a @ tmat
        a_closed = _rank(np.hstack([tmat, a_img]), tol) == 2 if np.linalg.norm(a_img) > 0 else True
        # w(X, Y) = Omega(AX, Y)
        w_val = (a @ t[0]) @ om @ t[1]
        w_scale = norms * max(np.abs(om.T @ a).max(), 1.0)
        reports.append(SampleReport(idx, False, defect <= tol, bool(lag), bool(a_closed),
                                    bool(abs(w_val) <= tol * w_scale), defect))
    return reports
