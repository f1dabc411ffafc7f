"""Text syntax for polynomials and differential forms.

Grammar (whitespace is insignificant)::

    form    := ['+'|'-'] term (('+'|'-') term)*
    term    := [coeff '*'] wedge | coeff
    coeff   := factor (('*'|'/') factor)*
    wedge   := cov ('^' cov)*
    cov     := ('dq'|'dp') INT
    poly    := ['+'|'-'] coeff (('+'|'-') coeff)*
    factor  := (INT | VAR | '(' poly ')') ['^' INT]

Division is only allowed by non-zero constants.  The printer emits terms in a
canonical order so that identical values always produce identical text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ParseError
from .exterior import Form, coordinate_names, covector_names
from .polynomial import Poly, format_rational

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))", re.S)


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    line: int
    column: int


def tokenize(src: str) -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            break
        # account for skipped whitespace
        start = m.start(m.lastindex) if m.lastindex else m.end()
        for i in range(pos, start):
            if src[i] == "\n":
                line += 1
                line_start = i + 1
        col = start - line_start + 1
        num, name, op = m.groups()
        if num is not None:
            tokens.append(Token("num", num, line, col))
        elif name is not None:
            tokens.append(Token("name", name, line, col))
        elif op is not None:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r}", line, col)
            tokens.append(Token("op", op, line, col))
        pos = m.end()
    end_col = len(src) - line_start + 1
    tokens.append(Token("end", "", line, end_col))
    return tokens


_COV = re.compile(r"^d([qp])(\d+)$")
_VAR = re.compile(r"^([A-Za-z_]+)(\d+)$")


class _Parser:
    def __init__(self, src: str, names: Mapping[str, int], nvars: int, n: int | None):
        self.tokens = tokenize(src)
        self.i = 0
        self.names = names
        self.nvars = nvars
        self.n = n

    # -- token helpers ------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.column)

    def at_op(self, chars: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in chars

    def expect_end(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")

    def is_cov(self, tok: Token) -> bool:
        return tok.kind == "name" and self.n is not None and _COV.match(tok.text) is not None

    # -- polynomials --------------------------------------------------
    def poly(self) -> Poly:
        total = Poly.zero(self.nvars)
        sign = 1
        if self.at_op("+-"):
            sign = -1 if self.advance().text == "-" else 1
        total = self.coeff() * sign
        while self.at_op("+-"):
            sign = -1 if self.advance().text == "-" else 1
            total = total + self.coeff() * sign
        return total

    def coeff(self) -> Poly:
        value = self.factor()
        while self.at_op("*/"):
            op = self.tok
            if self.is_cov(self.tokens[self.i + 1]):
                break
            self.advance()
            rhs = self.factor()
            if op.text == "*":
                value = value * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    self.error("division only by non-zero constants", op)
                value = value / rhs.constant_value()
        return value

    def factor(self) -> Poly:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            base = Poly.const(self.nvars, int(tok.text))
        elif tok.kind == "name":
            if self.is_cov(tok):
                self.error(f"covector {tok.text} not allowed here")
            self.advance()
            base = Poly.var(self.nvars, self.lookup(tok))
        elif self.at_op("("):
            self.advance()
            base = self.poly()
            if not self.at_op(")"):
                self.error("expected ')'")
            self.advance()
        elif tok.kind == "end":
            self.error("unexpected end of input")
        else:
            self.error(f"unexpected {tok.text!r}")
        if self.at_op("^"):
            caret = self.advance()
            if self.tok.kind != "num":
                self.error("expected a positive integer exponent after '^'")
            k = int(self.advance().text)
            if k < 1:
                self.error("exponents must be positive", caret)
            base = base ** k
        return base

    def lookup(self, tok: Token) -> int:
        if tok.text in self.names:
            return self.names[tok.text]
        m = _VAR.match(tok.text)
        if m and any(_VAR.match(k) and _VAR.match(k).group(1) == m.group(1) for k in self.names):
            self.error(f"index out of range in {tok.text}", tok)
        self.error(f"unknown variable {tok.text!r}", tok)

    # -- forms ----------------------------------------------------------
    def cov_index(self) -> int:
        tok = self.tok
        m = _COV.match(tok.text) if tok.kind == "name" else None
        if m is None:
            self.error("expected a covector dqI or dpI")
        self.advance()
        i = int(m.group(2))
        if not 1 <= i <= self.n:
            self.error(f"index out of range in {tok.text} (n={self.n})", tok)
        return i - 1 if m.group(1) == "q" else self.n + i - 1

    def wedge(self) -> list:
        idx = [self.cov_index()]
        while self.at_op("^"):
            self.advance()
            idx.append(self.cov_index())
        return idx

    def term(self):
        """Returns (coefficient, index list or None for a 0-form term)."""
        start = self.tok
        if self.is_cov(self.tok):
            return Poly.one(self.nvars), self.wedge(), start
        c = self.coeff()
        if self.at_op("*") and self.is_cov(self.tokens[self.i + 1]):
            self.advance()
            return c, self.wedge(), start
        return c, None, start

    def form(self) -> Form:
        terms = []
        sign = 1
        if self.at_op("+-"):
            sign = -1 if self.advance().text == "-" else 1
        c, idx, start = self.term()
        terms.append((c * sign, idx, start))
        while self.at_op("+-"):
            sign = -1 if self.advance().text == "-" else 1
            c, idx, start = self.term()
            terms.append((c * sign, idx, start))
        self.expect_end()
        degree = len(terms[0][1] or ())
        out = Form.zero(self.n, degree)
        for c, idx, start in terms:
            idx = idx or []
            if len(idx) != degree:
                self.error(f"inhomogeneous form: degree {len(idx)} term after degree {degree}", start)
            out = out + Form.basis(self.n, idx, c)
        return out


def coordinate_index(n: int) -> dict:
    return {name: i for i, name in enumerate(coordinate_names(n))}


def parse_form(src: str, n: int) -> Form:
    """Parse a form on T*R^n; coefficients may use q1..qn, p1..pn."""
    return _Parser(src, coordinate_index(n), 2 * n, n).form()


def parse_poly(src: str, names: Sequence[str] | int) -> Poly:
    """Parse a polynomial; ``names`` is a list of variable names or n (for q, p)."""
    if isinstance(names, int):
        index = coordinate_index(names)
    else:
        index = {name: i for i, name in enumerate(names)}
    p = _Parser(src, index, len(index), None)
    value = p.poly()
    p.expect_end()
    return value


def parse_rational(src: str) -> Fraction:
    try:
        return Fraction(src.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {src!r}") from exc


def parse_point(src: str) -> list:
    return [parse_rational(s) for s in src.split(",") if s.strip()]


# -- printing -----------------------------------------------------------

def format_poly(p: Poly, n_or_names) -> str:
    names = coordinate_names(n_or_names) if isinstance(n_or_names, int) else n_or_names
    return p.to_str(names)


def _term_order(item):
    key, c = item
    e = c.sorted_terms()[0][0]
    return (-sum(e), tuple(-x for x in e), key)


def format_form(w: Form) -> str:
    if not w.coeffs:
        return "0"
    names = coordinate_names(w.n)
    covs = covector_names(w.n)
    parts = []
    for key, c in sorted(w.coeffs.items(), key=_term_order):
        wedge = "^".join(covs[i] for i in key)
        if len(c.terms) == 1:
            (e, v), = c.terms.items()
            sign = "-" if v < 0 else "+"
            mono = Poly._raw(c.nvars, {e: abs(v)}).to_str(names)
            if not any(e) and key:
                mono = format_rational(abs(v))
            body = mono
        else:
            sign = "+"
            body = f"({c.to_str(names)})" if key else c.to_str(names)
        if key:
            body = f"{body}*{wedge}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def format_matrix(m, names: Sequence[str] | None = None) -> list:
    rows = []
    for row in m:
        out = []
        for x in row:
            if isinstance(x, Poly):
                out.append(x.to_str(names) if names else (format_rational(x.constant_value())
                                                           if x.is_constant() else x.to_str()))
            else:
                out.append(format_rational(Fraction(x)))
        rows.append(out)
    return rows
