"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` lives in a fixed number of variables and stores its terms as a
mapping from exponent tuples to :class:`fractions.Fraction`.  Zero
coefficients are never stored, so the zero polynomial is the empty mapping.

Variables carry no names; printing and parsing take an explicit tuple of
names, which lets the same class serve as the coefficient ring of forms on
T*R^n (``q1..qn, p1..pn``), of Hessian symbols (``q, u_i, u_ij``) and of the
quartic invariants (``X1..X2n``).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

Exponent = tuple


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or decimal-free string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Poly:
    """Exact polynomial in ``nvars`` variables.

    Instances are immutable; all arithmetic returns new objects.  Scalars
    (``int`` and ``Fraction``) are accepted wherever a polynomial is.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exp, c in terms.items():
                c = as_fraction(c)
                if c:
                    if len(exp) != nvars:
                        raise ValueError(f"exponent {exp} has wrong length for {nvars} variables")
                    clean[tuple(exp)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Poly":
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        value = as_fraction(value)
        if not value:
            return cls._raw(nvars, {})
        return cls._raw(nvars, {(0,) * nvars: value})

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def one(cls, nvars: int) -> "Poly":
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars: int, index: int) -> "Poly":
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[index] = 1
        return cls._raw(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exp: Sequence[int], coeff=1) -> "Poly":
        return cls(nvars, {tuple(exp): coeff})

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        """Return the value of a constant polynomial; raise if not constant."""
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    def depends_on(self, index: int) -> bool:
        return any(e[index] for e in self.terms)

    def variables(self) -> set:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"ring mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = as_fraction(c)
        if not c:
            return Poly._raw(self.nvars, {})
        if c == 1:
            return self
        return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValueError(f"ring mismatch: {self.nvars} vs {other.nvars} variables")
        if not self.terms or not other.terms:
            return Poly._raw(self.nvars, {})
        if len(other.terms) == 1:
            (eo, co), = other.terms.items()
            if not any(eo):
                return self.scale(co)
        if len(self.terms) == 1:
            (es, cs), = self.terms.items()
            if not any(es):
                return other.scale(cs)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw(self.nvars, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Poly):
            other = other.constant_value()
        other = as_fraction(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        return self.scale(1 / other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- calculus and substitution -------------------------------------
    def diff(self, index: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                e2 = list(e)
                e2[index] = k - 1
                out[tuple(e2)] = c * k
        return Poly._raw(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        """Evaluate exactly at a point of rationals."""
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        point = [as_fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def evaluate_float(self, point: Sequence[float]) -> float:
        total = 0.0
        for e, c in self.terms.items():
            t = float(c)
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute variable ``i`` by ``images[i]`` (all in one target ring)."""
        if len(images) != self.nvars:
            raise ValueError(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target = images[0].nvars
        result = Poly.zero(target)
        powers: dict = {}
        for e, c in self.terms.items():
            t = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = images[i] ** k
                    t = t * powers[key]
            result = result + t
        return result

    def partial_evaluate(self, values: Mapping[int, object]) -> "Poly":
        """Fix some variables to rational values; the ring is unchanged."""
        values = {i: as_fraction(v) for i, v in values.items()}
        out: dict = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for i, v in values.items():
                if e2[i]:
                    c = c * v ** e2[i]
                    e2[i] = 0
            if c:
                k = tuple(e2)
                out[k] = out.get(k, 0) + c
        return Poly._raw(self.nvars, {e: c for e, c in out.items() if c})

    def coefficients_in(self, indices: Sequence[int]) -> dict:
        """Split by monomials in the variables ``indices``.

        Returns ``{exponent in indices: Poly in the remaining variables}``
        with the selected variables set to zero in each coefficient.
        """
        groups: dict = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in indices)
            rest = list(e)
            for i in indices:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        return {k: Poly._raw(self.nvars, v) for k, v in groups.items()}

    def extend(self, nvars: int, mapping: Sequence[int]) -> "Poly":
        """Re-embed into a ring with ``nvars`` variables; variable i goes to ``mapping[i]``."""
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    e2[mapping[i]] += k
            out[tuple(e2)] = c
        return Poly._raw(nvars, out)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    # -- ordering, comparison, display --------------------------------
    def sorted_terms(self) -> list:
        """Terms in graded-lex order, largest first (x1 > x2 > ...)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.sorted_terms()[0]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.nvars}, {self.to_str()!r})"


def poly_sum(items: Iterable[Poly], nvars: int) -> Poly:
    total = Poly.zero(nvars)
    for p in items:
        total = total + p
    return total


def variables(nvars: int) -> list:
    return [Poly.var(nvars, i) for i in range(nvars)]
