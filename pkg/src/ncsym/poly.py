"""Exact multivariate polynomials over the rationals.

Variables are indexed 0..d, index 0 being time t and 1..d the spatial
coordinates x^1..x^d.  A polynomial is stored sparsely as a map from
exponent vectors (length d+1) to nonzero Fraction coefficients and is
normalized on construction, so equality is literal term-map equality
and ``p.is_zero()`` is a certificate, not an approximation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence, Union

Scalar = Union[int, Fraction, str]


def as_fraction(value: Scalar) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_fraction(value: Fraction) -> str:
    """Decimal-free string form, 'p' or 'p/q'."""
    return str(value)


class Poly:
    """Polynomial in (t, x^1..x^d) with Fraction coefficients.

    Immutable by convention: no method mutates ``terms`` after
    construction, so values can be shared freely between threads.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[tuple, Scalar] | None = None):
        if dim < 0:
            raise ValueError("spatial dimension must be >= 0")
        clean: dict[tuple, Fraction] = {}
        if terms:
            for exp, coef in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != dim + 1:
                    raise ValueError(f"exponent vector {exp} needs length {dim + 1}")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                c = as_fraction(coef)
                if c:
                    acc = clean.get(exp)
                    c = c if acc is None else acc + c
                    if c:
                        clean[exp] = c
                    elif exp in clean:
                        del clean[exp]
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Poly":
        return cls(dim)

    @classmethod
    def const(cls, dim: int, value: Scalar) -> "Poly":
        return cls(dim, {tuple([0] * (dim + 1)): value})

    @classmethod
    def var(cls, dim: int, index: int) -> "Poly":
        if not 0 <= index <= dim:
            raise ValueError(f"variable index {index} out of range 0..{dim}")
        exp = [0] * (dim + 1)
        exp[index] = 1
        return cls(dim, {tuple(exp): 1})

    @classmethod
    def t(cls, dim: int) -> "Poly":
        return cls.var(dim, 0)

    @classmethod
    def x(cls, dim: int, spatial_index: int) -> "Poly":
        if not 1 <= spatial_index <= dim:
            raise ValueError(f"spatial index {spatial_index} out of range 1..{dim}")
        return cls.var(dim, spatial_index)

    @classmethod
    def monomial(cls, dim: int, exp: Sequence[int], coef: Scalar = 1) -> "Poly":
        return cls(dim, {tuple(exp): coef})

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    def degree_in(self, var: int) -> int:
        """Largest exponent of the given variable, -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(exp[var] for exp in self.terms)

    def spatial_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(exp[1:]) for exp in self.terms)

    def depends_on(self, var: int) -> bool:
        return any(exp[var] for exp in self.terms)

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.terms.items())

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.dim != self.dim:
                raise ValueError("dimension mismatch")
            return other
        return Poly.const(self.dim, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            acc = terms.get(exp, Fraction(0)) + c
            if acc:
                terms[exp] = acc
            else:
                terms.pop(exp, None)
        out = Poly(self.dim)
        object.__setattr__(out, "terms", terms)
        return out

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        out = Poly(self.dim)
        object.__setattr__(out, "terms", {e: -c for e, c in self.terms.items()})
        return out

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = as_fraction(other)
            if not c:
                return Poly(self.dim)
            out = Poly(self.dim)
            object.__setattr__(out, "terms", {e: k * c for e, k in self.terms.items()})
            return out
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        terms: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(exp, Fraction(0)) + c1 * c2
                if acc:
                    terms[exp] = acc
                else:
                    terms.pop(exp, None)
        out = Poly(self.dim)
        object.__setattr__(out, "terms", terms)
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(self.dim, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.dim == other.dim and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    # -- calculus -----------------------------------------------------

    def differentiate(self, var: int) -> "Poly":
        """Exact partial derivative with respect to variable ``var``."""
        if not 0 <= var <= self.dim:
            raise ValueError(f"variable index {var} out of range 0..{self.dim}")
        terms: dict[tuple, Fraction] = {}
        for exp, c in self.terms.items():
            e = exp[var]
            if e == 0:
                continue
            new = list(exp)
            new[var] = e - 1
            new = tuple(new)
            acc = terms.get(new, Fraction(0)) + c * e
            if acc:
                terms[new] = acc
            else:
                terms.pop(new, None)
        out = Poly(self.dim)
        object.__setattr__(out, "terms", terms)
        return out

    def evaluate(self, point: Sequence) -> Union[Fraction, float]:
        """Evaluate at a point of length d+1.

        Exact (Fraction) for exact inputs, IEEE double for float inputs.
        """
        if len(point) != self.dim + 1:
            raise ValueError(f"point needs length {self.dim + 1}")
        use_float = any(isinstance(v, float) for v in point)
        if use_float:
            vals = [float(v) for v in point]
            total = 0.0
            for exp, c in self.terms.items():
                term = float(c)
                for v, e in zip(vals, exp):
                    if e:
                        term *= v ** e
                total += term
            return total
        vals = [as_fraction(v) for v in point]
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for v, e in zip(vals, exp):
                if e:
                    term *= v ** e
            total += term
        return total

    # -- serialization ------------------------------------------------

    def to_obj(self) -> dict:
        return {
            "terms": [
                {"exp": list(exp), "coef": format_fraction(c)}
                for exp, c in self.sorted_terms()
            ]
        }

    @classmethod
    def from_obj(cls, dim: int, obj: Mapping) -> "Poly":
        return cls(dim, {tuple(t["exp"]): Fraction(t["coef"]) for t in obj["terms"]})

    # -- display ------------------------------------------------------

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        names = ["t"] + [f"x{i}" for i in range(1, self.dim + 1)]
        parts = []
        for exp, c in self.sorted_terms():
            factors = []
            if c != 1 or not any(exp):
                factors.append(str(c))
            for name, e in zip(names, exp):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)


def poly_divmod_t(num: Poly, den: Poly) -> tuple["Poly", "Poly"]:
    """Quotient and remainder for polynomials in t alone, deg(r) < deg(den)."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if any(sum(exp[1:]) for exp in num.terms) or any(sum(exp[1:]) for exp in den.terms):
        raise ValueError("poly_divmod_t expects polynomials in t only")
    dim = num.dim
    dd = den.degree_in(0)
    dlead = den.terms.get(tuple([dd] + [0] * dim))
    quot = Poly.zero(dim)
    rem = num
    while not rem.is_zero() and rem.degree_in(0) >= dd:
        rd = rem.degree_in(0)
        rlead = rem.terms.get(tuple([rd] + [0] * dim))
        exp = [0] * (dim + 1)
        exp[0] = rd - dd
        q = Poly.monomial(dim, exp, rlead / dlead)
        quot = quot + q
        rem = rem - q * den
    return quot, rem


def poly_div_t(num: Poly, den: Poly) -> Poly | None:
    """Exact quotient num/den for polynomials in t alone; None if not divisible."""
    quot, rem = poly_divmod_t(num, den)
    return quot if rem.is_zero() else None
