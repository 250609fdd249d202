"""Sparse exact Laurent polynomials in two variables."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import comb
from numbers import Rational
from typing import Iterable, Mapping, Union

from .lattice import (
    AffineFunctional,
    AffineMap,
    GeometryError,
    LatticePolygon,
    Vec,
    add,
    cross,
    dot,
    positive_direction,
    primitive,
    sub,
)

Coef = Union[int, Fraction]


def _norm(c) -> Coef:
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class LaurentPoly:
    """An element of Q[x^{+-1}, y^{+-1}] stored as exponent -> coefficient."""

    __slots__ = ("_terms", "_hash", "__dict__")

    def __init__(self, terms: Mapping[Vec, Rational] | Iterable[tuple[Vec, Rational]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Vec, Coef] = {}
        for e, c in items:
            e = (int(e[0]), int(e[1]))
            acc[e] = acc.get(e, 0) + (c if type(c) is int else Fraction(c))
        self._terms = {e: _norm(c) for e, c in acc.items() if c != 0}
        self._hash = None

    @classmethod
    def _trusted(cls, terms: dict) -> "LaurentPoly":
        """Wrap a dict already free of zeros and keyed by int pairs."""
        f = cls.__new__(cls)
        f._terms = {e: _norm(c) for e, c in terms.items()}
        f._hash = None
        return f

    # construction
    @classmethod
    def monomial(cls, e: Vec, c: Rational = 1) -> "LaurentPoly":
        return cls({e: c})

    @classmethod
    def constant(cls, c: Rational) -> "LaurentPoly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "LaurentPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "LaurentPoly":
        return cls({(0, 1): 1})

    # mapping protocol
    @property
    def terms(self) -> dict[Vec, Coef]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[Vec]:
        return sorted(self._terms)

    def coefficient(self, e: Vec) -> Coef:
        return self._terms.get(e, 0)

    def __getitem__(self, e: Vec) -> Coef:
        return self.coefficient(e)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # arithmetic
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[Vec, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1])
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (e, c), = self._terms.items()
            return LaurentPoly({(k * e[0], k * e[1]): Fraction(c) ** k})
        out = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, v: Vec) -> "LaurentPoly":
        """Multiply by the monomial x^v."""
        return LaurentPoly({add(e, v): c for e, c in self._terms.items()})

    def scale(self, c: Rational) -> "LaurentPoly":
        return LaurentPoly({e: c * a for e, a in self._terms.items()})

    def divide_by_monomial(self, m: "LaurentPoly") -> "LaurentPoly":
        if not m.is_monomial():
            raise ValueError("divisor is not a monomial")
        (e, c), = m._terms.items()
        return LaurentPoly({sub(k, e): Fraction(a) / c for k, a in self._terms.items()})

    def transform(self, g: AffineMap) -> "LaurentPoly":
        """Apply the lattice map ``g`` to the exponents."""
        return LaurentPoly({g(e): c for e, c in self._terms.items()})

    def swap_xy(self) -> "LaurentPoly":
        return LaurentPoly({(e[1], e[0]): c for e, c in self._terms.items()})

    # geometry
    @cached_property
    def newton_polygon(self) -> LatticePolygon:
        if not self._terms:
            raise GeometryError("zero polynomial has no Newton polygon")
        return LatticePolygon(tuple(self._terms))

    def rank(self) -> int:
        """Dimension of the Newton polygon."""
        return self.newton_polygon.dimension

    def is_normalized(self) -> bool:
        return all(self._terms[v] == 1 for v in self.newton_polygon.vertices)

    def __repr__(self):
        return f"LaurentPoly({to_string(self)!r})"

    def __str__(self):
        return to_string(self)

    def to_json(self) -> dict:
        return {
            "terms": [
                {"exp": list(e), "coef": str(self._terms[e])}
                for e in sorted(self._terms, key=lambda e: (e[1], e[0]))
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentPoly":
        return cls(((t["exp"][0], t["exp"][1]), Fraction(str(t["coef"]))) for t in data["terms"])


def newton_polygon(f: LaurentPoly) -> LatticePolygon:
    return f.newton_polygon


def is_normalized(f: LaurentPoly) -> bool:
    return f.is_normalized()


def _is_face(A: LatticePolygon, P: LatticePolygon) -> bool:
    if A == P:
        return True
    vs = P.vertices
    n = len(vs)
    if A.dimension == 0:
        return A.vertices[0] in vs
    if A.dimension == 1 and P.dimension == 2:
        a, b = A.vertices
        for i in range(n):
            s, t = vs[i], vs[(i + 1) % n]
            if {s, t} == {a, b}:
                return True
    return False


def restrict_to_face(f: LaurentPoly, A: LatticePolygon) -> LaurentPoly:
    """The sum of the terms of ``f`` whose exponents lie on the face ``A``."""
    if not _is_face(A, f.newton_polygon):
        raise GeometryError(f"{A} is not a face of {f.newton_polygon}")
    return LaurentPoly({e: c for e, c in f.items() if A.contains(e)})


def slices(f: LaurentPoly, phi: AffineFunctional) -> dict[int, LaurentPoly]:
    """Decompose ``f`` into level sets of ``phi``; empty levels are omitted."""
    if phi.is_constant():
        raise ValueError("slicing needs a non-constant functional")
    out: dict[int, dict] = {}
    for e, c in f.items():
        out.setdefault(phi(e), {})[e] = c
    return {k: LaurentPoly._trusted(out[k]) for k in sorted(out)}


# --- polynomials on a line ------------------------------------------------------


class KernelPoly:
    """A polynomial sum_i c_i x^{offset + i*e} supported on a line through ``offset``."""

    __slots__ = ("direction", "coefficients", "offset")

    def __init__(self, direction: Vec, coefficients: Iterable[Rational], offset: Vec = (0, 0)):
        d = primitive(direction)
        cs = [_norm(c) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        cs = cs[lead:]
        self.direction = d
        self.coefficients = tuple(cs)
        self.offset = (offset[0] + lead * d[0], offset[1] + lead * d[1])

    @classmethod
    def binomial_power(cls, direction: Vec, k: int) -> "KernelPoly":
        """(1 + x^e)^k with ``e`` normalised to point into the positive half plane."""
        e = positive_direction(primitive(direction))
        return cls(e, [comb(k, i) for i in range(k + 1)])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def binomial_exponent(self) -> int | None:
        """``k`` when this is (1+x^e)^k, else None."""
        k = self.degree
        if self.offset != (0, 0):
            return None
        if self.coefficients != tuple(comb(k, i) for i in range(k + 1)):
            return None
        return k

    def to_laurent(self) -> LaurentPoly:
        d, o = self.direction, self.offset
        return LaurentPoly({(o[0] + i * d[0], o[1] + i * d[1]): c for i, c in enumerate(self.coefficients)})

    def __eq__(self, other):
        if not isinstance(other, KernelPoly):
            return NotImplemented
        return self.to_laurent() == other.to_laurent()

    def __hash__(self):
        return hash(self.to_laurent())

    def __repr__(self):
        return f"KernelPoly({to_string(self.to_laurent())!r})"


def _univariate(g: LaurentPoly, direction: Vec) -> tuple[Vec, list]:
    """Coordinates of ``g`` along ``direction``: base point and dense coefficient list."""
    pts = g.support()
    base = pts[0]
    for p in pts:
        if cross(direction, sub(p, base)) != 0:
            raise GeometryError("support is not on a single line parallel to the direction")
    dd = dot(direction, direction)
    idx = {p: dot(sub(p, base), direction) // dd for p in pts}
    lo = min(idx.values())
    base = (base[0] + lo * direction[0], base[1] + lo * direction[1])
    hi = max(idx.values()) - lo
    coeffs = [0] * (hi + 1)
    for p in pts:
        coeffs[idx[p] - lo] = g.coefficient(p)
    return base, coeffs


def poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Long division of dense coefficient lists (lowest degree first)."""
    num = [Fraction(c) for c in num]
    if len(num) < len(den):
        return [0], num
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    lead = Fraction(den[-1])
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] / lead
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    rem = num[: len(den) - 1]
    return [_norm(c) for c in q], [_norm(c) for c in rem]


def divides(h: KernelPoly, g: LaurentPoly) -> tuple[bool, LaurentPoly | None]:
    """Exact division test of a line-supported ``g`` by ``h``; returns (ok, quotient)."""
    if g.is_zero():
        return True, LaurentPoly()
    e = h.direction
    base, coeffs = _univariate(g, e)
    if h.degree == 0:
        c = h.coefficients[0]
        return True, LaurentPoly({sub(p, h.offset): Fraction(a) / c for p, a in g.items()})
    q, r = poly_divmod(coeffs, list(h.coefficients))
    if any(r):
        return False, None
    base = sub(base, h.offset)
    return True, LaurentPoly({(base[0] + i * e[0], base[1] + i * e[1]): c for i, c in enumerate(q)})


def ord_at_minus_one(coeffs: list) -> int:
    """Order of vanishing at a = -1 of a nonzero univariate polynomial."""
    if not any(coeffs):
        raise ValueError("order of the zero polynomial")
    k = 0
    cur = list(coeffs)
    while True:
        q, r = poly_divmod(cur, [1, 1])
        if any(r) or len(cur) < 2:
            return k
        cur = q
        k += 1


# --- parsing and printing ---------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def parse(self) -> LaurentPoly:
        if not self.peek():
            raise ParseError("empty expression", self.pos)
        f = self.expr()
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)
        return f

    def expr(self) -> LaurentPoly:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        f = self.term().scale(sign)
        while self.peek() in ("+", "-") and self.peek():
            op = self.peek()
            self.pos += 1
            t = self.term()
            f = f + t if op == "+" else f - t
        return f

    def term(self) -> LaurentPoly:
        f = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                f = f * self.factor()
            elif ch == "/":
                self.pos += 1
                at = self.pos
                d = self.factor()
                if d.is_zero():
                    raise ParseError("division by zero", at)
                if not d.is_monomial():
                    raise ParseError("division only by a monomial", at)
                f = f.divide_by_monomial(d)
            elif ch and (ch.isdigit() or ch in "xy("):
                f = f * self.factor()
            else:
                return f

    def factor(self) -> LaurentPoly:
        b = self.base()
        if self.peek() == "^":
            self.pos += 1
            at = self.pos
            k = self.integer(signed=True)
            if k < 0 and not b.is_monomial():
                raise ParseError("negative power of a non-monomial", at)
            b = b ** k
        return b

    def integer(self, signed: bool = False) -> int:
        sign = 1
        if signed and self.peek() in ("-", "+") and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        if self.peek() == "(":
            self.pos += 1
            k = self.integer(signed=True)
            self.expect(")")
            return sign * k
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an integer exponent", start)
        return sign * int(self.text[start:self.pos])

    def base(self) -> LaurentPoly:
        ch = self.peek()
        if ch.isdigit():
            return LaurentPoly.constant(self.integer())
        if ch == "x":
            self.pos += 1
            return LaurentPoly.x()
        if ch == "y":
            self.pos += 1
            return LaurentPoly.y()
        if ch == "(":
            self.pos += 1
            f = self.expr()
            self.expect(")")
            return f
        raise ParseError(f"unexpected {ch!r}" if ch else "unexpected end of input", self.pos)


def parse(text: str) -> LaurentPoly:
    """Parse a polynomial such as ``((1+x+2*y+y^2)*(1+2*x+x^2+y))/(x*y)``."""
    return _Parser(text).parse()


def _monomial_str(e: Vec) -> str:
    parts = []
    for name, k in zip("xy", e):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def to_string(f: LaurentPoly) -> str:
    if f.is_zero():
        return "0"
    out = []
    for i, e in enumerate(sorted(f.support(), key=lambda e: (e[1], e[0]))):
        c = Fraction(f.coefficient(e))
        mono = _monomial_str(e)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        elif mag.denominator == 1:
            body = f"{mag}*{mono}"
        else:
            body = f"({mag})*{mono}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)
