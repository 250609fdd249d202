"""Mutations of Laurent polynomials, mutability spaces and the rigidity test."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .lattice import (
    AffineFunctional,
    Edge,
    LatticePolygon,
    Vec,
    dot,
    edges,
    lattice_points,
    sides,
    sub,
)
from .laurent import KernelPoly, LaurentPoly, _univariate, poly_divmod, slices
from .linalg import nullspace


class NotMutableError(ValueError):
    """A negative slice is not divisible by the required power of h."""

    def __init__(self, level: int, remainder: LaurentPoly):
        super().__init__(f"slice at level {level} is not divisible (remainder {remainder})")
        self.level = level
        self.remainder = remainder


@dataclass(frozen=True)
class MutationDatum:
    """A pair (phi, h) with h = (1 + x^e)^k and phi constant along e."""

    phi: AffineFunctional
    h: KernelPoly

    def __post_init__(self):
        phi = AffineFunctional(*self.phi)
        object.__setattr__(self, "phi", phi)
        if phi.is_constant():
            raise ValueError("mutation functional must be non-constant")
        if dot(phi.linear, self.h.direction) != 0:
            raise ValueError(f"h direction {self.h.direction} is not in the kernel of {phi.linear}")
        if self.h.binomial_exponent() is None:
            raise ValueError(f"{self.h} is not a power of a binomial 1 + x^e")

    @classmethod
    def make(cls, phi: Sequence[int], direction: Vec, power: int = 1) -> "MutationDatum":
        return cls(AffineFunctional(*phi), KernelPoly.binomial_power(direction, power))

    @property
    def direction(self) -> Vec:
        return self.h.direction

    @property
    def power(self) -> int:
        return self.h.degree

    def to_json(self) -> dict:
        return {"phi": list(self.phi), "h_dir": list(self.direction), "h_pow": self.power}

    @classmethod
    def from_json(cls, data: dict) -> "MutationDatum":
        return cls.make(data["phi"], tuple(data["h_dir"]), data["h_pow"])

    def __repr__(self):
        return f"MutationDatum(phi={tuple(self.phi)}, h={self.h})"


def inverse_datum(d: MutationDatum) -> MutationDatum:
    return MutationDatum(-d.phi, d.h)


@lru_cache(maxsize=None)
def _binomial_row(n: int) -> tuple[int, ...]:
    return tuple(comb(n, i) for i in range(n + 1))


def _divide_one_plus(coeffs: list, n: int) -> tuple[list, list]:
    """Divide by (1 + a)^n using synthetic division; returns (quotient, remainder)."""
    cur = list(coeffs)
    for _ in range(n):
        if len(cur) < 2:
            return [], cur
        d = len(cur) - 1
        q = [0] * d
        q[d - 1] = cur[d]
        for i in range(d - 1, 0, -1):
            q[i - 1] = cur[i] - q[i]
        if cur[0] - q[0] != 0:
            return [], cur
        cur = q
    return cur, []


def _times_one_plus(coeffs: list, n: int) -> list:
    out = [0] * (len(coeffs) + n)
    for i, b in enumerate(_binomial_row(n)):
        for j, c in enumerate(coeffs):
            out[i + j] += b * c
    return out


def _place(base: Vec, e: Vec, coeffs: Iterable) -> dict:
    return {(base[0] + i * e[0], base[1] + i * e[1]): c for i, c in enumerate(coeffs) if c}


def _mutate(f: LaurentPoly, d: MutationDatum, check_only: bool = False):
    e, k0 = d.direction, d.power
    out: dict[Vec, object] = {}
    # negative levels first so that a failed division exits before any expansion
    for level, g in sorted(slices(f, d.phi).items()):
        n = abs(level) * k0
        if level == 0 or n == 0:
            out.update(g.terms)
            continue
        base, cs = _univariate(g, e)
        if level < 0:
            q, _ = _divide_one_plus(cs, n)
            if not q:
                _, rem = poly_divmod(cs, _binomial_row(n))
                raise NotMutableError(level, LaurentPoly(_place(base, e, rem)))
            out.update(_place(base, e, q))
        elif not check_only:
            out.update(_place(base, e, _times_one_plus(cs, n)))
    return None if check_only else LaurentPoly._trusted(out)


def mutate(f: LaurentPoly, d: MutationDatum) -> LaurentPoly:
    """Replace each slice f_k by h^k f_k; raises NotMutableError when undefined."""
    return _mutate(f, d)


def is_mutable(f: LaurentPoly, d: MutationDatum) -> bool:
    try:
        _mutate(f, d, check_only=True)
    except NotMutableError:
        return False
    return True


# --- search bounds and candidate data -----------------------------------------------


@dataclass(frozen=True)
class SearchBounds:
    """Limits for mutation searches.

    ``max_p`` defaults to the longest edge of the current Newton polygon and
    ``max_q`` to the length of the edge being mutated, beyond which no datum
    with that edge negative can be mutable.
    """

    max_depth: int = 16
    max_area_factor: Fraction = Fraction(4)
    max_p: int | None = None
    max_q: int | None = None
    node_cap: int = 10**6

    def __post_init__(self):
        object.__setattr__(self, "max_area_factor", Fraction(self.max_area_factor))
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None and v <= 0:
                raise ValueError(f"bound {f.name} must be positive")

    @classmethod
    def parse(cls, text: str) -> "SearchBounds":
        """Parse overrides like ``max_depth=8,node_cap=1000``."""
        kwargs = {}
        names = {f.name for f in fields(cls)}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, _, value = part.partition("=")
            key = key.strip().replace("-", "_")
            if key not in names or not value:
                raise ValueError(f"unknown or empty bound {part!r}")
            kwargs[key] = Fraction(value) if key == "max_area_factor" else int(value)
        return cls(**kwargs)

    def with_overrides(self, **kw) -> "SearchBounds":
        return replace(self, **kw)


def edge_functional(E: Edge, p: int, q: int) -> AffineFunctional:
    """phi = p*(n_E - min) - q: constant -q on E and increasing into the polygon."""
    n = E.inner_normal
    return AffineFunctional(p * n.a, p * n.b, -p * E.min_value - q)


def candidate_data(f: LaurentPoly, bounds: SearchBounds = SearchBounds(), mutable_only: bool = False) -> list[MutationDatum]:
    """Edge-negative data with h = 1 + x^e, one family per edge."""
    if f.is_zero() or f.rank() < 2:
        return []
    P = f.newton_polygon
    es = edges(P)
    max_p = bounds.max_p or max(E.length for E in es)
    out: list[MutationDatum] = []
    seen = set()
    for E in es:
        max_q = bounds.max_q or E.length
        h = KernelPoly.binomial_power(E.direction, 1)
        for p in range(1, max_p + 1):
            for q in range(1, max_q + 1):
                d = MutationDatum(edge_functional(E, p, q), h)
                key = (d.phi, d.direction)
                if key in seen:
                    continue
                seen.add(key)
                if mutable_only and not is_mutable(f, d):
                    continue
                out.append(d)
    return out


# --- necessary conditions -------------------------------------------------------------


@dataclass
class ConditionReport:
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {k for k, _ in self.violations}

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [{"kind": k, "detail": d} for k, d in self.violations]}


def edge_coefficients(f: LaurentPoly, E: Edge) -> list:
    return [f.coefficient((E.start[0] + i * E.direction[0], E.start[1] + i * E.direction[1])) for i in range(E.length + 1)]


def necessary_conditions(f: LaurentPoly) -> ConditionReport:
    """Checks every 0-mutable polynomial passes: integral non-negative, normalized, binomial boundary."""
    rep = ConditionReport()
    for e, c in sorted(f.items()):
        if c < 0:
            rep.violations.append(("negativity", f"coefficient {c} at {e}"))
        elif Fraction(c).denominator != 1:
            rep.violations.append(("non-integral", f"coefficient {c} at {e}"))
    for v in f.newton_polygon.vertices:
        if f.coefficient(v) != 1:
            rep.violations.append(("vertex coefficient", f"coefficient {f.coefficient(v)} at vertex {v}"))
    for E in sides(f.newton_polygon):
        cs = edge_coefficients(f, E)
        if list(cs) != list(_binomial_row(E.length)):
            rep.violations.append(("boundary not binomial", f"edge {E.start}->{E.end} has {cs}"))
    return rep


# --- mutability spaces ------------------------------------------------------------------


def _divisibility_rows(index: dict[Vec, int], d: MutationDatum) -> list[list[int]]:
    """Linear conditions on coefficients for d-mutability, as derivatives at a = -1."""
    e, k0 = d.direction, d.power
    lines: dict[int, list[Vec]] = {}
    for p in index:
        level = d.phi(p)
        if level < 0:
            lines.setdefault(level, []).append(p)
    rows = []
    n = len(index)
    for level, pts in lines.items():
        r = -level * k0
        pos = sorted(pts, key=lambda p: dot(p, e))
        base = pos[0]
        ee = dot(e, e)
        offs = [(p, dot(sub(p, base), e) // ee) for p in pos]
        for dd in range(min(r, len(pos))):
            row = [0] * n
            for p, i in offs:
                if i >= dd:
                    row[index[p]] = comb(i, dd) * (-1) ** (i - dd)
            rows.append(row)
    return rows


def mutability_space(F: LatticePolygon, S: Iterable[MutationDatum]) -> list[LaurentPoly]:
    """Basis of the polynomials with Newton polygon inside ``F`` that are mutable for every datum in ``S``."""
    pts = lattice_points(F)
    index = {p: i for i, p in enumerate(pts)}
    rows = []
    for d in S:
        rows.extend(_divisibility_rows(index, d))
    basis = nullspace(rows, len(pts))
    return [LaurentPoly({p: v[i] for p, i in index.items()}) for v in basis]


def full_edge_data(f: LaurentPoly) -> list[MutationDatum]:
    """Every edge-negative datum f is mutable for, up to equivalence.

    For an edge of length l only 1 <= p, q <= l matter: q > l is never
    mutable, and p >= q only constrains the edge itself.
    """
    out = []
    for E in sides(f.newton_polygon):
        h = KernelPoly.binomial_power(E.direction, 1)
        for p in range(1, E.length + 1):
            for q in range(1, E.length + 1):
                d = MutationDatum(edge_functional(E, p, q), h)
                if is_mutable(f, d):
                    out.append(d)
                else:
                    break
    return out


@dataclass
class RigidReport:
    dimension: int
    data_count: int
    factors: list["RigidReport"] = field(default_factory=list)
    poly: LaurentPoly | None = None

    @property
    def rigid(self) -> bool:
        if self.factors:
            return all(r.rigid for r in self.factors)
        return self.dimension == 1

    def to_json(self) -> dict:
        out = {"rigid": self.rigid, "dimension": self.dimension, "data": self.data_count}
        if self.poly is not None:
            out["poly"] = str(self.poly)
        if self.factors:
            out["factors"] = [r.to_json() for r in self.factors]
        return out


def rigid_test(f: LaurentPoly, factors: Sequence[LaurentPoly] | None = None) -> RigidReport:
    """Is the space of polynomials sharing all of f's edge mutabilities the line through f?"""
    if factors:
        subs = [rigid_test(g) for g in factors]
        return RigidReport(dimension=max(r.dimension for r in subs), data_count=sum(r.data_count for r in subs), factors=subs, poly=f)
    if f.rank() == 0:
        return RigidReport(1, 0, poly=f)
    S = full_edge_data(f)
    return RigidReport(len(mutability_space(f.newton_polygon, S)), len(S), poly=f)

