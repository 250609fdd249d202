"""Gorenstein toric affine 3-folds of lattice polygons: cones, Hilbert bases, binomial ideals."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattice import GeometryError, LatticePolygon, MinkowskiDecomposition

V3 = tuple[int, int, int]


def dot3(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def cross3(u: V3, v: V3) -> V3:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def primitive3(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for c in v:
        g = math.gcd(g, c)
    if g == 0:
        raise GeometryError("zero vector")
    return tuple(c // g for c in v)


def det3(a: V3, b: V3, c: V3) -> int:
    return dot3(a, cross3(b, c))


@dataclass(frozen=True)
class Cone3:
    """A strictly convex cone in Z^3 given by its rays in cyclic order."""

    rays: tuple[V3, ...]

    def facet_normals(self) -> list[V3]:
        """Primitive inner normals of the facets spanned by consecutive rays."""
        rs = self.rays
        n = len(rs)
        out = []
        for i in range(n):
            v = primitive3(cross3(rs[i], rs[(i + 1) % n]))
            if any(dot3(v, r) < 0 for r in rs):
                v = tuple(-c for c in v)
            if any(dot3(v, r) < 0 for r in rs):
                raise GeometryError("rays are not in cyclic order around a strictly convex cone")
            out.append(v)
        return out

    def contains(self, v: Sequence[int]) -> bool:
        return all(dot3(nrm, v) >= 0 for nrm in self.facet_normals())

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays]}


def _cyclic(rays: Sequence[V3]) -> tuple[V3, ...]:
    """Sort rays of a pointed 3-d cone by angle around their sum."""
    rho = [sum(r[i] for r in rays) for i in range(3)]
    # an orthogonal frame (b1, b2) of the plane perpendicular to rho
    trial = (1, 0, 0) if abs(rho[0]) <= max(abs(rho[1]), abs(rho[2])) else (0, 1, 0)
    b1 = cross3(tuple(rho), trial)
    b2 = cross3(tuple(rho), b1)
    return tuple(sorted(rays, key=lambda r: math.atan2(dot3(r, b2), dot3(r, b1))))


def cone_over(F: LatticePolygon) -> Cone3:
    """The cone over F placed at height one."""
    if F.dimension != 2:
        raise GeometryError("not 2-dimensional")
    return Cone3(tuple((v[0], v[1], 1) for v in F.vertices))


@dataclass(frozen=True)
class DualConeData:
    """Dual cone rays s_1..s_r and the Gorenstein degree u.

    ``primal`` keeps the rays of the cone being dualized; ``labels`` names the
    dual rays. For a cone over a polygon, s_1 is the normal to the edge
    leaving the lexicographically minimal vertex and the numbering runs
    clockwise around the polygon.
    """

    rays: tuple[V3, ...]
    gorenstein_degree: V3
    primal: tuple[V3, ...]
    labels: tuple[str, ...] = ()

    def ray(self, label: str | int) -> V3:
        if isinstance(label, int):
            label = f"s{label}"
        return self.rays[self.labels.index(label)]

    def as_cone(self) -> Cone3:
        return Cone3(_cyclic(self.rays))

    def to_json(self) -> dict:
        return {
            "rays": [list(r) for r in self.rays],
            "labels": list(self.labels),
            "u": list(self.gorenstein_degree),
        }


def _solve3(rows: Sequence[V3], rhs: Sequence[int]) -> tuple[Fraction, ...] | None:
    a, b, c = rows
    d = det3(a, b, c)
    if d == 0:
        return None
    out = []
    for i in range(3):
        m = [list(r) for r in rows]
        for j in range(3):
            m[j][i] = rhs[j]
        out.append(Fraction(det3(*[tuple(r) for r in m]), d))
    return tuple(out)


def dual_cone(c: Cone3) -> DualConeData:
    """Facet normals of ``c`` (clockwise from the first facet) and u with <u, a_i> = 1."""
    normals = c.facet_normals()
    order = [0] + list(range(len(normals) - 1, 0, -1))
    rays = tuple(normals[i] for i in order)
    rs = c.rays
    sol = None
    for trio in itertools.combinations(rs, 3):
        sol = _solve3(trio, (1, 1, 1))
        if sol is not None:
            break
    if sol is None or any(x.denominator != 1 for x in sol):
        raise GeometryError("cone is not Gorenstein: no integral u with <u, a_i> = 1")
    u = tuple(int(x) for x in sol)
    if any(dot3(u, r) != 1 for r in rs):
        raise GeometryError("cone is not Gorenstein: rays are not on one height-one plane")
    labels = tuple(f"s{i + 1}" for i in range(len(rays)))
    return DualConeData(rays, u, rs, labels)


# --- Hilbert bases -------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbertBasis:
    elements: tuple[V3, ...]
    names: tuple[str, ...]
    cone: Cone3

    def name_of(self, v: V3) -> str:
        return self.names[self.elements.index(tuple(v))]

    def vector(self, name: str) -> V3:
        return self.elements[self.names.index(name)]

    def to_json(self) -> dict:
        return {"elements": [{"name": n, "vector": list(v)} for n, v in zip(self.names, self.elements)]}


def _parallelepiped_points(gens: Sequence[V3]) -> list[V3]:
    g1, g2, g3 = gens
    d = det3(g1, g2, g3)
    if d == 0:
        return []
    sign = 1 if d > 0 else -1
    ad = abs(d)
    # rows of the adjugate: lambda_i * d = <adj_i, x>
    adj = (cross3(g2, g3), cross3(g3, g1), cross3(g1, g2))
    lo = [sum(min(0, g[i]) for g in gens) for i in range(3)]
    hi = [sum(max(0, g[i]) for g in gens) for i in range(3)]
    out = []
    for x in itertools.product(*(range(lo[i], hi[i] + 1) for i in range(3))):
        if all(0 <= sign * dot3(a, x) < ad for a in adj) and any(x):
            out.append(x)
    return out


def _hilbert_basis_of(cone: Cone3) -> list[V3]:
    rays = list(cone.rays)
    normals = cone.facet_normals()
    cands = set(rays)
    for i in range(1, len(rays) - 1):
        cands.update(_parallelepiped_points((rays[0], rays[i], rays[i + 1])))

    def in_cone(v):
        return all(dot3(n, v) >= 0 for n in normals)

    basis = []
    for x in cands:
        if not any(y != x and in_cone(tuple(a - b for a, b in zip(x, y))) for y in cands):
            basis.append(x)
    height = [sum(n[i] for n in normals) for i in range(3)]
    basis.sort(key=lambda v: (dot3(v, height), v))
    return basis


# The names used for the cone over conv{(-1,-1),(2,-1),(1,1),(-1,2)}.
_WORKED_EXAMPLE = {
    (0, 0, 1): "u",
    (0, 1, 1): "s1",
    (1, 0, 1): "s2",
    (-1, -2, 3): "s3",
    (-2, -1, 3): "s4",
    (-1, 0, 2): "z2",
    (-1, -1, 2): "z3",
    (0, -1, 2): "z4",
}


def hilbert_basis(c: Cone3 | DualConeData) -> HilbertBasis:
    """Minimal generators of the monoid of lattice points of the cone.

    A DualConeData gives the basis of the dual monoid, with elements named
    after u and s_j where they coincide.
    """
    if isinstance(c, DualConeData):
        cone = c.as_cone()
        elems = _hilbert_basis_of(cone)
        if set(elems) == set(_WORKED_EXAMPLE) and c.ray("s3") == (-1, -2, 3):
            return HilbertBasis(tuple(elems), tuple(_WORKED_EXAMPLE[v] for v in elems), cone)
        named = {c.gorenstein_degree: "u"}
        named.update({r: lab for r, lab in zip(c.rays, c.labels)})
        names, k = [], 0
        for v in elems:
            if v in named:
                names.append(named[v])
            else:
                k += 1
                names.append(f"z{k}")
        return HilbertBasis(tuple(elems), tuple(names), cone)
    elems = _hilbert_basis_of(c)
    return HilbertBasis(tuple(elems), tuple(f"h{i + 1}" for i in range(len(elems))), c)


# --- binomial ideals --------------------------------------------------------------------------

Exp = tuple[int, ...]


@dataclass(frozen=True)
class Binomial:
    lhs: Exp
    rhs: Exp

    def degree(self) -> int:
        return max(sum(self.lhs), sum(self.rhs))

    def format(self, names: Sequence[str]) -> str:
        def mono(e):
            parts = []
            for n, k in zip(names, e):
                if k == 1:
                    parts.append(n)
                elif k:
                    parts.append(f"{n}^{k}")
            return "*".join(parts) or "1"

        return f"{mono(self.lhs)} - {mono(self.rhs)}"


def positive_grading(vectors: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """An integer functional positive on every nonzero vector of the pointed cone they span.

    Sums the primitive normals of all supporting planes through pairs of
    vectors; that sum lies in the interior of the dual cone.
    """
    vs = [tuple(v) for v in vectors]
    normals = set()
    for a, b in itertools.combinations(vs, 2):
        n = cross3(a, b)
        if not any(n):
            continue
        n = primitive3(n)
        vals = [dot3(n, v) for v in vs]
        if all(x >= 0 for x in vals):
            normals.add(n)
        elif all(x <= 0 for x in vals):
            normals.add(tuple(-c for c in n))
    rho = tuple(sum(n[i] for n in normals) for i in range(3))
    if any(dot3(rho, v) <= 0 for v in vs):
        raise GeometryError("vectors do not span a pointed full-dimensional cone")
    return rho


@dataclass
class BinomialIdeal:
    """A pure-difference binomial ideal in variables carrying M-degrees.

    Membership is decided exactly: x^A - x^B lies in the ideal iff A and B
    are joined by moves along generators inside their (finite) fibre.
    """

    variables: tuple[str, ...]
    degrees: tuple[tuple[int, ...], ...]
    generators: list[Binomial] = field(default_factory=list)
    degree_bound: int = 4

    def m_degree(self, e: Exp) -> tuple[int, ...]:
        return tuple(sum(k * d[i] for k, d in zip(e, self.degrees)) for i in range(len(self.degrees[0])))

    def is_homogeneous(self) -> bool:
        return all(self.m_degree(b.lhs) == self.m_degree(b.rhs) for b in self.generators)

    def contains(self, b: Binomial) -> bool:
        if self.m_degree(b.lhs) != self.m_degree(b.rhs):
            return False
        return _connected(self.generators, b.lhs, b.rhs)

    def format(self) -> list[str]:
        return [g.format(self.variables) for g in self.generators]

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "degree_bound": self.degree_bound,
            "generators": [{"lhs": list(g.lhs), "rhs": list(g.rhs), "text": g.format(self.variables)} for g in self.generators],
        }


def _moves(gens: Sequence[Binomial], a: Exp):
    for g in gens:
        for src, dst in ((g.lhs, g.rhs), (g.rhs, g.lhs)):
            if all(x >= y for x, y in zip(a, src)):
                yield tuple(x - y + z for x, y, z in zip(a, src, dst))


def _connected(gens: Sequence[Binomial], a: Exp, b: Exp) -> bool:
    if a == b:
        return True
    seen = {a}
    queue = deque([a])
    while queue:
        cur = queue.popleft()
        for nxt in _moves(gens, cur):
            if nxt in seen:
                continue
            if nxt == b:
                return True
            seen.add(nxt)
            queue.append(nxt)
    return False


def _monomials_up_to(heights: Sequence[int], bound: int):
    """All nonzero exponent vectors with weighted height at most ``bound``."""
    n = len(heights)

    def rec(i, left, acc):
        if i == n:
            if any(acc):
                yield tuple(acc)
            return
        for k in range(left // heights[i] + 1):
            acc.append(k)
            yield from rec(i + 1, left - k * heights[i], acc)
            acc.pop()

    yield from rec(0, bound, [])


def toric_relations(hb: HilbertBasis | Sequence[V3], degree_bound: int = 4, names: Sequence[str] | None = None) -> BinomialIdeal:
    """Minimal binomial relations among the given vectors, up to a truncation.

    The vectors are graded by a functional positive on their cone. Every
    fibre up to the height of the ``degree_bound``-th power of the heaviest
    variable is enumerated completely, so the result is the exact minimal
    generating set of the toric ideal in that range. Fibres are processed
    by increasing height and a binomial is kept only when its monomials are
    not yet joined by moves along earlier generators.
    """
    if degree_bound < 2:
        raise ValueError("degree bound must be at least 2")
    if isinstance(hb, HilbertBasis):
        vectors, names = hb.elements, names or hb.names
    else:
        vectors = tuple(tuple(v) for v in hb)
        names = names or tuple(f"x{i + 1}" for i in range(len(vectors)))
    ideal = BinomialIdeal(tuple(names), tuple(vectors), [], degree_bound)
    rho = positive_grading(vectors)
    heights = [dot3(v, rho) for v in vectors]
    fibres: dict[tuple, list[Exp]] = {}
    for e in _monomials_up_to(heights, degree_bound * max(heights)):
        fibres.setdefault(ideal.m_degree(e), []).append(e)
    for m in sorted(fibres, key=lambda m: (dot3(m, rho), m)):
        mons = sorted(fibres[m], key=lambda e: (sum(e), tuple(-x for x in e)))
        if len(mons) < 2:
            continue
        rank = {e: i for i, e in enumerate(mons)}
        parent = {e: e for e in mons}

        def find(e):
            while parent[e] != e:
                parent[e] = parent[parent[e]]
                e = parent[e]
            return e

        for e in mons:
            for nxt in _moves(ideal.generators, e):
                ra, rb = find(e), find(nxt)
                if ra != rb:
                    lo, hi = sorted((ra, rb), key=rank.__getitem__)
                    parent[hi] = lo
        roots = sorted({find(e) for e in mons}, key=rank.__getitem__)
        for r in roots[1:]:
            ideal.generators.append(Binomial(roots[0], r))
    return ideal


def nakajima_equations(a: int, b: int, c: int) -> BinomialIdeal:
    """The two binomials x1*x2 - x4^c*x5^b and x3*x4 - x5^a."""
    if a < 1 or b < 0 or c < 0 or b + c < 1:
        raise GeometryError(f"Nakajima parameters need a >= 1, b, c >= 0, b + c >= 1; got {(a, b, c)}")
    degrees = nakajima_variable_degrees(a, b, c)
    gens = [
        Binomial((1, 1, 0, 0, 0), (0, 0, 0, c, b)),
        Binomial((0, 0, 1, 1, 0), (0, 0, 0, 0, a)),
    ]
    return BinomialIdeal(("x1", "x2", "x3", "x4", "x5"), degrees, gens, max(2, a, b + c))


def nakajima_variable_degrees(a: int, b: int, c: int) -> tuple[V3, ...]:
    """Characters of x1..x5 on the cone over F_{a,b,c}."""
    return ((0, 1, 0), (c, -1, b), (-1, 0, a), (1, 0, 0), (0, 0, 1))


# --- Cayley cones and characters -------------------------------------------------------------


@dataclass(frozen=True)
class CayleyCone:
    rays: tuple[tuple[int, int, int, int], ...]

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays]}


def cayley_cone(dec: MinkowskiDecomposition | Sequence[LatticePolygon]) -> CayleyCone:
    """Rays (v, 1, 0) over the first summand and (w, 0, 1) over the second."""
    summands = dec.summands if isinstance(dec, MinkowskiDecomposition) else tuple(dec)
    if len(summands) != 2:
        raise GeometryError(f"Cayley cone needs exactly two summands, got {len(summands)}")
    P, Q = summands
    if P.dimension == 0 or Q.dimension == 0:
        raise GeometryError("point summands are not allowed")
    rays = tuple((v[0], v[1], 1, 0) for v in P.vertices) + tuple((w[0], w[1], 0, 1) for w in Q.vertices)
    return CayleyCone(rays)


def character(p: int, q: int, which: int | str, dc: DualConeData) -> V3:
    """p*u - q*s_which."""
    s = dc.ray(which)
    u = dc.gorenstein_degree
    return tuple(p * a - q * b for a, b in zip(u, s))


@dataclass(frozen=True)
class ToricPresentation:
    cone: Cone3
    dual: DualConeData
    hilbert: HilbertBasis
    ideal: BinomialIdeal


def toric_presentation(F: LatticePolygon, degree_bound: int = 4) -> ToricPresentation:
    c = cone_over(F)
    dc = dual_cone(c)
    hb = hilbert_basis(dc)
    return ToricPresentation(c, dc, hb, toric_relations(hb, degree_bound))

