"""Exact geometry of lattice polygons in Z^2.

Polygons are immutable values. Vertices are always stored hulled, in
counterclockwise order starting from the lexicographically minimal vertex.
Points and segments are first-class polygons with ``dimension`` 0 and 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, NamedTuple, Sequence

Vec = tuple[int, int]


class GeometryError(ValueError):
    """Raised when a polygon does not satisfy an operation's precondition."""


def add(p: Vec, q: Vec) -> Vec:
    return (p[0] + q[0], p[1] + q[1])


def sub(p: Vec, q: Vec) -> Vec:
    return (p[0] - q[0], p[1] - q[1])


def scale(k: int, p: Vec) -> Vec:
    return (k * p[0], k * p[1])


def cross(u: Vec, v: Vec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Vec, v: Vec) -> int:
    return u[0] * v[0] + u[1] * v[1]


def lattice_length(v: Vec) -> int:
    return gcd(v[0], v[1])


def primitive(v: Vec) -> Vec:
    g = gcd(v[0], v[1])
    if g == 0:
        raise GeometryError("zero vector has no primitive direction")
    return (v[0] // g, v[1] // g)


def positive_direction(e: Vec) -> Vec:
    """Return ``e`` or ``-e``, whichever has first nonzero coordinate positive."""
    if e[0] > 0 or (e[0] == 0 and e[1] > 0):
        return e
    return (-e[0], -e[1])


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class AffineFunctional(NamedTuple):
    """The integer affine function ``p -> a*p_x + b*p_y + c``.

    Under the identification of the plane with the height-one slice of Z^3
    this is the character ``(a, b, c)``.
    """

    a: int
    b: int
    c: int

    def __call__(self, p: Vec) -> int:
        return self.a * p[0] + self.b * p[1] + self.c

    @property
    def linear(self) -> Vec:
        return (self.a, self.b)

    def is_constant(self) -> bool:
        return self.a == 0 and self.b == 0

    def __neg__(self) -> "AffineFunctional":
        return AffineFunctional(-self.a, -self.b, -self.c)

    def scaled(self, k: int) -> "AffineFunctional":
        return AffineFunctional(k * self.a, k * self.b, k * self.c)

    def shifted(self, k: int) -> "AffineFunctional":
        return AffineFunctional(self.a, self.b, self.c + k)


@dataclass(frozen=True)
class AffineMap:
    """Unimodular affine map ``p -> M p + t`` of Z^2."""

    matrix: tuple[tuple[int, int], tuple[int, int]]
    shift: Vec = (0, 0)

    def __post_init__(self):
        if self.determinant not in (1, -1):
            raise GeometryError(f"matrix {self.matrix} is not unimodular")

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(((1, 0), (0, 1)))

    @classmethod
    def translation(cls, t: Vec) -> "AffineMap":
        return cls(((1, 0), (0, 1)), t)

    @property
    def determinant(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def linear(self, v: Vec) -> Vec:
        (a, b), (c, d) = self.matrix
        return (a * v[0] + b * v[1], c * v[0] + d * v[1])

    def __call__(self, p: Vec) -> Vec:
        return add(self.linear(p), self.shift)

    def then(self, other: "AffineMap") -> "AffineMap":
        """The composite ``other o self``."""
        (a, b), (c, d) = other.matrix
        (e, f), (g, h) = self.matrix
        m = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        return AffineMap(m, other(self.shift))

    def inverse(self) -> "AffineMap":
        (a, b), (c, d) = self.matrix
        det = self.determinant
        m = ((d * det, -b * det), (-c * det, a * det))
        inv = AffineMap(m)
        t = inv.linear(self.shift)
        return AffineMap(m, (-t[0], -t[1]))


def _hull_vertices(points: Iterable[Vec]) -> tuple[Vec, ...]:
    rows: dict[int, list[int]] = {}
    for p in points:
        x, y = int(p[0]), int(p[1])
        r = rows.get(y)
        if r is None:
            rows[y] = [x, x]
        elif x < r[0]:
            r[0] = x
        elif x > r[1]:
            r[1] = x
    if not rows:
        raise GeometryError("convex hull of an empty set")
    # only the extreme point of each row can be a vertex
    pts = sorted({(x, y) for y, r in rows.items() for x in r})
    if len(pts) <= 2:
        return tuple(pts)

    def half(seq):
        out: list[Vec] = []
        for p in seq:
            while len(out) >= 2:
                (ax, ay), (bx, by) = out[-2], out[-1]
                if (bx - ax) * (p[1] - ay) - (by - ay) * (p[0] - ax) > 0:
                    break
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    verts = lower[:-1] + upper[:-1]
    if len(verts) == 2 and verts[0] == verts[1]:
        verts = verts[:1]
    return tuple(verts)


class Edge(NamedTuple):
    start: Vec
    end: Vec
    direction: Vec
    length: int
    inner_normal: AffineFunctional
    min_value: int

    def height(self, p: Vec) -> int:
        """Lattice distance of ``p`` from the edge line, positive inside."""
        return self.inner_normal(p) - self.min_value


@dataclass(frozen=True)
class LatticePolygon:
    """A lattice polygon given by (possibly unhulled) points; stored hulled."""

    vertices: tuple[Vec, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", _hull_vertices(self.vertices))

    @cached_property
    def dimension(self) -> int:
        return min(len(self.vertices) - 1, 2)

    def __len__(self):
        return len(self.vertices)

    def translate(self, t: Vec) -> "LatticePolygon":
        return LatticePolygon(tuple(add(v, t) for v in self.vertices))

    def transform(self, g: AffineMap) -> "LatticePolygon":
        return LatticePolygon(tuple(g(v) for v in self.vertices))

    @property
    def lexmin(self) -> Vec:
        return self.vertices[0]

    def at_origin(self) -> "LatticePolygon":
        """Translate so that the lexicographically minimal point is the origin."""
        v = self.lexmin
        return self.translate((-v[0], -v[1]))

    def contains(self, p: Vec) -> bool:
        vs = self.vertices
        if self.dimension == 0:
            return p == vs[0]
        if self.dimension == 1:
            a, b = vs
            d = sub(b, a)
            w = sub(p, a)
            return cross(d, w) == 0 and 0 <= dot(d, w) <= dot(d, d)
        n = len(vs)
        return all(cross(sub(vs[(i + 1) % n], vs[i]), sub(p, vs[i])) >= 0 for i in range(n))

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "LatticePolygon":
        return cls(tuple((int(x), int(y)) for x, y in data["vertices"]))

    def __repr__(self):
        return f"LatticePolygon({list(self.vertices)})"


def convex_hull(points: Iterable[Vec]) -> LatticePolygon:
    return LatticePolygon(tuple(points))


def lattice_points(P: LatticePolygon) -> list[Vec]:
    """All lattice points of ``P`` (boundary included), sorted lexicographically."""
    vs = P.vertices
    if P.dimension == 0:
        return [vs[0]]
    if P.dimension == 1:
        a, b = vs
        k = lattice_length(sub(b, a))
        e = primitive(sub(b, a))
        return sorted(add(a, scale(i, e)) for i in range(k + 1))
    xs = [v[0] for v in vs]
    ys = [v[1] for v in vs]
    return [
        (x, y)
        for x in range(min(xs), max(xs) + 1)
        for y in range(min(ys), max(ys) + 1)
        if P.contains((x, y))
    ]


def edges(P: LatticePolygon) -> list[Edge]:
    if P.dimension != 2:
        raise GeometryError("not 2-dimensional")
    vs = P.vertices
    out = []
    for i, s in enumerate(vs):
        t = vs[(i + 1) % len(vs)]
        d = sub(t, s)
        e = primitive(d)
        normal = AffineFunctional(-e[1], e[0], 0)
        out.append(Edge(s, t, e, lattice_length(d), normal, normal(s)))
    return out


def sides(P: LatticePolygon) -> list[Edge]:
    """Edges of a 2-dimensional polygon; the two sides of a segment; none for a point.

    A segment is treated as a degenerate polygon whose two sides are the
    segment traversed in both directions.
    """
    if P.dimension == 2:
        return edges(P)
    if P.dimension == 0:
        return []
    a, b = P.vertices
    out = []
    for s, t in ((a, b), (b, a)):
        e = primitive(sub(t, s))
        normal = AffineFunctional(-e[1], e[0], 0)
        out.append(Edge(s, t, e, lattice_length(sub(t, s)), normal, normal(s)))
    return out


def double_area(P: LatticePolygon) -> int:
    vs = P.vertices
    if P.dimension < 2:
        return 0
    return abs(sum(cross(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))))


def lattice_height(P: LatticePolygon, e: Edge) -> int:
    return max(e.height(v) for v in P.vertices)


def minkowski_sum(P: LatticePolygon, Q: LatticePolygon) -> LatticePolygon:
    return LatticePolygon(tuple(add(p, q) for p in P.vertices for q in Q.vertices))


def minkowski_sum_all(polys: Sequence[LatticePolygon]) -> LatticePolygon:
    out = LatticePolygon(((0, 0),))
    for P in polys:
        out = minkowski_sum(out, P)
    return out


def is_standard_triangle(P: LatticePolygon) -> bool:
    return len(P.vertices) == 3 and double_area(P) == 1


def is_unit_segment(P: LatticePolygon) -> bool:
    return P.dimension == 1 and lattice_length(sub(P.vertices[1], P.vertices[0])) == 1


def nakajima_polygon(a: int, b: int, c: int) -> LatticePolygon:
    if a < 1 or b < 0 or c < 0 or b + c < 1:
        raise GeometryError(f"Nakajima parameters need a >= 1, b, c >= 0, b + c >= 1; got {(a, b, c)}")
    return LatticePolygon(((0, 0), (a, 0), (0, b), (a, b + a * c)))


# --- Minkowski decompositions -------------------------------------------------


def polygon_key(P: LatticePolygon):
    """Deterministic order on polygons: larger first, then by vertex list."""
    return (-double_area(P), -len(lattice_points(P)), P.vertices)


@dataclass(frozen=True)
class MinkowskiDecomposition:
    """A multiset of non-point summands.

    Summands produced by :func:`minkowski_decompositions` sit with their
    lexicographically minimal point at the origin, so their sum is a
    translate of the decomposed polygon.
    """

    summands: tuple[LatticePolygon, ...]

    def total(self) -> LatticePolygon:
        return minkowski_sum_all(self.summands)

    def anchored_to(self, P: LatticePolygon) -> tuple[LatticePolygon, ...]:
        """Summands translated so that they sum to ``P`` exactly.

        The translation is absorbed by the last summand.
        """
        t = sub(P.lexmin, self.total().lexmin)
        *head, last = self.summands
        return tuple(head) + (last.translate(t),)

    def to_json(self) -> dict:
        return {"summands": [S.to_json() for S in self.summands]}


def _edge_steps(P: LatticePolygon) -> list[tuple[Vec, int]]:
    if P.dimension == 0:
        return []
    return [(e.direction, e.length) for e in sides(P)]


def _polygon_from_steps(steps: Sequence[tuple[Vec, int]], counts: Sequence[int]) -> LatticePolygon:
    p = (0, 0)
    pts = [p]
    for (e, _), c in zip(steps, counts):
        if c:
            p = add(p, scale(c, e))
            pts.append(p)
    return LatticePolygon(tuple(pts)).at_origin()


def _summand_types(steps: Sequence[tuple[Vec, int]]) -> list[tuple[int, ...]]:
    types = []
    for counts in itertools.product(*(range(k + 1) for _, k in steps)):
        if not any(counts):
            continue
        sx = sum(c * e[0] for (e, _), c in zip(steps, counts))
        sy = sum(c * e[1] for (e, _), c in zip(steps, counts))
        if sx == 0 and sy == 0:
            types.append(counts)
    return types


def minkowski_decompositions(P: LatticePolygon, maximal_only: bool = False) -> list[MinkowskiDecomposition]:
    """Every unordered decomposition of ``P`` into at least two non-point lattice summands.

    Each edge is split into unit steps along its primitive direction; a
    summand is a zero-sum sub-multiset of those steps. With
    ``maximal_only`` only decompositions into indecomposable summands are
    returned.
    """
    steps = _edge_steps(P)
    if not steps:
        return []
    types = _summand_types(steps)
    full = tuple(k for _, k in steps)
    results: list[tuple[tuple[int, ...], ...]] = []

    def rec(start: int, remaining: tuple[int, ...], chosen: list[tuple[int, ...]]):
        if not any(remaining):
            if len(chosen) >= 2:
                results.append(tuple(chosen))
            return
        for i in range(start, len(types)):
            t = types[i]
            if all(a <= b for a, b in zip(t, remaining)):
                chosen.append(t)
                rec(i, tuple(b - a for a, b in zip(t, remaining)), chosen)
                chosen.pop()

    rec(0, full, [])

    def indecomposable(t):
        return not any(s != t and all(a <= b for a, b in zip(s, t)) for s in types)

    out = []
    for combo in results:
        if maximal_only and not all(indecomposable(t) for t in combo):
            continue
        summands = sorted((_polygon_from_steps(steps, t) for t in combo), key=polygon_key)
        out.append(MinkowskiDecomposition(tuple(summands)))
    out.sort(key=lambda d: [polygon_key(S) for S in d.summands])
    return out


def smoothing_decompositions(P: LatticePolygon) -> list[MinkowskiDecomposition]:
    """Decompositions whose summands are all unit segments or standard triangles.

    ``P`` itself counts as a one-summand decomposition when it is one of those.
    """
    def ok(S):
        return is_unit_segment(S) or is_standard_triangle(S)

    out = []
    if ok(P):
        out.append(MinkowskiDecomposition((P.at_origin(),)))
    out.extend(d for d in minkowski_decompositions(P) if all(ok(S) for S in d.summands))
    return out


# --- canonical forms ----------------------------------------------------------


def _unimodular_to_x_axis(e: Vec) -> tuple[tuple[int, int], tuple[int, int]]:
    """Matrix of determinant 1 sending the primitive vector ``e`` to (1, 0)."""
    _, s, t = ext_gcd(e[0], e[1])
    return ((s, t), (-e[1], e[0]))


def _rooted(P: LatticePolygon) -> tuple[Vec, ...]:
    vs = P.vertices
    i = vs.index((0, 0))
    return vs[i:] + vs[:i]


def canonical_transforms(P: LatticePolygon) -> tuple[LatticePolygon, list[AffineMap]]:
    """Canonical representative of the affine-unimodular orbit of ``P``.

    Returns the representative together with every candidate map that
    attains it (more than one when ``P`` has symmetries).
    """
    vs = P.vertices
    if P.dimension == 0:
        return LatticePolygon(((0, 0),)), [AffineMap.translation((-vs[0][0], -vs[0][1]))]
    if P.dimension == 1:
        maps = []
        for s, t in ((vs[0], vs[1]), (vs[1], vs[0])):
            m = AffineMap(_unimodular_to_x_axis(primitive(sub(t, s))))
            img = m.linear(s)
            maps.append(AffineMap(m.matrix, (-img[0], -img[1])))
        return P.transform(maps[0]), maps
    n = len(vs)
    best = None
    best_maps: list[AffineMap] = []
    for i in range(n):
        for orient in (1, -1):
            v = vs[i]
            w1 = vs[(i + orient) % n]
            w2 = vs[(i + 2 * orient) % n]
            m0 = _unimodular_to_x_axis(primitive(sub(w1, v)))
            if orient == -1:
                m0 = (m0[0], (-m0[1][0], -m0[1][1]))
            g = AffineMap(m0)
            a, b = g.linear(sub(w2, w1))
            k = -(a // b)
            g = g.then(AffineMap(((1, k), (0, 1))))
            img = g.linear(v)
            g = AffineMap(g.matrix, (-img[0], -img[1]))
            key = _rooted(P.transform(g))
            if best is None or key < best:
                best, best_maps = key, [g]
            elif key == best:
                best_maps.append(g)
    return LatticePolygon(best), best_maps


def canonical_form(P: LatticePolygon) -> tuple[LatticePolygon, AffineMap]:
    Q, maps = canonical_transforms(P)
    return Q, maps[0]
