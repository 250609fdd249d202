"""Intersection numbers of the zero curve of f on its cluster surface.

Above each edge E the toric surface of Newt f is blown up len(E) times at
the point a = x^e = -1 of the boundary curve, always at the point lying on
the strict transform of that boundary curve. The multiplicities of the
strict transform of {f = 0} at those centres give

    Z'^2 = 2 Area(Newt f) - sum m_j^2,    Z'.B = sum_E (len(E) - sum_j m_j).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import Edge, GeometryError, double_area, sides
from .laurent import LaurentPoly, ord_at_minus_one
from .zero_mutable import ZeroMutableCertificate


@dataclass(frozen=True)
class EdgeLocalModel:
    """Slices c_k(a) of f at height k above an edge, each shifted to start at a^0."""

    edge: Edge
    slices: tuple[tuple, ...]

    def orders(self) -> list[int | None]:
        """Order of vanishing of each slice at a = -1; None for an empty slice."""
        return [ord_at_minus_one(list(c)) if any(c) else None for c in self.slices]


def _check_edge(f: LaurentPoly, E: Edge):
    if E not in sides(f.newton_polygon):
        raise GeometryError(f"{E.start}->{E.end} is not an edge of the Newton polygon")


def edge_local_expansion(f: LaurentPoly, E: Edge) -> EdgeLocalModel:
    _check_edge(f, E)
    e = E.direction
    rows: dict[int, dict[int, object]] = {}
    for p, c in f.items():
        k = E.height(p)
        i = p[0] * e[0] + p[1] * e[1]
        rows.setdefault(k, {})[i] = c
    top = max(rows)
    out = []
    dd = e[0] * e[0] + e[1] * e[1]
    for k in range(top + 1):
        row = rows.get(k)
        if not row:
            out.append(())
            continue
        lo = min(row)
        hi = max(row)
        cs = [0] * ((hi - lo) // dd + 1)
        for i, c in row.items():
            cs[(i - lo) // dd] = c
        out.append(tuple(cs))
    return EdgeLocalModel(E, tuple(out))


def blowup_multiplicities(orders: list[int | None], steps: int) -> list[int]:
    """m_j = min_k(o_k + k), then o_k <- o_k + k - m_j, repeated ``steps`` times."""
    o = list(orders)
    out = []
    for _ in range(steps):
        m = min(ok + k for k, ok in enumerate(o) if ok is not None)
        o = [None if ok is None else ok + k - m for k, ok in enumerate(o)]
        if any(ok is not None and ok < 0 for ok in o):
            raise AssertionError("negative order after a blowup")
        out.append(m)
    return out


def multiplicity_sequence(f: LaurentPoly, E: Edge) -> list[int]:
    model = edge_local_expansion(f, E)
    return blowup_multiplicities(model.orders(), E.length)


@dataclass
class ZPrimeNumbers:
    self_intersection: int
    boundary_product: int
    mults: list[tuple[int, list[int]]] = field(default_factory=list)

    @property
    def passes(self) -> bool:
        return self.self_intersection == -2 and self.boundary_product == 0

    def to_json(self) -> dict:
        return {
            "z2": self.self_intersection,
            "zB": self.boundary_product,
            "edges": [{"edge": i, "mults": m} for i, m in self.mults],
            "pass": self.passes,
        }


def z_prime_numbers(f: LaurentPoly) -> ZPrimeNumbers:
    """(Z'^2, Z'.B) for the zero curve of f; a segment counts as a polygon with two sides."""
    if f.is_zero() or f.rank() == 0:
        raise GeometryError("Newton polygon is a point")
    area2 = double_area(f.newton_polygon)
    total_sq = 0
    boundary = 0
    mults = []
    for i, E in enumerate(sides(f.newton_polygon)):
        ms = multiplicity_sequence(f, E)
        mults.append((i, ms))
        total_sq += sum(m * m for m in ms)
        boundary += E.length - sum(ms)
    return ZPrimeNumbers(area2 - total_sq, boundary, mults)


@dataclass
class TwoCurveReport:
    factors: list[tuple[LaurentPoly, ZPrimeNumbers]]

    @property
    def passes(self) -> bool:
        return all(z.passes for _, z in self.factors)

    def to_json(self) -> dict:
        from .laurent import to_string

        return {
            "pass": self.passes,
            "factors": [{"poly": to_string(g), **z.to_json()} for g, z in self.factors],
        }


def check_two_curve(f: LaurentPoly, cert: ZeroMutableCertificate | None = None) -> TwoCurveReport:
    """Run the (-2, 0) check on every certified irreducible factor, or on f itself."""
    if cert is None:
        return TwoCurveReport([(f, z_prime_numbers(f))])
    if cert.product() != f:
        raise ValueError("certificate does not multiply out to f")
    return TwoCurveReport([(fac.poly, z_prime_numbers(fac.poly)) for fac in cert.factors])
