"""Deciding, certifying and enumerating 0-mutable polynomials."""

from __future__ import annotations

import heapq
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from . import mutation
from .lattice import (
    AffineFunctional,
    LatticePolygon,
    Vec,
    canonical_transforms,
    double_area,
    edges,
    minkowski_decompositions,
    positive_direction,
    primitive,
    sub,
)
from .laurent import KernelPoly, LaurentPoly, to_string
from .mutation import (
    MutationDatum,
    SearchBounds,
    candidate_data,
    edge_functional,
    mutability_space,
    necessary_conditions,
    rigid_test,
)

log = logging.getLogger(__name__)


# --- one-variable case -----------------------------------------------------------


def binomial_form(f: LaurentPoly) -> tuple[Vec | None, int, Vec] | None:
    """Write f as (1 + x^v)^k x^l with v primitive; returns (v, k, l) or None."""
    if f.is_zero() or f.rank() == 2:
        return None
    if f.rank() == 0:
        (l, c), = f.items()
        return (None, 0, l) if c == 1 else None
    a, b = f.newton_polygon.vertices
    v = positive_direction(primitive(sub(b, a)))
    l = a if primitive(sub(b, a)) == v else b
    k = max(abs(b[0] - a[0]), abs(b[1] - a[1])) // max(abs(v[0]), abs(v[1]))
    for i in range(k + 1):
        if f.coefficient((l[0] + i * v[0], l[1] + i * v[1])) != comb(k, i):
            return None
    if len(f) != sum(1 for i in range(k + 1) if comb(k, i)):
        return None
    return v, k, l


def closing_datum(v: Vec, k: int, l: Vec) -> MutationDatum:
    """The datum sending (1 + x^v)^k x^l to x^l in a single step."""
    n = (-v[1], v[0])
    phi = AffineFunctional(n[0], n[1], -(n[0] * l[0] + n[1] * l[1]) - 1)
    return MutationDatum(phi, KernelPoly.binomial_power(v, k))


# --- certificates ------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateFactor:
    poly: LaurentPoly
    multiplicity: int
    chain: tuple[MutationDatum, ...]

    def endpoint(self) -> LaurentPoly:
        g = self.poly
        for d in self.chain:
            g = mutation.mutate(g, d)
        return g

    def replays(self) -> bool:
        end = self.endpoint()
        return end.is_monomial() and next(iter(end.terms.values())) == 1

    def to_json(self) -> dict:
        return {
            "poly": to_string(self.poly),
            "multiplicity": self.multiplicity,
            "chain": [d.to_json() for d in self.chain],
        }


@dataclass(frozen=True)
class ZeroMutableCertificate:
    """f = x^shift * prod(poly^multiplicity), each factor with a chain to a monomial."""

    factors: tuple[CertificateFactor, ...]
    shift: Vec = (0, 0)
    provenance: str = "search"

    def product(self) -> LaurentPoly:
        out = LaurentPoly.monomial(self.shift)
        for fac in self.factors:
            out = out * fac.poly ** fac.multiplicity
        return out

    def replays(self, f: LaurentPoly) -> bool:
        return self.product() == f and all(fac.replays() for fac in self.factors)

    def n_list(self) -> list[int]:
        """n_k = number of prime factors of multiplicity at least k, for k = 1..max."""
        top = max((fac.multiplicity for fac in self.factors), default=0)
        return [sum(1 for fac in self.factors if fac.multiplicity >= k) for k in range(1, top + 1)]

    def shifted(self, v: Vec) -> "ZeroMutableCertificate":
        return ZeroMutableCertificate(self.factors, (self.shift[0] + v[0], self.shift[1] + v[1]), self.provenance)

    def to_json(self) -> dict:
        return {
            "factors": [fac.to_json() for fac in self.factors],
            "shift": list(self.shift),
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ZeroMutableCertificate":
        from .laurent import parse

        facs = tuple(
            CertificateFactor(parse(x["poly"]), x["multiplicity"], tuple(MutationDatum.from_json(d) for d in x["chain"]))
            for x in data["factors"]
        )
        return cls(facs, tuple(data.get("shift", (0, 0))), data.get("provenance", "user-supplied"))


def _group_factors(polys: Sequence[tuple[LaurentPoly, tuple]]) -> tuple[CertificateFactor, ...]:
    counts: dict[LaurentPoly, list] = {}
    for p, chain in polys:
        counts.setdefault(p, [0, chain])[0] += 1
    return tuple(
        CertificateFactor(p, m, chain)
        for p, (m, chain) in sorted(counts.items(), key=lambda kv: to_string(kv[0]))
    )


def one_variable_certificate(f: LaurentPoly) -> ZeroMutableCertificate | None:
    bf = binomial_form(f)
    if bf is None:
        return None
    v, k, l = bf
    if k == 0:
        return ZeroMutableCertificate((), l, "one-variable")
    base = KernelPoly.binomial_power(v, 1).to_laurent()
    fac = CertificateFactor(base, k, (closing_datum(v, 1, (0, 0)),))
    return ZeroMutableCertificate((fac,), l, "one-variable")


# --- search --------------------------------------------------------------------------


def poly_key(f: LaurentPoly) -> tuple:
    """Key constant on orbits of f under affine unimodular changes of exponents."""
    _, maps = canonical_transforms(f.newton_polygon)
    return min(tuple(sorted(f.transform(g).items())) for g in maps)


@dataclass
class SearchResult:
    chain: tuple[MutationDatum, ...] | None
    nodes: int
    exhausted: bool

    @property
    def found(self) -> bool:
        return self.chain is not None


def search_chain(f: LaurentPoly, bounds: SearchBounds = SearchBounds()) -> SearchResult:
    """Best-first search for a mutation chain from f to a monomial with coefficient 1.

    Nodes with smaller Newton polygons are expanded first. Reaching a
    polynomial of the form (1 + x^v)^k x^l closes the chain with one extra
    datum.
    """
    bf = binomial_form(f)
    if bf is not None:
        v, k, l = bf
        return SearchResult(() if k == 0 else (closing_datum(v, k, l),), 0, False)
    if f.rank() < 2 or not f.is_normalized():
        return SearchResult(None, 0, False)
    cap = bounds.max_area_factor * double_area(f.newton_polygon)
    counter = itertools.count()
    parents: dict[int, tuple[int | None, MutationDatum | None]] = {}
    start = next(counter)
    parents[start] = (None, None)
    heap = [(double_area(f.newton_polygon), len(f), 0, start, f)]
    visited = {poly_key(f)}
    nodes = 0

    def chain_to(node: int, extra: MutationDatum | None) -> tuple:
        out = [] if extra is None else [extra]
        while parents[node][0] is not None:
            node, d = parents[node][0], parents[node][1]
            out.append(d)
        return tuple(reversed(out))

    while heap:
        _, _, depth, node, g = heapq.heappop(heap)
        nodes += 1
        if nodes > bounds.node_cap:
            return SearchResult(None, nodes, True)
        if depth >= bounds.max_depth:
            continue
        for d in candidate_data(g, bounds):
            try:
                child = mutation.mutate(g, d)
            except mutation.NotMutableError:
                continue
            if child.rank() < 2:
                bf = binomial_form(child)
                if bf is None:
                    continue
                v, k, l = bf
                cid = next(counter)
                parents[cid] = (node, d)
                return SearchResult(chain_to(cid, None if k == 0 else closing_datum(v, k, l)), nodes, False)
            area = double_area(child.newton_polygon)
            if area > cap:
                continue
            key = poly_key(child)
            if key in visited:
                continue
            visited.add(key)
            cid = next(counter)
            parents[cid] = (node, d)
            heapq.heappush(heap, (area, len(child), depth + 1, cid, child))
    return SearchResult(None, nodes, False)


# --- enumeration ----------------------------------------------------------------------


def partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    """Partitions of n as non-increasing tuples."""
    if n == 0:
        return [()]
    largest = n if largest is None else largest
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return out


def profile_data(F: LatticePolygon, profile: Sequence[tuple[int, ...]]) -> list[MutationDatum]:
    """Data for per-edge partitions: datum (p, q = lambda_1 + ... + lambda_p) for p = 1..len(E)."""
    out = []
    for E, lam in zip(edges(F), profile):
        h = KernelPoly.binomial_power(E.direction, 1)
        total = 0
        for p in range(1, E.length + 1):
            total += lam[p - 1] if p <= len(lam) else 0
            out.append(MutationDatum(edge_functional(E, p, total), h))
    return out


def rigid_candidates(F: LatticePolygon) -> list[LaurentPoly]:
    """Normalized generators of one-dimensional mutability spaces over all edge profiles.

    Every irreducible 0-mutable polynomial with Newton polygon F is the
    generator for the profile of its own edge mutabilities, so this list
    contains all of them.
    """
    es = edges(F)
    out: set[LaurentPoly] = set()
    for profile in itertools.product(*(partitions(E.length) for E in es)):
        basis = mutability_space(F, profile_data(F, profile))
        if len(basis) != 1:
            continue
        g = basis[0]
        lead = g.coefficient(F.vertices[0])
        if lead == 0:
            continue
        g = g.scale(Fraction(1) / lead)
        if g.is_normalized() and g.newton_polygon == F:
            out.add(g)
    return sorted(out, key=to_string)


@dataclass
class EnumerationReport:
    polygon: LatticePolygon
    irreducible: list[tuple[LaurentPoly, ZeroMutableCertificate]] = field(default_factory=list)
    products: list[tuple[LaurentPoly, ZeroMutableCertificate]] = field(default_factory=list)
    candidates: list[LaurentPoly] = field(default_factory=list)
    unknown: list[LaurentPoly] = field(default_factory=list)

    @property
    def results(self) -> list[tuple[LaurentPoly, ZeroMutableCertificate]]:
        return sorted(self.irreducible + self.products, key=lambda pc: to_string(pc[0]))


def _search_job(args):
    g, bounds = args
    return search_chain(g, bounds)


def _map(fn, items, jobs: int | None):
    if jobs and jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


@lru_cache(maxsize=None)
def _irreducibles_at_origin(vertices: tuple[Vec, ...], bounds: SearchBounds, jobs: int | None = None):
    F = LatticePolygon(vertices)
    if F.dimension == 0:
        return (), (), ()
    if F.dimension == 1:
        a, b = F.vertices
        if primitive(sub(b, a)) != sub(b, a):
            return (), (), ()
        g = LaurentPoly({a: 1, b: 1})
        v, k, l = binomial_form(g)
        return ((g, (closing_datum(v, k, l),)),), (g,), ()
    products = {p for p, _ in _products_at_origin(vertices, bounds, jobs)}
    cands = rigid_candidates(F)
    todo = [g for g in cands if g not in products]
    results = _map(_search_job, [(g, bounds) for g in todo], jobs)
    found, unknown = [], []
    for g, res in zip(todo, results):
        if res.found:
            found.append((g, res.chain))
        else:
            log.warning("rigid candidate %s not connected to a monomial within bounds", to_string(g))
            unknown.append(g)
    return tuple(found), tuple(cands), tuple(unknown)


@lru_cache(maxsize=None)
def _products_at_origin(vertices: tuple[Vec, ...], bounds: SearchBounds, jobs: int | None = None):
    F = LatticePolygon(vertices)
    out: dict[LaurentPoly, ZeroMutableCertificate] = {}
    for dec in minkowski_decompositions(F):
        choices = [_irreducibles_at_origin(S.vertices, bounds, jobs)[0] for S in dec.summands]
        for combo in itertools.product(*choices):
            prod = LaurentPoly.constant(1)
            for g, _ in combo:
                prod = prod * g
            t = sub(F.lexmin, prod.newton_polygon.lexmin)
            prod = prod.shift(t)
            if prod not in out:
                out[prod] = ZeroMutableCertificate(_group_factors(combo), t, "enumeration")
    return tuple(sorted(out.items(), key=lambda pc: to_string(pc[0])))


def enumeration_report(F: LatticePolygon, bounds: SearchBounds = SearchBounds(), jobs: int | None = None) -> EnumerationReport:
    t = F.lexmin
    F0 = F.at_origin()
    rep = EnumerationReport(F)
    if F.dimension == 0:
        rep.products.append((LaurentPoly.monomial(t), ZeroMutableCertificate((), t, "enumeration")))
        return rep
    found, cands, unknown = _irreducibles_at_origin(F0.vertices, bounds, jobs)
    for g, chain in found:
        cert = ZeroMutableCertificate((CertificateFactor(g, 1, chain),), t, "enumeration")
        rep.irreducible.append((g.shift(t), cert))
    for g, cert in _products_at_origin(F0.vertices, bounds, jobs):
        rep.products.append((g.shift(t), cert.shifted(t)))
    rep.candidates = [g.shift(t) for g in cands]
    rep.unknown = [g.shift(t) for g in unknown]
    return rep


def enumerate_zero_mutable(F: LatticePolygon, bounds: SearchBounds = SearchBounds(), jobs: int | None = None) -> list[tuple[LaurentPoly, ZeroMutableCertificate]]:
    """All 0-mutable polynomials with Newton polygon F, each with a certificate."""
    return enumeration_report(F, bounds, jobs).results


# --- decision -------------------------------------------------------------------------


@dataclass
class Verdict:
    status: str  # "yes" | "no" | "unknown"
    certificate: ZeroMutableCertificate | None = None
    reason: str = ""
    theorem_dependent: bool = False

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.reason:
            out["reason"] = self.reason
        if self.theorem_dependent:
            out["theorem_dependent"] = True
        return out


def decide_zero_mutable(f: LaurentPoly, bounds: SearchBounds = SearchBounds()) -> Verdict:
    if f.is_zero():
        raise ValueError("the zero polynomial")
    if f.rank() < 2:
        cert = one_variable_certificate(f)
        if cert is not None:
            return Verdict("yes", cert)
        return Verdict("no", reason="not of the form (1 + x^v)^k x^l")
    report = necessary_conditions(f)
    if not report.ok:
        return Verdict("no", reason="; ".join(f"{k}: {d}" for k, d in report.violations))
    P = f.newton_polygon
    t = P.lexmin
    for g, cert in _products_at_origin(P.at_origin().vertices, bounds):
        if g.shift(t) == f:
            return Verdict("yes", cert.shifted(t))
    res = search_chain(f, bounds)
    if res.found:
        return Verdict("yes", ZeroMutableCertificate((CertificateFactor(f, 1, res.chain),), (0, 0), "search"))
    rr = rigid_test(f)
    if not rr.rigid:
        return Verdict(
            "no",
            reason=f"not rigid maximally mutable (mutability space has dimension {rr.dimension})",
            theorem_dependent=True,
        )
    why = "node cap reached" if res.exhausted else "search space exhausted within bounds"
    return Verdict("unknown", reason=f"rigid but no chain found ({why}, {res.nodes} nodes)")
