"""Seeds of mutation data and predicted tangent dimensions."""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import edges
from .laurent import KernelPoly, LaurentPoly, to_string
from .mutation import MutationDatum, SearchBounds, edge_functional, is_mutable
from .zero_mutable import ZeroMutableCertificate

M3 = tuple[int, int, int]

GORENSTEIN_DEGREE: M3 = (0, 0, 1)


@dataclass(frozen=True)
class SeedEntry:
    """A character m in M = Z^3 together with a polynomial h."""

    m: M3
    h: LaurentPoly

    def to_json(self) -> dict:
        return {"phi_M": list(self.m), "h": to_string(self.h)}


@dataclass
class Seed:
    entries: list[SeedEntry] = field(default_factory=list)

    def __contains__(self, item) -> bool:
        m, h = item
        return SeedEntry(tuple(m), h) in self.entries

    def characters(self) -> list[M3]:
        return [e.m for e in self.entries]

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]


def s_minus(cert: ZeroMutableCertificate, f: LaurentPoly, bounds: SearchBounds = SearchBounds()) -> Seed:
    """Edge-negative data f is mutable for, as characters (a, b, c) of phi = a*x + b*y + c.

    For each edge and multiplier p, q grows until divisibility fails; the
    condition only gets stronger with q.
    """
    if not cert.replays(f):
        raise ValueError("certificate does not certify f")
    seed = Seed()
    if f.rank() < 2:
        return seed
    es = edges(f.newton_polygon)
    max_p = bounds.max_p or max(E.length for E in es)
    for E in es:
        h = KernelPoly.binomial_power(E.direction, 1)
        max_q = min(bounds.max_q or E.length, E.length)
        for p in range(1, max_p + 1):
            for q in range(1, max_q + 1):
                d = MutationDatum(edge_functional(E, p, q), h)
                if not is_mutable(f, d):
                    break
                entry = SeedEntry(tuple(d.phi), h.to_laurent())
                if entry not in seed.entries:
                    seed.entries.append(entry)
    return seed


def seed_tilde(cert: ZeroMutableCertificate, f: LaurentPoly, bounds: SearchBounds = SearchBounds()) -> Seed:
    """S_- together with (-k*u, h) for each certified prime factor h of multiplicity k."""
    seed = s_minus(cert, f, bounds)
    for fac in cert.factors:
        k = fac.multiplicity
        seed.entries.append(SeedEntry((0, 0, -k), fac.poly))
    return seed


@dataclass
class TangentTable:
    entries: dict[M3, int]
    n: list[int]

    def __getitem__(self, m) -> int:
        return self.entries.get(tuple(m), 0)

    def row(self, characters) -> tuple[int, ...]:
        return tuple(self[m] for m in characters)

    def to_json(self) -> dict:
        return {
            "entries": [{"m": list(m), "dim": d} for m, d in sorted(self.entries.items())],
            "n": list(self.n),
        }


def _on_negative_u_ray(m: M3) -> bool:
    return m[0] == 0 and m[1] == 0 and m[2] <= 0


def tangent_table(cert: ZeroMutableCertificate, f: LaurentPoly, bounds: SearchBounds = SearchBounds()) -> TangentTable:
    """Predicted dimensions: n_k at -k*u, 1 at other seed characters, 0 elsewhere."""
    seed = seed_tilde(cert, f, bounds)
    n = cert.n_list()
    entries: dict[M3, int] = {}
    for m in seed.characters():
        if not _on_negative_u_ray(m):
            entries[m] = 1
    for k, nk in enumerate(n, start=1):
        entries[(0, 0, -k)] = nk
    return TangentTable(entries, n)
