"""Command-line interface: ``zmut <command> [options]``.

Exit codes: 0 success, 1 mathematical negative, 2 usage or parse error,
3 undecided within the search bounds.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import sys
from typing import Callable, TextIO

from . import cluster, lattice, laurent, mutation, seeds, toric, zero_mutable
from .lattice import LatticePolygon
from .laurent import KernelPoly, LaurentPoly, to_string
from .mutation import MutationDatum, SearchBounds

OK, NEGATIVE, USAGE, UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- input resolution ---------------------------------------------------------------


def _read_source(value: str, stdin: TextIO) -> str:
    if value == "-":
        return stdin.read()
    if value.startswith("@"):
        with open(value[1:], encoding="utf-8") as fh:
            return fh.read()
    if os.path.isfile(value):
        with open(value, encoding="utf-8") as fh:
            return fh.read()
    return value


def read_polygon(value: str, stdin: TextIO) -> LatticePolygon:
    text = _read_source(value, stdin).strip()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, dict) and "vertices" in data:
        return LatticePolygon.from_json(data)
    if isinstance(data, list):
        return LatticePolygon(tuple((int(x), int(y)) for x, y in data))
    try:
        pts = [tuple(int(c) for c in chunk.split(",")) for chunk in text.replace(";", " ").split()]
        return LatticePolygon(tuple((x, y) for x, y in pts))
    except ValueError as exc:
        raise UsageError(f"cannot read polygon from {value!r}") from exc


def read_poly(value: str, stdin: TextIO) -> LaurentPoly:
    text = _read_source(value, stdin).strip()
    if text.startswith("{"):
        return LaurentPoly.from_json(json.loads(text))
    return laurent.parse(text)


def read_ints(value: str, n: int, what: str) -> tuple[int, ...]:
    try:
        out = tuple(int(c) for c in value.replace(" ", "").split(","))
    except ValueError as exc:
        raise UsageError(f"{what} must be {n} comma-separated integers") from exc
    if len(out) != n:
        raise UsageError(f"{what} must be {n} comma-separated integers")
    return out


def read_datum(args, stdin) -> MutationDatum:
    if not args.phi or not args.h:
        raise UsageError("--phi and --h are required")
    phi = read_ints(args.phi, 3, "--phi")
    h = read_poly(args.h, stdin)
    bf = zero_mutable.binomial_form(h)
    if bf is None or bf[1] == 0 or bf[2] != (0, 0):
        raise UsageError("--h must be (1 + x^e)^k with e pointing into the upper half plane")
    v, k, _ = bf
    return MutationDatum(lattice.AffineFunctional(*phi), KernelPoly.binomial_power(v, k))


# --- output helpers ------------------------------------------------------------------------


class Out:
    def __init__(self, fmt: str, stream: TextIO):
        self.fmt = fmt
        self.stream = stream

    def emit(self, data, text: str | Callable[[], str]):
        if self.fmt == "json":
            self.stream.write(json.dumps(data, sort_keys=False) + "\n")
        else:
            t = text() if callable(text) else text
            self.stream.write(t.rstrip("\n") + "\n")


def _vec(v) -> str:
    return ",".join(str(c) for c in v)


def _poly_text(P: LatticePolygon) -> str:
    return " ".join(_vec(v) for v in P.vertices)


# --- commands ------------------------------------------------------------------------------


def cmd_polygon(args, out: Out, stdin) -> int:
    if args.action == "nakajima":
        if not args.abc:
            raise UsageError("--abc a,b,c is required")
        P = lattice.nakajima_polygon(*read_ints(args.abc, 3, "--abc"))
        out.emit(P.to_json(), _poly_text(P))
        return OK
    if not args.polygon:
        raise UsageError("--polygon is required")
    P = read_polygon(args.polygon, stdin)
    if args.action == "hull":
        out.emit(P.to_json(), _poly_text(P))
    elif args.action == "points":
        pts = lattice.lattice_points(P)
        out.emit({"points": [list(p) for p in pts]}, " ".join(_vec(p) for p in pts))
    elif args.action == "edges":
        es = lattice.edges(P)
        data = [
            {
                "start": list(E.start),
                "end": list(E.end),
                "direction": list(E.direction),
                "length": E.length,
                "inner_normal": list(E.inner_normal.linear),
                "min_value": E.min_value,
            }
            for E in es
        ]
        out.emit({"edges": data}, "\n".join(
            f"{_vec(E.start)} -> {_vec(E.end)}  length {E.length}  normal {_vec(E.inner_normal.linear)}  min {E.min_value}"
            for E in es
        ))
    elif args.action == "area":
        a = lattice.double_area(P)
        out.emit({"double_area": a}, str(a))
    elif args.action == "canon":
        Q, g = lattice.canonical_form(P)
        out.emit(
            {"canonical": Q.to_json(), "matrix": [list(r) for r in g.matrix], "shift": list(g.shift)},
            _poly_text(Q),
        )
    elif args.action in ("minkowski", "smoothing-dec"):
        if args.action == "minkowski":
            decs = lattice.minkowski_decompositions(P, maximal_only=args.maximal)
        else:
            decs = lattice.smoothing_decompositions(P)
        out.emit(
            {"decompositions": [d.to_json() for d in decs]},
            "\n".join(" + ".join(f"[{_poly_text(S)}]" for S in d.summands) for d in decs) or "(none)",
        )
    return OK


def cmd_poly(args, out: Out, stdin) -> int:
    f = read_poly(args.poly, stdin)
    if args.action in ("parse", "print"):
        out.emit(f.to_json(), to_string(f))
    elif args.action == "newton":
        P = f.newton_polygon
        out.emit(P.to_json(), _poly_text(P))
    elif args.action == "restrict":
        if not args.face:
            raise UsageError("--face is required")
        g = laurent.restrict_to_face(f, read_polygon(args.face, stdin))
        out.emit(g.to_json(), to_string(g))
    elif args.action == "slices":
        if not args.phi:
            raise UsageError("--phi is required")
        phi = lattice.AffineFunctional(*read_ints(args.phi, 3, "--phi"))
        sl = laurent.slices(f, phi)
        out.emit(
            {"slices": [{"level": k, "poly": to_string(g)} for k, g in sl.items()]},
            "\n".join(f"{k}: {to_string(g)}" for k, g in sl.items()),
        )
    return OK


def cmd_mutate(args, out: Out, stdin) -> int:
    f = read_poly(args.poly, stdin)
    d = read_datum(args, stdin)
    try:
        g = mutation.mutate(f, d)
    except mutation.NotMutableError as exc:
        out.emit(
            {"mutable": False, "level": exc.level, "remainder": to_string(exc.remainder)},
            f"not mutable: level {exc.level} leaves remainder {to_string(exc.remainder)}",
        )
        return NEGATIVE
    out.emit({"mutable": True, "result": to_string(g)}, to_string(g))
    return OK


def _certify(f: LaurentPoly, bounds: SearchBounds, out: Out):
    v = zero_mutable.decide_zero_mutable(f, bounds)
    if v.status != "yes":
        out.emit(v.to_json(), f"{v.status}: {v.reason}")
        return None, NEGATIVE if v.status == "no" else UNKNOWN
    return v.certificate, OK


def cmd_check(args, out: Out, stdin, bounds: SearchBounds) -> int:
    f = read_poly(args.poly, stdin)
    if args.action == "necessary":
        rep = mutation.necessary_conditions(f)
        out.emit(rep.to_json(), "ok" if rep.ok else "\n".join(f"{k}: {d}" for k, d in rep.violations))
        return OK if rep.ok else NEGATIVE
    if args.action == "mutable":
        ok = mutation.is_mutable(f, read_datum(args, stdin))
        out.emit({"mutable": ok}, "mutable" if ok else "not mutable")
        return OK if ok else NEGATIVE
    if args.action == "zero-mutable":
        v = zero_mutable.decide_zero_mutable(f, bounds)

        def text():
            if v.status == "yes":
                lines = ["yes"]
                for fac in v.certificate.factors:
                    lines.append(f"factor {to_string(fac.poly)} multiplicity {fac.multiplicity} chain length {len(fac.chain)}")
                return "\n".join(lines)
            tag = " (theorem-dependent)" if v.theorem_dependent else ""
            return f"{v.status}: {v.reason}{tag}"

        out.emit(v.to_json(), text)
        return {"yes": OK, "no": NEGATIVE, "unknown": UNKNOWN}[v.status]
    if args.action == "rigid":
        factors = None
        if args.factors:
            factors = [laurent.parse(t) for t in args.factors.split(";")]
        rep = mutation.rigid_test(f, factors)
        out.emit(rep.to_json(), f"{'rigid' if rep.rigid else 'not rigid'} (dimension {rep.dimension})")
        return OK if rep.rigid else NEGATIVE
    raise UsageError(args.action)


def cmd_enumerate(args, out: Out, stdin, bounds: SearchBounds) -> int:
    P = read_polygon(args.polygon, stdin)
    rep = zero_mutable.enumeration_report(P, bounds, args.jobs)
    res = rep.results
    data = {
        "count": len(res),
        "polynomials": [{"poly": to_string(g), "certificate": c.to_json()} for g, c in res],
        "unknown": [to_string(g) for g in rep.unknown],
    }
    out.emit(data, "\n".join(to_string(g) for g, _ in res) or "(none)")
    return UNKNOWN if rep.unknown else OK


def cmd_seed(args, out: Out, stdin, bounds: SearchBounds) -> int:
    f = read_poly(args.poly, stdin)
    cert, code = _certify(f, bounds, out)
    if cert is None:
        return code
    seed = seeds.s_minus(cert, f, bounds) if args.action == "s-minus" else seeds.seed_tilde(cert, f, bounds)
    out.emit(seed.to_json(), "\n".join(f"({_vec(e.m)})  {to_string(e.h)}" for e in seed.entries) or "(empty)")
    return OK


def cmd_tangent(args, out: Out, stdin, bounds: SearchBounds) -> int:
    f = read_poly(args.poly, stdin)
    cert, code = _certify(f, bounds, out)
    if cert is None:
        return code
    table = seeds.tangent_table(cert, f, bounds)
    lines = [f"({_vec(m)})  {d}" for m, d in sorted(table.entries.items())]
    lines.append("n = " + ",".join(str(k) for k in table.n))
    out.emit(table.to_json(), "\n".join(lines))
    return OK


def cmd_toric(args, out: Out, stdin) -> int:
    if args.action == "nakajima-eq":
        if not args.abc:
            raise UsageError("--abc a,b,c is required")
        I = toric.nakajima_equations(*read_ints(args.abc, 3, "--abc"))
        out.emit(I.to_json(), "\n".join(I.format()))
        return OK
    if not args.polygon:
        raise UsageError("--polygon is required")
    P = read_polygon(args.polygon, stdin)
    if args.action == "cayley":
        decs = [d for d in lattice.minkowski_decompositions(P) if len(d.summands) == 2]
        if not decs:
            out.emit({"error": "no two-summand decomposition"}, "no two-summand decomposition")
            return NEGATIVE
        idx = args.index or 0
        if idx >= len(decs):
            raise UsageError(f"--index must be below {len(decs)}")
        cc = toric.cayley_cone(decs[idx].anchored_to(P))
        out.emit(cc.to_json(), "\n".join(_vec(r) for r in cc.rays))
        return OK
    c = toric.cone_over(P)
    if args.action == "cone":
        out.emit(c.to_json(), "\n".join(_vec(r) for r in c.rays))
        return OK
    dc = toric.dual_cone(c)
    if args.action == "dual":
        out.emit(
            dc.to_json(),
            "\n".join(f"{lab} = ({_vec(r)})" for lab, r in zip(dc.labels, dc.rays)) + f"\nu = ({_vec(dc.gorenstein_degree)})",
        )
        return OK
    hb = toric.hilbert_basis(dc)
    if args.action == "hilbert":
        data = hb.to_json()
        lines = [f"{n} = ({_vec(v)})" for n, v in zip(hb.names, hb.elements)]
        if "z3" in hb.names and "s3" in hb.names and hb.vector("s3") == (-1, -2, 3):
            note = "s3 = (-1,-2,3) is the computed facet normal; (-1,2,3) is not in the dual cone"
            data["note"] = note
            lines.append("note: " + note)
        out.emit(data, "\n".join(lines))
        return OK
    if args.action == "ideal":
        I = toric.toric_relations(hb, args.degree_bound)
        lines = I.format()
        if set(hb.names) == {"u", "s1", "s2", "s3", "s4", "z2", "z3", "z4"}:
            lines.append("rank [[s1 z2 u s2 z4] [z2 s4 z3 z4 s3]] <= 1, together with the non-minor generators")
        out.emit(I.to_json(), "\n".join(lines))
        return OK
    raise UsageError(args.action)


def cmd_cluster(args, out: Out, stdin, bounds: SearchBounds) -> int:
    f = read_poly(args.poly, stdin)
    if args.action == "mults":
        data = []
        for i, E in enumerate(lattice.sides(f.newton_polygon)):
            data.append({"edge": i, "start": list(E.start), "end": list(E.end), "mults": cluster.multiplicity_sequence(f, E)})
        out.emit({"edges": data}, "\n".join(f"edge {d['edge']} {_vec(d['start'])} -> {_vec(d['end'])}: {d['mults']}" for d in data))
        return OK
    if args.action == "numbers":
        z = cluster.z_prime_numbers(f)
        out.emit(z.to_json(), f"Z'^2 = {z.self_intersection}  Z'.B = {z.boundary_product}")
        return OK
    if args.action == "check":
        cert, code = _certify(f, bounds, out)
        if cert is None:
            rep = cluster.check_two_curve(f)
        else:
            rep = cluster.check_two_curve(f, cert)
        out.emit(rep.to_json(), "\n".join(
            f"{to_string(g)}: ({z.self_intersection}, {z.boundary_product}) {'pass' if z.passes else 'fail'}"
            for g, z in rep.factors
        ))
        return OK if rep.passes and cert is not None else (code if cert is None and code else NEGATIVE)
    raise UsageError(args.action)


# --- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--bounds", default="", help="search bound overrides, e.g. max_depth=8,node_cap=1000")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for enumeration")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="zmut", description="0-mutable Laurent polynomials on lattice polygons")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("polygon", parents=[common])
    s.add_argument("action", choices=("hull", "points", "edges", "area", "canon", "minkowski", "smoothing-dec", "nakajima"))
    s.add_argument("--polygon")
    s.add_argument("--abc")
    s.add_argument("--maximal", action="store_true", help="only decompositions into indecomposable summands")

    s = sub.add_parser("poly", parents=[common])
    s.add_argument("action", choices=("parse", "print", "newton", "restrict", "slices"))
    s.add_argument("--poly", required=True)
    s.add_argument("--face")
    s.add_argument("--phi")

    s = sub.add_parser("mutate", parents=[common])
    s.add_argument("--poly", required=True)
    s.add_argument("--phi", required=True)
    s.add_argument("--h", required=True)

    s = sub.add_parser("check", parents=[common])
    s.add_argument("action", choices=("necessary", "mutable", "zero-mutable", "rigid"))
    s.add_argument("--poly", required=True)
    s.add_argument("--phi")
    s.add_argument("--h")
    s.add_argument("--factors", help="semicolon-separated factors for a per-factor rigidity report")

    s = sub.add_parser("enumerate", parents=[common])
    s.add_argument("--polygon", required=True)

    s = sub.add_parser("seed", parents=[common])
    s.add_argument("action", choices=("s-minus", "tilde"))
    s.add_argument("--poly", required=True)

    s = sub.add_parser("tangent", parents=[common])
    s.add_argument("--poly", required=True)

    s = sub.add_parser("toric", parents=[common])
    s.add_argument("action", choices=("cone", "dual", "hilbert", "ideal", "nakajima-eq", "cayley"))
    s.add_argument("--polygon")
    s.add_argument("--abc")
    s.add_argument("--degree-bound", type=int, default=4)
    s.add_argument("--index", type=int, default=0, help="which two-summand decomposition to use")

    s = sub.add_parser("cluster", parents=[common])
    s.add_argument("action", choices=("mults", "numbers", "check"))
    s.add_argument("--poly", required=True)
    return p


def run(argv: list[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, stream=stderr, format="%(levelname)s %(message)s")
    out = Out(args.format, stdout)
    try:
        bounds = SearchBounds.parse(args.bounds)
        cmd = args.command
        if cmd == "polygon":
            return cmd_polygon(args, out, stdin)
        if cmd == "poly":
            return cmd_poly(args, out, stdin)
        if cmd == "mutate":
            return cmd_mutate(args, out, stdin)
        if cmd == "check":
            return cmd_check(args, out, stdin, bounds)
        if cmd == "enumerate":
            return cmd_enumerate(args, out, stdin, bounds)
        if cmd == "seed":
            return cmd_seed(args, out, stdin, bounds)
        if cmd == "tangent":
            return cmd_tangent(args, out, stdin, bounds)
        if cmd == "toric":
            return cmd_toric(args, out, stdin)
        if cmd == "cluster":
            return cmd_cluster(args, out, stdin, bounds)
    except (UsageError, laurent.ParseError, lattice.GeometryError, ValueError, OSError) as exc:
        stderr.write(f"zmut: error: {exc}\n")
        return USAGE
    return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
