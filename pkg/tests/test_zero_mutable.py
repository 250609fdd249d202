import json

import pytest

from known import ALPHA, ALPHA_FACTORS, BETA, F1, F2, GAMMA, OFF_LIST, QUAD, TRIANGLE
from zmut import mutation
from zmut.lattice import LatticePolygon, edges
from zmut.laurent import LaurentPoly, parse, restrict_to_face, to_string
from zmut.mutation import SearchBounds
from zmut.zero_mutable import (
    ZeroMutableCertificate,
    binomial_form,
    decide_zero_mutable,
    enumerate_zero_mutable,
    partitions,
    search_chain,
)


def replay_chain(poly, chain):
    g = poly
    for d in chain:
        g = mutation.mutate(g, d)
    return g


class TestOneVariable:
    def test_binomial_form(self):
        assert binomial_form(parse("(1+x)^3*x^2*y")) == ((1, 0), 3, (2, 1))
        assert binomial_form(parse("x^4")) == (None, 0, (4, 0))
        assert binomial_form(parse("1 + 2*x")) is None
        assert binomial_form(parse("(1 + x*y^2)^2")) == ((1, 2), 2, (0, 0))

    @pytest.mark.parametrize("text", ["(1+x)^3*x^2*y", "(1+y)^2/x", "x^-2*y^5", "(1+x^2*y^-1)^3"])
    def test_yes(self, text):
        f = parse(text)
        v = decide_zero_mutable(f)
        assert v.status == "yes" and v.certificate.replays(f)

    def test_not_binomial(self):
        v = decide_zero_mutable(parse("1 + 3*x + x^2"))
        assert v.status == "no" and not v.theorem_dependent


class TestDecide:
    @pytest.mark.parametrize("f", [BETA, GAMMA, F1, F2])
    def test_irreducible_yes(self, f):
        v = decide_zero_mutable(f)
        assert v.status == "yes"
        cert = v.certificate
        assert cert.replays(f)
        assert len(cert.factors) == 1 and cert.factors[0].multiplicity == 1
        end = replay_chain(cert.factors[0].poly, cert.factors[0].chain)
        assert end.is_monomial() and next(iter(end.terms.values())) == 1

    def test_alpha_factors(self):
        v = decide_zero_mutable(ALPHA)
        assert v.status == "yes"
        got = sorted(to_string(fac.poly) for fac in v.certificate.factors)
        assert got == sorted(to_string(g) for g in ALPHA_FACTORS)
        assert v.certificate.product() == ALPHA

    def test_off_list_is_no(self):
        v = decide_zero_mutable(OFF_LIST)
        assert v.status == "no" and v.theorem_dependent

    def test_negative_coefficient(self):
        v = decide_zero_mutable(BETA - parse("9"))
        assert v.status == "no" and not v.theorem_dependent and "negativity" in v.reason

    def test_unknown_when_bounds_exhausted(self):
        v = decide_zero_mutable(BETA, SearchBounds(node_cap=1))
        assert v.status == "unknown"

    def test_square_of_irreducible(self):
        f = F1 * F1
        v = decide_zero_mutable(f)
        assert v.status == "yes" and v.certificate.n_list() == [1, 1]
        assert v.certificate.factors[0].multiplicity == 2

    def test_reducible_mixed(self):
        f = parse("(1+x)^2*(1+y)")
        v = decide_zero_mutable(f)
        assert v.status == "yes" and v.certificate.replays(f)
        assert v.certificate.n_list() == [2, 1]

    def test_face_compatibility(self):
        for f in (ALPHA, BETA, GAMMA, F1, F2):
            assert decide_zero_mutable(f).status == "yes"
            for E in edges(f.newton_polygon):
                g = restrict_to_face(f, LatticePolygon((E.start, E.end)))
                assert binomial_form(g) is not None and binomial_form(g)[1] == E.length


class TestSearch:
    def test_beta_chain_is_short(self):
        r = search_chain(BETA)
        assert r.found and len(r.chain) <= 4

    def test_translation_invariant(self):
        shifted = BETA * LaurentPoly.monomial((4, -2))
        r = search_chain(shifted)
        assert r.found and replay_chain(shifted, r.chain).is_monomial()


class TestCertificate:
    def test_json_round_trip(self):
        cert = decide_zero_mutable(ALPHA).certificate
        data = json.loads(json.dumps(cert.to_json()))
        back = ZeroMutableCertificate.from_json(data)
        assert back.replays(ALPHA) and back.to_json() == cert.to_json()

    def test_rejects_wrong_polynomial(self):
        cert = decide_zero_mutable(BETA).certificate
        assert not cert.replays(GAMMA)


class TestEnumeration:
    def test_segment(self):
        res = enumerate_zero_mutable(LatticePolygon(((0, 0), (3, 0))))
        assert [to_string(f) for f, _ in res] == ["1 + 3*x + 3*x^2 + x^3"]

    def test_point(self):
        res = enumerate_zero_mutable(LatticePolygon(((2, 1),)))
        assert [f for f, _ in res] == [LaurentPoly.monomial((2, 1))]

    def test_unit_square(self):
        res = enumerate_zero_mutable(LatticePolygon(((0, 0), (1, 0), (1, 1), (0, 1))))
        assert [f for f, _ in res] == [parse("(1+x)*(1+y)")]

    def test_reflexive_triangle_has_none(self):
        assert enumerate_zero_mutable(LatticePolygon(((-1, -1), (1, 0), (0, 1)))) == []

    def test_parallel_matches_sequential(self):
        a = enumerate_zero_mutable(QUAD, jobs=None)
        b = enumerate_zero_mutable(QUAD, jobs=2)
        assert [to_string(f) for f, _ in a] == [to_string(f) for f, _ in b]
        assert [c.to_json() for _, c in a] == [c.to_json() for _, c in b]

    def test_certificates_replay(self):
        for P in (QUAD, TRIANGLE):
            for f, cert in enumerate_zero_mutable(P):
                assert f.newton_polygon == P and cert.replays(f)


def test_partitions():
    assert len(partitions(4)) == 5 and len(partitions(6)) == 11
    assert all(sum(p) == 6 for p in partitions(6))
