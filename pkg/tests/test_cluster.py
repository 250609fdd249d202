import random

import pytest

from oracles import brute_multiplicities
from known import ALPHA, ALPHA_FACTORS, BETA, F1, F2, GAMMA, OFF_LIST, QUAD
from zmut.cluster import (
    blowup_multiplicities,
    check_two_curve,
    edge_local_expansion,
    multiplicity_sequence,
    z_prime_numbers,
)
from zmut.lattice import GeometryError, LatticePolygon, edges, sides
from zmut.laurent import LaurentPoly, parse
from zmut.zero_mutable import decide_zero_mutable


class TestNumbers:
    @pytest.mark.parametrize("f", [BETA, GAMMA, F1, F2, *ALPHA_FACTORS])
    def test_minus_two_zero(self, f):
        z = z_prime_numbers(f)
        assert (z.self_intersection, z.boundary_product) == (-2, 0)

    def test_alpha_whole_fails_but_factors_pass(self):
        assert not z_prime_numbers(ALPHA).passes
        rep = check_two_curve(ALPHA, decide_zero_mutable(ALPHA).certificate)
        assert rep.passes and len(rep.factors) == 2

    def test_off_list_fails(self):
        z = z_prime_numbers(OFF_LIST)
        assert not z.passes

    def test_binomial_segment(self):
        z = z_prime_numbers(parse("1+x"))
        assert (z.self_intersection, z.boundary_product) == (-2, 0)

    def test_point_rejected(self):
        with pytest.raises(GeometryError):
            z_prime_numbers(LaurentPoly.monomial((1, 2)))

    def test_certificate_must_match(self):
        cert = decide_zero_mutable(BETA).certificate
        with pytest.raises(ValueError):
            check_two_curve(GAMMA, cert)


class TestEdgeLocal:
    def test_beta_bottom_edge(self):
        E = edges(QUAD)[0]
        model = edge_local_expansion(BETA, E)
        assert model.slices[0] == (1, 3, 3, 1)
        assert model.orders()[0] == 3

    def test_beta_multiplicities(self):
        seqs = [multiplicity_sequence(BETA, E) for E in edges(QUAD)]
        assert all(sum(m) == E.length for m, E in zip(seqs, edges(QUAD)))
        assert sum(m * m for ms in seqs for m in ms) == 14

    def test_alpha_bottom_edge(self):
        E = edges(QUAD)[0]
        assert multiplicity_sequence(ALPHA, E) == [2, 1, 0]

    def test_not_an_edge(self):
        E = sides(LatticePolygon(((0, 0), (5, 0), (0, 5))))[0]
        with pytest.raises(GeometryError):
            edge_local_expansion(BETA, E)


class TestRecursion:
    def test_smooth_branch(self):
        # orders (1, 0): a smooth branch transverse to the boundary
        assert blowup_multiplicities([1, 0], 3) == [1, 0, 0]

    def test_tangent_branch(self):
        # f = s^2 - t: after one blowup the branch leaves the boundary
        assert blowup_multiplicities([2, 0], 3) == [1, 1, 0]


def random_poly(rng):
    pts = {(rng.randint(0, 3), rng.randint(0, 3)) for _ in range(rng.randint(3, 8))}
    return LaurentPoly({p: rng.choice([1, 2, 3, -1, -2]) for p in pts})


class TestAgainstOracle:
    @pytest.mark.parametrize("f", [ALPHA, BETA, GAMMA, F1, F2, OFF_LIST, *ALPHA_FACTORS])
    def test_examples(self, f):
        for E in sides(f.newton_polygon):
            assert multiplicity_sequence(f, E) == brute_multiplicities(f, E.start, E.direction, E.length)

    def test_random(self):
        rng = random.Random(31)
        done = 0
        while done < 50:
            f = random_poly(rng)
            if f.rank() < 2:
                continue
            for E in sides(f.newton_polygon):
                steps = E.length + 2
                model = edge_local_expansion(f, E)
                assert blowup_multiplicities(model.orders(), steps) == brute_multiplicities(f, E.start, E.direction, steps)
            done += 1
