import random

import pytest

from oracles import _unimodular_completion

from known import ALPHA, ALPHA_FACTORS, BETA, GAMMA, OFF_LIST, QUAD
from zmut import mutation
from zmut.lattice import AffineFunctional, LatticePolygon, edges, lattice_points
from zmut.laurent import KernelPoly, LaurentPoly, is_normalized, parse, slices, to_string
from zmut.mutation import (
    MutationDatum,
    NotMutableError,
    SearchBounds,
    candidate_data,
    full_edge_data,
    inverse_datum,
    is_mutable,
    mutability_space,
    necessary_conditions,
    rigid_test,
)

B1 = MutationDatum.make((0, 1, -1), (1, 0))  # phi = b - 1, h = 1 + x
B2 = MutationDatum.make((0, 1, -2), (1, 0))  # phi = b - 2
B3 = MutationDatum.make((0, 2, -1), (1, 0))  # phi = 2b - 1
A1 = MutationDatum.make((1, 0, -1), (0, 1))
A2 = MutationDatum.make((1, 0, -2), (0, 1))
A3 = MutationDatum.make((2, 0, -1), (0, 1))


def canon(text):
    return to_string(parse(text))


class TestDisplayedMutations:
    def test_alpha_first(self):
        got = mutation.mutate(ALPHA, B1)
        assert to_string(got) == canon("(1+x)/(x*y) + (3+2*x)/x + y*(3 + 2*x + x^2)/x + y^2*(1+x)/x")

    def test_alpha_second(self):
        got = mutation.mutate(ALPHA, B3)
        assert to_string(got) == canon("1/(x*y) + (3+2*x)/x + y*(3+5*x + 3*x^2 + x^3)/x + y^2*(1+x)^3/x")

    def test_beta_first(self):
        got = mutation.mutate(BETA, B1)
        assert to_string(got) == canon("(1+x)/(x*y) + 3*(1+x)/x + y*(3+x)*(1+x)/x + y^2*(1+x)/x")

    def test_beta_second(self):
        got = mutation.mutate(BETA, B2)
        assert to_string(got) == canon("1/(x*y) + 3/x + y*(3 + x)/x + y^2/x")
        assert got == parse("((1+y)^3 + x*y^2)/(x*y)")

    def test_beta_third(self):
        got = mutation.mutate(BETA, B3)
        assert to_string(got) == canon("1/(x*y) + 3*(1+x)/x + y*(3 + x)*(1+x)^2/x + y^2*(1+x)^3/x")

    def test_alpha_not_mutable(self):
        assert not is_mutable(ALPHA, B2)
        with pytest.raises(NotMutableError) as info:
            mutation.mutate(ALPHA, B2)
        assert info.value.level < 0 and not info.value.remainder.is_zero()

    @pytest.mark.parametrize("d", [B1, B2, B3])
    def test_gamma_not_mutable(self, d):
        assert not is_mutable(GAMMA, d)

    @pytest.mark.parametrize("d", [A1, A2, A3])
    def test_gamma_mirror(self, d):
        mirrored = MutationDatum.make((d.phi.b, d.phi.a, d.phi.c), (1, 0))
        assert mutation.mutate(GAMMA, d) == mutation.mutate(BETA, mirrored).swap_xy()


class TestTrivial:
    def test_monomial_level_zero(self):
        m = LaurentPoly.monomial((3, 1))
        assert mutation.mutate(m, B1) == m

    def test_monomial_positive_level(self):
        m = LaurentPoly.monomial((0, 2))
        assert is_mutable(m, B1)

    def test_monomial_has_no_candidates(self):
        assert candidate_data(LaurentPoly.monomial((1, 1))) == []


class TestDatum:
    def test_kernel_mismatch(self):
        with pytest.raises(ValueError):
            MutationDatum(AffineFunctional(1, 0, 0), KernelPoly.binomial_power((1, 0), 1))

    def test_constant_phi(self):
        with pytest.raises(ValueError):
            MutationDatum(AffineFunctional(0, 0, 1), KernelPoly.binomial_power((1, 0), 1))

    def test_inverse(self):
        d = inverse_datum(B1)
        assert tuple(d.phi) == (0, -1, 1) and d.h == B1.h

    def test_json(self):
        assert MutationDatum.from_json(B3.to_json()) == B3


class TestCandidates:
    def test_beta(self):
        found = {(tuple(d.phi), d.direction) for d in candidate_data(BETA)}
        for d in (B1, B2, B3):
            assert (tuple(d.phi), (1, 0)) in found

    def test_gamma_filtered(self):
        found = {tuple(d.phi) for d in candidate_data(GAMMA, mutable_only=True)}
        assert {(1, 0, -1), (1, 0, -2), (2, 0, -1)} <= found
        assert not {(0, 1, -1), (0, 1, -2), (0, 2, -1)} & found

    def test_all_edge_negative(self):
        for d in candidate_data(BETA):
            assert any(d.phi(E.start) == d.phi(E.end) < 0 for E in edges(BETA.newton_polygon))


class TestInverse:
    @pytest.mark.parametrize("f,d", [(ALPHA, B1), (ALPHA, B3), (BETA, B1), (BETA, B2), (BETA, B3), (GAMMA, A2)])
    def test_examples(self, f, d):
        g = mutation.mutate(f, d)
        assert mutation.mutate(g, inverse_datum(d)) == f

    def test_monomials(self):
        m = LaurentPoly.monomial((2, 3))
        for d in (B1, B2, A3):
            assert d.phi((2, 3)) > 0
            assert mutation.mutate(mutation.mutate(m, d), inverse_datum(d)) == m


class TestScaling:
    @pytest.mark.parametrize("f", [ALPHA, BETA, GAMMA])
    @pytest.mark.parametrize("phi", [(0, 1, -1), (0, 1, -2), (0, 2, -1), (1, 0, -1)])
    @pytest.mark.parametrize("k", [2, 3])
    def test_k_phi_equals_h_power(self, f, phi, k):
        e = (1, 0) if phi[0] == 0 else (0, 1)
        scaled = MutationDatum.make(tuple(k * c for c in phi), e, 1)
        powered = MutationDatum.make(phi, e, k)
        assert is_mutable(f, scaled) == is_mutable(f, powered)
        if is_mutable(f, scaled):
            assert mutation.mutate(f, scaled) == mutation.mutate(f, powered)

    def test_beta_two_b_minus_four(self):
        assert not is_mutable(BETA, MutationDatum.make((0, 2, -4), (1, 0)))
        assert not is_mutable(BETA, MutationDatum.make((0, 1, -2), (1, 0), 2))


def random_mutable_pair(rng):
    """f with every negative slice divisible by the required power of h, built slice by slice."""
    e = rng.choice([(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 3)])
    w = _unimodular_completion(e)  # det(e, w) = 1, so the inner normal takes value 1 on w
    normal = (-e[1], e[0])
    p = rng.randint(1, 2)
    c = rng.randint(-3, 3)
    d = MutationDatum.make((p * normal[0], p * normal[1], c), e, rng.randint(1, 2))
    h = d.h.to_laurent()
    f = LaurentPoly()
    for t in rng.sample(range(-3, 4), rng.randint(1, 4)):
        s0 = rng.randint(-2, 2)
        start = (s0 * e[0] + t * w[0], s0 * e[1] + t * w[1])
        row = LaurentPoly({(start[0] + i * e[0], start[1] + i * e[1]): rng.randint(1, 4) for i in range(rng.randint(1, 3))})
        k = d.phi(start)
        f = f + (h ** (-k) * row if k < 0 else row)
    return f, d


def test_random_round_trips():
    rng = random.Random(2024)
    done = 0
    while done < 500:
        f, d = random_mutable_pair(rng)
        if f.is_zero():
            continue
        assert is_mutable(f, d), (to_string(f), d)
        g = mutation.mutate(f, d)
        assert mutation.mutate(g, inverse_datum(d)) == f
        done += 1


class TestNecessaryConditions:
    def test_off_list_passes(self):
        assert necessary_conditions(OFF_LIST).ok

    def test_examples_pass(self):
        for f in (ALPHA, BETA, GAMMA):
            assert necessary_conditions(f).ok

    def test_negativity(self):
        assert "negativity" in necessary_conditions(BETA - parse("7")).kinds()

    def test_non_integral(self):
        assert "non-integral" in necessary_conditions(BETA + parse("1/2")).kinds()

    def test_boundary(self):
        f = parse("1 + x + x^2 + x^3 + y")
        assert "boundary not binomial" in necessary_conditions(f).kinds()

    def test_vertex(self):
        assert "vertex coefficient" in necessary_conditions(parse("2 + x + y")).kinds()


class TestMutabilitySpace:
    def test_empty_set(self):
        assert len(mutability_space(QUAD, [])) == len(lattice_points(QUAD))

    def test_beta(self):
        basis = mutability_space(QUAD, full_edge_data(BETA))
        assert len(basis) == 1
        g = basis[0]
        c = BETA[(-1, -1)] / g[(-1, -1)]
        assert g.scale(c) == BETA

    def test_segment(self):
        k = 4
        F = LatticePolygon(((0, 0), (k, 0)))
        d = MutationDatum.make((0, 1, 1), (1, 0), k)
        basis = mutability_space(F, [d.__class__(AffineFunctional(0, -1, -1), d.h)])
        assert len(basis) == 1
        g = basis[0]
        assert g.scale(1 / g[(0, 0)]) == (1 + parse("x")) ** k


class TestRigid:
    def test_beta_gamma(self):
        assert rigid_test(BETA).rigid and rigid_test(GAMMA).rigid

    def test_off_list(self):
        assert not rigid_test(OFF_LIST).rigid

    def test_alpha_per_factor(self):
        rep = rigid_test(ALPHA, list(ALPHA_FACTORS))
        assert rep.rigid

    def test_product_of_binomials(self):
        rep = rigid_test(parse("(1+x)*(1+y)"), [parse("1+x"), parse("1+y")])
        assert rep.rigid


def test_bounds_parse():
    b = SearchBounds.parse("max_depth=3,max_area_factor=2,node_cap=10")
    assert (b.max_depth, b.node_cap) == (3, 10)
    with pytest.raises(ValueError):
        SearchBounds.parse("bogus=1")
    with pytest.raises(ValueError):
        SearchBounds.parse("max_depth=0")


def test_mutation_preserves_normalization_on_examples():
    for f in (ALPHA, BETA, GAMMA):
        for d in candidate_data(f, mutable_only=True):
            assert is_normalized(mutation.mutate(f, d))


def test_slices_of_mutation():
    h = B2.h.to_laurent()
    before = slices(BETA, B2.phi)
    after = slices(mutation.mutate(BETA, B2), B2.phi)
    assert sorted(before) == sorted(after)
    for k in before:
        if k >= 0:
            assert after[k] == before[k] * h**k
        else:
            assert after[k] * h ** (-k) == before[k]
