import random

import pytest

from qdalg.prolong import (
    INVDET,
    IdealGens,
    JetPoly,
    JetRing,
    JetVar,
    PointError,
    commutation_check,
    kernel_condition_check,
    prolong_ideal,
    sigma_on_jet,
)
from qdalg.qfield import ONE, Q, RatX, X, delta_q, delta_x


def random_matrix(rng, nu):
    while True:
        A = tuple(tuple(RatX(rng.randint(-2, 2)) * X ** rng.randint(0, 2) + Q ** rng.randint(0, 1) * rng.randint(-1, 1)
                        for _ in range(nu)) for _ in range(nu))
        ring = JetRing(A, 1)
        if ring.A and (nu == 1 and A[0][0] or nu == 2 and A[0][0] * A[1][1] - A[0][1] * A[1][0]):
            return A


class TestSigmaOnJet:
    def setup_method(self):
        self.a = (X**2 + Q) / (X - 1)
        self.ring = JetRing(((self.a,),), 3)
        self.X0, self.X1, self.X2 = (self.ring.var(0, 0, k) for k in range(3))

    def test_order_zero(self):
        assert sigma_on_jet(self.ring, 0)[0][0] == self.X0 * self.a

    def test_order_one(self):
        assert sigma_on_jet(self.ring, 1)[0][0] == self.X0 * delta_x(self.a) + self.X1 * self.a

    def test_order_two_binomial(self):
        a = self.a
        expected = self.X0 * delta_x(delta_x(a)) + self.X1 * (2 * delta_x(a)) + self.X2 * a
        assert sigma_on_jet(self.ring, 2)[0][0] == expected

    def test_order_limit(self):
        with pytest.raises(ValueError):
            sigma_on_jet(self.ring, 4)

    def test_matrix_case(self):
        A = ((Q, X), (ONE, X**2))
        ring = JetRing(A, 1)
        S = sigma_on_jet(ring, 0)
        assert S[0][1] == ring.var(0, 1) * Q + ring.var(1, 1) * X

    def test_ring_endomorphism(self):
        rng = random.Random(1)
        ring = JetRing(((Q * X, ONE), (X, ONE + X)), 2)
        gens = ring.variables()
        for _ in range(10):
            m1 = JetPoly.var(rng.choice(gens)) * JetPoly.var(rng.choice(gens))
            m2 = JetPoly.var(rng.choice(gens)) + X
            assert ring.sigma(m1 * m2) == ring.sigma(m1) * ring.sigma(m2)


class TestCommutation:
    def test_scalar(self):
        assert commutation_check(JetRing(((Q * X,),), 3), 3)

    @pytest.mark.parametrize("seed", range(3))
    def test_random_two_by_two(self, seed):
        rng = random.Random(seed)
        assert commutation_check(JetRing(random_matrix(rng, 2), 2), 2)

    def test_two_derivations(self):
        ring = JetRing(((Q * X + 1,),), 2, derivations=[delta_x, lambda c: delta_x(delta_x(c)) * 0 + delta_x(c) * 2])
        assert commutation_check(ring, 2)

    def test_corrupted_leibniz(self):
        def wrong(alpha, beta):
            return 1
        assert not commutation_check(JetRing(((Q * X,),), 2), 2, coefficient=wrong)

    def test_delta_q_does_not_commute(self):
        assert not commutation_check(JetRing(((Q * X,),), 2, derivations=[delta_q]), 2)

    def test_invdet(self):
        ring = JetRing(((Q, X), (ONE, X)), 1)
        D = ring.invdet()
        assert ring.equal_mod_det(ring.det_x() * D, JetPoly.const(ONE))
        assert ring.sigma(D) == D * (1 / (Q * X - X))


class TestProlongation:
    def setup_method(self):
        self.ring = JetRing(((Q * X,),), 3)
        self.X0, self.X1, self.X2 = (self.ring.var(0, 0, k) for k in range(3))

    def test_constant_point(self):
        c = Q + 1
        out = prolong_ideal(IdealGens.of(self.ring, [self.X0 - c]))
        assert out.generators == (self.X0 - c, self.X1)
        assert out.order == 1

    def test_linear_equation(self):
        b = X / (X + Q)
        out = prolong_ideal(IdealGens.of(self.ring, [self.X1 - self.X0 * b]))
        assert out.generators[1] == self.X2 - self.X0 * delta_x(b) - self.X1 * b
        assert out.order == 2

    def test_zero_ideal(self):
        out = prolong_ideal(IdealGens.of(self.ring, [JetPoly()]))
        assert out.generators == ()

    def test_monotone(self):
        ideal = IdealGens.of(self.ring, [self.X0**2 - X, self.X1 * self.X0])
        out = prolong_ideal(ideal)
        assert set(ideal.generators) <= set(out.generators)
        assert out.order == ideal.order + 1

    def test_declared_order_respected(self):
        with pytest.raises(ValueError):
            IdealGens.of(self.ring, [self.X2], order=1)


class TestKernelCondition:
    def setup_method(self):
        self.ring = JetRing(((Q * X,),), 2)
        self.v0 = JetVar(0, 0, (0,))
        self.v1 = JetVar(0, 0, (1,))
        self.X0, self.X1 = self.ring.var(0, 0, 0), self.ring.var(0, 0, 1)

    def test_point_of_prolongation(self):
        lower = IdealGens.of(self.ring, [self.X0 - X])
        upper = prolong_ideal(lower)
        assert kernel_condition_check(lower, upper, {self.v0: X, self.v1: X})

    def test_point_of_smaller_ideal(self):
        lower = IdealGens.of(self.ring, [self.X0 - X])
        upper = IdealGens.of(self.ring, [self.X0 - X], order=1)
        assert not kernel_condition_check(lower, upper, {self.v0: X, self.v1: ONE})

    def test_trivial(self):
        zero = IdealGens.of(self.ring, [])
        assert kernel_condition_check(zero, zero, {self.v0: X})

    def test_invalid_point(self):
        lower = IdealGens.of(self.ring, [self.X0 - X])
        upper = prolong_ideal(lower)
        with pytest.raises(PointError):
            kernel_condition_check(lower, upper, {self.v0: X, self.v1: ONE})

    def test_invdet_filled_in(self):
        D = self.ring.invdet()
        upper = IdealGens.of(self.ring, [D * self.X0 - 1])
        # d(D X - 1) = D X1 (1 - D X) vanishes wherever D X = 1
        assert kernel_condition_check(upper, prolong_ideal(upper), {self.v0: X + 1, self.v1: X})
        assert str(INVDET) == "D"
