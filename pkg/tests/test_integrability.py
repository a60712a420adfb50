import pytest

from qdalg.ellring import EllElem, e_sym, ell, theta_elliptic_part
from qdalg.integrability import (
    DiffSystem,
    IntegrabilityCertificate,
    TripleCertificate,
    _offdiagonal_residuals,
    check_triple,
    default_ansatz,
    diag_example_conditions,
    single_residual,
    solve_single,
    theta_power_log_derivatives,
    triple_residuals,
)
from qdalg.qfield import ONE, ZERO, Q, X
from qdalg.telescope import CONSTANT_TERM, rational_telescope


def scalar(e):
    return ((e,),)


class TestDiffSystem:
    def test_singular(self):
        with pytest.raises(ValueError, match="singular"):
            DiffSystem(((X, ONE), (X, ONE)))

    def test_not_square(self):
        with pytest.raises(ValueError):
            DiffSystem(((X, ONE),))

    def test_det(self):
        assert DiffSystem(((Q, X), (ZERO, X))).det == Q * X


class TestSolveSingle:
    @pytest.mark.parametrize("s", [-2, 0, 1, 3])
    def test_q_power(self, s):
        cert = solve_single(DiffSystem.scalar(Q**s))
        assert cert is not None and cert.B == scalar(EllElem())

    @pytest.mark.parametrize("degbound", [0, 3, 6])
    def test_theta_multiplier_has_no_rational_b(self, degbound):
        assert solve_single(DiffSystem.scalar(Q * X), degbound=degbound) is None

    def test_x_multiplier(self):
        assert solve_single(DiffSystem.scalar(X)) is None
        # the scalar equation is b(qx) - b(x) = 1, which the telescoper rejects
        assert rational_telescope(ONE).obstruction == CONSTANT_TERM

    def test_ell_allowed(self):
        cert = solve_single(DiffSystem.scalar(Q * X), ell_degree=1)
        assert cert is not None and cert.B == scalar(ell())

    def test_partial2(self):
        cert = solve_single(DiffSystem.scalar(Q * X), "partial2")
        assert cert.B == scalar((ell() ** 2 + ell()) / 2)
        cert = solve_single(DiffSystem.scalar(Q**3), "partial2")
        assert cert.B == scalar(ell() * 3)

    def test_recovers_gauge_solution(self):
        g = (X - 2) / (Q * X + 3)
        a = Q**2 * g.sigma_q() / g
        cert = solve_single(DiffSystem.scalar(a))
        assert cert is not None
        b = cert.B[0][0] - EllElem.const(g.delta_x() / g)
        assert b.is_constant()

    def test_recovers_matrix_gauge(self):
        # A = sigma(G) G^-1 with G = [[1, x], [0, 1]] and B = delta_x(G) G^-1
        A = ((ONE, (Q - 1) * X), (ZERO, ONE))
        cert = solve_single(DiffSystem(A))
        assert cert is not None and cert.verify()

    def test_unknown_derivation(self):
        with pytest.raises(ValueError):
            solve_single(DiffSystem.scalar(Q), "delta_q")

    def test_bad_ansatz(self):
        with pytest.raises(ValueError):
            solve_single(DiffSystem.scalar(Q), denom=ZERO)
        with pytest.raises(ValueError):
            solve_single(DiffSystem.scalar(Q), degbound=-1)

    def test_certificate_rejects_wrong_b(self):
        with pytest.raises(ArithmeticError):
            IntegrabilityCertificate(DiffSystem.scalar(Q * X), "delta_x", scalar(EllElem()), ONE, 0, 0)

    def test_default_ansatz_includes_orbit(self):
        denom, deg = default_ansatz(DiffSystem.scalar((X - Q) / (X - 1)))
        assert denom.subs_x(ONE) == ZERO and denom.subs_x(Q) == ZERO
        assert deg >= denom.degree() + 1


class TestTriple:
    def test_q_power(self):
        s = 2
        assert check_triple(scalar(Q**s), scalar(EllElem.const(s)), scalar(ell() * s))

    def test_spec_suggested_pair_fails(self):
        assert not check_triple(scalar(Q**2), scalar(EllElem()), scalar(EllElem.const(2)))

    @pytest.mark.parametrize("r, s", [(1, 1), (2, 3), (-1, 0)])
    def test_theta_power_solution(self, r, s):
        b1, b2 = theta_power_log_derivatives(r, s)
        assert b1 == ell() * r + (s - r)
        assert check_triple(scalar(Q**s * X**r), scalar(b1), scalar(b2))

    def test_first_equation_for_theta(self):
        b1, _ = theta_power_log_derivatives(1, 1)
        assert b1 == ell()
        r1, _, _ = triple_residuals(scalar(Q * X), scalar(b1), scalar(EllElem()))
        assert r1 == scalar(EllElem())

    def test_wrong_b2(self):
        b1, b2 = theta_power_log_derivatives(1, 1)
        assert not check_triple(scalar(Q * X), scalar(b1), scalar(b2 + ell()))
        with pytest.raises(ArithmeticError):
            TripleCertificate(scalar(Q * X), scalar(b1), scalar(b2 + ell()))

    def test_single_residual_multiplied_through(self):
        res = single_residual(scalar(Q * X), scalar(ell()), "delta_x")
        assert res == scalar(EllElem())


class TestDiagExample:
    def test_zero_eta(self):
        rep = diag_example_conditions(Q * X, ZERO)
        assert rep.solvable and rep.alpha == EllElem() and rep.beta == EllElem()
        assert all(b.holds for b in rep.conditions)

    def test_eta_equals_lambda(self):
        rep = diag_example_conditions(Q * X, Q * X)
        assert rep.solvable
        assert rep.alpha == EllElem() and rep.beta == EllElem()

    def test_constant_lambda(self):
        rep = diag_example_conditions(Q, ONE)
        assert not rep.solvable

    def test_first_condition_forces_invariant_alpha(self):
        first_ok, *_ = _offdiagonal_residuals(Q, 0, ONE, e_sym(0), EllElem())
        first_bad, *_ = _offdiagonal_residuals(Q, 0, ONE, ell(), EllElem())
        assert first_ok == EllElem()
        assert first_bad != EllElem()

    def test_sign_discrepancy_reported(self):
        rep = diag_example_conditions(X, X**2)
        assert rep.solvable
        assert rep.alpha == EllElem.const(X / (Q - 1))
        assert rep.plus_sign_variant_holds is False
        assert rep.notes

    def test_mu_must_be_q_power(self):
        with pytest.raises(ValueError):
            diag_example_conditions((Q + 1) * X, ONE)
        with pytest.raises(ValueError):
            diag_example_conditions(X + 1, ONE)

    def test_elliptic_symbol_enters_b2(self):
        _, b2 = theta_power_log_derivatives(1, 1)
        assert theta_elliptic_part().variables() <= b2.variables()
