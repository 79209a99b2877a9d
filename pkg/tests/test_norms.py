import math

import numpy as np
import pytest

import qameans as qm
from helpers import catalog

U13 = qm.Interval(1.0, 3.0)
U2PI = qm.Interval(0.0, 2.0 * math.pi)


class TestL1:
    def test_zero_function(self):
        est = qm.l1_norm(lambda x: np.zeros_like(x), U13)
        assert est.value == 0.0

    def test_abs_sin_full_period(self):
        # each half-period contributes 2
        est = qm.l1_norm(np.sin, U2PI)
        assert est.value == pytest.approx(4.0, abs=1e-9)

    @pytest.mark.parametrize("n", [2, 5, 16])
    def test_sine_perturbed_ratio_closed_form(self, n):
        gen = qm.sine_perturbed(n, U2PI)
        est = qm.l1_norm(lambda x: gen.arrow_pratt(x, check=False), U2PI)
        expected = 2 * n * math.log((n + 1) / (n - 1))
        assert est.value == pytest.approx(expected, rel=1e-6)

    def test_sign_flip_invariant(self):
        a = qm.l1_norm(np.sin, U2PI).value
        b = qm.l1_norm(lambda x: -np.sin(x), U2PI).value
        assert a == b

    def test_non_finite_rejected(self):
        with pytest.raises(qm.EvaluationError):
            qm.l1_norm(lambda x: 1.0 / (x - 2.0), U13)


class TestSup:
    def test_constant(self):
        est = qm.sup_norm(lambda x: np.full_like(x, -0.7), U13)
        assert est.value == pytest.approx(0.7, abs=1e-14)

    def test_sine_perturbed_deviation(self):
        gen = qm.sine_perturbed(2, U2PI)
        est = qm.sup_norm(lambda x: gen(x, check=False) - x, U2PI)
        assert est.value == pytest.approx(0.25, abs=1e-10)

    def test_sin_half_period(self):
        est = qm.sup_norm(np.sin, qm.Interval(0.0, math.pi))
        assert est.value == pytest.approx(1.0, abs=1e-12)


class TestInfAbsDeriv:
    def test_identity(self):
        assert qm.inf_abs_deriv(qm.identity(U13), U13).value == 1.0

    @pytest.mark.parametrize("n", [2, 3, 8])
    def test_sine_perturbed(self, n):
        gen = qm.sine_perturbed(n, U2PI)
        assert qm.inf_abs_deriv(gen, U2PI).value == pytest.approx(1 - 1 / n, abs=1e-10)

    def test_exp_at_left_endpoint(self):
        gen = qm.exp(1, qm.Interval(0, 1))
        assert qm.inf_abs_deriv(gen, qm.Interval(0, 1)).value == pytest.approx(1.0, abs=1e-12)

    def test_subinterval(self):
        gen = qm.power(2, qm.Interval(0.5, 4))
        assert qm.inf_abs_deriv(gen, qm.Interval(1, 2)).value == pytest.approx(2.0, abs=1e-10)


class TestOsc:
    def test_zero_function(self):
        assert qm.osc_norm(lambda x: np.zeros_like(x), U13).value == 0.0

    def test_sin_full_period(self):
        # antiderivative 1-cos has range 2
        est = qm.osc_norm(np.sin, U2PI)
        assert est.value == pytest.approx(2.0, abs=1e-10)

    @pytest.mark.parametrize("n", [2, 7, 16])
    def test_sine_perturbed_ratio_closed_form(self, n):
        gen = qm.sine_perturbed(n, U2PI)
        est = qm.osc_norm(lambda x: gen.arrow_pratt(x, check=False), U2PI)
        assert est.value == pytest.approx(math.log((n + 1) / (n - 1)), abs=1e-8)

    def test_sign_flip_invariant(self):
        a = qm.osc_norm(np.sin, U2PI).value
        b = qm.osc_norm(lambda x: -np.sin(x), U2PI).value
        assert a == pytest.approx(b, abs=1e-12)

    def test_nonnegative_h_equals_l1(self):
        h = lambda x: np.cos(x) ** 2
        osc = qm.osc_norm(h, U13).value
        l1 = qm.l1_norm(h, U13).value
        assert osc == pytest.approx(l1, abs=1e-9)

    @pytest.mark.parametrize("name", list(catalog(U13)))
    def test_never_exceeds_l1(self, name):
        gen = catalog(U13)[name]
        h = lambda x: gen.arrow_pratt(x, check=False)
        assert qm.osc_norm(h, U13).value <= qm.l1_norm(h, U13).value + 1e-8


class TestSupBDiff:
    def test_equal_generators(self):
        f = qm.log(U13)
        est = qm.sup_b_diff(f, f, 0.5, U13)
        assert est.value == 0.0

    def test_affine_wrap_gives_zero(self):
        f = qm.power(2, U13)
        g = qm.affine(-3.0, 1.0, qm.power(2, U13))
        est = qm.sup_b_diff(f, g, 0.5, U13)
        assert est.value <= 1e-12

    def test_against_brute_force_oracle(self):
        U = qm.Interval(1, 2)
        f = qm.identity(U)
        g = qm.power(2, U)
        alpha = 0.5
        est = qm.sup_b_diff(f, g, alpha, U)
        oracle, _ = qm.b_diff_grid_max(f, g, alpha, U, 201)
        assert est.value == pytest.approx(oracle, rel=0.02)

    def test_monotone_in_alpha(self):
        f = qm.identity(U13)
        g = qm.exp(1, U13)
        alphas = [0.2, 0.5, 1.0, 1.5]
        ests = [qm.sup_b_diff(f, g, a, U13) for a in alphas]
        for lo_est, hi_est in zip(ests, ests[1:]):
            slack = lo_est.refinement_error + hi_est.refinement_error + 1e-12
            assert hi_est.value <= lo_est.value + slack

    def test_alpha_above_length_rejected(self):
        f = qm.identity(U13)
        with pytest.raises(qm.ArgumentError):
            qm.sup_b_diff(f, f, 2.5, U13)

    def test_nonpositive_alpha_rejected(self):
        f = qm.identity(U13)
        with pytest.raises(qm.ArgumentError):
            qm.sup_b_diff(f, f, 0.0, U13)

    def test_symmetric_in_generators(self):
        f = qm.log(U13)
        g = qm.power(2, U13)
        a = qm.sup_b_diff(f, g, 0.7, U13)
        b = qm.sup_b_diff(g, f, 0.7, U13)
        assert a.value == b.value


class TestRefinementContract:
    @pytest.mark.parametrize("make", [
        lambda: qm.l1_norm(np.sin, U2PI),
        lambda: qm.osc_norm(np.sin, U2PI),
        lambda: qm.sup_norm(np.sin, U2PI),
        lambda: qm.inf_abs_deriv(qm.sine_perturbed(3, U2PI), U2PI),
        lambda: qm.sup_b_diff(qm.identity(U13), qm.log(U13), 0.5, U13),
    ])
    def test_refinement_error_small(self, make):
        est = make()
        assert est.refinement_error >= 0
        assert est.refinement_error < 1e-2 * (1 + est.value)

    def test_to_dict_round_trip(self):
        est = qm.l1_norm(np.sin, U2PI)
        d = est.to_dict()
        assert d["kind"] == "L1" and d["value"] == est.value
        assert isinstance(d["value"], float)
