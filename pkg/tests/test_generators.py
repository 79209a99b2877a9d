import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import qameans as qm
from helpers import catalog

U13 = qm.Interval(1.0, 3.0)
U2PI = qm.Interval(0.0, 2.0 * math.pi)


class TestInterval:
    def test_length(self):
        assert qm.Interval(1.0, 3.5).length() == 2.5

    def test_rejects_empty(self):
        with pytest.raises(qm.ArgumentError):
            qm.Interval(2.0, 2.0)
        with pytest.raises(qm.ArgumentError):
            qm.Interval(3.0, 1.0)

    def test_rejects_non_finite(self):
        with pytest.raises(qm.ArgumentError):
            qm.Interval(0.0, math.inf)

    def test_contains_slack(self):
        iv = qm.Interval(0.0, 1.0)
        assert iv.contains(1.0 + 1e-13)
        assert not iv.contains(1.0 + 1e-9)


class TestEval:
    def test_identity(self):
        assert qm.identity(qm.Interval(0, 5))(3.0) == 3.0

    def test_power_closed_form(self):
        assert qm.power(2, qm.Interval(1, 10))(5.0) == 25.0

    def test_sine_at_zero(self):
        assert qm.sine_perturbed(2, U2PI)(0.0) == 0.0

    def test_affine_wraps(self):
        g = qm.affine(3.0, -1.0, qm.log(U13))
        assert g(2.0) == pytest.approx(3 * math.log(2) - 1, abs=1e-14)

    def test_domain_violation(self):
        with pytest.raises(qm.RangeError):
            qm.power(2, qm.Interval(1, 10))(0.5)

    def test_vectorized(self):
        g = qm.power(2, qm.Interval(1, 10))
        out = g(np.array([1.0, 2.0, 3.0]))
        assert np.allclose(out, [1.0, 4.0, 9.0])


class TestDeriv:
    def test_exp_first(self):
        assert qm.exp(1, qm.Interval(-1, 1)).deriv(0.0, 1) == pytest.approx(1.0, abs=1e-14)

    def test_power_second(self):
        assert qm.power(3, qm.Interval(1, 10)).deriv(2.0, 2) == pytest.approx(12.0, abs=1e-12)

    def test_sine_first_closed_form(self):
        # f'(x) = 1 + cos(nx)/n
        g = qm.sine_perturbed(2, U2PI)
        assert g.deriv(0.0, 1) == pytest.approx(1.5, abs=1e-14)
        fd = qm.finite_difference(lambda t: g(t, check=False), 0.0, 1, U2PI)
        assert g.deriv(0.0, 1) == pytest.approx(fd, rel=1e-5)

    def test_bad_order(self):
        with pytest.raises(qm.ArgumentError):
            qm.identity(U13).deriv(2.0, 3)

    @pytest.mark.parametrize("name", list(catalog(U13)))
    def test_closed_forms_match_finite_differences(self, name):
        gen = catalog(U13)[name]
        xs = np.linspace(U13.lo + 0.05, U13.hi - 0.05, 23)
        for x in xs:
            for order, h in ((1, None), (2, 1e-4)):
                closed = gen.deriv(float(x), order)
                fd = qm.finite_difference(lambda t: gen(t, check=False), float(x),
                                          order, U13, h=h)
                assert closed == pytest.approx(fd, rel=1e-5, abs=1e-5)


class TestInverse:
    def test_sqrt(self):
        assert qm.inverse(qm.power(2, qm.Interval(1, 10)), 25.0) == pytest.approx(5.0, abs=1e-12)

    def test_identity_pi(self):
        assert qm.inverse(qm.identity(qm.Interval(0, 4)), math.pi) == pytest.approx(math.pi, abs=1e-14)

    def test_sine_residual(self):
        g = qm.sine_perturbed(2, U2PI)
        x = qm.inverse(g, 1.0)
        assert abs(g(x) - 1.0) <= 1e-12 * 2.0

    def test_out_of_range(self):
        with pytest.raises(qm.RangeError):
            qm.inverse(qm.power(2, qm.Interval(1, 10)), 101.0)

    def test_slight_overshoot_clamped(self):
        g = qm.identity(qm.Interval(0, 1))
        assert qm.inverse(g, 1.0 + 1e-12) == 1.0

    @pytest.mark.parametrize("name", list(catalog(U13)))
    def test_round_trip_dense_grid(self, name):
        gen = catalog(U13)[name]
        xs = np.linspace(U13.lo, U13.hi, 101)
        for x in xs:
            back = qm.inverse(gen, gen(float(x)))
            assert abs(back - x) <= 1e-9 * (1 + abs(x))

    def test_batch_matches_scalar(self):
        gen = qm.log(U13)
        ys = np.linspace(math.log(1.0), math.log(3.0), 17)
        batch = qm.batch_inverse(gen, ys)
        for y, b in zip(ys, batch):
            assert b == pytest.approx(qm.inverse(gen, float(y)), abs=1e-14)


class TestMonotonicity:
    @pytest.mark.parametrize("name", list(catalog(U13)))
    def test_sorted_grid_stays_sorted(self, name):
        gen = catalog(U13)[name]
        vals = gen(np.linspace(U13.lo, U13.hi, 257))
        diffs = np.diff(vals)
        assert np.all(diffs > 0) or np.all(diffs < 0)

    @given(st.floats(min_value=1.0, max_value=3.0))
    def test_round_trip_property(self, x):
        gen = qm.power(0.5, U13)
        back = qm.inverse(gen, gen(x))
        assert abs(back - x) <= 1e-9 * (1 + abs(x))


class TestConstructionValidation:
    def test_power_zero_rejected(self):
        with pytest.raises(qm.ArgumentError):
            qm.power(0, U13)

    def test_fractional_power_needs_positive_domain(self):
        with pytest.raises(qm.ArgumentError):
            qm.power(0.5, qm.Interval(-1, 1))

    def test_even_power_straddling_zero_rejected(self):
        with pytest.raises(qm.ArgumentError):
            qm.power(2, qm.Interval(-1, 1))

    def test_odd_power_straddling_zero_ok(self):
        qm.power(3, qm.Interval(-1, 1))

    def test_log_needs_positive_domain(self):
        with pytest.raises(qm.ArgumentError):
            qm.log(qm.Interval(0.0, 1.0))

    def test_sine_needs_n_at_least_2(self):
        with pytest.raises(qm.ArgumentError):
            qm.sine_perturbed(1, U2PI)

    def test_exp_zero_rate_rejected(self):
        with pytest.raises(qm.ArgumentError):
            qm.exp(0, U13)

    def test_affine_zero_scale_rejected(self):
        with pytest.raises(qm.ArgumentError):
            qm.affine(0, 1, qm.identity(U13))


class TestParse:
    @pytest.mark.parametrize("spec", [
        "identity", "power:2", "log", "exp:1", "sine:4", "affine:3,-1:log",
        "affine:2,0:power:2",
    ])
    def test_round_trips(self, spec):
        gen = qm.parse_generator(spec, U13)
        again = qm.parse_generator(gen.spec_string(), U13)
        xs = np.linspace(U13.lo, U13.hi, 11)
        assert np.array_equal(gen(xs), again(xs))

    def test_nested_affine(self):
        gen = qm.parse_generator("affine:2,1:affine:3,-1:log", U13)
        assert gen(2.0) == pytest.approx(2 * (3 * math.log(2) - 1) + 1, abs=1e-14)

    @pytest.mark.parametrize("bad", ["", "nope", "power", "power:x", "affine:1:log",
                                     "affine:1,2", "sine:"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(qm.ArgumentError):
            qm.parse_generator(bad, U13)
