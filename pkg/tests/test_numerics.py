"""Tests for the Gaussian tail primitives and the bisection root finder."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import ndtri

from urllc_admission.numerics import BracketError, bisect_monotone, q_function, q_inverse

# Frozen oracle: mpmath quadrature of the tail integral at 40 digits.
Q_AT_3 = 1.3498980316300945e-3


class TestQFunction:
    def test_median(self):
        assert q_function(0.0) == 0.5

    def test_tail_value_matches_frozen_quadrature(self):
        assert q_function(3.0) == pytest.approx(Q_AT_3, rel=1e-12)

    def test_tail_value_matches_live_quadrature(self):
        # Independent oracle: adaptive quadrature of the density itself.
        density = lambda t: math.exp(-t * t / 2.0) / math.sqrt(2.0 * math.pi)
        for x in (0.5, 1.0, 2.0, 3.0, 5.0, 8.0):
            expected, err = integrate.quad(density, x, math.inf, epsabs=0.0, epsrel=1e-13)
            assert err < 1e-12 * expected
            assert q_function(x) == pytest.approx(expected, rel=1e-12)

    def test_strictly_decreasing(self):
        grid = [-8.0 + 0.25 * i for i in range(65)]
        values = [q_function(x) for x in grid]
        assert all(b < a for a, b in zip(values, values[1:]))

    @given(st.floats(min_value=-8.0, max_value=8.0))
    def test_tail_symmetry(self, x):
        assert q_function(x) + q_function(-x) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ValueError):
            q_function(bad)


class TestQInverse:
    def test_median(self):
        assert q_inverse(0.5) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize(
        "p,expected",
        [
            # Frozen oracle: scipy.special.ndtri (independent of the bisection).
            (1e-3, 3.090232306167813),
            (1e-5, 4.264890793922825),
        ],
    )
    def test_frozen_quantiles(self, p, expected):
        assert q_inverse(p) == pytest.approx(expected, abs=1e-10)

    @given(st.floats(min_value=1e-12, max_value=1.0 - 1e-12, exclude_max=True))
    def test_matches_ndtri(self, p):
        assert q_inverse(p) == pytest.approx(-ndtri(p), abs=1e-10)

    @given(st.floats(min_value=1e-9, max_value=1.0 - 1e-9))
    def test_round_trip_through_q(self, p):
        assert q_function(q_inverse(p)) == pytest.approx(p, rel=1e-10)

    @given(st.floats(min_value=-6.0, max_value=6.0))
    def test_identity_on_abscissa(self, x):
        assert q_inverse(q_function(x)) == pytest.approx(x, abs=1e-8)

    def test_strictly_decreasing(self):
        probs = [10.0 ** (-7 + 0.5 * i) for i in range(13)]
        values = [q_inverse(p) for p in probs]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.1, math.nan])
    def test_rejects_out_of_domain(self, bad):
        with pytest.raises(ValueError):
            q_inverse(bad)


class TestBisectMonotone:
    def test_linear(self):
        root = bisect_monotone(lambda x: x - 2.0, 0.0, 10.0, tol=1e-9)
        assert root == pytest.approx(2.0, abs=1e-9)

    def test_q_median(self):
        root = bisect_monotone(lambda x: q_function(x) - 0.5, -5.0, 5.0)
        assert root == pytest.approx(0.0, abs=1e-10)

    def test_log_capacity(self):
        root = bisect_monotone(lambda x: math.log2(1.0 + x) - 1.0, 0.0, 10.0)
        assert root == pytest.approx(1.0, abs=1e-10)

    def test_endpoint_roots_returned_exactly(self):
        assert bisect_monotone(lambda x: x, 0.0, 1.0) == 0.0
        assert bisect_monotone(lambda x: x - 1.0, 0.0, 1.0) == 1.0

    def test_no_sign_change_raises(self):
        with pytest.raises(BracketError):
            bisect_monotone(lambda x: x + 5.0, 0.0, 1.0)

    def test_bad_bracket_or_tolerance(self):
        with pytest.raises(ValueError):
            bisect_monotone(lambda x: x, 1.0, 0.0)
        with pytest.raises(ValueError):
            bisect_monotone(lambda x: x, -1.0, 1.0, tol=0.0)

    @given(
        root=st.floats(min_value=-50.0, max_value=50.0),
        slope=st.floats(min_value=1e-3, max_value=1e3),
        cubic=st.floats(min_value=0.0, max_value=10.0),
        margin_lo=st.floats(min_value=0.1, max_value=30.0),
        margin_hi=st.floats(min_value=0.1, max_value=30.0),
        falling=st.booleans(),
    )
    def test_randomized_monotone_functions(self, root, slope, cubic, margin_lo, margin_hi, falling):
        sign = -1.0 if falling else 1.0

        def f(x):
            return sign * (slope * (x - root) + cubic * (x - root) ** 3)

        found = bisect_monotone(f, root - margin_lo, root + margin_hi, tol=1e-9)
        assert found == pytest.approx(root, abs=2e-9)
