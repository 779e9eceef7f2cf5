import numpy as np
import pytest

from hypaff.errors import (
    CertificationError,
    EmptyRegionError,
    ParameterError,
    ValidationError,
)
from hypaff.transversality import (
    Q_N,
    SeriesSpec,
    TransversalityCert,
    compute_delta,
    corollary_interval_bound,
    eval_f_n,
    eval_h_n,
    eval_h_n_vec,
    random_series,
    region_grid,
    verify_implication,
)


class TestFn:
    def test_direct_values(self):
        assert abs(eval_f_n(2, 0.4) - 0.6 / 0.272) < 1e-12
        assert abs(eval_f_n(3, 0.55) - 1.2261998) < 1e-6

    def test_blows_up_at_zero(self):
        xs = np.geomspace(1e-8, 1e-2, 20)
        vals = [eval_f_n(3, float(x)) for x in xs]
        assert vals[0] > 1e7
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_domain_error(self):
        with pytest.raises(ParameterError):
            eval_f_n(2, 0.9)  # denominator negative
        with pytest.raises(ParameterError):
            eval_f_n(5, 0.4)
        with pytest.raises(ParameterError):
            eval_f_n(2, -0.1)


class TestHn:
    def test_tends_to_one_at_zero(self):
        for n in (2, 3, 4):
            value, _ = eval_h_n(n, 3.0, 1e-12)
            assert abs(value - 1.0) < 1e-10

    def test_zero_exactly_where_c_equals_f(self):
        c = eval_f_n(2, 0.4)
        value, _ = eval_h_n(2, c, 0.4)
        assert abs(value) < 1e-12

    def test_derivative_matches_finite_differences(self):
        step = 1e-6
        xs = np.linspace(0.01, 0.6, 1000)
        for n in (2, 3, 4):
            _, dh = eval_h_n_vec(n, 1.5, xs)
            up, _ = eval_h_n_vec(n, 1.5, xs + step)
            dn, _ = eval_h_n_vec(n, 1.5, xs - step)
            fd = (up - dn) / (2 * step)
            assert np.abs(fd - dh).max() < 1e-6


class TestComputeDelta:
    def test_positive_for_unit_bound(self):
        for n in (2, 3, 4):
            cert = compute_delta(n, 1.0, 1e-4)
            assert cert.delta > 0
            assert cert.Q_n == Q_N[n]

    def test_region_edge_for_n3(self):
        cert = compute_delta(3, 1.0, 1e-4)
        assert abs(cert.region[1] - (0.61 - 1e-4)) < 1e-12

    def test_certificate_invariant_on_grid(self):
        for n, c in [(2, 1.0), (3, 1.0), (3, 1.1), (4, 1.0)]:
            cert = compute_delta(n, c, 1e-4)
            xs = region_grid(n, c, cert.grid_step)
            h, dh = eval_h_n_vec(n, c, xs)
            assert (h >= cert.delta).all()
            assert (dh <= -cert.delta).all()

    def test_huge_bound_fails(self):
        with pytest.raises((EmptyRegionError, CertificationError)):
            compute_delta(4, 1e6, 1e-4)

    def test_c_below_one_rejected(self):
        with pytest.raises(ParameterError):
            compute_delta(3, 0.5, 1e-4)

    def test_coarse_grid_rejected(self):
        with pytest.raises(ParameterError):
            compute_delta(3, 1.0, 1e-3)

    def test_unit_bound_dominates_large_bounds(self):
        # the certified delta at C=1 beats any C >= 2 certificate; the
        # narrow region makes large-C deltas collapse toward zero.
        # (delta is NOT locally monotone in C: the h- and -h'-branches of
        # the minimum cross, so only well-separated C's compare robustly.)
        for n in (2, 3):
            base = compute_delta(n, 1.0, 1e-4).delta
            for c in (2.0, 5.0, 10.0):
                try:
                    other = compute_delta(n, c, 1e-4).delta
                except CertificationError:
                    continue
                assert other <= base

    def test_pointwise_monotonicity_in_c(self):
        # the genuinely monotone facts: h decreases pointwise in C and the
        # admissible region shrinks
        xs = region_grid(3, 2.0, 1e-4)
        h_small, _ = eval_h_n_vec(3, 1.0, xs)
        h_large, _ = eval_h_n_vec(3, 2.0, xs)
        assert (h_small >= h_large).all()
        assert region_grid(3, 2.0, 1e-4).size < region_grid(3, 1.0, 1e-4).size


class TestSeries:
    def test_validation(self):
        with pytest.raises(ParameterError):
            SeriesSpec((0.5,), C=0.5)
        with pytest.raises(ValidationError):
            SeriesSpec((2.0,), C=1.0)
        with pytest.raises(ValidationError):
            SeriesSpec((), C=1.0)

    def test_termwise_derivative_matches_finite_differences(self):
        rng = np.random.default_rng(0)
        xs = np.linspace(0.05, 0.6, 7)
        step = 1e-6
        for _ in range(200):
            s = random_series(rng, 150, 1.0)
            g, dg = s.evaluate(xs)
            gp, _ = s.evaluate(xs + step)
            gm, _ = s.evaluate(xs - step)
            fd = (gp - gm) / (2 * step)
            tol = 1e-6 + s.tail_bound(xs + step)
            assert (np.abs(fd - dg) < tol).all()

    def test_tail_bound_is_true_bound(self):
        rng = np.random.default_rng(1)
        xs = np.linspace(0.05, 0.65, 9)
        for _ in range(100):
            full = random_series(rng, 400, 1.0)
            short = SeriesSpec(full.coeffs[:60], 1.0)
            g_full, _ = full.evaluate(xs)
            g_short, _ = short.evaluate(xs)
            assert (np.abs(g_full - g_short) <=
                    short.tail_bound(xs) + 1e-15).all()


class TestImplication:
    def test_extreme_negative_series(self):
        cert = compute_delta(3, 1.0, 1e-4)
        s = SeriesSpec((-1.0,) * 200, 1.0)
        assert verify_implication(cert, s, samples=500).ok

    def test_all_zero_series_vacuous(self):
        cert = compute_delta(3, 1.0, 1e-4)
        s = SeriesSpec((0.0,) * 200, 1.0)
        assert verify_implication(cert, s, samples=500).ok

    def test_random_series_have_no_counterexamples(self):
        cert = compute_delta(3, 1.0, 1e-4)
        rng = np.random.default_rng(2)
        for _ in range(500):
            s = random_series(rng, 200, 1.0)
            assert verify_implication(cert, s, samples=64).ok

    def test_series_bound_must_fit_certificate(self):
        cert = compute_delta(3, 1.0, 1e-4)
        with pytest.raises(ValidationError):
            verify_implication(cert, SeriesSpec((1.5,), 1.5), samples=8)


class TestCorollaryBound:
    def test_arithmetic_example(self):
        cert = TransversalityCert(n=3, C=1.0, Q_n=0.61, delta=0.1,
                                  grid_step=1e-4, region=(1e-4, 0.6099))
        assert abs(corollary_interval_bound(cert, 0.5, 1, 1e-3) - 0.04) < 1e-15

    def test_monotonicity(self):
        cert = compute_delta(3, 1.0, 1e-4)
        b = corollary_interval_bound
        assert b(cert, 0.3, 3, 1e-3) < b(cert, 0.3, 3, 2e-3)
        assert b(cert, 0.4, 3, 1e-3) < b(cert, 0.3, 3, 1e-3)

    def test_preconditions(self):
        cert = compute_delta(3, 1.0, 1e-4)
        with pytest.raises(ParameterError):
            corollary_interval_bound(cert, 0.7, 1, 1e-3)
        with pytest.raises(ParameterError):
            corollary_interval_bound(cert, 0.3, 0, 1e-3)
        with pytest.raises(ParameterError):
            corollary_interval_bound(cert, 0.3, 1, -1.0)

    def test_grid_measure_never_exceeds_bound(self):
        # measured length of {q : C < f_n(q), |q^l + sum s_k q^k| < r}
        cert = compute_delta(3, 1.0, 1e-4)
        rng = np.random.default_rng(3)
        q0, l, r = 0.3, 3, 1e-3
        bound = corollary_interval_bound(cert, q0, l, r)
        step = 1e-5
        qs = np.arange(q0 + step, Q_N[3], step)
        f_ok = 1.0 < (1.0 - qs) / (qs - 2.0 * qs**4)
        ks = np.arange(l + 1, 200)
        powmat = qs[:, None] ** ks
        for _ in range(20):
            s_k = rng.uniform(-1, 1, ks.size)
            series_val = qs**l + powmat @ s_k
            hit = f_ok & (np.abs(series_val) < r)
            assert hit.sum() * step <= bound
