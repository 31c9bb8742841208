import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credal_rml.core import FB, ML, ContingentRML
from credal_rml.errors import BadModel, NotStrictNonnull
from credal_rml.signals import (
    SIGNAL_EVENTS,
    SignalModel,
    benchmark_posterior,
    build_signal_credal,
    posterior_interval,
    table1_case,
    table1_row,
    table1_rows,
)

M = SignalModel(0.6, 0.8, 0.6)


class TestModel:
    def test_vertex_cell(self):
        _, C = build_signal_credal(M)
        assert any(v[0] == pytest.approx(0.48) for v in C.vertices)

    def test_marginal(self):
        _, C = build_signal_credal(M)
        np.testing.assert_allclose(C.vertices[:, [0, 2]].sum(axis=1), 0.6)

    def test_equal_accuracies_singleton(self):
        _, C = build_signal_credal(SignalModel(0.3, 0.7, 0.7))
        assert len(C) == 1

    def test_mixtures_in_hull(self):
        _, C = build_signal_credal(M)
        for mu in np.linspace(0, 1, 11):
            assert C.contains(M.joint(mu))

    @pytest.mark.parametrize("args", [(1.2, 0.8, 0.6), (0.5, 0.6, 0.8), (0.5, 0.4, 0.3)])
    def test_bad_model(self, args):
        with pytest.raises(BadModel):
            SignalModel(*args)

    def test_zero_likelihood_signal(self):
        # beta = 1 with a perfect device: s2 only ever follows theta2
        with pytest.raises(NotStrictNonnull):
            posterior_interval(SignalModel(1.0, 1.0, 1.0), 0.5, "s2")


class TestInterval:
    def test_example(self):
        lo, hi = posterior_interval(M, 0.5, "s1")
        assert lo == pytest.approx(7 / 9, abs=1e-12)
        assert hi == pytest.approx(6 / 7, abs=1e-12)

    def test_ml_point(self):
        lo, hi = posterior_interval(M, 1.0, "s1")
        assert lo == pytest.approx(hi)

    def test_fb_interval(self):
        assert posterior_interval(M, 0.0, "s1") == pytest.approx(posterior_interval(M, FB(), "s1"))
        lo, hi = posterior_interval(M, 0.0, "s1")
        assert (lo, hi) == pytest.approx((M.posterior_theta1(0, "s1"), M.posterior_theta1(1, "s1")))

    def test_half_beta_alpha_free(self):
        m = SignalModel(0.5, 0.9, 0.4)
        first = posterior_interval(m, 0.0, "s1")
        for a in (0.3, 0.7, 1.0):
            assert posterior_interval(m, a, "s1") == pytest.approx(first)


class TestTable1:
    def test_equal_at_half(self):
        r = table1_row(M, 0.5, "s1")
        assert (r.ml_prior, r.comparison) == ("mu=1", "equal")
        assert r.eval_f == pytest.approx(7 / 9)

    def test_lower_below_half(self):
        assert table1_row(M, 0.2, "s1").comparison == "lower"

    def test_low_beta(self):
        m = SignalModel(0.4, 0.8, 0.6)
        for a in (0.0, 0.5, 1.0):
            r = table1_row(m, a, "s1")
            assert r.ml_prior == "mu=0" and r.comparison == "lower"
            assert r.eval_f == pytest.approx(m.posterior_theta1(0.0, "s1"))

    def test_benchmark_is_pi_half(self):
        assert benchmark_posterior(M, "s1") == pytest.approx(M.posterior_theta1(0.5, "s1"))

    def test_contingent_pattern(self):
        rule = ContingentRML({SIGNAL_EVENTS["s1"]: 0.3, SIGNAL_EVENTS["s2"]: 0.7})
        lo1, _ = posterior_interval(M, rule, "s1")
        lo2, _ = posterior_interval(M, rule, "s2")
        assert lo1 < benchmark_posterior(M, "s1")
        assert lo2 > benchmark_posterior(M, "s2")

    def test_rows_case_order(self):
        rows = table1_rows([0.5, 0.4, 0.6], 0.8, 0.6, [0.5])
        assert [(r.beta, r.signal) for r in rows] == [
            (0.6, "s1"), (0.6, "s2"), (0.4, "s1"), (0.4, "s2"), (0.5, "s1"), (0.5, "s2")
        ]


models = st.tuples(
    st.sampled_from([0.2, 0.4, 0.5, 0.6, 0.8]), st.floats(0.55, 0.95), st.floats(0.3, 0.9)
).filter(lambda t: t[1] > t[2] + 0.01 and t[1] + t[2] >= 1)


@settings(max_examples=80, deadline=None)
@given(models, st.floats(0, 1), st.sampled_from(["s1", "s2"]))
def test_row_matches_case_analysis(params, alpha, signal):
    m = SignalModel(*params)
    r = table1_row(m, alpha, signal)
    ml, val, comp = table1_case(m, alpha, signal)
    assert r.ml_prior == ml
    assert r.eval_f == pytest.approx(val, abs=1e-9)
    if abs(alpha - 0.5) > 1e-6:
        assert r.comparison == comp


@settings(max_examples=60, deadline=None)
@given(models, st.sampled_from(["s1", "s2"]))
def test_eval_monotone_and_grid_oracle(params, signal):
    m = SignalModel(*params)
    vals = [table1_row(m, a, signal).eval_f for a in np.linspace(0, 1, 11)]
    assert np.all(np.diff(vals) >= -1e-12)
    # brute force: lowest posterior over mu among ML-retained priors at alpha = 0
    mus = np.linspace(0, 1, 2001)
    assert vals[0] == pytest.approx(m.posterior_theta1(mus, signal).min(), abs=1e-9)
    ml_val = posterior_interval(m, ML(), signal)[0]
    assert vals[-1] == pytest.approx(ml_val, abs=1e-12)
