import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import E12, EX3, instances, sample_hull
from credal_rml.core import (
    FB,
    ML,
    RML,
    ContingentRML,
    CredalSet,
    Event,
    LikelihoodRatio,
    StateSpace,
    as_prior,
    bayes_update,
    conditional_ce,
    contract,
    default_tol,
    event_prob_bounds,
    hull_reduce,
    likelihood_cut,
    max_likelihood_face,
    meu_value,
    retained_set,
    splice,
    update,
)
from credal_rml.errors import (
    BadAlpha,
    DimensionMismatch,
    EmptyInput,
    InvalidPrior,
    MissingAlpha,
    NotStrictNonnull,
    ZeroLikelihood,
)


class TestCredalSet:
    def test_redundant_points_removed(self):
        C = CredalSet([[1, 0, 0], [0, 1, 0], [0.5, 0.5, 0], [0, 0, 1], [1 / 3, 1 / 3, 1 / 3]])
        assert len(C) == 3

    def test_order_independent(self):
        a = CredalSet(EX3)
        b = CredalSet(EX3[::-1])
        assert a == b
        np.testing.assert_array_equal(a.vertices, b.vertices)

    def test_duplicates_collapse(self):
        assert len(CredalSet([[0.2, 0.8], [0.2, 0.8]])) == 1

    def test_vertices_read_only(self, ex3):
        with pytest.raises(ValueError):
            ex3.vertices[0, 0] = 1.0

    def test_invalid_prior(self):
        with pytest.raises(InvalidPrior):
            CredalSet([[0.6, 0.6, -0.2]])
        with pytest.raises(InvalidPrior):
            as_prior([0.5, 0.4])

    def test_empty(self):
        with pytest.raises(EmptyInput):
            CredalSet([])
        with pytest.raises(EmptyInput):
            hull_reduce([])

    def test_contains(self, ex3):
        assert ex3.contains([0.25, 0.25, 0.5])
        assert not ex3.contains([0.6, 0.2, 0.2])

    def test_not_hashable(self, ex3):
        with pytest.raises(TypeError):
            hash(ex3)

    def test_tol_env(self, monkeypatch):
        monkeypatch.setenv("CREDAL_TOL", "1e-6")
        assert default_tol() == 1e-6
        assert CredalSet(EX3).tol == 1e-6
        monkeypatch.setenv("CREDAL_TOL", "-1")
        with pytest.raises(ValueError):
            default_tol()


class TestStatesEvents:
    def test_state_space(self):
        S = StateSpace(("a", "b", "c"))
        assert S.event(["a", "c"]) == Event(frozenset({0, 2}))
        with pytest.raises(KeyError):
            S.index("z")
        with pytest.raises(ValueError):
            StateSpace(("a", "a"))

    def test_event_mask_dimension(self):
        with pytest.raises(DimensionMismatch):
            Event(frozenset({3})).mask(3)

    def test_splice(self):
        np.testing.assert_array_equal(splice([1, 2, 3], E12, 9), [1, 2, 9])
        F = np.array([[1, 2, 3], [4, 5, 6]])
        np.testing.assert_array_equal(splice(F, E12, np.array([[7], [8]])), [[1, 2, 7], [4, 5, 8]])


class TestExample3:
    def test_bounds(self, ex3):
        lo, hi = event_prob_bounds(ex3, E12)
        assert lo == pytest.approx(0.5) and hi == pytest.approx(2 / 3)

    def test_face(self, ex3):
        np.testing.assert_allclose(max_likelihood_face(ex3, E12).vertices, [[1 / 3, 1 / 3, 1 / 3]])

    def test_ml_posterior(self, ex3):
        np.testing.assert_allclose(update(ex3, E12, ML()).vertices, [[0.5, 0.5, 0.0]])

    def test_contract_half(self, ex3):
        got = contract(ex3, E12, 0.5)
        want = CredalSet([[5 / 12, 1 / 6, 5 / 12], [1 / 6, 5 / 12, 5 / 12], [1 / 3, 1 / 3, 1 / 3]])
        assert got == want

    def test_meu(self, ex3):
        assert meu_value(ex3, [1, 0, 1]) == pytest.approx(0.5)
        assert conditional_ce(ex3, E12, ML(), [1, 0, 0]) == pytest.approx(0.5, abs=1e-12)

    def test_fb_posterior_is_full_edge(self, ex3):
        assert update(ex3, E12, FB()) == CredalSet([[1, 0, 0], [0, 1, 0]])


class TestRules:
    def test_bad_alpha(self):
        with pytest.raises(BadAlpha):
            RML(1.5)
        with pytest.raises(BadAlpha):
            LikelihoodRatio(-0.1)

    def test_contingent(self, ex3):
        rule = ContingentRML({E12: 0.5})
        assert update(ex3, E12, rule) == update(ex3, E12, RML(0.5))
        with pytest.raises(MissingAlpha):
            rule.alpha_for(Event(frozenset({0})))
        with pytest.raises(KeyError):
            update(ex3, [0], rule)

    def test_not_strict_nonnull(self):
        C = CredalSet([[1, 0, 0], [0, 0, 1]])
        with pytest.raises(NotStrictNonnull):
            update(C, [0], FB())
        with pytest.raises(NotStrictNonnull):
            update(C, [0], RML(0.3))
        # ML only needs one prior to give the event positive probability
        np.testing.assert_allclose(update(C, [0], ML()).vertices, [[1, 0, 0]])

    def test_bayes_zero(self):
        with pytest.raises(ZeroLikelihood):
            bayes_update([0, 0, 1], E12)
        np.testing.assert_allclose(bayes_update([0.2, 0.2, 0.6], E12), [0.5, 0.5, 0])

    def test_lr_endpoints(self, ex3):
        assert update(ex3, E12, LikelihoodRatio(0.0)) == update(ex3, E12, FB())
        assert update(ex3, E12, LikelihoodRatio(1.0)) == update(ex3, E12, ML())

    def test_likelihood_cut_vertices(self):
        C = CredalSet([[1, 0], [0, 1]])
        cut = likelihood_cut(C, [0], 0.25)
        assert cut == CredalSet([[1, 0], [0.25, 0.75]])

    def test_retained_lr_keeps_c_below_min(self, ex3):
        assert retained_set(ex3, E12, LikelihoodRatio(0.5)) is ex3

    def test_type_error(self, ex3):
        with pytest.raises(TypeError):
            update(ex3, E12, "FB")

    def test_meu_dimension(self, ex3):
        with pytest.raises(DimensionMismatch):
            meu_value(ex3, [1, 2])


@settings(max_examples=60, deadline=None)
@given(instances(), st.floats(0, 1), st.integers(0, 10**6))
def test_posterior_set_matches_pointwise_bayes(inst, alpha, seed):
    C, e = inst
    rng = np.random.default_rng(seed)
    post = update(C, e, RML(alpha))
    face = max_likelihood_face(C, e)
    # every Bayes update of a point of the contraction is in the posterior set
    qs = sample_hull(face, rng, 8)
    ps = sample_hull(C, rng, 8)
    for q, p in zip(qs, ps):
        assert post.contains(bayes_update(alpha * q + (1 - alpha) * p, e), 1e-8)


@settings(max_examples=60, deadline=None)
@given(instances(), st.integers(0, 10**6))
def test_meu_is_min_over_hull(inst, seed):
    C, _ = inst
    rng = np.random.default_rng(seed)
    f = rng.uniform(-5, 5, C.n_states)
    pts = sample_hull(C, rng, 200)
    assert meu_value(C, f) <= (pts @ f).min() + 1e-12
    assert any(np.isclose(meu_value(C, f), v @ f) for v in C.vertices)


@settings(max_examples=60, deadline=None)
@given(instances(), st.floats(0, 1))
def test_contraction_between_face_and_c(inst, alpha):
    C, e = inst
    Ca = contract(C, e, alpha)
    assert max_likelihood_face(C, e).issubset(Ca, 1e-8)
    assert Ca.issubset(C, 1e-8)


@settings(max_examples=40, deadline=None)
@given(instances(), st.floats(0.01, 1))
def test_likelihood_cut_is_the_cut(inst, lam):
    C, e = inst
    lo, hi = event_prob_bounds(C, e)
    level = lam * hi
    cut = likelihood_cut(C, e, level)
    assert cut.probabilities(e).min() >= level - 1e-9
    assert cut.issubset(C, 1e-8)
    assert cut.probabilities(e).max() == pytest.approx(hi)
