"""Relative maximum likelihood updating of credal sets under maxmin expected utility."""

from credal_rml.axioms import (
    AXIOMS,
    ActSampler,
    AxiomReport,
    check_axiom,
    construct_dc_cs_pair,
    construct_ec_pair,
    rml_vs_lr_divergence,
)
from credal_rml.core import (
    FB,
    ML,
    RML,
    ContingentRML,
    CredalSet,
    Event,
    LikelihoodRatio,
    StateSpace,
    bayes_update,
    conditional_ce,
    contract,
    event_prob_bounds,
    hull_reduce,
    max_likelihood_face,
    meu_value,
    splice,
    update,
)
from credal_rml.errors import CredalError
from credal_rml.persuasion import (
    AmbiguousDevice,
    PersuasionGame,
    bayesian_optimum,
    bll_device,
    bll_example_game,
    receiver_response,
    sender_value,
)
from credal_rml.refinement import (
    AlphaEstimate,
    ThresholdResult,
    alpha_from_preference,
    mix_threshold,
    shrink_threshold,
    sufficiently_good_threshold,
)
from credal_rml.signals import SignalModel, build_signal_credal, posterior_interval, table1_row

__version__ = "0.1.0"
