"""Bayesian inference of k-th order Markov chains from discrete symbol data:
parameter estimation with full marginal densities, model-order comparison,
and entropy-rate estimation via partition-function derivatives."""

from .comparison import (
    OrderPosterior,
    compare_penalized,
    compare_uniform,
    free_params,
    map_order,
)
from .core import (
    Alphabet,
    CountTable,
    HyperTable,
    SymbolSequence,
    WordIndex,
    count_words,
    decode_word,
    encode_word,
    hyper_from_fake_counts,
    read_sequence,
    uniform_hyper,
    word_string,
)
from .entropy import (
    QDistribution,
    SupportWarning,
    WordConditional,
    asymptotic_energy,
    energy_variance,
    expected_energy,
    hmu_of,
    kl_of,
    neg_log_partition,
    q_from,
    r_from,
    uniform_distribution,
    weighted_energy,
)
from .inference import (
    DirichletPosterior,
    confidence_region,
    log_evidence,
    log_predictive,
    marginal,
    posterior,
    posterior_mean,
    posterior_variance,
    prior_moments,
    sample_posterior,
)
from .processes import (
    SNS_ENTROPY_RATE,
    LabeledHMM,
    average_counts,
    even_process,
    golden_mean,
    load_hmm,
    markov_approximation,
    sample_sequence,
    sns,
    stationary,
    true_entropy_rate,
    word_distribution,
    word_probability,
)
from .special import (
    BetaParams,
    digamma,
    inv_reg_inc_beta,
    log_gamma,
    reg_inc_beta,
    trigamma,
)

__version__ = "0.1.0"
