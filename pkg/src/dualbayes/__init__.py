"""Naive Bayes run generatively or discriminatively, exact conversion to
and from multinomial logistic regression, and HMM posterior marginals via
the classic and entropic forward-backward recursions, with built-in
cross-verification of every equivalence."""

from .core import (
    AllZeroWeights,
    DimensionMismatch,
    DivergedLoss,
    DualBayesError,
    EmptyDataset,
    EQUALITY_TOL,
    GRAD_REL_TOL,
    LabelSpace,
    LengthMismatch,
    LogWeightVector,
    MissingPosteriors,
    ObservationAlphabet,
    ProbabilityVector,
    SIMPLEX_TOL,
    StateSpaceTooLarge,
    UnknownSymbol,
    ZeroEvidence,
    ZeroMarginal,
    ZeroPrior,
    logsumexp,
    normalize_log,
)
from .hmm import (
    HmmModel,
    PosteriorMarginals,
    derive_hmm_posteriors,
    entropic_forward_backward,
    forward_backward,
)
from .logreg import (
    LogisticRegressionModel,
    lr_log_posterior_batch,
    lr_posterior,
    lr_to_nb,
    nb_to_lr,
)
from .model_io import (
    dumps_model,
    load_model,
    loads_model,
    model_from_dict,
    model_to_dict,
    save_model,
)
from .naive_bayes import (
    DiscriminativeNBModel,
    NaiveBayesModel,
    SufficientStatistics,
    disc_nb_columns,
    disc_nb_log_posterior_batch,
    disc_nb_posterior,
    nb_discriminative_posterior,
    nb_discriminative_scores,
    nb_fit_mle,
    nb_generative_posterior,
    nb_sufficient_statistics,
    nb_to_discriminative,
)
from .oracle import joint_enumeration_hmm, joint_enumeration_nb
from .train import (
    FD_STEP,
    Gradients,
    TrainConfig,
    TrainReport,
    fit_discriminative,
    gradient,
    loss_cross_entropy,
    parameter_loss,
)
from .verify import SuiteResult, run_all_suites

__version__ = "0.1.0"

__all__ = [
    "AllZeroWeights",
    "DimensionMismatch",
    "DiscriminativeNBModel",
    "DivergedLoss",
    "DualBayesError",
    "EmptyDataset",
    "EQUALITY_TOL",
    "FD_STEP",
    "GRAD_REL_TOL",
    "Gradients",
    "HmmModel",
    "LabelSpace",
    "LengthMismatch",
    "LogWeightVector",
    "LogisticRegressionModel",
    "MissingPosteriors",
    "NaiveBayesModel",
    "ObservationAlphabet",
    "PosteriorMarginals",
    "ProbabilityVector",
    "SIMPLEX_TOL",
    "StateSpaceTooLarge",
    "SufficientStatistics",
    "SuiteResult",
    "TrainConfig",
    "TrainReport",
    "UnknownSymbol",
    "ZeroEvidence",
    "ZeroMarginal",
    "ZeroPrior",
    "derive_hmm_posteriors",
    "disc_nb_columns",
    "disc_nb_log_posterior_batch",
    "disc_nb_posterior",
    "dumps_model",
    "entropic_forward_backward",
    "fit_discriminative",
    "forward_backward",
    "gradient",
    "joint_enumeration_hmm",
    "joint_enumeration_nb",
    "load_model",
    "loads_model",
    "logsumexp",
    "loss_cross_entropy",
    "lr_log_posterior_batch",
    "lr_posterior",
    "lr_to_nb",
    "model_from_dict",
    "model_to_dict",
    "nb_discriminative_posterior",
    "nb_discriminative_scores",
    "nb_fit_mle",
    "nb_generative_posterior",
    "nb_sufficient_statistics",
    "nb_to_discriminative",
    "nb_to_lr",
    "normalize_log",
    "parameter_loss",
    "run_all_suites",
    "save_model",
]
