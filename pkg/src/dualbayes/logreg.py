"""Multinomial logistic regression and its exact conversion to and from
the discriminative Naive Bayes parameterization.

Converting in either direction preserves posteriors pointwise.  Collapsing
a discriminative model is canonical: the weights are the per-position
slopes and each bias absorbs the prior exponent plus the summed
intercepts.  The expansion is under-determined, so :func:`lr_to_nb` fixes
the free choices explicitly: the caller picks the prior (uniform by
default) and the leftover bias is split evenly across positions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DimensionMismatch,
    LabelSpace,
    ProbabilityVector,
    ZeroPrior,
    logsumexp_last,
    normalize_log,
)
from .naive_bayes import DiscriminativeNBModel


@dataclass(frozen=True, eq=False)
class LogisticRegressionModel:
    """Softmax-linear classifier: posterior = softmax(weights @ y + biases)."""

    labels: LabelSpace
    weights: np.ndarray
    biases: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        biases = np.array(self.biases, dtype=float)
        if weights.ndim != 2 or weights.shape[0] != self.labels.n or weights.shape[1] < 1:
            raise ValueError(f"weights must have shape (n_labels, T), got {weights.shape}")
        if biases.shape != (self.labels.n,):
            raise ValueError(f"biases must have shape ({self.labels.n},), got {biases.shape}")
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(biases))):
            raise ValueError("parameters must be finite")
        weights.flags.writeable = False
        biases.flags.writeable = False
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "biases", biases)

    @property
    def n_positions(self) -> int:
        return self.weights.shape[1]


def lr_posterior(model: LogisticRegressionModel, observation) -> ProbabilityVector:
    """Softmax posterior at one observation.

    Every entry is strictly positive as long as the logit spread stays
    within double-precision exponent range.
    """
    y = np.asarray(observation, dtype=float)
    if y.ndim != 1 or y.size != model.n_positions:
        raise DimensionMismatch(
            f"observation must have {model.n_positions} coordinates, got shape {y.shape}"
        )
    if not np.all(np.isfinite(y)):
        raise ValueError("observation coordinates must be finite")
    return normalize_log(model.weights @ y + model.biases)


def lr_log_posterior_batch(model: LogisticRegressionModel, observations) -> np.ndarray:
    """Log posterior matrix for a batch of observations, shape ``(S, N)``."""
    obs = np.asarray(observations, dtype=float)
    if obs.ndim != 2 or obs.shape[1] != model.n_positions:
        raise DimensionMismatch(
            f"observations must have shape (S, {model.n_positions}), got {obs.shape}"
        )
    if not np.all(np.isfinite(obs)):
        raise ValueError("observation coordinates must be finite")
    logits = obs @ model.weights.T + model.biases[None, :]
    return logits - logsumexp_last(logits)


def nb_to_lr(model: DiscriminativeNBModel) -> LogisticRegressionModel:
    """Collapse a discriminative Naive Bayes into one softmax-linear layer.

    ``weights[i] = slopes[i]`` and
    ``biases[i] = (1 - T) * log(prior[i]) + sum_t intercepts[i, t]``;
    posteriors are preserved pointwise.
    """
    t_len = model.n_positions
    biases = (1.0 - t_len) * np.log(model.prior.entries) + model.intercepts.sum(axis=1)
    return LogisticRegressionModel(model.labels, model.slopes, biases)


def lr_to_nb(model: LogisticRegressionModel, prior=None) -> DiscriminativeNBModel:
    """Expand a logistic regression into a discriminative Naive Bayes.

    Any strictly positive prior yields the same posteriors; the default is
    uniform.  Slopes copy the weights, and each position receives an even
    share of the residual bias:
    ``intercepts[i, t] = (biases[i] - (1 - T) * log(prior[i])) / T``.
    """
    if prior is None:
        prior = ProbabilityVector.uniform(model.labels.n)
    elif not isinstance(prior, ProbabilityVector):
        prior = ProbabilityVector(prior)
    if np.any(prior.entries == 0.0):
        raise ZeroPrior("prior must be strictly positive")
    t_len = model.n_positions
    residual = model.biases - (1.0 - t_len) * np.log(prior.entries)
    intercepts = np.repeat((residual / t_len)[:, None], t_len, axis=1)
    return DiscriminativeNBModel(model.labels, prior, model.weights, intercepts)
