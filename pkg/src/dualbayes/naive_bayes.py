"""Naive Bayes in its two parameterizations.

The classifier assumes the observation positions are independent given the
label.  The same model then supports two inference routes:

* the *generative* route multiplies the prior by the per-position emission
  probabilities of the observed symbols and renormalizes;
* the *discriminative* route never touches the emission law: it consumes
  one posterior column per position, ``L[t][i] = p(label i | symbol at t)``,
  and combines them with the prior as ``prior^(1-T) * prod_t L[t]`` before
  renormalizing.

The two routes agree exactly whenever the posterior columns are the Bayes
inversion of the same prior and emissions, which :func:`nb_to_discriminative`
produces.  :class:`DiscriminativeNBModel` extends the discriminative route
to real-valued observations by modelling every column as a softmax of an
affine score per label, which is what makes gradient training and the
logistic-regression conversion possible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DimensionMismatch,
    EmptyDataset,
    LabelSpace,
    LengthMismatch,
    LogWeightVector,
    ObservationAlphabet,
    ProbabilityVector,
    ZeroEvidence,
    ZeroMarginal,
    ZeroPrior,
    logsumexp_last,
    normalize_log,
    readonly_array,
    safe_log,
    stochastic_matrix,
)


@dataclass(frozen=True, eq=False)
class NaiveBayesModel:
    """Generative parameterization: prior plus per-position emission tables.

    ``emissions[t]`` has shape ``(N, M_t)``; row ``i`` is the distribution
    of the symbol at position ``t`` given label ``i``.  A zero prior entry
    is allowed here (the generative route just assigns that label weight
    zero); the discriminative conversions reject it.
    """

    labels: LabelSpace
    alphabets: tuple[ObservationAlphabet, ...]
    prior: ProbabilityVector
    emissions: tuple[np.ndarray, ...]

    def __post_init__(self):
        alphabets = tuple(self.alphabets)
        if not alphabets:
            raise ValueError("need at least one observation position")
        if len(self.prior) != self.labels.n:
            raise ValueError("prior length does not match the label count")
        if len(self.emissions) != len(alphabets):
            raise ValueError("need one emission table per observation position")
        tables = []
        for t, (table, alphabet) in enumerate(zip(self.emissions, alphabets)):
            arr = stochastic_matrix(table, what=f"emission table {t}")
            if arr.shape != (self.labels.n, alphabet.m):
                raise ValueError(
                    f"emission table {t} has shape {arr.shape}, "
                    f"expected {(self.labels.n, alphabet.m)}"
                )
            tables.append(arr)
        object.__setattr__(self, "alphabets", alphabets)
        object.__setattr__(self, "emissions", tuple(tables))

    @property
    def n_positions(self) -> int:
        return len(self.alphabets)


@dataclass(frozen=True, eq=False)
class DiscriminativeNBModel:
    """Discriminative parameterization on real-valued observations.

    Position ``t`` scores label ``i`` as ``slopes[i, t] * y_t +
    intercepts[i, t]``; the posterior column for that position is the
    softmax of the scores over labels.  The prior must be strictly
    positive because it enters the combination raised to ``1 - T``.
    """

    labels: LabelSpace
    prior: ProbabilityVector
    slopes: np.ndarray
    intercepts: np.ndarray

    def __post_init__(self):
        if len(self.prior) != self.labels.n:
            raise ValueError("prior length does not match the label count")
        if np.any(self.prior.entries == 0.0):
            raise ZeroPrior("prior must be strictly positive")
        slopes = np.array(self.slopes, dtype=float)
        intercepts = np.array(self.intercepts, dtype=float)
        if slopes.ndim != 2 or slopes.shape[0] != self.labels.n or slopes.shape[1] < 1:
            raise ValueError(
                f"slopes must have shape (n_labels, T), got {slopes.shape}"
            )
        if intercepts.shape != slopes.shape:
            raise ValueError("slopes and intercepts must have the same shape")
        if not (np.all(np.isfinite(slopes)) and np.all(np.isfinite(intercepts))):
            raise ValueError("parameters must be finite")
        slopes.flags.writeable = False
        intercepts.flags.writeable = False
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "intercepts", intercepts)

    @property
    def n_positions(self) -> int:
        return self.slopes.shape[1]


@dataclass(frozen=True, eq=False)
class SufficientStatistics:
    """Raw pattern counts behind the maximum-likelihood fit."""

    sample_count: int
    label_counts: np.ndarray
    emission_counts: tuple[np.ndarray, ...]

    def __post_init__(self):
        label_counts = np.array(self.label_counts, dtype=np.int64)
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        if int(label_counts.sum()) != self.sample_count:
            raise ValueError("label counts do not add up to the sample count")
        tables = []
        for t, table in enumerate(self.emission_counts):
            arr = np.array(table, dtype=np.int64)
            if np.any(arr.sum(axis=1) != label_counts):
                raise ValueError(f"emission counts at position {t} do not add up to the label counts")
            arr.flags.writeable = False
            tables.append(arr)
        label_counts.flags.writeable = False
        object.__setattr__(self, "label_counts", label_counts)
        object.__setattr__(self, "emission_counts", tuple(tables))


def nb_sufficient_statistics(dataset, labels: LabelSpace, alphabets) -> SufficientStatistics:
    """Count labels and per-position symbol patterns in a dataset.

    ``dataset`` is a sequence of ``(label, observation)`` pairs where each
    observation is a sequence of symbols, one per declared alphabet.
    """
    if len(dataset) == 0:
        raise EmptyDataset("empty dataset")
    alphabets = tuple(alphabets)
    t_len = len(alphabets)
    label_counts = np.zeros(labels.n, dtype=np.int64)
    emission_counts = [np.zeros((labels.n, ab.m), dtype=np.int64) for ab in alphabets]
    for label, observation in dataset:
        i = labels.index(label)
        if len(observation) != t_len:
            raise LengthMismatch(
                f"observation has {len(observation)} positions, expected {t_len}"
            )
        label_counts[i] += 1
        for t, symbol in enumerate(observation):
            emission_counts[t][i, alphabets[t].index(symbol)] += 1
    return SufficientStatistics(len(dataset), label_counts, tuple(emission_counts))


def _infer_spaces(dataset):
    labels = LabelSpace(tuple(sorted({label for label, _ in dataset})))
    t_len = len(dataset[0][1])
    for k, (_, observation) in enumerate(dataset):
        if len(observation) != t_len:
            raise LengthMismatch(
                f"sample {k} has {len(observation)} positions, expected {t_len}"
            )
    if t_len == 0:
        raise LengthMismatch("observations must have at least one position")
    alphabets = tuple(
        ObservationAlphabet(tuple(sorted({obs[t] for _, obs in dataset})))
        for t in range(t_len)
    )
    return labels, alphabets


def nb_fit_mle(dataset, smoothing_alpha: float = 0.0, *, labels=None, alphabets=None) -> NaiveBayesModel:
    """Fit by counting patterns, with optional additive smoothing.

    With ``smoothing_alpha == 0`` every parameter is the exact count
    ratio: the prior is ``count(label) / n_samples`` and emission row
    entries are ``count(label, symbol) / count(label)``.  A declared label
    that never occurs then gets prior zero and a uniform emission row
    (any row maximizes the likelihood there).  With ``smoothing_alpha > 0``
    the constant is added to every count, prior and emissions alike.

    Label and symbol spaces default to the sorted values observed in the
    dataset; pass ``labels``/``alphabets`` to widen them.
    """
    if len(dataset) == 0:
        raise EmptyDataset("empty dataset")
    if smoothing_alpha < 0:
        raise ValueError("smoothing_alpha must be nonnegative")
    if labels is None or alphabets is None:
        inferred_labels, inferred_alphabets = _infer_spaces(dataset)
        labels = labels if labels is not None else inferred_labels
        alphabets = alphabets if alphabets is not None else inferred_alphabets
    alphabets = tuple(alphabets)
    stats = nb_sufficient_statistics(dataset, labels, alphabets)

    alpha = float(smoothing_alpha)
    counts = stats.label_counts.astype(float)
    prior = ProbabilityVector((counts + alpha) / (stats.sample_count + alpha * labels.n))

    emissions = []
    for alphabet, table in zip(alphabets, stats.emission_counts):
        denom = counts + alpha * alphabet.m
        rows = np.empty((labels.n, alphabet.m))
        for i in range(labels.n):
            if denom[i] > 0.0:
                rows[i] = (table[i] + alpha) / denom[i]
            else:
                rows[i] = 1.0 / alphabet.m
        emissions.append(rows)
    return NaiveBayesModel(labels, alphabets, prior, tuple(emissions))


def _symbol_indices(model: NaiveBayesModel, observation) -> list[int]:
    if len(observation) != model.n_positions:
        raise LengthMismatch(
            f"observation has {len(observation)} positions, expected {model.n_positions}"
        )
    return [model.alphabets[t].index(symbol) for t, symbol in enumerate(observation)]


def nb_generative_posterior(model: NaiveBayesModel, observation) -> ProbabilityVector:
    """Posterior over labels from the joint law.

    Weighs each label by prior times the product of its emission
    probabilities for the observed symbols, in log space, then normalizes.
    """
    indices = _symbol_indices(model, observation)
    log_weights = safe_log(model.prior.entries).copy()
    for t, y in enumerate(indices):
        log_weights += safe_log(model.emissions[t][:, y])
    if not np.any(np.isfinite(log_weights)):
        raise ZeroEvidence(
            "zero evidence: the observation has probability zero under every label"
        )
    return normalize_log(log_weights)


def nb_to_discriminative(model: NaiveBayesModel, marginals=None) -> tuple[np.ndarray, ...]:
    """Bayes-invert prior and emissions into per-position posterior tables.

    Returns one table per position with shape ``(M_t, N)``; row ``y`` is
    the posterior over labels given symbol ``y`` at that position alone.
    When ``marginals`` is omitted, the symbol law is the model-implied
    mixture ``sum_j prior[j] * emissions[t][j, y]`` and every returned row
    lies on the simplex.  Supplied marginals (one positive vector per
    position) are used verbatim; the rows are then posterior-like ratios
    that need not normalize.
    """
    prior = model.prior.entries
    if np.any(prior == 0.0):
        raise ZeroPrior("the discriminative form needs a strictly positive prior")
    tables = []
    for t, table in enumerate(model.emissions):
        joint = prior[:, None] * table
        if marginals is None:
            marginal = joint.sum(axis=0)
        else:
            marginal = np.asarray(marginals[t], dtype=float)
            if marginal.shape != (model.alphabets[t].m,):
                raise ValueError(
                    f"marginals for position {t} must have one entry per symbol"
                )
        bad = np.flatnonzero(marginal <= 0.0)
        if bad.size:
            symbol = model.alphabets[t].symbols[int(bad[0])]
            raise ZeroMarginal(
                f"symbol {symbol!r} at position {t} has zero marginal probability"
            )
        tables.append(readonly_array((joint / marginal).T))
    return tuple(tables)


def _column_weights(column, n_labels: int) -> np.ndarray:
    if isinstance(column, ProbabilityVector):
        return column.entries
    arr = np.asarray(column, dtype=float)
    if arr.ndim != 1 or arr.size != n_labels:
        raise ValueError(f"posterior column must have {n_labels} entries")
    if not np.all(np.isfinite(arr)):
        raise ValueError("posterior column entries must be finite")
    if np.any(arr < 0.0):
        raise ValueError("posterior column entries must be nonnegative")
    return arr


def nb_discriminative_scores(prior, l_columns) -> LogWeightVector:
    """Log score per label: ``(1 - T) * log(prior) + sum_t log(L[t])``.

    The columns are nonnegative label weights, normally posterior columns;
    scaling a column by a positive constant only shifts every score by the
    same amount, which normalization cancels.
    """
    if not isinstance(prior, ProbabilityVector):
        prior = ProbabilityVector(prior)
    if np.any(prior.entries == 0.0):
        raise ZeroPrior("the discriminative combination needs a strictly positive prior")
    columns = list(l_columns)
    if not columns:
        raise ValueError("need at least one posterior column")
    t_len = len(columns)
    log_delta = (1.0 - t_len) * np.log(prior.entries)
    for column in columns:
        log_delta = log_delta + safe_log(_column_weights(column, len(prior)))
    return LogWeightVector(log_delta)


def nb_discriminative_posterior(prior, l_columns) -> ProbabilityVector:
    """Combine the prior with one posterior column per position.

    Normalizes the label scores ``prior^(1-T) * prod_t L[t]``; raises
    :class:`AllZeroWeights` when every label gets score zero.
    """
    return normalize_log(nb_discriminative_scores(prior, l_columns))


def disc_nb_columns(model: DiscriminativeNBModel, observation) -> tuple[ProbabilityVector, ...]:
    """Evaluate the softmax posterior column of every position at ``observation``."""
    y = np.asarray(observation, dtype=float)
    if y.ndim != 1 or y.size != model.n_positions:
        raise DimensionMismatch(
            f"observation must have {model.n_positions} coordinates, got shape {y.shape}"
        )
    if not np.all(np.isfinite(y)):
        raise ValueError("observation coordinates must be finite")
    columns = []
    for t in range(model.n_positions):
        logits = model.slopes[:, t] * y[t] + model.intercepts[:, t]
        columns.append(normalize_log(logits))
    return tuple(columns)


def disc_nb_posterior(model: DiscriminativeNBModel, observation) -> ProbabilityVector:
    """Posterior of a softmax-parameterized model at one real observation."""
    return nb_discriminative_posterior(model.prior, disc_nb_columns(model, observation))


def disc_nb_log_posterior_batch(model: DiscriminativeNBModel, observations) -> np.ndarray:
    """Log posterior matrix for a batch of observations.

    ``observations`` has shape ``(S, T)``; the result has shape ``(S, N)``
    and each row is the log of :func:`disc_nb_posterior` for that
    observation.  Used by the trainer and the verification sweeps.
    """
    obs = np.asarray(observations, dtype=float)
    if obs.ndim != 2 or obs.shape[1] != model.n_positions:
        raise DimensionMismatch(
            f"observations must have shape (S, {model.n_positions}), got {obs.shape}"
        )
    if not np.all(np.isfinite(obs)):
        raise ValueError("observation coordinates must be finite")
    log_prior = np.log(model.prior.entries)
    return _log_posterior_matrix(model.slopes, model.intercepts, log_prior, obs)


def _log_posterior_matrix(slopes, intercepts, log_prior, obs) -> np.ndarray:
    # extreme parameters can overflow the logits; the resulting non-finite
    # posteriors are detected by the callers (DivergedLoss in training,
    # validation errors elsewhere), so the warnings are silenced here
    with np.errstate(over="ignore", invalid="ignore"):
        # logits[s, t, i] = slopes[i, t] * obs[s, t] + intercepts[i, t]
        logits = obs[:, :, None] * slopes.T[None, :, :] + intercepts.T[None, :, :]
        log_columns = logits - logsumexp_last(logits)
        t_len = slopes.shape[1]
        log_delta = (1.0 - t_len) * log_prior[None, :] + log_columns.sum(axis=1)
        return log_delta - logsumexp_last(log_delta)
