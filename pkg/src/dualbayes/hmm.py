"""Posterior marginals of a homogeneous hidden Markov chain, two ways.

Both algorithms compute ``p(label at t | whole observation sequence)`` for
every position:

* :func:`forward_backward` is the classic recursion on joint weights.  The
  forward pass accumulates prior, transition, and emission probabilities;
  the backward pass accumulates the future emissions.
* :func:`entropic_forward_backward` reaches the same marginals without the
  emission law.  Its recursions consume only the prior, the transitions,
  and the per-symbol posterior columns ``L[y][i] = p(label i | symbol y)``,
  replacing every emission factor by the ratio ``L / prior``.

When the posterior columns are derived from the same prior and emissions
(:func:`derive_hmm_posteriors` does exactly that), the per-step symbol
marginals cancel out of the ratio and the two algorithms agree.  For an
arbitrary ``(prior, transitions, L)`` triple there is no such guarantee;
both algorithms still run and return what their recursions define.

Everything runs in log space.  The backward weights are additionally
renormalized at each step; the shift cancels in the final ratio, and that
invariance is itself covered by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    EQUALITY_TOL,
    LabelSpace,
    MissingPosteriors,
    ObservationAlphabet,
    ProbabilityVector,
    ZeroEvidence,
    ZeroMarginal,
    ZeroPrior,
    logsumexp,
    normalize_log,
    safe_log,
    stochastic_matrix,
)


@dataclass(frozen=True, eq=False)
class HmmModel:
    """Homogeneous HMM over a single observation alphabet.

    ``transitions[i, j]`` is the probability of moving from label ``i`` to
    label ``j``.  At least one of ``emissions`` (rows are per-label symbol
    distributions) and ``posteriors`` (columns are per-symbol label
    distributions) must be present; when both are, they must describe the
    same joint law together with the prior.
    """

    labels: LabelSpace
    alphabet: ObservationAlphabet
    prior: ProbabilityVector
    transitions: np.ndarray
    emissions: np.ndarray | None = None
    posteriors: np.ndarray | None = None

    def __post_init__(self):
        n = self.labels.n
        if len(self.prior) != n:
            raise ValueError("prior length does not match the label count")
        transitions = stochastic_matrix(self.transitions, what="transition matrix")
        if transitions.shape != (n, n):
            raise ValueError(f"transition matrix must be ({n}, {n}), got {transitions.shape}")
        object.__setattr__(self, "transitions", transitions)

        emissions = self.emissions
        if emissions is not None:
            emissions = stochastic_matrix(emissions, what="emission matrix")
            if emissions.shape != (n, self.alphabet.m):
                raise ValueError(
                    f"emission matrix must be ({n}, {self.alphabet.m}), got {emissions.shape}"
                )
            object.__setattr__(self, "emissions", emissions)

        posteriors = self.posteriors
        if posteriors is not None:
            columns = stochastic_matrix(np.asarray(posteriors, dtype=float).T,
                                        what="posterior columns (transposed)")
            posteriors = columns.T
            if posteriors.shape != (n, self.alphabet.m):
                raise ValueError(
                    f"posterior matrix must be ({n}, {self.alphabet.m}), got {posteriors.shape}"
                )
            posteriors.flags.writeable = False
            object.__setattr__(self, "posteriors", posteriors)

        if emissions is None and posteriors is None:
            raise ValueError("model needs emissions, posteriors, or both")
        if emissions is not None and posteriors is not None:
            self._check_consistency(emissions, posteriors)

    def _check_consistency(self, emissions, posteriors):
        joint = self.prior.entries[:, None] * emissions
        marginal = joint.sum(axis=0)
        reachable = marginal > 0.0
        if not np.any(reachable):
            return
        expected = joint[:, reachable] / marginal[reachable]
        gap = float(np.abs(posteriors[:, reachable] - expected).max())
        if gap > EQUALITY_TOL:
            raise ValueError(
                f"posterior columns disagree with prior and emissions by {gap:.3e}"
            )


@dataclass(frozen=True, eq=False)
class PosteriorMarginals:
    """Per-position posterior over labels, conditioned on the whole sequence."""

    gamma: np.ndarray

    def __post_init__(self):
        gamma = stochastic_matrix(self.gamma, what="posterior marginals")
        object.__setattr__(self, "gamma", gamma)

    @property
    def n_steps(self) -> int:
        return self.gamma.shape[0]


def _log_matvec(log_vec: np.ndarray, log_mat: np.ndarray) -> np.ndarray:
    """out[i] = logsumexp_j(log_vec[j] + log_mat[j, i]), tolerating -inf."""
    combined = log_vec[:, None] + log_mat
    peak = combined.max(axis=0)
    out = np.full(combined.shape[1], -np.inf)
    ok = np.isfinite(peak)
    if np.any(ok):
        out[ok] = peak[ok] + np.log(np.exp(combined[:, ok] - peak[ok]).sum(axis=0))
    return out


def _observation_indices(model: HmmModel, observations) -> list[int]:
    indices = [model.alphabet.index(symbol) for symbol in observations]
    if not indices:
        raise ValueError("need at least one observation")
    return indices


def _marginals_from(log_forward, log_backward) -> PosteriorMarginals:
    rows = []
    for la, lb in zip(log_forward, log_backward):
        weights = la + lb
        if not np.any(np.isfinite(weights)):
            raise ZeroEvidence(
                "zero evidence: the observation sequence has probability zero under the model"
            )
        rows.append(normalize_log(weights).entries)
    return PosteriorMarginals(np.array(rows))


def forward_backward(model: HmmModel, observations, *, rescale_backward: bool = True) -> PosteriorMarginals:
    """Classic posterior-marginal recursion on joint weights.

    Forward: start from prior times emission, then fold transitions and
    the next emission at every step.  Backward: start from ones and fold
    transition times next emission.  Marginal at ``t`` is the normalized
    product of the two.  ``rescale_backward`` renormalizes the backward
    weights per step; it never changes the result and exists so the
    invariance can be tested.
    """
    if model.emissions is None:
        raise ValueError("forward_backward needs the emission matrix")
    obs = _observation_indices(model, observations)
    t_len = len(obs)
    log_a = safe_log(model.transitions)
    log_b = safe_log(model.emissions)

    log_forward = np.empty((t_len, model.labels.n))
    log_forward[0] = safe_log(model.prior.entries) + log_b[:, obs[0]]
    for t in range(1, t_len):
        log_forward[t] = log_b[:, obs[t]] + _log_matvec(log_forward[t - 1], log_a)
    if not np.isfinite(logsumexp(log_forward[-1])):
        raise ZeroEvidence(
            "zero evidence: the observation sequence has probability zero under the model"
        )

    log_backward = np.zeros((t_len, model.labels.n))
    for t in range(t_len - 2, -1, -1):
        future = log_backward[t + 1] + log_b[:, obs[t + 1]]
        log_backward[t] = _log_matvec(future, log_a.T)
        if rescale_backward:
            shift = logsumexp(log_backward[t])
            if np.isfinite(shift):
                log_backward[t] -= shift
    return _marginals_from(log_forward, log_backward)


def entropic_forward_backward(model: HmmModel, observations, *, rescale_backward: bool = True) -> PosteriorMarginals:
    """Posterior marginals from posterior columns alone.

    Uses only the prior, the transitions, and the stored per-symbol
    posterior columns; neither the emission matrix nor any symbol marginal
    enters the recursion.
    """
    return _entropic_recursion(model, observations, ratio_sign=1.0,
                               rescale_backward=rescale_backward)


def _entropic_recursion(model: HmmModel, observations, ratio_sign: float,
                        rescale_backward: bool = True) -> PosteriorMarginals:
    # ratio_sign multiplies the log posterior-to-prior ratio; the
    # verification suite flips it to prove its equality check can fail.
    if model.posteriors is None:
        raise MissingPosteriors("model has no posterior columns; derive or supply them")
    if np.any(model.prior.entries == 0.0):
        raise ZeroPrior("the entropic recursion needs a strictly positive prior")
    obs = _observation_indices(model, observations)
    t_len = len(obs)
    log_a = safe_log(model.transitions)
    log_l = safe_log(model.posteriors)
    log_ratio = ratio_sign * (log_l - np.log(model.prior.entries)[:, None])

    log_forward = np.empty((t_len, model.labels.n))
    log_forward[0] = log_l[:, obs[0]]
    for t in range(1, t_len):
        log_forward[t] = log_ratio[:, obs[t]] + _log_matvec(log_forward[t - 1], log_a)

    log_backward = np.zeros((t_len, model.labels.n))
    for t in range(t_len - 2, -1, -1):
        future = log_ratio[:, obs[t + 1]] + log_backward[t + 1]
        log_backward[t] = _log_matvec(future, log_a.T)
        if rescale_backward:
            shift = logsumexp(log_backward[t])
            if np.isfinite(shift):
                log_backward[t] -= shift
    return _marginals_from(log_forward, log_backward)


def derive_hmm_posteriors(model: HmmModel) -> HmmModel:
    """Fill the posterior columns by Bayes-inverting prior and emissions.

    ``L[y][i] = prior[i] * emissions[i, y] / marginal(y)`` with the symbol
    marginal taken under the model.  The result carries both
    parameterizations and satisfies the consistency invariant by
    construction.
    """
    if model.emissions is None:
        raise ValueError("deriving posteriors needs the emission matrix")
    if np.any(model.prior.entries == 0.0):
        raise ZeroPrior("deriving posteriors needs a strictly positive prior")
    joint = model.prior.entries[:, None] * model.emissions
    marginal = joint.sum(axis=0)
    bad = np.flatnonzero(marginal <= 0.0)
    if bad.size:
        symbol = model.alphabet.symbols[int(bad[0])]
        raise ZeroMarginal(f"symbol {symbol!r} has zero probability under every label")
    return HmmModel(
        labels=model.labels,
        alphabet=model.alphabet,
        prior=model.prior,
        transitions=model.transitions,
        emissions=model.emissions,
        posteriors=joint / marginal,
    )
