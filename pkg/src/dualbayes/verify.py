"""Randomized cross-verification sweeps.

Each suite draws models from safe parameter ranges (probabilities bounded
away from zero, short sequences), computes the same posterior along two or
more independent routes, and records the worst absolute discrepancy.  The
CLI ``verify`` command formats the results; the test suite reuses both the
suites and the model generators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EQUALITY_TOL, LabelSpace, ObservationAlphabet, ProbabilityVector
from .hmm import HmmModel, derive_hmm_posteriors, forward_backward, _entropic_recursion
from .logreg import (
    LogisticRegressionModel,
    lr_log_posterior_batch,
    lr_to_nb,
    nb_to_lr,
)
from .naive_bayes import (
    DiscriminativeNBModel,
    NaiveBayesModel,
    disc_nb_log_posterior_batch,
    nb_discriminative_posterior,
    nb_generative_posterior,
    nb_to_discriminative,
)
from .oracle import joint_enumeration_hmm, joint_enumeration_nb


@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    max_discrepancy: float
    tolerance: float = EQUALITY_TOL

    @property
    def passed(self) -> bool:
        return self.max_discrepancy <= self.tolerance


def random_probability_vector(rng, n, floor=0.05) -> ProbabilityVector:
    weights = rng.uniform(floor, 1.0, size=n)
    return ProbabilityVector(weights / weights.sum())


def random_stochastic_matrix(rng, n_rows, n_cols, floor=0.05) -> np.ndarray:
    weights = rng.uniform(floor, 1.0, size=(n_rows, n_cols))
    return weights / weights.sum(axis=1, keepdims=True)


def _label_space(n: int) -> LabelSpace:
    return LabelSpace(tuple(f"l{k}" for k in range(n)))


def _alphabet(m: int) -> ObservationAlphabet:
    return ObservationAlphabet(tuple(f"s{k}" for k in range(m)))


def random_naive_bayes(rng, n_labels=None, t_len=None, max_symbols=6) -> NaiveBayesModel:
    if n_labels is None:
        n_labels = int(rng.integers(2, 6))
    if t_len is None:
        t_len = int(rng.integers(1, 7))
    alphabets = tuple(
        _alphabet(int(rng.integers(1, max_symbols + 1))) for _ in range(t_len)
    )
    return NaiveBayesModel(
        labels=_label_space(n_labels),
        alphabets=alphabets,
        prior=random_probability_vector(rng, n_labels),
        emissions=tuple(random_stochastic_matrix(rng, n_labels, ab.m) for ab in alphabets),
    )


def random_nb_observation(rng, model: NaiveBayesModel) -> list[str]:
    return [ab.symbols[int(rng.integers(0, ab.m))] for ab in model.alphabets]


def random_discriminative_nb(rng, n_labels=None, t_len=None, scale=1.5) -> DiscriminativeNBModel:
    if n_labels is None:
        n_labels = int(rng.integers(2, 6))
    if t_len is None:
        t_len = int(rng.integers(1, 7))
    return DiscriminativeNBModel(
        labels=_label_space(n_labels),
        prior=random_probability_vector(rng, n_labels),
        slopes=rng.uniform(-scale, scale, size=(n_labels, t_len)),
        intercepts=rng.uniform(-scale, scale, size=(n_labels, t_len)),
    )


def random_logreg(rng, n_labels=None, t_len=None, scale=1.5) -> LogisticRegressionModel:
    if n_labels is None:
        n_labels = int(rng.integers(2, 6))
    if t_len is None:
        t_len = int(rng.integers(1, 7))
    return LogisticRegressionModel(
        labels=_label_space(n_labels),
        weights=rng.uniform(-scale, scale, size=(n_labels, t_len)),
        biases=rng.uniform(-scale, scale, size=n_labels),
    )


def random_hmm(rng, n_labels=None, m_symbols=None, derive=False) -> HmmModel:
    if n_labels is None:
        n_labels = int(rng.integers(2, 5))
    if m_symbols is None:
        m_symbols = int(rng.integers(1, 6))
    model = HmmModel(
        labels=_label_space(n_labels),
        alphabet=_alphabet(m_symbols),
        prior=random_probability_vector(rng, n_labels),
        transitions=random_stochastic_matrix(rng, n_labels, n_labels),
        emissions=random_stochastic_matrix(rng, n_labels, m_symbols),
    )
    return derive_hmm_posteriors(model) if derive else model


def random_hmm_observation(rng, model: HmmModel, t_len: int) -> list[str]:
    return [model.alphabet.symbols[int(rng.integers(0, model.alphabet.m))]
            for _ in range(t_len)]


def nb_agreement_suite(rng, cases: int = 1000, observations_per_model: int = 2) -> SuiteResult:
    """Generative route vs posterior-column route vs direct enumeration."""
    worst = 0.0
    for _ in range(cases):
        model = random_naive_bayes(rng)
        tables = nb_to_discriminative(model)
        for _ in range(observations_per_model):
            observation = random_nb_observation(rng, model)
            generative = nb_generative_posterior(model, observation).entries
            columns = [
                tables[t][model.alphabets[t].index(symbol)]
                for t, symbol in enumerate(observation)
            ]
            discriminative = nb_discriminative_posterior(model.prior, columns).entries
            reference = joint_enumeration_nb(model, observation).entries
            worst = max(
                worst,
                float(np.abs(generative - discriminative).max()),
                float(np.abs(generative - reference).max()),
            )
    return SuiteResult("nb-generative-vs-discriminative", cases, worst)


def logreg_equivalence_suite(rng, cases: int = 500, observations: int = 100) -> SuiteResult:
    """Conversion between softmax-linear and discriminative form, both ways.

    Per case: collapse a random discriminative model, expand a random
    softmax-linear model under a random positive prior, and collapse that
    expansion back; compare posteriors at random observations each time.
    """
    worst = 0.0
    for _ in range(cases):
        disc = random_discriminative_nb(rng)
        collapsed = nb_to_lr(disc)
        probes = rng.normal(0.0, 2.0, size=(observations, disc.n_positions))
        gap = np.abs(
            np.exp(disc_nb_log_posterior_batch(disc, probes))
            - np.exp(lr_log_posterior_batch(collapsed, probes))
        )
        worst = max(worst, float(gap.max()))

        linear = random_logreg(rng)
        prior = random_probability_vector(rng, linear.labels.n)
        expanded = lr_to_nb(linear, prior)
        probes = rng.normal(0.0, 2.0, size=(observations, linear.n_positions))
        reference = np.exp(lr_log_posterior_batch(linear, probes))
        gap = np.abs(np.exp(disc_nb_log_posterior_batch(expanded, probes)) - reference)
        worst = max(worst, float(gap.max()))
        round_trip = nb_to_lr(expanded)
        gap = np.abs(np.exp(lr_log_posterior_batch(round_trip, probes)) - reference)
        worst = max(worst, float(gap.max()))
    return SuiteResult("logreg-equivalence", cases, worst)


def fb_efb_suite(rng, cases: int = 500, max_steps: int = 8, ratio_sign: float = 1.0) -> SuiteResult:
    """Classic vs entropic recursions on consistently derived posteriors.

    ``ratio_sign`` is forwarded to the entropic recursion; anything other
    than 1.0 deliberately breaks it, which the self-test of this suite
    uses to confirm the comparison can fail.
    """
    worst = 0.0
    for _ in range(cases):
        model = random_hmm(rng, derive=True)
        t_len = int(rng.integers(1, max_steps + 1))
        observation = random_hmm_observation(rng, model, t_len)
        classic = forward_backward(model, observation).gamma
        entropic = _entropic_recursion(model, observation, ratio_sign=ratio_sign).gamma
        worst = max(worst, float(np.abs(classic - entropic).max()))
    return SuiteResult("fb-vs-efb", cases, worst)


def fb_enumeration_suite(rng, cases: int = 60) -> SuiteResult:
    """Fast forward-backward vs whole-path enumeration."""
    worst = 0.0
    max_steps = {2: 8, 3: 7, 4: 6}
    for _ in range(cases):
        n_labels = int(rng.integers(2, 5))
        model = random_hmm(rng, n_labels=n_labels)
        t_len = int(rng.integers(1, max_steps[n_labels] + 1))
        observation = random_hmm_observation(rng, model, t_len)
        fast = forward_backward(model, observation).gamma
        reference = joint_enumeration_hmm(model, observation).gamma
        worst = max(worst, float(np.abs(fast - reference).max()))
    return SuiteResult("fb-vs-enumeration", cases, worst)


def run_all_suites(seed: int = 0, cases: int | None = None,
                   efb_ratio_sign: float = 1.0) -> list[SuiteResult]:
    """Run the four suites on deterministic per-suite substreams.

    ``cases=None`` uses each suite's full default; a number overrides all
    of them (handy for smoke runs).
    """
    results = []
    plan = [
        (0, nb_agreement_suite, 1000, {}),
        (1, logreg_equivalence_suite, 500, {}),
        (2, fb_efb_suite, 500, {"ratio_sign": efb_ratio_sign}),
        (3, fb_enumeration_suite, 60, {}),
    ]
    for stream, suite, default_cases, extra in plan:
        rng = np.random.default_rng([seed, stream])
        results.append(suite(rng, cases=cases if cases is not None else default_cases, **extra))
    return results
