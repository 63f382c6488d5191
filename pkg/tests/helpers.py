"""Shared test utilities."""

import numpy as np

from dualbayes.train import FD_STEP, gradient, parameter_loss


def finite_difference_max_rel_error(model, dataset) -> float:
    """Worst relative deviation between the analytic gradient and central
    finite differences, over every trainable coordinate.

    Relative error uses the conventional unit floor,
    ``|a - b| / max(1, |a|, |b|)``, so coordinates whose true gradient is
    zero are compared absolutely.
    """
    grads = gradient(model, dataset)
    log_prior = np.log(model.prior.entries)
    worst = 0.0

    def probe(analytic, build):
        nonlocal worst
        plus = parameter_loss(*build(FD_STEP), dataset, model.labels)
        minus = parameter_loss(*build(-FD_STEP), dataset, model.labels)
        numeric = (plus - minus) / (2.0 * FD_STEP)
        worst = max(worst, abs(numeric - analytic) / max(1.0, abs(numeric), abs(analytic)))

    for i in range(model.labels.n):
        for t in range(model.n_positions):
            def bump_slope(h, i=i, t=t):
                slopes = model.slopes.copy()
                slopes[i, t] += h
                return slopes, model.intercepts, log_prior

            def bump_intercept(h, i=i, t=t):
                intercepts = model.intercepts.copy()
                intercepts[i, t] += h
                return model.slopes, intercepts, log_prior

            probe(grads.slopes[i, t], bump_slope)
            probe(grads.intercepts[i, t], bump_intercept)
    for i in range(model.labels.n):
        def bump_prior(h, i=i):
            bumped = log_prior.copy()
            bumped[i] += h
            return model.slopes, model.intercepts, bumped

        probe(grads.log_prior[i], bump_prior)
    return worst
