"""Numeric foundations shared by every inference module.

Everything downstream computes posteriors as "accumulate weights, then
normalize".  This module owns the two conventions that make that safe:

* weight accumulation happens in log space, with ``-inf`` as the canonical
  log of a zero weight (never NaN, never a signed zero sentinel);
* probabilities only appear at API boundaries, as validated
  :class:`ProbabilityVector` values.

The tolerance constants used throughout the package are declared here once
and imported everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Maximum deviation of a probability vector's sum from 1.
SIMPLEX_TOL = 1e-12

#: Tolerance for agreement between two algorithms computing the same posterior.
EQUALITY_TOL = 1e-10

#: Relative tolerance for analytic-vs-finite-difference gradient checks.
GRAD_REL_TOL = 1e-5


class DualBayesError(Exception):
    """Base class for all errors raised by this package."""


class AllZeroWeights(DualBayesError):
    """Every weight is zero, so there is nothing to normalize."""


class ZeroEvidence(DualBayesError):
    """The observed data has probability zero under the model."""


class ZeroPrior(DualBayesError):
    """An operation requiring a strictly positive prior got a zero entry."""


class ZeroMarginal(DualBayesError):
    """A symbol has zero probability under every label."""


class EmptyDataset(DualBayesError):
    """A fit or loss was requested on an empty dataset."""


class LengthMismatch(DualBayesError):
    """An observation sequence has the wrong number of positions."""


class UnknownSymbol(DualBayesError):
    """A label or observation symbol is not part of the declared space."""


class DimensionMismatch(DualBayesError):
    """A real-valued observation vector has the wrong dimension."""


class MissingPosteriors(DualBayesError):
    """The model carries no per-observation posterior columns."""


class DivergedLoss(DualBayesError):
    """Training produced a non-finite loss."""


class StateSpaceTooLarge(DualBayesError):
    """Brute-force enumeration over all label paths was refused."""


def readonly_array(values) -> np.ndarray:
    """Copy ``values`` into a float array that rejects writes."""
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


def safe_log(values) -> np.ndarray:
    """Elementwise log with 0 mapped to ``-inf`` and no runtime warning."""
    with np.errstate(divide="ignore"):
        return np.log(values)


def stochastic_matrix(values, what: str = "matrix") -> np.ndarray:
    """Validate and freeze a matrix whose rows are probability distributions."""
    arr = np.array(values, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{what} must be a nonempty 2-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} has a non-finite entry")
    if np.any(arr < 0.0):
        raise ValueError(f"{what} has a negative entry")
    deviation = np.abs(arr.sum(axis=1) - 1.0)
    if float(deviation.max()) > SIMPLEX_TOL:
        row = int(deviation.argmax())
        raise ValueError(f"{what} row {row} sums to {arr[row].sum()!r}, not 1")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class LabelSpace:
    """Ordered, finite set of at least two distinct label names."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        if len(names) < 2:
            raise ValueError("a label space needs at least two labels")
        if len(set(names)) != len(names):
            raise ValueError("label names must be distinct")
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownSymbol(f"unknown label {name!r}") from None


@dataclass(frozen=True)
class ObservationAlphabet:
    """Ordered, finite set of observation symbols for one position."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise ValueError("an alphabet needs at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise ValueError("alphabet symbols must be distinct")
        object.__setattr__(self, "symbols", symbols)

    @property
    def m(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise UnknownSymbol(f"unknown symbol {symbol!r}") from None


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """A point on the probability simplex.

    Construction validates rather than repairs: entries must already be
    nonnegative and sum to 1 within ``SIMPLEX_TOL``.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("entries must form a nonempty vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        if np.any(arr < 0.0):
            raise ValueError("entries must be nonnegative")
        if abs(float(arr.sum()) - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"entries sum to {arr.sum()!r}, not 1")
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @classmethod
    def uniform(cls, n: int) -> "ProbabilityVector":
        return cls(np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return self.entries.size

    def __getitem__(self, index):
        return self.entries[index]


@dataclass(frozen=True, eq=False)
class LogWeightVector:
    """Unnormalized weights carried in log space.

    ``-inf`` marks a zero weight.  At least one entry must be finite,
    otherwise normalization is undefined and construction raises
    :class:`AllZeroWeights`.
    """

    log_entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.log_entries, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("log_entries must form a nonempty vector")
        if np.any(np.isnan(arr)) or np.any(arr == np.inf):
            raise ValueError("log_entries must lie in [-inf, +inf)")
        if not np.any(np.isfinite(arr)):
            raise AllZeroWeights("every weight is zero")
        arr.flags.writeable = False
        object.__setattr__(self, "log_entries", arr)

    def __len__(self) -> int:
        return self.log_entries.size


def logsumexp(values) -> float:
    """log(sum(exp(values))), computed with a max shift.

    An empty or all ``-inf`` input yields ``-inf``; there is no exception
    path.  When one entry dominates the rest by more than roughly 40 nats
    the result equals that entry exactly in double precision.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return -np.inf
    peak = float(np.max(arr))
    if not np.isfinite(peak):
        return peak
    return peak + float(np.log(np.sum(np.exp(arr - peak))))


def logsumexp_last(arr: np.ndarray) -> np.ndarray:
    """Max-shifted log-sum-exp along the last axis, keeping dims.

    Assumes every slice has at least one finite entry (true for the
    softmax-style logits this is used on).
    """
    peak = arr.max(axis=-1, keepdims=True)
    return peak + np.log(np.exp(arr - peak).sum(axis=-1, keepdims=True))


def normalize_log(weights) -> ProbabilityVector:
    """Normalize log-domain weights into a probability vector.

    Accepts a :class:`LogWeightVector` or anything coercible to one, so an
    all-zero weight vector raises :class:`AllZeroWeights` either way.  The
    output is ``exp(log_entries - logsumexp(log_entries))``, which is
    invariant under adding a constant to every entry.
    """
    if not isinstance(weights, LogWeightVector):
        weights = LogWeightVector(weights)
    shifted = weights.log_entries - logsumexp(weights.log_entries)
    return ProbabilityVector(np.exp(shifted))
