"""JSON serialization for every model type.

Floats are emitted with Python's shortest round-trip decimal (17
significant digits where needed), so a dump/load cycle reproduces every
parameter, and therefore every posterior, bit for bit.
"""

from __future__ import annotations

import json

import numpy as np

from .core import LabelSpace, ObservationAlphabet, ProbabilityVector
from .hmm import HmmModel
from .logreg import LogisticRegressionModel
from .naive_bayes import DiscriminativeNBModel, NaiveBayesModel


def model_to_dict(model) -> dict:
    """Plain-JSON representation of any supported model."""
    if isinstance(model, NaiveBayesModel):
        return {
            "type": "naive_bayes",
            "labels": list(model.labels.names),
            "T": model.n_positions,
            "alphabets": [list(ab.symbols) for ab in model.alphabets],
            "prior": model.prior.entries.tolist(),
            "emissions": [table.tolist() for table in model.emissions],
        }
    if isinstance(model, DiscriminativeNBModel):
        return {
            "type": "disc_nb",
            "labels": list(model.labels.names),
            "T": model.n_positions,
            "prior": model.prior.entries.tolist(),
            "params": {
                "a": model.slopes.tolist(),
                "c": model.intercepts.tolist(),
            },
        }
    if isinstance(model, LogisticRegressionModel):
        return {
            "type": "logreg",
            "labels": list(model.labels.names),
            "T": model.n_positions,
            "weights": model.weights.tolist(),
            "biases": model.biases.tolist(),
        }
    if isinstance(model, HmmModel):
        data = {
            "type": "hmm",
            "labels": list(model.labels.names),
            "alphabet": list(model.alphabet.symbols),
            "prior": model.prior.entries.tolist(),
            "transitions": model.transitions.tolist(),
        }
        if model.emissions is not None:
            data["emissions"] = model.emissions.tolist()
        if model.posteriors is not None:
            data["posteriors"] = model.posteriors.tolist()
        return data
    raise TypeError(f"cannot serialize {type(model).__name__}")


def model_from_dict(data: dict):
    """Rebuild a model from :func:`model_to_dict` output.

    Raises ``ValueError`` on a missing key, an unknown type tag, or a
    stored ``T`` that contradicts the parameter shapes; invariant
    violations surface as the constructors' own errors.
    """
    try:
        kind = data["type"]
        if kind == "naive_bayes":
            labels = LabelSpace(tuple(data["labels"]))
            alphabets = tuple(ObservationAlphabet(tuple(s)) for s in data["alphabets"])
            model = NaiveBayesModel(
                labels=labels,
                alphabets=alphabets,
                prior=ProbabilityVector(data["prior"]),
                emissions=tuple(np.array(t, dtype=float) for t in data["emissions"]),
            )
        elif kind == "disc_nb":
            model = DiscriminativeNBModel(
                labels=LabelSpace(tuple(data["labels"])),
                prior=ProbabilityVector(data["prior"]),
                slopes=np.array(data["params"]["a"], dtype=float),
                intercepts=np.array(data["params"]["c"], dtype=float),
            )
        elif kind == "logreg":
            model = LogisticRegressionModel(
                labels=LabelSpace(tuple(data["labels"])),
                weights=np.array(data["weights"], dtype=float),
                biases=np.array(data["biases"], dtype=float),
            )
        elif kind == "hmm":
            emissions = data.get("emissions")
            posteriors = data.get("posteriors")
            return HmmModel(
                labels=LabelSpace(tuple(data["labels"])),
                alphabet=ObservationAlphabet(tuple(data["alphabet"])),
                prior=ProbabilityVector(data["prior"]),
                transitions=np.array(data["transitions"], dtype=float),
                emissions=None if emissions is None else np.array(emissions, dtype=float),
                posteriors=None if posteriors is None else np.array(posteriors, dtype=float),
            )
        else:
            raise ValueError(f"unknown model type {kind!r}")
        stored_t = data["T"]
    except KeyError as exc:
        raise ValueError(f"model JSON is missing key {exc}") from None
    if model.n_positions != stored_t:
        raise ValueError(
            f"stored T={stored_t} contradicts parameter shapes (T={model.n_positions})"
        )
    return model


def dumps_model(model) -> str:
    return json.dumps(model_to_dict(model), indent=2)


def loads_model(text: str):
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("model JSON must be an object")
    return model_from_dict(data)


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_model(model))
        handle.write("\n")


def load_model(path):
    with open(path, "r", encoding="utf-8") as handle:
        return loads_model(handle.read())
