"""JSON ensemble and operator files.

Ensemble document::

    {
      "dims": {"dA": 2, "dB": 2},
      "labels": [1, 2, 3, 4],            # optional
      "states": [{"prior": 0.25, "matrix": [[[re, im], ...], ...]}, ...]
    }

Matrices are row-major grids of ``[re, im]`` pairs in the basis ordering
``|i>_A|j>_B -> i * dB + j``.  Priors may also be given as ``"p/q"`` strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .ensembles import StateEnsemble
from .hermlin import (
    HermitianOperator,
    ValidationError,
    matrix_from_literal,
    matrix_to_literal,
    operator_from_literal,
    operator_to_literal,
)


def _parse_prior(x) -> float:
    if isinstance(x, bool):
        raise ValidationError(f"bad prior {x!r}")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(Fraction(x))
        except (ValueError, ZeroDivisionError):
            pass
    raise ValidationError(f"bad prior {x!r}")


def ensemble_to_doc(ensemble: StateEnsemble) -> dict:
    da, db = ensemble.dims
    return {
        "dims": {"dA": da, "dB": db},
        "labels": list(ensemble.labels),
        "states": [
            {"prior": p, "matrix": matrix_to_literal(rho.entries)}
            for p, rho in zip(ensemble.priors, ensemble.states)
        ],
    }


def ensemble_from_doc(doc: dict) -> StateEnsemble:
    if not isinstance(doc, dict):
        raise ValidationError("ensemble document must be a JSON object")
    try:
        da, db = int(doc["dims"]["dA"]), int(doc["dims"]["dB"])
        items = doc["states"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"ensemble document missing field {exc}") from None
    if not isinstance(items, list) or not items:
        raise ValidationError("'states' must be a nonempty list")
    priors, states = [], []
    for k, item in enumerate(items):
        try:
            priors.append(_parse_prior(item["prior"]))
            states.append(HermitianOperator(da, db, matrix_from_literal(item["matrix"])))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"state {k}: missing field {exc}") from None
    labels = doc.get("labels")
    if labels is not None:
        labels = tuple(labels)
    return StateEnsemble(tuple(priors), tuple(states), labels)


def dump_ensemble(ensemble: StateEnsemble, path) -> None:
    Path(path).write_text(json.dumps(ensemble_to_doc(ensemble), indent=1) + "\n")


def load_document(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def load_ensemble(path) -> StateEnsemble:
    return ensemble_from_doc(load_document(path))


def load_operator(path) -> HermitianOperator:
    return operator_from_literal(load_document(path))


def dump_operator(h: HermitianOperator, path) -> None:
    Path(path).write_text(json.dumps(operator_to_literal(h), indent=1) + "\n")
