"""Model files, builtin registry lookup and trace export.

Model files are JSON documents::

    {
      "states": ["a", "b"],
      "credal_sets": {
        "a": [ {"a": "1"} ],
        "b": [ {"a": "1/2", "b": "1/2"}, {"b": "1"} ]
      }
    }

Probabilities are strings -- ``"1/4"``, ``"0.25"`` or ``"1"`` -- so that the
model stays exact; bare JSON numbers are rejected because binary floats would
contaminate the rational arithmetic.  Omitted targets carry mass zero.
Closed-form operators are addressed by registry name, e.g.
``builtin:counterexample-5.1``.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import IO, Mapping, Sequence

import numpy as np

from .errors import ModelValidationError
from .operators import (
    BUILTIN_OPERATORS,
    CredalFamily,
    CredalOperator,
    UpperOperator,
    validate_family,
)

RATIONAL_HINT = 'write probabilities as strings like "1/4", "0.25" or "1"'


def parse_rational(value, where: str = "value") -> Fraction:
    if isinstance(value, bool) or not isinstance(value, str):
        raise ModelValidationError(
            f"{where}: expected a rational string, got {value!r}; {RATIONAL_HINT}"
        )
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelValidationError(
            f"{where}: cannot parse {value!r} as a rational; {RATIONAL_HINT}"
        ) from exc


def parse_model(data) -> CredalOperator:
    """Build an operator from a decoded model document."""
    if not isinstance(data, Mapping):
        raise ModelValidationError("the model document must be a JSON object")
    states = data.get("states")
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise ModelValidationError('"states" must be a list of state labels')
    raw_sets = data.get("credal_sets")
    if not isinstance(raw_sets, Mapping):
        raise ModelValidationError('"credal_sets" must be an object keyed by state label')
    credal_sets: dict[str, list[dict[str, Fraction]]] = {}
    for label, pmf_list in raw_sets.items():
        if not isinstance(pmf_list, list):
            raise ModelValidationError(
                f'credal set for state "{label}" must be a list of pmf objects'
            )
        parsed = []
        for k, entry in enumerate(pmf_list):
            if not isinstance(entry, Mapping):
                raise ModelValidationError(
                    f'pmf #{k} for state "{label}" must be an object mapping states to rationals'
                )
            parsed.append(
                {
                    target: parse_rational(
                        mass, where=f'credal_sets["{label}"][{k}]["{target}"]'
                    )
                    for target, mass in entry.items()
                }
            )
        credal_sets[label] = parsed
    return CredalOperator(validate_family(states, credal_sets))


def load_model(source: str | Path) -> UpperOperator:
    """Load an operator from a model file path or a ``builtin:`` registry name."""
    name = str(source)
    if name.startswith("builtin:"):
        factory = BUILTIN_OPERATORS.get(name)
        if factory is None:
            known = ", ".join(sorted(BUILTIN_OPERATORS))
            raise ModelValidationError(f"unknown builtin operator '{name}'; known: {known}")
        return factory()
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelValidationError(f"cannot read model file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelValidationError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    try:
        return parse_model(data)
    except ModelValidationError as exc:
        raise ModelValidationError(f"{path}: {exc}") from exc


def family_to_jsonable(family: CredalFamily) -> dict:
    """Serialize a family back into the model-file structure (round-trippable)."""
    sets: dict[str, list[dict[str, str]]] = {}
    for x, label in enumerate(family.space.labels):
        sets[label] = [
            {
                family.space.labels[y]: str(mass)
                for y, mass in enumerate(p.mass)
                if mass
            }
            for p in family.per_state[x]
        ]
    return {"states": list(family.space.labels), "credal_sets": sets}


def dump_model(family: CredalFamily, target: str | Path | IO[str]) -> None:
    payload = json.dumps(family_to_jsonable(family), indent=2) + "\n"
    if hasattr(target, "write"):
        target.write(payload)
    else:
        Path(target).write_text(payload)


def write_orbit_trace(
    target: str | Path | IO[str],
    labels: Sequence[str],
    trace: Sequence[np.ndarray],
) -> None:
    """CSV export of an orbit trace: one row per iteration, one column per state."""

    def _write(handle):
        writer = csv.writer(handle)
        writer.writerow(["iteration", *labels])
        for i, vec in enumerate(trace):
            writer.writerow([i, *(repr(float(v)) for v in vec)])

    if hasattr(target, "write"):
        _write(target)
    else:
        with open(target, "w", newline="") as handle:
            _write(handle)
