"""JSON state files and event-string parsing.

A state file is a JSON object with "dims" (integer array) and exactly one
of "matrix" (2-D array of [re, im] pairs, row-major) or "vector" (1-D array
of [re, im] pairs).  Complex numbers are always [re, im] pairs.  Event
lists hold one entry per cluster: the literal string "I" for the certain
event or an object with a "matrix" key.
"""

from __future__ import annotations

import json
from typing import Any, Sequence

import numpy as np

from .correlations import EventString, Projector
from .linalg import ValidationError
from .partitions import ClusterDecomposition
from .states import DensityOperator, StateVector


def complex_to_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _pair_to_complex(p: Any, where: str) -> complex:
    if not isinstance(p, (list, tuple)) or len(p) != 2:
        raise ValidationError("complex-pair", f"{where}: expected a [re, im] pair, got {p!r}")
    return complex(float(p[0]), float(p[1]))


def matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    return [[complex_to_pair(z) for z in row] for row in np.asarray(m, dtype=complex)]


def vector_to_json(v: np.ndarray) -> list[list[float]]:
    return [complex_to_pair(z) for z in np.asarray(v, dtype=complex).reshape(-1)]


def matrix_from_json(rows: Any, where: str = "matrix") -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ValidationError("matrix-shape", f"{where}: expected a nonempty 2-D array")
    out = np.array(
        [[_pair_to_complex(p, where) for p in row] for row in rows], dtype=complex
    )
    return out


def vector_from_json(items: Any, where: str = "vector") -> np.ndarray:
    if not isinstance(items, list) or not items:
        raise ValidationError("vector-shape", f"{where}: expected a nonempty 1-D array")
    return np.array([_pair_to_complex(p, where) for p in items], dtype=complex)


def state_to_json(state: DensityOperator | StateVector) -> dict:
    if isinstance(state, StateVector):
        return {"dims": list(state.dims), "vector": vector_to_json(state.amplitudes)}
    return {"dims": list(state.dims), "matrix": matrix_to_json(state.matrix)}


def state_from_json(doc: Any) -> DensityOperator | StateVector:
    if not isinstance(doc, dict):
        raise ValidationError("state-file", "state file must be a JSON object")
    if "dims" not in doc:
        raise ValidationError("state-file", 'state file lacks "dims"')
    dims = doc["dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise ValidationError("state-file", '"dims" must be an array of integers')
    has_matrix = "matrix" in doc
    has_vector = "vector" in doc
    if has_matrix == has_vector:
        raise ValidationError("state-file", 'state file needs exactly one of "matrix" or "vector"')
    if has_vector:
        return StateVector(tuple(dims), vector_from_json(doc["vector"]))
    return DensityOperator(tuple(dims), matrix_from_json(doc["matrix"]))


def read_state(path: str) -> DensityOperator | StateVector:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json(json.load(fh))


def write_state(path: str, state: DensityOperator | StateVector) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_json(state), fh)
        fh.write("\n")


def as_density_operator(state: DensityOperator | StateVector) -> DensityOperator:
    return state.density() if isinstance(state, StateVector) else state


def events_from_json(
    doc: Any,
    cd: ClusterDecomposition,
    written_clusters: Sequence[tuple[int, ...]] | None = None,
) -> EventString:
    """Parse an event list: one entry per cluster, "I" or {"matrix": ...}.

    Entries follow `written_clusters` (the cluster order as the user wrote
    the partition) and are mapped onto the canonical cluster order; by
    default the canonical order itself is assumed.
    """
    order = list(written_clusters) if written_clusters is not None else list(cd.clusters)
    if sorted(order) != sorted(cd.clusters):
        raise ValidationError("events", "written cluster order does not match the partition")
    if not isinstance(doc, list):
        raise ValidationError("events", "events must be a JSON array, one entry per cluster")
    if len(doc) != len(order):
        raise ValidationError("events", f"{len(doc)} entries for {len(order)} clusters")
    entries: list[Projector | None] = []
    for k, item in enumerate(doc):
        if item == "I":
            entries.append(None)
        elif isinstance(item, dict) and "matrix" in item:
            entries.append(Projector(matrix_from_json(item["matrix"], where=f"events[{k}]")))
        else:
            raise ValidationError("events", f'entry {k} must be "I" or an object with a "matrix" key')
    by_cluster = dict(zip(order, entries))
    return EventString.of(cd, tuple(by_cluster[c] for c in cd.clusters))


def read_events(
    path: str,
    cd: ClusterDecomposition,
    written_clusters: Sequence[tuple[int, ...]] | None = None,
) -> EventString:
    with open(path, "r", encoding="utf-8") as fh:
        return events_from_json(json.load(fh), cd, written_clusters)


def projector_matrices_from_file(path: str) -> list[np.ndarray]:
    """Read a JSON array of matrix objects (or bare 2-D pair arrays)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, list):
        raise ValidationError("projector-file", "expected a JSON array of matrices")
    out = []
    for k, item in enumerate(doc):
        rows = item["matrix"] if isinstance(item, dict) and "matrix" in item else item
        out.append(matrix_from_json(rows, where=f"projectors[{k}]"))
    return out
