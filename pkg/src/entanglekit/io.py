"""JSON state files.

Format::

    {"kind": "pure" | "density", "dims": [n_a, n_b], "re": [...], "im": [...]}

Pure states store the flat amplitude vector, density matrices the flat
row-major matrix (nested row lists are accepted on read). Floats are written
with Python's shortest round-trip representation, so no precision is lost.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import EntangleKitError, InvalidState
from .states import DensityMatrix, PureState, State, as_dims


def state_to_dict(state: State) -> dict:
    if isinstance(state, PureState):
        kind, data = "pure", state.amplitudes
    elif isinstance(state, DensityMatrix):
        kind, data = "density", state.matrix.reshape(-1)
    else:
        raise TypeError(f"cannot serialise {type(state).__name__}")
    return {
        "kind": kind,
        "dims": [state.dims.n_a, state.dims.n_b],
        "re": [float(x) for x in data.real],
        "im": [float(x) for x in data.imag],
    }


def state_from_dict(doc: dict) -> State:
    """Parse and validate a state document.

    Raises
    ------
    InvalidState
        For malformed documents or states that break an invariant; the
        message names the failed check.
    """
    try:
        kind = doc["kind"]
        dims = as_dims(doc["dims"])
        re = np.asarray(doc["re"], dtype=float).reshape(-1)
        im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=float).reshape(-1)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidState(f"malformed state document: {exc}") from None
    if re.shape != im.shape:
        raise InvalidState("'re' and 'im' have different lengths")
    data = re + 1j * im
    if kind == "pure":
        return PureState(dims, data)
    if kind == "density":
        if data.size != dims.d**2:
            raise InvalidState(f"density matrix needs {dims.d ** 2} entries, got {data.size}")
        return DensityMatrix(dims, data.reshape(dims.d, dims.d))
    raise InvalidState(f"unknown kind {kind!r}; expected 'pure' or 'density'")


def write_state(state: State, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state)))


def read_state(path) -> State:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise EntangleKitError(f"cannot read state file {path}: {exc}") from None
    return state_from_dict(doc)
