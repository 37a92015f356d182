"""
Field files for differential forms.

A form is stored as raw little-endian float64 data (components concatenated
in ``component_order``, each row-major with the last axis fastest) next to a
JSON sidecar ``<name>.json`` holding {half_dim, resolution, degree,
component_order}.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from momentlab.errors import GridMismatchError
from momentlab.forms.calculus import DifferentialForm, multi_indices
from momentlab.forms.grid import Grid

logger = logging.getLogger(__name__)

FIELD_DTYPE = np.dtype("<f8")
PathLike = Union[str, Path]


def sidecar_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def form_header(form: DifferentialForm) -> Dict[str, Any]:
    return {
        "half_dim": form.grid.half_dim,
        "resolution": form.grid.resolution,
        "degree": form.degree,
        "component_order": [list(i) for i in multi_indices(form.grid.dim, form.degree)],
    }


def write_form(form: DifferentialForm, path: PathLike) -> Path:
    """
    Write ``form`` to ``path`` plus its JSON sidecar.

    Returns:
        The path of the binary file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.concatenate(
        [
            np.ascontiguousarray(form.components[i], dtype=FIELD_DTYPE).ravel(order="C")
            for i in multi_indices(form.grid.dim, form.degree)
        ]
    )
    path.write_bytes(data.astype(FIELD_DTYPE).tobytes())
    sidecar_path(path).write_text(json.dumps(form_header(form), sort_keys=True, indent=2) + "\n")
    logger.debug("wrote degree-%d form to %s", form.degree, path)
    return path


def read_form(path: PathLike) -> DifferentialForm:
    """Read a form written by :func:`write_form`."""
    path = Path(path)
    header = json.loads(sidecar_path(path).read_text())
    grid = Grid(half_dim=int(header["half_dim"]), resolution=int(header["resolution"]))
    degree = int(header["degree"])
    order = [tuple(i) for i in header["component_order"]]
    if order != multi_indices(grid.dim, degree):
        raise GridMismatchError(f"unexpected component order in {sidecar_path(path)}: {order}")
    data = np.frombuffer(path.read_bytes(), dtype=FIELD_DTYPE)
    if data.size != grid.size * len(order):
        raise GridMismatchError(
            f"{path} holds {data.size} values, expected {grid.size * len(order)}"
        )
    blocks = data.reshape((len(order),) + grid.shape)
    components = {idx: blocks[k].astype(float) for k, idx in enumerate(order)}
    return DifferentialForm(grid, degree, components)


def export_csv(form: DifferentialForm, path: PathLike) -> Path:
    """One row per grid point: coordinates x1..x2n, then the components."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    grid = form.grid
    order = multi_indices(grid.dim, form.degree)
    columns = [c.ravel() for c in grid.coordinates()]
    columns += [form.components[i].ravel() for i in order]
    names = [f"x{i + 1}" for i in range(grid.dim)]
    names += ["f_" + ("".join(str(k + 1) for k in i) or "0") for i in order]
    np.savetxt(
        path,
        np.column_stack(columns),
        delimiter=",",
        header=",".join(names),
        comments="",
        fmt="%.17g",
    )
    return path
