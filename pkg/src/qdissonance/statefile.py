"""Plain-text serialization of density matrices.

Format (one matrix per file):

    qstate v1
    dims: 2 2
    <row 0: d complex entries, space-separated>
    ...

Entries are written as ``re+imj`` with 17 significant digits, which
round-trips IEEE doubles exactly.  Loading re-validates every density
matrix invariant.
"""

from __future__ import annotations

import numpy as np

from .qla import DensityMatrix, DomainError

__all__ = ["StateFileError", "FORMAT_VERSION", "dumps_state", "loads_state", "save_state", "load_state"]

FORMAT_VERSION = "qstate v1"


class StateFileError(ValueError):
    """The file is not a valid state file."""


def _format_entry(value: complex) -> str:
    return f"{value.real:.16e}{value.imag:+.16e}j"


def dumps_state(rho: DensityMatrix) -> str:
    lines = [FORMAT_VERSION, "dims: " + " ".join(str(d) for d in rho.legs)]
    for row in rho.matrix:
        lines.append(" ".join(_format_entry(v) for v in row))
    return "\n".join(lines) + "\n"


def loads_state(text: str) -> DensityMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != FORMAT_VERSION:
        raise StateFileError(f"missing or unknown format header (expected {FORMAT_VERSION!r})")
    if len(lines) < 2 or not lines[1].strip().startswith("dims:"):
        raise StateFileError("missing 'dims:' line")
    try:
        dims = tuple(int(tok) for tok in lines[1].split(":", 1)[1].split())
    except ValueError as exc:
        raise StateFileError(f"unparseable dims line: {exc}") from exc
    if not dims or any(d < 1 for d in dims):
        raise StateFileError(f"invalid dims {dims}")
    d = int(np.prod(dims))
    rows = lines[2:]
    if len(rows) != d:
        raise StateFileError(f"expected {d} matrix rows, found {len(rows)}")
    matrix = np.empty((d, d), dtype=complex)
    for i, row in enumerate(rows):
        toks = row.split()
        if len(toks) != d:
            raise StateFileError(f"row {i}: expected {d} entries, found {len(toks)}")
        try:
            matrix[i] = [complex(tok) for tok in toks]
        except ValueError as exc:
            raise StateFileError(f"row {i}: unparseable entry ({exc})") from exc
    try:
        return DensityMatrix(matrix, dims)
    except DomainError as exc:
        raise StateFileError(f"file does not encode a valid density matrix: {exc}") from exc


def save_state(rho: DensityMatrix, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_state(rho))


def load_state(path) -> DensityMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return loads_state(fh.read())
