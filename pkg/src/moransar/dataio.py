"""CSV ingestion and small text outputs.

Input formats:

- sizes: rows of ``id,value``; a header row is detected and skipped.
- distances, matrix form: a header row of ids, then one row per element
  (row id first). A headerless all-numeric square matrix is accepted
  too, with positional ids.
- distances, long form: rows of ``id_a,id_b,distance``; each unordered
  pair must appear at least once, repeats must agree.
- critical values: header ``n,alpha,d_l,d_u``.

All parse failures carry the file path and 1-based line number.
"""

from __future__ import annotations

import csv
import json
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateId,
    IdMismatch,
    MissingPair,
    NonSquare,
    ParseError,
)
from .inference import DwCriticalValues
from .spatial_data import RawSizeVector


def _rows(path: str | Path) -> list[tuple[int, list[str]]]:
    """Non-empty CSV rows as (1-based line number, stripped fields)."""
    out = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            fields = [f.strip() for f in row]
            if not fields or all(f == "" for f in fields):
                continue
            if fields[0].startswith("#"):
                continue
            out.append((lineno, fields))
    return out


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def _parse_float(path: str | Path, lineno: int, text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(str(path), lineno, f"{what} is not a number: {text!r}") from None


def load_sizes(path: str | Path) -> RawSizeVector:
    """Read an ``id,value`` CSV into a raw size vector.

    Raises:
        ParseError: malformed rows or too few of them.
        DuplicateId: an id appears twice.
    """
    rows = _rows(path)
    if rows and len(rows[0][1]) >= 2 and not _is_number(rows[0][1][1]):
        rows = rows[1:]  # header
    ids: list[str] = []
    values: list[float] = []
    seen: set[str] = set()
    for lineno, fields in rows:
        if len(fields) != 2:
            raise ParseError(str(path), lineno, f"expected 2 fields, got {len(fields)}")
        ident, raw_value = fields
        if ident in seen:
            raise DuplicateId(f"{path}:{lineno}: duplicate id {ident!r}")
        seen.add(ident)
        ids.append(ident)
        values.append(_parse_float(path, lineno, raw_value, "size value"))
    if len(values) < 2:
        raise ParseError(str(path), 0, f"need at least 2 size rows, got {len(values)}")
    return RawSizeVector(ids=tuple(ids), values=np.asarray(values))


def _load_distance_matrix(path: str | Path) -> tuple[tuple[str, ...], np.ndarray]:
    rows = _rows(path)
    if not rows:
        raise ParseError(str(path), 0, "empty distance file")

    first_fields = rows[0][1]
    has_header = not all(_is_number(f) for f in first_fields)
    if has_header:
        ids = tuple(first_fields[1:])
        body = rows[1:]
        if len(ids) < 2:
            raise ParseError(str(path), rows[0][0], "header lists fewer than 2 ids")
        if len(set(ids)) != len(ids):
            raise DuplicateId(f"{path}: repeated id in distance header")
    else:
        ids = tuple(str(i) for i in range(len(first_fields)))
        body = rows

    n = len(ids)
    if len(body) != n:
        raise NonSquare(f"{path}: {n} columns but {len(body)} data rows")
    matrix = np.zeros((n, n))
    for i, (lineno, fields) in enumerate(body):
        if has_header:
            if len(fields) != n + 1:
                raise NonSquare(
                    f"{path}:{lineno}: expected id plus {n} values, got {len(fields)} fields"
                )
            if fields[0] != ids[i]:
                raise ParseError(
                    str(path), lineno,
                    f"row id {fields[0]!r} does not match header id {ids[i]!r}",
                )
            numbers = fields[1:]
        else:
            if len(fields) != n:
                raise NonSquare(
                    f"{path}:{lineno}: expected {n} values, got {len(fields)}"
                )
            numbers = fields
        for j, text in enumerate(numbers):
            matrix[i, j] = _parse_float(path, lineno, text, "distance")
    return ids, matrix


def _load_distance_long(path: str | Path) -> tuple[tuple[str, ...], np.ndarray]:
    rows = _rows(path)
    if rows and len(rows[0][1]) >= 3 and not _is_number(rows[0][1][2]):
        rows = rows[1:]  # header
    pair_values: dict[frozenset[str], float] = {}
    order: list[str] = []
    seen: set[str] = set()
    for lineno, fields in rows:
        if len(fields) != 3:
            raise ParseError(str(path), lineno, f"expected 3 fields, got {len(fields)}")
        id_a, id_b, raw_value = fields
        value = _parse_float(path, lineno, raw_value, "distance")
        for ident in (id_a, id_b):
            if ident not in seen:
                seen.add(ident)
                order.append(ident)
        if id_a == id_b:
            continue  # self-distance is never used
        key = frozenset((id_a, id_b))
        if key in pair_values and pair_values[key] != value:
            raise ParseError(
                str(path), lineno,
                f"pair ({id_a}, {id_b}) already given as {pair_values[key]!r}, "
                f"now {value!r}",
            )
        pair_values[key] = value
    if len(order) < 2:
        raise ParseError(str(path), 0, "long-form file names fewer than 2 elements")
    ids = tuple(order)
    n = len(ids)
    index = {ident: k for k, ident in enumerate(ids)}
    matrix = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            key = frozenset((ids[i], ids[j]))
            if key not in pair_values:
                raise MissingPair(ids[i], ids[j])
            matrix[i, j] = matrix[j, i] = pair_values[key]
    return ids, matrix


def load_distances(
    path: str | Path, dist_format: str = "matrix"
) -> tuple[tuple[str, ...], np.ndarray]:
    """Read a distance file; returns (ids, raw distance matrix).

    Symmetry and positivity are enforced downstream when the matrix is
    inverted into proximities, under the caller's symmetrize policy.

    Raises:
        ParseError, NonSquare, DuplicateId, MissingPair: per format.
        ValueError: on an unknown dist_format.
    """
    if dist_format == "matrix":
        return _load_distance_matrix(path)
    if dist_format == "long":
        return _load_distance_long(path)
    raise ValueError(f"unknown distance format: {dist_format!r}")


def align_to_ids(raw: RawSizeVector, ids: tuple[str, ...]) -> RawSizeVector:
    """Reorder a size vector to match the distance matrix's id order.

    Raises:
        IdMismatch: if the two id sets differ.
    """
    if set(raw.ids) != set(ids):
        missing = sorted(set(ids) - set(raw.ids))
        extra = sorted(set(raw.ids) - set(ids))
        raise IdMismatch(
            f"size ids do not match distance ids "
            f"(missing from sizes: {missing}, unmatched in sizes: {extra})"
        )
    if raw.ids == ids:
        return raw
    position = {ident: k for k, ident in enumerate(raw.ids)}
    order = [position[ident] for ident in ids]
    return RawSizeVector(ids=ids, values=raw.values[order])


def load_critical_values(path: str | Path) -> dict[tuple[int, float], DwCriticalValues]:
    """Read a ``n,alpha,d_l,d_u`` CSV into a lookup table.

    Raises:
        ParseError: malformed rows, missing header, or duplicate (n, alpha).
        InputError: rows violating 0 < d_l < d_u < 2.
    """
    rows = _rows(path)
    if not rows or [f.lower() for f in rows[0][1]] != ["n", "alpha", "d_l", "d_u"]:
        raise ParseError(str(path), rows[0][0] if rows else 0,
                         "expected header 'n,alpha,d_l,d_u'")
    table: dict[tuple[int, float], DwCriticalValues] = {}
    for lineno, fields in rows[1:]:
        if len(fields) != 4:
            raise ParseError(str(path), lineno, f"expected 4 fields, got {len(fields)}")
        n = int(_parse_float(path, lineno, fields[0], "n"))
        alpha = _parse_float(path, lineno, fields[1], "alpha")
        d_l = _parse_float(path, lineno, fields[2], "d_l")
        d_u = _parse_float(path, lineno, fields[3], "d_u")
        if (n, alpha) in table:
            raise ParseError(str(path), lineno, f"duplicate row for n={n}, alpha={alpha}")
        table[(n, alpha)] = DwCriticalValues(n=n, alpha=alpha, d_l=d_l, d_u=d_u)
    return table


def load_reference_values() -> dict:
    """Published 35-city results bundled for comparison runs.

    The underlying dataset is not distributed; the dict's
    ``dataset_available`` flag is False and the values serve as the
    comparison target for user-supplied copies of the data.
    """
    text = (
        resources.files("moransar") / "data" / "reference_values.json"
    ).read_text()
    return json.loads(text)


def write_sizes(raw: RawSizeVector, path: str | Path) -> None:
    """Write a size vector as an ``id,value`` CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "value"])
        for ident, value in zip(raw.ids, raw.values):
            writer.writerow([ident, repr(float(value))])


def write_distance_matrix(
    ids: tuple[str, ...], matrix: np.ndarray, path: str | Path
) -> None:
    """Write a distance matrix in the header-row CSV format."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", *ids])
        for ident, row in zip(ids, matrix):
            writer.writerow([ident, *(repr(float(v)) for v in row)])


def write_scatter_csv(dataset, path: str | Path) -> None:
    """Write scatter points as x,y rows, with trend lines in # comments."""
    lines = [dataset.empirical_line]
    if dataset.theoretical_line is not None:
        lines.insert(0, dataset.theoretical_line)
    with open(path, "w", newline="") as fh:
        fh.write(f"# mode {dataset.mode}\n")
        for line in lines:
            fh.write(f"# line {line.slope!r} {line.intercept!r} {line.label}\n")
        writer = csv.writer(fh)
        writer.writerow([dataset.x_label.replace(" ", "_"),
                        dataset.y_label.replace(" ", "_")])
        for x, y in dataset.points:
            writer.writerow([repr(float(x)), repr(float(y))])
