"""Model JSON and table CSV readers, plus access to the bundled datasets.

Model files look like::

    {"rows": 3, "cols": 3, "minors": [[1, 1], [2, 2]]}

where ``minors`` may also be ``"all"`` or ``{"all_except": [[i, j], ...]}``.
Cells are 1-based.  Table files hold one row per line, comma-separated
nonnegative integers, no header.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .fitting import ContingencyTable
from .table_model import MinorSet, ModelError, Shape, all_except, validate_model


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + msg)
        self.line = line
        self.col = col


class NegativeCount(ParseError):
    pass


class RaggedRows(ParseError):
    pass


def bundled(name: str) -> Path:
    """Path of a bundled data file such as ``"biostat.csv"``."""
    path = resources.files("weakind") / "data" / name
    if not path.is_file():
        raise FileNotFoundError(f"no bundled dataset named {name!r}")
    return Path(str(path))


def bundled_names() -> list[str]:
    return sorted(p.name for p in (resources.files("weakind") / "data").iterdir() if p.is_file())


def resolve(path: str | Path) -> Path:
    """An existing path as given, otherwise a bundled file of that name."""
    p = Path(path)
    if p.exists():
        return p
    try:
        return bundled(p.name)
    except FileNotFoundError:
        raise FileNotFoundError(f"{path}: no such file (and no bundled dataset of that name)") from None


def parse_table(text: str) -> ContingencyTable:
    rows: list[list[int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        row = []
        for cn, field in enumerate(line.split(","), start=1):
            field = field.strip()
            try:
                value = int(field)
            except ValueError:
                raise ParseError(f"not an integer: {field!r}", ln, cn) from None
            if value < 0:
                raise NegativeCount(f"negative count {value}", ln, cn)
            if value >= 2**63:
                raise ParseError(f"count {value} does not fit in 64 bits", ln, cn)
            row.append(value)
        if rows and len(row) != len(rows[0]):
            raise RaggedRows(f"expected {len(rows[0])} entries, found {len(row)}", ln)
        rows.append(row)
    if not rows:
        raise ParseError("empty table")
    return ContingencyTable.from_rows(rows)


def read_table_csv(path: str | Path) -> ContingencyTable:
    return parse_table(resolve(path).read_text())


def model_from_dict(data: dict) -> MinorSet:
    try:
        shape = Shape(int(data["rows"]), int(data["cols"]))
        minors = data["minors"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"model needs integer 'rows', 'cols' and a 'minors' entry ({exc})") from None
    if isinstance(minors, dict):
        if set(minors) != {"all_except"}:
            raise ModelError("minors object must have the single key 'all_except'")
        return all_except(shape, minors["all_except"])
    return validate_model(shape, minors)


def model_to_dict(model: MinorSet, name: str | None = None) -> dict:
    out = {"rows": model.shape.rows, "cols": model.shape.cols, "minors": [list(a) for a in model.sorted_anchors]}
    if name:
        out = {"name": name, **out}
    return out


def read_model(path: str | Path) -> MinorSet:
    p = resolve(path)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: invalid JSON ({exc.msg})", exc.lineno, exc.colno) from None
    return model_from_dict(data)
