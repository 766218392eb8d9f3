"""Sufficient-statistic matrix and monomial parametrization of a model.

The columns of the matrix are 0/1 indicator vectors over the row-major
vectorized table: maximal connected row and column runs, free cells, and
lower-right quadrants for the holes of the model.  Together they span the
orthogonal complement of the log-vectors of the chosen minors.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intlinalg import Echelon, IntVector, log_vector
from .table_model import Cell, Decomposition, MinorSet, Shape, decompose


class RankDeficient(RuntimeError):
    """The generated columns do not span the orthogonal complement of the minors."""


@dataclass(frozen=True)
class Label:
    kind: str  # "MCR", "MCC", "Free" or "Quadrant"
    cells: tuple[Cell, ...]

    @property
    def anchor(self) -> Cell:
        return self.cells[0]

    def __str__(self):
        if self.kind == "Free":
            return f"Free{self.cells[0]}"
        if self.kind == "Quadrant":
            i, j = self.cells[0]
            return f"Quadrant(rows>={i}, cols>={j})"
        return f"{self.kind}[{self.cells[0]}..{self.cells[-1]}]"


@dataclass(frozen=True)
class SuffStatMatrix:
    shape: Shape
    columns: tuple[IntVector, ...]
    labels: tuple[Label, ...]
    rank: int

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def statistic(self, table) -> tuple[int, ...]:
        """T(h) = A^t h for a row-major table vector (ints in, ints out)."""
        flat = list(table)
        return tuple(sum(flat[k] for k in support) for support in self.supports)

    @property
    def supports(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(k for k, x in enumerate(col) if x) for col in self.columns)

    def as_grid(self, column: int) -> list[list[int]]:
        col = self.columns[column]
        J = self.shape.cols
        return [list(col[r * J:(r + 1) * J]) for r in range(self.shape.rows)]


def _indicator(shape: Shape, cells) -> IntVector:
    v = [0] * shape.size
    for c in cells:
        v[shape.index(c)] = 1
    return tuple(v)


def quadrant_cells(shape: Shape, anchor: Cell) -> tuple[Cell, ...]:
    """Cells weakly below and to the right of ``anchor``."""
    i0, j0 = anchor
    return tuple((i, j) for (i, j) in shape.cells() if i >= i0 and j >= j0)


def generators(model: MinorSet, decomp: Decomposition | None = None) -> SuffStatMatrix:
    """Build the sufficient-statistic matrix of a model.

    Columns, in order: MCRs, MCCs, free cells, then one quadrant per corner,
    anchored one step below-right of the corner cell.  For some minor sets
    (for instance a plus-shaped set around a missing interior minor, or two
    diagonal holes) these columns fall short of full rank; quadrants of the
    remaining missing minors are then appended, in lex order, while each one
    increases the rank.
    """
    shape = model.shape
    if decomp is None:
        decomp = decompose(model)
    columns: list[IntVector] = []
    labels: list[Label] = []
    for run in decomp.mcrs:
        columns.append(_indicator(shape, run))
        labels.append(Label("MCR", run))
    for run in decomp.mccs:
        columns.append(_indicator(shape, run))
        labels.append(Label("MCC", run))
    for cell in decomp.free_cells:
        columns.append(_indicator(shape, [cell]))
        labels.append(Label("Free", (cell,)))
    for i, j in decomp.corners:
        anchor = (i + 1, j + 1)
        columns.append(_indicator(shape, quadrant_cells(shape, anchor)))
        labels.append(Label("Quadrant", (anchor,)))

    target = shape.size - len(model)
    ech = Echelon()
    for col in columns:
        ech.add(col)
    if ech.rank < target:
        # the quadrant of any missing minor is orthogonal to every minor of
        # the model; together with the runs and free cells they always span
        for i, j in model.missing:
            if (i, j) in decomp.corners:
                continue
            col = _indicator(shape, quadrant_cells(shape, (i + 1, j + 1)))
            if ech.add(col):
                columns.append(col)
                labels.append(Label("Quadrant", ((i + 1, j + 1),)))
                if ech.rank == target:
                    break
    current = ech.rank
    if current != target:
        raise RankDeficient(
            f"sufficient statistic has rank {current}, expected {target} for {shape} with {len(model)} minors"
        )
    return SuffStatMatrix(shape, tuple(columns), tuple(labels), current)


@dataclass(frozen=True)
class Parametrization:
    """Cell -> 0-based parameter indices; p[i,j] is proportional to the product of those parameters."""

    shape: Shape
    monomials: dict

    def evaluate(self, zeta):
        """Unnormalized table (row-major list) for a parameter vector ``zeta``."""
        out = []
        for cell in self.shape.cells():
            value = 1
            for k in self.monomials[cell]:
                value = value * zeta[k]
            out.append(value)
        return out

    def render(self) -> list[str]:
        lines = []
        for cell in self.shape.cells():
            mono = " * ".join(f"z{k + 1}" for k in self.monomials[cell]) or "1"
            lines.append(f"p{cell} = {mono}")
        return lines


def parametrize(a: SuffStatMatrix) -> Parametrization:
    """Read the monomial parametrization off the rows of the matrix."""
    shape = a.shape
    monomials = {}
    for cell in shape.cells():
        idx = shape.index(cell)
        monomials[cell] = tuple(k for k, col in enumerate(a.columns) if col[idx])
    return Parametrization(shape, monomials)


def z_matrix(model: MinorSet) -> list[IntVector]:
    """Log-vectors of the minors of the model, in lex order of anchors."""
    return [log_vector(a, model.shape) for a in model.sorted_anchors]
