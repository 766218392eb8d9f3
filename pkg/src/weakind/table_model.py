"""Table shapes, adjacent-minor sets and the combinatorics of the model graph.

Cells are 1-based ``(row, col)`` tuples and are ordered lexicographically
(row first).  A minor is identified by its anchor, the top-left cell of the
2x2 block it spans: anchor ``(i, j)`` stands for
``p[i,j] * p[i+1,j+1] - p[i+1,j] * p[i,j+1]``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

Cell = tuple[int, int]
Edge = tuple[Cell, Cell]


class ModelError(ValueError):
    """Base class for invalid model definitions."""


class OutOfBounds(ModelError):
    def __init__(self, anchor):
        super().__init__(f"minor anchor {anchor} lies outside the table")
        self.anchor = anchor


class DuplicateAnchor(ModelError):
    def __init__(self, anchor):
        super().__init__(f"minor anchor {anchor} given more than once")
        self.anchor = anchor


class ShapeTooSmall(ModelError):
    pass


@dataclass(frozen=True)
class Shape:
    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ShapeTooSmall(f"table shape must be positive, got {self.rows}x{self.cols}")

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def cells(self) -> Iterator[Cell]:
        """All cells in row-major (lexicographic) order."""
        for i in range(1, self.rows + 1):
            for j in range(1, self.cols + 1):
                yield (i, j)

    def index(self, cell: Cell) -> int:
        """Row-major 0-based position of a cell in the vectorized table."""
        i, j = cell
        return (i - 1) * self.cols + (j - 1)

    def cell(self, index: int) -> Cell:
        return (index // self.cols + 1, index % self.cols + 1)

    def contains(self, cell: Cell) -> bool:
        i, j = cell
        return 1 <= i <= self.rows and 1 <= j <= self.cols

    def on_border(self, cell: Cell) -> bool:
        i, j = cell
        return i in (1, self.rows) or j in (1, self.cols)

    def all_anchors(self) -> list[Cell]:
        return [(i, j) for i in range(1, self.rows) for j in range(1, self.cols)]

    def __str__(self):
        return f"{self.rows}x{self.cols}"


def minor_cells(anchor: Cell) -> tuple[Cell, Cell, Cell, Cell]:
    """The four cells of a minor: the two positive ones, then the two negative ones."""
    i, j = anchor
    return (i, j), (i + 1, j + 1), (i + 1, j), (i, j + 1)


def minor_edges(anchor: Cell) -> tuple[Edge, Edge, Edge, Edge]:
    i, j = anchor
    return (
        ((i, j), (i + 1, j)),
        ((i + 1, j), (i + 1, j + 1)),
        ((i, j + 1), (i + 1, j + 1)),
        ((i, j), (i, j + 1)),
    )


@dataclass(frozen=True)
class MinorSet:
    """A weakened independence model: a table shape plus a set of adjacent minors."""

    shape: Shape
    anchors: frozenset[Cell]

    @property
    def sorted_anchors(self) -> list[Cell]:
        return sorted(self.anchors)

    @property
    def missing(self) -> list[Cell]:
        """Anchors of the adjacent minors not in the model, in lex order."""
        return [a for a in self.shape.all_anchors() if a not in self.anchors]

    @property
    def is_complete(self) -> bool:
        return len(self.anchors) == (self.shape.rows - 1) * (self.shape.cols - 1)

    def __len__(self):
        return len(self.anchors)


AnchorSpec = Union[str, Iterable[Iterable[int]]]


def validate_model(shape: Shape | tuple[int, int], anchors: AnchorSpec) -> MinorSet:
    """Check an anchor list against a shape and build the ``MinorSet``.

    ``anchors`` is either the string ``"all"`` or an iterable of ``(i, j)``
    pairs with ``1 <= i < rows`` and ``1 <= j < cols``.
    """
    if not isinstance(shape, Shape):
        shape = Shape(*shape)
    if isinstance(anchors, str):
        if anchors != "all":
            raise ModelError(f"unknown anchor keyword {anchors!r}")
        if shape.rows < 2 or shape.cols < 2:
            raise ShapeTooSmall(f"a {shape} table has no 2x2 minors")
        return MinorSet(shape, frozenset(shape.all_anchors()))

    seen: set[Cell] = set()
    for raw in anchors:
        anchor = tuple(int(x) for x in raw)
        if len(anchor) != 2:
            raise ModelError(f"anchor {raw!r} must be a pair (row, col)")
        if shape.rows < 2 or shape.cols < 2:
            raise ShapeTooSmall(f"a {shape} table has no 2x2 minors")
        i, j = anchor
        if not (1 <= i < shape.rows and 1 <= j < shape.cols):
            raise OutOfBounds(anchor)
        if anchor in seen:
            raise DuplicateAnchor(anchor)
        seen.add(anchor)
    return MinorSet(shape, frozenset(seen))


def all_except(shape: Shape | tuple[int, int], excluded: Iterable[Iterable[int]]) -> MinorSet:
    """The complete set of adjacent minors with the given anchors removed."""
    full = validate_model(shape, "all")
    drop = validate_model(full.shape, excluded).anchors
    return MinorSet(full.shape, full.anchors - drop)


@dataclass(frozen=True)
class ModelGraph:
    shape: Shape
    edges: dict  # Edge -> multiplicity (1 or 2)

    def neighbours(self, cell: Cell) -> list[Cell]:
        return sorted(
            b if a == cell else a for (a, b) in self.edges if cell in (a, b)
        )

    def has_edge(self, a: Cell, b: Cell) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def degree(self, cell: Cell) -> int:
        return sum(1 for e in self.edges if cell in e)


def _graph_of(shape: Shape, anchors: Iterable[Cell]) -> ModelGraph:
    counts: Counter = Counter()
    for anchor in anchors:
        for a, b in minor_edges(anchor):
            counts[(min(a, b), max(a, b))] += 1
    return ModelGraph(shape, dict(counts))


def build_graph(model: MinorSet) -> ModelGraph:
    """The graph whose edges are the sides of the squares of the minors in the model."""
    return _graph_of(model.shape, model.anchors)


@dataclass(frozen=True)
class Decomposition:
    mcrs: list[tuple[Cell, ...]]
    mccs: list[tuple[Cell, ...]]
    free_cells: list[Cell]
    components: list[frozenset[Cell]]
    corners: list[Cell] = field(default_factory=list)

    @property
    def r(self) -> int:
        return len(self.mcrs)

    @property
    def c(self) -> int:
        return len(self.mccs)

    @property
    def f(self) -> int:
        return len(self.free_cells)

    @property
    def k(self) -> int:
        return len(self.components)


def _runs(lines: Iterable[list[Cell]], graph: ModelGraph) -> list[tuple[Cell, ...]]:
    runs = []
    for line in lines:
        current = [line[0]]
        for prev, cell in zip(line, line[1:]):
            if graph.has_edge(prev, cell):
                current.append(cell)
            else:
                if len(current) > 1:
                    runs.append(tuple(current))
                current = [cell]
        if len(current) > 1:
            runs.append(tuple(current))
    return runs


def _components(cells: Iterable[Cell], edges: Iterable[Edge]) -> list[frozenset[Cell]]:
    parent = {c: c for c in cells}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[Cell, set[Cell]] = {}
    for c in parent:
        groups.setdefault(find(c), set()).add(c)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def find_corners(model: MinorSet) -> list[Cell]:
    """Lex-smallest cell of each component of the complement graph that avoids the border.

    The complement graph is built from the minors *not* in the model; only
    cells touched by one of those minors take part.
    """
    shape = model.shape
    comp_graph = _graph_of(shape, model.missing)
    touched = {c for e in comp_graph.edges for c in e}
    corners = []
    for comp in _components(touched, comp_graph.edges):
        if not any(shape.on_border(c) for c in comp):
            corners.append(min(comp))
    return sorted(corners)


def decompose(model: MinorSet) -> Decomposition:
    """MCRs, MCCs, free cells, connected components and corners of a model."""
    shape = model.shape
    graph = build_graph(model)
    rows = [[(i, j) for j in range(1, shape.cols + 1)] for i in range(1, shape.rows + 1)]
    cols = [[(i, j) for i in range(1, shape.rows + 1)] for j in range(1, shape.cols + 1)]
    mcrs = sorted(_runs(rows, graph))
    mccs = sorted(_runs(cols, graph))
    touched = {c for e in graph.edges for c in e}
    free = [c for c in shape.cells() if c not in touched]
    components = _components(touched, graph.edges)
    return Decomposition(mcrs, mccs, free, components, find_corners(model))
