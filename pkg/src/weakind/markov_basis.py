"""Markov bases for weakened independence models and a fiber-connectivity oracle.

A Markov basis is obtained as a generating set of the toric ideal of the
sufficient-statistic matrix: start from binomials of a lattice basis of
``ker A^t``, saturate one variable at a time, then thin the result to a
minimal generating set.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .binomials import Binomial, ResourceLimit, autoreduce, grevlex_key, groebner, normal_form, orient
from .intlinalg import IntVector, integer_kernel, matvec_t
from .suffstat import SuffStatMatrix
from .table_model import Shape

__all__ = [
    "MarkovBasis",
    "NotApplicable",
    "ResourceLimit",
    "compute_basis",
    "find_disconnected_fiber",
    "verify_connectivity",
    "enumerate_fiber",
]


class NotApplicable(ValueError):
    """The matrix is not a valid sufficient statistic for this computation."""


@dataclass(frozen=True)
class MarkovBasis:
    shape: Shape
    moves: tuple[IntVector, ...]

    def __len__(self):
        return len(self.moves)

    def grids(self) -> list[list[list[int]]]:
        J = self.shape.cols
        return [[list(m[r * J:(r + 1) * J]) for r in range(self.shape.rows)] for m in self.moves]

    def without(self, index: int) -> "MarkovBasis":
        return MarkovBasis(self.shape, self.moves[:index] + self.moves[index + 1:])


def _split(v: Sequence[int]) -> Binomial:
    return tuple(x if x > 0 else 0 for x in v), tuple(-x if x < 0 else 0 for x in v)


def normalize_move(v: Sequence[int]) -> IntVector:
    """Sign so that the first nonzero entry is positive."""
    lead = next((x for x in v if x), 0)
    return tuple(-x for x in v) if lead < 0 else tuple(v)


def _saturate(gens: list[Binomial], nvars: int, variables: Iterable[int], degree_cap: int) -> list[Binomial]:
    for x in variables:
        order = [v for v in range(nvars) if v != x] + [x]
        gb = groebner(gens, grevlex_key(order), degree_cap=degree_cap)
        gens = []
        for a, b in gb:
            k = min(a[x], b[x])
            if k:
                a = a[:x] + (a[x] - k,) + a[x + 1:]
                b = b[:x] + (b[x] - k,) + b[x + 1:]
            gens.append((a, b))
    return gens


def _minimal_generators(gens: list[Binomial], nvars: int, degree_cap: int) -> list[Binomial]:
    """Greedy minimal generating set of a homogeneous binomial ideal.

    Candidates are scanned by increasing degree; one is kept unless it already
    lies in the ideal spanned by those kept so far.
    """
    key = grevlex_key(range(nvars))
    cands = sorted({orient(a, b, key) for a, b in gens} - {None}, key=lambda f: (sum(f[0]), key(f[0]), key(f[1])))
    kept: list[Binomial] = []
    gb: list[Binomial] = []
    for f in cands:
        if gb and normal_form(f[0], gb) == normal_form(f[1], gb):
            continue
        kept.append(f)
        gb = groebner(kept, key, degree_cap=degree_cap)
    return kept


def compute_basis(a: SuffStatMatrix, *, degree_cap: int = 20) -> MarkovBasis:
    """Markov basis of the model with sufficient-statistic matrix ``a``.

    The binomials of a lattice basis of ``ker a^t`` generate an ideal whose
    saturation by the product of all variables is the toric ideal.  The
    saturation is done variable by variable under degrevlex with that
    variable last, dividing each Groebner element by the highest power of the
    variable it carries.
    """
    shape = a.shape
    n = shape.size
    if not a.columns or any(len(c) != n for c in a.columns):
        raise NotApplicable("matrix columns do not match the table shape")
    if any(x not in (0, 1) for c in a.columns for x in c):
        raise NotApplicable("sufficient-statistic columns must be 0/1")
    lattice = integer_kernel(a.columns, n)
    for v in lattice:
        if sum(v) != 0:
            # every move must preserve the sample size
            raise NotApplicable("the all-ones vector is not in the column span")
    if not lattice:
        return MarkovBasis(shape, ())

    gens = [_split(v) for v in lattice]
    used = sorted({k for v in lattice for k, x in enumerate(v) if x})
    gens = _saturate(gens, n, used, degree_cap)
    gens = _minimal_generators(gens, n, degree_cap)

    moves = {normalize_move(tuple(x - y for x, y in zip(p, q))) for p, q in gens}
    for m in moves:
        if any(matvec_t(a.columns, m)):
            raise AssertionError(f"move {m} is not in the kernel")
    return MarkovBasis(shape, tuple(sorted(moves, key=lambda m: (sum(x for x in m if x > 0), [-x for x in m]))))


# ---------------------------------------------------------------------------
# connectivity oracle


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_fiber(a: SuffStatMatrix, target: Sequence[int], node_budget: int = 10**6) -> list[IntVector]:
    """All nonnegative tables h with ``a^t h == target``, by bounded backtracking.

    Independent of any Markov basis.
    """
    n = a.shape.size
    supports = a.supports
    cell_cols = [[s for s, sup in enumerate(supports) if k in sup] for k in range(n)]
    last_cell = {s: max(sup) for s, sup in enumerate(supports) if sup}
    closing = [[s for s in cell_cols[k] if last_cell[s] == k] for k in range(n)]
    if any(not cc for cc in cell_cols):
        raise NotApplicable("some cell is not covered by any column; fiber is infinite")
    remaining = list(target)
    out: list[IntVector] = []
    table = [0] * n
    nodes = 0

    def rec(k: int):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise ResourceLimit(f"fiber enumeration exceeded {node_budget} nodes")
        if k == n:
            out.append(tuple(table))
            return
        upper = min(remaining[s] for s in cell_cols[k])
        if closing[k]:
            forced = {remaining[s] for s in closing[k]}
            if len(forced) != 1:
                return
            value = forced.pop()
            values = [value] if 0 <= value <= upper else []
        else:
            values = range(upper, -1, -1)
        for value in values:
            table[k] = value
            for s in cell_cols[k]:
                remaining[s] -= value
            rec(k + 1)
            for s in cell_cols[k]:
                remaining[s] += value
        table[k] = 0

    if any(t < 0 for t in target):
        return []
    rec(0)
    return out


def _disconnected(tables: Sequence[IntVector], moves: Sequence[IntVector]) -> bool:
    if len(tables) <= 1:
        return False
    index = {t: i for i, t in enumerate(tables)}
    parent = list(range(len(tables)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, t in enumerate(tables):
        for m in moves:
            for sign in (1, -1):
                u = tuple(x + sign * y for x, y in zip(t, m))
                j = index.get(u)
                if j is not None:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[ri] = rj
    root = find(0)
    return any(find(i) != root for i in range(len(tables)))


def _table_count(cells: int, n_max: int) -> int:
    return sum(comb(n + cells - 1, cells - 1) for n in range(n_max + 1))


def find_disconnected_fiber(
    basis: MarkovBasis,
    a: SuffStatMatrix,
    n_max: int,
    *,
    mode: str = "auto",
    samples: int = 200,
    seed: int = 0,
    node_budget: int = 10**6,
    extra_tables: Iterable[Sequence[int]] = (),
) -> list[IntVector] | None:
    """Return a fiber (list of tables) the moves fail to connect, or None.

    ``mode="exhaustive"`` walks every table with total at most ``n_max`` and
    groups them by sufficient statistic, so every such fiber is checked.
    ``mode="sampled"`` enumerates the fibers of ``samples`` random tables
    (plus ``extra_tables``) by backtracking.  ``"auto"`` picks exhaustive when
    the number of tables fits in ``node_budget``.
    """
    n = a.shape.size
    if n > 16 or n_max > 12:
        raise ValueError("connectivity oracle is limited to 16 cells and totals up to 12")
    moves = list(basis.moves)
    for m in moves:
        if any(matvec_t(a.columns, m)):
            raise NotApplicable(f"move {m} changes the sufficient statistic")
    count = _table_count(n, n_max)
    if mode == "auto":
        mode = "exhaustive" if count <= node_budget else "sampled"

    if mode == "exhaustive":
        if count > node_budget:
            raise ResourceLimit(f"{count} tables exceed the node budget {node_budget}")
        for total in range(n_max + 1):
            fibers: dict[tuple, list[IntVector]] = defaultdict(list)
            for h in _compositions(total, n):
                fibers[a.statistic(h)].append(h)
            for tables in fibers.values():
                if _disconnected(tables, moves):
                    return tables
        return None

    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    seeds: list[Sequence[int]] = list(extra_tables)
    for _ in range(samples):
        total = rng.randint(1, n_max)
        h = [0] * n
        for _ in range(total):
            h[rng.randrange(n)] += 1
        seeds.append(h)
    seen = set()
    for h in seeds:
        t = a.statistic(h)
        if t in seen:
            continue
        seen.add(t)
        tables = enumerate_fiber(a, t, node_budget)
        if _disconnected(tables, moves):
            return tables
    return None


def verify_connectivity(basis: MarkovBasis, a: SuffStatMatrix, n_max: int, **kwargs) -> bool:
    """True when the moves connect every checked fiber with total at most ``n_max``."""
    return find_disconnected_fiber(basis, a, n_max, **kwargs) is None
