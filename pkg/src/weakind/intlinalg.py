"""Exact integer linear algebra on small dense matrices.

Matrices are passed as sequences of integer column vectors, so a
sufficient-statistic matrix is simply the list of its generator columns.
Everything runs on Python ints; nothing here touches floating point.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

from .table_model import Cell, OutOfBounds, Shape, minor_cells

IntVector = tuple[int, ...]


def log_vector(anchor: Cell, shape: Shape) -> IntVector:
    """Exponent difference a - b of the minor p^a - p^b anchored at ``anchor``."""
    i, j = anchor
    if not (1 <= i < shape.rows and 1 <= j < shape.cols):
        raise OutOfBounds(anchor)
    v = [0] * shape.size
    pos1, pos2, neg1, neg2 = minor_cells(anchor)
    v[shape.index(pos1)] += 1
    v[shape.index(pos2)] += 1
    v[shape.index(neg1)] -= 1
    v[shape.index(neg2)] -= 1
    return tuple(v)


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        g = gcd(g, x)
        if g == 1:
            return row
    if g > 1:
        return [x // g for x in row]
    return row


class Echelon:
    """Incrementally maintained row-echelon form over the integers.

    ``add`` reports whether a vector is independent of those already added.
    Rows are kept primitive (content divided out) to limit growth.
    """

    def __init__(self):
        self.rows: list[tuple[int, list[int]]] = []  # (pivot column, row)

    def reduce(self, vec: Sequence[int]) -> list[int]:
        v = [int(x) for x in vec]
        for col, row in self.rows:
            x = v[col]
            if x:
                p = row[col]
                v = _primitive([p * a - x * b for a, b in zip(v, row)])
        return v

    def add(self, vec: Sequence[int]) -> bool:
        v = self.reduce(vec)
        for col, x in enumerate(v):
            if x:
                self.rows.append((col, v))
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(columns: Iterable[Sequence[int]]) -> int:
    """Rank over the rationals of the matrix with the given columns.

    Fraction-free elimination; each updated row is divided by the gcd of its
    entries so that coefficients stay small.
    """
    ech = Echelon()
    for c in columns:
        ech.add(c)
    return ech.rank


def matvec_t(columns: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    """m^t v for the matrix m with the given columns."""
    return tuple(sum(a * b for a, b in zip(col, v)) for col in columns)


def integer_kernel(columns: Sequence[Sequence[int]], length: int | None = None) -> list[IntVector]:
    """Lattice basis of ``{v in Z^length : m^t v = 0}``.

    Row-style Hermite reduction of ``[m | I]`` with unimodular integer row
    operations; rows whose ``m`` part vanishes carry a basis of the kernel
    lattice.  Because the transformation is unimodular the basis spans the
    full (saturated) kernel lattice.
    """
    cols = [list(map(int, c)) for c in columns]
    if length is None:
        if not cols:
            raise ValueError("length is required for a matrix without columns")
        length = len(cols[0])
    s = len(cols)
    rows = []
    for e in range(length):
        unit = [0] * length
        unit[e] = 1
        rows.append([c[e] for c in cols] + unit)

    active = list(range(length))
    for col in range(s):
        while True:
            nz = [k for k in active if rows[k][col] != 0]
            if len(nz) <= 1:
                break
            # pivot on the smallest absolute value to limit growth
            p = min(nz, key=lambda k: (abs(rows[k][col]), k))
            prow = rows[p]
            pv = prow[col]
            for k in nz:
                if k == p:
                    continue
                q = rows[k][col] // pv
                rows[k] = [a - q * b for a, b in zip(rows[k], prow)]
        nz = [k for k in active if rows[k][col] != 0]
        if nz:
            active.remove(nz[0])

    basis = [tuple(rows[k][s:]) for k in active]
    return reduce_basis(basis)


def _norm2(v: Sequence[int]) -> int:
    return sum(x * x for x in v)


def reduce_basis(basis: list[IntVector]) -> list[IntVector]:
    """Pairwise size reduction: replace ``u`` by ``u - q v`` while that shortens it.

    Keeps the lattice unchanged; purely cosmetic, smaller vectors give
    lower-degree binomials downstream.
    """
    basis = [list(v) for v in basis]
    changed = True
    while changed:
        changed = False
        basis.sort(key=_norm2)
        for a in range(len(basis)):
            for b in range(len(basis)):
                if a == b:
                    continue
                u, v = basis[a], basis[b]
                nv = _norm2(v)
                if nv == 0:
                    continue
                q = round(sum(x * y for x, y in zip(u, v)) / nv)
                if q:
                    w = [x - q * y for x, y in zip(u, v)]
                    if _norm2(w) < _norm2(u):
                        basis[a] = w
                        changed = True
    out = []
    for v in basis:
        lead = next((x for x in v if x), 0)
        out.append(tuple(-x for x in v) if lead < 0 else tuple(v))
    return sorted(out, key=lambda v: (_norm2(v), [-x for x in v]))


def solve_integer(columns: Sequence[Sequence[int]], target: Sequence[int]) -> list[int] | None:
    """Integer coefficients ``c`` with ``sum c_k columns[k] == target``, or None.

    Used to test lattice membership exactly.
    """
    cols = [list(map(int, c)) for c in columns]
    n = len(target)
    # each coordinate of the target gives one constraint on (c, t):
    # sum_k c_k columns[k][e] - t * target[e] == 0, and we need t == 1
    aug = [[c[e] for c in cols] + [-int(target[e])] for e in range(n)]
    kernel = integer_kernel(aug, length=len(cols) + 1)
    # find an integer combination of kernel vectors whose last coordinate is 1
    last = [v[-1] for v in kernel]
    g = 0
    for x in last:
        g = gcd(g, x)
    if g != 1:
        return None
    # extended gcd over the last coordinates
    coeffs = [0] * len(kernel)
    acc = 0
    for idx, x in enumerate(last):
        if x == 0:
            continue
        if acc == 0:
            coeffs[idx] = 1
            acc = x
            continue
        d, s, t = _xgcd(acc, x)
        coeffs = [s * c for c in coeffs]
        coeffs[idx] = t
        acc = d
    if acc < 0:
        coeffs = [-c for c in coeffs]
    sol = [0] * (len(cols) + 1)
    for c, v in zip(coeffs, kernel):
        if c:
            sol = [a + c * b for a, b in zip(sol, v)]
    assert sol[-1] == 1
    return sol[:-1]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t
