"""Buchberger's algorithm specialised to pure-difference binomials.

A binomial ``x^a - x^b`` is stored as the pair of exponent tuples
``(a, b)`` with ``x^a`` the leading term.  S-polynomials and reductions of
such binomials are again pure differences, so no coefficients are kept.
Monomial orders are degree reverse lexicographic with respect to a
permutation of the variables.
"""

from __future__ import annotations

import heapq
from typing import Callable, Iterable, Sequence

Monomial = tuple[int, ...]
Binomial = tuple[Monomial, Monomial]


class ResourceLimit(RuntimeError):
    """A degree or size cap was exceeded."""


def grevlex_key(order: Sequence[int]) -> Callable[[Monomial], tuple]:
    """Sort key for degrevlex where ``order[0]`` is the largest variable.

    Larger key means larger monomial.
    """
    rev = tuple(reversed(order))

    def key(m: Monomial) -> tuple:
        return (sum(m), tuple(-m[v] for v in rev))

    return key


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def orient(u: Monomial, v: Monomial, key) -> Binomial | None:
    """Return the binomial u - v with its leading term first, or None if u == v."""
    if u == v:
        return None
    return (u, v) if key(u) > key(v) else (v, u)


def normal_form(m: Monomial, basis: Sequence[Binomial]) -> Monomial:
    """Fully reduce a monomial modulo the binomials (rewrite lead -> trail)."""
    changed = True
    while changed:
        changed = False
        for lead, trail in basis:
            if divides(lead, m):
                m = tuple(x - l + t for x, l, t in zip(m, lead, trail))
                changed = True
                break
    return m


def _coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


def groebner(
    gens: Iterable[Binomial],
    key,
    *,
    degree_cap: int = 20,
    size_cap: int = 20000,
) -> list[Binomial]:
    """Reduced Groebner basis of the ideal generated by pure-difference binomials."""
    basis: list[Binomial] = []
    for a, b in gens:
        f = orient(a, b, key)
        if f is not None:
            basis.append(f)
    basis = autoreduce(basis, key)

    # pending pairs: a set for the chain criterion, a heap for selection
    pairs: set[tuple[int, int]] = set()
    heap: list = []

    def push(i, j):
        l = lcm(basis[i][0], basis[j][0])
        pairs.add((i, j))
        heapq.heappush(heap, (sum(l), key(l), i, j))

    for j in range(len(basis)):
        for i in range(j):
            push(i, j)

    while heap:
        _, _, i, j = heapq.heappop(heap)
        pairs.discard((i, j))
        (a1, b1), (a2, b2) = basis[i], basis[j]
        if _coprime(a1, a2):
            continue
        l = lcm(a1, a2)
        if _chain_skip(i, j, l, basis, pairs):
            continue
        u = tuple(x - y + z for x, y, z in zip(l, a1, b1))
        v = tuple(x - y + z for x, y, z in zip(l, a2, b2))
        f = orient(normal_form(u, basis), normal_form(v, basis), key)
        if f is None:
            continue
        if sum(f[0]) > degree_cap:
            raise ResourceLimit(f"binomial of degree {sum(f[0])} exceeds cap {degree_cap}")
        basis.append(f)
        if len(basis) > size_cap:
            raise ResourceLimit(f"Groebner basis grew past {size_cap} elements")
        n = len(basis) - 1
        for k in range(n):
            push(k, n)
    return autoreduce(basis, key)


def _chain_skip(i: int, j: int, l: Monomial, basis, pairs) -> bool:
    # Buchberger's chain criterion: some lead term divides the lcm and both
    # connecting pairs have already been treated.
    for k, (lead, _) in enumerate(basis):
        if k in (i, j) or not divides(lead, l):
            continue
        if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
            return True
    return False


def autoreduce(basis: Iterable[Binomial], key) -> list[Binomial]:
    """Reduce every binomial modulo the others until nothing changes.

    Preserves the ideal.  Applied to a Groebner basis it yields the reduced
    Groebner basis.
    """
    work = list(set(basis))
    changed = True
    while changed:
        changed = False
        for k, f in enumerate(work):
            others = work[:k] + work[k + 1:]
            g = orient(normal_form(f[0], others), normal_form(f[1], others), key)
            if g != f:
                work = others + ([g] if g is not None and g not in others else [])
                changed = True
                break
    return sorted(work, key=lambda f: (key(f[0]), key(f[1])))
