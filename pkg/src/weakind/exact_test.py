"""Exact conditional goodness-of-fit test by a Metropolis walk on the fiber.

The chain moves between tables sharing the observed sufficient statistic,
using a Markov basis, and targets the hypergeometric distribution
proportional to ``1 / prod h_ij!``.

Random numbers come from NumPy's PCG64 bit generator seeded with the given
64-bit seed; chain ``c`` of a multi-chain run uses seed ``seed + c``
(mod 2**64).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .fitting import ContingencyTable, FittedTable, fit_mle, g2, pearson_c2
from .markov_basis import MarkovBasis
from .suffstat import SuffStatMatrix

RNG_ALGORITHM = "numpy.random.PCG64"
TIE_TOL = 1e-12
_BLOCK = 65536


class InvalidParams(ValueError):
    pass


class EmptyBasis(ValueError):
    """The fiber is a single table; there is nothing to sample."""


@dataclass(frozen=True)
class RngSpec:
    seed: int
    algorithm: str = RNG_ALGORITHM

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise InvalidParams("seed must be an unsigned 64-bit integer")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))

    def derive(self, chain: int) -> "RngSpec":
        return RngSpec((self.seed + chain) % 2**64, self.algorithm)


@dataclass(frozen=True)
class ExactResult:
    stat: str
    observed: float
    p_exact: float
    mc_se: float
    exceed: int
    samples: int
    burn_in: int
    thinning: int
    seed: int
    chains: int
    acceptance_rate: float
    rng: str = RNG_ALGORITHM

    def to_dict(self) -> dict:
        return asdict(self)


def _statistic(kind: str, fit: FittedTable, n: int) -> Callable[[np.ndarray], float]:
    expected = n * fit.probs
    pos = expected > 0
    e = expected[pos]
    if kind == "c2":
        def c2(h):
            d = h[pos] - e
            return float(np.sum(d * d / e))
        return c2
    if kind == "g2":
        def g2_(h):
            mask = h > 0
            return float(2.0 * np.sum(h[mask] * np.log(h[mask] / expected[mask])))
        return g2_
    raise InvalidParams(f"unknown statistic {kind!r}; use 'c2' or 'g2'")


def run_chain(
    moves: Sequence[Sequence[int]],
    start: Sequence[int],
    burn_in: int,
    samples: int,
    thinning: int,
    rng: RngSpec,
) -> tuple[list[tuple[int, ...]], float]:
    """Run the Metropolis walk and return the recorded tables and acceptance rate.

    After ``burn_in`` steps, every ``thinning``-th state is recorded until
    ``samples`` states are collected.  Each step draws a move uniformly, a
    sign uniformly in {-1, +1}, and a uniform ``u``; the proposal is taken
    when it stays nonnegative and ``min(1, H(new)/H(old)) > u``.
    """
    if samples < 1 or thinning < 1 or burn_in < 0:
        raise InvalidParams("need samples >= 1, thinning >= 1, burn_in >= 0")
    if not moves:
        raise EmptyBasis("no moves")
    gen = rng.generator()
    h = [int(x) for x in start]
    total = sum(h)
    logfact = [math.lgamma(k + 1) for k in range(total + 1)]
    sparse = []
    for m in moves:
        idx = [k for k, x in enumerate(m) if x]
        sparse.append((idx, [int(m[k]) for k in idx]))
    L = len(sparse)

    steps = burn_in + samples * thinning
    recorded: list[tuple[int, ...]] = []
    accepted = 0
    done = 0
    while done < steps:
        block = min(_BLOCK, steps - done)
        which = gen.integers(0, L, size=block).tolist()
        signs = gen.integers(0, 2, size=block).tolist()
        us = gen.random(block).tolist()
        for t in range(block):
            idx, delta = sparse[which[t]]
            sign = 1 if signs[t] else -1
            ok = True
            logratio = 0.0
            for k, d in zip(idx, delta):
                new = h[k] + sign * d
                if new < 0:
                    ok = False
                    break
                logratio += logfact[h[k]] - logfact[new]
            if ok and (logratio >= 0.0 or math.exp(logratio) > us[t]):
                for k, d in zip(idx, delta):
                    h[k] += sign * d
                accepted += 1
            step = done + t + 1
            if step > burn_in and (step - burn_in) % thinning == 0:
                recorded.append(tuple(h))
        done += block
    return recorded, accepted / steps


def _one_chain(args):
    moves, start, stat, fit, n, burn_in, samples, thinning, seed = args
    f = _statistic(stat, fit, n)
    observed = f(np.asarray(start, dtype=float))
    tables, rate = run_chain(moves, start, burn_in, samples, thinning, RngSpec(seed))
    exceed = sum(1 for t in tables if f(np.asarray(t, dtype=float)) >= observed - TIE_TOL)
    return observed, exceed, rate


def mcmc_exact_test(
    a: SuffStatMatrix,
    basis: MarkovBasis,
    h: ContingencyTable,
    stat: str = "c2",
    samples: int = 10_000,
    burn_in: int = 50_000,
    thinning: int = 50,
    rng: RngSpec | int = 0,
    *,
    chains: int = 1,
    fit: FittedTable | None = None,
    workers: int | None = None,
) -> ExactResult:
    """Monte Carlo exact p-value of the goodness-of-fit statistic ``stat``.

    The statistic of each sampled table is measured against the MLE of the
    observed table, which is the same for the whole fiber.  The p-value is
    ``(1 + #exceedances) / (1 + samples)``; ties count as exceedances.  With
    ``chains > 1`` independent chains with derived seeds are pooled.
    """
    if not isinstance(rng, RngSpec):
        rng = RngSpec(int(rng))
    if stat not in ("c2", "g2"):
        raise InvalidParams(f"unknown statistic {stat!r}; use 'c2' or 'g2'")
    if samples < 1 or thinning < 1 or burn_in < 0 or chains < 1:
        raise InvalidParams("need samples >= 1, thinning >= 1, burn_in >= 0, chains >= 1")
    if h.total < 1:
        raise InvalidParams("table total must be at least 1")
    for m in basis.moves:
        if any(a.statistic(m)):
            raise InvalidParams(f"move {m} changes the sufficient statistic")
    if fit is None:
        fit = fit_mle(a, h, strict=True)
    observed = (pearson_c2 if stat == "c2" else g2)(h, fit)

    if not basis.moves:
        return ExactResult(stat, observed, 1.0, 0.0, 0, samples * chains, burn_in, thinning,
                           rng.seed, chains, 0.0, rng.algorithm)

    jobs = [
        (basis.moves, h.counts, stat, fit, h.total, burn_in, samples, thinning, rng.derive(c).seed)
        for c in range(chains)
    ]
    if chains > 1 and (workers is None or workers > 1):
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_chain, jobs))
    else:
        results = [_one_chain(j) for j in jobs]

    exceed = sum(r[1] for r in results)
    total = samples * chains
    p = (1 + exceed) / (1 + total)
    rate = sum(r[2] for r in results) / chains
    return ExactResult(stat, observed, p, math.sqrt(p * (1 - p) / total), exceed, total, burn_in,
                       thinning, rng.seed, chains, rate, rng.algorithm)
