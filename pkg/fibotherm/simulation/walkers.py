from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from logging import Logger
from math import ceil
from math import log
from math import sqrt
from typing import NamedTuple

import numpy as np
from numpy.random import Generator
from numpy.random import Philox
from numpy.random import SeedSequence
from numpy.typing import NDArray

from fibotherm.exceptions import ParameterError
from fibotherm.kneading import fibonacci_kneading
from fibotherm.models.kneading import KneadingData
from fibotherm.models.simulation import WalkRunReport
from fibotherm.walk import closed_form_stationary
from fibotherm.walk import drift

logger: Logger = getLogger(__name__)

BLOCK_SIZE: int = 4096
DEFAULT_CAP: int = 10_000
HISTOGRAM_BINS: int = 100


class _BlockResult(NamedTuple):
    counts: NDArray[np.int64]
    increment_sum: float
    increment_squares: float
    increments: int
    escaped: int
    frozen: int


def _run_block(
    q: NDArray[np.int64],
    log_lam: float,
    size: int,
    n_steps: int,
    seed: SeedSequence,
    threshold: int,
    cap: int,
    bins: int,
    burn_in: int,
) -> _BlockResult:
    rng: Generator = Generator(Philox(seed))
    states: NDArray[np.int64] = np.ones(size, dtype=np.int64)
    frozen: NDArray[np.bool_] = np.zeros(size, dtype=np.bool_)
    counts: NDArray[np.int64] = np.zeros(bins + 1, dtype=np.int64)
    increment_sum: float = 0.0
    increment_squares: float = 0.0
    increments: int = 0

    for step in range(n_steps):
        # inverse CDF of the geometric law P(G = g) = (1 - lam) lam^g
        jumps: NDArray[np.int64] = np.minimum(np.floor(np.log1p(-rng.random(size)) / log_lam), cap).astype(np.int64)
        targets: NDArray[np.int64] = q[states] + 1 + jumps
        active: NDArray[np.bool_] = ~frozen

        measured: NDArray[np.bool_] = active & (states >= 2)
        delta: NDArray[np.int64] = (targets - states)[measured]
        increment_sum += float(delta.sum())
        increment_squares += float((delta.astype(np.float64) ** 2).sum())
        increments += int(delta.size)

        over: NDArray[np.bool_] = active & (targets > cap)
        frozen |= over
        states = np.where(active, np.minimum(targets, cap), states)

        if step >= burn_in:
            counts += np.bincount(np.minimum(states, bins + 1) - 1, minlength=bins + 1)

    return _BlockResult(
        counts,
        increment_sum,
        increment_squares,
        increments,
        int(((states >= threshold) | frozen).sum()),
        int(frozen.sum()),
    )


def simulate_walk(
    lam: float,
    n_walkers: int = 10_000,
    n_steps: int = 10_000,
    seed: int = 20240607,
    threshold: int = 50,
    *,
    cap: int = DEFAULT_CAP,
    bins: int = HISTOGRAM_BINS,
    burn_in: int | None = None,
    threads: int = 1,
    kneading: KneadingData | None = None,
) -> WalkRunReport:
    """
    Run independent walkers of the induced random walk from state 1.

    From state i a walker jumps to Q(i) + 1 + G with G geometric, P(G = g) = (1 - lam) lam^g, sampled by inverse CDF.
    Walkers are split in blocks of 4096, each with a Philox generator spawned from the master seed, so the report
    does not depend on the number of threads. Walkers that pass the cap are frozen there.

    :param lam: The parameter, in (0, 1).
    :param n_walkers: The number of walkers, defaults to 10000.
    :param n_steps: The number of steps, defaults to 10000.
    :param seed: The master seed, defaults to 20240607.
    :param threshold: The state from which a walker counts as escaped, defaults to 50.
    :param cap: The largest state, defaults to 10000.
    :param bins: The number of states in the occupation histogram, defaults to 100.
    :param burn_in: The number of steps left out of the histogram, defaults to a tenth of the steps.
    :param threads: The number of worker threads, defaults to 1.
    :param kneading: Optional. The kneading data, defaults to the Fibonacci kneading.
    :raises ParameterError: If an argument is out of range.
    :return: A WalkRunReport object.
    """
    if not 0 < lam < 1:
        raise ParameterError(f"lambda must lie in (0, 1), got {lam}")
    if n_walkers < 1 or n_steps < 1 or threshold < 1 or bins < 1:
        raise ParameterError("Walkers, steps, threshold, and bins must be positive")

    fibonacci: bool = kneading is None
    kneading = kneading or fibonacci_kneading(cap)
    cap = min(cap, kneading.K)
    if threshold > cap:
        raise ParameterError(f"Threshold {threshold} exceeds the largest state {cap}")

    burn_in = n_steps // 10 if burn_in is None else burn_in
    q: NDArray[np.int64] = np.array(kneading.Q[: cap + 1], dtype=np.int64)
    blocks: int = ceil(n_walkers / BLOCK_SIZE)
    sizes: list[int] = [min(BLOCK_SIZE, n_walkers - b * BLOCK_SIZE) for b in range(blocks)]
    seeds: list[SeedSequence] = SeedSequence(seed).spawn(blocks)

    def run(index: int) -> _BlockResult:
        return _run_block(q, log(lam), sizes[index], n_steps, seeds[index], threshold, cap, bins, burn_in)

    with ThreadPoolExecutor(max_workers=threads) as executor:
        results: list[_BlockResult] = list(executor.map(run, range(blocks)))

    counts: NDArray[np.int64] = np.sum([r.counts for r in results], axis=0)
    histogram: NDArray[np.float64] = counts / max(counts.sum(), 1)
    increments: int = sum(r.increments for r in results)
    mean: float = sum(r.increment_sum for r in results) / max(increments, 1)
    variance: float = max(sum(r.increment_squares for r in results) / max(increments, 1) - mean**2, 0.0)

    tv_distance: float | None = None
    if lam < 0.5 and fibonacci:
        v: NDArray[np.float64] = closed_form_stationary(lam, bins)
        tv_distance = float(
            (np.abs(histogram[:bins] - v).sum() + abs(histogram[bins] - max(1 - v.sum(), 0.0))) / 2
        )

    logger.debug(f"Walk at lambda={lam}: {n_walkers} walkers in {blocks} blocks, {n_steps} steps")

    return WalkRunReport(
        lam=lam,
        n_walkers=n_walkers,
        n_steps=n_steps,
        seed=seed,
        threshold=threshold,
        cap=cap,
        escape_fraction=sum(r.escaped for r in results) / n_walkers,
        frozen_fraction=sum(r.frozen for r in results) / n_walkers,
        histogram=tuple(histogram.tolist()),
        drift=mean,
        drift_stderr=sqrt(variance / increments) if increments else 0.0,
        expected_drift=drift(lam),
        tv_distance=tv_distance,
    )
