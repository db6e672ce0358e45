"""
Seeded random streams. Substreams are keyed by ``(seed, index...)`` through a counter-based bit generator so that
Monte Carlo results do not depend on the number of workers or on scheduling.
"""

import typing as t

import numpy as np

from poshrink import settings


def substream(seed: t.Optional[int] = None, *index: int) -> np.random.Generator:
    """
    Create an independent generator for a task.

    :param seed: Global seed. Defaults to ``settings.DEFAULT_SEED``.
    :param index: Task index path, for example ``(experiment_task, chunk)``.

    :return: Numpy generator backed by :class:`numpy.random.Philox`.
    """
    if seed is None:
        seed = settings.DEFAULT_SEED
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(i) for i in index))
    return np.random.Generator(np.random.Philox(sequence))


def sample_poisson(rng: np.random.Generator, means: np.ndarray, n: int) -> np.ndarray:
    """
    Draw ``n`` independent Poisson vectors.

    :param rng: Generator.
    :param means: Mean vector of length ``d``.
    :param n: Number of draws.

    :return: Int64 array of shape ``(n, d)``.
    """
    means = np.asarray(means, dtype=float)
    return rng.poisson(lam=means, size=(n, means.size)).astype(np.int64)


def sample_gamma(rng: np.random.Generator, shape: np.ndarray, rate: np.ndarray, n: int) -> np.ndarray:
    shape = np.asarray(shape, dtype=float)
    rate = np.broadcast_to(np.asarray(rate, dtype=float), shape.shape)
    return rng.gamma(shape=shape, scale=1.0 / rate, size=(n, shape.size))


def sample_uniform_open(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """
    Uniform draws on the open unit interval, used for gamma inversion with common random numbers.
    """
    tiny = np.finfo(float).tiny
    return np.clip(rng.random(size=(n, d)), tiny, 1.0 - np.finfo(float).epsneg)


def thin_binomial(rng: np.random.Generator, counts: np.ndarray, p: np.ndarray) -> np.ndarray:
    """
    Binomial thinning: keep each unit of ``counts`` independently with probability ``p`` (per coordinate).
    """
    p = np.broadcast_to(np.asarray(p, dtype=float), counts.shape)
    return rng.binomial(counts, p).astype(np.int64)


def derive_seed(seed: t.Optional[int], *index: int) -> int:
    """
    Integer seed of the substream ``(seed, index...)``, for APIs that take a seed rather than a generator.
    """
    if seed is None:
        seed = settings.DEFAULT_SEED
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(i) for i in index))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])
