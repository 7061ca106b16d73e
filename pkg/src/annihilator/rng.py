"""Counter-based random streams keyed by (seed, trial, purpose).

Every random draw in the package goes through :func:`stream`, so a trial's
randomness depends only on the master seed, its index and what it is for,
never on execution order.
"""
import zlib

import numpy as np


def _tag(purpose):
    return zlib.crc32(str(purpose).encode("utf-8"))


def stream(seed, trial=0, purpose="default"):
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(int(trial), _tag(purpose)))
    return np.random.Generator(np.random.Philox(ss))


def complex_gaussian(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def unit_vector(rng, d):
    v = complex_gaussian(rng, d)
    return v / np.linalg.norm(v)


def unit_vectors(rng, count, d):
    V = complex_gaussian(rng, count, d)
    return V / np.linalg.norm(V, axis=1, keepdims=True)
