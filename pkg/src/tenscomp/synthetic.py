"""Synthetic low-tubal-rank tensors for benchmarks and the bundled fixture."""

from importlib import resources

import numpy as np

from .tsvd import t_product

__all__ = ["low_tubal_rank", "bundled_fixture_path"]


def low_tubal_rank(shape, rank, seed):
    """Random I1 x I2 x I3 tensor of tubal rank at most ``rank``.

    Built as the tensor-tensor product of I1 x rank x I3 and rank x I2 x I3
    standard-normal factors; deterministic per seed.
    """
    i1, i2, n3 = (int(s) for s in shape)
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((i1, rank, n3))
    b = rng.standard_normal((rank, i2, n3))
    return t_product(a, b)


def bundled_fixture_path():
    """Path of the packaged 20 x 20 x 5 tubal-rank-2 demo tensor."""
    return resources.files("tenscomp").joinpath("data/synth_20x20x5_rank2.dtf")
