"""Seeded random streams"""
import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def replica_rng(seed: int, replica: int) -> np.random.Generator:
    """Independent stream for one replica, derived from (seed, replica index)."""
    return np.random.default_rng([seed, replica])
