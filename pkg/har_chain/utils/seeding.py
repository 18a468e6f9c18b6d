"""Named random sub-streams derived from one master seed."""

import zlib

import numpy as np


def _stream_key(name: str, *indices: int) -> tuple[int, ...]:
    return (zlib.crc32(name.encode("utf-8")), *indices)


def derive_rng(seed: int, name: str, *indices: int) -> np.random.Generator:
    """Create an independent generator for a named stream.

    Streams with different names (or indices) never share state, so drawing from
    one stream does not shift any other.

    :param seed: Master seed.
    :param name: Stream name, e.g. ``"shuffle"`` or ``"augment"``.
    :param indices: Optional extra keys such as a fold or trial index.
    :return: A fresh ``numpy.random.Generator``.
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=_stream_key(name, *indices))
    return np.random.default_rng(sequence)
