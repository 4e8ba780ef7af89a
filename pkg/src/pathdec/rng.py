"""Seeded random streams.

Every random draw in the package comes from a Philox-4x64 generator (a
counter-based PRNG, numpy's ``Philox`` bit generator) keyed by a
``SeedSequence`` built from the user seed plus a *stream key*.  The stream
key names the consumer (graph generation, structure building, Monte-Carlo
trial ...) and any extra integers identifying the call, so independent
consumers never share a stream and results do not depend on call order.
"""

from __future__ import annotations

import struct

import numpy as np

MASK64 = (1 << 64) - 1

# Stream identifiers.  Changing these changes every reproducible artifact.
DNP = 1
EXAMPLE_CLASS = 2
DOT_A_STRUCTURE = 3
A0_STRUCTURE = 4
MONTECARLO = 5
P5_SAMPLING = 6


def float_key(x: float) -> int:
    """Stable integer key for a float (its IEEE-754 bit pattern)."""
    return struct.unpack("<Q", struct.pack("<d", float(x)))[0]


def make_rng(seed: int, stream: int, *extra: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & MASK64,
                                spawn_key=(stream, *[int(e) & MASK64 for e in extra]))
    return np.random.Generator(np.random.Philox(ss))
