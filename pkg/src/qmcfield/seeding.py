"""Deterministic seed derivation for independently reproducible pipeline stages."""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(root: int, *labels) -> int:
    """Derive a 32-bit child seed from a root seed and a label path.

    Stages of a pipeline hash their name (and trial/epoch counters) together
    with the root seed so that each stage can be re-run in isolation without
    replaying the stages before it.
    """
    h = hashlib.sha256()
    h.update(str(int(root)).encode())
    for label in labels:
        h.update(b"/")
        h.update(str(label).encode())
    return int.from_bytes(h.digest()[:4], "little")


def rng_for(root: int, *labels) -> np.random.Generator:
    """Generator seeded by :func:`derive_seed` of the label path."""
    return np.random.Generator(np.random.PCG64(derive_seed(root, *labels)))
