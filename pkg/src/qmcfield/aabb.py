"""Axis-aligned boxes shared by grids, samplers and the geometry kernels."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned box given by inclusive lower/upper corners."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=np.float64)
        hi = np.asarray(self.hi, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("box corners must be 1-d vectors of equal length")
        if np.any(hi < lo):
            raise ValueError("box upper corner below lower corner")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def unit(cls, dim: int) -> "Aabb":
        return cls(np.zeros(dim), np.ones(dim))

    @classmethod
    def cube(cls, half: float, dim: int = 3) -> "Aabb":
        return cls(-half * np.ones(dim), half * np.ones(dim))

    @property
    def dim(self) -> int:
        return self.lo.shape[0]

    @property
    def size(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.size))

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=np.float64)
        return bool(np.all(p >= self.lo) and np.all(p <= self.hi))


DEFAULT_BOX = Aabb(-np.ones(3), np.ones(3))
