"""Point-set generators in the half-open unit cube.

All generators are deterministic given their parameters and seed.  Sets are
returned as :class:`PointSet` records carrying provenance metadata so that
files written from them can be reproduced bit for bit.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from qmcfield.aabb import Aabb

PSET_MAGIC = b"PSET"

# Direction-number parameters (degree, coefficient word, initial m values)
# for the first three Sobol dimensions, new Joe-Kuo style.  Dimension one is
# the van der Corput sequence in base 2 and needs no parameters.
_SOBOL_POLY = [
    (1, 0, [1]),
    (2, 1, [1, 3]),
]

_SOBOL_BITS = 32

_HALTON_BASES = [2, 3, 5]


@dataclass
class PointSet:
    """Ordered points in [0,1)^dim plus the recipe that produced them."""

    dim: int
    points: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(f"points must have shape (n, {self.dim})")
        if pts.size and (pts.min() < 0.0 or pts.max() >= 1.0):
            raise ValueError("coordinates must lie in [0, 1)")
        self.points = pts

    def __len__(self) -> int:
        return self.points.shape[0]


def gen_random(n: int, dim: int, seed: int) -> PointSet:
    """n i.i.d. uniform points in [0,1)^dim."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    pts = rng.random((n, dim))
    return PointSet(dim, pts, {"sampler": "random", "n": n, "seed": int(seed)})


def _grid_coords(res: int, dim: int) -> np.ndarray:
    axis = (np.arange(res, dtype=np.float64) + 0.5) / res
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    # x varies fastest: stack reversed so the first axis is the innermost
    cols = [m.reshape(-1, order="F") for m in mesh]
    return np.stack(cols, axis=1)


def gen_grid(res_per_axis: int, dim: int) -> PointSet:
    """res^dim cell-center lattice points, x varying fastest."""
    if res_per_axis < 2:
        raise ValueError("resolution must be >= 2")
    pts = _grid_coords(res_per_axis, dim)
    return PointSet(dim, pts, {"sampler": "grid", "res": res_per_axis})


def gen_jitter(res_per_axis: int, dim: int, sigma: float, seed: int) -> PointSet:
    """Cell-center lattice perturbed by N(0, sigma^2) per coordinate.

    Displaced coordinates are clamped to [0, 1) rather than wrapped; the
    perturbation is a physical jitter of lattice nodes, and wrapping would
    alter the low-frequency behaviour of the set's spectrum.
    """
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    pts = _grid_coords(res_per_axis, dim)
    if sigma > 0:
        rng = np.random.Generator(np.random.PCG64(int(seed)))
        pts = pts + rng.normal(0.0, sigma, size=pts.shape)
        np.clip(pts, 0.0, 1.0 - 1e-9, out=pts)
    return PointSet(
        dim,
        pts,
        {"sampler": "jitter", "res": res_per_axis, "sigma": float(sigma), "seed": int(seed)},
    )


def _sobol_direction_numbers(dim: int) -> np.ndarray:
    """V[j, k] as 32-bit integers for dimensions j < dim, bits k = 1..32."""
    v = np.zeros((dim, _SOBOL_BITS), dtype=np.uint64)
    # first dimension: m_k = 1 for all k
    for k in range(_SOBOL_BITS):
        v[0, k] = 1 << (_SOBOL_BITS - 1 - k)
    for j in range(1, dim):
        s, a, m_init = _SOBOL_POLY[j - 1]
        m = list(m_init)
        for k in range(s, _SOBOL_BITS):
            mk = m[k - s] ^ (m[k - s] << s)
            for i in range(1, s):
                if (a >> (s - 1 - i)) & 1:
                    mk ^= m[k - i] << i
            m.append(mk)
        for k in range(_SOBOL_BITS):
            v[j, k] = m[k] << (_SOBOL_BITS - 1 - k)
    return v


def gen_sobol(n: int, dim: int) -> PointSet:
    """First n points of the unscrambled Sobol sequence, starting at the origin."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= dim <= 3:
        raise ValueError("Sobol generator supports dim <= 3")
    v = _sobol_direction_numbers(dim)
    gray = np.arange(n, dtype=np.uint64)
    gray ^= gray >> np.uint64(1)
    x = np.zeros((n, dim), dtype=np.uint64)
    for k in range(_SOBOL_BITS):
        mask = (gray >> np.uint64(k)) & np.uint64(1)
        if not mask.any():
            break
        x ^= mask[:, None] * v[:, k][None, :]
    pts = x.astype(np.float64) / float(1 << _SOBOL_BITS)
    return PointSet(dim, pts, {"sampler": "sobol", "n": n})


def radical_inverse(i: int, base: int) -> float:
    """Digit-reversed fraction of i in the given base."""
    f, r = 1.0, 0.0
    while i > 0:
        i, digit = divmod(i, base)
        f /= base
        r += f * digit
    return r


def gen_halton(n: int, dim: int) -> PointSet:
    """Halton points i = 1..n with radical inverses in bases 2, 3, 5."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= dim <= 3:
        raise ValueError("Halton generator supports dim <= 3")
    idx = np.arange(1, n + 1, dtype=np.int64)
    pts = np.empty((n, dim), dtype=np.float64)
    for j in range(dim):
        base = _HALTON_BASES[j]
        i = idx.copy()
        f = np.ones(n)
        r = np.zeros(n)
        while i.max() > 0:
            i, digit = np.divmod(i, base)
            f /= base
            r += f * digit
        pts[:, j] = r
    return PointSet(dim, pts, {"sampler": "halton", "n": n})


def map_to_box(ps: PointSet, box: Aabb) -> np.ndarray:
    """Affinely map the unit-cube points into the given box."""
    if box.dim != ps.dim:
        raise ValueError("box dimension does not match point set")
    return box.lo + ps.points * box.size


def save_pset(ps: PointSet, path) -> None:
    """Write the PSET binary format plus a sidecar .json with the metadata."""
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(PSET_MAGIC)
        fh.write(struct.pack("<I", ps.dim))
        fh.write(struct.pack("<Q", len(ps)))
        fh.write(ps.points.astype("<f8").tobytes())
    meta_path = path.with_suffix(path.suffix + ".json")
    with open(meta_path, "w") as fh:
        json.dump(ps.meta, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_pset(path) -> PointSet:
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != PSET_MAGIC:
            raise ValueError(f"{path}: not a PSET file")
        (dim,) = struct.unpack("<I", fh.read(4))
        (count,) = struct.unpack("<Q", fh.read(8))
        data = np.frombuffer(fh.read(count * dim * 8), dtype="<f8")
    if data.size != count * dim:
        raise ValueError(f"{path}: truncated PSET file")
    meta_path = path.with_suffix(path.suffix + ".json")
    meta = {}
    if meta_path.exists():
        meta = json.loads(meta_path.read_text())
    return PointSet(dim, data.reshape(count, dim).copy(), meta)


def save_csv(ps: PointSet, path) -> None:
    header = ",".join("xyz"[: ps.dim])
    np.savetxt(path, ps.points, delimiter=",", header=header, comments="")
