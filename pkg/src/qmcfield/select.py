"""Sparse training-subset selection: farthest-point, uniform and SDF-band stratified."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit, prange


@njit(cache=True, parallel=True)
def _fps_core(pts, first, k, order, radii2):
    n, d = pts.shape
    dist2 = np.full(n, np.inf)
    cur = first
    order[0] = first
    radii2[0] = np.inf
    for step in range(1, k):
        for i in prange(n):
            s = 0.0
            for j in range(d):
                t = pts[i, j] - pts[cur, j]
                s += t * t
            if s < dist2[i]:
                dist2[i] = s
        dist2[cur] = -1.0  # never re-select
        best = 0
        best_d = dist2[0]
        for i in range(1, n):
            if dist2[i] > best_d:
                best_d = dist2[i]
                best = i
        cur = best
        order[step] = cur
        radii2[step] = best_d


def fps_select(candidates, k: int, seed: int, return_radii: bool = False):
    """Greedy farthest-point subset of k indices.

    The first index is drawn uniformly from the seed; every following pick
    maximizes the minimum Euclidean distance to the points already chosen,
    with ties broken by the smallest candidate index.  Output is a prefix
    sequence: the first j entries are exactly the FPS selection of size j
    for the same start point.
    """
    pts = np.ascontiguousarray(candidates, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("candidates must be a 2-d array of points")
    n = pts.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} candidates")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    first = int(rng.integers(n))
    order = np.empty(k, dtype=np.int64)
    radii2 = np.empty(k, dtype=np.float64)
    _fps_core(pts, first, k, order, radii2)
    if return_radii:
        return order, np.sqrt(np.maximum(radii2, 0.0))
    return order


def random_select(candidates, k: int, seed: int) -> np.ndarray:
    """k distinct indices, uniform without replacement."""
    n = len(candidates)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} candidates")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    return rng.choice(n, size=k, replace=False).astype(np.int64)


@dataclass(frozen=True)
class BandSpec:
    """Disjoint SDF intervals with per-band selection fractions summing to 1.

    Intervals are half-open on the right; the last interval is closed so
    the band list covers its full range.  Candidates outside every band are
    never selected.
    """

    bands: tuple
    fractions: tuple

    def __post_init__(self):
        bands = tuple((float(lo), float(hi)) for lo, hi in self.bands)
        fractions = tuple(float(f) for f in self.fractions)
        if len(bands) != len(fractions) or not bands:
            raise ValueError("need one fraction per band")
        for (lo, hi) in bands:
            if hi <= lo:
                raise ValueError(f"empty band [{lo}, {hi})")
        for (_, hi), (lo2, _) in zip(bands, bands[1:]):
            if lo2 < hi:
                raise ValueError("bands must be disjoint and ordered")
        if any(f < 0 for f in fractions):
            raise ValueError("fractions must be >= 0")
        if abs(sum(fractions) - 1.0) > 1e-12:
            raise ValueError("fractions must sum to 1")
        object.__setattr__(self, "bands", bands)
        object.__setattr__(self, "fractions", fractions)

    @classmethod
    def near_surface(cls) -> "BandSpec":
        """Quarter fractions over [-0.10,-0.03), [-0.03,0), [0,0.03), [0.03,0.10]."""
        return cls(
            bands=((-0.10, -0.03), (-0.03, 0.0), (0.0, 0.03), (0.03, 0.10)),
            fractions=(0.25, 0.25, 0.25, 0.25),
        )

    def assign(self, sdf: np.ndarray) -> np.ndarray:
        """Band index per value, -1 where no band matches."""
        sdf = np.asarray(sdf, dtype=np.float64)
        out = np.full(sdf.shape, -1, dtype=np.int64)
        last = len(self.bands) - 1
        for b, (lo, hi) in enumerate(self.bands):
            if b == last:
                mask = (sdf >= lo) & (sdf <= hi)
            else:
                mask = (sdf >= lo) & (sdf < hi)
            out[mask] = b
        return out


def _quotas(k: int, fractions, active) -> np.ndarray:
    """floor(k*f) per active band, remainder to active bands in listed order."""
    fr = np.where(active, fractions, 0.0)
    total = fr.sum()
    if total <= 0:
        raise ValueError("no active bands left to absorb the selection")
    fr = fr / total
    base = np.floor(k * fr).astype(np.int64)
    rem = k - int(base.sum())
    for b in range(len(base)):
        if rem == 0:
            break
        if active[b]:
            base[b] += 1
            rem -= 1
    return base


def band_select(points, sdf, spec: BandSpec, k: int, seed: int) -> np.ndarray:
    """Stratified selection of k indices with per-band quotas.

    Quotas follow the band fractions; a band with too few candidates
    contributes everything it has and the deficit is redistributed over the
    remaining bands in proportion to their fractions (with a warning).
    """
    sdf = np.asarray(sdf, dtype=np.float64)
    points = np.asarray(points, dtype=np.float64)
    if len(points) != len(sdf):
        raise ValueError("points and sdf lengths differ")
    membership = spec.assign(sdf)
    nb = len(spec.bands)
    band_indices = [np.flatnonzero(membership == b) for b in range(nb)]
    capacity = np.array([len(ix) for ix in band_indices])
    if capacity.sum() == 0:
        raise ValueError("all bands empty")
    if capacity.sum() < k:
        raise ValueError(f"only {int(capacity.sum())} candidates inside bands, need {k}")

    fractions = np.array(spec.fractions)
    quota = _quotas(k, fractions, fractions > 0)
    while np.any(quota > capacity):
        over = quota > capacity
        deficit = int((quota[over] - capacity[over]).sum())
        quota[over] = capacity[over]
        warnings.warn(
            f"bands {np.flatnonzero(over).tolist()} short of quota; "
            f"redistributing {deficit} picks",
            stacklevel=2,
        )
        receivers = quota < capacity
        weights = np.where(receivers, fractions, 0.0)
        if weights.sum() == 0:
            weights = receivers.astype(np.float64)
        quota = quota + _quotas(deficit, weights, receivers)

    rng = np.random.Generator(np.random.PCG64(int(seed)))
    picks = []
    for b in range(nb):
        if quota[b] == 0:
            continue
        chosen = rng.choice(len(band_indices[b]), size=quota[b], replace=False)
        picks.append(band_indices[b][np.sort(chosen)])
    return np.concatenate(picks).astype(np.int64)


def save_indices(indices, path, meta: dict | None = None) -> None:
    """Raw little-endian u64 index list plus a provenance sidecar."""
    path = Path(path)
    np.asarray(indices, dtype="<u8").tofile(path)
    if meta is not None:
        with open(path.with_suffix(path.suffix + ".json"), "w") as fh:
            json.dump(meta, fh, sort_keys=True, indent=1)
            fh.write("\n")


def load_indices(path) -> np.ndarray:
    return np.fromfile(path, dtype="<u8").astype(np.int64)
