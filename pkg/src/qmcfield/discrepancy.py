"""Star discrepancy: exact 2D computation, sampled d-dimensional bound, experiments.

The exact value enumerates critical corners (u, v) built from point
coordinates and 1.  At every corner two counts matter: points strictly
inside the open box [0,u)x[0,v) bound the deficit direction (box measure
exceeding its share of points), and points inside the closed box
[0,u]x[0,v] bound the excess direction, since boxes approaching the corner
from above contain them at vanishing extra measure.  Skipping either
direction under-reports the supremum.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from qmcfield.samplers import PointSet, gen_grid, gen_halton, gen_jitter, gen_random, gen_sobol
from qmcfield.seeding import derive_seed
from qmcfield.select import fps_select, random_select

EXACT_MAX_POINTS = 10_000

_ROW_BLOCK = 256  # corner rows per chunk; bounds peak memory at ~3 * block * N floats


def star_discrepancy_2d_exact(ps: PointSet | np.ndarray) -> float:
    """Exact star discrepancy of a 2D point set.

    Points may lie anywhere in the plane: every point counts toward N, but
    only points inside [0,1)^2 can fall into an anchored box.
    """
    pts = ps.points if isinstance(ps, PointSet) else np.asarray(ps, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("exact star discrepancy requires a 2-d point set")
    n = pts.shape[0]
    if n == 0:
        raise ValueError("empty point set")
    if n > EXACT_MAX_POINTS:
        raise ValueError(f"exact mode capped at {EXACT_MAX_POINTS} points; use the estimator")

    pin = pts[np.all((pts >= 0.0) & (pts < 1.0), axis=1)]
    if pin.shape[0] == 0:
        return 1.0
    xs, xr = np.unique(pin[:, 0], return_inverse=True)
    ys, yr = np.unique(pin[:, 1], return_inverse=True)
    nx, ny = xs.size, ys.size
    counts = np.zeros((nx, ny), dtype=np.int64)
    np.add.at(counts, (xr, yr), 1)
    # closed[i, j] = number of points with x <= xs[i] and y <= ys[j]
    closed = counts.cumsum(axis=0).cumsum(axis=1)

    u = np.append(xs, 1.0)
    v = np.append(ys, 1.0)
    inv_n = 1.0 / n

    best = 0.0
    for lo in range(0, nx + 1, _ROW_BLOCK):
        hi = min(lo + _ROW_BLOCK, nx + 1)
        lam = u[lo:hi, None] * v[None, :]
        # closed count at corner (i, j); corners at 1 reuse the last row/col
        ci = np.minimum(np.arange(lo, hi), nx - 1)
        closed_blk = closed[ci][:, np.minimum(np.arange(ny + 1), ny - 1)]
        # open count: x < u[i] equals x <= xs[i-1], likewise in y; border rows
        # and columns at index 0 contain no points strictly below them
        open_blk = np.zeros((hi - lo, ny + 1), dtype=np.int64)
        rows = np.arange(lo, hi)
        nz = rows > 0
        if nz.any():
            open_blk[nz, 1:] = closed[rows[nz] - 1, :]
        d_deficit = (lam - open_blk * inv_n).max()
        d_excess = (closed_blk * inv_n - lam).max()
        best = max(best, d_deficit, d_excess)
    return float(best)


def _local_discrepancy(pts: np.ndarray, n: int, corners: np.ndarray) -> np.ndarray:
    """max(measure - open/n, closed/n - measure) per probe corner.

    pts holds only the in-domain points; n is the full set size.
    """
    open_cnt = np.all(pts[None, :, :] < corners[:, None, :], axis=2).sum(axis=1)
    closed_cnt = np.all(pts[None, :, :] <= corners[:, None, :], axis=2).sum(axis=1)
    lam = corners.prod(axis=1)
    return np.maximum(lam - open_cnt / n, closed_cnt / n - lam)


def star_discrepancy_estimate(ps: PointSet | np.ndarray, n_probes: int, seed: int) -> float:
    """Sampled lower bound on the star discrepancy in any dimension.

    Probe corners alternate between combinations of point coordinates and
    uniform random corners.  The probe stream is fixed per seed, so the
    estimate is monotone non-decreasing in n_probes.
    """
    pts = ps.points if isinstance(ps, PointSet) else np.asarray(ps, dtype=np.float64)
    if n_probes < 1:
        raise ValueError("n_probes must be >= 1")
    n, d = pts.shape
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    coords = [np.append(np.unique(pts[:, j]), 1.0) for j in range(d)]
    corners = np.empty((n_probes, d), dtype=np.float64)
    for j in range(d):
        picks = rng.integers(coords[j].size, size=n_probes)
        corners[:, j] = coords[j][picks]
    uniform = rng.random((n_probes, d))
    corners[1::2] = np.clip(uniform[1::2], 1e-12, 1.0)
    best = 0.0
    for lo in range(0, n_probes, 4096):
        blk = corners[lo : lo + 4096]
        best = max(best, float(_local_discrepancy(pts, blk).max()))
    return best


@dataclass
class DiscrepancyReport:
    """Aggregated star discrepancy of one sampler/selector/size configuration."""

    label: str
    initial_size: int
    subset_size: int
    trials: int
    mean: float
    std: float
    values: list = field(default_factory=list)

    @classmethod
    def from_values(cls, label, initial_size, subset_size, values) -> "DiscrepancyReport":
        arr = np.asarray(values, dtype=np.float64)
        return cls(
            label=label,
            initial_size=initial_size,
            subset_size=subset_size,
            trials=arr.size,
            mean=float(arr.mean()),
            std=float(arr.std(ddof=1)) if arr.size > 1 else 0.0,
            values=[float(x) for x in arr],
        )


_INITIAL_SAMPLERS = ("grid", "jitter", "sobol", "random", "halton")
_SELECTORS = ("fps", "random")


def _initial_set(sampler: str, size: int, sigma: float, seed: int) -> PointSet:
    if sampler == "grid" or sampler == "jitter":
        res = round(size ** 0.5)
        if res * res != size:
            raise ValueError(f"{sampler} initial size {size} is not a square")
        if sampler == "grid":
            return gen_grid(res, 2)
        return gen_jitter(res, 2, sigma, seed)
    if sampler == "sobol":
        return gen_sobol(size, 2)
    if sampler == "random":
        return gen_random(size, 2, seed)
    return gen_halton(size, 2)


def sampler_label(initial_sampler: str, selector: str) -> str:
    names = {"fps": "FPS", "random": "Random", "grid": "Grid",
             "jitter": "Jitter", "sobol": "Sobol", "halton": "Halton"}
    return f"{names[initial_sampler]}+{names[selector]}"


def run_discrepancy_experiment(
    initial_sampler: str,
    initial_size: int,
    selector: str,
    subset_sizes,
    trials: int = 10,
    seed: int = 0,
    sigma: float = 0.01,
) -> list[DiscrepancyReport]:
    """Exact 2D star discrepancy of selected subsets over repeated trials.

    The initial set is drawn in [0,1)^2, a subset of the largest requested
    size is selected per trial, and every requested size is measured on the
    prefix of that selection (farthest-point picks form a prefix sequence;
    a uniform permutation prefix is a uniform subset).
    """
    if initial_sampler not in _INITIAL_SAMPLERS:
        raise ValueError(f"unknown initial sampler {initial_sampler!r}")
    if selector not in _SELECTORS:
        raise ValueError(f"unknown selector {selector!r}")
    sizes = sorted(int(s) for s in subset_sizes)
    if not sizes or sizes[0] < 1:
        raise ValueError("subset sizes must be positive")
    k_max = sizes[-1]

    per_size = {s: [] for s in sizes}
    for t in range(trials):
        init_seed = derive_seed(seed, "init", t)
        ps = _initial_set(initial_sampler, initial_size, sigma, init_seed)
        sel_seed = derive_seed(seed, "select", t)
        if selector == "fps":
            order = fps_select(ps.points, k_max, sel_seed)
        else:
            perm = random_select(ps.points, len(ps), sel_seed)
            order = perm[:k_max]
        for s in sizes:
            per_size[s].append(star_discrepancy_2d_exact(ps.points[order[:s]]))

    label = sampler_label(initial_sampler, selector)
    return [
        DiscrepancyReport.from_values(label, initial_size, s, per_size[s])
        for s in sizes
    ]


def save_report_csv(reports, path) -> None:
    """One row per trial; means recomputable from the rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "initial_size", "subset_size", "trial", "star_discrepancy"])
        for rep in reports:
            for t, val in enumerate(rep.values):
                writer.writerow([rep.label, rep.initial_size, rep.subset_size, t, f"{val:.12g}"])


def save_report_json(reports, path) -> None:
    payload = [
        {
            "label": r.label,
            "initial_size": r.initial_size,
            "subset_size": r.subset_size,
            "trials": r.trials,
            "mean": r.mean,
            "std": r.std,
            "values": r.values,
        }
        for r in reports
    ]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def format_report_table(reports) -> str:
    """Text table with mean/std in units of 0.01, the scale used for publication."""
    by_size: dict[int, dict[str, DiscrepancyReport]] = {}
    labels: list[str] = []
    for r in reports:
        by_size.setdefault(r.subset_size, {})[r.label] = r
        if r.label not in labels:
            labels.append(r.label)
    lines = []
    header = ["size", "metric"] + labels
    widths = [8, 8] + [max(12, len(lb) + 2) for lb in labels]
    lines.append("star discrepancy, mean and std scaled by x0.01")
    lines.append("".join(h.ljust(w) for h, w in zip(header, widths)))
    for size in sorted(by_size):
        row_m = [str(size), "mean"]
        row_s = ["", "std"]
        for lb in labels:
            r = by_size[size].get(lb)
            row_m.append(f"{r.mean * 100:.2f}" if r else "-")
            row_s.append(f"{r.std * 100:.2f}" if r else "-")
        lines.append("".join(c.ljust(w) for c, w in zip(row_m, widths)))
        lines.append("".join(c.ljust(w) for c, w in zip(row_s, widths)))
    return "\n".join(lines)
