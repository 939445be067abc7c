"""Down-closed 2-D rate regions: construction, set ops, and gap metrics.

A region is stored as a sampled boundary r2max(r1) on an ascending r1
grid. Inner (achievable) regions interpolate with the upper concave
envelope, since chords are reachable by time sharing; outer regions
interpolate step-up (each cell takes the max of its bracketing samples)
so that sampling can never understate a converse bound.
"""

from __future__ import annotations

import enum
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInput, MixedKinds

R1_GRID_DEFAULT = 2048
ALPHA_GRID_DEFAULT = 1001

_FLOAT_FMT = "%.12e"
_MONO_SNAP = 1e-9


class Kind(enum.Enum):
    INNER = "inner"
    OUTER = "outer"


@dataclass(frozen=True, eq=False)
class RateRegion:
    """Sampled boundary of a down-closed rate region, in bits."""

    kind: Kind
    r1: np.ndarray
    r2: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        r1 = np.asarray(self.r1, dtype=float)
        r2 = np.asarray(self.r2, dtype=float)
        if r1.ndim != 1 or r1.shape != r2.shape or r1.size == 0:
            raise ValueError("r1/r2 must be matching 1-D arrays")
        if r1[0] < 0 or (r1.size > 1 and np.any(np.diff(r1) <= 0)):
            raise ValueError("r1 must ascend from 0")
        if np.any(r2 < -_MONO_SNAP) or np.any(~np.isfinite(r2)):
            raise ValueError("r2 must be finite and nonnegative")
        bumps = np.diff(r2)
        if bumps.size and bumps.max() > _MONO_SNAP:
            raise ValueError(f"r2 not non-increasing (bump {bumps.max():.3e})")
        r2 = np.minimum.accumulate(np.clip(r2, 0.0, None))
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)

    @property
    def r1_max(self) -> float:
        return float(self.r1[-1])

    @property
    def region_id(self) -> str:
        return self.meta.get("id", "")

    def boundary_at(self, x, outside=np.nan):
        """r2max at query points, per this kind's interpolation rule."""
        x = np.asarray(x, dtype=float)
        if self.kind is Kind.INNER:
            vals = np.interp(x, self.r1, self.r2)
        else:
            idx = np.clip(np.searchsorted(self.r1, x, side="right") - 1,
                          0, self.r1.size - 1)
            vals = self.r2[idx]
        return np.where((x >= -1e-12) & (x <= self.r1_max * (1 + 1e-12) + 1e-12),
                        vals, outside)

    def contains_points(self, x, y, tol: float = 0.0) -> np.ndarray:
        """Elementwise membership of (x, y) pairs, with slack tol in bits."""
        b = self.boundary_at(x, outside=-np.inf)
        return np.asarray(y, float) <= b + tol

    # -- serialization ------------------------------------------------------

    def to_csv(self) -> str:
        params = self.meta.get("params", {})
        cols = ["r1", "r2"] + list(params)
        buf = io.StringIO()
        buf.write(",".join(cols) + "\n")
        data = [self.r1, self.r2] + [np.asarray(params[k], float) for k in params]
        for row in zip(*data):
            buf.write(",".join(_FLOAT_FMT % v for v in row) + "\n")
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind.value, "id": self.region_id,
             "r1": self.r1.tolist(), "r2": self.r2.tolist()}
        params = self.meta.get("params", {})
        if params:
            d["params"] = {k: np.asarray(v, float).tolist() for k in params
                           for v in [params[k]]}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_csv(cls, text: str, kind: Kind, region_id: str = "") -> "RateRegion":
        lines = [ln for ln in text.strip().splitlines() if ln]
        header = lines[0].split(",")
        rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        meta = {"id": region_id}
        if len(header) > 2:
            meta["params"] = {h: rows[:, i] for i, h in enumerate(header) if i >= 2}
        return cls(kind, rows[:, 0], rows[:, 1], meta)

    @classmethod
    def from_json_dict(cls, d: dict) -> "RateRegion":
        meta = {"id": d.get("id", "")}
        if "params" in d:
            meta["params"] = {k: np.asarray(v, float) for k, v in d["params"].items()}
        return cls(Kind(d["kind"]), np.asarray(d["r1"], float),
                   np.asarray(d["r2"], float), meta)


@dataclass(frozen=True)
class GapReport:
    """Additive (bits) and multiplicative (ratio) gap between two regions."""

    additive: float
    multiplicative: float
    worst_r1_additive: float
    worst_r1_multiplicative: float

    def to_json_dict(self) -> dict:
        return {"additive_bits": self.additive,
                "multiplicative": self.multiplicative,
                "worst_r1_additive": self.worst_r1_additive,
                "worst_r1_multiplicative": self.worst_r1_multiplicative}


def _bin_argmax_reduce(r1: np.ndarray, r2: np.ndarray,
                       nbins: int) -> np.ndarray:
    """Indices of per-r1-bin r2 maximizers (true coordinates kept).

    Discarded points lie below their bin's champion, so the envelope
    loses at most one bin width of r1 detail, far below the resample
    grid. Linear time; used to shrink huge sweep clouds before sorting.
    """
    top = float(r1.max())
    if top <= 0.0:
        return np.array([int(np.argmax(r2))])
    idx = np.minimum((r1 * (nbins / top)).astype(np.int64), nbins - 1)
    best = np.full(nbins, -1.0)
    np.maximum.at(best, idx, r2)
    keep = np.flatnonzero(r2 >= best[idx])
    # never lose the extreme-r1 point (it anchors the support)
    keep = np.union1d(keep, [int(np.argmax(r1))])
    return keep


def _pareto_filter(r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """Indices of non-dominated points, ascending in r1 (r2 descending)."""
    order = np.lexsort((-r2, r1))
    r1s, r2s = r1[order], r2[order]
    first = np.ones(r1s.size, dtype=bool)
    first[1:] = r1s[1:] != r1s[:-1]
    order, r1s, r2s = order[first], r1s[first], r2s[first]
    suffix = np.maximum.accumulate(r2s[::-1])[::-1]
    keep = np.empty(r1s.size, dtype=bool)
    keep[-1] = True
    keep[:-1] = r2s[:-1] > suffix[1:]
    return order[keep]


def _upper_hull(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Indices of the upper concave envelope of points sorted by x."""
    hull: list[int] = []
    for i in range(x.size):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (x[a] - x[o]) * (y[i] - y[o]) - (y[a] - y[o]) * (x[i] - x[o])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.asarray(hull, dtype=int)


def from_pareto_points(points, kind: Kind, grid: int = R1_GRID_DEFAULT,
                       params: dict | None = None,
                       region_id: str = "") -> RateRegion:
    """Build a region from achievable/bound sample points.

    Dominated points are discarded, negatives clamped to zero, and the
    boundary is resampled onto a uniform r1 grid: concave envelope for
    inner regions, step-up for outer ones. `params` may carry per-point
    maximizer values (arrays aligned with `points`) into the region meta.
    """
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise EmptyInput("no points supplied")
    pts = pts.reshape(-1, 2)
    finite = np.all(np.isfinite(pts), axis=1)
    pts = np.clip(pts[finite], 0.0, None)
    if pts.size == 0:
        raise EmptyInput("no finite points supplied")
    src_idx = np.flatnonzero(finite)

    if pts.shape[0] > 16 * grid:
        red = _bin_argmax_reduce(pts[:, 0], pts[:, 1], 256 * grid)
        pts = pts[red]
        src_idx = src_idx[red]

    keep = _pareto_filter(pts[:, 0], pts[:, 1])
    r1s, r2s = pts[keep, 0], pts[keep, 1]
    keep_src = src_idx[keep]

    # coalesce half-ulp r1 ties: r2 descends, so the first of a tie group
    # carries the max and later members only stretch the hull downward
    tie = 1e-9 * max(float(r1s[-1]), 1.0)
    mask = np.concatenate([[True], np.diff(r1s) > tie])
    r1s, r2s, keep_src = r1s[mask], r2s[mask], keep_src[mask]

    r1max = float(r1s[-1])
    gx = np.linspace(0.0, r1max, grid) if r1max > 0 else np.array([0.0])

    if kind is Kind.INNER:
        if r1s[0] > 0.0:
            r1s = np.concatenate([[0.0], r1s])
            r2s = np.concatenate([[r2s[0]], r2s])
            keep_src = np.concatenate([[keep_src[0]], keep_src])
        hull = _upper_hull(r1s, r2s)
        hx, hy = r1s[hull], r2s[hull]
        gy = np.interp(gx, hx, hy)
        ref_x, ref_src = hx, keep_src[hull]
    else:
        gy_idx = np.clip(np.searchsorted(r1s, gx, side="right") - 1, 0, r1s.size - 1)
        gy = r2s[gy_idx]
        ref_x, ref_src = r1s, keep_src

    meta: dict = {"id": region_id}
    if params:
        sel = np.clip(np.searchsorted(ref_x, gx, side="right") - 1, 0, ref_x.size - 1)
        chosen = ref_src[sel]
        meta["params"] = {k: np.asarray(v, float)[chosen] for k, v in params.items()}
    return RateRegion(kind, gx, gy, meta)


def from_boundary(r1_grid, r2_vals, kind: Kind, region_id: str = "",
                  params: dict | None = None) -> RateRegion:
    """Wrap an exactly evaluated boundary (no resampling)."""
    meta: dict = {"id": region_id}
    if params:
        meta["params"] = {k: np.asarray(v, float) for k, v in params.items()}
    return RateRegion(kind, np.asarray(r1_grid, float),
                      np.asarray(r2_vals, float), meta)


def _common_kind(regions) -> Kind:
    kinds = {r.kind for r in regions}
    if len(kinds) != 1:
        raise MixedKinds("regions must share a kind")
    return kinds.pop()


def union(regions, grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Pointwise max of boundaries; inner unions get the time-sharing hull."""
    regions = list(regions)
    if not regions:
        raise EmptyInput("union of nothing")
    kind = _common_kind(regions)
    r1max = max(r.r1_max for r in regions)
    gx = np.linspace(0.0, r1max, grid) if r1max > 0 else np.array([0.0])
    gy = np.full(gx.shape, -np.inf)
    for r in regions:
        gy = np.maximum(gy, r.boundary_at(gx, outside=-np.inf))
    gy = np.clip(gy, 0.0, None)
    if kind is Kind.INNER:
        hull = _upper_hull(gx, gy)
        gy = np.interp(gx, gx[hull], gy[hull])
    else:
        gy = np.minimum.accumulate(gy)
    return RateRegion(kind, gx, gy, {"id": "|".join(r.region_id for r in regions)})


def intersect(regions, grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Pointwise min of boundaries on the shared support."""
    regions = list(regions)
    if not regions:
        raise EmptyInput("intersection of nothing")
    kind = _common_kind(regions)
    r1max = min(r.r1_max for r in regions)
    gx = np.linspace(0.0, r1max, grid) if r1max > 0 else np.array([0.0])
    gy = np.full(gx.shape, np.inf)
    for r in regions:
        # Regions already sampled on this exact grid contribute without
        # interpolation, preserving exactly constructed boundaries.
        if r.r1.size == gx.size and np.array_equal(r.r1, gx):
            gy = np.minimum(gy, r.r2)
        else:
            gy = np.minimum(gy, r.boundary_at(gx, outside=np.inf))
    gy = np.minimum.accumulate(np.clip(gy, 0.0, None))
    return RateRegion(kind, gx, np.asarray(gy),
                      {"id": "&".join(r.region_id for r in regions)})


def contains(outer: RateRegion, inner: RateRegion, tol: float = 0.0):
    """Check inner boundary <= outer boundary + tol on the merged grid.

    Returns (ok, violations) with violations as (r1, excess_bits) pairs.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    xs = np.unique(np.concatenate([inner.r1, outer.r1]))
    xs = xs[xs <= inner.r1_max * (1 + 1e-12) + 1e-12]
    iv = inner.boundary_at(xs, outside=0.0)
    ov = outer.boundary_at(xs, outside=-np.inf)
    excess = iv - (ov + tol)
    bad = excess > 0
    violations = list(zip(xs[bad].tolist(), (iv[bad] - ov[bad]).tolist()))
    return not bad.any(), violations


def _shift_gap_per_point(out_r1, out_r2, inner: RateRegion, hi: float,
                         tol: float) -> np.ndarray:
    """Per-point minimal shift delta via vectorized bisection."""
    lo = np.zeros_like(out_r1)
    hivec = np.full_like(out_r1, hi)

    def ok(delta):
        x = np.clip(out_r1 - delta, 0.0, None)
        y = np.clip(out_r2 - delta, 0.0, None)
        return inner.contains_points(x, y, tol=1e-12)

    good0 = ok(lo)
    for _ in range(60):
        mid = 0.5 * (lo + hivec)
        good = ok(mid)
        hivec = np.where(good, mid, hivec)
        lo = np.where(good, lo, mid)
        if np.max(hivec - lo) < tol:
            break
    return np.where(good0, 0.0, hivec)


def additive_gap(outer: RateRegion, inner: RateRegion,
                 tol: float = 1e-6) -> tuple[float, float]:
    """Smallest per-coordinate shift delta putting every outer sample in inner.

    Returns (delta_bits, worst_r1). Both rate coordinates are reduced by
    delta and clamped at zero before the membership test.
    """
    hi = max(outer.r1_max, float(outer.r2.max()), 1.0) + 1.0
    deltas = _shift_gap_per_point(outer.r1, outer.r2, inner, hi, tol)
    i = int(np.argmax(deltas))
    return float(deltas[i]), float(outer.r1[i])


def multiplicative_gap(outer: RateRegion, inner: RateRegion,
                       tol: float = 1e-9) -> tuple[float, float]:
    """Smallest M >= 1 with every outer sample, scaled by 1/M, inside inner.

    Returns (M, worst_r1); inf when the inner region is degenerate at the
    origin while the outer is not.
    """
    if float(inner.boundary_at(0.0)) <= 0.0 and inner.r1_max <= 0.0:
        degenerate = True
    else:
        degenerate = False
    out_r1, out_r2 = outer.r1, outer.r2
    inner_r20 = float(inner.boundary_at(0.0))

    def ok(m):
        return inner.contains_points(out_r1 / m, out_r2 / m, tol=1e-12)

    if bool(np.all(ok(np.float64(1.0)))):
        return 1.0, float(out_r1[0])
    needs_r2 = out_r2 > 0
    if degenerate or (inner_r20 <= 0.0 and needs_r2.any()):
        return math.inf, float(out_r1[np.argmax(out_r2)])

    lo, hi = 1.0, 2.0
    for _ in range(200):
        if bool(np.all(ok(hi))):
            break
        hi *= 2.0
    else:
        return math.inf, float(out_r1[0])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if bool(np.all(ok(mid))):
            hi = mid
        else:
            lo = mid
        if hi - lo < tol:
            break
    bad = ~ok(max(lo, 1.0))
    worst = float(out_r1[np.argmax(bad)]) if bad.any() else float(out_r1[0])
    return hi, worst


def gap_report(outer: RateRegion, inner: RateRegion) -> GapReport:
    add, wr_a = additive_gap(outer, inner)
    mul, wr_m = multiplicative_gap(outer, inner)
    return GapReport(add, max(mul, 1.0), wr_a, wr_m)
