"""Converse (outer) bounds as RateRegion constructors.

The alpha-parameterized closed-form bounds all share the cognitive-rate
constraint r1 <= cap(alpha * p1), so their boundaries are evaluated
exactly on the r1 grid by inverting alpha(r1), with no envelope
resampling error. The cooperative broadcast bound is a parameter sweep
and is sampled conservatively (step-up).

Cross-term convention: every alpha-parameterized bound uses
2*sqrt(abar * b^2 * p1 * p2), i.e. input correlation sqrt(1 - alpha),
so the cooperation term vanishes at alpha = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .channel import CapacityResult, ChannelParams, classify, s_channel_thresholds
from .errors import InvalidTransform, RegimeMismatch, SingularPreset
from .region import (ALPHA_GRID_DEFAULT, R1_GRID_DEFAULT, Kind, RateRegion,
                     from_boundary, from_pareto_points, intersect)
from .util import alpha_of_r1, cap, pos, r1_grid

BOUND_IDS = ("weak", "strong", "unified", "bc-pr", "bc-dms-deg", "bc-dms-s",
             "pl-si", "transform:tos", "transform:toweak", "transform:tovs",
             "best")

_PRESETS = ("tos", "toweak", "tovs")


def _cross(ch: ChannelParams, abar):
    return 2.0 * np.sqrt(np.maximum(abar, 0.0) * ch.b ** 2 * ch.p1 * ch.p2)


def _sum_si(ch: ChannelParams, abar):
    """cap of the full-power cooperative sum SNR at correlation sqrt(abar)."""
    return cap(ch.b ** 2 * ch.p1 + ch.p2 + _cross(ch, abar))


def weak_outer(ch: ChannelParams, grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Capacity region for b <= 1 (also the converse there)."""
    if ch.b > 1.0:
        raise RegimeMismatch("weak bound needs b <= 1")
    gx = r1_grid(ch.p1, grid)
    alpha = alpha_of_r1(gx, ch.p1)
    r2 = _sum_si(ch, 1.0 - alpha) - cap(ch.b ** 2 * alpha * ch.p1)
    return from_boundary(gx, pos(r2), Kind.OUTER, "weak", {"alpha": alpha})


def strong_outer(ch: ChannelParams, grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Strong-interference converse for b > 1: r1 cap plus sum-rate cap."""
    if ch.b <= 1.0:
        raise RegimeMismatch("strong bound needs b > 1")
    gx = r1_grid(ch.p1, grid)
    alpha = alpha_of_r1(gx, ch.p1)
    r2 = _sum_si(ch, 1.0 - alpha) - gx
    return from_boundary(gx, pos(r2), Kind.OUTER, "strong", {"alpha": alpha})


def unified_outer(ch: ChannelParams, grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Single bound covering both regimes.

    Per alpha: r1 <= cap(alpha p1), r2 <= sum_si(abar), and
    r1 + r2 <= sum_si(abar) + [cap(alpha p1) - cap(b^2 alpha p1)]^+.
    Reduces exactly to the strong bound for b > 1 and to the weak-regime
    capacity for b <= 1.
    """
    gx = r1_grid(ch.p1, grid)
    alpha = alpha_of_r1(gx, ch.p1)
    b_only = _sum_si(ch, 1.0 - alpha)
    s = b_only + pos(gx - cap(ch.b ** 2 * alpha * ch.p1))
    r2 = np.minimum(b_only, s - gx)
    return from_boundary(gx, pos(r2), Kind.OUTER, "unified", {"alpha": alpha})


def bc_dms_degraded_threshold(p1: float, p2: float) -> float:
    """b above which the cooperative bound beats the strong bound (degraded)."""
    if p1 <= 0.0:
        return math.inf
    return math.sqrt(p2 / p1) + math.sqrt(1.0 + p2 / p1)


def bc_dms_degraded_outer(ch: ChannelParams, grid: int = R1_GRID_DEFAULT,
                          tol: float = 1e-9) -> RateRegion:
    """Closed-form cooperative bound for the degraded channel (a b = 1, b >= 1)."""
    if not (abs(ch.a.imag) <= tol and ch.a.real > 0.0
            and abs(ch.a.real * ch.b - 1.0) <= tol and ch.b >= 1.0):
        raise RegimeMismatch("degraded cooperative bound needs real a = 1/b, b >= 1")
    gx = r1_grid(ch.p1, grid)
    alpha = alpha_of_r1(gx, ch.p1)
    b2p1 = ch.b ** 2 * ch.p1
    r2_bc = cap((ch.p2 + (1.0 - alpha) * b2p1 + 2.0 * math.sqrt(b2p1 * ch.p2))
                / (1.0 + alpha * ch.p1))
    r2_sum = _sum_si(ch, 1.0 - alpha) - gx
    return from_boundary(gx, pos(np.minimum(r2_bc, r2_sum)), Kind.OUTER,
                         "bc-dms-deg", {"alpha": alpha})


def bc_dms_s_threshold(p2: float) -> float:
    """b above which the cooperative bound beats the strong bound (a = 0)."""
    return math.sqrt(p2 + 1.0)


def bc_dms_s_outer(ch: ChannelParams, grid: int = R1_GRID_DEFAULT,
                   tol: float = 1e-9) -> RateRegion:
    """Cooperative degraded-message-set bound for the S channel (a = 0, b >= 1)."""
    if not (abs(ch.a) <= tol and ch.b >= 1.0):
        raise RegimeMismatch("S-channel cooperative bound needs a = 0, b >= 1")
    gx = r1_grid(ch.p1, grid)
    alpha = alpha_of_r1(gx, ch.p1)
    abar = 1.0 - alpha
    b2p1 = ch.b ** 2 * ch.p1
    den = 1.0 + alpha * ch.p1
    r2_bc = cap(ch.p2 + b2p1 * abar / den
                + 2.0 * np.sqrt(abar * b2p1 * ch.p2 / den))
    r2_sum = _sum_si(ch, abar) - gx
    return from_boundary(gx, pos(np.minimum(r2_bc, r2_sum)), Kind.OUTER,
                         "bc-dms-s", {"alpha": alpha})


# -- piecewise-linear relaxation of the strong bound -------------------------

def pl_si_points(ch: ChannelParams) -> dict:
    """Pareto corners of the piecewise-linear strong-interference bound.

    A: full-cooperation beamforming sum point at r1 = 0.
    B: (cap(p1), sum - cap(p1)) on the relaxed bound.
    C: the strong-bound corner sharing B's r1 coordinate.
    """
    peq = (math.sqrt(ch.b ** 2 * ch.p1) + math.sqrt(ch.p2)) ** 2
    c_p1 = float(cap(ch.p1))
    a_pt = (0.0, float(cap(peq)))
    b_pt = (c_p1, float(cap(peq)) - c_p1)
    c_pt = (c_p1, float(cap(ch.b ** 2 * ch.p1 + ch.p2)) - c_p1)
    return {"A": a_pt, "B": b_pt, "C": c_pt, "p_eq": peq}


def piecewise_linear_outer(ch: ChannelParams,
                           grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """r1 <= cap(p1) and r1 + r2 <= cap((sqrt(b^2 p1) + sqrt(p2))^2), b > 1."""
    if ch.b <= 1.0:
        raise RegimeMismatch("piecewise-linear bound needs b > 1")
    pts = pl_si_points(ch)
    gx = r1_grid(ch.p1, grid)
    r2 = pos(pts["A"][1] - gx)
    return from_boundary(gx, r2, Kind.OUTER, "pl-si")


# -- cooperative broadcast bound (full transmitter cooperation) --------------

def _recv_powers(ch: ChannelParams, c11, c12, c22):
    """Received powers of a 2x2 input covariance at both receivers."""
    at1 = c11 + abs(ch.a) ** 2 * c22 + 2.0 * np.real(np.conj(ch.a) * c12)
    at2 = ch.b ** 2 * c11 + c22 + 2.0 * ch.b * np.real(c12)
    return pos(at1), pos(at2)


def _dpc_points(ch: ChannelParams, b1, b2):
    """Rate pairs of both precoding orders for covariance splits b1 + b2.

    b1, b2: triples of arrays (c11, c12, c22), the cognitive and primary
    shares. Returns an (n, 2) stack of points from both orders.
    """
    s1r1, s1r2 = _recv_powers(ch, *b1)
    s2r1, s2r2 = _recv_powers(ch, *b2)
    # order 1: cognitive precoded first (clean at rx1), primary sees b1 at rx2
    r1_o1 = cap(s1r1)
    r2_o1 = cap(s2r2 / (1.0 + s1r2))
    # order 2: primary precoded first (clean at rx2), cognitive sees b2 at rx1
    r1_o2 = cap(s1r1 / (1.0 + s2r1))
    r2_o2 = cap(s2r2)
    pts = np.stack([np.concatenate([r1_o1, r1_o2]),
                    np.concatenate([r2_o1, r2_o2])], axis=1)
    return pts


def _split_grids(ch: ChannelParams, n: int, phases):
    """Coarse covariance splits: free sweep over share fractions/correlations."""
    t = np.linspace(0.0, 1.0, n)
    rho = np.linspace(-1.0, 1.0, n)
    a1, a2, q1, q2 = np.meshgrid(t, t, rho, rho, indexing="ij")
    a1, a2, q1, q2 = (v.ravel() for v in (a1, a2, q1, q2))
    out = []
    for ph1 in phases:
        for ph2 in phases:
            r1c = q1 * np.exp(1j * ph1)
            r2c = q2 * np.exp(1j * ph2)
            c12 = r1c * np.sqrt(a1 * ch.p1 * a2 * ch.p2)
            d12 = r2c * np.sqrt((1 - a1) * ch.p1 * (1 - a2) * ch.p2)
            b1 = (a1 * ch.p1, c12, a2 * ch.p2)
            b2 = ((1 - a1) * ch.p1, d12, (1 - a2) * ch.p2)
            out.append((b1, b2, (a1, a2, r1c, r2c)))
    return out


def _structured_slices(ch: ChannelParams, n: int):
    """Dense 1-D split families matching known closed-form boundaries.

    The share grid is refined quadratically toward both endpoints, where
    the rate maps compress (square-root cross terms), so the sampled
    staircase tracks each family's exact curve at grid resolution.
    """
    u = np.linspace(0.0, 1.0, n)
    t = np.unique(np.concatenate([u, u ** 2, 1.0 - u ** 2]))
    tb = 1.0 - t
    p1, p2 = ch.p1, ch.p2
    zero = np.zeros_like(t)
    slices = []
    # cognitive keeps a private share on its own antenna; primary gets the rest
    slices.append(((t * p1, zero + 0j, zero),
                   (tb * p1, np.sqrt(tb * p1 * p2) + 0j, zero + p2)))
    # fully-correlated split of the beamforming covariance
    s1 = (p1, math.sqrt(p1 * p2) + 0j, p2)
    slices.append(((t * s1[0], t * s1[1], t * s1[2]),
                   (tb * s1[0], tb * s1[1], tb * s1[2])))
    # cognitive rides the full primary antenna (beamforming toward rx1)
    slices.append(((t * p1, np.sqrt(t * p1 * p2) + 0j, zero + p2),
                   (tb * p1, zero + 0j, zero)))
    # equal-received-power rank-1 cognitive shares
    for tv in _equal_power_ratios(ch):
        scale = abs(1.0 + ch.a * tv) ** 2
        if scale <= 1e-12:
            continue
        v1sq = t * p1  # received power alpha*p1 at both receivers
        c11 = v1sq / scale
        c22 = c11 * abs(tv) ** 2
        ok = (c11 <= p1 + 1e-12) & (c22 <= p2 + 1e-12)
        if not ok.any():
            continue
        c11, c22 = c11[ok], c22[ok]
        c12 = c11 * np.conj(tv)
        d11 = pos(p1 - c11)
        d22 = pos(p2 - c22)
        d12 = np.sqrt(d11 * d22) + 0j
        slices.append(((c11, c12, c22), (d11, d12, d22)))
    return slices


def _equal_power_ratios(ch: ChannelParams):
    """Ratios t = v2/v1 with |v1 + a t v1| = |b v1 + t v1| (rank-1 shares)."""
    out = []
    if abs(ch.a - 1.0) > 1e-9:
        out.append((ch.b - 1.0) / (ch.a - 1.0))
    if abs(ch.a + 1.0) > 1e-9:
        out.append(-(ch.b + 1.0) / (ch.a + 1.0))
    return out


def _decimate(pts: np.ndarray, nbins: int) -> np.ndarray:
    """Keep one point per r1 bin (max r2), snapping r1 down to the bin edge.

    Every output point is dominated by an input point, so the decimated
    cloud describes a subset of the sampled region (sound for a bound
    sampled from below); the r1 snap loses less than one bin width.
    """
    if pts.shape[0] <= nbins:
        return pts
    top = pts[:, 0].max()
    if top <= 0.0:
        return pts[:1]
    idx = np.minimum((pts[:, 0] / top * nbins).astype(np.int64), nbins - 1)
    acc = np.full(nbins, -1.0)
    np.maximum.at(acc, idx, pts[:, 1])
    keep = acc >= 0.0
    edges = np.arange(nbins)[keep] * (top / nbins)
    out = np.stack([edges, acc[keep]], axis=1)
    ends = pts[pts[:, 0] >= top * (1.0 - 1e-12)]
    return np.concatenate([out, ends[:1]], axis=0)


def bc_pr_outer(ch: ChannelParams, coarse: int = 21,
                slice_points: int = ALPHA_GRID_DEFAULT,
                refine: bool = True, grid: int = R1_GRID_DEFAULT,
                floor_points=None) -> RateRegion:
    """Full-transmitter-cooperation broadcast bound (private rates).

    Sampled from below over covariance splits and both precoding orders,
    so the reported region is a subset of the true cooperative bound.
    Dense structured slices reproduce the known closed-form sub-families
    exactly; `floor_points` may supply achievable rate pairs (always
    members of the true bound) to floor the sample.
    """
    complex_a = abs(ch.a.imag) > 1e-12
    phases = (0.0, math.pi / 2, -math.pi / 2, math.pi / 4, -math.pi / 4) \
        if complex_a else (0.0,)
    n = 13 if complex_a else coarse
    chunks = []
    par_chunks = []
    for b1, b2, par in _split_grids(ch, n, phases):
        chunks.append(_dpc_points(ch, b1, b2))
        par_chunks.append(par)
    coarse_pts = np.concatenate(chunks, axis=0)

    pts = [_decimate(coarse_pts, 4 * grid)]
    for b1, b2 in _structured_slices(ch, slice_points):
        pts.append(_dpc_points(ch, b1, b2))

    if refine:
        pts.append(_refine_pass(ch, par_chunks, chunks, n))

    if floor_points is not None and len(floor_points):
        pts.append(np.asarray(floor_points, float).reshape(-1, 2))
    all_pts = _decimate(np.concatenate(pts, axis=0), 4 * grid)
    return from_pareto_points(all_pts, Kind.OUTER, grid=grid,
                              region_id="bc-pr")


def _refine_pass(ch: ChannelParams, par_chunks, chunks, n: int):
    """Re-grid locally around incumbent Pareto points of the coarse sweep."""
    pts = np.concatenate(chunks, axis=0)
    # parameters repeat once per precoding order inside _dpc_points
    a1 = np.concatenate([np.tile(p[0], 2) for p in par_chunks])
    a2 = np.concatenate([np.tile(p[1], 2) for p in par_chunks])
    q1 = np.concatenate([np.tile(p[2], 2) for p in par_chunks])
    q2 = np.concatenate([np.tile(p[3], 2) for p in par_chunks])
    # incumbents: per-bin argmax of r2 over ~64 r1 bins
    top = pts[:, 0].max()
    if top <= 0.0:
        return np.zeros((0, 2))
    nb = 64
    binidx = np.minimum((pts[:, 0] / top * nb).astype(np.int64), nb - 1)
    order = np.lexsort((pts[:, 1], binidx))
    last = np.flatnonzero(np.diff(binidx[order], append=nb + 1) != 0)
    keep = order[last]
    step = 1.0 / (n - 1)
    offs = np.linspace(-step, step, 5)
    oa, ob, oc, od = np.meshgrid(offs, offs, offs, offs, indexing="ij")
    oa, ob, oc, od = (v.ravel()[None, :] for v in (oa, ob, oc, od))
    k = keep[:, None]
    na = np.clip(a1[k] + oa, 0.0, 1.0).ravel()
    nb = np.clip(a2[k] + ob, 0.0, 1.0).ravel()
    nc = (np.clip(np.abs(q1[k]) + oc, 0.0, 1.0)
          * np.exp(1j * np.angle(q1[k]))).ravel()
    nd = (np.clip(np.abs(q2[k]) + od, 0.0, 1.0)
          * np.exp(1j * np.angle(q2[k]))).ravel()
    c12 = nc * np.sqrt(na * ch.p1 * nb * ch.p2)
    d12 = nd * np.sqrt((1 - na) * ch.p1 * (1 - nb) * ch.p2)
    b1 = (na * ch.p1, c12, nb * ch.p2)
    b2 = ((1 - na) * ch.p1, d12, (1 - nb) * ch.p2)
    return _dpc_points(ch, b1, b2)


# -- outer bounds by channel transformation ----------------------------------

@dataclass(frozen=True)
class TransformTriple:
    """Input-mixing coefficients sending this channel into another one."""

    a_coef: complex
    b_coef: complex
    c_coef: complex


def transform_target(ch: ChannelParams, tr: TransformTriple,
                     tol: float = 1e-9) -> ChannelParams:
    """Target channel whose capacity region bounds this channel's.

    The mixed inputs x1' = A x1 + B x2, x2' = C x2 reproduce this
    channel's outputs inside the target when |A| >= 1 and
    |C / (1 - B b)| >= 1; violations raise InvalidTransform.
    """
    a_, b_, c_ = tr.a_coef, tr.b_coef, tr.c_coef
    den = 1.0 - b_ * ch.b
    if abs(c_) <= tol or abs(den) <= tol:
        raise InvalidTransform("transformation denominators vanish")
    if abs(a_) < 1.0 - tol or abs(c_ / den) < 1.0 - tol:
        raise InvalidTransform("reconstruction constraints violated")
    a_t = (ch.a * a_ - b_) / c_
    b_t = abs(c_ * ch.b / den)
    p1_t = (abs(a_) * math.sqrt(ch.p1) + abs(b_) * math.sqrt(ch.p2)) ** 2
    p2_t = abs(c_) ** 2 * ch.p2
    return ChannelParams(a_t, b_t, p1_t, p2_t)


def preset_triple(ch: ChannelParams, preset: str) -> TransformTriple:
    """Coefficient presets mapping into channels with known capacity."""
    a, b = ch.a, ch.b
    if preset == "tos":
        if abs(1.0 - a * b) <= 1e-12:
            raise SingularPreset("a b = 1 makes the S-target power vanish")
        return TransformTriple(1.0, a, 1.0 - a * b)
    if preset == "toweak":
        if abs(a - 1.0) <= 1e-12 or b <= 1e-12:
            raise SingularPreset("needs a != 1 and b > 0")
        if abs(a * b - 1.0) <= 1e-12:
            raise SingularPreset("a b = 1 collapses the target power")
        den = b * (a - 1.0)
        return TransformTriple(1.0, a * (1.0 - b) / den, (a * b - 1.0) / den)
    if preset == "tovs":
        if abs(b - 1.0) <= 1e-12:
            raise SingularPreset("needs b != 1")
        den = b ** 2 - 1.0
        return TransformTriple(1.0, (b - a) / den, (a * b - 1.0) / den)
    raise ValueError(f"unknown preset {preset!r}")


def _preset_target(ch: ChannelParams, preset: str) -> ChannelParams:
    tgt = transform_target(ch, preset_triple(ch, preset))
    if preset == "tos":
        tgt = ChannelParams(0.0, tgt.b, tgt.p1, tgt.p2)
    elif preset == "toweak":
        tgt = ChannelParams(tgt.a, 1.0, tgt.p1, tgt.p2)
    elif preset == "tovs":
        # pad the smaller power so the target sits on the very-strong boundary
        p = max(tgt.p1, tgt.p2)
        tgt = ChannelParams(tgt.b, tgt.b, p, p)
    return tgt


def capacity_region(ch: ChannelParams, grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Exact capacity region for channels in a known-capacity regime."""
    rep = classify(ch)
    if rep.capacity_known is CapacityResult.UNKNOWN:
        raise RegimeMismatch("capacity unknown for this channel")
    if rep.capacity_known is CapacityResult.Z_TRIVIAL:
        gx = r1_grid(ch.p1, grid)
        return from_boundary(gx, np.full(gx.shape, float(cap(ch.p2))),
                             Kind.OUTER, "capacity")
    if rep.capacity_known is CapacityResult.WEAK:
        return weak_outer(ch, grid)
    if rep.capacity_known in (CapacityResult.VERY_STRONG, CapacityResult.PDC):
        return strong_outer(ch, grid)
    # S channel: low branch matches the strong bound, high branch the
    # cooperative degraded-message-set bound
    low, _ = s_channel_thresholds(ch.p1, ch.p2)
    if ch.b <= low:
        return strong_outer(ch, grid)
    return intersect([bc_dms_s_outer(ch, grid), strong_outer(ch, grid)], grid)


def transformed_outer(ch: ChannelParams, triples=None, preset: str | None = None,
                      grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Outer bound inherited from a transformed channel.

    With a preset, the target is designed to land in a known-capacity
    regime and its exact capacity region is returned; with explicit
    triples, the targets' depth-limited best outer bounds are intersected.
    """
    if (triples is None) == (preset is None):
        raise ValueError("pass exactly one of triples/preset")
    if preset is not None:
        tgt = _preset_target(ch, preset)
        rep = classify(tgt)
        if rep.capacity_known is CapacityResult.UNKNOWN:
            reg = best_outer(tgt, grid=grid, depth=1)
        else:
            reg = capacity_region(tgt, grid)
        return RateRegion(Kind.OUTER, reg.r1, reg.r2,
                          {"id": f"transform:{preset}"})
    regions = []
    for tr in triples:
        tgt = transform_target(ch, tr)
        regions.append(best_outer(tgt, grid=grid, depth=1))
    out = intersect(regions, grid) if len(regions) > 1 else regions[0]
    return RateRegion(Kind.OUTER, out.r1, out.r2, {"id": "transform"})


def best_outer(ch: ChannelParams, grid: int = R1_GRID_DEFAULT,
               depth: int = 0, bc_pr_kwargs: dict | None = None,
               extra_floor=None) -> RateRegion:
    """Intersection of every outer bound valid for this channel.

    Transformation presets join the intersection only at depth 0 and only
    when their target lands in a known-capacity regime. The sampled
    cooperative bound is floored with cheap achievable points (plus any
    caller-supplied `extra_floor` rate pairs, e.g. the boundary of the
    inner region it will be compared against) so that grid undersampling
    can never push the intersection below a valid inner bound.
    """
    rep = classify(ch)
    bounds = [unified_outer(ch, grid)]
    if ch.b > 1.0:
        bounds.append(strong_outer(ch, grid))
        bounds.append(piecewise_linear_outer(ch, grid))
    if rep.degraded and ch.b >= 1.0:
        bounds.append(bc_dms_degraded_outer(ch, grid))
    if rep.s_channel and ch.b >= 1.0:
        bounds.append(bc_dms_s_outer(ch, grid))

    from .inner import cheap_achievable_points
    floor = cheap_achievable_points(ch)
    if extra_floor is not None and len(extra_floor):
        floor = np.concatenate(
            [floor, np.asarray(extra_floor, float).reshape(-1, 2)], axis=0)
    kwargs = dict(bc_pr_kwargs or {})
    kwargs.setdefault("grid", grid)
    bounds.append(bc_pr_outer(ch, floor_points=floor, **kwargs))

    if depth == 0:
        for preset in _PRESETS:
            try:
                tgt = _preset_target(ch, preset)
            except (SingularPreset, InvalidTransform):
                continue
            if classify(tgt).capacity_known is CapacityResult.UNKNOWN:
                continue
            reg = capacity_region(tgt, grid)
            bounds.append(RateRegion(Kind.OUTER, reg.r1, reg.r2,
                                     {"id": f"transform:{preset}"}))
    out = intersect(bounds, grid)
    return RateRegion(Kind.OUTER, out.r1, out.r2, {"id": "best"})
