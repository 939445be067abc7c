"""Achievable schemes as RateRegion constructors.

Every scheme is a Gaussian coding strategy whose rate bounds are exact
covariance determinant ratios; they are evaluated here as vectorized
closed forms and cross-checked against the gaussmi oracle in the test
suite. Power-split parameters are swept on grids whose images land on
the r1 sample grid (plus a uniform fill), so hull resampling is exact at
the stored grid nodes.

Pre-coding coefficients are handled in "amplitude space": a coefficient
lambda on the primary signal enters only through w = lambda*sqrt(p2),
which stays finite for p2 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, very_strong_condition
from .errors import DegenerateDenominator
from .region import (R1_GRID_DEFAULT, Kind, RateRegion, from_pareto_points,
                     union)
from .util import alpha_of_r1, cap, pos, r1_grid

SCHEME_IDS = ("a", "b", "c", "c46", "d", "e", "e:sweep", "e:costa1", "e:zero",
              "f", "tdma", "best")

_TINY = 1e-300


@dataclass(frozen=True)
class SchemeParams:
    """One parameter point of the pre-coding schemes."""

    alpha: float = 1.0
    lam: complex = 0.0
    rho: complex = 0.0
    beta: float = 1.0
    gamma: float = 1.0
    sigma1pb_sq: float = 1.0
    sigma2pb_sq: float = 0.0
    rho_pb: complex = 0.0

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.beta <= 1.0
                and 0.0 <= self.gamma <= 1.0):
            raise ValueError("splits must lie in [0, 1]")
        if abs(self.rho) > 1.0 + 1e-12 or abs(self.rho_pb) > 1.0 + 1e-12:
            raise ValueError("correlation magnitudes must be <= 1")
        if self.sigma1pb_sq < 0.0 or self.sigma2pb_sq < 0.0:
            raise ValueError("test-channel noise variances must be >= 0")


@dataclass(frozen=True)
class DpcInfo:
    """Pre-coding coefficients maximizing r1 / minimizing r2, plus f at the max."""

    lambda_costa1: complex
    lambda_costa2: complex
    f_value: float


def lambda_costa(h: complex, sigma_sq: float, alpha: float, p1: float) -> complex:
    """Rate-maximizing pre-coding coefficient alpha*p1*h/(alpha*p1 + sigma^2)."""
    a_pow = alpha * p1
    den = a_pow + sigma_sq
    if den <= 0.0:
        raise DegenerateDenominator("alpha*p1 + sigma_sq must be positive")
    return a_pow * h / den


def _f_mi(c1, u2, sigma_sq, w, a_pow, clamp: bool = True):
    """I(c1*X + u2*Xi + sigma*Z ; X + (w/sqrt(p2))*X2) - I(U; X2), in bits.

    Amplitude-space evaluation: u2 is the interferer coefficient times
    sqrt(p2) and w the pre-coding coefficient times sqrt(p2). X has
    variance a_pow. With clamp the (possibly negative) MI difference is
    floored at zero, matching the rate interpretation.
    """
    a_pow = np.asarray(a_pow, dtype=float)
    var_s = np.abs(c1) ** 2 * a_pow + np.abs(u2) ** 2 + sigma_sq
    var_u = a_pow + np.abs(w) ** 2
    covm = np.abs(c1 * a_pow + u2 * np.conj(w)) ** 2
    den = np.maximum(var_s * var_u - covm, _TINY)
    num = a_pow * var_s
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.log2(np.maximum(num, _TINY)) - np.log2(den)
    val = np.where(a_pow <= 0.0, 0.0, val)
    return pos(val) if clamp else val


def f_dpc(h: complex, sigma_sq: float, lam: complex, alpha, p1: float,
          p2: float):
    """Pre-coded rate residual f(h, sigma^2; lambda), clamped at zero."""
    a_pow = np.asarray(alpha, dtype=float) * p1
    sp2 = math.sqrt(p2)
    return _f_mi(1.0, h * sp2, sigma_sq, np.asarray(lam) * sp2, a_pow)


def dpc_info(ch: ChannelParams, alpha: float) -> DpcInfo:
    """Both Costa coefficients at a power split, plus f at the maximizer."""
    abar = 1.0 - alpha
    if ch.p2 <= 0.0:
        raise DegenerateDenominator("pre-coding needs p2 > 0")
    h1 = ch.a + math.sqrt(abar * ch.p1 / ch.p2)
    lc1 = lambda_costa(h1, 1.0, alpha, ch.p1)
    if ch.b <= 0.0:
        lc2 = 0.0 + 0.0j
    else:
        h2 = 1.0 / ch.b + math.sqrt(abar * ch.p1 / ch.p2)
        lc2 = lambda_costa(h2, 1.0 / ch.b ** 2, alpha, ch.p1)
    fval = float(f_dpc(h1, 1.0, lc1, alpha, ch.p1, ch.p2))
    return DpcInfo(lc1, lc2, fval)


def default_alpha_grid(ch: ChannelParams, matched: int = 513,
                       uniform: int = 489) -> np.ndarray:
    """Split grid whose r1 images hit the sample grid, plus correlation fill.

    The fill is uniform in rho = sqrt(1 - alpha): the cooperation cross
    terms are smooth in rho, so this removes the square-root cusp that
    uniform-alpha sampling leaves near full cooperation.
    """
    am = alpha_of_r1(r1_grid(ch.p1, matched), ch.p1)
    rho = np.linspace(0.0, 1.0, uniform)
    return np.unique(np.concatenate([am, 1.0 - rho ** 2]))


def _rect_sum_vertices(m1, m2, ms):
    """Pareto vertices of {r1 <= m1, r2 <= m2, r1 + r2 <= ms} (vectorized)."""
    m1, m2, ms = (np.asarray(v, dtype=float) for v in (m1, m2, ms))
    v1r1 = np.minimum(m1, ms)
    v1 = np.stack([v1r1, pos(np.minimum(m2, ms - v1r1))], axis=-1)
    v2r1 = np.minimum(m1, pos(ms - m2))
    v2 = np.stack([v2r1, pos(np.minimum(m2, ms - v2r1))], axis=-1)
    return np.concatenate([v1.reshape(-1, 2), v2.reshape(-1, 2)], axis=0)


# -- scheme A: primary silent, cognitive broadcasts both messages ------------

def scheme_a(ch: ChannelParams, alpha_grid=None,
             grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Degraded-broadcast strategy with the primary transmitter silent."""
    al = default_alpha_grid(ch) if alpha_grid is None else np.asarray(alpha_grid)
    abar = 1.0 - al
    if ch.b <= 1.0:
        r1 = cap(al * ch.p1)
        r2 = cap(abar * ch.b ** 2 * ch.p1 / (1.0 + al * ch.b ** 2 * ch.p1))
    else:
        r1 = cap(abar * ch.p1 / (1.0 + al * ch.p1))
        r2 = cap(al * ch.b ** 2 * ch.p1)
    pts = np.stack([r1, r2], axis=1)
    return from_pareto_points(pts, Kind.INNER, grid=grid,
                              params={"alpha": al}, region_id="a")


# -- scheme B: private messages, perfect pre-coding at the cognitive side ----

def scheme_b_rates(ch: ChannelParams, alpha):
    """Corner (r1, r2) of the private/pre-coded strategy at each split."""
    al = np.asarray(alpha, dtype=float)
    abar = 1.0 - al
    b2p1 = ch.b ** 2 * ch.p1
    r1 = cap(al * ch.p1)
    r2 = pos(cap(b2p1 + ch.p2 + 2.0 * np.sqrt(abar * b2p1 * ch.p2))
             - cap(ch.b ** 2 * al * ch.p1))
    return r1, r2


def scheme_b(ch: ChannelParams, alpha_grid=None,
             grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Interference-as-noise at the primary receiver; capacity for b <= 1."""
    al = default_alpha_grid(ch, matched=grid, uniform=257) \
        if alpha_grid is None else np.asarray(alpha_grid)
    r1, r2 = scheme_b_rates(ch, al)
    pts = np.stack([r1, r2], axis=1)
    return from_pareto_points(pts, Kind.INNER, grid=grid,
                              params={"alpha": al}, region_id="b")


# -- scheme D: both messages common (compound multiple access) ---------------

def scheme_d_rates(ch: ChannelParams, rho):
    """(r1 cap, sum cap) of the all-common strategy at each correlation."""
    rho = np.asarray(rho, dtype=complex)
    rsq = np.clip(np.abs(rho) ** 2, 0.0, 1.0)
    sp = math.sqrt(ch.p1 * ch.p2)
    r1 = np.minimum(cap((1.0 - rsq) * ch.p1), cap((1.0 - rsq) * ch.b ** 2 * ch.p1))
    s1 = cap(ch.p1 + abs(ch.a) ** 2 * ch.p2
             + 2.0 * np.real(np.conj(ch.a) * rho) * sp)
    s2 = cap(ch.b ** 2 * ch.p1 + ch.p2 + 2.0 * ch.b * np.real(rho) * sp)
    return r1, np.minimum(s1, s2)


def scheme_d(ch: ChannelParams, rho_grid=None,
             grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Superposition strategy: both receivers decode both messages."""
    if rho_grid is None:
        am = alpha_of_r1(r1_grid(ch.p1, 513), ch.p1)
        base = np.unique(np.concatenate([np.sqrt(1.0 - am),
                                         np.linspace(0.0, 1.0, 489)]))
        rho = np.concatenate([base, -base])
        if abs(ch.a.imag) > 1e-12:
            phases = np.exp(1j * np.linspace(0.0, np.pi, 17))
            rho = np.outer(base, phases).ravel()
            rho = np.concatenate([rho, -rho])
    else:
        rho = np.asarray(rho_grid, dtype=complex)
    r1, s = scheme_d_rates(ch, rho)
    v1r1 = np.minimum(r1, s)
    pts = np.concatenate([
        np.stack([v1r1, pos(s - v1r1)], axis=1),
        np.stack([np.zeros_like(s), pos(s)], axis=1)], axis=0)
    rr = np.concatenate([np.real(rho), np.real(rho)])
    return from_pareto_points(pts, Kind.INNER, grid=grid,
                              params={"rho_re": rr}, region_id="d")


# -- scheme E: common cognitive message pre-coded against the primary --------

def _scheme_e_amplitudes(ch: ChannelParams, alpha):
    """Interferer amplitudes seen by the two pre-coding rate terms."""
    abar = pos(1.0 - np.asarray(alpha, dtype=float))
    coop = np.sqrt(abar * ch.p1)
    u1 = ch.a * math.sqrt(ch.p2) + coop
    u2 = math.sqrt(ch.p2) + ch.b * coop
    return u1, u2


def scheme_e_rates(ch: ChannelParams, alpha, lam):
    """(r1 bound, r2 bound, sum bound) of the pre-coded common strategy."""
    al = np.asarray(alpha, dtype=float)
    a_pow = al * ch.p1
    u1, u2 = _scheme_e_amplitudes(ch, al)
    w = np.asarray(lam) * math.sqrt(ch.p2)
    f1 = _f_mi(1.0, u1, 1.0, w, a_pow)
    f2 = _f_mi(ch.b, u2, 1.0, w, a_pow, clamp=False)
    ssum = cap(ch.b ** 2 * a_pow + np.abs(u2) ** 2)
    return f1, pos(ssum - f2), ssum


def scheme_e(ch: ChannelParams, alpha_grid=None, lambda_grid=None,
             lambda_policy: str = "sweep", n_lambda: int = 201,
             grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Pre-coded common-message strategy.

    lambda_policy: "costa1" pins the r1-maximizing coefficient, "zero"
    disables pre-coding, "sweep" unions scaled multiples of the costa1
    coefficient in [0, 2] (plus a phase fan for complex channels).
    An explicit lambda_grid overrides the policy.
    """
    al = default_alpha_grid(ch) if alpha_grid is None else np.asarray(alpha_grid)
    a_pow = al * ch.p1
    u1, u2 = _scheme_e_amplitudes(ch, al)
    w_c1 = a_pow * u1 / (a_pow + 1.0)

    if lambda_grid is not None:
        w = np.multiply.outer(np.asarray(lambda_grid, dtype=complex),
                              np.full(al.shape, math.sqrt(ch.p2)))
    elif lambda_policy == "costa1":
        w = w_c1[None, :]
    elif lambda_policy == "zero":
        w = np.zeros((1, al.size), dtype=complex)
    elif lambda_policy == "sweep":
        scales = np.linspace(0.0, 2.0, n_lambda).astype(complex)
        if abs(ch.a.imag) > 1e-12:
            phases = np.exp(1j * np.linspace(-np.pi / 2, np.pi / 2, 9))
            scales = np.outer(scales, phases).ravel()
        w = np.multiply.outer(scales, w_c1)
    else:
        raise ValueError(f"unknown lambda policy {lambda_policy!r}")

    f1 = _f_mi(1.0, u1[None, :], 1.0, w, a_pow[None, :])
    f2 = _f_mi(ch.b, u2[None, :], 1.0, w, a_pow[None, :], clamp=False)
    ssum = cap(ch.b ** 2 * a_pow + np.abs(u2) ** 2)[None, :]
    pts = _rect_sum_vertices(f1, pos(ssum - f2), ssum)
    al2 = np.broadcast_to(al[None, :], f1.shape).ravel()
    alpar = np.concatenate([al2, al2])
    lam_re = np.where(ch.p2 > 0, np.real(w) / max(math.sqrt(ch.p2), _TINY), 0.0)
    lam2 = np.broadcast_to(lam_re, f1.shape).ravel()
    policy_id = "e" if lambda_grid is not None else f"e:{lambda_policy}"
    return from_pareto_points(
        pts, Kind.INNER, grid=grid,
        params={"alpha": alpar, "lambda_re": np.concatenate([lam2, lam2])},
        region_id=policy_id)


# -- schemes C / C46: cognitive broadcasts a primary layer with binning ------

def _cv1(vs, cov, vt):
    """Var(S | T) with a zero-variance conditioner acting as a no-op."""
    vt = np.asarray(vt, dtype=float)
    red = np.where(vt > 1e-14, np.abs(cov) ** 2 / np.maximum(vt, _TINY), 0.0)
    return pos(np.asarray(vs, dtype=float) - red)


def _cv2(vs, c1, c2, v1, v12, v2):
    """Var(S | T1, T2) with fallback to the best single conditioner."""
    det = v1 * v2 - np.abs(v12) ** 2
    scale = np.maximum(v1 * v2, 1e-30)
    ok = det > 1e-12 * scale
    safe_det = np.where(ok, det, 1.0)
    quad = (v2 * np.abs(c1) ** 2 + v1 * np.abs(c2) ** 2
            - 2.0 * np.real(v12 * np.conj(c1) * c2)) / safe_det
    full = pos(np.asarray(vs, dtype=float) - np.where(ok, quad, 0.0))
    single = np.minimum(_cv1(vs, c1, v1), _cv1(vs, c2, v2))
    return np.where(ok, full, single)


def scheme_c_rates(ch: ChannelParams, alpha, sigma1_sq, sigma2_sq,
                   c1=None, c2=None):
    """(r1, r2, sum) bounds of the double-binning strategy.

    c1/c2 are the auxiliary mixing coefficients; None reproduces the
    channel-matched choice (c1=a, c2=b). The test-channel noise
    correlation is set to its penalty-minimizing value internally.
    """
    al = np.asarray(alpha, dtype=float)
    a_pow = al * ch.p1
    q = np.sqrt(pos(1.0 - al) * ch.p1) if ch.p2 > 0 else np.zeros_like(al)
    sp2 = math.sqrt(ch.p2)
    c1 = ch.a if c1 is None else c1
    c2 = ch.b if c2 is None else c2
    c1 = np.asarray(c1, dtype=complex)
    c2 = np.asarray(c2, dtype=float)

    u_y1 = q + ch.a * sp2
    u_u1 = q + c1 * sp2
    u_y2 = ch.b * q + sp2
    u_u2 = c2 * q + sp2
    s1, s2 = float(sigma1_sq), float(sigma2_sq)
    czz = -np.sign(c2) * np.minimum(math.sqrt(s1 * s2), np.abs(c2) * a_pow)

    var_y1 = a_pow + np.abs(u_y1) ** 2 + 1.0
    var_u1 = a_pow + np.abs(u_u1) ** 2 + s1
    cov_y1u1 = a_pow + u_y1 * np.conj(u_u1)
    det = np.maximum(var_y1 * var_u1 - np.abs(cov_y1u1) ** 2, _TINY)
    i_y1u1 = np.log2(np.maximum(var_y1 * var_u1, _TINY)) - np.log2(det)
    # I(U1; X2) vanishes with the interferer amplitude in U1
    i_u1x2 = np.log2(var_u1) - np.log2(np.maximum(var_u1 - np.abs(u_u1) ** 2,
                                                  _TINY))
    m1 = pos(i_y1u1 - i_u1x2)

    var_y2 = ch.b ** 2 * a_pow + np.abs(u_y2) ** 2 + 1.0
    var_u2 = np.abs(c2) ** 2 * a_pow + np.abs(u_u2) ** 2 + s2
    var_x2 = ch.p2
    cov_y2u2 = ch.b * np.conj(c2) * a_pow + u_y2 * np.conj(u_u2)
    cov_y2x2 = u_y2 * sp2
    cov_u2x2 = u_u2 * sp2
    cv_y2 = _cv2(var_y2, cov_y2u2, cov_y2x2, var_u2, cov_u2x2, var_x2)
    m2 = pos(np.log2(var_y2) - np.log2(np.maximum(cv_y2, _TINY)))

    cov_u1u2 = np.conj(c2) * a_pow + u_u1 * np.conj(u_u2) + czz
    cov_u1x2 = u_u1 * sp2
    cv_u1 = _cv2(var_u1, cov_u1u2, cov_u1x2, var_u2, cov_u2x2, var_x2)
    i_u1_u2x2 = np.log2(var_u1) - np.log2(np.maximum(cv_u1, _TINY))
    ms = pos(m2 + i_y1u1 - i_u1_u2x2)
    return m1, m2, ms


def scheme_c(ch: ChannelParams, alpha_grid=None,
             sigma_pairs=((1.0, 0.0), (1.0, 1.0)),
             grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Double-binning strategy on the channel-matched auxiliaries."""
    al = default_alpha_grid(ch) if alpha_grid is None else np.asarray(alpha_grid)
    chunks = []
    alpha_par = []
    for s1, s2 in sigma_pairs:
        m1, m2, ms = scheme_c_rates(ch, al, s1, s2)
        chunks.append(_rect_sum_vertices(m1, m2, ms))
        alpha_par.append(np.tile(al, 2))
    pts = np.concatenate(chunks, axis=0)
    return from_pareto_points(pts, Kind.INNER, grid=grid,
                              params={"alpha": np.concatenate(alpha_par)},
                              region_id="c")


def scheme_c46(ch: ChannelParams, alpha_grid=None,
               sigma_pairs=((1.0, 0.0), (1.0, 1.0)),
               c1_grid=None, c2_grid=None,
               grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Double-binning strategy with tunable auxiliary mixing coefficients."""
    al = (default_alpha_grid(ch, matched=129, uniform=101)
          if alpha_grid is None else np.asarray(alpha_grid))
    if c1_grid is None:
        span1 = max(1.0, abs(ch.a))
        c1_grid = ch.a.real + np.linspace(-1.0, 1.0, 9) * span1
    if c2_grid is None:
        span2 = max(1.0, ch.b)
        c2_grid = ch.b + np.linspace(-1.0, 1.0, 9) * span2
    chunks = []
    for s1, s2 in sigma_pairs:
        for c1 in np.asarray(c1_grid):
            for c2 in np.asarray(c2_grid):
                m1, m2, ms = scheme_c_rates(ch, al, s1, s2, c1=c1, c2=c2)
                chunks.append(_rect_sum_vertices(m1, m2, ms))
    pts = np.concatenate(chunks, axis=0)
    return from_pareto_points(pts, Kind.INNER, grid=grid, region_id="c46")


# -- scheme F: rate-split unification of D and E -----------------------------

def scheme_f_rates(ch: ChannelParams, alpha, beta, gamma, w):
    """The five rate bounds of the split strategy, in amplitude space.

    w is the pre-coding coefficient times the private-primary amplitude
    sqrt((1-beta) p2). Returns (m_r1, m_sum, m_2r1_r2).
    """
    al = np.asarray(alpha, dtype=float)
    be = np.asarray(beta, dtype=float)
    ga = np.asarray(gamma, dtype=float)
    p1, p2, a, b = ch.p1, ch.p2, ch.a, ch.b

    x2_c = np.sqrt(be * p2)
    x2_pa = np.sqrt(pos(1.0 - be) * p2)
    x1_2c = np.sqrt(pos(1.0 - al) * ga * p1)
    x1_pa = np.sqrt(pos(1.0 - al) * pos(1.0 - ga) * p1)
    x1_c = np.sqrt(al * p1)

    y1 = (x1_2c + a * x2_c, x1_pa + a * x2_pa, x1_c)
    y2 = (b * x1_2c + x2_c, b * x1_pa + x2_pa, b * x1_c)
    u1 = (w, x1_c)
    x2r = (x2_pa, np.zeros_like(x2_pa))

    def dot(u, v):
        return u[0] * np.conj(v[0]) + u[1] * np.conj(v[1])

    def nrm(u):
        return np.real(dot(u, u))

    y1r = (y1[1], y1[2])
    y2r = (y2[1], y2[2])
    var_y1 = np.abs(y1[0]) ** 2 + nrm(y1r) + 1.0
    var_y2 = np.abs(y2[0]) ** 2 + nrm(y2r) + 1.0
    v_y1_g2c = nrm(y1r) + 1.0
    v_y2_g2c = nrm(y2r) + 1.0
    v_u1 = nrm(u1)
    v_x2r = nrm(x2r)

    cv_y1_u1 = _cv1(v_y1_g2c, dot(y1r, u1), v_u1)
    cv_u1_x2 = _cv1(v_u1, dot(u1, x2r), v_x2r)
    cv_y2_u1 = _cv1(v_y2_g2c, dot(y2r, u1), v_u1)
    cv_y2_u1x2 = _cv2(v_y2_g2c, dot(y2r, u1), dot(y2r, x2r),
                      v_u1, dot(u1, x2r), v_x2r)
    # conditioning on {u2c, x2, x1c}: drop both atom conditioners first
    y2_res = y2[1]
    cv_y2_all = _cv1(np.abs(y2_res) ** 2 + 1.0, y2_res * x2_pa, v_x2r)

    def lg(x):
        return np.log2(np.maximum(x, _TINY))

    i_y1u1 = lg(v_y1_g2c) - lg(cv_y1_u1)
    i_u1x2 = lg(v_u1) - lg(cv_u1_x2)
    i_u1x2 = np.where(v_u1 > 1e-14, i_u1x2, 0.0)
    m29a = pos(i_y1u1 - i_u1x2)
    m29b = pos(lg(v_y2_g2c) - lg(cv_y2_u1x2))
    m29c = lg(var_y2) - lg(cv_y2_all)
    i_y1_u1u2c = lg(var_y1) - lg(cv_y1_u1)
    m29d = pos(lg(cv_y2_u1) - lg(cv_y2_u1x2)) + i_y1_u1u2c
    m29e = pos(m29b + i_y1_u1u2c - i_u1x2)

    return np.minimum(m29a, m29b), np.minimum(m29c, m29d), m29e


def scheme_f(ch: ChannelParams, alpha_grid=None, beta_grid=None,
             gamma_grid=None, n_lambda: int = 41, face_lambda: int = 201,
             grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Split strategy unioning the common-common and pre-coded structures.

    On the split boundaries the strategy collapses exactly to the
    all-common scheme (beta = gamma = 1, no pre-coding) and to the
    pre-coded common scheme (beta = gamma = 0), so those two faces are
    always swept densely alongside the interior grid.
    """
    al = np.linspace(0.0, 1.0, 11) if alpha_grid is None else np.asarray(alpha_grid)
    be = np.linspace(0.0, 1.0, 11) if beta_grid is None else np.asarray(beta_grid)
    ga = np.linspace(0.0, 1.0, 11) if gamma_grid is None else np.asarray(gamma_grid)
    av, bv, gv = np.meshgrid(al, be, ga, indexing="ij")
    av, bv, gv = av.ravel(), bv.ravel(), gv.ravel()

    a_pow = av * ch.p1
    # interference seen by u1c at y1 once the common primary part is known
    amp = np.sqrt(pos(1.0 - av) * pos(1.0 - gv) * ch.p1) \
        + ch.a * np.sqrt(pos(1.0 - bv) * ch.p2)
    w_c = a_pow * amp / (a_pow + 1.0)

    scales = np.linspace(0.0, 2.0, n_lambda).astype(complex)
    if abs(ch.a.imag) > 1e-12:
        phases = np.exp(1j * np.linspace(-np.pi / 2, np.pi / 2, 5))
        scales = np.outer(scales, phases).ravel()
    chunks = []
    for t in scales:
        m1, ms, m2r = scheme_f_rates(ch, av, bv, gv, t * w_c)
        r1a = np.minimum(m1, np.minimum(ms, m2r / 2.0))
        r2a = pos(np.minimum(ms - r1a, m2r - 2.0 * r1a))
        r1b = np.clip(m2r - ms, 0.0, r1a)
        r2b = pos(np.minimum(ms - r1b, m2r - 2.0 * r1b))
        r2c = pos(np.minimum(ms, m2r))
        chunks.append(np.stack([
            np.concatenate([r1a, r1b, np.zeros_like(r2c)]),
            np.concatenate([r2a, r2b, r2c])], axis=1))

    # dense collapse faces: beta = gamma = 0 is exactly the pre-coded
    # common scheme, beta = gamma = 1 (no pre-coding) the all-common one
    face = default_alpha_grid(ch)
    lam_c = lambda_costa_vec(ch, face)
    w_grid = np.multiply.outer(
        np.linspace(0.0, 2.0, max(n_lambda, face_lambda)), lam_c)
    f1, r2b, ssum = scheme_e_rates(ch, face[None, :], w_grid)
    chunks.append(_rect_sum_vertices(f1, r2b, ssum))
    rho_face = np.sqrt(pos(1.0 - face))
    r1d, sd = scheme_d_rates(ch, rho_face)
    v1 = np.minimum(r1d, sd)
    chunks.append(np.stack([v1, pos(sd - v1)], axis=1))
    chunks.append(np.stack([np.zeros_like(sd), pos(sd)], axis=1))

    pts = np.concatenate(chunks, axis=0)
    return from_pareto_points(pts, Kind.INNER, grid=grid, region_id="f")


# -- time sharing and aggregates ---------------------------------------------

def tdma_inner(ch: ChannelParams, grid: int = R1_GRID_DEFAULT) -> RateRegion:
    """Chord between the solo cognitive point and the beamforming point."""
    peq = (math.sqrt(ch.b ** 2 * ch.p1) + math.sqrt(ch.p2)) ** 2
    pts = [(float(cap(ch.p1)), 0.0), (0.0, float(cap(peq)))]
    return from_pareto_points(pts, Kind.INNER, grid=grid, region_id="tdma")


def best_inner(ch: ChannelParams, grid: int = R1_GRID_DEFAULT,
               fast: bool = False) -> RateRegion:
    """Time-sharing hull of the union of every scheme."""
    if fast:
        al = default_alpha_grid(ch, matched=257, uniform=245)
        regions = [
            scheme_a(ch, al, grid=grid),
            scheme_b(ch, al, grid=grid),
            scheme_c(ch, al, grid=grid),
            scheme_d(ch, grid=grid),
            scheme_e(ch, al, lambda_policy="sweep", n_lambda=101, grid=grid),
            scheme_f(ch, face_lambda=101, grid=grid),
            tdma_inner(ch, grid=grid),
        ]
    else:
        regions = [
            scheme_a(ch, grid=grid),
            scheme_b(ch, grid=grid),
            scheme_c(ch, grid=grid),
            scheme_d(ch, grid=grid),
            scheme_e(ch, lambda_policy="sweep", grid=grid),
            scheme_f(ch, grid=grid),
            tdma_inner(ch, grid=grid),
        ]
    out = union(regions, grid=grid)
    return RateRegion(Kind.INNER, out.r1, out.r2, {"id": "best"})


def cheap_achievable_points(ch: ChannelParams) -> np.ndarray:
    """Fast stack of provably achievable rate pairs (floors sampled bounds)."""
    al = default_alpha_grid(ch, matched=257, uniform=129)
    r1b, r2b = scheme_b_rates(ch, al)
    rho = np.concatenate([np.sqrt(1.0 - al), -np.sqrt(1.0 - al)])
    r1d, sd = scheme_d_rates(ch, rho)
    v1 = np.minimum(r1d, sd)
    w_c1 = lambda_costa_vec(ch, al)
    chunks = [np.stack([r1b, r2b], axis=1),
              np.stack([v1, pos(sd - v1)], axis=1),
              np.stack([np.zeros_like(sd), sd], axis=1)]
    for t in np.linspace(0.0, 2.0, 41):
        f1, r2, ss = scheme_e_rates(ch, al, t * w_c1)
        chunks.append(np.stack([f1, np.minimum(r2, ss - f1)], axis=1))
        chunks.append(np.stack([np.minimum(f1, pos(ss - r2)), r2], axis=1))
    av, bv, gv = np.meshgrid(np.linspace(0, 1, 9), np.linspace(0, 1, 9),
                             np.linspace(0, 1, 9), indexing="ij")
    av, bv, gv = av.ravel(), bv.ravel(), gv.ravel()
    a_pow = av * ch.p1
    amp = np.sqrt(pos(1 - av) * pos(1 - gv) * ch.p1) \
        + ch.a * np.sqrt(pos(1 - bv) * ch.p2)
    w_cf = a_pow * amp / (a_pow + 1.0)
    for t in np.linspace(0.0, 2.0, 11):
        m1, ms, m2r = scheme_f_rates(ch, av, bv, gv, t * w_cf)
        r1f = np.minimum(m1, np.minimum(ms, m2r / 2.0))
        chunks.append(np.stack(
            [r1f, pos(np.minimum(ms - r1f, m2r - 2 * r1f))], axis=1))
        chunks.append(np.stack(
            [np.zeros_like(ms), pos(np.minimum(ms, m2r))], axis=1))
    peq = (math.sqrt(ch.b ** 2 * ch.p1) + math.sqrt(ch.p2)) ** 2
    chunks.append(np.array([[float(cap(ch.p1)), 0.0], [0.0, float(cap(peq))]]))
    return np.clip(np.concatenate(chunks, axis=0), 0.0, None)


def lambda_costa_vec(ch: ChannelParams, alpha):
    """Vectorized costa1 coefficient; zero when pre-coding is undefined."""
    al = np.asarray(alpha, dtype=float)
    a_pow = al * ch.p1
    if ch.p2 <= 0.0:
        return np.zeros_like(al)
    h1 = ch.a + np.sqrt(pos(1.0 - al) * ch.p1 / ch.p2)
    return a_pow * h1 / (a_pow + 1.0)
