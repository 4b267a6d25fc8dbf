"""Caps, covering numbers N(Omega, delta) and the flatness dimension kappa.

A cap at a boundary point is the connected boundary arc within distance delta
of a supporting line there.  Covering numbers are exact minimum circular-arc
covers over a finite candidate set of caps (uniform boundary angles anchored
to the domain's rotation, plus three supporting lines at genuine corners).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDelta, ResolutionTooCoarse
from .geometry import TWO_PI, ConvexDomain

_BISECT_ITERS = 60


@dataclass(frozen=True)
class Cap:
    """Boundary arc within distance delta of a supporting line.

    theta_lo <= theta0 <= theta_hi in unwrapped angles; full_circle marks the
    degenerate case where every boundary point is within delta of the line.
    """

    point: np.ndarray
    normal: np.ndarray
    delta: float
    theta0: float
    theta_lo: float
    theta_hi: float
    full_circle: bool = False

    @property
    def arc_length(self) -> float:
        return TWO_PI if self.full_circle else self.theta_hi - self.theta_lo


@dataclass(frozen=True)
class CoveringResult:
    delta: float
    N: int
    caps: list
    n_angles: int


@dataclass(frozen=True)
class DimensionFit:
    """Least-squares slope of log2 N(Omega, 2^-k) against k."""

    deltas: np.ndarray
    Ns: np.ndarray
    slope: float
    intercept: float
    max_residual: float
    tail_slope: float  # two-point slope at the largest k, exposes slow convergence


def _cap_from_line(domain, theta0, delta, point, normal):
    offset = float(point @ normal)
    # farthest boundary point from the line sits at the support angle of -n
    far = domain.shape.support_angle(-normal)
    far_dist = offset - float(domain.boundary(far) @ normal)
    if far_dist < delta:
        return Cap(point, normal, delta, theta0, theta0 - math.pi, theta0 + math.pi, True)
    far_up = theta0 + math.fmod(far - theta0, TWO_PI) % TWO_PI
    lims = []
    for target in (far_up, far_up - TWO_PI):
        lo, hi = theta0, target
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            if offset - float(domain.boundary(mid) @ normal) < delta:
                lo = mid
            else:
                hi = mid
        lims.append(lo)
    return Cap(point, normal, delta, theta0, lims[1], lims[0], False)


def cap_arc(domain: ConvexDomain, theta0: float, delta: float) -> Cap:
    """Cap at the boundary point of angle theta0.

    The supporting line is orthogonal to the outward normal of the ccw-forward
    (right-derivative) tangent; the arc ends are located by bisection, using
    that the distance to the line is monotone along each side of the boundary
    up to the antipodal contact point.
    """
    if delta <= 0:
        raise InvalidDelta("delta must be positive")
    point = domain.boundary(theta0)
    _, t_fwd = domain.shape.tangents(np.asarray(theta0))
    normal = np.array([t_fwd[1], -t_fwd[0]])
    normal = normal / np.linalg.norm(normal)
    return _cap_from_line(domain, theta0, delta, point, normal)


def _candidate_caps(domain, delta, n_angles):
    """Vectorized cap arcs for all uniform candidate angles at once."""
    thetas = domain.rotation + TWO_PI * np.arange(n_angles) / n_angles
    pts = domain.boundary(thetas)
    _, fwd = domain.shape.tangents(thetas)
    normals = np.stack([fwd[:, 1], -fwd[:, 0]], axis=-1)
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    offsets = np.einsum("ij,ij->i", pts, normals)

    far = np.array([domain.shape.support_angle(-n) for n in normals])
    far_dist = offsets - np.einsum("ij,ij->i", domain.boundary(far), normals)
    if np.any(far_dist < delta):
        i = int(np.argmin(far_dist))
        return None, Cap(pts[i], normals[i], delta, thetas[i],
                         thetas[i] - math.pi, thetas[i] + math.pi, True)

    far_up = thetas + np.mod(far - thetas, TWO_PI)
    arcs = np.empty((n_angles, 2))
    for col, target in enumerate([far_up - TWO_PI, far_up]):
        lo = thetas.copy()
        hi = target.copy()
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            bpts = domain.boundary(mid)
            inside = offsets - np.einsum("ij,ij->i", bpts, normals) < delta
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        arcs[:, col] = lo
    return (thetas, pts, normals, arcs), None


def _corner_caps(domain, delta):
    # at a genuine corner only the two extreme tangents and the bisector line
    # are enumerated; intermediate supporting lines give sandwiched arcs
    caps = []
    for theta in domain.shape.corner_angles():
        point = domain.boundary(theta)
        t_back, t_fwd = domain.shape.tangents(np.asarray(theta))
        n_back = np.array([t_back[1], -t_back[0]])
        n_fwd = np.array([t_fwd[1], -t_fwd[0]])
        bisector = n_back / np.linalg.norm(n_back) + n_fwd / np.linalg.norm(n_fwd)
        for n in (n_back, n_fwd, bisector):
            n = n / np.linalg.norm(n)
            caps.append(_cap_from_line(domain, float(theta), delta, point, n))
    return caps


def _min_circular_cover(starts, ends):
    """Exact minimum number of arcs [s_i, e_i] covering the circle.

    Greedy furthest-reach jumps with binary lifting over a doubled (second
    revolution) copy; minimizing over all starting arcs is exact because the
    greedy chain seeded with any arc of an optimal cover is no longer than it.
    Returns (count, index of a best starting arc).
    """
    n = len(starts)
    order = np.argsort(starts, kind="stable")
    s = starts[order]
    e = ends[order]
    s2 = np.concatenate([s, s + TWO_PI])
    e2 = np.concatenate([e, e + TWO_PI])
    pmax = np.maximum.accumulate(e2)
    idxs = np.arange(2 * n)
    parg = np.maximum.accumulate(np.where(e2 >= pmax, idxs, -1))

    nxt_raw = np.searchsorted(s2, e2, side="right") - 1  # furthest arc starting <= end
    reachable = nxt_raw >= 0
    nxt = parg[np.clip(nxt_raw, 0, 2 * n - 1)]
    dead = (~reachable) | (e2[nxt] <= e2)
    nxt = np.where(dead, idxs, nxt)

    K = max(1, int(math.ceil(math.log2(n + 2))))
    tables = [nxt]
    for _ in range(K - 1):
        tables.append(tables[-1][tables[-1]])

    cur = np.arange(n)
    cnt = np.ones(n, dtype=np.int64)
    target = s + TWO_PI
    for t in range(K - 1, -1, -1):
        cand = tables[t][cur]
        take = e2[cand] < target
        cur = np.where(take, cand, cur)
        cnt = np.where(take, cnt + (1 << t), cnt)
    closing = tables[0][cur]
    ok = (e2[closing] >= target) & (closing != cur)
    ok |= e2[cur] >= target  # arc chain already closed without the extra jump
    cnt = np.where(e2[cur] >= target, cnt, cnt + 1)
    if not np.any(ok):
        raise ResolutionTooCoarse("candidate caps leave an uncovered gap")
    cnt = np.where(ok, cnt, np.iinfo(np.int64).max)
    best = int(np.argmin(cnt))
    return int(cnt[best]), best, (order, s, e, parg, s2, e2)


def covering_number(domain: ConvexDomain, delta: float, n_angles: int = 4096,
                    corner_caps: bool = True) -> CoveringResult:
    """Minimum cap cover of the boundary over the candidate set.

    Exact for the candidate set (uniform boundary angles anchored at the
    domain's rotation, plus corner supporting lines), hence an upper bound for
    the continuum problem.  Raises ResolutionTooCoarse when some candidate arc
    is shorter than 3x the angular grid spacing.
    """
    if delta <= 0:
        raise InvalidDelta("delta must be positive")
    grid, full = _candidate_caps(domain, delta, n_angles)
    if full is not None:
        return CoveringResult(delta, 1, [full], n_angles)
    thetas, pts, normals, arcs = grid
    spacing = TWO_PI / n_angles
    if np.min(arcs[:, 1] - arcs[:, 0]) < 3.0 * spacing:
        raise ResolutionTooCoarse(
            f"min cap arc {np.min(arcs[:, 1] - arcs[:, 0]):.3e} "
            f"< 3x grid spacing {spacing:.3e}"
        )
    starts = arcs[:, 0]
    ends = arcs[:, 1]
    extra = _corner_caps(domain, delta) if corner_caps else []
    if extra:
        starts = np.concatenate([starts, [c.theta_lo for c in extra]])
        ends = np.concatenate([ends, [c.theta_hi for c in extra]])
    count, best_sorted, (order, s, e, parg, s2, e2) = _min_circular_cover(starts, ends)

    # reconstruct one minimal cover by greedy jumps from the best start
    n_all = len(s)
    chain = [best_sorted]
    cur_end = e[best_sorted]
    target = s[best_sorted] + TWO_PI
    while cur_end < target:
        i = np.searchsorted(s2, cur_end, side="right") - 1
        nxt = int(parg[i])  # parg indexes the doubled array
        if e2[nxt] <= cur_end:
            raise ResolutionTooCoarse("candidate caps leave an uncovered gap")
        chain.append(nxt % n_all)
        cur_end = e2[nxt]

    def make_cap(i_sorted):
        i = int(order[i_sorted % n_all])
        if extra and i >= n_angles:
            return extra[i - n_angles]
        return Cap(pts[i], normals[i], delta, thetas[i], arcs[i, 0], arcs[i, 1], False)

    caps = [make_cap(i) for i in chain]
    return CoveringResult(delta, count, caps, n_angles)


def kappa_estimate(domain: ConvexDomain, k_min: int, k_max: int,
                   n_angles: int = 4096, max_angles: int = 1 << 18) -> DimensionFit:
    """Fit kappa as the slope of log2 N(Omega, 2^-k) against k.

    When a k is too fine for the angle grid the grid is doubled for that k
    (the ResolutionTooCoarse signal), up to max_angles.
    """
    if not (2 <= k_min < k_max <= 20):
        raise ValueError("need 2 <= k_min < k_max <= 20")
    ks = np.arange(k_min, k_max + 1)
    Ns = []
    for k in ks:
        angles = n_angles
        while True:
            try:
                Ns.append(covering_number(domain, 2.0 ** -int(k), angles).N)
                break
            except ResolutionTooCoarse:
                if angles >= max_angles:
                    raise
                angles *= 2
    Ns = np.asarray(Ns, dtype=float)
    logN = np.log2(Ns)
    A = np.stack([ks, np.ones_like(ks)], axis=-1).astype(float)
    (slope, intercept), *_ = np.linalg.lstsq(A, logN, rcond=None)
    resid = np.max(np.abs(A @ [slope, intercept] - logN))
    tail = (logN[-1] - logN[-2]) / (ks[-1] - ks[-2])
    return DimensionFit(2.0 ** -ks.astype(float), Ns.astype(int), float(slope),
                        float(intercept), float(resid), float(tail))
