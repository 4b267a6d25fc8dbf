"""Boundary flatness partitions, their refinement, smooth surrogate curves,
smooth domain approximants, and the exceptional set of parallelograms.

The partition of [-1, 1] splits the arc into pieces on which
(length) x (slope increment) <= delta; the refinement gives comparable
consecutive interval lengths; the surrogate gamma_k matches gamma and gamma'
on the 2^-k grid with controlled second and third derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bumps
from .covering import covering_number
from .errors import (
    ArcTooCoarse,
    BudgetExceeded,
    InvalidDelta,
    NonConvexArc,
)
from .geometry import (
    TWO_PI,
    BoundaryArc,
    ConvexDomain,
    SectorFrame,
    _RoundedPolygon,
    boundary_arc,
    grad_rho_at_alpha,
    minkowski,
)

_GL32_NODES, _GL32_WEIGHTS = np.polynomial.legendre.leggauss(32)


# ---------------------------------------------------------------------------
# flatness partition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlatPartition:
    """Points a_0 = -1 < a_1 < ... < a_Q covering [-1, 1].

    Every non-terminal point is the infimum where (length) x (slope gap)
    first exceeds delta, so the products satisfy <= delta on every interval
    and > delta beyond each interior endpoint.  The last point is placed by
    the same infimum rule on the naturally extended boundary graph (capped by
    the previous interval length), so a_Q lies in [1, 3): a fixed tiny final
    step would leave terminal intervals up to 2^M x (or, clamped at 1,
    unboundedly) shorter than their neighbors, whose comparability cascades
    make sum delta/|I_j| oscillate across delta.
    """

    delta: float
    points: np.ndarray

    @property
    def Q(self) -> int:
        return len(self.points) - 1


def flatness_partition(arc: BoundaryArc, delta: float) -> FlatPartition:
    """Inductive flatness split of [-1, 1].

    Condition (length x slope increment <= delta) is tested at t = 1, where
    the product is maximal; when it fails the next point is the infimum of
    the overshoot set, located by bisection well inside the delta * 1e-6
    tolerance contract.  The lower bracket is returned, so every product
    satisfies the <= delta bound exactly (the infimum itself satisfies it by
    left continuity of the left derivative).
    """
    if not 0.0 < delta <= 1.0:
        raise InvalidDelta("delta must lie in (0, 1]")
    tol = min(delta * 1e-6, 4e-14)
    gl_end = float(arc.gamma_left(1.0))
    pts = [-1.0]
    a = -1.0
    gr_a = float(arc.gamma_right(a))
    len_prev = 2.0
    guard = int(64 * 2.0**arc.M / math.sqrt(delta)) + 64
    for _ in range(guard):
        if (1.0 - a) * (gl_end - gr_a) <= delta:
            # final interval: same infimum rule on the extended graph, capped
            # so the last interval stays comparable to its neighbor
            cap = a + 2.0
            if (cap - a) * (float(arc.gamma_left(cap)) - gr_a) > delta:
                lo, hi = 1.0, cap
                while hi - lo > tol:
                    mid = 0.5 * (lo + hi)
                    if (mid - a) * (float(arc.gamma_left(mid)) - gr_a) > delta:
                        hi = mid
                    else:
                        lo = mid
                ext = lo
            else:
                ext = cap
            pts.append(max(1.0, min(ext, a + len_prev)))
            return FlatPartition(delta, np.asarray(pts))
        lo, hi = a, 1.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if (mid - a) * (float(arc.gamma_left(mid)) - gr_a) > delta:
                hi = mid
            else:
                lo = mid
        a_next = lo if lo > a else hi
        gr_next = float(arc.gamma_right(a_next))
        if gr_next < gr_a - 1e-9 * 2.0**arc.M:
            raise NonConvexArc("right derivative decreased along the partition")
        len_prev = a_next - a
        pts.append(a_next)
        a, gr_a = a_next, gr_next
    raise NonConvexArc("partition did not terminate; arc is not convex")


# ---------------------------------------------------------------------------
# refinement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RefinedPartition:
    """Midpoint/halving refinement with comparable consecutive intervals."""

    delta: float
    points: np.ndarray

    @property
    def intervals(self) -> np.ndarray:
        return np.stack([self.points[:-1], self.points[1:]], axis=-1)

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.points)

    def comp_ratios(self) -> np.ndarray:
        L = self.lengths
        return L[1:] / L[:-1]

    def sum_delta_over_len(self) -> float:
        return float(np.sum(self.delta / self.lengths))

    def slope_products(self, arc: BoundaryArc) -> np.ndarray:
        b = self.points
        gl = np.array([float(arc.gamma_left(x)) for x in b[1:]])
        gr = np.array([float(arc.gamma_right(x)) for x in b[:-1]])
        return (gl - gr) * np.diff(b)

    def dilated(self, j: int, factor: float = 25.0 / 24.0) -> tuple:
        lo, hi = self.points[j], self.points[j + 1]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        return mid - factor * half, mid + factor * half


def refine_partition(arc: BoundaryArc, fp: FlatPartition) -> RefinedPartition:
    """Insert midpoints, then halve toward each point until its two gaps
    are comparable (stopping at the first point inside the shorter gap)."""
    pts = fp.points
    A = np.empty(2 * len(pts) - 1)
    A[0::2] = pts
    A[1::2] = 0.5 * (pts[:-1] + pts[1:])
    out = list(A)
    for i in range(1, len(A) - 1):
        x = A[i]
        left = x - A[i - 1]
        right = A[i + 1] - x
        if abs(right - left) <= 1e-9 * max(left, right):  # equal gaps: B_x = {x}
            continue
        if right > left:
            y = 0.5 * (x + A[i + 1])
            while y - x > left:
                out.append(y)
                y = 0.5 * (y + x)
            out.append(y)
        elif left > right:
            y = 0.5 * (x + A[i - 1])
            while x - y > right:
                out.append(y)
                y = 0.5 * (y + x)
            out.append(y)
    b = np.unique(np.asarray(out))
    return RefinedPartition(fp.delta, b)


# ---------------------------------------------------------------------------
# smooth surrogate
# ---------------------------------------------------------------------------


class _PiecewiseCurve:
    """Piecewise line/circle curve with vectorized derivatives to order 3.

    Pieces are encoded per breakpoint interval: kind 0 is the line
    y0 + m (t - t0); kind 1 is the circle cy + b * sqrt(R^2 - (t - cx)^2).
    """

    def __init__(self, breaks, kinds, params):
        self.breaks = np.asarray(breaks)
        self.kinds = np.asarray(kinds)
        self.params = np.asarray(params)  # (n, 4): line (t0, y0, m, _) / circle (cx, cy, R, b)

    def __call__(self, t, order=0):
        t = np.asarray(t, dtype=float)
        i = np.clip(np.searchsorted(self.breaks, t, side="right") - 1, 0, len(self.kinds) - 1)
        p = self.params[i]
        line = self.kinds[i] == 0
        out = np.empty_like(t)
        if order == 0:
            out = np.where(line, p[..., 1] + p[..., 2] * (t - p[..., 0]), 0.0)
        elif order == 1:
            out = np.where(line, p[..., 2], 0.0)
        else:
            out = np.where(line, 0.0, 0.0)
        circ = ~line
        if np.any(circ):
            cx, cy, R, b = (p[..., 0], p[..., 1], p[..., 2], p[..., 3])
            dx = t - cx
            root = np.sqrt(np.where(circ, np.maximum(R * R - dx * dx, 1e-300), 1.0))
            if order == 0:
                val = cy + b * root
            elif order == 1:
                val = -b * dx / root
            elif order == 2:
                val = -b * R * R / root**3
            elif order == 3:
                val = -3.0 * b * R * R * dx / root**5
            else:
                raise ValueError("order > 3 not supported")
            out = np.where(circ, val, out)
        return out

    def kink_points(self):
        return self.breaks[1:-1]


def _circle_through(A, B, slope):
    """Circle through A and B with tangent slope at A; None means a line."""
    d = np.array([1.0, slope]) / math.hypot(1.0, slope)
    nhat = np.array([-d[1], d[0]])
    AB = B - A
    denom = 2.0 * (nhat @ AB)
    ab2 = AB @ AB
    if ab2 == 0.0:
        return None
    curvature = abs(denom) / ab2
    if curvature < 1e-12:
        return None
    s = ab2 / denom
    center = A + s * nhat
    R = abs(s)
    # fall back to the chord when the arc is not graph-representable
    if R * R - (A[0] - center[0]) ** 2 <= 0 or R * R - (B[0] - center[0]) ** 2 <= 0:
        return None
    if np.sign(A[1] - center[1]) != np.sign(B[1] - center[1]):
        return None
    return center[0], center[1], R, float(np.sign(A[1] - center[1]))


@dataclass(frozen=True)
class SmoothSurrogate:
    """Smooth curve matching gamma, gamma' on the 2^-k flatness grid."""

    k: int
    grid: np.ndarray           # the flatness partition points c_m
    grid_values: np.ndarray    # gamma(c_m)
    grid_slopes: np.ndarray    # slope used at each grid point
    curve: _PiecewiseCurve = field(repr=False)
    mollify_lo: np.ndarray = field(repr=False)   # U_m start per interval
    mollify_hi: np.ndarray = field(repr=False)   # U_m end per interval
    radii: np.ndarray = field(repr=False)        # psi radius per interval

    @property
    def interval_widths(self) -> np.ndarray:
        return np.diff(self.grid)

    def _mollified(self, t, order):
        i = int(np.clip(np.searchsorted(self.grid, t, side="right") - 1, 0, len(self.grid) - 2))
        if not (self.mollify_lo[i] < t < self.mollify_hi[i]):
            return float(self.curve(np.asarray(t), order))
        r = self.radii[i]
        psi = bumps.Mollifier(r)
        cuts = [t - r, t + r]
        for kp in self.curve.kink_points():
            if t - r < kp < t + r:
                cuts.append(float(kp))
        cuts = np.sort(np.asarray(cuts))
        # subtract the local tangent line: convolving an affine L against the
        # even unit-mass psi reproduces L(t) exactly (and 0 for orders >= 2),
        # so quadrature error scales with the deviation from the line only
        y0 = float(self.curve(np.asarray(t), 0))
        m0 = float(self.curve(np.asarray(t), 1))
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b - a <= 0:
                continue
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            nodes = mid + half * _GL32_NODES
            vals = self.curve(nodes, 0) - y0 - m0 * (nodes - t)
            total += half * float((vals * psi(t - nodes, order)) @ _GL32_WEIGHTS)
        if order == 0:
            return y0 + total
        if order == 1:
            return m0 + total
        return total

    def evaluate(self, t, order=0):
        t_arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t_arr)
        out = np.array([self._mollified(float(x), order) for x in flat.ravel()])
        return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)

    def gamma_k(self, t):
        return self.evaluate(t, 0)

    def gamma_k_d1(self, t):
        return self.evaluate(t, 1)

    def gamma_k_d2(self, t):
        return self.evaluate(t, 2)

    def gamma_k_d3(self, t):
        return self.evaluate(t, 3)

    def quad_cuts(self) -> np.ndarray:
        """Kink abscissas and their mollifier-support edges, for quadrature
        splitting and spike-resolving sample placement."""
        kinks = self.curve.kink_points()
        i = np.clip(np.searchsorted(self.grid, kinks, side="right") - 1,
                    0, len(self.grid) - 2)
        r = self.radii[i]
        return np.sort(np.concatenate([kinks - r, kinks, kinks + r]))

    def sample_points(self, lo: float, hi: float, n_uniform: int = 24) -> np.ndarray:
        """Uniform samples on [lo, hi] plus clusters across each mollifier
        spike, so sups are not blind to the psi-width features."""
        pts = [np.linspace(lo, hi, n_uniform)]
        kinks = self.curve.kink_points()
        i = np.clip(np.searchsorted(self.grid, kinks, side="right") - 1,
                    0, len(self.grid) - 2)
        r = self.radii[i]
        for kp, rad in zip(kinks, r):
            if lo <= kp <= hi:
                pts.append(np.clip(kp + rad * np.linspace(-1.0, 1.0, 17), lo, hi))
        return np.unique(np.concatenate(pts))


def smooth_surrogate(arc: BoundaryArc, k: int, fp: Optional[FlatPartition] = None) -> SmoothSurrogate:
    """Build the smooth surrogate gamma_k for the 2^-k flatness grid.

    Near each grid point the curve is the tangent line through
    (x, gamma(x)); between consecutive line windows the unique constant
    curvature arc joins the junction points with matching slope on the left;
    a per-interval mollifier (support width/800) smooths the junctions.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if fp is None:
        fp = flatness_partition(arc, 2.0**-k)
    c = fp.points
    widths = np.diff(c)
    qtol = 2.0**-k * 1e-6
    if np.min(widths) < 64.0 * qtol:
        raise ArcTooCoarse(
            f"min grid interval {np.min(widths):.3e} below 64x quadrature tolerance"
        )
    gvals = np.array([float(arc.gamma(x)) for x in c])
    gslopes = np.array([float(arc.gamma_right(x)) for x in c])
    gslopes[-1] = float(arc.gamma_left(c[-1]))

    breaks = [c[0]]
    kinds = []
    params = []
    for m in range(len(widths)):
        x, xp = c[m], c[m + 1]
        w = widths[m]
        h = w / 100.0
        # line window around x: [x - widths[m-1]/100, x + h]
        A = np.array([x + h, gvals[m] + h * gslopes[m]])
        B = np.array([xp - h, gvals[m + 1] - h * gslopes[m + 1]])
        kinds.append(0)
        params.append((x, gvals[m], gslopes[m], 0.0))
        breaks.append(x + h)
        circ = _circle_through(A, B, gslopes[m])
        if circ is None:
            chord = (B[1] - A[1]) / (B[0] - A[0]) if B[0] != A[0] else gslopes[m]
            kinds.append(0)
            params.append((A[0], A[1], chord, 0.0))
        else:
            kinds.append(1)
            params.append(circ)
        breaks.append(xp - h)
    kinds.append(0)
    params.append((c[-1], gvals[-1], gslopes[-1], 0.0))
    breaks.append(c[-1])
    curve = _PiecewiseCurve(np.asarray(breaks), np.asarray(kinds), np.asarray(params))

    return SmoothSurrogate(
        k=k,
        grid=c,
        grid_values=gvals,
        grid_slopes=gslopes,
        curve=curve,
        mollify_lo=c[:-1] + widths / 200.0,
        mollify_hi=c[1:] - widths / 200.0,
        radii=widths / 800.0,
    )


def _abs_integral(fun, a, b, cuts, n_sub=8):
    """Integral of |fun| over [a, b], splitting at cuts and subdividing."""
    pts = [a, b] + [c for c in cuts if a < c < b]
    pts = np.sort(np.asarray(pts))
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        sub = np.linspace(lo, hi, n_sub + 1)
        for s0, s1 in zip(sub[:-1], sub[1:]):
            mid, half = 0.5 * (s0 + s1), 0.5 * (s1 - s0)
            nodes = mid + half * _GL32_NODES
            total += half * float(np.abs(fun(nodes)) @ _GL32_WEIGHTS)
    return total


def surrogate_constants(sur: SmoothSurrogate, arc: BoundaryArc,
                        rp: Optional[RefinedPartition] = None,
                        samples_per_interval: int = 24) -> dict:
    """Measured normalized constants for the surrogate properties.

    Keys p1/p2 are absolute sup errors at grid points; p3...p8 are the sups /
    integrals normalized by their stated rates, so bounded constants mean the
    property holds.  p7/p8/cs need the refined partition of a coarser 2^-l
    grid and are omitted when rp is None.
    """
    c = sur.grid
    out = {}
    out["p1"] = float(np.max(np.abs(
        np.array([sur.gamma_k(x) for x in c]) - sur.grid_values)))
    out["p2"] = float(np.max(np.abs(
        np.array([sur.gamma_k_d1(x) for x in c]) - sur.grid_slopes)))

    twok = 2.0**sur.k
    cuts = sur.quad_cuts()
    p3 = p4 = p5 = p6 = 0.0
    for m in range(len(c) - 1):
        w = c[m + 1] - c[m]
        ts = sur.sample_points(c[m], c[m + 1], samples_per_interval)
        d2 = np.abs(sur.evaluate(ts, 2))
        p3 = max(p3, float(np.max(d2)) * w * w * twok)
        i3 = _abs_integral(lambda u: sur.evaluate(u, 3), c[m], c[m + 1],
                           cuts, n_sub=2)
        p4 = max(p4, i3 * w * w * twok)
        g = np.array([float(arc.gamma(t)) for t in ts])
        gp = np.array([float(arc.gamma_right(t)) for t in ts])
        p5 = max(p5, float(np.max(np.abs(sur.evaluate(ts, 0) - g))) * twok)
        p6 = max(p6, float(np.max(np.abs(sur.evaluate(ts, 1) - gp))) * twok * w)
    out.update(p3=p3, p4=p4, p5=p5, p6=p6)

    if rp is not None:
        twol = 1.0 / rp.delta
        p7 = p8 = cs = 0.0
        for j in range(len(rp.points) - 1):
            lo, hi = rp.dilated(j)
            lo, hi = max(lo, c[0]), min(hi, c[-1])
            L = rp.points[j + 1] - rp.points[j]
            i2 = _abs_integral(lambda u: sur.evaluate(u, 2), lo, hi, cuts, n_sub=2)
            p7 = max(p7, i2 * L * twol)
            ts = sur.sample_points(lo, hi, samples_per_interval)
            gp = np.array([float(arc.gamma_right(t)) for t in ts])
            p8 = max(p8, float(np.max(np.abs(sur.evaluate(ts, 1) - gp))) * twol * L)
            inside = np.sum((c[:-1] >= lo) & (c[1:] <= hi))
            cs = max(cs, inside / 2.0 ** ((sur.k - math.log2(twol)) / 2.0))
        out.update(p7=p7, p8=p8, cs=cs)
    return out


# ---------------------------------------------------------------------------
# smooth domain approximants
# ---------------------------------------------------------------------------


def _inscribed_polygon_radial(domain, m, thetas):
    """Radial function of the polygon inscribed at m uniform boundary angles."""
    phis = domain.rotation + TWO_PI * np.arange(m) / m
    V = domain.boundary(phis)
    from .geometry import _Polygon

    poly = _Polygon(V)
    return poly, poly.radial(thetas)


def _fillet_features(V, depth):
    """Tangent-circle fillets of cut depth <= depth at each polygon corner.

    Returns ccw alternating arc/edge features: the arc at vertex i runs from
    the tangent point on edge (i-1, i) to the one on edge (i, i+1).
    """
    nv = len(V)
    t_in = np.empty((nv, 2))
    t_out = np.empty((nv, 2))
    arcs = [None] * nv
    for i in range(nv):
        v = V[i]
        u_in = V[(i - 1) % nv] - v
        u_out = V[(i + 1) % nv] - v
        l_in, l_out = np.linalg.norm(u_in), np.linalg.norm(u_out)
        u_in, u_out = u_in / l_in, u_out / l_out
        turn = math.pi - math.acos(np.clip(u_in @ u_out, -1.0, 1.0))
        if turn < 1e-9:  # collinear pass-through, no fillet
            t_in[i] = t_out[i] = v
            continue
        bis = u_in + u_out
        bis /= np.linalg.norm(bis)
        cos_psi = float(np.clip(u_in @ bis, 1e-12, 1.0))
        sin_psi = math.sqrt(max(1.0 - cos_psi * cos_psi, 0.0))
        q = depth * cos_psi / max(1.0 - sin_psi, 1e-12)
        q = min(q, 0.45 * min(l_in, l_out))
        center = v + (q / cos_psi) * bis
        R = q * sin_psi / cos_psi
        t_in[i] = v + q * u_in
        t_out[i] = v + q * u_out
        phi_in = math.atan2(t_in[i][1] - center[1], t_in[i][0] - center[0])
        phi_out = math.atan2(t_out[i][1] - center[1], t_out[i][0] - center[0])
        if math.fmod(phi_out - phi_in, TWO_PI) % TWO_PI > math.pi:
            phi_in, phi_out = phi_out, phi_in
            t_in[i], t_out[i] = t_out[i].copy(), t_in[i].copy()
        arcs[i] = ("arc", center, R, phi_in, phi_out)
    feats = []
    for i in range(nv):
        if arcs[i] is not None:
            feats.append(arcs[i])
        feats.append(("edge", t_out[i], t_in[(i + 1) % nv]))
    return feats


def smooth_domain_approx(domain: ConvexDomain, n: int,
                         check_angles: int = 16384) -> ConvexDomain:
    """Inscribed polygon with filleted corners: relative gauge error <= 2^-n-1.

    Polygon vertices sit on the boundary at uniform angles (counts double
    until (rho_n - rho)/rho <= 2^-n-2); each corner is rounded by a tangent
    circular arc small enough to keep the total below 2^-n-1 and to keep the
    approximants nested across levels.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    thetas = domain.rotation + TWO_PI * np.arange(check_angles) / check_angles
    r_dom = domain.radial(thetas)
    prev_radial = None
    result = None
    for level in range(1, n + 1):
        m = 64
        while True:
            poly, r_poly = _inscribed_polygon_radial(domain, m, thetas)
            err = float(np.max(r_dom / r_poly - 1.0))
            if err <= 2.0 ** (-level - 2):
                break
            m *= 2
            if m > 1 << 20:
                raise BudgetExceeded("inscribed polygon needs more than 2^20 vertices")
        depth = (2.0 ** (-level - 1) - err) * float(np.min(r_poly)) * 0.5
        shape = None
        for _ in range(60):
            cand = _RoundedPolygon(_fillet_features(poly.vertices, depth))
            r_new = cand.radial(thetas)
            err_new = float(np.max(r_dom / r_new - 1.0))
            nested = prev_radial is None or np.all(r_new >= prev_radial * (1.0 - 1e-12))
            inside = np.all(r_new <= r_dom * (1.0 + 1e-12))
            if err_new <= 2.0 ** (-level - 1) and nested and inside:
                shape = cand
                break
            depth *= 0.5
        if shape is None:
            raise BudgetExceeded("corner rounding failed to nest within budget")
        prev_radial = shape.radial(thetas)
        result = ConvexDomain(
            kind="custom-support",
            M=domain.M,
            params={"smoothed_from": domain.kind, "level": level, "vertices": int(m)},
            rotation=domain.rotation,
            shape=shape,
        )
    return result


# ---------------------------------------------------------------------------
# exceptional set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Parallelogram:
    """{x : |v1.x + 1| <= w1, |v2.x| <= w2}, centered at -grad rho(alpha_j)."""

    v1: np.ndarray
    w1: float
    v2: np.ndarray
    w2: float
    center: np.ndarray
    interval_length: float

    def corners(self) -> np.ndarray:
        A = np.stack([self.v1, self.v2])
        out = []
        for s1 in (-1.0, 1.0):
            for s2 in (-1.0, 1.0):
                out.append(np.linalg.solve(A, [s1 * self.w1 - 1.0, s2 * self.w2]))
        return np.asarray(out)

    def area(self) -> float:
        det = abs(self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0])
        return 4.0 * self.w1 * self.w2 / det

    def contains(self, pts: np.ndarray) -> np.ndarray:
        f1 = pts @ self.v1 + 1.0
        f2 = pts @ self.v2
        return (np.abs(f1) <= self.w1) & (np.abs(f2) <= self.w2)


@dataclass(frozen=True)
class ExceptionalSet:
    l: int
    parallelograms: list
    measure: float
    std_error: float
    bounding_radius: float


def exceptional_set(domain: ConvexDomain, l: int,
                    frames: Optional[list] = None,
                    n_samples: int = 1_000_000,
                    rng: Optional[np.random.Generator] = None) -> ExceptionalSet:
    """Union of parallelograms around the singular set, one per refined
    interval (alpha_j = interval midpoint), with Monte Carlo measure.

    Widths are 2^(-l+15M) and 2^(-l+15M)/|I_j| in the two supporting forms.
    By default only the identity frame is used (the kernel analysis is per
    angular sector); pass frames to take unions over rotated sectors.
    """
    if l < 0:
        raise ValueError("l must be >= 0")
    if rng is None:
        rng = np.random.default_rng(0)
    if frames is None:
        frames = [SectorFrame.identity(domain.M)]
    w_base = 2.0 ** (-l + 15 * domain.M)
    paras = []
    for frame in frames:
        arc = boundary_arc(domain, frame)
        rp = refine_partition(arc, flatness_partition(arc, 2.0**-l))
        R_back = np.array([[math.cos(-frame.theta), -math.sin(-frame.theta)],
                           [math.sin(-frame.theta), math.cos(-frame.theta)]])
        for j in range(len(rp.points) - 1):
            lo, hi = rp.points[j], rp.points[j + 1]
            alpha = 0.5 * (lo + hi)
            g = float(arc.gamma(alpha))
            gp = float(arc.gamma_right(alpha))
            # frame-space form vectors rotated back into domain coordinates
            v1 = R_back @ np.array([alpha, g])
            v2 = R_back @ np.array([1.0, gp])
            center = R_back @ (-grad_rho_at_alpha(arc, alpha))
            paras.append(Parallelogram(v1, w_base, v2, w_base / (hi - lo),
                                       center, hi - lo))
    corners = np.concatenate([p.corners() for p in paras])
    radius = float(np.max(np.linalg.norm(corners, axis=1))) * 1.0000001
    u = rng.random(n_samples)
    phi = rng.random(n_samples) * TWO_PI
    pts = (radius * np.sqrt(u))[:, None] * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    hit = np.zeros(n_samples, dtype=bool)
    for p in paras:
        rest = ~hit
        if not rest.any():
            break
        hit[rest] = p.contains(pts[rest])
    p_hat = float(np.mean(hit))
    disc_area = math.pi * radius * radius
    measure = p_hat * disc_area
    std_error = disc_area * math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n_samples)
    return ExceptionalSet(l, paras, measure, std_error, radius)


def lemma_d_check(domain: ConvexDomain, n: int, deltas, n_angles: int = 2048) -> dict:
    """Covering comparability N(Omega_n, 2 delta) <= N(Omega, delta)."""
    approx = smooth_domain_approx(domain, n)
    rows = []
    for d in deltas:
        Nn = covering_number(approx, 2.0 * d, n_angles).N
        N = covering_number(domain, d, n_angles).N
        rows.append((d, Nn, N))
    return {"approx": approx, "rows": rows,
            "ok": all(Nn <= N for _, Nn, N in rows)}
