"""Normalized convex planar domains and their Minkowski functionals.

A domain is normalized so that every boundary point p satisfies
8 <= |p| < 2**M.  All boundary access goes through an angle-indexed sampler
(the radial function); the lower boundary over x1 in [-1, 1] is exposed as a
convex graph gamma with one-sided derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import (
    DegenerateArc,
    NonConvexInput,
    NormalizationFailure,
    OriginNotInterior,
    ZeroArgument,
)

TWO_PI = 2.0 * math.pi

# turn angle (radians) above which a vertex counts as a genuine corner
CORNER_TURN = 1e-2


def _unit(theta):
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def _rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


# ---------------------------------------------------------------------------
# internal boundary representations
# ---------------------------------------------------------------------------


class _Disc:
    def __init__(self, radius):
        self.radius = float(radius)

    def radial(self, theta):
        return np.full_like(np.asarray(theta, dtype=float), self.radius)

    def tangents(self, theta):
        u = _unit(theta)
        t = np.stack([-u[..., 1], u[..., 0]], axis=-1)
        return t, t

    def support_angle(self, direction):
        return math.atan2(direction[1], direction[0])

    def corner_angles(self):
        return np.empty(0)

    def rotated(self, dtheta):
        return self

    def min_radius(self):
        return self.radius

    def max_radius(self):
        return self.radius


class _Polygon:
    """Convex polygon given by ccw vertices (all strictly convex turns allowed
    to be arbitrarily small; angles from the origin must be strictly increasing)."""

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=float)
        ang = np.arctan2(V[:, 1], V[:, 0])
        start = int(np.argmin(ang))
        V = np.roll(V, -start, axis=0)
        ang = np.arctan2(V[:, 1], V[:, 0])
        # unwrap into one strictly increasing revolution
        ang = ang[0] + np.concatenate([[0.0], np.cumsum(np.mod(np.diff(ang), TWO_PI))])
        if ang[-1] - ang[0] >= TWO_PI or np.any(np.diff(ang) <= 0):
            raise NonConvexInput("vertex angles are not strictly increasing")
        self.vertices = V
        self.vert_angles = ang
        E = np.roll(V, -1, axis=0) - V
        self.edge_dirs = E / np.linalg.norm(E, axis=1, keepdims=True)
        N = np.stack([self.edge_dirs[:, 1], -self.edge_dirs[:, 0]], axis=-1)
        self.edge_normals = N
        self.offsets = np.einsum("ij,ij->i", N, V)
        if np.any(self.offsets <= 0):
            raise OriginNotInterior("an edge line passes through or behind the origin")
        na = np.arctan2(N[:, 1], N[:, 0])
        na = na[0] + np.concatenate([[0.0], np.cumsum(np.mod(np.diff(na), TWO_PI))])
        self._normal_angles = na

    def _edge_index(self, theta):
        a0 = self.vert_angles[0]
        t = np.mod(np.asarray(theta, dtype=float) - a0, TWO_PI) + a0
        idx = np.searchsorted(self.vert_angles, t, side="right") - 1
        return np.clip(idx, 0, len(self.vertices) - 1), t

    def radial(self, theta):
        idx, t = self._edge_index(theta)
        u = _unit(t)
        denom = np.einsum("...j,...j->...", self.edge_normals[idx], u)
        return self.offsets[idx] / denom

    def tangents(self, theta):
        idx, t = self._edge_index(theta)
        fwd = self.edge_dirs[idx]
        at_vertex = np.abs(t - self.vert_angles[idx]) < 1e-12
        back_idx = np.where(at_vertex, idx - 1, idx) % len(self.vertices)
        return self.edge_dirs[back_idx], fwd

    def support_angle(self, direction):
        # vertex whose normal fan [normal_{i-1}, normal_i] contains the direction
        d = math.atan2(direction[1], direction[0])
        na = self._normal_angles
        t = math.fmod(d - na[0], TWO_PI)
        if t < 0:
            t += TWO_PI
        t += na[0]
        i = int(np.searchsorted(na, t, side="left")) % len(self.vertices)
        return float(self.vert_angles[i])

    def corner_angles(self):
        d_prev = np.roll(self.edge_dirs, 1, axis=0)
        cross = d_prev[:, 0] * self.edge_dirs[:, 1] - d_prev[:, 1] * self.edge_dirs[:, 0]
        dot = np.einsum("ij,ij->i", d_prev, self.edge_dirs)
        turn = np.arctan2(cross, dot)
        return self.vert_angles[turn > CORNER_TURN]

    def rotated(self, dtheta):
        return _Polygon(self.vertices @ _rot(dtheta).T)

    def min_radius(self):
        return float(np.min(self.offsets))

    def max_radius(self):
        return float(np.max(np.linalg.norm(self.vertices, axis=1)))


class _RoundedPolygon:
    """Convex boundary made of ccw edge segments and circular fillet arcs."""

    def __init__(self, features):
        # features: ("edge", p0, p1) or ("arc", center, r, phi0, phi1), ccw
        kept = []
        for f in features:
            if f[0] == "edge" and np.linalg.norm(f[2] - f[1]) < 1e-14:
                continue
            if f[0] == "arc" and (f[2] < 1e-14 or abs(f[4] - f[3]) < 1e-14):
                continue
            kept.append(f)
        starts = []
        for f in kept:
            p = f[1] if f[0] == "edge" else f[1] + f[2] * np.array(
                [math.cos(f[3]), math.sin(f[3])])
            starts.append(math.atan2(p[1], p[0]))
        starts = np.asarray(starts)
        order = np.argsort(starts, kind="stable")
        self.features = [kept[i] for i in order]
        self.start_angles = starts[order]
        # per-feature arrays for vectorized ray hits
        n = len(self.features)
        self.is_edge = np.zeros(n, dtype=bool)
        self.edge_n = np.zeros((n, 2))
        self.edge_h = np.zeros(n)
        self.edge_d = np.zeros((n, 2))
        self.arc_c = np.zeros((n, 2))
        self.arc_r = np.zeros(n)
        for i, f in enumerate(self.features):
            if f[0] == "edge":
                self.is_edge[i] = True
                d = f[2] - f[1]
                d /= np.linalg.norm(d)
                self.edge_d[i] = d
                nvec = np.array([d[1], -d[0]])
                self.edge_n[i] = nvec
                self.edge_h[i] = nvec @ f[1]
            else:
                self.arc_c[i] = f[1]
                self.arc_r[i] = f[2]

    def _feature_index(self, theta):
        a0 = self.start_angles[0]
        t = np.mod(np.asarray(theta, dtype=float) - a0, TWO_PI) + a0
        idx = np.searchsorted(self.start_angles, t + 1e-14, side="right") - 1
        return np.clip(idx, 0, len(self.features) - 1)

    def radial(self, theta):
        theta = np.asarray(theta, dtype=float)
        i = self._feature_index(theta)
        u = _unit(theta)
        r_edge = self.edge_h[i] / np.maximum(
            np.einsum("...j,...j->...", self.edge_n[i], u), 1e-300)
        b = np.einsum("...j,...j->...", self.arc_c[i], u)
        disc = b * b - (np.einsum("...j,...j->...", self.arc_c[i], self.arc_c[i])
                        - self.arc_r[i] ** 2)
        # fillet arcs bulge away from the origin: the far intersection is the
        # boundary (the circle interior lies inside the domain)
        r_arc = b + np.sqrt(np.maximum(disc, 0.0))
        return np.where(self.is_edge[i], r_edge, r_arc)

    def tangents(self, theta):
        theta = np.asarray(theta, dtype=float)
        i = self._feature_index(theta)
        pts = self.radial(theta)[..., None] * _unit(theta)
        rel = pts - self.arc_c[i]
        t_arc = np.stack([-rel[..., 1], rel[..., 0]], axis=-1)
        t_arc /= np.maximum(np.linalg.norm(t_arc, axis=-1, keepdims=True), 1e-300)
        # ccw orientation: cross(point, tangent) > 0
        flip = pts[..., 0] * t_arc[..., 1] - pts[..., 1] * t_arc[..., 0] < 0
        t_arc = np.where(flip[..., None], -t_arc, t_arc)
        tang = np.where(self.is_edge[i][..., None], self.edge_d[i], t_arc)
        return tang, tang

    def support_angle(self, direction):
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)
        best, best_val = None, -np.inf
        for f in self.features:
            if f[0] == "edge":
                cands = [f[1], f[2]]
            else:
                _, c, r, phi0, phi1 = f
                cands = [
                    c + r * np.array([math.cos(phi0), math.sin(phi0)]),
                    c + r * np.array([math.cos(phi1), math.sin(phi1)]),
                ]
                phid = math.atan2(d[1], d[0])
                span = math.fmod(phi1 - phi0, TWO_PI) % TWO_PI
                off = math.fmod(phid - phi0, TWO_PI) % TWO_PI
                if off <= span:
                    cands.append(c + r * d)
            for p in cands:
                v = p @ d
                if v > best_val:
                    best_val, best = v, p
        return math.atan2(best[1], best[0])

    def corner_angles(self):
        return np.empty(0)

    def rotated(self, dtheta):
        R = _rot(dtheta)
        feats = []
        for f in self.features:
            if f[0] == "edge":
                feats.append(("edge", R @ f[1], R @ f[2]))
            else:
                _, c, r, phi0, phi1 = f
                feats.append(("arc", R @ c, r, phi0 + dtheta, phi1 + dtheta))
        return _RoundedPolygon(feats)

    def min_radius(self):
        th = np.linspace(-math.pi, math.pi, 4096, endpoint=False)
        return float(np.min(self.radial(th)))

    def max_radius(self):
        th = np.linspace(-math.pi, math.pi, 4096, endpoint=False)
        return float(np.max(self.radial(th)))


# ---------------------------------------------------------------------------
# Cantor-Lebesgue machinery
# ---------------------------------------------------------------------------


def _cantor_digits(t: "Fraction", q: "Fraction", depth: int) -> "Fraction":
    value = Fraction(0)
    w = Fraction(1, 2)
    x = t
    for _ in range(depth):
        if q < x < 1 - q:
            return value + w  # plateau on a removed gap
        if x <= q:
            x = x / q
        else:
            value += w
            x = (x - (1 - q)) / q
        w /= 2
    return value + 2 * w * x  # linear tail: monotone, endpoints exact


def cantor_function(t, ratio=1.0 / 3.0, depth=40):
    """Lebesgue (Cantor) function by digit expansion, truncated at `depth`.

    Digits are peeled in exact rational arithmetic (a float input is an exact
    rational; the ratio is snapped to the nearest denominator <= 1e12 rational
    so that e.g. the float 1/3 means the rational 1/3), so the only error is
    the truncation, at most 2**-depth.  Inputs outside [0, 1] are contract
    violations and raise.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not 0.0 < ratio <= 0.5:
        raise ValueError("ratio must lie in (0, 1/2]")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0) or np.any(t_arr > 1.0):
        raise ValueError("cantor_function argument outside [0, 1]")
    q = Fraction(ratio).limit_denominator(10**12)
    flat = np.atleast_1d(t_arr)
    out = np.array([float(_cantor_digits(Fraction(float(x)), q, depth)) for x in flat.ravel()])
    return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)


def cantor_integral(t, ratio=1.0 / 3.0, depth=60):
    """F(t) = integral of the Cantor function from 0 to t (self-similar peeling)."""
    q = ratio
    D = q / 4.0 + (1.0 - 2.0 * q) / 2.0  # F(1-q)
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    x = np.atleast_1d(t_arr).astype(float).copy()
    C = np.zeros_like(x)
    S = np.ones_like(x)
    done = np.zeros_like(x, dtype=bool)
    for _ in range(depth):
        gap = (~done) & (x > q) & (x < 1.0 - q)
        C[gap] += S[gap] * (q / 4.0 + (x[gap] - q) / 2.0)
        done |= gap
        lo = (~done) & (x <= q)
        hi = (~done) & (x >= 1.0 - q)
        x[lo] /= q
        xh = (x[hi] - (1.0 - q)) / q
        C[hi] += S[hi] * (D + 0.5 * q * xh)
        x[hi] = xh
        S[~done] *= q / 2.0
    C[~done] += S[~done] * 0.5 * x[~done]
    return float(C[0]) if scalar else C.reshape(t_arr.shape)


def _cantor_polyline(ratio, depth):
    """Machine-precision polyline for the graph of F(t) - 1 on [0, 1].

    Vertices are the endpoints of the depth-`depth` dissection intervals; on
    the removed gaps the graph is exactly linear, on the kept intervals the
    chord deviates from the true graph by at most ratio**depth * 2**-depth.
    """
    q = ratio
    D = q / 4.0 + (1.0 - 2.0 * q) / 2.0
    T = np.array([0.0])
    F = np.array([0.0])
    G = np.array([0.0])
    for _ in range(depth):
        T, F, G = (
            np.concatenate([q * T, (1.0 - q) + q * T]),
            np.concatenate([0.5 * q * F, D + 0.5 * q * (T + F)]),
            np.concatenate([0.5 * G, 0.5 + 0.5 * G]),
        )
    width = q**depth
    Tr = T + width
    Fr = F + width * (G + 0.5 * 2.0**-depth)
    ts = np.empty(2 * len(T))
    fs = np.empty(2 * len(T))
    ts[0::2], ts[1::2] = T, Tr
    fs[0::2], fs[1::2] = F, Fr
    return ts, fs - 1.0


# ---------------------------------------------------------------------------
# public domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorFrame:
    """Rotation index nu in [1, 2**(2M)] with angle 2*pi*nu / 2**(2M)."""

    nu: int
    M: int

    def __post_init__(self):
        if not 1 <= self.nu <= 4**self.M:
            raise ValueError("sector index out of range")

    @property
    def theta(self) -> float:
        if self.nu == 4**self.M:
            return 0.0
        return TWO_PI * self.nu / 4**self.M

    @classmethod
    def identity(cls, M: int) -> "SectorFrame":
        return cls(nu=4**M, M=M)


@dataclass(frozen=True)
class ConvexDomain:
    """Normalized convex body with an angle-indexed boundary sampler."""

    kind: str
    M: int
    params: dict
    rotation: float = 0.0
    shape: object = field(default=None, repr=False, compare=False)

    def boundary(self, theta):
        """Boundary point on the ray of angle theta (vectorized)."""
        theta = np.asarray(theta, dtype=float)
        return self.shape.radial(theta)[..., None] * _unit(theta)

    def radial(self, theta):
        return self.shape.radial(theta)

    def rotated(self, dtheta: float) -> "ConvexDomain":
        if dtheta == 0.0:
            return self
        return ConvexDomain(
            kind=self.kind,
            M=self.M,
            params=self.params,
            rotation=(self.rotation + dtheta) % TWO_PI,
            shape=self.shape.rotated(dtheta),
        )


@dataclass(frozen=True)
class BoundaryArc:
    """Lower-boundary graph gamma on [-1, 1] with one-sided derivatives.

    gamma(t) < 0 with 1 < |gamma(t)| < 2**M; gamma_right is nondecreasing and
    |t * gamma'(t) - gamma(t)| >= 2**(-4M) (the Jacobian never degenerates).
    """

    gamma: Callable
    gamma_left: Callable
    gamma_right: Callable
    M: int
    gamma2: Optional[Callable] = None
    frame: Optional[SectorFrame] = None


def _normalize_scale(min_dist, max_dist):
    """Power-of-two scale putting the nearest boundary point into [8, 16)."""
    if min_dist <= 0:
        raise OriginNotInterior("boundary touches the origin")
    j = math.ceil(math.log2(8.0 / min_dist))
    scale = 2.0**j
    M = math.floor(math.log2(max_dist * scale)) + 1
    if M > 62:
        raise NormalizationFailure(f"required M={M} exceeds 62")
    return scale, M


def construct_domain(spec: dict) -> ConvexDomain:
    """Build a normalized domain from a kind + params spec.

    Raises NonConvexInput, OriginNotInterior or NormalizationFailure when the
    input cannot be normalized to 8 <= |p| < 2**M.
    """
    kind = spec.get("kind")
    if kind == "disc":
        radius = float(spec["radius"])
        if radius < 8.0:
            raise NormalizationFailure(
                f"disc radius {radius} < 8; scale by {math.ceil(8.0 / radius)}"
            )
        M = math.floor(math.log2(radius)) + 1
        if M > 62:
            raise NormalizationFailure("disc too large")
        return ConvexDomain("disc", M, {"radius": radius}, shape=_Disc(radius))

    if kind == "polygon":
        V = np.asarray(spec["vertices"], dtype=float)
        if len(V) < 3:
            raise NonConvexInput("need at least 3 vertices")
        area2 = np.sum(V[:, 0] * np.roll(V[:, 1], -1) - V[:, 1] * np.roll(V[:, 0], -1))
        if area2 < 0:
            V = V[::-1]
        E = np.roll(V, -1, axis=0) - V
        cross = E[:, 0] * np.roll(E[:, 1], -1) - E[:, 1] * np.roll(E[:, 0], -1)
        if np.any(cross <= 0):
            raise NonConvexInput("vertices not in strictly convex position")
        probe = _Polygon(V)
        scale, M = _normalize_scale(probe.min_radius(), probe.max_radius())
        return ConvexDomain(
            "polygon",
            M,
            {"vertices": (V * scale).tolist(), "scale": scale},
            shape=_Polygon(V * scale),
        )

    if kind == "cantor":
        ratio = float(spec.get("ratio", 1.0 / 3.0))
        if not 0.0 < ratio <= 0.5:
            raise ValueError("cantor ratio must lie in (0, 1/2]")
        depth = int(spec.get("depth", 16))
        ts, gs = _cantor_polyline(ratio, depth)
        curve = np.stack([ts, gs], axis=-1)
        corners = np.array([[1.0, -0.5], [1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [0.0, -1.0]])
        V = np.concatenate([corners, curve[1:-1]])
        probe = _Polygon(V)
        scale, M = _normalize_scale(probe.min_radius(), probe.max_radius())
        return ConvexDomain(
            "cantor",
            M,
            {"ratio": ratio, "depth": depth, "scale": scale},
            shape=_Polygon(V * scale),
        )

    if kind == "custom-support":
        h = np.asarray(spec["support"], dtype=float)
        n = len(h)
        if n < 8:
            raise NonConvexInput("need at least 8 support samples")
        if np.any(h <= 0):
            raise OriginNotInterior("support sample <= 0")
        dphi = TWO_PI / n
        if np.any(np.roll(h, 1) + np.roll(h, -1) < 2.0 * h * math.cos(dphi) - 1e-12 * np.max(h)):
            raise NonConvexInput("samples violate the discrete support-function condition")
        phis = dphi * np.arange(n)
        u = _unit(phis)
        # vertex between consecutive supporting lines u_j . x = h_j
        uj, hj = u, h
        uk, hk = np.roll(u, -1, axis=0), np.roll(h, -1)
        det = uj[:, 0] * uk[:, 1] - uj[:, 1] * uk[:, 0]
        vx = (hj * uk[:, 1] - hk * uj[:, 1]) / det
        vy = (hk * uj[:, 0] - hj * uk[:, 0]) / det
        V = np.stack([vx, vy], axis=-1)
        keep = np.linalg.norm(np.diff(V, axis=0, append=V[:1]), axis=1) > 1e-12 * np.max(h)
        V = V[keep]
        probe = _Polygon(V)
        scale, M = _normalize_scale(float(np.min(h)), probe.max_radius())
        return ConvexDomain(
            "custom-support",
            M,
            {"support": (h * scale).tolist(), "scale": scale},
            shape=_Polygon(V * scale),
        )

    raise ValueError(f"unknown domain kind: {kind!r}")


def minkowski(domain: ConvexDomain, xi) -> float:
    """Gauge rho(xi) = |xi| / r(theta_xi); rho(0) = 0.

    This is the closed-form limit of bisecting the ray scaling against the
    boundary sampler, well below the 1e-10 relative-tolerance contract.
    """
    xi = np.asarray(xi, dtype=float)
    norm = np.hypot(xi[..., 0], xi[..., 1])
    theta = np.arctan2(xi[..., 1], xi[..., 0])
    r = domain.shape.radial(theta)
    out = np.where(norm > 0.0, norm / r, 0.0)
    return float(out) if out.ndim == 0 else out


def minkowski_grid(domain: ConvexDomain, xi1, xi2):
    """rho on a meshgrid, broadcasting the two coordinate arrays."""
    x1, x2 = np.broadcast_arrays(np.asarray(xi1, float), np.asarray(xi2, float))
    norm = np.hypot(x1, x2)
    theta = np.arctan2(x2, x1)
    r = domain.shape.radial(theta)
    return np.where(norm > 0.0, norm / r, 0.0)


def _outward_normal(tangent):
    # ccw traversal: outward normal is the tangent rotated by -90 degrees
    return np.stack([tangent[..., 1], -tangent[..., 0]], axis=-1)


def grad_rho(domain: ConvexDomain, xi):
    """Gradient of the gauge at xi != 0.

    Returns (gradient, one_sided).  At corner rays the right-derivative
    (ccw-forward) supporting line is used and one_sided is True.
    """
    xi = np.asarray(xi, dtype=float)
    if np.hypot(xi[0], xi[1]) == 0.0:
        raise ZeroArgument("grad_rho at the origin")
    theta = math.atan2(xi[1], xi[0])
    p = domain.boundary(theta)
    t_back, t_fwd = domain.shape.tangents(np.asarray(theta))
    n_fwd = _outward_normal(t_fwd)
    n_back = _outward_normal(t_back)
    grad = n_fwd / float(np.dot(p, n_fwd))
    cross = abs(n_fwd[0] * n_back[1] - n_fwd[1] * n_back[0])
    return grad, bool(cross > 1e-9)


def grad_rho_at_alpha(arc: BoundaryArc, alpha: float):
    """(gamma'(a), -1) / (a gamma'(a) - gamma(a)) with the right derivative."""
    gp = arc.gamma_right(alpha)
    g = arc.gamma(alpha)
    return np.array([gp, -1.0]) / (alpha * gp - g)


def _polygon_lower_chain(shape: _Polygon):
    """Vertex chain of the downward-facing edges (the lower boundary graph).

    Downward edges (outward normal with negative y) have increasing x and run
    from the support vertex of (-1, 0) to that of (+1, 0), so the chain always
    covers x in [-8, 8] superset of the arc window.
    """
    n = len(shape.vertices)
    mask = shape.edge_normals[:, 1] < 0.0
    if not mask.any():
        raise DegenerateArc("no downward-facing edges")
    # downward edges are ccw-contiguous; rotate the cycle so the run is a block
    start = 0
    if mask[0] and mask[-1] and not mask.all():
        start = int(np.argmin(mask))
    idx = [(start + i) % n for i in range(n)]
    run = [i for i in idx if mask[i]]
    xs = [shape.vertices[run[0], 0]]
    ys = [shape.vertices[run[0], 1]]
    for i in run:
        xs.append(shape.vertices[(i + 1) % n, 0])
        ys.append(shape.vertices[(i + 1) % n, 1])
    xs, ys = np.asarray(xs), np.asarray(ys)
    slopes = np.diff(ys) / np.diff(xs)
    if np.any(np.diff(slopes) < -1e-9):
        raise DegenerateArc("lower chain is not convex")
    return xs, ys, slopes


def _arc_from_chain(xs, ys, slopes, M, frame):
    def locate(t):
        i = np.clip(np.searchsorted(xs, t, side="right") - 1, 0, len(slopes) - 1)
        return i

    def gamma(t):
        t_arr = np.asarray(t, dtype=float)
        i = locate(t_arr)
        return ys[i] + slopes[i] * (t_arr - xs[i])

    def gamma_left(t):
        t_arr = np.asarray(t, dtype=float)
        i = np.clip(np.searchsorted(xs, t_arr, side="left") - 1, 0, len(slopes) - 1)
        return slopes[i]

    def gamma_right(t):
        t_arr = np.asarray(t, dtype=float)
        i = locate(t_arr)
        return slopes[i]

    return BoundaryArc(
        gamma=gamma,
        gamma_left=gamma_left,
        gamma_right=gamma_right,
        gamma2=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        M=M,
        frame=frame,
    )


def boundary_arc(domain: ConvexDomain, frame: Optional[SectorFrame] = None) -> BoundaryArc:
    """Lower-boundary graph of the rotated domain R_theta(nu) Omega.

    Exact evaluators for disc, polygon-like and (unrotated) cantor kinds.
    """
    if frame is None:
        frame = SectorFrame.identity(domain.M)
    rotated = domain.rotated(frame.theta)

    if domain.kind == "cantor" and rotated.rotation % TWO_PI == 0.0:
        ratio = domain.params["ratio"]
        scale = domain.params["scale"]
        # exact graph on [0, scale]; linear continuations cover partition
        # points slightly past the window
        top = float(scale * (cantor_integral(min(1.25 / scale, 1.0), ratio) - 1.0))
        top_slope = float(cantor_function(min(1.25 / scale, 1.0), ratio))

        def gamma(t):
            t_arr = np.asarray(t, dtype=float)
            inner = np.clip(t_arr, 0.0, 1.25) / scale
            curve = scale * (cantor_integral(inner, ratio) - 1.0)
            curve = np.where(t_arr > 1.25, top + top_slope * (t_arr - 1.25), curve)
            return np.where(t_arr < 0.0, -scale, curve)

        def gprime(t):
            t_arr = np.asarray(t, dtype=float)
            g = cantor_function(np.clip(t_arr, 0.0, 1.25) / scale, ratio)
            return np.where(t_arr < 0.0, 0.0, g)

        return BoundaryArc(gamma=gamma, gamma_left=gprime, gamma_right=gprime,
                           M=domain.M, frame=frame)

    shape = rotated.shape
    if isinstance(shape, _Disc):
        R = shape.radius

        def gamma(t):
            return -np.sqrt(R * R - np.asarray(t, dtype=float) ** 2)

        def gprime(t):
            t_arr = np.asarray(t, dtype=float)
            return t_arr / np.sqrt(R * R - t_arr * t_arr)

        def gamma2(t):
            t_arr = np.asarray(t, dtype=float)
            return R * R / (R * R - t_arr * t_arr) ** 1.5

        return BoundaryArc(gamma=gamma, gamma_left=gprime, gamma_right=gprime,
                           gamma2=gamma2, M=domain.M, frame=frame)

    if isinstance(shape, _Polygon):
        xs, ys, slopes = _polygon_lower_chain(shape)
        return _arc_from_chain(xs, ys, slopes, domain.M, frame)

    # generic fallback: solve the ray angle by bisection, slopes by one-sided
    # secants (step 1e-7)
    def solve_theta(t):
        lo, hi = -math.pi + 1e-9, -1e-9
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            x = float(shape.radial(np.asarray(mid))) * math.cos(mid)
            if x < t:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def gamma(t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.array([
            float(shape.radial(np.asarray(solve_theta(x)))) * math.sin(solve_theta(x))
            for x in t_arr
        ])
        return out[0] if np.asarray(t).ndim == 0 else out

    def gamma_left(t):
        return (gamma(t) - gamma(np.asarray(t) - 1e-7)) / 1e-7

    def gamma_right(t):
        return (gamma(np.asarray(t) + 1e-7) - gamma(t)) / 1e-7

    return BoundaryArc(gamma=gamma, gamma_left=gamma_left, gamma_right=gamma_right,
                       M=domain.M, frame=frame)


def ellipse_domain(a: float, b: float, samples: int = 2048) -> ConvexDomain:
    """Convenience: ellipse with semi-axes (a, b) via support-function samples."""
    phis = TWO_PI * np.arange(samples) / samples
    h = np.sqrt((a * np.cos(phis)) ** 2 + (b * np.sin(phis)) ** 2)
    return construct_domain({"kind": "custom-support", "support": h.tolist()})
