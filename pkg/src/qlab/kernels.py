"""Spatial kernels from multiplier fields, an independent quadrature oracle,
and the decay / atom / square-function experiments.

Fourier convention: forward integral with e^{-i x.xi}, inverse carries
(2 pi)^-2; all Riemann sums carry the grid cell measures explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    AliasingRisk,
    CubeTooSmall,
    QuadratureBudget,
    TGridTooCoarse,
)
from .geometry import BoundaryArc, ConvexDomain
from .multipliers import (
    DyadicCutoff,
    MultiplierField,
    SymbolSpec,
    bochner_riesz_dt,
    dyadic_sum,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Grid:
    """Square spatial window [-L, L)^2 with n x n samples (n a power of two).

    The dual frequency grid has spacing pi/L and extent pi n / (2 L).
    """

    extent: float
    size: int

    def __post_init__(self):
        n = self.size
        if n < 4 or n & (n - 1):
            raise ValueError("grid size must be a power of two >= 4")

    @property
    def spacing(self) -> float:
        return 2.0 * self.extent / self.size

    @property
    def freq_spacing(self) -> float:
        return math.pi / self.extent

    @property
    def freq_extent(self) -> float:
        return math.pi * self.size / (2.0 * self.extent)

    def axis(self) -> np.ndarray:
        return (np.arange(self.size) - self.size // 2) * self.spacing

    def freq_axis(self) -> np.ndarray:
        return (np.arange(self.size) - self.size // 2) * self.freq_spacing


@dataclass(frozen=True)
class SampledField:
    """Complex samples values[i, j] = f(x_i, y_j) on a grid."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def coarsened(self) -> "SampledField":
        g = Grid(self.grid.extent, self.grid.size // 2)
        return SampledField(g, self.values[::2, ::2])


def _sample_multiplier(fld: MultiplierField, grid: Grid) -> np.ndarray:
    xi = grid.freq_axis()
    return np.asarray(fld.evaluate(xi[:, None], xi[None, :]), dtype=complex)


def synthesize_kernel(fld: MultiplierField, grid: Grid) -> SampledField:
    """Inverse 2D DFT of the sampled multiplier with continuum normalization.

    Output K(x) = (dxi)^2/(2 pi)^2 sum F(xi) e^{i x.xi} on the dual spatial
    grid; requires the multiplier support to fit the frequency window with a
    2x margin.
    """
    if fld.support_radius is not None and grid.freq_extent < 2.0 * fld.support_radius:
        raise AliasingRisk(
            f"freq extent {grid.freq_extent:.3g} < 2x support {fld.support_radius:.3g}"
        )
    F = _sample_multiplier(fld, grid)
    scale = (grid.size * grid.freq_spacing) ** 2 / (4.0 * math.pi**2)
    K = np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(F))) * scale
    return SampledField(grid, K)


def inverse_transform(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Same inverse DFT normalization applied to raw frequency samples."""
    scale = (grid.size * grid.freq_spacing) ** 2 / (4.0 * math.pi**2)
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(values))) * scale


def forward_transform(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Forward DFT with the cell measure h^2 (continuum convention)."""
    return (np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(values)))
            * grid.spacing**2)


def l1_norm(fld: SampledField) -> tuple:
    """Riemann sum of |K| h^2 and the coarsening error |value(n)-value(n/2)|."""
    h2 = fld.grid.spacing**2
    value = float(np.sum(np.abs(fld.values)) * h2)
    coarse = fld.coarsened()
    cval = float(np.sum(np.abs(coarse.values)) * coarse.grid.spacing**2)
    return value, abs(value - cval)


def lp_norm(fld: SampledField, p: float) -> float:
    h2 = fld.grid.spacing**2
    return float((np.sum(np.abs(fld.values) ** p) * h2) ** (1.0 / p))


# ---------------------------------------------------------------------------
# homogeneous-coordinate quadrature oracle
# ---------------------------------------------------------------------------


def _gl_nodes(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


_GL_CACHE = {}


def _gl(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = _gl_nodes(n)
    return _GL_CACHE[n]


def quadrature_kernel(domain: ConvexDomain, symbol: SymbolSpec, k: int,
                      points: np.ndarray, arc: Optional[BoundaryArc] = None,
                      cutoff_width: Optional[float] = None,
                      node_budget: int = 100_000_000) -> np.ndarray:
    """Sector kernel by nested Gauss quadrature in homogeneous coordinates.

    K(x) = (2 pi)^-2 int_0^inf int e^{i s (a x1 + gamma(a) x2 + 1)} a(s)
    theta_k(s) chi1(a/|p(a)|) s (a gamma'(a) - gamma(a)) da ds, with at least
    16 nodes per period of the phase in each variable.
    """
    from .geometry import boundary_arc

    if arc is None:
        arc = boundary_arc(domain)
    theta = DyadicCutoff(k, domain.M)
    s_lo, s_hi = theta.support
    s_lo = max(s_lo, symbol.inner_cutoff)
    if s_hi <= s_lo:
        return np.zeros(len(points), dtype=complex)
    w = cutoff_width if cutoff_width is not None else 2.0 ** (-2 * domain.M)

    from . import bumps

    # alpha support: |alpha| / |(alpha, gamma(alpha))| <= w
    a_max = w * 2.0 ** (domain.M + 1)
    a_max = min(a_max, 1.0)
    alphas_probe = np.linspace(-a_max, a_max, 512)
    g_probe = np.asarray(arc.gamma(alphas_probe))
    ratio = alphas_probe / np.hypot(alphas_probe, g_probe)
    live = np.abs(ratio) <= w
    if not live.any():
        return np.zeros(len(points), dtype=complex)
    a_lo = float(alphas_probe[live].min())
    a_hi = float(alphas_probe[live].max())

    pts = np.asarray(points, dtype=float)
    out = np.empty(len(pts), dtype=complex)
    gp_bound = 2.0 ** (domain.M - 1)
    for i, (x1, x2) in enumerate(pts):
        # phase rates bound the oscillation in each variable
        u_bound = 1.0 + abs(x1) + 2.0**domain.M * abs(x2)
        periods_s = (s_hi - s_lo) * u_bound / TWO_PI
        n_s = max(48, int(16 * periods_s) + 1)
        rate_alpha = s_hi * (abs(x1) + gp_bound * abs(x2))
        periods_a = (a_hi - a_lo) * rate_alpha / TWO_PI
        n_a = max(48, int(16 * periods_a) + 1)
        if n_s * n_a > node_budget:
            raise QuadratureBudget(f"{n_s} x {n_a} nodes exceed the budget")
        xs, ws = _gl(min(n_s, 512))
        n_panel_s = max(1, n_s // 512 + 1)
        xa, wa = _gl(min(n_a, 512))
        n_panel_a = max(1, n_a // 512 + 1)

        # inner integral over alpha for every s node at once
        a_edges = np.linspace(a_lo, a_hi, n_panel_a + 1)
        alpha_nodes = []
        alpha_wts = []
        for pa in range(n_panel_a):
            mid = 0.5 * (a_edges[pa] + a_edges[pa + 1])
            half = 0.5 * (a_edges[pa + 1] - a_edges[pa])
            alpha_nodes.append(mid + half * xa)
            alpha_wts.append(half * wa)
        alpha_nodes = np.concatenate(alpha_nodes)
        alpha_wts = np.concatenate(alpha_wts)
        g = np.asarray(arc.gamma(alpha_nodes))
        gp = np.asarray(arc.gamma_right(alpha_nodes))
        chi = bumps.window(alpha_nodes / np.hypot(alpha_nodes, g), w / 2.0, w)
        jac_a = (alpha_nodes * gp - g) * chi * alpha_wts
        phase_a = alpha_nodes * x1 + g * x2 + 1.0

        s_edges = np.linspace(s_lo, s_hi, n_panel_s + 1)
        total = 0.0 + 0.0j
        for ps in range(n_panel_s):
            mid = 0.5 * (s_edges[ps] + s_edges[ps + 1])
            half = 0.5 * (s_edges[ps + 1] - s_edges[ps])
            s_nodes = mid + half * xs
            s_wts = half * ws * np.asarray(symbol(s_nodes)) * theta(s_nodes) * s_nodes
            osc = np.exp(1j * np.outer(s_nodes, phase_a))
            total += (s_wts @ (osc @ jac_a))
        out[i] = total / (4.0 * math.pi**2)
    return out


# ---------------------------------------------------------------------------
# decay experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayReport:
    """Dyadic kernel L1 norms with the normalized-decay statistics."""

    ks: np.ndarray
    l1_norms: np.ndarray
    refine_errors: np.ndarray
    slope: float
    normalized_sup: float   # c* = max_k 2^(k eps/2) ||K_k||_1
    normalized_min: float
    skipped: list           # k values whose band misses the symbol support


def decay_experiment(domain: ConvexDomain, symbol: SymbolSpec, ks,
                     grid: Grid) -> DecayReport:
    """||K_k||_1 for the (uncut) wave multiplier bands, with the
    2^(k eps/2)-normalized sup and a log2 slope fit.

    Bands with theta_k supported inside the symbol's excluded interval are
    identically zero and reported as skipped.  The gauge and symbol factors
    are sampled once and shared across the bands.
    """
    from . import bumps
    from .geometry import minkowski_grid

    eps = symbol.epsilon
    if eps <= 0:
        raise ValueError("decay experiment needs epsilon > 0")
    ks = [int(k) for k in ks]
    sup_radius = 2.0**domain.M * 2.0 ** (max(ks) - 3 * domain.M)
    if grid.freq_extent < 2.0 * sup_radius:
        raise AliasingRisk(
            f"freq extent {grid.freq_extent:.3g} < 2x support {sup_radius:.3g}")
    xi = grid.freq_axis()
    rho = minkowski_grid(domain, xi[:, None], xi[None, :])
    base = symbol(rho) * np.exp(1j * rho)
    lo, hi = 2.0 ** (-3 * domain.M - 1), 2.0 ** (-3 * domain.M)

    def eta(kk):
        return bumps.window(2.0**-kk * rho, lo, hi)

    kept, norms, errs, skipped = [], [], [], []
    eta_cache = {}
    for k in sorted(ks):
        theta_sup = 2.0 ** (k - 3 * domain.M) if k > 0 else hi
        if theta_sup <= symbol.inner_cutoff:
            skipped.append(k)
            continue
        if k == 0:
            theta_vals = eta(0)
        else:
            if k - 1 not in eta_cache:
                eta_cache[k - 1] = eta(k - 1)
            eta_cache[k] = eta(k)
            theta_vals = eta_cache[k] - eta_cache[k - 1]
            eta_cache.pop(k - 1)
        K = SampledField(grid, inverse_transform(base * theta_vals, grid))
        v, e = l1_norm(K)
        kept.append(k)
        norms.append(v)
        errs.append(e)
    kept = np.asarray(kept)
    norms = np.asarray(norms)
    errs = np.asarray(errs)
    if len(kept) >= 2:
        A = np.stack([kept, np.ones_like(kept)], axis=-1).astype(float)
        (slope, _), *_ = np.linalg.lstsq(A, np.log2(norms), rcond=None)
    else:
        slope = float("nan")
    normalized = 2.0 ** (kept * eps / 2.0) * norms
    return DecayReport(kept, norms, errs, float(slope),
                       float(np.max(normalized)), float(np.min(normalized)),
                       skipped)


# ---------------------------------------------------------------------------
# atoms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    """Mean-zero values on a cube with sup norm <= |Q|^-1, on its own grid."""

    center: np.ndarray
    sidelength: float
    values: np.ndarray = field(repr=False)

    @property
    def spacing(self) -> float:
        return self.sidelength / self.values.shape[0]

    def cell_positions(self) -> tuple:
        m = self.values.shape[0]
        offs = (np.arange(m) - m / 2 + 0.5) * self.spacing
        return self.center[0] + offs, self.center[1] + offs

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def mass(self) -> float:
        return float(np.sum(self.values) * self.spacing**2)


def make_atom(l: int, rng: np.random.Generator, samples_per_side: int = 16,
              center=(0.0, 0.0)) -> Atom:
    """Pseudorandom atom on a cube of sidelength 2^-l.

    Uniform values are mean-corrected and clipped until both the sup bound
    |Q|^-1 and zero mean (to 1e-10 absolute) hold.
    """
    if l < 0:
        raise ValueError("l must be >= 0")
    if samples_per_side < 8:
        raise CubeTooSmall("need at least 8 samples per side")
    side = 2.0**-l
    bound = side**-2
    v = rng.uniform(-bound, bound, size=(samples_per_side, samples_per_side))
    for _ in range(64):
        v = v - np.mean(v)
        v = np.clip(v, -bound, bound)
        if abs(np.mean(v)) * side**2 <= 1e-12 and np.max(np.abs(v)) <= bound:
            break
    return Atom(np.asarray(center, dtype=float), side, v)


def atom_transform(atom: Atom, grid: Grid) -> np.ndarray:
    """Exact continuum transform of the atom's cell sum on the grid's
    frequency lattice, via the separable product
    sum v_jk h^2 e^{-i(xi1 x_j + xi2 y_k)}."""
    xi = grid.freq_axis()
    xs, ys = atom.cell_positions()
    E1 = np.exp(-1j * np.outer(xi, xs))
    E2 = np.exp(-1j * np.outer(ys, xi))
    return (E1 @ atom.values @ E2) * atom.spacing**2


def wave_operator_samples(domain: ConvexDomain, symbol: SymbolSpec, grid: Grid,
                          k_max: int = 8) -> np.ndarray:
    """Full wave multiplier a(rho) e^{i rho} sum_{k<=k_max} theta_k(rho)
    sampled on the frequency lattice."""
    from .geometry import minkowski_grid

    xi = grid.freq_axis()
    rho = minkowski_grid(domain, xi[:, None], xi[None, :])
    return symbol(rho) * np.exp(1j * rho) * dyadic_sum(rho, k_max, domain.M)


def atom_response(domain: ConvexDomain, symbol: SymbolSpec, atom: Atom,
                  grid: Grid, k_max: int = 8,
                  mult_samples: Optional[np.ndarray] = None) -> tuple:
    """||T a_Q||_1 for the full wave multiplier a(rho) e^{i rho} sum theta_k.

    The atom transform is evaluated exactly on the frequency lattice (the
    operator is band-limited, so the coarse spatial grid is exact up to the
    window truncation); returns (norm, response field).  Pass mult_samples
    from wave_operator_samples to share the multiplier across atoms.
    """
    if mult_samples is None:
        mult_samples = wave_operator_samples(domain, symbol, grid, k_max)
    ahat = atom_transform(atom, grid)
    out = inverse_transform(mult_samples * ahat, grid)
    fld = SampledField(grid, out)
    val, _ = l1_norm(fld)
    return val, fld


# ---------------------------------------------------------------------------
# square function
# ---------------------------------------------------------------------------


def band_limited_field(domain: ConvexDomain, grid: Grid,
                       rng: np.random.Generator,
                       band=(0.75, 1.5)) -> SampledField:
    """Random field with transform supported in band[0] <= rho <= band[1]."""
    from . import bumps
    from .geometry import minkowski_grid

    xi = grid.freq_axis()
    rho = minkowski_grid(domain, xi[:, None], xi[None, :])
    lo, hi = band
    win = bumps.transition(rho, lo, lo * 1.15) * (1.0 - bumps.transition(rho, hi / 1.15, hi))
    coef = rng.normal(size=rho.shape) + 1j * rng.normal(size=rho.shape)
    return SampledField(grid, inverse_transform(coef * win, grid))


def square_function(domain: ConvexDomain, f: SampledField, alpha: float,
                    t_grid: np.ndarray) -> tuple:
    """G f = (int |d/dt R_t f|^2 t dt)^(1/2) on the grid, plus the L4 ratio.

    t_grid must be logarithmic with adjacent ratios <= 2^(1/4); the
    t-derivative multiplier is analytic (no finite differences in t).
    """
    from .geometry import minkowski_grid

    t_grid = np.asarray(t_grid, dtype=float)
    ratios = t_grid[1:] / t_grid[:-1]
    if np.any(ratios > 2.0**0.25 * (1.0 + 1e-12)):
        raise TGridTooCoarse("adjacent t ratio above 2^(1/4)")
    fhat = forward_transform(f.values, f.grid)
    xi = f.grid.freq_axis()
    rho = minkowski_grid(domain, xi[:, None], xi[None, :])
    dlog = np.log(t_grid[1:] / t_grid[:-1])
    dlog = np.concatenate([dlog, [dlog[-1]]])
    acc = np.zeros_like(np.real(f.values))
    for t, dl in zip(t_grid, dlog):
        base = np.maximum(1.0 - rho / t, 0.0)
        inner = np.where(base > 0, base, 1.0) ** (alpha - 1.0)
        m = np.where(base > 0, alpha * rho / (t * t) * inner, 0.0)
        piece = inverse_transform(m * fhat, f.grid)
        acc += np.abs(piece) ** 2 * t * t * dl
    G = SampledField(f.grid, np.sqrt(acc))
    ratio = lp_norm(G, 4.0) / lp_norm(f, 4.0)
    return G, ratio
