"""Symbols, dyadic cutoffs, quasiradial multiplier fields and norm functionals.

Multipliers are built as m(rho(xi)) with rho a domain gauge; the dyadic
cutoffs theta_k localize to |s| ~ 2^(k-3M); the norm functionals integrate
weighted profile transforms over a tau grid with an explicit tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import bumps
from .errors import InvalidScale, TailNotDecaying
from .geometry import ConvexDomain, minkowski_grid


# ---------------------------------------------------------------------------
# symbols and cutoffs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolSpec:
    """a(s) = zeta(s) (1+|s|)^order with zeta vanishing on the inner interval.

    zeta transitions from 0 on [-2^-2M, 2^-2M] to 1 outside twice that, built
    from the canonical profile; derivative evaluators are analytic to order 4.
    """

    order: float
    epsilon: float
    M: int
    seminorms: dict = field(default_factory=dict)

    @property
    def inner_cutoff(self) -> float:
        return 2.0 ** (-2 * self.M)

    def _zeta(self, s, deriv=0):
        a, b = self.inner_cutoff, 2.0 * self.inner_cutoff
        u = (np.abs(s) - a) / (b - a)
        if deriv == 0:
            return bumps.smoothstep(u)
        # (d/du)^d smoothstep = 2^d bump^(d-1)(2u - 1) / MASS; du/ds = sgn/(b-a)
        sgn = np.where(np.asarray(s, dtype=float) < 0, -1.0, 1.0)
        return (bumps.bump_deriv(2.0 * u - 1.0, deriv - 1)
                * 2.0**deriv / (b - a) ** deriv / bumps.MASS * sgn**deriv)

    def __call__(self, s, deriv: int = 0):
        s = np.asarray(s, dtype=float)
        if deriv == 0:
            return self._zeta(s) * (1.0 + np.abs(s)) ** self.order
        # product rule: sum_j C(deriv, j) zeta^(j) * d^(deriv-j)(1+|s|)^order
        out = np.zeros_like(s)
        sgn = np.where(s < 0, -1.0, 1.0)
        for j in range(deriv + 1):
            zj = self._zeta(s, j) if j > 0 else self._zeta(s)
            power = self.order - (deriv - j)
            coeff = math.comb(deriv, j) * np.prod(
                [self.order - i for i in range(deriv - j)])
            out = out + coeff * zj * (1.0 + np.abs(s)) ** power * sgn ** (deriv - j)
        return out


def make_symbol(order: float, epsilon: float, M: int) -> SymbolSpec:
    """Symbol of the given order, supported outside [-2^-2M, 2^-2M].

    Seminorm constants sup |D^b a| (1+|s|)^(b-order) are measured on a log
    grid for b <= 4 and stored on the spec.
    """
    if order > 0:
        raise ValueError("symbol order must be <= 0")
    sym = SymbolSpec(order=order, epsilon=epsilon, M=M)
    s = np.concatenate([np.geomspace(2.0 ** (-2 * M - 2), 2.0**12, 4001), [0.0]])
    semis = {}
    for b in range(5):
        semis[b] = float(np.max(np.abs(sym(s, b)) * (1.0 + s) ** (b - order)))
    object.__setattr__(sym, "seminorms", semis)
    return sym


@dataclass(frozen=True)
class DyadicCutoff:
    """theta_k: smooth dyadic partition member, theta_0 = eta, and for k > 0
    theta_k(s) = eta(2^-k s) - eta(2^-k+1 s), supported in
    2^(k-3M) [1/4, 1]."""

    k: int
    M: int

    def _eta(self, s):
        lo = 2.0 ** (-3 * self.M - 1)
        hi = 2.0 ** (-3 * self.M)
        return bumps.window(s, lo, hi)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.k == 0:
            return self._eta(s)
        return self._eta(2.0**-self.k * s) - self._eta(2.0 ** (-self.k + 1) * s)

    @property
    def support(self) -> tuple:
        if self.k == 0:
            return (0.0, 2.0 ** (-3 * self.M))
        return (2.0 ** (self.k - 3 * self.M - 2), 2.0 ** (self.k - 3 * self.M))


def dyadic_sum(s, k_max: int, M: int):
    """sum_{k <= k_max} theta_k(s) = eta(2^-k_max s); identically 1 up to
    |s| = 2^(k_max - 3M - 1)."""
    lo = 2.0 ** (-3 * M - 1)
    hi = 2.0 ** (-3 * M)
    return bumps.window(2.0**-k_max * np.asarray(s, dtype=float), lo, hi)


# ---------------------------------------------------------------------------
# multiplier fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplierField:
    """Frequency-side evaluator xi -> complex, with support metadata."""

    evaluate: Callable  # (xi1, xi2) -> complex array
    domain: Optional[ConvexDomain]
    support_radius: Optional[float]
    tag: str = ""


def wave_multiplier(domain: ConvexDomain, symbol: SymbolSpec, k: int,
                    with_angular_cutoff: bool = False,
                    cutoff_width: Optional[float] = None) -> MultiplierField:
    """a(rho) e^{i rho} theta_k(rho), optionally with the angular cutoff.

    The cutoff is chi1(xi1/|xi|) chi2(rho(xi)) restricted to the lower
    half-plane sector, with plateau/support half-widths (w/2, w); the default
    w = 2^-2M.  chi2 is 1 on the support of the symbol, transitioning over
    [2^-2M-2, 2^-2M-1], so chi2 * a = a exactly.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    theta = DyadicCutoff(k, domain.M)
    w = cutoff_width if cutoff_width is not None else 2.0 ** (-2 * domain.M)
    c2_lo, c2_hi = 2.0 ** (-2 * domain.M - 2), 2.0 ** (-2 * domain.M - 1)

    def evaluate(xi1, xi2):
        rho = minkowski_grid(domain, xi1, xi2)
        vals = symbol(rho) * np.exp(1j * rho) * theta(rho)
        if with_angular_cutoff:
            norm = np.hypot(xi1, xi2)
            ratio = np.where(norm > 0, np.asarray(xi1) / np.where(norm > 0, norm, 1.0), 1.0)
            vals = vals * bumps.window(ratio, w / 2.0, w)
            vals = vals * bumps.transition(rho, c2_lo, c2_hi)
            vals = vals * (np.asarray(xi2) < 0)
        return vals

    sup = 2.0**domain.M * theta.support[1]
    return MultiplierField(evaluate, domain, sup, tag=f"wave_k{k}")


def bochner_riesz(domain: ConvexDomain, lam: float, t: float) -> MultiplierField:
    """(1 - rho/t)_+^lambda."""
    if t <= 0:
        raise InvalidScale("dilation t must be positive")
    if lam < -0.5:
        raise ValueError("lambda must be >= -1/2")

    def evaluate(xi1, xi2):
        rho = minkowski_grid(domain, xi1, xi2)
        base = np.maximum(1.0 - rho / t, 0.0)
        return base**lam if lam != 0 else (base > 0).astype(float)

    return MultiplierField(evaluate, domain, 2.0**domain.M * t, tag=f"br_l{lam}_t{t}")


def bochner_riesz_dt(domain: ConvexDomain, lam: float, t: float) -> MultiplierField:
    """Analytic t-derivative of the Bochner-Riesz mean:
    lambda rho / t^2 (1 - rho/t)_+^(lambda-1)."""
    if t <= 0:
        raise InvalidScale("dilation t must be positive")

    def evaluate(xi1, xi2):
        rho = minkowski_grid(domain, xi1, xi2)
        base = np.maximum(1.0 - rho / t, 0.0)
        inner = np.where(base > 0, base, 1.0) ** (lam - 1.0)
        return np.where(base > 0, lam * rho / (t * t) * inner, 0.0)

    return MultiplierField(evaluate, domain, 2.0**domain.M * t, tag=f"brdt_l{lam}_t{t}")


# ---------------------------------------------------------------------------
# profiles and norm functionals
# ---------------------------------------------------------------------------


class ProfileFunction:
    """Profile m on the line with a numeric Fourier transform.

    m is sampled on [0, 4) (support must lie in (1/2, 2)) and transformed by
    an oversampled FFT with zero padding; mhat lives on a symmetric tau grid.
    """

    def __init__(self, m: Callable, n_samples: int = 8192, oversample: int = 16,
                 name: str = "profile"):
        self.m = m
        self.name = name
        ds = 4.0 / n_samples
        s = ds * np.arange(n_samples)
        vals = np.asarray(m(s), dtype=complex)
        padded = np.concatenate([vals, np.zeros((oversample - 1) * n_samples)])
        spec = ds * np.fft.fft(padded)
        tau = 2.0 * math.pi * np.fft.fftfreq(len(padded), d=ds)
        order = np.argsort(tau)
        self.tau = tau[order]
        self.mhat = spec[order]

    @classmethod
    def from_mhat_table(cls, tau, mhat, name="table"):
        self = cls.__new__(cls)
        self.m = None
        self.name = name
        self.tau = np.asarray(tau, dtype=float)
        self.mhat = np.asarray(mhat, dtype=complex)
        return self

    def sup_norm(self, n=4096):
        s = np.linspace(0.0, 4.0, n)
        return float(np.max(np.abs(self.m(s)))) if self.m is not None else float("nan")


def bump_profile(lo: float = 0.5, hi: float = 2.0, plateau: float = 0.25) -> ProfileFunction:
    """Smooth bump supported in (lo, hi), identically 1 on the middle part."""
    a, b = lo, lo + plateau * (hi - lo)
    c, d = hi - plateau * (hi - lo), hi

    def m(s):
        s = np.asarray(s, dtype=float)
        return bumps.transition(s, a, b) * (1.0 - bumps.transition(s, c, d))

    return ProfileFunction(m, name="bump")


def gaussian_modulated_profile(width: float = 8.0, freq: float = 0.0) -> ProfileFunction:
    """Bump-windowed Gaussian oscillation supported in (1/2, 2)."""
    win = bump_profile().m

    def m(s):
        s = np.asarray(s, dtype=float)
        return win(s) * np.exp(-width * (s - 1.0) ** 2) * np.cos(freq * s)

    return ProfileFunction(m, name="gaussian-modulated")


def _tail_bound(tau, integrand):
    """Geometric-continuation tail bound from the last octave.

    Raises TailNotDecaying when the last-octave maximum has not decayed to
    half the mid-grid octave's maximum (ignoring the numerical noise floor).
    """
    tmax = tau[-1]
    last = integrand[(tau >= 0.9 * tmax)]
    mid = integrand[(tau >= 0.45 * tmax) & (tau <= 0.55 * tmax)]
    last_max = float(np.max(last)) if len(last) else 0.0
    mid_max = float(np.max(mid)) if len(mid) else 0.0
    sel_hi = tau >= 0.5 * tmax
    i_hi = float(np.trapezoid(integrand[sel_hi], tau[sel_hi]))
    if last_max < 1e-12 * float(np.max(integrand)):
        return i_hi  # decayed into the round-off floor
    if last_max > 0.5 * mid_max and last_max > 0.0:
        raise TailNotDecaying(
            f"last-octave integrand max {last_max:.3e} vs mid {mid_max:.3e}")
    sel_lo = (tau >= 0.25 * tmax) & (tau < 0.5 * tmax)
    i_lo = float(np.trapezoid(integrand[sel_lo], tau[sel_lo]))
    r = min(i_hi / i_lo, 0.75) if i_lo > 0 else 0.0
    return 2.0 * i_hi * r / (1.0 - r)


def b_norm(profile: ProfileFunction, kappa: float, epsilon: float):
    """Weighted transform mass: integral of |mhat| (1 + |tau|)^(kappa+eps).

    Returns (value, tail_bound); the tail bound extrapolates the last octave
    geometrically (both half-lines).
    """
    tau, mhat = profile.tau, profile.mhat
    w = np.abs(mhat) * (1.0 + np.abs(tau)) ** (kappa + epsilon)
    value = float(np.trapezoid(w, tau))
    pos = tau >= 0
    tail_pos = _tail_bound(tau[pos], w[pos])
    neg = tau <= 0
    tail_neg = _tail_bound(-tau[neg][::-1], w[neg][::-1])
    return value, tail_pos + tail_neg


_PHI_THETA = bump_profile(0.5, 2.0, plateau=0.5)  # identically 1 on [0.875, 1.625]


def theta_phi(s):
    """The fixed smooth phi of the interpolated functional: 1 on [3/4, 3/2],
    supported in (1/2, 2)."""
    s = np.asarray(s, dtype=float)
    return bumps.transition(s, 0.5, 0.75) * (1.0 - bumps.transition(s, 1.5, 2.0))


def theta_norm(profile: ProfileFunction, theta: float, kappa: float, epsilon: float,
               t_grid: Optional[np.ndarray] = None):
    """Interpolated-norm functional, maximized over dyadic dilations.

    For each t the inner integral uses exponent 2/(2-theta) and weight power
    (2 kappa + theta (1 - 2 kappa)) / (2 - theta) + eps, then is raised to
    (2-theta)/2; returns (max value, tail bound at the maximizing t).
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if profile.m is None:
        raise ValueError("theta_norm needs a sampled profile, not a table")
    if t_grid is None:
        t_grid = 2.0 ** np.arange(-4, 5)
    p = 2.0 / (2.0 - theta)
    wpow = (2.0 * kappa + theta * (1.0 - 2.0 * kappa)) / (2.0 - theta) + epsilon
    best, best_tail = -np.inf, 0.0
    for t in t_grid:
        g = ProfileFunction(lambda s: theta_phi(s) * np.asarray(profile.m(t * s)),
                            name="phi*m(t.)")
        w = np.abs(g.mhat) ** p * (1.0 + np.abs(g.tau)) ** wpow
        val = float(np.trapezoid(w, g.tau)) ** (1.0 / p)
        if val > best:
            pos = g.tau >= 0
            tail = _tail_bound(g.tau[pos], w[pos])
            best, best_tail = val, tail ** (1.0 / p)
    return best, best_tail


def subordination_check(domain: ConvexDomain, profile: ProfileFunction,
                        points: np.ndarray, tail_tol: float = 1e-8) -> float:
    """Max error of m(rho(xi)) against (1/2pi) integral of mhat e^{i tau rho}.

    The profile's tail bound must be below tail_tol or TailNotDecaying is
    raised; both sides are evaluated independently.
    """
    tau, mhat = profile.tau, profile.mhat
    w = np.abs(mhat)
    pos = tau >= 0
    tail = _tail_bound(tau[pos], w[pos]) + _tail_bound(-tau[~pos][::-1], w[~pos][::-1])
    if tail > tail_tol:
        raise TailNotDecaying(f"transform tail bound {tail:.2e} > {tail_tol:.2e}")
    pts = np.asarray(points, dtype=float)
    rho = minkowski_grid(domain, pts[:, 0], pts[:, 1])
    lhs = np.asarray(profile.m(rho))
    dtau = tau[1] - tau[0]
    # drop the numerically-zero part of the tail; its mass is below tail_tol
    keep = np.abs(mhat) > 1e-18 * float(np.max(np.abs(mhat)))
    tau_k, mhat_k = tau[keep], mhat[keep]
    max_err = 0.0
    for block in np.array_split(np.arange(len(pts)), max(1, len(pts) // 128)):
        phase = np.exp(1j * np.outer(rho[block], tau_k))
        rhs = (phase @ mhat_k) * dtau / (2.0 * math.pi)
        max_err = max(max_err, float(np.max(np.abs(rhs - lhs[block]))))
    return max_err
