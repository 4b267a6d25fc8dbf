"""One canonical C-infinity profile and every cutoff derived from it.

All smooth cutoffs in the lab (radial transitions, dyadic annuli, angular
windows, mollifiers) are affine reparametrizations of the single profile
b(u) = exp(-1/(1-u^2)) on (-1, 1), or of its normalized antiderivative.
"""

from __future__ import annotations

import numpy as np

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)

# Derivatives of b are b(u) * R_n(u) with R_n a polynomial in u and w = 1/(1-u^2).
# Monomials u^i w^j are encoded as {(i, j): coeff}; d/du (u^i w^j) =
# i u^(i-1) w^j + 2j u^(i+1) w^(j+1), and each derivative multiplies by
# R_1 = -2 u w^2 once more.


def _poly_derivative(poly):
    out = {}
    for (i, j), c in poly.items():
        if i > 0:
            out[(i - 1, j)] = out.get((i - 1, j), 0.0) + i * c
        if j > 0:
            out[(i + 1, j + 1)] = out.get((i + 1, j + 1), 0.0) + 2 * j * c
    return out


def _poly_shift(poly):
    # multiply by R_1 = -2 u w^2
    return {(i + 1, j + 2): -2.0 * c for (i, j), c in poly.items()}


def _build_deriv_polys(order):
    polys = [{(0, 0): 1.0}]
    for _ in range(order):
        prev = polys[-1]
        nxt = _poly_derivative(prev)
        for key, c in _poly_shift(prev).items():
            nxt[key] = nxt.get(key, 0.0) + c
        polys.append(nxt)
    return polys


_DERIV_POLYS = _build_deriv_polys(5)


def bump(u):
    """b(u) = exp(-1/(1-u^2)) on (-1, 1), zero outside."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
    return out


def bump_deriv(u, order):
    """n-th derivative of the profile, exact via the rational recurrence."""
    if order == 0:
        return bump(u)
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    w = 1.0 / (1.0 - ui * ui)
    acc = np.zeros_like(ui)
    for (i, j), c in _DERIV_POLYS[order].items():
        acc += c * ui**i * w**j
    out[inside] = np.exp(-w) * acc
    return out


def _cumulative_table(n_cells=2048):
    edges = np.linspace(-1.0, 1.0, n_cells + 1)
    h = edges[1] - edges[0]
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = mid[:, None] + 0.5 * h * _GL_NODES[None, :]
    cell = 0.5 * h * bump(nodes) @ _GL_WEIGHTS
    cum = np.concatenate([[0.0], np.cumsum(cell)])
    return edges, cum


_EDGES, _CUM = _cumulative_table()
MASS = float(_CUM[-1])  # integral of the profile over (-1, 1)


def bump_integral(u):
    """Antiderivative of the profile from -1 to u (table + local Gauss)."""
    u = np.asarray(u, dtype=float)
    uc = np.clip(u, -1.0, 1.0)
    idx = np.clip(np.searchsorted(_EDGES, uc, side="right") - 1, 0, len(_EDGES) - 2)
    a = _EDGES[idx]
    half = 0.5 * (uc - a)
    nodes = a[..., None] + half[..., None] * (_GL_NODES + 1.0)
    local = half * (bump(nodes) @ _GL_WEIGHTS)
    return _CUM[idx] + local


def smoothstep(u):
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, monotone in between."""
    return bump_integral(2.0 * np.asarray(u, dtype=float) - 1.0) / MASS


def transition(x, a, b):
    """Smooth transition that is 0 for x <= a and 1 for x >= b (a < b)."""
    return smoothstep((np.asarray(x, dtype=float) - a) / (b - a))


def window(x, inner, outer):
    """Even cutoff: 1 on |x| <= inner, 0 on |x| >= outer."""
    return 1.0 - transition(np.abs(x), inner, outer)


class Mollifier:
    """Even unit-mass bump psi(u) = b(u/r) / (r * MASS), supported in [-r, r]."""

    def __init__(self, radius):
        if radius <= 0:
            raise ValueError("mollifier radius must be positive")
        self.radius = float(radius)

    def __call__(self, u, order=0):
        r = self.radius
        return bump_deriv(np.asarray(u, dtype=float) / r, order) / (r ** (order + 1) * MASS)
