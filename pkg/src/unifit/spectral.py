"""Eigenvalue engine for the projection-kernel integral operators.

The integral eigenproblem ν f(t) = ∫ φ*_m(s,t) f(s) ds reduces, through
y(t) = ∫_0^t f, to the Dirichlet boundary problem

    y'' + λ w(t) y = 0,   y(0) = y(1) = 0,   w(t) = 2 (1−t)^{m−1} / (m+1),

with λ = 1/ν. This module solves it by fixed-step RK4 shooting plus
bisection/Brent refinement, tabulates the normalised eigenfunction
f = y', and finds the smallest root of the order-4 kernel's transcendental
characteristic equation. A tensor-product Gauss-Legendre rule with
diagonal splitting serves the 2-D quadratic forms built on these kernels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import BadParameter, NoBracketFound, ToleranceNotMet

#: default λ-scan range and step used to bracket eigenvalues
SCAN_RANGE = (1.0, 5000.0)
SCAN_STEP = 5.0

#: RK4 steps: coarse for bracketing scans, fine (h = 1e-4) for refinement
COARSE_STEPS = 1500
FINE_STEPS = 10_000

#: uniform tabulation grid for eigenfunctions
GRID_SIZE = 2001


@dataclass(frozen=True)
class BoundaryProblem:
    """Dirichlet problem y'' + λ w(t) y = 0 on [0, 1]."""

    weight: Callable[[np.ndarray], np.ndarray]
    description: str = ""


def tm_boundary_problem(m: int) -> BoundaryProblem:
    """Boundary problem equivalent to the order-m projection eigenproblem."""
    if m < 1:
        raise BadParameter(f"kernel order must be >= 1, got {m!r}")

    def weight(t):
        return 2.0 * (1.0 - t) ** (m - 1) / (m + 1)

    return BoundaryProblem(weight=weight, description=f"w(t) = 2(1-t)^{m - 1}/{m + 1}")


@dataclass(frozen=True)
class SpectralSolution:
    """Principal eigenvalue and unit-norm, zero-mean eigenfunction."""

    lambda1: float
    grid: np.ndarray
    values: np.ndarray           # f = y' on the grid, normalised, f(0) > 0
    antiderivative_values: np.ndarray  # y on the grid, same scaling
    _spline: CubicSpline = field(repr=False, compare=False, default=None)
    _y_spline: CubicSpline = field(repr=False, compare=False, default=None)

    @property
    def grid_size(self) -> int:
        return self.grid.size

    def eigenfunction(self, t):
        """Cubic interpolation of f between grid nodes."""
        return self._spline(t)

    def antiderivative(self, t):
        """Cubic interpolation of y(t) = ∫_0^t f."""
        return self._y_spline(t)


def _shoot_final(lambdas, weight, steps: int):
    """y(1; λ) for y(0)=0, y'(0)=1, vectorised over an array of λ."""
    lam = np.asarray(lambdas, dtype=np.float64)
    h = 1.0 / steps
    ts = np.arange(steps) * h
    w_lo = weight(ts)
    w_mid = weight(ts + h / 2.0)
    w_hi = weight(ts + h)
    y = np.zeros_like(lam)
    v = np.ones_like(lam)
    for k in range(steps):
        wl, wm, wh = w_lo[k], w_mid[k], w_hi[k]
        k1y = v
        k1v = -lam * wl * y
        k2y = v + 0.5 * h * k1v
        k2v = -lam * wm * (y + 0.5 * h * k1y)
        k3y = v + 0.5 * h * k2v
        k3v = -lam * wm * (y + 0.5 * h * k2y)
        k4y = v + h * k3v
        k4v = -lam * wh * (y + h * k3y)
        y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return y


def _shoot_final_scalar(lam: float, w_lo, w_mid, w_hi, h: float) -> float:
    """Scalar y(1; λ) with precomputed weight samples (pure floats, fast)."""
    y, v = 0.0, 1.0
    sixth = h / 6.0
    half = 0.5 * h
    for wl, wm, wh in zip(w_lo, w_mid, w_hi):
        c = -lam
        k1v = c * wl * y
        k2y = v + half * k1v
        k2v = c * wm * (y + half * v)
        k3y = v + half * k2v
        k3v = c * wm * (y + half * k2y)
        k4y = v + h * k3v
        k4v = c * wh * (y + h * k3y)
        y += sixth * (v + 2.0 * k2y + 2.0 * k3y + k4y)
        v += sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return y


def _shoot_trajectory(lam: float, weight, grid_size: int, substeps: int):
    """Integrate once at λ, recording (y, y') on a uniform grid."""
    nodes = grid_size - 1
    h = 1.0 / (nodes * substeps)
    y_grid = np.empty(grid_size)
    v_grid = np.empty(grid_size)
    y, v = 0.0, 1.0
    y_grid[0], v_grid[0] = y, v
    t = 0.0
    for node in range(nodes):
        for _ in range(substeps):
            wl = weight(t)
            wm = weight(t + h / 2.0)
            wh = weight(t + h)
            k1y = v
            k1v = -lam * wl * y
            k2y = v + 0.5 * h * k1v
            k2v = -lam * wm * (y + 0.5 * h * k1y)
            k3y = v + 0.5 * h * k2v
            k3v = -lam * wm * (y + 0.5 * h * k2y)
            k4y = v + h * k3v
            k4v = -lam * wh * (y + h * k3y)
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            t += h
        y_grid[node + 1] = y
        v_grid[node + 1] = v
    return y_grid, v_grid


def tm_eigenvalues(m: int, count: int = 1, tol: float = 1e-8,
                   scan_range=SCAN_RANGE, scan_step: float = SCAN_STEP) -> list[float]:
    """First ``count`` eigenvalues of the order-m boundary problem.

    Brackets sign changes of y(1; λ) on a coarse λ-scan, then refines each
    bracket with Brent's method on a fine-step shooter.
    """
    problem = tm_boundary_problem(m)
    lo, hi = scan_range
    grid = np.arange(lo, hi + scan_step, scan_step)
    finals = _shoot_final(grid, problem.weight, COARSE_STEPS)
    signs = np.sign(finals)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    if flips.size < count:
        raise NoBracketFound(
            f"found {flips.size} sign changes in λ ∈ [{lo}, {hi}], need {count}"
        )
    h = 1.0 / FINE_STEPS
    ts = np.arange(FINE_STEPS) * h
    w_lo = problem.weight(ts).tolist()
    w_mid = problem.weight(ts + h / 2.0).tolist()
    w_hi = problem.weight(ts + h).tolist()
    roots = []
    for idx in flips[:count]:
        a, b = grid[idx], grid[idx + 1]
        try:
            root = brentq(
                lambda lam: _shoot_final_scalar(lam, w_lo, w_mid, w_hi, h),
                a, b, xtol=tol, rtol=4.0 * np.finfo(float).eps,
            )
        except Exception as exc:  # pragma: no cover - brentq is robust on a bracket
            raise ToleranceNotMet(str(exc)) from exc
        roots.append(float(root))
    return roots


@lru_cache(maxsize=8)
def solve_tm_eigen(m: int, tol: float = 1e-8, grid_size: int = GRID_SIZE) -> SpectralSolution:
    """Principal eigenvalue and eigenfunction of the order-m problem.

    The eigenfunction f = y' is tabulated on a uniform ``grid_size`` grid,
    rescaled to unit L² norm (its integral is y(1) − y(0) = 0 already),
    with the sign convention f(0) > 0.
    """
    if not (0.0 < tol <= 1e-4):
        raise BadParameter(f"tol must lie in (0, 1e-4], got {tol!r}")
    lam1 = tm_eigenvalues(m, count=1, tol=tol)[0]
    problem = tm_boundary_problem(m)
    nodes = grid_size - 1
    substeps = max(1, int(np.ceil(1.0 / (nodes * 1e-4))))
    y, v = _shoot_trajectory(lam1, problem.weight, grid_size, substeps)
    grid = np.linspace(0.0, 1.0, grid_size)
    norm = np.sqrt(_simpson(v**2, grid))
    f_vals = v / norm
    y_vals = y / norm
    if f_vals[0] < 0:
        f_vals, y_vals = -f_vals, -y_vals
    for arr in (grid, f_vals, y_vals):
        arr.setflags(write=False)
    return SpectralSolution(
        lambda1=lam1,
        grid=grid,
        values=f_vals,
        antiderivative_values=y_vals,
        _spline=CubicSpline(grid, f_vals),
        _y_spline=CubicSpline(grid, y_vals),
    )


def _simpson(values: np.ndarray, grid: np.ndarray) -> float:
    from scipy.integrate import simpson

    return float(simpson(values, x=grid))


def solve_hs_root(tol: float = 1e-9) -> float:
    """Smallest positive root of the order-4 kernel's characteristic equation.

    In u = √λ/(6√2) the equation factors as sin(u) · (u cos u − sin u) = 0;
    the scan walks u upward from 0.3 to the first sign change (u = π, from
    the sine branch; the first tan u = u root is larger) and Brent-refines.
    Returns λ = 72 u².
    """
    if not (0.0 < tol <= 1e-6):
        raise BadParameter(f"tol must lie in (0, 1e-6], got {tol!r}")

    def g(u):
        return np.sin(u) * (u * np.cos(u) - np.sin(u))

    us = np.arange(0.3, 8.0, 0.01)
    vals = g(us)
    flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if flips.size == 0:
        raise ToleranceNotMet("no sign change located on the u-scan")
    a, b = us[flips[0]], us[flips[0] + 1]
    u_root = brentq(g, a, b, xtol=tol / 144.0, rtol=4.0 * np.finfo(float).eps)
    return float(72.0 * u_root**2)


@lru_cache(maxsize=64)
def _leggauss_unit(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return (nodes + 1.0) / 2.0, weights / 2.0


def gauss_quad_2d(f, order: int = 60, split_diagonal: bool = True) -> float:
    """Tensor-product Gauss-Legendre integral of ``f`` over [0, 1]².

    ``f`` must accept array arguments. With ``split_diagonal`` (default)
    the square is integrated as the two triangles s < t and s > t, each
    mapped back to the unit square, which restores spectral accuracy for
    integrands with a kink on the diagonal (min/max terms).
    """
    if order < 2:
        raise BadParameter(f"order must be >= 2, got {order!r}")
    x, w = _leggauss_unit(order)
    if not split_diagonal:
        s, t = np.meshgrid(x, x, indexing="ij")
        return float(np.einsum("i,j,ij->", w, w, f(s, t)))
    xi, t = np.meshgrid(x, x, indexing="ij")  # xi along axis 0, t along axis 1
    lower = f(t * xi, t) * t          # s = t·ξ covers {s < t}
    upper = f(t + (1.0 - t) * xi, t) * (1.0 - t)  # s = t + (1−t)ξ covers {s > t}
    return float(np.einsum("i,j,ij->", w, w, lower + upper))
