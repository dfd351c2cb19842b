"""Derivative-free minimizers for the autoencoder trainer."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NumericalError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class BudgetExhausted(Exception):
    pass


@dataclass
class CountingObjective:
    """Wraps a cost function, counts calls and keeps the best point seen.

    Ties keep the earliest point.  ``trace`` holds the best-so-far value
    after every evaluation.
    """

    fn: Callable[[np.ndarray], float]
    max_evals: int | None = None
    n_evals: int = 0
    best_x: np.ndarray | None = None
    best_f: float = math.inf
    trace: list[float] = field(default_factory=list)

    def __call__(self, x: np.ndarray) -> float:
        if self.max_evals is not None and self.n_evals >= self.max_evals:
            raise BudgetExhausted
        f = float(self.fn(x))
        if not math.isfinite(f):
            raise NumericalError(f"non-finite cost {f} at {x}")
        self.n_evals += 1
        if f < self.best_f:
            self.best_f = f
            self.best_x = np.array(x, dtype=float)
        self.trace.append(self.best_f)
        return f


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-6):
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def coordinate_descent(obj: CountingObjective, x0: np.ndarray, period: float = 2 * math.pi,
                       grid: int = 8, line_tol: float = 1e-6, tol: float = 1e-10,
                       max_sweeps: int = 1000) -> np.ndarray:
    """Cyclic coordinate descent for periodic parameters.

    Along each coordinate the cost is sampled on ``grid`` points over one
    period to bracket the minimum, then refined by golden-section search.
    Stops when a full sweep improves the cost by less than ``tol`` or the
    evaluation budget runs out.
    """
    x = np.array(x0, dtype=float)
    fx = obj(x)
    step = period / grid
    try:
        for _ in range(max_sweeps):
            f_start = fx
            for j in range(x.size):
                def along(t, j=j):
                    y = x.copy()
                    y[j] = t
                    return obj(y)

                offsets = x[j] + step * np.arange(1, grid)
                values = [along(t) for t in offsets]
                cand = np.concatenate(([x[j]], offsets))
                vals = np.concatenate(([fx], values))
                k = int(np.argmin(vals))
                t, ft = golden_section(along, cand[k] - step, cand[k] + step, line_tol)
                if ft < fx:
                    x[j], fx = t, ft
                elif vals[k] < fx:
                    x[j], fx = cand[k], vals[k]
                x[j] = (x[j] + period / 2) % period - period / 2
            if f_start - fx < tol:
                break
    except BudgetExhausted:
        pass
    return x


def fd_gradient_descent(obj: CountingObjective, x0: np.ndarray, lr: float = 0.5,
                        fd_step: float = 1e-4, tol: float = 1e-10,
                        max_iters: int = 10_000) -> np.ndarray:
    """Gradient descent with central finite differences and step halving."""
    x = np.array(x0, dtype=float)
    try:
        fx = obj(x)
        for _ in range(max_iters):
            grad = np.zeros_like(x)
            for j in range(x.size):
                e = np.zeros_like(x)
                e[j] = fd_step
                grad[j] = (obj(x + e) - obj(x - e)) / (2 * fd_step)
            step = lr
            while step > 1e-8:
                y = x - step * grad
                fy = obj(y)
                if fy < fx:
                    break
                step /= 2
            else:
                break
            improvement = fx - fy
            x, fx = y, fy
            if improvement < tol:
                break
    except BudgetExhausted:
        pass
    return x


def _trig_fit(ts: np.ndarray, fs: np.ndarray, base: float, harmonics: int):
    """Coefficients of ``a0 + sum_k a_k cos(k base t) + b_k sin(k base t)`` through the samples."""
    k = np.arange(1, harmonics + 1)
    design = np.hstack([np.ones((ts.size, 1)), np.cos(np.outer(ts, k) * base), np.sin(np.outer(ts, k) * base)])
    return np.linalg.solve(design, fs)


def _trig_eval(coef: np.ndarray, t: np.ndarray, base: float, harmonics: int) -> np.ndarray:
    k = np.arange(1, harmonics + 1)
    arg = np.outer(t, k) * base
    return coef[0] + np.cos(arg) @ coef[1:harmonics + 1] + np.sin(arg) @ coef[harmonics + 1:]


def fourier_coordinate_descent(obj: CountingObjective, x0: np.ndarray, period: float = 2 * math.pi,
                               harmonics: int = 1, tol: float = 1e-10, rel_stall: float = 0.0,
                               max_sweeps: int = 10_000, resolution: int = 2048) -> np.ndarray:
    """Exact coordinate minimization for costs that are trigonometric polynomials per coordinate.

    With ``harmonics`` K the cost along one coordinate is fixed by 2K + 1
    equispaced samples; the fitted polynomial is minimized on a fine grid and
    polished with golden section (no extra cost evaluations), then the new
    point is evaluated once.  For qubit rotations K = 1 and this is the
    familiar three-point sinusoid update.  Stops when a sweep gains less
    than ``tol`` or less than ``rel_stall`` times the current cost.
    """
    x = np.array(x0, dtype=float)
    base = 2 * math.pi / period
    n = 2 * harmonics + 1
    try:
        fx = obj(x)
        for _ in range(max_sweeps):
            f_start = fx
            for j in range(x.size):
                ts = x[j] + period * np.arange(n) / n
                fs = np.empty(n)
                fs[0] = fx
                for m in range(1, n):
                    y = x.copy()
                    y[j] = ts[m]
                    fs[m] = obj(y)
                coef = _trig_fit(ts - x[j], fs, base, harmonics)
                grid = np.linspace(0.0, period, resolution, endpoint=False)
                vals = _trig_eval(coef, grid, base, harmonics)
                i = int(np.argmin(vals))
                h = period / resolution
                t, _ = golden_section(lambda s: float(_trig_eval(coef, np.array([s]), base, harmonics)[0]),
                                      grid[i] - h, grid[i] + h, 1e-12)
                y = x.copy()
                y[j] = (x[j] + t + period / 2) % period - period / 2
                fy = obj(y)
                k = int(np.argmin(fs))
                if fy < fx and fy <= fs[k]:
                    x, fx = y, fy
                elif fs[k] < fx:
                    x[j], fx = (ts[k] + period / 2) % period - period / 2, fs[k]
            if f_start - fx < max(tol, rel_stall * fx):
                break
    except BudgetExhausted:
        pass
    return x
