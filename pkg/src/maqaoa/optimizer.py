"""BFGS maximization with a strong Wolfe line search.

Self-contained quasi-Newton loop over a joint value-and-gradient oracle.
Internally the objective is negated and minimized; the inverse Hessian
approximation starts as the identity, is rescaled by s'y / y'y right before
the first update, and follows the standard two-sided BFGS update afterwards.
Updates are skipped when the curvature s'y is not safely positive.

The line search brackets then zooms with cubic / quadratic interpolation and
a bisection fallback, accepting only points that satisfy both strong Wolfe
conditions, so every accepted step strictly improves the objective. Steps
accepted straight from the bracketing phase get one interpolation probe,
which lands the exact line minimizer on near-quadratic restrictions.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .simulator import AngleVector, expectation_and_gradient


@dataclass(frozen=True)
class OptimizerConfig:
    gradient_tolerance: float = 1e-6
    max_iterations: int = 1000
    wolfe_c1: float = 1e-4
    wolfe_c2: float = 0.9
    max_line_search_steps: int = 50

    def __post_init__(self) -> None:
        if not 0 < self.wolfe_c1 < self.wolfe_c2 < 1:
            raise ValueError(
                f"need 0 < c1 < c2 < 1, got c1={self.wolfe_c1}, c2={self.wolfe_c2}"
            )
        if self.gradient_tolerance <= 0:
            raise ValueError("gradient_tolerance must be positive")
        if self.max_iterations < 1 or self.max_line_search_steps < 1:
            raise ValueError("iteration caps must be >= 1")


@dataclass
class OptimizationResult:
    """Outcome of a maximization run.

    final_angles holds an AngleVector when produced by optimize_angles and a
    flat parameter array when produced directly by bfgs_maximize. The trace
    lists the objective value at the start point and after every accepted
    iteration, so it is non-decreasing.
    """

    final_angles: object
    final_value: float
    iterations: int
    function_evaluations: int
    gradient_evaluations: int
    converged: bool
    trace: list[float] = field(default_factory=list)


def _cubic_min(a, fa, fpa, b, fb, c, fc):
    """Minimizer of the cubic through (a, fa) with slope fpa, (b, fb), (c, fc)."""
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            C = fpa
            db = b - a
            dc = c - a
            denom = (db * dc) ** 2 * (db - dc)
            d1 = np.empty((2, 2))
            d1[0, 0] = dc ** 2
            d1[0, 1] = -(db ** 2)
            d1[1, 0] = -(dc ** 3)
            d1[1, 1] = db ** 3
            A, B = np.dot(d1, np.asarray([fb - fa - C * db, fc - fa - C * dc]))
            A /= denom
            B /= denom
            radical = B * B - 3 * A * C
            xmin = a + (-B + np.sqrt(radical)) / (3 * A)
        except ArithmeticError:
            return None
    if not np.isfinite(xmin):
        return None
    return float(xmin)


def _quad_min(a, fa, fpa, b, fb):
    """Minimizer of the quadratic through (a, fa) with slope fpa and (b, fb)."""
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            db = b - a
            B = (fb - fa - fpa * db) / (db * db)
            xmin = a - fpa / (2.0 * B)
        except ArithmeticError:
            return None
    if not np.isfinite(xmin):
        return None
    return float(xmin)


def _zoom(
    fun, x, d, phi0, derphi0,
    a_lo, phi_lo, derphi_lo, a_hi, phi_hi,
    budget, c1, c2,
):
    """Shrink [a_lo, a_hi] to a strong Wolfe point; a_lo always has the
    lowest value seen that satisfies the decrease condition."""
    delta1 = 0.2  # cubic interpolant safeguard
    delta2 = 0.1  # quadratic interpolant safeguard
    phi_rec = phi0
    a_rec = 0.0
    first = True
    while budget[0] > 0:
        dalpha = a_hi - a_lo
        if dalpha == 0:
            return None
        a, b = (a_lo, a_hi) if dalpha > 0 else (a_hi, a_lo)
        a_j = None
        if not first:
            cchk = delta1 * dalpha
            a_j = _cubic_min(a_lo, phi_lo, derphi_lo, a_hi, phi_hi, a_rec, phi_rec)
        if first or a_j is None or a_j > b - cchk or a_j < a + cchk:
            qchk = delta2 * dalpha
            a_j = _quad_min(a_lo, phi_lo, derphi_lo, a_hi, phi_hi)
            if a_j is None or a_j > b - qchk or a_j < a + qchk:
                a_j = a_lo + 0.5 * dalpha
        first = False
        budget[0] -= 1
        phi_aj, grad_aj = fun(x + a_j * d)
        if phi_aj > phi0 + c1 * a_j * derphi0 or phi_aj >= phi_lo:
            phi_rec = phi_hi
            a_rec = a_hi
            a_hi = a_j
            phi_hi = phi_aj
        else:
            derphi_aj = float(np.dot(grad_aj, d))
            if abs(derphi_aj) <= -c2 * derphi0:
                return a_j, phi_aj, grad_aj
            if derphi_aj * (a_hi - a_lo) >= 0:
                phi_rec = phi_hi
                a_rec = a_hi
                a_hi = a_lo
                phi_hi = phi_lo
            else:
                phi_rec = phi_lo
                a_rec = a_lo
            a_lo = a_j
            phi_lo = phi_aj
            derphi_lo = derphi_aj
    return None


def _refine_step(fun, x, d, phi0, derphi0, alpha, phi_a, budget, c1, c2):
    """Probe the quadratic-model minimizer past an already acceptable step.

    A step can satisfy both Wolfe conditions while still far from the line
    minimum; one interpolation probe recovers the exact minimizer whenever
    the restriction is close to quadratic. Returns the probed step only if
    it also satisfies both conditions and improves on the accepted value.
    """
    if budget[0] <= 0:
        return None
    a_q = _quad_min(0.0, phi0, derphi0, alpha, phi_a)
    if a_q is None or not 0.0 < a_q <= 10.0 * alpha:
        return None
    if abs(a_q - alpha) <= 1e-9 * alpha:
        return None
    budget[0] -= 1
    phi_q, grad_q = fun(x + a_q * d)
    derphi_q = float(np.dot(grad_q, d))
    if (
        phi_q <= phi0 + c1 * a_q * derphi0
        and abs(derphi_q) <= -c2 * derphi0
        and phi_q < phi_a
    ):
        return a_q, phi_q, grad_q
    return None


def _line_search(fun, x, d, phi0, derphi0, alpha1, c1, c2, max_steps):
    """Bracketing phase of the strong Wolfe search.

    fun maps a point to (value, gradient). Returns (alpha, value, gradient)
    or None when no acceptable step was found within max_steps evaluations.
    """
    budget = [max_steps]
    alpha_prev = 0.0
    phi_prev = phi0
    derphi_prev = derphi0
    alpha = alpha1
    first = True
    while budget[0] > 0:
        budget[0] -= 1
        phi_a, grad_a = fun(x + alpha * d)
        derphi_a = float(np.dot(grad_a, d))
        if phi_a > phi0 + c1 * alpha * derphi0 or (phi_a >= phi_prev and not first):
            return _zoom(
                fun, x, d, phi0, derphi0,
                alpha_prev, phi_prev, derphi_prev, alpha, phi_a,
                budget, c1, c2,
            )
        if abs(derphi_a) <= -c2 * derphi0:
            refined = _refine_step(fun, x, d, phi0, derphi0, alpha, phi_a, budget, c1, c2)
            if refined is not None:
                return refined
            return alpha, phi_a, grad_a
        if derphi_a >= 0:
            return _zoom(
                fun, x, d, phi0, derphi0,
                alpha, phi_a, derphi_a, alpha_prev, phi_prev,
                budget, c1, c2,
            )
        alpha_prev, phi_prev, derphi_prev = alpha, phi_a, derphi_a
        alpha *= 2.0
        first = False
    return None


_CURVATURE_SKIP = 1e-10


def bfgs_maximize(objective, start, config: OptimizerConfig | None = None) -> OptimizationResult:
    """Maximize a smooth function with BFGS.

    Args:
        objective: callable mapping a flat float array to
            (value, gradient), both for the function being maximized.
        start: initial parameter vector.
        config: tolerances and iteration caps.

    Returns:
        OptimizationResult whose final_angles field holds the flat
        parameter array of the best point reached. converged is True only
        when the gradient infinity norm dropped below the tolerance.
    """
    cfg = config or OptimizerConfig()
    calls = [0]

    def neg(z):
        calls[0] += 1
        value, grad = objective(z)
        grad = np.asarray(grad, dtype=np.float64)
        if not np.isfinite(value) or not np.all(np.isfinite(grad)):
            raise NumericalError(f"non-finite objective output at point {z!r}")
        return -float(value), -grad

    x = np.array(start, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("start point must have at least one parameter")
    f, g = neg(x)
    trace = [-f]
    H: np.ndarray | None = None
    converged = False
    iterations = 0
    # seed for the first step-length guess, mirroring a common heuristic
    old_f = f + float(np.linalg.norm(g)) / 2

    for _ in range(cfg.max_iterations):
        if float(np.max(np.abs(g))) < cfg.gradient_tolerance:
            converged = True
            break
        direction = -g if H is None else -(H @ g)
        derphi0 = float(np.dot(g, direction))
        if derphi0 >= 0:
            # numerical loss of positive definiteness: restart from identity
            H = None
            direction = -g
            derphi0 = -float(np.dot(g, g))
            if derphi0 == 0.0:
                converged = True
                break
        alpha1 = 1.0
        if old_f is not None:
            guess = 1.01 * 2 * (f - old_f) / derphi0
            if guess > 0:
                alpha1 = min(1.0, guess)
        found = _line_search(
            neg, x, direction, f, derphi0, alpha1,
            cfg.wolfe_c1, cfg.wolfe_c2, cfg.max_line_search_steps,
        )
        if found is None:
            break
        alpha, f_new, g_new = found
        s = alpha * direction
        y = g_new - g
        iterations += 1
        sy = float(np.dot(s, y))
        if sy > _CURVATURE_SKIP * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            if H is None:
                H = np.eye(x.size) * (sy / float(np.dot(y, y)))
            Hy = H @ y
            rho = 1.0 / sy
            H -= rho * (np.outer(s, Hy) + np.outer(Hy, s))
            H += (rho * rho * float(np.dot(y, Hy)) + rho) * np.outer(s, s)
        old_f = f
        x = x + s
        f = f_new
        g = g_new
        trace.append(-f)

    return OptimizationResult(
        final_angles=x,
        final_value=-f,
        iterations=iterations,
        function_evaluations=calls[0],
        gradient_evaluations=calls[0],
        converged=converged,
        trace=trace,
    )


def optimize_angles(g, start: AngleVector, config: OptimizerConfig | None = None) -> OptimizationResult:
    """Maximize the expected cut of the circuit on graph g over its angles.

    Parameters are unconstrained; periodicity makes any representative
    equivalent. The result's final_angles is an AngleVector with the same
    shape as the start point.
    """
    p = start.p
    m = g.edge_count
    nv = g.n

    def objective(flat):
        return expectation_and_gradient(g, AngleVector.unflatten(flat, p, m, nv))

    result = bfgs_maximize(objective, start.flatten(), config)
    final = AngleVector.unflatten(np.asarray(result.final_angles), p, m, nv)
    return dataclasses.replace(result, final_angles=final)
