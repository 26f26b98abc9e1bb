"""Limited-memory quasi-Newton minimizer with orthant-wise L1 handling.

Minimizes ``f(x) + l1 * ||x||_1`` where only ``f`` is smooth.  The search
direction comes from the standard two-loop recursion over recent (s, y)
pairs; when ``l1 > 0`` the gradient is replaced by the pseudo-gradient and
iterates are projected back onto the orthant chosen at the start of each
line search, which is what makes exactly-zero coordinates reachable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np

#: Armijo sufficient-decrease constant.
_C1 = 1e-4
_MAX_BACKTRACKS = 60


@dataclass
class OptimResult:
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool
    history: list[float]


def _pseudo_gradient(x: np.ndarray, grad: np.ndarray, l1: float) -> np.ndarray:
    if l1 == 0.0:
        return grad
    pseudo = np.where(x > 0, grad + l1, np.where(x < 0, grad - l1, 0.0))
    at_zero = x == 0
    up = grad + l1
    down = grad - l1
    pseudo = np.where(at_zero & (down > 0), down, pseudo)
    pseudo = np.where(at_zero & (up < 0), up, pseudo)
    return pseudo


def _two_loop(
    pseudo: np.ndarray,
    s_list: deque[np.ndarray],
    y_list: deque[np.ndarray],
    rho_list: deque[float],
) -> np.ndarray:
    q = pseudo.copy()
    alphas: list[float] = []
    for s, y, rho in zip(reversed(s_list), reversed(y_list), reversed(rho_list)):
        a = rho * float(s @ q)
        q -= a * y
        alphas.append(a)
    if s_list:
        s, y = s_list[-1], y_list[-1]
        q *= float(s @ y) / float(y @ y)
    for (s, y, rho), a in zip(zip(s_list, y_list, rho_list), reversed(alphas)):
        b = rho * float(y @ q)
        q += (a - b) * s
    return -q


def minimize(
    fun_grad: Callable[[np.ndarray], tuple[float, np.ndarray]],
    x0: np.ndarray,
    l1: float = 0.0,
    max_iterations: int = 200,
    tolerance: float = 1e-5,
    memory: int = 10,
) -> OptimResult:
    """Minimize ``fun_grad`` (smooth value and gradient) plus an L1 term.

    Accepted iterates never increase the penalized objective; convergence is
    declared when the max-norm of the (pseudo-)gradient drops below
    ``tolerance``.  Raises on non-finite objective values.
    """
    x = np.array(x0, dtype=float)
    f, grad = fun_grad(x)
    if not np.isfinite(f) or not np.all(np.isfinite(grad)):
        raise ValueError("objective is not finite at the starting point")
    penalized = f + l1 * float(np.abs(x).sum())
    history = [penalized]
    s_list: deque[np.ndarray] = deque(maxlen=memory)
    y_list: deque[np.ndarray] = deque(maxlen=memory)
    rho_list: deque[float] = deque(maxlen=memory)
    converged = False
    iteration = 0

    for iteration in range(1, max_iterations + 1):
        pseudo = _pseudo_gradient(x, grad, l1)
        if float(np.abs(pseudo).max(initial=0.0)) < tolerance:
            converged = True
            iteration -= 1
            break
        direction = _two_loop(pseudo, s_list, y_list, rho_list)
        if l1 > 0.0:
            # Constrain the direction to the descent orthant of the pseudo-gradient.
            direction = np.where(direction * pseudo < 0, direction, 0.0)
        if float(direction @ pseudo) >= 0.0:
            direction = -pseudo
        orthant = np.where(x != 0, np.sign(x), -np.sign(pseudo))

        if not s_list:
            norm = float(np.linalg.norm(direction))
            alpha = 1.0 / norm if norm > 1.0 else 1.0
        else:
            alpha = 1.0
        accepted = False
        for _ in range(_MAX_BACKTRACKS):
            x_new = x + alpha * direction
            if l1 > 0.0:
                x_new = np.where(x_new * orthant < 0, 0.0, x_new)
            f_new, grad_new = fun_grad(x_new)
            penalized_new = f_new + l1 * float(np.abs(x_new).sum())
            step = float(pseudo @ (x_new - x))
            if (
                np.isfinite(penalized_new)
                and penalized_new <= penalized + _C1 * step
                and penalized_new <= penalized
            ):
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            break

        s = x_new - x
        y = grad_new - grad
        sy = float(s @ y)
        if sy > 1e-10:
            s_list.append(s)
            y_list.append(y)
            rho_list.append(1.0 / sy)
        x, f, grad, penalized = x_new, f_new, grad_new, penalized_new
        history.append(penalized)

    return OptimResult(x=x, fun=penalized, iterations=iteration, converged=converged,
                       history=history)
