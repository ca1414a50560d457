"""
Closure constraint for closed curves in transform space.

A transform q closes when its closure defect f(q) = F^-1(q)(1) vanishes.
The defect is complex, so the closed transforms form a codimension-2
submanifold; projection onto it solves the 2x2 Gram system of the two
gradient fields at every step.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from .errors import NoConvergence, SingularJacobian, SingularTransform
from .models import ClosureDefect, TransformedCurve
from .transform import require_nonvanishing, unwrapped_phase

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e12
MIN_STEP = 2.0 ** -30


def _direction(q: TransformedCurve) -> np.ndarray:
    """(q/|q|)^(2b/a) evaluated on the unwrapped argument"""
    return np.exp(1j * unwrapped_phase(q) / q.elastic.rho)


def closure_defect(q: TransformedCurve) -> complex:
    """
    Endpoint of the reconstructed curve, 1/(4b^2) * integral |q|^2 (q/|q|)^(2b/a).

    Raises:
        SingularTransform: if some sample is zero
    """
    require_nonvanishing(q)
    b = q.elastic.b
    return complex(np.sum(np.abs(q.samples) ** 2 * _direction(q) * q.widths) / (4.0 * b ** 2))


def closure_gradients(q: TransformedCurve) -> Tuple[np.ndarray, np.ndarray]:
    """L2 gradients of Re f and Im f at q, one complex value per segment"""
    require_nonvanishing(q)
    p = q.elastic
    w = _direction(q)
    ratio = p.b / p.a
    scale = 1.0 / (2.0 * p.b ** 2)
    grad_re = scale * (w.real - 1j * ratio * w.imag) * q.samples
    grad_im = scale * (w.imag + 1j * ratio * w.real) * q.samples
    return grad_re, grad_im


def evaluate_closure(q: TransformedCurve) -> ClosureDefect:
    grad_re, grad_im = closure_gradients(q)
    return ClosureDefect(value=closure_defect(q), grad_re=grad_re, grad_im=grad_im)


def real_inner(f: np.ndarray, g: np.ndarray, widths: np.ndarray) -> float:
    """Real L2 inner product of complex fields viewed as plane vector fields"""
    return float(np.sum((f * np.conj(g)).real * widths))


def closure_gram(q: TransformedCurve) -> np.ndarray:
    grad_re, grad_im = closure_gradients(q)
    widths = q.widths
    cross = real_inner(grad_re, grad_im, widths)
    return np.array([[real_inner(grad_re, grad_re, widths), cross],
                     [cross, real_inner(grad_im, grad_im, widths)]])


def rescale(q: TransformedCurve, radius: float) -> TransformedCurve:
    """Scale q to the given L2 norm; closure is preserved under positive scaling"""
    norm = float(np.sqrt(np.sum(np.abs(q.samples) ** 2 * q.widths)))
    return TransformedCurve(q.samples * (radius / norm), q.params, q.elastic, q.initial_phase)


def _safe_defect(q: TransformedCurve) -> Optional[complex]:
    try:
        return closure_defect(q)
    except SingularTransform:
        return None


def project_to_closed(q: TransformedCurve, tol: Optional[float] = None,
                      max_iter: int = 200) -> TransformedCurve:
    """
    Project q onto the closed transforms by damped Newton steps on the constraint.

    Each step solves J delta = -(Re f, Im f) with J the Gram matrix of the two
    gradient fields, moves along delta_re * grad_re + delta_im * grad_im and
    halves the step until |f| decreases.

    Args:
        q: transform to project
        tol: target |f|; defaults to 1e-6 * (2b)^2
        max_iter: Newton step limit

    Raises:
        NoConvergence: if |f| > tol after max_iter steps or no step decreases it;
            the exception carries the best iterate
        SingularJacobian: if the Gram matrix condition number exceeds 1e12
    """
    if tol is None:
        tol = 1e-6 * q.elastic.radius ** 2
    current = q
    residual = abs(closure_defect(current))
    if residual <= tol:
        return q

    for iteration in range(1, max_iter + 1):
        closure = evaluate_closure(current)
        gram = closure_gram(current)
        condition = float(np.linalg.cond(gram))
        if not np.isfinite(condition) or condition > MAX_CONDITION:
            raise SingularJacobian(condition)
        delta = np.linalg.solve(gram, -np.array([closure.value.real, closure.value.imag]))
        direction = delta[0] * closure.grad_re + delta[1] * closure.grad_im

        step = 1.0
        while step >= MIN_STEP:
            candidate = current.with_samples(current.samples + step * direction)
            trial = _safe_defect(candidate)
            if trial is not None and abs(trial) < residual:
                break
            step /= 2.0
        else:
            raise NoConvergence(residual, iteration, best=current)

        current, residual = candidate, abs(trial)
        logger.debug("closure step %d: residual %.3e (step %.3g)", iteration, residual, step)
        if residual <= tol:
            logger.debug("closure projection converged in %d steps", iteration)
            return current

    raise NoConvergence(residual, max_iter, best=current)


def check_membership_V(q: TransformedCurve, ell: int) -> bool:
    """
    Whether q satisfies the endpoint relation of V_{a,b}(ell) at the C^0 level.

    For piecewise-constant data the last value cannot equal the first times
    exp(i (a/b) pi ell) exactly, because the closing corner sits between them.
    The relation is read on the lifted argument instead: some ell' with the
    same multiplier exp(i 2 pi rho ell') must make the closing jump
    phi_1 + 2 pi rho ell' - phi_k an admissible corner, of size at most
    rho pi.
    """
    rho = q.elastic.rho
    phase = unwrapped_phase(q)
    target = np.exp(2j * np.pi * rho * ell)
    limit = rho * np.pi + 1e-9
    nearest = int(np.round((phase[-1] - phase[0]) / (2.0 * np.pi * rho)))
    for candidate in range(nearest - 2, nearest + 3):
        if abs(np.exp(2j * np.pi * rho * candidate) - target) > 1e-9:
            continue
        if abs(phase[0] + 2.0 * np.pi * rho * candidate - phase[-1]) <= limit:
            return True
    return False
