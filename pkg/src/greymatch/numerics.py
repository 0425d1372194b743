"""Dense small-matrix utilities: least squares, matrix exponentials and the
convolution integrals that appear in linear time response functions.

Everything here works on plain numpy arrays.  Matrices are small (the rest
of the package uses d <= 2 state dimensions and a handful of forcing
columns), so clarity wins over cleverness throughout.
"""

from dataclasses import dataclass
from math import ceil, factorial

import numpy as np
from scipy.linalg import expm

from .errors import SingularDesignError

# Numerical rank threshold, relative to the largest singular value.
RANK_TOLERANCE = 1e-10


@dataclass(frozen=True)
class LeastSquaresSolution:
    """Minimizer of ||targets - design @ coefficients||_F."""

    coefficients: np.ndarray
    residual_norm: float
    condition_estimate: float


def solve_least_squares(design, targets):
    """Solve an overdetermined linear system in the least-squares sense.

    Uses an orthogonal (SVD) factorization rather than forming the normal
    equations, which matters because cumulative-sum regressors tend to be
    strongly collinear.

    Raises SingularDesignError when the numerical rank of the design falls
    below its column count at a relative tolerance of 1e-10.
    """
    design = np.atleast_2d(np.asarray(design, dtype=float))
    targets = np.asarray(targets, dtype=float)
    flat_target = targets.ndim == 1
    if flat_target:
        targets = targets[:, None]
    rows, cols = design.shape
    if rows < cols:
        raise SingularDesignError(
            f"design has {rows} rows but {cols} columns; system is underdetermined"
        )
    if targets.shape[0] != rows:
        raise ValueError(
            f"targets have {targets.shape[0]} rows, design has {rows}"
        )
    if not (np.isfinite(design).all() and np.isfinite(targets).all()):
        raise ValueError("design and targets must be finite")

    coeffs, _, _, singular_values = np.linalg.lstsq(design, targets, rcond=None)
    smax = singular_values[0] if len(singular_values) else 0.0
    rank = int(np.sum(singular_values > RANK_TOLERANCE * smax)) if smax > 0 else 0
    if rank < cols:
        raise SingularDesignError(
            f"design is rank-deficient: {cols - rank} of {cols} columns redundant"
        )
    residual = float(np.linalg.norm(targets - design @ coeffs))
    condition = float(singular_values[0] / singular_values[-1])
    if flat_target:
        coeffs = coeffs[:, 0]
    return LeastSquaresSolution(coeffs, residual, condition)


def matrix_exponential(matrix, scale=1.0):
    """exp(scale * matrix) via scaling-and-squaring (Pade approximant)."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"matrix exponential needs a square matrix, got {matrix.shape}")
    return expm(scale * matrix)


def convolution_integral(a_matrix, forcing, t_from, t_to, steps):
    """Composite-Simpson approximation of

        int_{t_from}^{t_to} exp(A (t_from - s)) f(s) ds

    over 2*steps panels.  `forcing` is a callable mapping a time to a
    d-vector.  Fourth-order accurate in the panel width.
    """
    a_matrix = np.asarray(a_matrix, dtype=float)
    if a_matrix.ndim != 2 or a_matrix.shape[0] != a_matrix.shape[1]:
        raise ValueError("A must be square")
    if t_to < t_from:
        raise ValueError("t_to must be >= t_from")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    d = a_matrix.shape[0]
    if t_to == t_from:
        return np.zeros(d)

    panels = 2 * int(steps)
    nodes = np.linspace(t_from, t_to, panels + 1)
    delta = (t_to - t_from) / panels
    # exp(A (t_from - s_j)) = P^j with P = exp(-A delta); iterate powers.
    step_kernel = expm(-a_matrix * delta)
    kernel = np.eye(d)
    weighted = np.zeros(d)
    for j, s in enumerate(nodes):
        w = 1.0 if j in (0, panels) else (4.0 if j % 2 else 2.0)
        weighted += w * (kernel @ np.asarray(forcing(float(s)), dtype=float))
        kernel = kernel @ step_kernel
    return weighted * delta / 3.0


def _monomial_state(t, count):
    """Vector (1, t, t^2/2!, ..., t^(count-1)/(count-1)!)."""
    return np.array([t ** j / factorial(j) for j in range(count)])


def _augmented_generator(a_matrix, coefficients):
    """Block generator [[A, C], [0, N]] whose exponential propagates the
    state jointly with the monomial basis of the polynomial forcing."""
    d, width = coefficients.shape
    scaled = coefficients * np.array([factorial(j) for j in range(width)])
    shift = np.zeros((width, width))
    for j in range(width - 1):
        shift[j + 1, j] = 1.0
    gen = np.zeros((d + width, d + width))
    gen[:d, :d] = a_matrix
    gen[:d, d:] = scaled
    gen[d:, d:] = shift
    return gen


def polynomial_response(a_matrix, coefficients, eta, t1, times):
    """Exact solution of z' = A z + g(t), z(t1) = eta, for polynomial g.

    `coefficients` has shape (d, q+1) with g(t) = sum_j coefficients[:, j] t^j
    (pass shape (d, 0) for the homogeneous equation).  Evaluation goes
    through the exponential of an augmented block matrix, so no quadrature
    error enters.  Returns an array of shape (len(times), d).
    """
    a_matrix = np.asarray(a_matrix, dtype=float)
    coefficients = np.asarray(coefficients, dtype=float)
    eta = np.asarray(eta, dtype=float)
    times = np.asarray(times, dtype=float)
    d = a_matrix.shape[0]
    out = np.empty((len(times), d))

    if coefficients.shape[1] == 0:
        state0 = eta
        gen = a_matrix
        basis = np.array([])
    else:
        gen = _augmented_generator(a_matrix, coefficients)
        basis = _monomial_state(t1, coefficients.shape[1])
        state0 = np.concatenate([eta, basis])

    diffs = np.diff(times)
    uniform = len(times) > 2 and diffs.size > 0 and np.allclose(
        diffs, diffs[0], rtol=1e-12, atol=1e-14
    )
    if uniform:
        # March with a single per-step exponential; exact up to round-off.
        step = expm(gen * diffs[0])
        state = expm(gen * (times[0] - t1)) @ state0
        for k in range(len(times)):
            out[k] = state[:d]
            state = step @ state
    else:
        for k, t in enumerate(times):
            out[k] = (expm(gen * (t - t1)) @ state0)[:d]
    return out


def quadrature_response(a_matrix, forcing, eta, t1, times, steps_per_unit=50):
    """Solve z' = A z + g(t), z(t1) = eta, by Simpson quadrature of the
    variation-of-parameters integral.  `forcing` maps a time to a d-vector.
    """
    a_matrix = np.asarray(a_matrix, dtype=float)
    eta = np.asarray(eta, dtype=float)
    out = np.empty((len(times), len(eta)))
    for k, t in enumerate(times):
        span = t - t1
        if span == 0.0:
            out[k] = eta
            continue
        steps = max(1, ceil(steps_per_unit * abs(span)))
        integral = convolution_integral(a_matrix, forcing, t1, t, steps)
        out[k] = expm(a_matrix * span) @ (eta + integral)
    return out
