"""The grey pipeline: cusum the raw series, fit the structural parameters of
dy/dt = A y + B u(t) + c by a weighted-trapezoid regression, choose an
initial value, evaluate the time response and restore to the original scale.
"""

from dataclasses import dataclass, field

import numpy as np

from . import basis as _basis
from . import numerics as _numerics
from . import series as _series
from .errors import InsufficientDataError, OverflowGuardError, StrategyError

INITIAL_STRATEGIES = ("fixed_first", "fixed_last", "least_squares", "reduced_consistent")

# Spectral-norm * time-span budget beyond which exp(A t) is refused.
RESPONSE_NORM_BUDGET = 50.0


@dataclass(frozen=True)
class GreyFitConfig:
    """Hyperparameters of the grey fit.

    background_lambda weights the earlier point of each interval in the
    background-value blend; 0.5 is the trapezoid rule used throughout the
    literature.  quadrature_steps_per_unit controls the Simpson rule used
    for non-polynomial forcing.
    """

    background_lambda: float = 0.5
    quadrature_steps_per_unit: int = 50

    def __post_init__(self):
        if not 0.0 <= self.background_lambda <= 1.0:
            raise ValueError("background_lambda must lie in [0, 1]")
        if self.quadrature_steps_per_unit < 1:
            raise ValueError("quadrature_steps_per_unit must be >= 1")


@dataclass(frozen=True)
class GreyModel:
    """Fitted cusum-side model dy/dt = A y + B u + c with initial value eta."""

    A: np.ndarray
    B: np.ndarray
    c: np.ndarray
    eta: np.ndarray
    spec: object
    strategy: str
    config: GreyFitConfig = field(default_factory=GreyFitConfig)
    residual_norm: float = 0.0
    t1: float = 0.0

    @property
    def d(self):
        return self.A.shape[0]


def build_grey_regression(y, forcing, background_lambda=0.5):
    """Design and target matrices of the discretized cusum-side model.

    Rows k = 2..n:  [lam*y(t_{k-1}) + (1-lam)*y(t_k),
                     lam*u(t_{k-1}) + (1-lam)*u(t_k),  1]
    against difference quotients (y(t_k) - y(t_{k-1})) / h_k.
    """
    lam = background_lambda
    yv = y.values
    n, d = yv.shape
    p = forcing.values.shape[1]
    if n - 1 < d + p + 1:
        raise InsufficientDataError(
            f"need at least {d + p + 2} points for d={d}, p={p}; got {n}"
        )
    background = lam * yv[:-1] + (1.0 - lam) * yv[1:]
    blocks = [background]
    if p:
        u = forcing.values
        blocks.append(lam * u[:-1] + (1.0 - lam) * u[1:])
    blocks.append(np.ones((n - 1, 1)))
    design = np.column_stack(blocks)
    h = y.grid.intervals[1:]
    targets = (yv[1:] - yv[:-1]) / h[:, None]
    return design, targets


def fit_grey(raw, spec, config=None, strategy="fixed_first"):
    """Fit the grey model to a raw series (the cusum happens internally)."""
    if strategy not in INITIAL_STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {INITIAL_STRATEGIES}")
    config = config or GreyFitConfig()
    y = _series.cusum(raw)
    sample = _basis.evaluate_forcing(spec, y.grid)
    design, targets = build_grey_regression(y, sample, config.background_lambda)
    solution = _numerics.solve_least_squares(design, targets)
    d = raw.d
    p = spec.dimension
    stacked = solution.coefficients  # rows: A^T | B^T | c^T
    A = stacked[:d].T
    B = stacked[d:d + p].T if p else np.zeros((d, 0))
    c = stacked[d + p]
    eta = select_initial_value(y, A, B, c, spec, strategy, config)
    return GreyModel(A, B, c, eta, spec, strategy, config, solution.residual_norm,
                     t1=float(y.grid.points[0]))


def linear_response(a_matrix, b_matrix, constant, spec, eta, t1, times,
                    steps_per_unit=50):
    """Solution of dz/dt = A z + B u(t) + c, z(t1) = eta, at given times.

    Polynomial forcing goes through the exact augmented-matrix propagator;
    anything else falls back to Simpson quadrature of the
    variation-of-parameters integral.
    """
    times = np.asarray(times, dtype=float)
    span = float(np.max(np.abs(times - t1), initial=0.0))
    norm = float(np.linalg.norm(a_matrix, 2)) if a_matrix.size else 0.0
    if norm * span > RESPONSE_NORM_BUDGET:
        raise OverflowGuardError(
            f"|A| * span = {norm * span:.1f} exceeds the stability budget "
            f"{RESPONSE_NORM_BUDGET}; refusing to exponentiate"
        )
    coeffs = _basis.forcing_polynomial_coefficients(spec, b_matrix, constant)
    if coeffs is not None:
        return _numerics.polynomial_response(a_matrix, coeffs, eta, t1, times)
    u_of = _basis.forcing_callable(spec)
    if constant is None:
        constant = np.zeros(len(eta))

    def g(t):
        return b_matrix @ u_of(t) + constant

    return _numerics.quadrature_response(a_matrix, g, eta, t1, times, steps_per_unit)


def _response_parts(A, B, c, spec, t1, times, steps_per_unit):
    """Split the response into exp(A(t-t1)) blocks and the forced part."""
    d = A.shape[0]
    zero = linear_response(A, B, c, spec, np.zeros(d), t1, times, steps_per_unit)
    propagators = [_numerics.matrix_exponential(A, t - t1) for t in times]
    return propagators, zero


def select_initial_value(y, A, B, c, spec, strategy, config=None):
    """Choose the integration constant eta for the fitted structure.

    fixed_first anchors at the first cusum value, fixed_last at the final
    one, least_squares minimizes the cusum-scale squared error (a linear
    problem since the response is affine in eta), and reduced_consistent
    takes the value implied by the equivalent reduced-order model,
    (I - A)^{-1} (c + B u(t1)).
    """
    config = config or GreyFitConfig()
    t = y.grid.points
    t1 = float(t[0])
    if strategy == "fixed_first":
        return y.values[0].copy()
    if strategy == "reduced_consistent":
        rhs = c + (B @ spec.values(np.array([t1]))[0] if spec.dimension else 0.0)
        eye_minus = np.eye(len(c)) - A
        try:
            return np.linalg.solve(eye_minus, rhs)
        except np.linalg.LinAlgError as exc:
            raise StrategyError("I - A is singular; reduced_consistent "
                                "strategy not applicable") from exc
    if strategy == "fixed_last":
        prop_n, forced = _response_parts(
            A, B, c, spec, t1, np.array([t[-1]]), config.quadrature_steps_per_unit
        )
        back = _numerics.matrix_exponential(A, t1 - t[-1])
        return back @ (y.values[-1] - forced[0])
    if strategy == "least_squares":
        propagators, forced = _response_parts(
            A, B, c, spec, t1, t, config.quadrature_steps_per_unit
        )
        design = np.vstack(propagators)
        target = (y.values - forced).reshape(-1)
        return _numerics.solve_least_squares(design, target).coefficients
    raise ValueError(f"unknown strategy {strategy!r}")


def grey_time_response(model, times):
    """Cusum-scale response of a fitted grey model at the given times."""
    values = linear_response(
        model.A, model.B, model.c, model.spec, model.eta, model.t1,
        np.asarray(times, dtype=float), model.config.quadrature_steps_per_unit,
    )
    return _series.make_series(times, values)


def grey_forecast(raw, spec, config=None, strategy="fixed_first", horizon=0,
                  model=None):
    """Full pipeline: cusum, fit, respond over the extended grid, restore.

    Returns the fitted-plus-forecast series on the original scale, length
    n + horizon.  Pass a pre-fitted `model` to skip refitting.
    """
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if model is None:
        model = fit_grey(raw, spec, config, strategy)
    grid = raw.grid.extended(horizon)
    yhat = grey_time_response(model, grid.points)
    return _series.inverse_cusum(_series.VectorSeries(grid, yhat.values))


def predict_on_grid(model, grid):
    """Original-scale predictions of a grey model on an arbitrary grid."""
    yhat = grey_time_response(model, grid.points)
    return _series.inverse_cusum(_series.VectorSeries(grid, yhat.values))


def model_to_dict(model):
    """JSON-ready dictionary; floats survive the round trip losslessly."""
    return {
        "model": "grey",
        "d": model.d,
        "forcing": _basis.spec_to_config(model.spec),
        "A": model.A.tolist(),
        "B": model.B.tolist(),
        "c": model.c.tolist(),
        "eta": model.eta.tolist(),
        "strategy": model.strategy,
        "lambda": model.config.background_lambda,
        "quadrature_steps_per_unit": model.config.quadrature_steps_per_unit,
        "t1": model.t1,
        "residual_norm": model.residual_norm,
    }


def model_from_dict(payload):
    config = GreyFitConfig(
        background_lambda=payload.get("lambda", 0.5),
        quadrature_steps_per_unit=payload.get("quadrature_steps_per_unit", 50),
    )
    return GreyModel(
        A=np.array(payload["A"], dtype=float),
        B=np.array(payload["B"], dtype=float).reshape(len(payload["A"]), -1),
        c=np.array(payload["c"], dtype=float),
        eta=np.array(payload["eta"], dtype=float),
        spec=_basis.spec_from_config(payload["forcing"]),
        strategy=payload["strategy"],
        config=config,
        residual_norm=payload.get("residual_norm", 0.0),
        t1=payload.get("t1", 0.0),
    )
