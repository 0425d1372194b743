"""Forcing-term specifications u(t) with exact antiderivatives.

A forcing spec describes the known input entering a linear model
dz/dt = A z + B u(t) + c.  Polynomial and Fourier bases carry analytic
antiderivatives and derivatives; exogenous forcing is a sampled series whose
antiderivative is formed with the trapezoid rule.  The constant term is not
a basis component: the grey pipeline always carries it separately and the
matching pipeline attaches it explicitly.
"""

from dataclasses import dataclass
from math import pi

import numpy as np

from .errors import AlignmentError, UnsupportedForcingError
from .series import TimeGrid, VectorSeries, integrate_piecewise_linear


@dataclass(frozen=True)
class ForcingSample:
    """Basis values u(t_k) and antiderivatives U(t_k) on a grid."""

    values: np.ndarray
    antiderivatives: np.ndarray


@dataclass(frozen=True)
class ZeroForcing:
    """No forcing input (autonomous model)."""

    @property
    def dimension(self):
        return 0

    def values(self, times):
        return np.zeros((len(np.atleast_1d(times)), 0))

    def antiderivatives(self, times):
        return np.zeros((len(np.atleast_1d(times)), 0))

    def derivatives(self, times):
        return np.zeros((len(np.atleast_1d(times)), 0))

    def monomial_matrix(self):
        return np.zeros((0, 0))


@dataclass(frozen=True)
class PolynomialForcing:
    """Monomial basis u_i(t) = t^i for i = 1..degree (constant excluded)."""

    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("polynomial degree must be >= 1; the constant "
                             "term is carried separately")

    @property
    def dimension(self):
        return self.degree

    def values(self, times):
        t = np.atleast_1d(np.asarray(times, dtype=float))
        return np.column_stack([t ** i for i in range(1, self.degree + 1)])

    def antiderivatives(self, times):
        t = np.atleast_1d(np.asarray(times, dtype=float))
        return np.column_stack(
            [t ** (i + 1) / (i + 1) for i in range(1, self.degree + 1)]
        )

    def derivatives(self, times):
        t = np.atleast_1d(np.asarray(times, dtype=float))
        return np.column_stack(
            [i * t ** (i - 1) for i in range(1, self.degree + 1)]
        )

    def monomial_matrix(self):
        mono = np.zeros((self.degree, self.degree + 1))
        for i in range(1, self.degree + 1):
            mono[i - 1, i] = 1.0
        return mono


@dataclass(frozen=True)
class FourierForcing:
    """Interleaved pairs u_{2i-1} = sin(2 i pi f t), u_{2i} = cos(2 i pi f t)."""

    pairs: int
    frequency: float

    def __post_init__(self):
        if self.pairs < 1:
            raise ValueError("fourier forcing needs at least one pair")
        if self.frequency <= 0:
            raise ValueError("fourier frequency must be positive")

    @property
    def dimension(self):
        return 2 * self.pairs

    def _omegas(self):
        return [2.0 * i * pi * self.frequency for i in range(1, self.pairs + 1)]

    def values(self, times):
        t = np.atleast_1d(np.asarray(times, dtype=float))
        cols = []
        for w in self._omegas():
            cols.append(np.sin(w * t))
            cols.append(np.cos(w * t))
        return np.column_stack(cols)

    def antiderivatives(self, times):
        t = np.atleast_1d(np.asarray(times, dtype=float))
        cols = []
        for w in self._omegas():
            cols.append(-np.cos(w * t) / w)
            cols.append(np.sin(w * t) / w)
        return np.column_stack(cols)

    def derivatives(self, times):
        t = np.atleast_1d(np.asarray(times, dtype=float))
        cols = []
        for w in self._omegas():
            cols.append(w * np.cos(w * t))
            cols.append(-w * np.sin(w * t))
        return np.column_stack(cols)

    def monomial_matrix(self):
        return None


@dataclass(frozen=True)
class ExogenousForcing:
    """Forcing sampled from an observed series; values between samples are
    linearly interpolated when a continuous evaluation is required."""

    series: VectorSeries

    @property
    def dimension(self):
        return self.series.d

    def _align(self, times):
        t = np.atleast_1d(np.asarray(times, dtype=float))
        own = self.series.grid.points
        idx = np.searchsorted(own, t)
        missing = (idx >= len(own)) | ~np.isclose(
            own[np.minimum(idx, len(own) - 1)], t, rtol=1e-9, atol=1e-12
        )
        if missing.any():
            raise AlignmentError(
                f"exogenous series has no sample at t={t[missing][0]!r}"
            )
        return np.minimum(idx, len(own) - 1)

    def values(self, times):
        return self.series.values[self._align(times)]

    def antiderivatives(self, times):
        t = np.atleast_1d(np.asarray(times, dtype=float))
        sampled = VectorSeries(TimeGrid(t), self.values(t))
        return integrate_piecewise_linear(sampled).values

    def derivatives(self, times):
        raise UnsupportedForcingError(
            "exogenous forcing has no analytic derivative; only the grey "
            "pipeline applies"
        )

    def monomial_matrix(self):
        return None


@dataclass(frozen=True)
class MixedForcing:
    """Concatenation of several forcing specs."""

    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("mixed forcing needs at least one part")

    @property
    def dimension(self):
        return sum(p.dimension for p in self.parts)

    def values(self, times):
        return np.column_stack([p.values(times) for p in self.parts])

    def antiderivatives(self, times):
        return np.column_stack([p.antiderivatives(times) for p in self.parts])

    def derivatives(self, times):
        return np.column_stack([p.derivatives(times) for p in self.parts])

    def monomial_matrix(self):
        blocks = [p.monomial_matrix() for p in self.parts]
        if any(b is None for b in blocks):
            return None
        width = max((b.shape[1] for b in blocks), default=0)
        mono = np.zeros((self.dimension, width))
        row = 0
        for b in blocks:
            mono[row:row + b.shape[0], :b.shape[1]] = b
            row += b.shape[0]
        return mono


def evaluate_forcing(spec, grid):
    """Sample basis values and antiderivatives on a time grid."""
    t = grid.points
    return ForcingSample(spec.values(t), spec.antiderivatives(t))


def forcing_derivative(spec, grid):
    """Sample du/dt on a grid (analytic specs only)."""
    return spec.derivatives(grid.points)


def forcing_callable(spec):
    """Continuous evaluation t -> u(t) for quadrature.

    Exogenous components are linearly interpolated inside their sample range.
    """
    if isinstance(spec, ExogenousForcing):
        own_t = spec.series.grid.points
        own_v = spec.series.values

        def interp(t):
            if t < own_t[0] - 1e-12 or t > own_t[-1] + 1e-12:
                raise AlignmentError(
                    f"t={t} outside exogenous sample range "
                    f"[{own_t[0]}, {own_t[-1]}]"
                )
            return np.array(
                [np.interp(t, own_t, own_v[:, j]) for j in range(own_v.shape[1])]
            )

        return interp
    if isinstance(spec, MixedForcing):
        calls = [forcing_callable(p) for p in spec.parts]

        def combined(t):
            return np.concatenate([c(t) for c in calls])

        return combined
    return lambda t: spec.values(np.array([t]))[0]


def forcing_polynomial_coefficients(spec, b_matrix, constant):
    """Monomial coefficients of g(t) = B u(t) + c, or None when u is not
    polynomial.  Shape (d, q+1); shape (d, 0) for the homogeneous case."""
    mono = spec.monomial_matrix()
    if mono is None:
        return None
    if constant is not None:
        d = len(constant)
    elif b_matrix is not None and b_matrix.size:
        d = b_matrix.shape[0]
    else:
        return np.zeros((0, 0))
    width = mono.shape[1]
    if constant is not None:
        width = max(width, 1)
    coeffs = np.zeros((d, width))
    if mono.shape[0]:
        coeffs[:, :mono.shape[1]] += b_matrix @ mono
    if constant is not None:
        coeffs[:, 0] += constant
    return coeffs


def derivative_monomial_matrix(spec):
    """Monomial coefficients of du/dt, or None for non-polynomial specs."""
    mono = spec.monomial_matrix()
    if mono is None:
        return None
    if mono.shape[1] <= 1:
        return np.zeros((mono.shape[0], max(mono.shape[1] - 1, 1) if mono.shape[0] else 0))
    powers = np.arange(1, mono.shape[1])
    return mono[:, 1:] * powers


def spec_to_config(spec):
    """JSON-serializable description of a forcing spec."""
    if isinstance(spec, ZeroForcing):
        return {"kind": "zero"}
    if isinstance(spec, PolynomialForcing):
        return {"kind": "polynomial", "degree": spec.degree}
    if isinstance(spec, FourierForcing):
        return {"kind": "fourier", "pairs": spec.pairs, "frequency": spec.frequency}
    if isinstance(spec, ExogenousForcing):
        return {
            "kind": "exogenous",
            "times": spec.series.grid.points.tolist(),
            "values": spec.series.values.tolist(),
        }
    if isinstance(spec, MixedForcing):
        return {"kind": "mixed", "parts": [spec_to_config(p) for p in spec.parts]}
    raise TypeError(f"unknown forcing spec {spec!r}")


def spec_from_config(config):
    """Inverse of spec_to_config."""
    kind = config.get("kind")
    if kind == "zero":
        return ZeroForcing()
    if kind == "polynomial":
        return PolynomialForcing(int(config["degree"]))
    if kind == "fourier":
        return FourierForcing(int(config["pairs"]), float(config["frequency"]))
    if kind == "exogenous":
        from .series import make_series

        return ExogenousForcing(
            make_series(np.array(config["times"]), np.array(config["values"]))
        )
    if kind == "mixed":
        return MixedForcing(tuple(spec_from_config(p) for p in config["parts"]))
    raise ValueError(f"unknown forcing kind {kind!r}")
