"""Anatomy of the two estimation pipelines on a toy series.

Both pipelines explain the data with the same linear model family
dz/dt = A z + B u(t) + c; they differ in which series they regress on.

* grey: cumulative-sum the data, blend consecutive cusum points with the
  trapezoid weights, least-square the structure, then pick an initial
  value and restore forecasts through the inverse cusum.
* integral matching: trapezoid-integrate the raw data and regress the raw
  values on that integral, estimating the initial value as just another
  regression coefficient.
"""

import numpy as np

import greymatch as gm
from greymatch import grey, matching

rng = np.random.default_rng(7)
t = np.arange(1.0, 13.0)
truth = 5.0 * np.exp(0.12 * t) + 0.8 * t
raw = gm.make_series(t, truth * (1 + 0.01 * rng.normal(size=t.size)))

print("raw series:", np.round(raw.values[:, 0], 2))
y = gm.cusum(raw)
print("cusum     :", np.round(y.values[:, 0], 2))
print("restored  :", np.round(gm.inverse_cusum(y).values[:, 0], 2))

spec = gm.PolynomialForcing(1)

# the two design matrices, side by side
sample = gm.evaluate_forcing(spec, raw.grid)
theta, x_g = grey.build_grey_regression(y, sample, background_lambda=0.5)
omega, x_m = matching.build_matching_regression(raw, sample)
print("\ngrey design row 1     :", np.round(theta[0], 3))
print("matching design row 1 :", np.round(omega[0], 3))

gmodel = gm.fit_grey(raw, spec, strategy="least_squares")
mmodel = gm.fit_matching(raw, spec)
print("\ngrey fit     : a = %.4f, b1 = %.4f, c = %.4f, eta = %.4f"
      % (gmodel.A[0, 0], gmodel.B[0, 0], gmodel.c[0], gmodel.eta[0]))
print("matching fit : a = %.4f, b1 = %.4f, c = %.4f, eta = %.4f"
      % (mmodel.A[0, 0], mmodel.B[0, 0], mmodel.c[0], mmodel.eta[0]))

print("\ninitial-value strategies for the grey fit:")
for strategy in grey.INITIAL_STRATEGIES:
    m = gm.fit_grey(raw, spec, strategy=strategy)
    print(f"  {strategy:>18}: eta = {m.eta[0]:8.4f}")

horizon = 4
gpred = gm.grey_forecast(raw, spec, strategy="least_squares", horizon=horizon)
mpred = gm.matching_forecast(raw, spec, horizon=horizon)
print(f"\n{horizon}-step-ahead forecasts")
print("grey     :", np.round(gpred.values[-horizon:, 0], 2))
print("matching :", np.round(mpred.values[-horizon:, 0], 2))
print("truth    :", np.round(5.0 * np.exp(0.12 * gpred.grid.points[-horizon:])
                             + 0.8 * gpred.grid.points[-horizon:], 2))
