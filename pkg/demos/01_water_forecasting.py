"""Forecasting a short annual series with the model ladder.

The dataset is the yearly volume supplied by non-conventional water sources
(reclaimed, collected, desalinated) bundled with the package: fifteen
observations, of which the first twelve are used for fitting.  We walk the
ladder from the plain exponential model up to cubic forcing, plus the
grey-pipeline counterpart of the best model, and compare holdout accuracy.
"""

import numpy as np

import greymatch as gm
from greymatch import repro

actual = repro.water_full_series()
train = repro.water_series()
years = np.array(repro.WATER_FORECAST_YEARS)

print(f"data: {len(repro.WATER_VALUES)} points, fit window = first "
      f"{repro.WATER_SPLIT} ({repro.WATER_YEARS[0]}..2015)\n")

header = f"{'year':>6}" + "".join(f"{name:>12}" for name in repro.WATER_MODELS)
print(header)
columns = {}
for name in repro.WATER_MODELS:
    _, predictions = repro.fit_water_model(name)
    columns[name] = predictions.values[:, 0]
for row, year in enumerate(years):
    line = f"{year:>6}" + "".join(f"{columns[name][row]:>12.2f}"
                                  for name in repro.WATER_MODELS)
    print(line)

print("\nholdout accuracy (2016-2018):")
for name in repro.WATER_MODELS:
    pred = gm.make_series(np.arange(1.0, 18.0), columns[name])
    report = gm.mape(actual, pred.head(actual.n), repro.WATER_SPLIT)
    print(f"  {name:>10}: mape_in {report.mape_in[0]:5.2f}%  "
          f"mape_out {report.mape_out[0]:5.2f}%")

print("\nclosed form of the winner (degree-1 forcing with constant):")
model, _ = repro.fit_water_model("IMDE3")
poly, exp_coeff = gm.scalar_closed_form(
    model.A[0, 0], [model.c[0], model.B[0, 0]], model.eta[0], t1=1.0)
print(f"  x(t) = {poly[1]:.4f} t + {exp_coeff:.4f} exp({model.A[0, 0]:.5f} t) "
      f"{poly[0]:+.4f}")
