"""
Decomposing the classical R-squared of a linear model
=====================================================

The starting point of Shapley-based variable importance: in a linear
model, the R-squared of every regressor subset defines a cooperative
game, and each regressor's Shapley value is its fair share of the full
model's R-squared.
"""

import numpy as np

from glmshapley import Dataset, shapley_exact

# three regressors with deliberately unequal signal and some correlation
rng = np.random.default_rng(0)
n = 500
x1 = rng.normal(size=n)
x2 = 0.6 * x1 + 0.8 * rng.normal(size=n)   # overlaps with x1
x3 = rng.normal(size=n)
y = 1.0 + 1.2 * x1 + 0.5 * x2 + 0.2 * x3 + rng.normal(size=n)

ds = Dataset.from_arrays(y, np.column_stack([x1, x2, x3]),
                         column_names=("x1", "x2", "x3"))

# the gaussian family with unit dispersion makes the deviance-ratio measure
# equal the classical R-squared exactly
result, cache = shapley_exact(ds, "gaussian", measure="kl-r2")

print("full-model R^2:", round(result.v_grand, 4))
print()
print("player   shapley   share of R^2")
for name, phi, share in zip(result.players, result.phi, result.imp_fm):
    print(f"{name:>6}   {phi:7.4f}   {share:7.1%}")

# the shares add up to one, and the values to the full R^2 (efficiency)
print()
print("sum of shapley values:", round(float(result.phi.sum()), 10))

# x1 and x2 share signal; averaging over all orderings splits the overlap
# between them instead of crediting whichever enters a regression first
single_x1 = 1.0 - cache.stats(0b001).deviance / result.constants.null_deviance
print()
print("R^2 of x1 alone:", round(single_x1, 4),
      "  vs its shapley value:", round(float(result.phi[0]), 4))
