# %% [markdown]
# # Brownian kernels
#
# Everything else is built from two functions of time and position: the heat
# kernel `g(t, x)` and the density `h(t, x)` of the first time Brownian motion
# started at `x` reaches 0. This script evaluates both, checks their Laplace
# transforms, and confirms that hitting two levels in a row is the same as
# hitting their sum.

# %%
import math

from stickybm.kernels import (convolve_hitting, gauss_kernel, hitting_density,
                              killed_kernel, laplace_G, laplace_H)

print("g(1, 0)        =", gauss_kernel(1.0, 0.0))
print("h(1, 1)        =", hitting_density(1.0, 1.0))
print("h(-0.3, 2)     =", hitting_density(-0.3, 2.0), "(zero before time 0)")

# %% [markdown]
# The killed kernel is the density of paths from `x` to `y` that avoid 0.

# %%
print("p0_1(1, 1)     =", killed_kernel(1.0, 1.0, 1.0))
print("p0_1(0, 2)     =", killed_kernel(1.0, 0.0, 2.0))

# %% [markdown]
# ## Hitting times add up
#
# To go from `a + b` down to 0, first go down by `b`, then by `a`. The
# convolution below is computed by adaptive quadrature.

# %%
for a, b, t in [(1.0, 1.0, 2.0), (0.5, 1.5, 3.0), (0.05, 2.0, 0.7)]:
    num = convolve_hitting(a, b, t)
    exact = hitting_density(t, a + b)
    print(f"a={a:<4} b={b:<4} t={t:<4} quadrature={num:.12f}  h(t,a+b)={exact:.12f}")

# %% [markdown]
# ## Laplace transforms
#
# `laplace_H(s, x)` is `E_x exp(-s T_0)`.

# %%
s, x = 0.5, 1.0
print("G(0.5, 1) =", laplace_G(s, x), " H(0.5, 1) =", laplace_H(s, x), " e^-1 =", math.exp(-1))
