# %% [markdown]
# # The joint law of position, occupation time and local time
#
# Sticky Brownian motion behaves like Brownian motion away from 0 but spends
# positive time at 0. At a fixed horizon `t` its position `S_t`, the time
# `Gamma_t` spent in `[0, inf)` and its local time `L_t` at 0 have a law with
# three pieces:
#
# * `survival`: paths from `x0 > 0` that never reached 0 (then `tau = t`, `l = 0`);
# * `zero_atom`: paths sitting at 0 at time `t` (a point mass in `y`);
# * `ac`: everything else, a density in `(y, tau, l)`.

# %%
from stickybm.laws import (StickyParams, atom_masses, bivariate_from_x, bivariate_reflected,
                           position_marginal, trivariate_from_x)

p = StickyParams(theta=1.0, x0=0.5, t=1.0)
for y in (-0.4, 0.0, 0.4):
    print(f"y={y:+.1f}", trivariate_from_x(p, y, tau=0.6, l=0.2))

# %% [markdown]
# Points outside `0 <= l/theta <= tau <= t` are rejected with the broken
# inequality in the message.

# %%
try:
    trivariate_from_x(p, 0.1, tau=0.1, l=0.3)
except ValueError as exc:
    print("rejected:", exc)

# %% [markdown]
# ## Masses of the three pieces
#
# Each mass comes from its own quadrature, so their sum being 1 is a check.

# %%
for x0 in (0.0, 0.5, 2.0):
    m = atom_masses(StickyParams(1.0, x0, 1.0))
    print(f"x0={x0}: survival={m.survival_mass:.8f} atom={m.zero_atom_mass:.8f} "
          f"ac={m.ac_mass:.8f} total={m.total:.10f}")

# %% [markdown]
# ## Forgetting the occupation time
#
# Integrating `tau` out leaves the law of `(S_t, L_t)`. Its continuous part
# depends on `y` only through `|y|`, so folding it onto `y >= 0` doubles it.

# %%
print(bivariate_from_x(p, 0.3, 0.4))
print(bivariate_from_x(p, -0.3, 0.4))
print(bivariate_reflected(p, 0.3, 0.4))

# %% [markdown]
# ## Position alone
#
# With large stickiness the atom vanishes and the Gaussian comes back.

# %%
for theta in (0.5, 1.0, 10.0, 1e6):
    mv = position_marginal(StickyParams(theta, 0.0, 1.0), 0.5)
    print(f"theta={theta:<8g} density at 0.5 = {mv.ac:.6f}  atom at 0 = {mv.atom:.6f}")
