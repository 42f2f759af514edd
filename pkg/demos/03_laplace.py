# %% [markdown]
# # Laplace transforms and the forward check
#
# For Brownian motion and for sticky Brownian motion started at 0 the quantity
#
#     int_0^inf exp(-lam t) E[1{X_t >= y} exp(-beta Gamma_t - gamma L_t)] dt
#
# has a closed form. The sticky version jumps at `y = 0` because of the atom.

# %%
from stickybm.laplace import (DualTriple, bm_transform, forward_transform, j_identities,
                              sbm_jump, sbm_transform, solve_ode_constants)

d = DualTriple(lam=1.0, beta=1.0, gamma=1.0)
for y in (-1.0, -1e-12, 0.0, 1e-12, 1.0):
    print(f"y={y:+.0e}  BM={bm_transform(d, y):.10f}  sticky(theta=1)={sbm_transform(d, 1.0, y):.10f}")
print("jump at 0:", sbm_jump(d, 1.0))

# %% [markdown]
# ## Where the BM formula comes from
#
# For `y < 0` the transform is `u(0)` for the solution of a piecewise linear
# ODE with a kink at 0. Solving the four joint conditions reproduces it.

# %%
c = solve_ode_constants(DualTriple(1.0, 0.5, 0.3), gamma_eff=0.3, y=-0.7)
print("u(0) from ODE   :", c.u0)
print("closed form     :", bm_transform(DualTriple(1.0, 0.5, 0.3), -0.7))
print("slope condition :", 0.5 * (c.du(0.0, "+") - c.du(0.0, "-")) - 0.3 * c.u0)

# %% [markdown]
# The quantities used to pass from BM to sticky BM satisfy one linear relation.

# %%
j = j_identities(d, theta=1.0)
print(j, " residual:", j.J * j.gamma_tilde - (j.J1 - d.beta * j.J2))

# %% [markdown]
# ## Forward check
#
# `forward_transform` integrates the density from the laws module against
# `exp(-lam t - beta tau - gamma l)` numerically. Agreement with the closed
# form ties the two independent derivations together.

# %%
for y in (-1.0, -0.1, 0.1, 1.0):
    f = forward_transform("sbm", d, y, theta=1.0)
    r = sbm_transform(d, 1.0, y)
    print(f"y={y:+.1f} forward={f:.10f} closed={r:.10f} rel.err={abs(f / r - 1):.1e}")
