# %% [markdown]
# # Monte Carlo through a time change
#
# Run Brownian motion `B`, add `L(B)/theta` to its clock, and invert: that is
# sticky Brownian motion. The sampler reads `(S_t, Gamma_t, L_t)` off the
# inverted clock and flags samples stuck at 0.

# %%
import os

import numpy as np

from stickybm import laws
from stickybm.laws import StickyParams
from stickybm.simulate import RngSpec, sample_bm_path, sample_sbm_batch, time_change_to_sbm
from stickybm.stats import atom_fraction, mean_and_se

N = int(os.environ.get("DEMO_N", "20000"))
DT = float(os.environ.get("DEMO_DT", "1e-3"))

path = sample_bm_path(0.0, 1.0, DT, RngSpec(seed=1, stream_id=0))
print("one path:", time_change_to_sbm(path, theta=1.0, t=1.0))

# %% [markdown]
# ## A batch against the quadrature values
#
# Path `i` uses its own random stream, so the batch is the same for any
# thread count.

# %%
p = StickyParams(1.0, 0.0, 1.0)
batch = sample_sbm_batch(p, N, dt=DT, seed=2024)
pa, se = atom_fraction(batch)
ml, sl = mean_and_se(batch.l_t)
mg, sg = mean_and_se(batch.gamma_t)
print(f"P(S_t = 0): MC {pa:.4f} +- {se:.4f}   quadrature {laws.zero_atom_mass(p):.4f}")
print(f"E[L_t]    : MC {ml:.4f} +- {sl:.4f}   quadrature {laws.expected_local_time(p):.4f}")
print(f"E[Gamma_t]: MC {mg:.4f} +- {sg:.4f}   quadrature {laws.expected_occupation(p):.4f}")

# %% [markdown]
# Stuck samples are exactly 0 and nothing else is.

# %%
print("stuck <=> s_t == 0:", bool(np.array_equal(batch.stuck, batch.s_t == 0.0)))
