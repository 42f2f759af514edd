# %% [markdown]
# # Verification suites
#
# The `verify` module bundles every cross-check into suites that return
# reports. The same suites back the `stickybm verify` command.

# %%
from stickybm import verify
from stickybm.stats import manifest

reports = []
for name in ("identities", "kernels", "ode"):
    reports += verify.SUITES[name]()
reports += verify.suite_laplace_forward(values=(1.0,))
for r in reports:
    print(r.line())

# %% [markdown]
# A manifest collects them in a machine-readable form.

# %%
m = manifest(reports)
print("all passed:", m["passed"], "of", m["n_reports"])
