# %% [markdown]
# # No entanglement among the broadcast copies
#
# Superbroadcasting moves noise into correlations between the outputs, but
# those correlations are classical: every pair of outputs passes the Simon
# (PPT) separability test. A two-mode squeezed vacuum is the entangled
# control.

# %%
import numpy as np

from cvbroadcast import (
    apply_symplectic,
    broadcast_pipeline,
    conjugate_pipeline,
    pairwise_report,
    ppt_separable,
    two_mode_squeezer,
    vacuum,
)
from cvbroadcast.analysis import partial_transpose_min_eigenvalue
from cvbroadcast.gaussian import reduce

# %%
r = broadcast_pipeline(2, 3, 1.0)
for pair, separable in pairwise_report(r.output):
    pt = partial_transpose_min_eigenvalue(reduce(r.output, list(pair)))
    print(pair, separable, f"PT symplectic min {pt:.4f}")

# %%
tmsv = apply_symplectic(vacuum(2), two_mode_squeezer(np.sqrt(3), np.sqrt(2)))
print("squeezed pair separable:", ppt_separable(tmsv), f"PT min {partial_transpose_min_eigenvalue(tmsv):.4f}")

# %% [markdown]
# A wider scan over the three pipelines.

# %%
total = entangled = 0
for N in range(1, 5):
    for M in range(N + 1, 9):
        for nbar in (0.0, 1.0):
            for out in (broadcast_pipeline(N, M, nbar).output, conjugate_pipeline(N, M, nbar).output):
                for _, sep in pairwise_report(out):
                    total += 1
                    entangled += not sep
print(f"{total} pairs checked, {entangled} entangled")
