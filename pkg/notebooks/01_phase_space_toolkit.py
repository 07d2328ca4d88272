# %% [markdown]
# # Gaussian phase-space toolkit
#
# States are stored as quadrature means and covariance matrices with vacuum
# variance 1/4 per quadrature. This notebook walks through the basic
# operations: building states, applying symplectic maps and channels,
# tracing out modes, and heterodyne measurement.

# %%
import numpy as np

from cvbroadcast import (
    apply_channel,
    apply_symplectic,
    amplifier_channel,
    displaced_thermal,
    heterodyne_sample,
    mean_photon,
    noise_sum,
    reduce,
    symplectic_eigenvalues,
    tensor,
    two_mode_squeezer,
    vacuum,
)

np.set_printoptions(precision=4, suppress=True)

# %% [markdown]
# A displaced thermal state with two thermal photons and amplitude 1+i.
# Its photon number is the thermal part plus |alpha|^2.

# %%
s = displaced_thermal(2.0, 1 + 1j)
print("mean", s.mean)
print("cov\n", s.cov)
print("photons", mean_photon(s, 0), " noise sum", noise_sum(s, 0))

# %% [markdown]
# ## Two-mode squeezing and the amplifier
#
# Squeezing vacuum with mu^2 = 3, nu^2 = 2 gives a pure two-mode state whose
# halves are thermal with two photons each.

# %%
tmsv = apply_symplectic(vacuum(2), two_mode_squeezer(np.sqrt(3), np.sqrt(2)))
print("symplectic eigenvalues", symplectic_eigenvalues(tmsv.cov))
print("local photons", mean_photon(tmsv, 0), mean_photon(tmsv, 1))

# %% [markdown]
# Tracing out the ancilla of a squeezer with mu = sqrt(G) is exactly the
# phase-insensitive amplifier with gain G.

# %%
G = 2.5
inp = displaced_thermal(0.5, 0.3 - 0.7j)
via_squeezer = reduce(
    apply_symplectic(tensor(inp, vacuum(1)), two_mode_squeezer(np.sqrt(G), np.sqrt(G - 1))), [0]
)
direct = apply_channel(inp, amplifier_channel(G))
print("max difference", np.max(np.abs(via_squeezer.cov - direct.cov)))

# %% [markdown]
# ## Heterodyne conditioning
#
# Heterodyning one half of the squeezed pair leaves the other half in a
# coherent state centred on a value proportional to the outcome.

# %%
out = heterodyne_sample(tmsv, 1, np.random.default_rng(1))
print("outcome", out.value)
print("conditioned mean", out.conditioned.mean)
print("conditioned cov\n", out.conditioned.cov)
