# %% [markdown]
# # Purification and phase-conjugate broadcasting
#
# With M <= N the same concentrate-then-distribute circuit purifies: the
# output noise is the input noise divided by N, however many copies are
# produced. Replacing the amplifier by heterodyne detection and coherent
# re-preparation at sqrt(M/N) times the conjugated outcome gives optimal
# phase-conjugate broadcasting.

# %%
from cvbroadcast import conjugate_pipeline, purify_pipeline

# %%
N, nbar = 4, 2.0
for M in range(1, N + 1):
    r = purify_pipeline(N, M, nbar, alpha=0.5j)
    print(f"{N} -> {M}: photons per output {r.nbar_out_per_mode:.6f}, amplitude {r.mean_per_mode}")

# %% [markdown]
# Phase conjugation costs one extra photon before the division by N, again
# independently of M, and the output amplitude is the complex conjugate of
# the input.

# %%
for M in (1, 2, 5, 9):
    r = conjugate_pipeline(2, M, 1.0, alpha=1 + 2j)
    print(f"2 -> {M}: photons {r.nbar_out_per_mode:.6f}, amplitude {r.mean_per_mode}, saturated={r.saturated}")

# %% [markdown]
# The measure-and-prepare stage can also be sampled trajectory by
# trajectory; `mc_z_max` reports the worst z-score of the sampled moments.

# %%
r = conjugate_pipeline(2, 3, 1.0, alpha=1 + 2j, samples=100_000, seed=1)
print(f"sampled photons {r.nbar_out_per_mode:.4f}, max |z| {r.mc_z_max:.2f}")
