# %% [markdown]
# # Superbroadcasting
#
# N copies of a displaced thermal state are concentrated into one mode,
# amplified with gain M/N, and spread over M modes. When the inputs are
# noisy enough, every output carries *fewer* thermal photons than each
# input did.

# %%
import math

from cvbroadcast import broadcast_pipeline, noise_bound, superbroadcast_threshold

# %% [markdown]
# The 2 -> 3 case with one thermal photon per input.

# %%
r = broadcast_pipeline(2, 3, 1.0, alpha=1.0)
print(f"nbar' after amplification : {r.nbar_prime:.6f}")
print(f"output photons per mode    : {r.nbar_out_per_mode:.6f}")
print(f"output amplitude per mode  : {r.mean_per_mode}")
print(f"noise bound / achieved     : {r.bound:.6f} / {r.noise_sums[0]:.6f}  saturated={r.saturated}")

# %% [markdown]
# ## Where superbroadcasting starts
#
# Output photons fall below the input value once the input exceeds the
# threshold (M - N) / (M (N - 1)).

# %%
print(" N  M   threshold  nbar_in  nbar_out")
for N, M in [(2, 3), (2, 10), (3, 4), (3, 30), (5, 6)]:
    t = superbroadcast_threshold(N, M)
    for nbar in (0.5 * t, t, 2 * t):
        out = broadcast_pipeline(N, M, nbar).nbar_out_per_mode
        print(f"{N:2d} {M:2d}  {t:9.5f}  {nbar:7.4f}  {out:8.5f}")

# %% [markdown]
# In the limit of infinitely many outputs the threshold tends to 1/(N - 1),
# still finite.

# %%
for N in (2, 3, 4):
    print(N, superbroadcast_threshold(N, math.inf), superbroadcast_threshold(N, 10_000))

# %% [markdown]
# The coherent corner case reproduces optimal 1 -> 2 cloning of coherent
# states: half a thermal photon per clone.

# %%
print(broadcast_pipeline(1, 2, 0.0).nbar_out_per_mode, noise_bound("broadcast", 1, 2, 0.5) - 0.5)
