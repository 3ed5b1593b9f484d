# %% [markdown]
# # Buchstab decomposition of the sifted sum
#
# The count of primes in a sequence is split into S1 - S2 - S3 - tail by
# the smallest prime factor, and S2 is peeled further into T, U and V
# terms. Every identity holds exactly, so the residuals sit at rounding level.

# %%
from antlab.sequences import SieveParams, build_sequence
from antlab.sieve import buchstab_terms

params = SieveParams.standard(10**6)
print(f"delta = {params.delta:.4f}  Y = {params.Y:.1f}  n0 = {params.n0}")

for kind in ("A", "B"):
    rep = buchstab_terms(build_sequence(kind, params), params)
    print(kind, f"S1={rep.S1:.3f} S2={rep.S2:.3f} S3={rep.S3:.3f} tail={rep.tail:.3f} pi={rep.pi:.3f}")
    print("   residuals:", {k: f"{v:.1e}" for k, v in rep.residuals.items()})

# %% [markdown]
# The interesting quantity is the A - B difference term by term, which is
# what the command `antlab buchstab --compare` tabulates.
