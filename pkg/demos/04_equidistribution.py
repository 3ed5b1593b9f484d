# %% [markdown]
# # Primes in progressions to large moduli
#
# Barban-Davenport-Halberstam style variance of von Mangoldt convolutions,
# then the bilinear statistic where characters of small conductor are
# removed, and the classical large sieve as a sanity check.

# %%
import math

import numpy as np

from antlab.dirichlet import bdh_statistic, classical_large_sieve_check, prime_weight_sequence, theorem2_statistic
from antlab.sequences import WeightedSequence

for x in (100, 200, 400):
    Q = math.floor(x * x / math.log(x) ** 5)
    c = prime_weight_sequence(x, "lambda")
    res = bdh_statistic(c, c, Q, main="x_squared", x=x)
    print(f"x = {x}  Q = {Q}  bdh / x^4 = {res.aggregate / x**4:.5f}")

# %% [markdown]
# With Q0 >= Q every character is removed and the statistic vanishes.

# %%
rng = np.random.default_rng(0)
g = WeightedSequence(np.arange(1, 151), rng.choice([-1.0, 1.0], 150))
d = WeightedSequence(np.arange(1, 151), rng.choice([-1.0, 1.0], 150))
for Q0 in (1, 5, 20, 40):
    st = theorem2_statistic(g, d, 40, Q0)
    print(f"Q0 = {Q0:2d}  E = {st.aggregate:12.3f}  ratio to bound shape = {st.ratio:.3e}")

# %%
a = WeightedSequence(np.arange(1, 1001), rng.standard_normal(1000) + 1j * rng.standard_normal(1000))
chk = classical_large_sieve_check(a, 40)
print(f"large sieve: lhs / bound = {chk.ratio:.4f}")
