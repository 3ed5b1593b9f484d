# %% [markdown]
# # The singular series and the count of primes a^2 + p^4
#
# The predicted count is a product of two constants, an Euler product nu and
# an integral J, times x^{3/4}/log x. We compute both with error bounds, then
# compare against exhaustive counts.

# %%
from antlab.constants import compute_J, compute_nu, predicted_main
from antlab.sequences import brute_force_prime_count, prime_census

nu = compute_nu(10**6)
J = compute_J(1e-12)
print(f"nu = {nu.value:.15f} +- {nu.error_bound:.2e}")
print(f"J  = {J.value:.15f} +- {J.error_bound:.2e}")

# %% [markdown]
# The ratio sits near 1.3 over this range and does not yet move towards 1;
# the error term decays like a power of 1/log x, which is slow at x <= 10^8.

# %%
for x in (10**5, 10**6, 10**7, 10**8):
    n = brute_force_prime_count(x)
    m = predicted_main(x, nu.value, J.value)
    print(f"x = {x:>9}  count = {n:>6}  predicted = {m:10.2f}  ratio = {n / m:.4f}")

# %%
c = prime_census(10**6)
print(f"x = 10^6: {c.pairs} representations, {c.distinct} distinct primes")
