# %% [markdown]
# # When sigma* equals sigma_e
#
# Equality is rare. The proportion of n with sigma* > sigma_e settles near
# 0.7783.

# %%
from ubv import scanner

for w in scanner.equality_search(1, 10**6):
    print(w.n, w.factorization, w.common_value)

# %%
for text in ("680890228200", "2^49 * 4363953127297"):
    print(scanner.verify_witness(text).factorization)

# %%
for hi in (10**4, 10**5, 10**6):
    res = scanner.density_sigma_star_gt(hi)
    print(hi, res.count, res.proportion)

# %%
print(scanner.load_fixture("density_1e9.json"))
