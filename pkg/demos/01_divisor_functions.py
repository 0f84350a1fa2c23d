# %% [markdown]
# # Five divisor functions
#
# sigma, the unitary sum sigma*, the exponential sum sigma_e, and the two
# counting functions d and d_e, all from one factorization.

# %%
from ubv import arith
from ubv.arith import DivisorFunctionKind

f = arith.factorize(12)
print(f, {k.value: k(f) for k in DivisorFunctionKind})

# %%
# brute force agrees with the closed forms
print({k.value: v for k, v in arith.brute_force_values(12).items()})

# %%
# integers too big to factor are passed as text
big = arith.parse_factorization("2^49 * 4363953127297")
print(big.value, arith.sigma_star(big) == arith.sigma_exp(big), arith.d(big))

# %%
# sigma* beats sigma_e on squarefree n, loses on n = p^a with a >= 2
for n in (30, 8, 72):
    g = arith.factorize(n)
    print(n, g.is_squarefree, arith.sigma_star(g), arith.sigma_exp(g))
